#include "polarlab/fast_prune.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace polarlab {

SortedParents tta(const std::vector<double>& metrics, int rt_index) {
  const int p = static_cast<int>(metrics.size());
  if (p < 1) throw std::invalid_argument("threshold tracking needs at least one metric");
  SortedParents sp;
  sp.order.resize(p);
  std::iota(sp.order.begin(), sp.order.end(), 0);
  std::sort(sp.order.begin(), sp.order.end(), [&](int a, int b) {
    if (metrics[a] != metrics[b]) return metrics[a] < metrics[b];
    return a < b;
  });
  sp.metrics.resize(p);
  for (int r = 0; r < p; ++r) sp.metrics[r] = metrics[sp.order[r]];
  const int rt_eff = rt_index < 0 ? p - 1 : std::min(rt_index, p - 1);
  sp.thresholds.at = sp.metrics[p / 2];
  sp.thresholds.rt = sp.metrics[rt_eff];
  sp.thresholds.rt_index = rt_eff;
  return sp;
}

std::vector<PathCandidate> dts_prune(const std::vector<double>& pme,
                                     const std::vector<double>& pmo,
                                     const Thresholds& th, int keep, Rng& rng) {
  if (pme.size() != pmo.size()) throw std::invalid_argument("child metric lists differ in size");
  const int p = static_cast<int>(pme.size());
  std::vector<PathCandidate> out;
  out.reserve(keep);
  std::vector<PathCandidate> band;
  for (int i = 0; i < p; ++i) {
    const PathCandidate even{pme[i], i, 0};
    const PathCandidate odd{pmo[i], i, 1};
    for (const PathCandidate& c : {even, odd}) {
      if (c.metric < th.at) {
        out.push_back(c);
      } else if (!(c.metric > th.rt)) {
        band.push_back(c);
      }
    }
  }
  while (static_cast<int>(out.size()) < keep && !band.empty()) {
    const std::size_t pick = rng.below(band.size());
    out.push_back(band[pick]);
    band.erase(band.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  if (static_cast<int>(out.size()) > keep) out.resize(keep);  // unreachable: children
  // below the acceptance threshold never outnumber the parents (see the bound
  // checker below); kept as a hard cap for arbitrary caller-supplied metrics
  return out;
}

std::vector<AdvancePick> dts_advance_prune(const std::vector<double>& pme,
                                           const std::vector<double>& pmo,
                                           const Thresholds& th) {
  if (pme.size() != pmo.size()) throw std::invalid_argument("child metric lists differ in size");
  const int p = static_cast<int>(pme.size());
  const int half = p / 2;
  std::vector<AdvancePick> out;
  out.reserve(p);
  for (int pos = 0; pos < half; ++pos) out.push_back({pos, false});
  std::vector<int> qualifying;
  for (int pos = 0; pos < p; ++pos)
    if (!(pmo[pos] > th.rt)) qualifying.push_back(pos);
  const int k = std::min(static_cast<int>(qualifying.size()), p - half);
  for (int pos = half; pos < p - k; ++pos) out.push_back({pos, false});
  for (int j = 0; j < k; ++j) out.push_back({qualifying[j], true});
  return out;
}

int prune_bound_violations(const std::vector<double>& parents_sorted,
                           const std::vector<double>& children) {
  int violations = 0;
  for (std::size_t l = 0; l < parents_sorted.size(); ++l) {
    const double g = parents_sorted[l];
    // parents strictly below gamma_l; equals l when all metrics are distinct
    const long lp = std::lower_bound(parents_sorted.begin(), parents_sorted.end(), g) -
                    parents_sorted.begin();
    long below = 0;
    for (double c : children)
      if (c < g) ++below;
    if (below < lp || below > 2 * lp) ++violations;
  }
  return violations;
}

SeExtension se_extend(double metric, double lambda, KernelMode kernel) {
  SeExtension e;
  e.bit = hard_decision(lambda);
  e.metric = kernel == KernelMode::kExact ? pmu_exact(metric, lambda, e.bit) : metric;
  return e;
}

FusedPair fused_pmu_frozen_info(double metric, double l0, double l1) {
  FusedPair out;
  out.metric = hard_decision(l0) != hard_decision(l1)
                   ? metric + std::min(std::fabs(l0), std::fabs(l1))
                   : metric;
  out.u0 = 0;
  out.u1 = hard_decision(l0 + l1);
  return out;
}

double fused_pmu_frozen_frozen(double metric, double l0, double l1) {
  if (hard_decision(l0)) metric += std::fabs(l0);
  if (hard_decision(l1)) metric += std::fabs(l1);
  return metric;
}

}  // namespace polarlab
