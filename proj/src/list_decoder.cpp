#include "polarlab/list_decoder.hpp"

#include <algorithm>
#include <stdexcept>

#include "polarlab/fast_prune.hpp"
#include "polarlab/rng.hpp"

namespace polarlab {

namespace {

int bit_at(const std::vector<std::uint64_t>& words, int i) {
  return static_cast<int>((words[i >> 6] >> (i & 63)) & 1u);
}

void set_bit(std::vector<std::uint64_t>& words, int i, int b) {
  if (b) words[i >> 6] |= std::uint64_t{1} << (i & 63);
}

// lexicographic order on the unpacked bit sequence (bit 0 first)
bool lex_less(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  for (std::size_t w = 0; w < a.size(); ++w) {
    if (a[w] == b[w]) continue;
    const std::uint64_t low = (a[w] ^ b[w]) & -(a[w] ^ b[w]);
    return (a[w] & low) == 0;
  }
  return false;
}

}  // namespace

std::vector<PathCandidate> lpo_exact(std::vector<PathCandidate> cands, int keep) {
  std::sort(cands.begin(), cands.end(), [](const PathCandidate& a, const PathCandidate& b) {
    if (a.metric != b.metric) return a.metric < b.metric;
    if (a.mismatch != b.mismatch) return a.mismatch < b.mismatch;
    return a.parent < b.parent;
  });
  if (static_cast<int>(cands.size()) > keep) cands.resize(keep);
  return cands;
}

ListDecoder::ListDecoder(const CodeSpec& spec, const ListConfig& cfg)
    : spec_(spec), cfg_(cfg), n_(spec.stages()), masks_(psum_masks(spec.block_length)) {
  spec_.validate();
  const int l = cfg_.list_size;
  if (l < 1 || (l & (l - 1)) != 0)
    throw std::invalid_argument("list size must be a power of two >= 1");
  if (cfg_.pruner != PrunerKind::kExact && l < 4)
    throw std::invalid_argument("threshold pruning requires list size >= 4");
  if (cfg_.rt_index >= l)
    throw std::invalid_argument("rt_index must be below the list size");
  role_.assign(spec_.block_length, 2);
  for (int i : spec_.frozen_set) role_[i] = 0;
  if (cfg_.se_enabled)
    for (int i : spec_.reliable_set) role_[i] = 1;
}

long ListDecoder::stage_use_count(int path, int stage) const {
  const auto& slot = paths_.at(path).stage.at(stage);
  return slot ? slot.use_count() : 0;
}

std::vector<double>& ListDecoder::writable_stage(PathState& path, int t) {
  auto& slot = path.stage[t];
  if (!slot || slot.use_count() > 1)
    slot = std::make_shared<std::vector<double>>(std::size_t{1} << t);
  return *slot;
}

double ListDecoder::leaf_llr(PathState& path, int i) {
  visit_node_activations(n_, i, [&](int t, bool is_g) {
    const int len = 1 << t;
    const std::vector<double>& in = (t + 1 == n_) ? channel_ : *path.stage[t + 1];
    std::vector<double>& out = writable_stage(path, t);
    if (is_g) {
      const int base = (i - len) & (spec_.block_length / 2 - 1);
      for (int j = 0; j < len; ++j)
        out[j] = g_func(in[j], in[j + len], path.psum.bit(base + j));
    } else if (cfg_.kernel == KernelMode::kExact) {
      for (int j = 0; j < len; ++j) out[j] = f_exact(in[j], in[j + len]);
    } else {
      for (int j = 0; j < len; ++j) out[j] = f_minsum(in[j], in[j + len]);
    }
    if (cfg_.quantizer)
      for (int j = 0; j < len; ++j) out[j] = cfg_.quantizer->llr(out[j]);
  });
  return (*path.stage[0])[0];
}

void ListDecoder::extend_in_place(int i, int forced_or_reliable, const std::vector<double>& lambdas) {
  for (std::size_t p = 0; p < paths_.size(); ++p) {
    PathState& path = paths_[p];
    int b;
    if (forced_or_reliable == 0) {
      b = 0;
      path.metric = quant_metric(cfg_.kernel == KernelMode::kExact
                                     ? pmu_exact(path.metric, lambdas[p], 0)
                                     : pmu_approx(path.metric, lambdas[p], 0));
    } else {
      const SeExtension e = se_extend(path.metric, lambdas[p], cfg_.kernel);
      b = e.bit;
      path.metric = quant_metric(e.metric);
    }
    set_bit(path.bits, i, b);
    path.psum.absorb(i, b);
  }
}

void ListDecoder::apply_survivors(const std::vector<PathCandidate>& survivors, int i,
                                  const std::vector<double>& lambdas) {
  scratch_.clear();
  scratch_.reserve(survivors.size());
  for (const PathCandidate& c : survivors) {
    scratch_.push_back(paths_[c.parent]);
    PathState& child = scratch_.back();
    child.metric = c.metric;
    const int b = hard_decision(lambdas[c.parent]) ^ c.mismatch;
    set_bit(child.bits, i, b);
    child.psum.absorb(i, b);
    if (cfg_.copy == CopyPolicy::kDeep)
      for (auto& slot : child.stage)
        if (slot) slot = std::make_shared<std::vector<double>>(*slot);
  }
  paths_.swap(scratch_);
  scratch_.clear();
}

DecodeResult ListDecoder::decode(const std::vector<double>& llr_in, std::uint64_t dts_stream) {
  const int N = spec_.block_length;
  if (static_cast<int>(llr_in.size()) != N)
    throw std::invalid_argument("llr length must equal the block length");

  channel_ = llr_in;
  if (cfg_.quantizer)
    for (double& v : channel_) v = cfg_.quantizer->llr(v);
  stats_ = DecodeStats{};
  Rng fill_rng(cfg_.dts_seed, dts_stream);

  paths_.clear();
  paths_.push_back(PathState{0.0,
                             std::vector<std::uint64_t>((static_cast<std::size_t>(N) + 63) / 64, 0),
                             PartialSums(masks_),
                             std::vector<std::shared_ptr<std::vector<double>>>(n_)});

  std::vector<double> lambdas;
  std::vector<double> parent_metrics, pme, pmo;
  const int rt_request = cfg_.rt_index;  // < 0: last rank

  for (int i = 0; i < N; ++i) {
    const int p_count = static_cast<int>(paths_.size());
    lambdas.resize(p_count);
    for (int p = 0; p < p_count; ++p) lambdas[p] = leaf_llr(paths_[p], i);

    if (role_[i] != 2) {
      extend_in_place(i, role_[i], lambdas);
      continue;
    }

    auto child_metric = [&](int p, int u) {
      const double m = cfg_.kernel == KernelMode::kExact
                           ? pmu_exact(paths_[p].metric, lambdas[p], u)
                           : pmu_approx(paths_[p].metric, lambdas[p], u);
      return quant_metric(m);
    };

    std::vector<PathCandidate> survivors;
    if (2 * p_count <= cfg_.list_size) {
      survivors.reserve(2 * static_cast<std::size_t>(p_count));
      for (int p = 0; p < p_count; ++p) {
        const int hd = hard_decision(lambdas[p]);
        survivors.push_back({child_metric(p, hd), p, 0});
        survivors.push_back({child_metric(p, hd ^ 1), p, 1});
      }
    } else {
      ++stats_.prune_events;
      parent_metrics.resize(p_count);
      for (int p = 0; p < p_count; ++p) parent_metrics[p] = paths_[p].metric;

      if (cfg_.check_prune_bounds && cfg_.kernel == KernelMode::kMinSum) {
        std::vector<double> sorted_parents(parent_metrics);
        std::sort(sorted_parents.begin(), sorted_parents.end());
        std::vector<double> children;
        children.reserve(2 * static_cast<std::size_t>(p_count));
        for (int p = 0; p < p_count; ++p) {
          const int hd = hard_decision(lambdas[p]);
          children.push_back(child_metric(p, hd));
          children.push_back(child_metric(p, hd ^ 1));
        }
        ++stats_.bound_checks;
        stats_.bound_violations +=
            static_cast<std::uint64_t>(prune_bound_violations(sorted_parents, children));
      }

      if (cfg_.pruner == PrunerKind::kExact) {
        std::vector<PathCandidate> cands;
        cands.reserve(2 * static_cast<std::size_t>(p_count));
        for (int p = 0; p < p_count; ++p) {
          const int hd = hard_decision(lambdas[p]);
          cands.push_back({child_metric(p, hd), p, 0});
          cands.push_back({child_metric(p, hd ^ 1), p, 1});
        }
        survivors = lpo_exact(std::move(cands), cfg_.list_size);
      } else {
        const SortedParents sp = tta(parent_metrics, rt_request);
        pme.resize(p_count);
        pmo.resize(p_count);
        for (int r = 0; r < p_count; ++r) {
          const int p = sp.order[r];
          const int hd = hard_decision(lambdas[p]);
          pme[r] = child_metric(p, hd);
          pmo[r] = child_metric(p, hd ^ 1);
        }
        if (cfg_.pruner == PrunerKind::kDts) {
          survivors = dts_prune(pme, pmo, sp.thresholds, cfg_.list_size, fill_rng);
          for (PathCandidate& c : survivors) c.parent = sp.order[c.parent];
        } else {
          const std::vector<AdvancePick> picks = dts_advance_prune(pme, pmo, sp.thresholds);
          survivors.reserve(picks.size());
          for (const AdvancePick& pick : picks)
            survivors.push_back({pick.odd ? pmo[pick.pos] : pme[pick.pos], sp.order[pick.pos],
                                 static_cast<std::uint8_t>(pick.odd ? 1 : 0)});
        }
      }
    }
    apply_survivors(survivors, i, lambdas);
  }

  // winner: lowest metric passing the CRC; otherwise lowest metric overall.
  // Metric ties resolve to the lexicographically smallest source word.
  auto better = [&](int a, int b) {
    if (paths_[a].metric != paths_[b].metric) return paths_[a].metric < paths_[b].metric;
    return lex_less(paths_[a].bits, paths_[b].bits);
  };
  auto unpack = [&](int p) {
    BitWord u(N);
    for (int i = 0; i < N; ++i) u[i] = static_cast<std::uint8_t>(bit_at(paths_[p].bits, i));
    return u;
  };

  int best = 0, best_crc = -1;
  for (int p = 0; p < static_cast<int>(paths_.size()); ++p) {
    if (better(p, best)) best = p;
    if (message_crc_ok(spec_, extract_message(spec_, unpack(p))) &&
        (best_crc < 0 || better(p, best_crc)))
      best_crc = p;
  }
  const int win = best_crc >= 0 ? best_crc : best;

  DecodeResult res;
  res.u = unpack(win);
  res.metric = paths_[win].metric;
  res.crc_ok = best_crc >= 0;
  res.stats = stats_;
  return res;
}

DecodeResult lscd_decode(const std::vector<double>& llr_in, const CodeSpec& spec,
                         const ListConfig& cfg) {
  ListDecoder dec(spec, cfg);
  return dec.decode(llr_in);
}

double exact_path_metric(const std::vector<double>& llr_in, const CodeSpec& spec,
                         const BitWord& u) {
  const int N = spec.block_length;
  if (static_cast<int>(llr_in.size()) != N || static_cast<int>(u.size()) != N)
    throw std::invalid_argument("llr and source word must have block length");
  StageMemory mem(spec.stages());
  mem.llr[spec.stages()] = llr_in;
  double gamma = 0.0;
  for (int i = 0; i < N; ++i) {
    visit_node_activations(spec.stages(), i, [&](int t, bool is_g) {
      const int len = 1 << t;
      const auto& in = mem.llr[t + 1];
      auto& out = mem.llr[t];
      if (is_g) {
        const int base = (i - len) & (N / 2 - 1);
        for (int j = 0; j < len; ++j)
          out[j] = g_func(in[j], in[j + len], mem.psum.bit(base + j));
      } else {
        for (int j = 0; j < len; ++j) out[j] = f_exact(in[j], in[j + len]);
      }
    });
    gamma = pmu_exact(gamma, mem.llr[0][0], u[i]);
    mem.psum.absorb(i, u[i]);
  }
  return gamma;
}

MldResult mld_oracle(const std::vector<double>& llr_in, const CodeSpec& spec) {
  const int payload = spec.payload_bits();
  if (payload > 16) throw std::invalid_argument("payload too large to enumerate");
  MldResult best;
  bool have = false;
  BitWord payload_bits(payload);
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << payload); ++m) {
    for (int j = 0; j < payload; ++j)
      payload_bits[j] = static_cast<std::uint8_t>((m >> (payload - 1 - j)) & 1u);
    const BitWord message = spec.crc_bits ? crc16_append(payload_bits) : payload_bits;
    BitWord u = embed_message(spec, message);
    const double metric = exact_path_metric(llr_in, spec, u);
    if (!have || metric < best.metric ||
        (metric == best.metric && std::lexicographical_compare(u.begin(), u.end(),
                                                               best.u.begin(), best.u.end()))) {
      best.metric = metric;
      best.u = std::move(u);
      have = true;
    }
  }
  return best;
}

}  // namespace polarlab
