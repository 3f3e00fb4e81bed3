#pragma once
#include <vector>

#include "polarlab/list_decoder.hpp"
#include "polarlab/rng.hpp"

namespace polarlab {

// --- threshold tracking ------------------------------------------------------

struct Thresholds {
  double at = 0.0;  // accept below this
  double rt = 0.0;  // reject above this
  int rt_index = 0;
};

// Functional model of the two-stage tracking sorter: parents are ranked by
// metric (ties by index); the lower half counts as the unordered "good" half,
// the upper half is exactly sorted. at is the smallest upper-half metric,
// rt the metric at rank rt_index of the full order.
struct SortedParents {
  std::vector<int> order;        // rank -> original parent index
  std::vector<double> metrics;   // metrics in rank order
  Thresholds thresholds;
};

SortedParents tta(const std::vector<double>& metrics, int rt_index);

// --- double-threshold pruning --------------------------------------------------

// Flat selection: accept children below at, reject children above rt, fill the
// remaining slots from the in-band candidates by a seeded random draw taken in
// candidate order (parent-major, hard-decision child first). May return fewer
// than `keep` survivors when the band runs dry.
std::vector<PathCandidate> dts_prune(const std::vector<double>& pme,
                                     const std::vector<double>& pmo,
                                     const Thresholds& th, int keep, Rng& rng);

// Structured selection on rank-permuted inputs: the lower-half hard-decision
// children always survive; of the exactly-sorted upper half, the worst
// min(k, L/2) entries are displaced by the first k in-threshold opposite
// children, where k counts pmo entries at or below rt. Returns exactly L picks.
struct AdvancePick {
  int pos = 0;    // rank position into the permuted parent order
  bool odd = false;  // true: opposite-bit child of that parent
};
std::vector<AdvancePick> dts_advance_prune(const std::vector<double>& pme,
                                           const std::vector<double>& pmo,
                                           const Thresholds& th);

// Count violations of the expansion bound: for every parent rank l, the number
// of children strictly below gamma_l must lie in [l', 2l'] with l' the number
// of parents strictly below gamma_l (l' = l when parent metrics are distinct).
int prune_bound_violations(const std::vector<double>& parents_sorted,
                           const std::vector<double>& children);

// --- single-path extension and fused leaf updates -------------------------------

struct SeExtension {
  int bit = 0;
  double metric = 0.0;
};
// Reliable bits extend every path with the hard decision; the metric keeps the
// matching-child update of the active kernel (unchanged for min-sum).
SeExtension se_extend(double metric, double lambda, KernelMode kernel);

// Fused leaf update for a (frozen, reliable) pair fed by the stage-1 LLRs:
// pay min(|l0|, |l1|) iff the two hard decisions disagree; the decoded pair is
// (0, hard_decision(l0 + l1)).
struct FusedPair {
  double metric = 0.0;
  int u0 = 0;
  int u1 = 0;
};
FusedPair fused_pmu_frozen_info(double metric, double l0, double l1);

// Fused update for a (frozen, frozen) pair: each negative stage-1 LLR pays its
// magnitude.
double fused_pmu_frozen_frozen(double metric, double l0, double l1);

}  // namespace polarlab
