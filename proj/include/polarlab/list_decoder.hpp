#pragma once
#include <cstdint>
#include <memory>
#include <vector>

#include "polarlab/channel.hpp"
#include "polarlab/polar_code.hpp"
#include "polarlab/scd.hpp"

namespace polarlab {

enum class PrunerKind { kExact, kDts, kDtsAdvance };
enum class KernelMode { kMinSum, kExact };
enum class CopyPolicy { kLazy, kDeep };

// --- path metric updates -----------------------------------------------------

/// hardware rule: the child matching the hard decision keeps the metric, the
// other child pays |lambda|
inline double pmu_approx(double gamma, double lambda, int u) {
  return u == hard_decision(lambda) ? gamma : gamma + std::fabs(lambda);
}

/// exact rule: gamma + log(1 + exp((2u - 1) lambda)), evaluated stably
inline double softplus(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}
inline double pmu_exact(double gamma, double lambda, int u) {
  return gamma + softplus(u ? lambda : -lambda);
}

// --- pruning candidates --------------------------------------------------------

struct PathCandidate {
  double metric = 0.0;
  int parent = 0;             // index into the current path list
  std::uint8_t mismatch = 0;  // 0: hard-decision child, 1: opposite bit
};

// Keep the `keep` smallest candidates of the doubled list. Ties prefer the
// hard-decision child, then the lower parent index. Survivors are returned in
// ascending metric order.
std::vector<PathCandidate> lpo_exact(std::vector<PathCandidate> cands, int keep);

// --- decoder -------------------------------------------------------------------

struct ListConfig {
  int list_size = 8;
  PrunerKind pruner = PrunerKind::kExact;
  KernelMode kernel = KernelMode::kMinSum;
  CopyPolicy copy = CopyPolicy::kLazy;
  bool se_enabled = false;  // honor spec.reliable_set with single-path extension
  int rt_index = -1;        // reject threshold rank; -1 means list_size - 1
  std::uint64_t dts_seed = 1;
  const Quantizer* quantizer = nullptr;
  bool check_prune_bounds = false;  // verify l <= |{children < gamma_l}| <= 2l
};

struct DecodeStats {
  std::uint64_t prune_events = 0;
  std::uint64_t bound_checks = 0;
  std::uint64_t bound_violations = 0;
};

struct DecodeResult {
  BitWord u;  // winning path, all N source bits
  double metric = 0.0;
  bool crc_ok = false;
  DecodeStats stats;
};

class ListDecoder {
 public:
  ListDecoder(const CodeSpec& spec, const ListConfig& cfg);
  // dts_stream selects the fill-rule randomness stream (e.g. the frame index)
  DecodeResult decode(const std::vector<double>& llr_in, std::uint64_t dts_stream = 0);

  // introspection for tests
  int path_count() const { return static_cast<int>(paths_.size()); }
  long stage_use_count(int path, int stage) const;

 private:
  struct PathState {
    double metric = 0.0;
    std::vector<std::uint64_t> bits;  // N packed bits
    PartialSums psum;
    std::vector<std::shared_ptr<std::vector<double>>> stage;  // stages 0..n-1
  };

  double leaf_llr(PathState& path, int i);
  std::vector<double>& writable_stage(PathState& path, int t);
  void extend_in_place(int i, int bit_is_forced, const std::vector<double>& lambdas);
  void apply_survivors(const std::vector<PathCandidate>& survivors, int i,
                       const std::vector<double>& lambdas);
  double quant_metric(double m) const {
    return cfg_.quantizer ? cfg_.quantizer->metric(m) : m;
  }

  CodeSpec spec_;
  ListConfig cfg_;
  int n_ = 0;
  std::vector<std::uint8_t> role_;  // 0 frozen, 1 reliable, 2 unreliable
  std::shared_ptr<const PsumMasks> masks_;
  std::vector<double> channel_;
  std::vector<PathState> paths_;
  std::vector<PathState> scratch_;
  DecodeStats stats_;
};

DecodeResult lscd_decode(const std::vector<double>& llr_in, const CodeSpec& spec,
                         const ListConfig& cfg);

// --- brute-force maximum-likelihood reference ------------------------------------

// Exact-kernel path metric of a fully forced source word.
double exact_path_metric(const std::vector<double>& llr_in, const CodeSpec& spec,
                         const BitWord& u);

struct MldResult {
  BitWord u;
  double metric = 0.0;
};

// Enumerates all 2^payload valid messages (payload_bits <= 16; the checksum,
// when configured, is appended to each candidate) and returns the
// lowest-metric source word; ties pick the lexicographically smallest word.
MldResult mld_oracle(const std::vector<double>& llr_in, const CodeSpec& spec);

}  // namespace polarlab
