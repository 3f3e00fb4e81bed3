#pragma once
#include <bit>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "polarlab/channel.hpp"
#include "polarlab/polar_code.hpp"

namespace polarlab {

// --- leaf kernels ----------------------------------------------------------

// min-sum check combination: sign(a)sign(b) * min(|a|, |b|)
inline double f_minsum(double a, double b) {
  const double m = std::min(std::fabs(a), std::fabs(b));
  return std::signbit(a) == std::signbit(b) ? m : -m;
}

// exact check combination 2 atanh(tanh(a/2) tanh(b/2)), evaluated in the
// overflow-safe product form
inline double f_exact(double a, double b) {
  const double m = std::min(std::fabs(a), std::fabs(b));
  const double core = (std::signbit(a) == std::signbit(b)) ? m : -m;
  return core + std::log1p(std::exp(-std::fabs(a + b))) -
         std::log1p(std::exp(-std::fabs(a - b)));
}

// variable combination: b + (-1)^s a
inline double g_func(double a, double b, int s) { return s ? b - a : b + a; }

// 0 when llr >= 0 (ties to 0), 1 otherwise
inline int hard_decision(double llr) { return llr >= 0.0 ? 0 : 1; }

// --- partial sums ------------------------------------------------------------
//
// One N/2-bit register per decoder. Bit j accumulates the XOR of every decoded
// bit whose in-half offset is a bitwise superset of j, which is exactly the
// source-transform row structure; the register resets when decoding crosses
// into the second half of the block. The sign bits consumed by any g node of
// stage t then sit at offsets [C mod N/2, C mod N/2 + 2^t) where C = i - 2^t.
class PsumMasks {
 public:
  explicit PsumMasks(int block_length);
  int half() const { return half_; }
  int words_per_row() const { return words_; }
  const std::uint64_t* row(int m) const { return rows_.data() + static_cast<std::size_t>(m) * words_; }

 private:
  int half_ = 1;
  int words_ = 1;
  std::vector<std::uint64_t> rows_;
};

// process-wide cache of mask tables, one per block length (thread-safe)
std::shared_ptr<const PsumMasks> psum_masks(int block_length);

class PartialSums {
 public:
  explicit PartialSums(std::shared_ptr<const PsumMasks> masks);
  void reset();
  // feed the decoded bit u_i; call exactly once per index, in order
  void absorb(int i, int bit);
  int bit(int pos) const {
    return static_cast<int>((words_[pos >> 6] >> (pos & 63)) & 1u);
  }
  int size_bits() const { return masks_->half(); }

 private:
  std::shared_ptr<const PsumMasks> masks_;
  std::vector<std::uint64_t> words_;
};

// --- schedule ----------------------------------------------------------------

// Stage nodes recomputed when the decoder advances to bit i: the g node at the
// lowest set bit of i (none for i = 0), then f nodes down to stage 0. Shared
// by the decoder and by the cycle model, so the cycle accounting walks the
// same activation sequence the decoder executes.
template <typename Fn>
inline void visit_node_activations(int stages, int i, Fn&& fn) {
  int top;
  if (i == 0) {
    top = stages - 1;
  } else {
    top = std::countr_zero(static_cast<unsigned>(i));
    fn(top, /*is_g=*/true);
    --top;
  }
  for (int t = top; t >= 0; --t) fn(t, /*is_g=*/false);
}

// --- single successive-cancellation decoder ----------------------------------

// Per-stage LLR memory (llr[t] holds 2^t values; llr[n] is the channel input)
// plus the N/2-bit partial-sum register.
struct StageMemory {
  explicit StageMemory(int stages);
  int stages;
  std::vector<std::vector<double>> llr;
  PartialSums psum;
};

struct ScdOptions {
  bool exact_kernel = false;
  const Quantizer* quantizer = nullptr;  // saturate stage outputs when set
};

BitWord scd_decode(const std::vector<double>& llr_in, const CodeSpec& spec,
                   const ScdOptions& opts = {});

}  // namespace polarlab
