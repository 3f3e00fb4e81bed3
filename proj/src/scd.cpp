#include "polarlab/scd.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace polarlab {

namespace {

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

// OR `src` shifted left by `shift` bits into `dst` (both `words` long)
void or_shifted(std::uint64_t* dst, const std::uint64_t* src, int shift, int words) {
  const int word_shift = shift >> 6;
  const int bit_shift = shift & 63;
  for (int w = words - 1; w >= word_shift; --w) {
    std::uint64_t v = src[w - word_shift] << bit_shift;
    if (bit_shift != 0 && w - word_shift - 1 >= 0)
      v |= src[w - word_shift - 1] >> (64 - bit_shift);
    dst[w] |= v;
  }
}

}  // namespace

PsumMasks::PsumMasks(int block_length) {
  if (!power_of_two(block_length) || block_length < 2)
    throw std::invalid_argument("block length must be a power of two >= 2");
  half_ = block_length / 2;
  words_ = (half_ + 63) / 64;
  rows_.assign(static_cast<std::size_t>(half_) * words_, 0);
  rows_[0] = 1;  // row 0 covers offset 0 only
  for (int m = 1; m < half_; ++m) {
    const int low = m & -m;
    const std::uint64_t* prev = row(m ^ low);
    std::uint64_t* cur = rows_.data() + static_cast<std::size_t>(m) * words_;
    std::copy(prev, prev + words_, cur);
    or_shifted(cur, prev, low, words_);
  }
}

std::shared_ptr<const PsumMasks> psum_masks(int block_length) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const PsumMasks>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[block_length];
  if (!slot) slot = std::make_shared<const PsumMasks>(block_length);
  return slot;
}

PartialSums::PartialSums(std::shared_ptr<const PsumMasks> masks)
    : masks_(std::move(masks)), words_(masks_->words_per_row(), 0) {}

void PartialSums::reset() { std::fill(words_.begin(), words_.end(), 0); }

void PartialSums::absorb(int i, int bit) {
  if (i == masks_->half()) reset();  // decoding crossed into the second half
  if (!bit) return;
  const std::uint64_t* r = masks_->row(i & (masks_->half() - 1));
  for (int w = 0; w < masks_->words_per_row(); ++w) words_[w] ^= r[w];
}

StageMemory::StageMemory(int stage_count)
    : stages(stage_count), llr(static_cast<std::size_t>(stage_count) + 1),
      psum(psum_masks(1 << stage_count)) {
  for (int t = 0; t <= stages; ++t) llr[t].resize(std::size_t{1} << t);
}

BitWord scd_decode(const std::vector<double>& llr_in, const CodeSpec& spec,
                   const ScdOptions& opts) {
  const int n = spec.stages();
  const int N = spec.block_length;
  if (static_cast<int>(llr_in.size()) != N)
    throw std::invalid_argument("llr length must equal the block length");

  StageMemory mem(n);
  mem.llr[n] = llr_in;
  if (opts.quantizer)
    for (double& v : mem.llr[n]) v = opts.quantizer->llr(v);

  std::vector<char> frozen(N, 0);
  for (int i : spec.frozen_set) frozen[i] = 1;

  BitWord u(N, 0);
  for (int i = 0; i < N; ++i) {
    visit_node_activations(n, i, [&](int t, bool is_g) {
      const int len = 1 << t;
      const auto& in = mem.llr[t + 1];
      auto& out = mem.llr[t];
      if (is_g) {
        const int base = (i - len) & (N / 2 - 1);
        for (int j = 0; j < len; ++j)
          out[j] = g_func(in[j], in[j + len], mem.psum.bit(base + j));
      } else if (opts.exact_kernel) {
        for (int j = 0; j < len; ++j) out[j] = f_exact(in[j], in[j + len]);
      } else {
        for (int j = 0; j < len; ++j) out[j] = f_minsum(in[j], in[j + len]);
      }
      if (opts.quantizer)
        for (int j = 0; j < len; ++j) out[j] = opts.quantizer->llr(out[j]);
    });
    u[i] = frozen[i] ? 0 : static_cast<std::uint8_t>(hard_decision(mem.llr[0][0]));
    mem.psum.absorb(i, u[i]);
  }
  return u;
}

}  // namespace polarlab
