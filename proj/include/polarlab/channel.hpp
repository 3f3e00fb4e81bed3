#pragma once
#include <vector>

#include "polarlab/polar_code.hpp"
#include "polarlab/rng.hpp"

namespace polarlab {

// BPSK over AWGN with the Eb/N0 convention sigma^2 = 1 / (2 * rate * 10^(dB/10)),
// where rate counts payload bits only (CRC bits are overhead).
struct ChannelConfig {
  double ebno_db = 0.0;
  double rate = 0.5;
  double sigma2 = 1.0;
  double sigma = 1.0;
};

ChannelConfig make_channel_config(double ebno_db, double rate);

// 0 -> +1, 1 -> -1
std::vector<double> bpsk_modulate(const BitWord& x);

// LLR of one received sample: 2 y / sigma^2
double channel_llr(double y, const ChannelConfig& cfg);

// modulate, add white Gaussian noise from rng, return channel LLRs
std::vector<double> transmit_frame(const BitWord& x, const ChannelConfig& cfg, Rng& rng);

// Uniform quantizer with saturation: LLRs round to multiples of llr_step and
// clamp to +-(2^(llr_bits-1) - 1) steps; metrics are nonnegative and clamp to
// (2^metric_bits - 1) steps of the same grid.
struct Quantizer {
  int llr_bits = 6;
  int metric_bits = 8;
  double llr_step = 0.25;
  double llr_max = 0.0;     // derived
  double metric_max = 0.0;  // derived

  double llr(double v) const;
  double metric(double v) const;
};

// llr_step chosen so that saturation sits near 4x the mean absolute channel
// LLR (2/sigma^2) at the given noise level.
Quantizer make_quantizer(int llr_bits, int metric_bits, double sigma2);

}  // namespace polarlab
