#include "polarlab/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace polarlab {

ChannelConfig make_channel_config(double ebno_db, double rate) {
  if (!(rate > 0.0) || rate > 1.0)
    throw std::invalid_argument("rate must lie in (0, 1]");
  ChannelConfig cfg;
  cfg.ebno_db = ebno_db;
  cfg.rate = rate;
  cfg.sigma2 = 1.0 / (2.0 * rate * std::pow(10.0, ebno_db / 10.0));
  cfg.sigma = std::sqrt(cfg.sigma2);
  return cfg;
}

std::vector<double> bpsk_modulate(const BitWord& x) {
  std::vector<double> s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? -1.0 : 1.0;
  return s;
}

double channel_llr(double y, const ChannelConfig& cfg) { return 2.0 * y / cfg.sigma2; }

std::vector<double> transmit_frame(const BitWord& x, const ChannelConfig& cfg, Rng& rng) {
  std::vector<double> llr(x.size());
  const double scale = 2.0 / cfg.sigma2;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double y = (x[i] ? -1.0 : 1.0) + cfg.sigma * rng.gauss();
    llr[i] = scale * y;
  }
  return llr;
}

double Quantizer::llr(double v) const {
  double q = std::nearbyint(v / llr_step) * llr_step;
  if (q > llr_max) q = llr_max;
  if (q < -llr_max) q = -llr_max;
  return q;
}

double Quantizer::metric(double v) const {
  double q = std::nearbyint(v / llr_step) * llr_step;
  if (q > metric_max) q = metric_max;
  if (q < 0.0) q = 0.0;
  return q;
}

Quantizer make_quantizer(int llr_bits, int metric_bits, double sigma2) {
  if (llr_bits < 2 || llr_bits > 16 || metric_bits < 2 || metric_bits > 24)
    throw std::invalid_argument("quantizer widths out of range");
  if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  Quantizer q;
  q.llr_bits = llr_bits;
  q.metric_bits = metric_bits;
  const double mean_abs_llr = 2.0 / sigma2;
  const int llr_levels = (1 << (llr_bits - 1)) - 1;
  q.llr_step = 4.0 * mean_abs_llr / llr_levels;
  q.llr_max = llr_levels * q.llr_step;
  q.metric_max = ((1 << metric_bits) - 1) * q.llr_step;
  return q;
}

}  // namespace polarlab
