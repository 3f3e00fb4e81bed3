#include "polarlab/polar_code.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

namespace polarlab {

namespace {

bool power_of_two(int n) { return n >= 2 && (n & (n - 1)) == 0; }

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

// --- Gaussian-approximation machinery ------------------------------------
//
// The degradation function is evaluated in the log domain so that the
// recursion stays finite for strongly polarized channels, and its inverse is
// found by bisection (tolerance 1e-12). The piecewise form is clamped at the
// seam so the surrogate stays monotone, which bisection requires.

double ln_phi(double m) {
  if (m <= 0.0) return 0.0;
  // Series branch: ln E[tanh(u/2)] for u ~ N(m, 2m) expands to -m/2 + m^2/8
  // near zero. The power-law fit would turn positive there (an impossible
  // value > 1) and collapse the whole recursion to zero means. The seam sits
  // where the two branches cross; min-clamps keep the surrogate
  // non-increasing, which the bisection inverse requires.
  constexpr double seam = 0.2955;
  if (m < seam) return -0.5 * m + 0.125 * m * m;
  const double at_seam = -0.5 * seam + 0.125 * seam * seam;
  const double low = std::min(at_seam, -0.4527 * std::pow(m, 0.86) + 0.0218);
  if (m <= 10.0) return low;
  const double at10 = std::min(at_seam, -0.4527 * std::pow(10.0, 0.86) + 0.0218);
  const double asym =
      0.5 * std::log(3.14159265358979323846 / m) - 0.25 * m + std::log1p(-10.0 / (7.0 * m));
  return std::min(at10, asym);
}

double phi_inv_ln(double target) {
  if (target >= 0.0) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (ln_phi(hi) > target && hi < 1e12) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-12; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (ln_phi(mid) > target) lo = mid;
    else hi = mid;
  }
  return 0.5 * (lo + hi);
}

// mean LLR of the check-combined channel: phi^-1(1 - (1 - phi(m))^2)
double check_mean(double m) {
  if (m <= 0.0) return 0.0;
  const double z = ln_phi(m);
  return phi_inv_ln(z + std::log(2.0 - std::exp(z)));
}

double q_half_erfc(double m) {  // Pr(N(m, 2m) < 0)
  if (m <= 0.0) return 0.5;
  return 0.5 * std::erfc(std::sqrt(m) / 2.0);
}

}  // namespace

void polar_transform(BitWord& bits) {
  const int n = static_cast<int>(bits.size());
  require(power_of_two(n), "transform length must be a power of two >= 2");
  for (int h = 1; h < n; h <<= 1)
    for (int i = 0; i < n; i += 2 * h)
      for (int j = i; j < i + h; ++j) bits[j] ^= bits[j + h];
}

BitWord polar_transformed(BitWord bits) {
  polar_transform(bits);
  return bits;
}

ReliabilityProfile build_reliability(int block_length, double snr_db, double rate) {
  require(power_of_two(block_length), "block length must be a power of two >= 2");
  require(rate > 0.0 && rate <= 1.0, "rate must lie in (0, 1]");
  const double sigma2 = 1.0 / (2.0 * rate * std::pow(10.0, snr_db / 10.0));
  std::vector<double> mean{2.0 / sigma2};
  while (static_cast<int>(mean.size()) < block_length) {
    std::vector<double> next(mean.size() * 2);
    for (std::size_t j = 0; j < mean.size(); ++j) {
      next[2 * j] = check_mean(mean[j]);
      next[2 * j + 1] = 2.0 * mean[j];
    }
    mean = std::move(next);
  }
  ReliabilityProfile profile;
  profile.snr_db = snr_db;
  profile.rate = rate;
  profile.pe.resize(mean.size());
  for (std::size_t i = 0; i < mean.size(); ++i) profile.pe[i] = q_half_erfc(mean[i]);
  return profile;
}

std::vector<int> select_information_set(const ReliabilityProfile& profile, int k) {
  const int n = static_cast<int>(profile.pe.size());
  require(k >= 0 && k <= n, "information set size out of range");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (profile.pe[a] != profile.pe[b]) return profile.pe[a] < profile.pe[b];
    return a < b;
  });
  std::vector<int> info(order.begin(), order.begin() + k);
  std::sort(info.begin(), info.end());
  return info;
}

std::vector<int> select_reliable_set(const std::vector<int>& info_set,
                                     const ReliabilityProfile& profile,
                                     double epsilon, double p_b_lscd) {
  if (epsilon < 0.0) return {};
  require(p_b_lscd >= 0.0, "block error rate must be nonnegative");
  std::vector<int> order(info_set);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (profile.pe[a] != profile.pe[b]) return profile.pe[a] < profile.pe[b];
    return a < b;
  });
  const double budget = epsilon * p_b_lscd;
  std::vector<int> reliable;
  double sum = 0.0;
  for (int idx : order) {
    if (sum + profile.pe[idx] > budget) break;
    sum += profile.pe[idx];
    reliable.push_back(idx);
  }
  std::sort(reliable.begin(), reliable.end());
  return reliable;
}

int CodeSpec::stages() const { return std::countr_zero(static_cast<unsigned>(block_length)); }

double CodeSpec::payload_rate() const {
  return static_cast<double>(payload_bits()) / static_cast<double>(block_length);
}

void CodeSpec::validate() const {
  require(power_of_two(block_length), "block length must be a power of two >= 2");
  require(crc_bits == 0 || crc_bits == 16, "crc width must be 0 or 16");
  require(info_bits >= crc_bits + 1 && info_bits <= block_length,
          "info bit count must leave at least one payload bit and fit the block");
  require(static_cast<int>(info_set.size()) == info_bits, "info set size mismatch");
  require(static_cast<int>(frozen_set.size()) == block_length - info_bits,
          "frozen set size mismatch");
  auto sorted_in_range = [&](const std::vector<int>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 0 || v[i] >= block_length) return false;
      if (i > 0 && v[i] <= v[i - 1]) return false;
    }
    return true;
  };
  require(sorted_in_range(info_set), "info set must be sorted, unique, in range");
  require(sorted_in_range(frozen_set), "frozen set must be sorted, unique, in range");
  require(sorted_in_range(reliable_set), "reliable set must be sorted, unique, in range");
  std::vector<std::uint8_t> seen(block_length, 0);
  for (int i : info_set) seen[i] |= 1;
  for (int i : frozen_set) seen[i] |= 2;
  for (const auto s : seen)
    require(s == 1 || s == 2, "info and frozen sets must partition the indices");
  require(std::includes(info_set.begin(), info_set.end(), reliable_set.begin(),
                        reliable_set.end()),
          "reliable set must be a subset of the info set");
}

std::string CodeSpec::to_json() const {
  nlohmann::ordered_json j;
  j["n_bits"] = block_length;
  j["k"] = info_bits;
  j["crc_bits"] = crc_bits;
  j["design_snr_db"] = design_snr_db;
  j["frozen_set"] = frozen_set;
  j["reliable_set"] = reliable_set;
  return j.dump(2);
}

CodeSpec CodeSpec::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad code spec json: ") + e.what());
  }
  CodeSpec spec;
  try {
    spec.block_length = j.at("n_bits").get<int>();
    spec.info_bits = j.at("k").get<int>();
    spec.crc_bits = j.at("crc_bits").get<int>();
    spec.design_snr_db = j.at("design_snr_db").get<double>();
    spec.frozen_set = j.at("frozen_set").get<std::vector<int>>();
    if (j.contains("reliable_set"))
      spec.reliable_set = j.at("reliable_set").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad code spec json: ") + e.what());
  }
  require(power_of_two(spec.block_length), "block length must be a power of two >= 2");
  std::vector<std::uint8_t> frozen(spec.block_length, 0);
  for (int i : spec.frozen_set) {
    require(i >= 0 && i < spec.block_length, "frozen index out of range");
    frozen[i] = 1;
  }
  for (int i = 0; i < spec.block_length; ++i)
    if (!frozen[i]) spec.info_set.push_back(i);
  spec.validate();
  return spec;
}

CodeSpec make_code_spec(int block_length, int info_bits, int crc_bits,
                        double design_snr_db, double epsilon, double p_b_lscd) {
  require(power_of_two(block_length), "block length must be a power of two >= 2");
  require(crc_bits == 0 || crc_bits == 16, "crc width must be 0 or 16");
  require(info_bits >= crc_bits + 1 && info_bits <= block_length,
          "info bit count must leave at least one payload bit and fit the block");
  CodeSpec spec;
  spec.block_length = block_length;
  spec.info_bits = info_bits;
  spec.crc_bits = crc_bits;
  spec.design_snr_db = design_snr_db;
  const auto profile = build_reliability(block_length, design_snr_db, spec.payload_rate());
  spec.info_set = select_information_set(profile, info_bits);
  std::vector<std::uint8_t> info(block_length, 0);
  for (int i : spec.info_set) info[i] = 1;
  for (int i = 0; i < block_length; ++i)
    if (!info[i]) spec.frozen_set.push_back(i);
  if (epsilon >= 0.0)
    spec.reliable_set = select_reliable_set(spec.info_set, profile, epsilon, p_b_lscd);
  spec.validate();
  return spec;
}

std::uint16_t crc16(const BitWord& bits) {
  std::uint16_t reg = 0xffff;
  for (const auto b : bits) {
    const unsigned top = (reg >> 15) & 1u;
    reg = static_cast<std::uint16_t>(reg << 1);
    if (top ^ (b & 1u)) reg ^= 0x1021;
  }
  return reg;
}

BitWord crc16_append(const BitWord& payload) {
  require(!payload.empty(), "payload must be non-empty");
  BitWord out(payload);
  const std::uint16_t c = crc16(payload);
  for (int b = 15; b >= 0; --b) out.push_back((c >> b) & 1u);
  return out;
}

bool crc16_check(const BitWord& message) {
  require(message.size() > 16, "message must carry a payload plus 16 check bits");
  const BitWord payload(message.begin(), message.end() - 16);
  const std::uint16_t c = crc16(payload);
  for (int b = 0; b < 16; ++b)
    if (message[message.size() - 16 + b] != ((c >> (15 - b)) & 1u)) return false;
  return true;
}

BitWord embed_message(const CodeSpec& spec, const BitWord& message) {
  require(static_cast<int>(message.size()) == spec.info_bits,
          "message length must equal the info bit count");
  BitWord u(spec.block_length, 0);
  for (std::size_t j = 0; j < message.size(); ++j) u[spec.info_set[j]] = message[j] & 1u;
  return u;
}

BitWord extract_message(const CodeSpec& spec, const BitWord& u) {
  require(static_cast<int>(u.size()) == spec.block_length,
          "source word length must equal the block length");
  BitWord message(spec.info_bits);
  for (std::size_t j = 0; j < message.size(); ++j) message[j] = u[spec.info_set[j]] & 1u;
  return message;
}

bool message_crc_ok(const CodeSpec& spec, const BitWord& message) {
  require(static_cast<int>(message.size()) == spec.info_bits,
          "message length must equal the info bit count");
  if (spec.crc_bits == 0) return true;
  return crc16_check(message);
}

BitWord encode_frame(const CodeSpec& spec, const BitWord& message) {
  BitWord u = embed_message(spec, message);
  polar_transform(u);
  return u;
}

}  // namespace polarlab
