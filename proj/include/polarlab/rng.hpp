#pragma once
#include <cmath>
#include <cstdint>

namespace polarlab {

// Counter-seeded splitmix64 generator with an explicit Box-Muller normal.
// Every (seed, stream) pair yields an independent, platform-stable sequence,
// so simulation results depend only on the seed and frame index, never on
// scheduling, worker count, or standard-library distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed, stream)) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform on (0, 1]; never zero, so log() below is safe
  double uniform() { return ((next_u64() >> 11) + 1.0) * 0x1.0p-53; }

  // standard normal via Box-Muller, second draw cached
  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double a = 6.28318530717958647692 * uniform();
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // uniform integer in [0, n); n must be positive (bias is ~n/2^64, irrelevant
  // for the list sizes this is used with)
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  static std::uint64_t scramble(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    return scramble(a) ^ scramble(b * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace polarlab
