#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "polarlab/list_decoder.hpp"
#include "polarlab/polar_code.hpp"

namespace polarlab {

enum class DecoderKind { kScd, kLscdExact, kLscdDts, kLscdDtsAdvance };

std::string decoder_name(DecoderKind kind);
DecoderKind decoder_from_name(const std::string& name);

struct SimConfig {
  CodeSpec spec;
  DecoderKind decoder = DecoderKind::kLscdExact;
  int list_size = 8;
  int rt_index = -1;  // -1: list_size - 1
  KernelMode kernel = KernelMode::kMinSum;
  bool quantized = false;
  int llr_bits = 6;
  int metric_bits = 8;

  // selective expansion: enabled when se_epsilon >= 0 or an explicit set is given
  double se_epsilon = -1.0;
  double p_b_lscd = 0.0;
  double se_profile_snr_db = -1e9;       // sentinel: use spec.design_snr_db
  std::vector<int> reliable_override;    // explicit reliable set (tests)

  long max_frames = 100000;
  long target_block_errors = 100;
  std::uint64_t master_seed = 1;
  int workers = 1;
  bool check_prune_bounds = false;
};

struct SimPointResult {
  double ebno_db = 0.0;
  long frames = 0;
  long block_errors = 0;
  long bit_errors = 0;
  long crc_miss = 0;  // wrong winner that still passed the crc
  int payload_bits = 0;
  double wall_seconds = 0.0;
  DecodeStats stats;

  double bler() const { return frames ? static_cast<double>(block_errors) / frames : 0.0; }
  double ber() const {
    return frames && payload_bits
               ? static_cast<double>(bit_errors) / (static_cast<double>(frames) * payload_bits)
               : 0.0;
  }
};

// Decode Monte-Carlo frames until target_block_errors or max_frames. Frame i
// uses the (master_seed, i) random stream, and the frame count is the smallest
// prefix reaching the target, so results are identical for any worker count.
SimPointResult run_point(const SimConfig& cfg, double ebno_db);

std::vector<SimPointResult> run_sweep(const SimConfig& cfg, double start_db,
                                      double step_db, double stop_db);

// results.csv plus a .json sidecar describing the full configuration
void write_results_csv(const std::string& path, const SimConfig& cfg,
                       const std::vector<SimPointResult>& points);

std::string sim_config_json(const SimConfig& cfg);

}  // namespace polarlab
