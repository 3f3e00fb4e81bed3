#pragma once
#include <array>
#include <string>

#include "polarlab/polar_code.hpp"

namespace polarlab {

// Decoded-bit couples (u_2i, u_2i+1) fall into six classes by how many frozen
// and reliable-information bits they contain; classes decide which leaf and
// list-management cycles a semi-parallel decoder can skip.
enum class CoupleCase {
  kBothReliable = 0,       // I:   (reliable, reliable)
  kFrozenReliable = 1,     // II:  (frozen, reliable)
  kUnreliableReliable = 2, // III: (unreliable, reliable)
  kBothFrozen = 3,         // IV:  (frozen, frozen)
  kFrozenUnreliable = 4,   // V:   (frozen, unreliable)
  kBothUnreliable = 5,     // VI:  (unreliable, unreliable)
};

struct CoupleCounts {
  std::array<long, 6> count{};
  long& operator[](CoupleCase c) { return count[static_cast<int>(c)]; }
  long operator[](CoupleCase c) const { return count[static_cast<int>(c)]; }
  long total() const;
};

struct CoupleClassification {
  CoupleCounts counts;
  // couples whose layout contradicts the expected in-couple ordering
  // ((frozen, info) and (unreliable, reliable)); counted conservatively as
  // both-unreliable
  int structure_violations = 0;
};

CoupleClassification classify_couples(const CodeSpec& spec);

// Baseline list-decoding latency of a semi-parallel tree walk with pe_count
// processing elements: 3N + (N/M) log2(N/(4M)) cycles.
long baseline_latency(int block_length, int pe_count);

// Cycles remaining once per-couple savings are applied:
// baseline - 4(N_I + N_II + N_IV) - (N_III + N_V).
long lscd_latency(long baseline, const CoupleCounts& counts);

// Event-count oracles that walk the actual node-activation schedule and charge
// ceil(width / M) cycles per node plus one list-management cycle per bit,
// skipping exactly the per-class cycles. Must agree with the closed forms.
long schedule_cycles(int block_length, int pe_count);
long schedule_cycles(const CodeSpec& spec, int pe_count);

struct LatencyReport {
  int block_length = 0;
  int pe_count = 0;
  long baseline = 0;
  CoupleCounts counts;
  int structure_violations = 0;
  long reduced = 0;
  std::string to_json() const;
};

LatencyReport latency_report(const CodeSpec& spec, int pe_count);
LatencyReport latency_report_from_counts(int block_length, int pe_count,
                                         const CoupleCounts& counts);

}  // namespace polarlab
