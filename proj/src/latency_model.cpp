#include "polarlab/latency_model.hpp"

#include <bit>
#include <numeric>
#include <stdexcept>

#include "polarlab/scd.hpp"

#include <json.hpp>

namespace polarlab {

namespace {

bool power_of_two(int v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_int(int v) { return std::countr_zero(static_cast<unsigned>(v)); }

const char* kCaseNames[6] = {"I", "II", "III", "IV", "V", "VI"};

// cycles a couple's class lets the decoder skip
long couple_saving(CoupleCase c) {
  switch (c) {
    case CoupleCase::kBothReliable:
    case CoupleCase::kFrozenReliable:
    case CoupleCase::kBothFrozen:
      return 4;
    case CoupleCase::kUnreliableReliable:
    case CoupleCase::kFrozenUnreliable:
      return 1;
    case CoupleCase::kBothUnreliable:
      return 0;
  }
  return 0;
}

std::vector<CoupleCase> couple_cases(const CodeSpec& spec, int* violations) {
  std::vector<std::uint8_t> role(spec.block_length, 2);
  for (int i : spec.frozen_set) role[i] = 0;
  for (int i : spec.reliable_set) role[i] = 1;
  std::vector<CoupleCase> cases(spec.block_length / 2);
  if (violations) *violations = 0;
  for (int c = 0; c < spec.block_length / 2; ++c) {
    const int a = role[2 * c], b = role[2 * c + 1];
    CoupleCase k;
    if (a == 1 && b == 1) {
      k = CoupleCase::kBothReliable;
    } else if (a == 0 && b == 1) {
      k = CoupleCase::kFrozenReliable;
    } else if (a == 2 && b == 1) {
      k = CoupleCase::kUnreliableReliable;
    } else if (a == 0 && b == 0) {
      k = CoupleCase::kBothFrozen;
    } else if (a == 0 && b == 2) {
      k = CoupleCase::kFrozenUnreliable;
    } else if (a == 2 && b == 2) {
      k = CoupleCase::kBothUnreliable;
    } else {
      // layouts the couple taxonomy excludes: (info, frozen) or
      // (reliable, unreliable); count conservatively as no-saving
      k = CoupleCase::kBothUnreliable;
      if (violations) ++(*violations);
    }
    cases[c] = k;
  }
  return cases;
}

}  // namespace

long CoupleCounts::total() const { return std::accumulate(count.begin(), count.end(), 0L); }

CoupleClassification classify_couples(const CodeSpec& spec) {
  spec.validate();
  CoupleClassification out;
  const auto cases = couple_cases(spec, &out.structure_violations);
  for (CoupleCase c : cases) ++out.counts[c];
  return out;
}

long baseline_latency(int block_length, int pe_count) {
  if (!power_of_two(block_length) || !power_of_two(pe_count))
    throw std::invalid_argument("block length and processor count must be powers of two");
  if (pe_count >= block_length / 2)
    throw std::invalid_argument("processor count must be below half the block length");
  const long n = block_length;
  const long m = pe_count;
  return 3 * n + (n / m) * log2_int(static_cast<int>(n / (4 * m)));
}

long lscd_latency(long baseline, const CoupleCounts& counts) {
  for (long c : counts.count)
    if (c < 0) throw std::invalid_argument("couple counts must be nonnegative");
  const long big = counts[CoupleCase::kBothReliable] + counts[CoupleCase::kFrozenReliable] +
                   counts[CoupleCase::kBothFrozen];
  const long small = counts[CoupleCase::kUnreliableReliable] +
                     counts[CoupleCase::kFrozenUnreliable];
  return baseline - 4 * big - small;
}

long schedule_cycles(int block_length, int pe_count) {
  if (!power_of_two(block_length) || !power_of_two(pe_count))
    throw std::invalid_argument("block length and processor count must be powers of two");
  if (pe_count >= block_length / 2)
    throw std::invalid_argument("processor count must be below half the block length");
  const int n = log2_int(block_length);
  long cycles = 0;
  for (int i = 0; i < block_length; ++i) {
    visit_node_activations(n, i, [&](int t, bool) {
      const long width = 1L << t;
      cycles += (width + pe_count - 1) / pe_count;
    });
    cycles += 1;  // list-management cycle for this bit
  }
  return cycles;
}

long schedule_cycles(const CodeSpec& spec, int pe_count) {
  long cycles = schedule_cycles(spec.block_length, pe_count);
  const auto cases = couple_cases(spec, nullptr);
  for (CoupleCase c : cases) cycles -= couple_saving(c);
  return cycles;
}

std::string LatencyReport::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = block_length;
  j["m"] = pe_count;
  j["d_baseline"] = baseline;
  nlohmann::ordered_json c;
  for (int i = 0; i < 6; ++i) c[kCaseNames[i]] = counts.count[i];
  j["counts"] = c;
  j["structure_violations"] = structure_violations;
  j["d_lscd"] = reduced;
  return j.dump(2);
}

LatencyReport latency_report(const CodeSpec& spec, int pe_count) {
  const CoupleClassification cls = classify_couples(spec);
  LatencyReport rep;
  rep.block_length = spec.block_length;
  rep.pe_count = pe_count;
  rep.baseline = baseline_latency(spec.block_length, pe_count);
  rep.counts = cls.counts;
  rep.structure_violations = cls.structure_violations;
  rep.reduced = lscd_latency(rep.baseline, rep.counts);
  return rep;
}

LatencyReport latency_report_from_counts(int block_length, int pe_count,
                                         const CoupleCounts& counts) {
  if (counts.total() != block_length / 2)
    throw std::invalid_argument("couple counts must sum to half the block length");
  LatencyReport rep;
  rep.block_length = block_length;
  rep.pe_count = pe_count;
  rep.baseline = baseline_latency(block_length, pe_count);
  rep.counts = counts;
  rep.structure_violations = 0;
  rep.reduced = lscd_latency(rep.baseline, rep.counts);
  return rep;
}

}  // namespace polarlab
