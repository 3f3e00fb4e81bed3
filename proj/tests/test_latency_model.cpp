#include <doctest.h>

#include <json.hpp>
#include <stdexcept>
#include <vector>

#include "polarlab/latency_model.hpp"
#include "polarlab/polar_code.hpp"

using namespace polarlab;

namespace {

CoupleCounts counts_of(long i, long ii, long iii, long iv, long v, long vi) {
  CoupleCounts c;
  c[CoupleCase::kBothReliable] = i;
  c[CoupleCase::kFrozenReliable] = ii;
  c[CoupleCase::kUnreliableReliable] = iii;
  c[CoupleCase::kBothFrozen] = iv;
  c[CoupleCase::kFrozenUnreliable] = v;
  c[CoupleCase::kBothUnreliable] = vi;
  return c;
}

CodeSpec hand_spec(int n, std::vector<int> frozen, std::vector<int> info,
                   std::vector<int> reliable = {}) {
  CodeSpec spec;
  spec.block_length = n;
  spec.info_bits = static_cast<int>(info.size());
  spec.crc_bits = 0;
  spec.frozen_set = std::move(frozen);
  spec.info_set = std::move(info);
  spec.reliable_set = std::move(reliable);
  spec.validate();
  return spec;
}

}  // namespace

TEST_CASE("baseline cycle count: closed form and edge cases") {
  CHECK(baseline_latency(1024, 64) == 3104);
  // N = 4M collapses the traversal surcharge: 3N cycles
  CHECK(baseline_latency(256, 64) == 768);
  CHECK(baseline_latency(1024, 256) == 3072);
  CHECK(baseline_latency(64, 16) == 192);
  CHECK_THROWS_AS(baseline_latency(1000, 64), std::invalid_argument);
  CHECK_THROWS_AS(baseline_latency(1024, 48), std::invalid_argument);
  CHECK_THROWS_AS(baseline_latency(1024, 512), std::invalid_argument);
  CHECK_THROWS_AS(baseline_latency(1024, 0), std::invalid_argument);
}

TEST_CASE("reduced cycle counts for the reference couple profiles") {
  // four published profiles for a 1024-bit half-rate code with 64 processing
  // elements, from loosest to tightest reliability budget
  struct Row {
    CoupleCounts c;
    long want;
  };
  const std::vector<Row> rows = {
      {counts_of(158, 0, 66, 224, 48, 16), 1462},
      {counts_of(168, 0, 64, 224, 48, 8), 1424},
      {counts_of(176, 5, 60, 224, 43, 4), 1381},
      {counts_of(186, 11, 54, 224, 37, 0), 1329},
  };
  for (const Row& row : rows) {
    CHECK(row.c.total() == 512);
    CHECK(lscd_latency(3104, row.c) == row.want);
    const LatencyReport rep = latency_report_from_counts(1024, 64, row.c);
    CHECK(rep.baseline == 3104);
    CHECK(rep.reduced == row.want);
  }
  // savings are monotone in the budget
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].want < rows[i - 1].want);
  CHECK_THROWS_AS(latency_report_from_counts(1024, 64, counts_of(1, 2, 3, 4, 5, 6)),
                  std::invalid_argument);
}

TEST_CASE("couple classification covers every pair exactly once") {
  for (int n : {64, 256, 1024}) {
    for (int k : {n / 4, n / 2, 3 * n / 4}) {
      for (double eps : {-1.0, 0.3, 1.0, 9.0}) {
        const CodeSpec spec = make_code_spec(n, k, 0, 2.0, eps, eps > 0 ? 1e-2 : 0.0);
        const CoupleClassification cls = classify_couples(spec);
        CHECK(cls.counts.total() == n / 2);
        CHECK(cls.structure_violations == 0);
      }
    }
  }
}

TEST_CASE("degenerate codes land in a single class") {
  std::vector<int> first15(15);
  for (int i = 0; i < 15; ++i) first15[i] = i;
  const CodeSpec nearly_frozen = hand_spec(16, first15, {15});
  const CoupleClassification f = classify_couples(nearly_frozen);
  CHECK(f.counts[CoupleCase::kBothFrozen] == 7);
  CHECK(f.counts[CoupleCase::kFrozenUnreliable] == 1);
  CHECK(f.counts.total() == 8);

  const CodeSpec all_info = make_code_spec(16, 16, 0, 2.0);
  const CoupleClassification u = classify_couples(all_info);
  CHECK(u.counts[CoupleCase::kBothUnreliable] == 8);

  std::vector<int> everything(16);
  for (int i = 0; i < 16; ++i) everything[i] = i;
  const CodeSpec all_reliable = hand_spec(16, {}, everything, everything);
  const CoupleClassification r = classify_couples(all_reliable);
  CHECK(r.counts[CoupleCase::kBothReliable] == 8);
  CHECK(lscd_latency(baseline_latency(16, 4), r.counts) ==
        baseline_latency(16, 4) - 4 * 8);
}

TEST_CASE("couples that contradict the reliability ordering are flagged") {
  // (info, frozen) couples should not occur in a well-ordered construction
  const CodeSpec spec = hand_spec(4, {1, 3}, {0, 2});
  const CoupleClassification cls = classify_couples(spec);
  CHECK(cls.structure_violations == 2);
  CHECK(cls.counts[CoupleCase::kBothUnreliable] == 2);
  // conservative fallback: no savings at all
  CHECK(lscd_latency(baseline_latency(4, 1), cls.counts) == baseline_latency(4, 1));

  // (reliable, unreliable) is flagged too: reliability must not precede doubt
  const CodeSpec swapped = hand_spec(4, {0, 1}, {2, 3}, {2});
  const CoupleClassification s = classify_couples(swapped);
  CHECK(s.structure_violations == 1);
}

TEST_CASE("walking the activation schedule reproduces the closed form") {
  struct Pair {
    int n, m;
  };
  for (const Pair p : {Pair{64, 16}, Pair{256, 16}, Pair{256, 64}, Pair{1024, 64},
                       Pair{2048, 64}, Pair{512, 128}}) {
    CHECK(schedule_cycles(p.n, p.m) == baseline_latency(p.n, p.m));
  }
}

TEST_CASE("walking the schedule with skips matches the per-couple accounting") {
  for (int n : {256, 1024}) {
    for (double eps : {0.3, 1.0, 9.0}) {
      const CodeSpec spec = make_code_spec(n, n / 2 + 16, 16, 2.0, eps, 1e-2);
      const int m = n / 16;
      const CoupleClassification cls = classify_couples(spec);
      CHECK(schedule_cycles(spec, m) ==
            lscd_latency(baseline_latency(n, m), cls.counts));
    }
  }
}

TEST_CASE("a larger reliability budget never slows the decoder") {
  const int n = 1024;
  long prev = baseline_latency(n, 64);
  std::size_t prev_size = 0;
  for (double eps : {0.1, 0.3, 1.0, 3.0, 9.0}) {
    const CodeSpec spec = make_code_spec(n, n / 2 + 16, 16, 2.0, eps, 1e-2);
    CHECK(spec.reliable_set.size() >= prev_size);
    prev_size = spec.reliable_set.size();
    const LatencyReport rep = latency_report(spec, 64);
    CHECK(rep.reduced <= prev);
    prev = rep.reduced;
  }
}

TEST_CASE("the latency report serializes every field") {
  const LatencyReport rep =
      latency_report_from_counts(1024, 64, counts_of(158, 0, 66, 224, 48, 16));
  const nlohmann::json j = nlohmann::json::parse(rep.to_json());
  CHECK(j.at("n") == 1024);
  CHECK(j.at("m") == 64);
  CHECK(j.at("d_baseline") == 3104);
  CHECK(j.at("d_lscd") == 1462);
  CHECK(j.at("counts").at("I") == 158);
  CHECK(j.at("counts").at("VI") == 16);
  CHECK(j.at("structure_violations") == 0);
}
