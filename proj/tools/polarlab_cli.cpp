// polarlab: construct polar codes, run Monte-Carlo decoding sweeps, and
// evaluate the cycle-latency model of the low-latency list decoder.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "polarlab/fast_prune.hpp"
#include "polarlab/latency_model.hpp"
#include "polarlab/list_decoder.hpp"
#include "polarlab/polar_code.hpp"
#include "polarlab/rng.hpp"
#include "polarlab/sim.hpp"

namespace {

using namespace polarlab;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

struct EbnoSweep {
  double start = 0.0, step = 1.0, stop = 0.0;
};

// "A" or "A:STEP:B"
EbnoSweep parse_sweep(const std::string& text) {
  EbnoSweep s;
  const auto c1 = text.find(':');
  if (c1 == std::string::npos) {
    s.start = s.stop = std::stod(text);
    s.step = 1.0;
    return s;
  }
  const auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos)
    throw std::invalid_argument("ebno must be A or A:STEP:B, got: " + text);
  s.start = std::stod(text.substr(0, c1));
  s.step = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  s.stop = std::stod(text.substr(c2 + 1));
  return s;
}

CoupleCounts counts_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  if (j.contains("counts")) j = j["counts"];
  const char* names[6] = {"I", "II", "III", "IV", "V", "VI"};
  CoupleCounts counts;
  for (int i = 0; i < 6; ++i) {
    if (!j.contains(names[i]))
      throw std::invalid_argument(std::string("counts file missing key ") + names[i]);
    counts.count[i] = j[names[i]].get<long>();
  }
  return counts;
}

int cmd_construct(int n, int k, int crc_bits, double design_snr, double epsilon,
                  double p_b_lscd, const std::string& out) {
  const CodeSpec spec = make_code_spec(n, k, crc_bits, design_snr, epsilon, p_b_lscd);
  const std::string text = spec.to_json();
  if (out.empty()) {
    std::cout << text << "\n";
  } else {
    spit(out, text + "\n");
    std::cout << "wrote " << out << ": n=" << spec.block_length << " k=" << spec.info_bits
              << " crc=" << spec.crc_bits << " reliable=" << spec.reliable_set.size()
              << "\n";
  }
  return kExitOk;
}

int cmd_simulate(SimConfig cfg, const EbnoSweep& sweep, const std::string& out) {
  const std::vector<SimPointResult> points = run_sweep(cfg, sweep.start, sweep.step, sweep.stop);
  for (const SimPointResult& p : points)
    std::printf("ebno=%.3f dB  frames=%ld  block_errors=%ld  bler=%.6g  ber=%.6g  crc_miss=%ld  (%.1fs)\n",
                p.ebno_db, p.frames, p.block_errors, p.bler(), p.ber(), p.crc_miss,
                p.wall_seconds);
  if (!out.empty()) {
    write_results_csv(out, cfg, points);
    std::cout << "wrote " << out << " and " << out << ".json\n";
  }
  return kExitOk;
}

int cmd_latency(const std::string& spec_path, int pe, const std::string& counts_path,
                int n_override) {
  LatencyReport rep;
  if (!counts_path.empty()) {
    int n = n_override;
    if (n <= 0 && !spec_path.empty())
      n = CodeSpec::from_json(slurp(spec_path)).block_length;
    if (n <= 0)
      throw std::invalid_argument("--counts needs --n or --spec to fix the block length");
    rep = latency_report_from_counts(n, pe, counts_from_json(slurp(counts_path)));
  } else {
    if (spec_path.empty()) throw std::invalid_argument("latency needs --spec or --counts");
    const CodeSpec spec = CodeSpec::from_json(slurp(spec_path));
    rep = latency_report(spec, pe);
    if (rep.structure_violations > 0)
      std::cerr << "warning: " << rep.structure_violations
                << " couple(s) violate the expected (frozen|unreliable, reliable) layout; "
                   "counted without savings\n";
  }
  std::cout << rep.to_json() << "\n";
  return kExitOk;
}

// compact invariant sweep: exercises the properties that hold for every input,
// independent of channel quality
int cmd_selftest() {
  int failures = 0;
  auto report = [&](bool ok, const std::string& name) {
    std::cout << (ok ? "ok - " : "FAIL - ") << name << "\n";
    if (!ok) ++failures;
  };

  {  // source transform is an involution
    Rng rng(1);
    bool ok = true;
    for (int trial = 0; trial < 200 && ok; ++trial) {
      BitWord u(256);
      for (auto& b : u) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
      BitWord v = polar_transformed(polar_transformed(u));
      ok = v == u;
    }
    report(ok, "transform involution (200 x N=256)");
  }
  {  // crc detects single-bit flips
    Rng rng(2);
    bool ok = true;
    for (int trial = 0; trial < 200 && ok; ++trial) {
      BitWord payload(1 + static_cast<int>(rng.below(120)));
      for (auto& b : payload) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
      BitWord msg = crc16_append(payload);
      ok = crc16_check(msg);
      if (ok) {
        const std::size_t flip = rng.below(msg.size());
        msg[flip] ^= 1;
        ok = !crc16_check(msg);
      }
    }
    report(ok, "crc16 round trip and single-flip detection");
  }
  {  // expansion bound across random pruning instances
    Rng rng(3);
    bool ok = true;
    const int L = 16;
    for (int trial = 0; trial < 200000 && ok; ++trial) {
      std::vector<double> parents(L), children;
      double acc = 0.0;
      for (double& p : parents) {
        acc += rng.uniform();
        p = acc;
      }
      children.reserve(2 * L);
      for (double p : parents) {
        children.push_back(p);
        children.push_back(p + 5.0 * rng.uniform());
      }
      ok = prune_bound_violations(parents, children) == 0;
    }
    report(ok, "expansion bound over 2e5 random instances");
  }
  {  // threshold selections agree with a full-sort reference
    Rng rng(4);
    bool ok = true;
    for (int trial = 0; trial < 20000 && ok; ++trial) {
      const int L = 8;
      std::vector<double> metrics(L);
      for (double& m : metrics) m = rng.uniform() * 10.0;
      std::vector<double> sorted(metrics);
      std::sort(sorted.begin(), sorted.end());
      const SortedParents sp = tta(metrics, L - 1);
      ok = sp.thresholds.at == sorted[L / 2] && sp.thresholds.rt == sorted[L - 1];
      for (int r = 0; ok && r < L; ++r) ok = sp.metrics[r] == sorted[r];
    }
    report(ok, "threshold tracker vs full sort");
  }
  {  // exact list pruning returns the true bottom-L multiset
    Rng rng(5);
    bool ok = true;
    for (int trial = 0; trial < 20000 && ok; ++trial) {
      std::vector<PathCandidate> cands;
      std::vector<double> all;
      for (int i = 0; i < 16; ++i) {
        const double m = rng.uniform() * 4.0;
        cands.push_back({m, i / 2, static_cast<std::uint8_t>(i & 1)});
        all.push_back(m);
      }
      auto kept = lpo_exact(cands, 8);
      std::sort(all.begin(), all.end());
      for (int i = 0; ok && i < 8; ++i) ok = kept[i].metric == all[i];
    }
    report(ok, "exact pruning vs sort oracle");
  }
  {  // fused leaf updates match their two-step references
    Rng rng(6);
    bool ok = true;
    for (int trial = 0; trial < 200000 && ok; ++trial) {
      const double l0 = 10.0 * (rng.uniform() - 0.5);
      const double l1 = 10.0 * (rng.uniform() - 0.5);
      const double gamma = rng.uniform();
      // (frozen, frozen): f then g(s=0), paying per hard-decision miss
      const double lf = f_minsum(l0, l1);
      double two_step = pmu_approx(gamma, lf, 0);
      two_step = pmu_approx(two_step, g_func(l0, l1, 0), 0);
      ok = std::fabs(fused_pmu_frozen_frozen(gamma, l0, l1) - two_step) <=
           1e-12 * std::max(1.0, std::fabs(two_step));
      if (ok) {
        const FusedPair fp = fused_pmu_frozen_info(gamma, l0, l1);
        const int u1 = hard_decision(g_func(l0, l1, 0));
        double ref = pmu_approx(gamma, lf, 0);
        ref = pmu_approx(ref, g_func(l0, l1, 0), u1);
        ok = fp.u1 == u1 && std::fabs(fp.metric - ref) <= 1e-12 * std::max(1.0, std::fabs(ref));
      }
    }
    report(ok, "fused leaf updates vs two-step reference (2e5 draws)");
  }
  {  // closed-form latency equals the walked schedule
    bool ok = true;
    for (int n : {256, 1024, 4096})
      for (int m : {16, 64})
        if (m < n / 2) ok = ok && baseline_latency(n, m) == schedule_cycles(n, m);
    report(ok, "latency closed form vs schedule walk");
  }

  std::cout << (failures ? "selftest: FAILED\n" : "selftest: all checks passed\n");
  return failures ? kExitConfig : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polar-code codec laboratory"};
  app.require_subcommand(1);

  // construct
  auto* construct = app.add_subcommand("construct", "build a code description json");
  int c_n = 1024, c_k = 528, c_crc = 0;
  double c_snr = 2.0, c_eps = -1.0, c_pb = 0.0;
  std::string c_out;
  construct->add_option("--n", c_n, "block length (power of two)")->required();
  construct->add_option("--k", c_k, "info bits (payload + crc)")->required();
  construct->add_option("--crc-bits", c_crc, "0 or 16");
  construct->add_option("--design-snr", c_snr, "Eb/N0 in dB for the reliability profile");
  construct->add_option("--epsilon", c_eps, "reliable-set budget factor (off when negative)");
  construct->add_option("--p-b-lscd", c_pb, "list-decoder bit error rate the budget scales");
  construct->add_option("--out", c_out, "output spec path (stdout when omitted)");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo BLER/BER sweep");
  std::string s_spec, s_decoder = "lscd-exact", s_ebno = "2.0", s_out, s_kernel = "min-sum";
  SimConfig scfg;
  bool s_quantized = false, s_use_spec_reliable = false, s_check_bounds = false;
  double s_se_eps = -1.0, s_se_pb = 0.0, s_se_snr = -1e9;
  simulate->add_option("--spec", s_spec, "code description json")->required();
  simulate->add_option("--decoder", s_decoder, "scd | lscd-exact | lscd-dts | lscd-dts-advance");
  simulate->add_option("--list", scfg.list_size, "list size");
  simulate->add_option("--rt-index", scfg.rt_index, "rejection rank (-1: last)");
  simulate->add_option("--ebno", s_ebno, "A or A:STEP:B in dB")->required();
  simulate->add_option("--max-frames", scfg.max_frames, "frame cap per point");
  simulate->add_option("--target-errors", scfg.target_block_errors, "stop after this many block errors");
  simulate->add_option("--seed", scfg.master_seed, "master seed");
  simulate->add_option("--workers", scfg.workers, "worker threads");
  simulate->add_option("--kernel", s_kernel, "min-sum | exact");
  simulate->add_flag("--quantized", s_quantized, "decode on the fixed-point grid");
  simulate->add_option("--llr-bits", scfg.llr_bits, "llr width when quantized");
  simulate->add_option("--metric-bits", scfg.metric_bits, "metric width when quantized");
  simulate->add_option("--se-epsilon", s_se_eps,
                       "enable single-path extension with this budget factor");
  simulate->add_option("--p-b-lscd", s_se_pb, "bit error rate scaling the budget");
  simulate->add_option("--se-snr", s_se_snr, "profile Eb/N0 for the budget (default: design)");
  simulate->add_flag("--se-use-spec", s_use_spec_reliable,
                     "use the reliable set stored in the spec file");
  simulate->add_flag("--check-bounds", s_check_bounds, "instrument pruning bound checks");
  simulate->add_option("--out", s_out, "results csv path (sidecar json added)");

  // latency
  auto* latency = app.add_subcommand("latency", "cycle-count report");
  std::string l_spec, l_counts;
  int l_pe = 64, l_n = 0;
  latency->add_option("--spec", l_spec, "code description json");
  latency->add_option("--pe", l_pe, "processing elements per decoder");
  latency->add_option("--counts", l_counts, "couple-count json (keys I..VI)");
  latency->add_option("--n", l_n, "block length when --counts is used without --spec");

  // selftest
  app.add_subcommand("selftest", "run fast invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (construct->parsed())
      return cmd_construct(c_n, c_k, c_crc, c_snr, c_eps, c_pb, c_out);
    if (simulate->parsed()) {
      scfg.spec = CodeSpec::from_json(slurp(s_spec));
      scfg.decoder = decoder_from_name(s_decoder);
      if (s_kernel == "exact")
        scfg.kernel = KernelMode::kExact;
      else if (s_kernel == "min-sum")
        scfg.kernel = KernelMode::kMinSum;
      else
        throw std::invalid_argument("unknown kernel: " + s_kernel);
      scfg.quantized = s_quantized;
      scfg.check_prune_bounds = s_check_bounds;
      scfg.se_epsilon = s_se_eps;
      scfg.p_b_lscd = s_se_pb;
      scfg.se_profile_snr_db = s_se_snr;
      if (s_use_spec_reliable) {
        scfg.reliable_override = scfg.spec.reliable_set;
        if (scfg.reliable_override.empty())
          throw std::invalid_argument("--se-use-spec: the spec file has no reliable set");
      }
      // the stored set participates only on request; otherwise single-path
      // extension follows --se-epsilon
      scfg.spec.reliable_set.clear();
      if (s_se_eps >= 0.0 && s_se_pb <= 0.0)
        throw std::invalid_argument("--se-epsilon needs a positive --p-b-lscd");
      return cmd_simulate(scfg, parse_sweep(s_ebno), s_out);
    }
    if (latency->parsed()) return cmd_latency(l_spec, l_pe, l_counts, l_n);
    return cmd_selftest();
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kExitIo;
  }
}
