#include "polarlab/sim.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "polarlab/channel.hpp"
#include "polarlab/rng.hpp"
#include "polarlab/scd.hpp"

#include <json.hpp>

namespace polarlab {

namespace {

struct FrameOut {
  std::uint8_t block_err = 0;
  std::uint8_t crc_miss = 0;
  int bit_err = 0;
  DecodeStats stats;
};

PrunerKind pruner_of(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::kLscdDts:
      return PrunerKind::kDts;
    case DecoderKind::kLscdDtsAdvance:
      return PrunerKind::kDtsAdvance;
    default:
      return PrunerKind::kExact;
  }
}

// effective code description: an explicit override wins, then a recomputed
// budgeted set, then whatever the spec already carries
CodeSpec effective_spec(const SimConfig& cfg) {
  CodeSpec spec = cfg.spec;
  if (!cfg.reliable_override.empty()) {
    spec.reliable_set = cfg.reliable_override;
    std::sort(spec.reliable_set.begin(), spec.reliable_set.end());
  } else if (cfg.se_epsilon >= 0.0) {
    const double snr =
        cfg.se_profile_snr_db <= -1e8 ? spec.design_snr_db : cfg.se_profile_snr_db;
    const ReliabilityProfile prof =
        build_reliability(spec.block_length, snr, spec.payload_rate());
    spec.reliable_set =
        select_reliable_set(spec.info_set, prof, cfg.se_epsilon, cfg.p_b_lscd);
  }
  spec.validate();
  return spec;
}

void run_frame(long index, const SimConfig& cfg, const CodeSpec& spec,
               const ChannelConfig& ch, const ScdOptions& scd_opts, ListDecoder* dec,
               FrameOut& out) {
  Rng rng(cfg.master_seed, 2 * static_cast<std::uint64_t>(index));
  BitWord payload(spec.payload_bits());
  for (auto& b : payload) b = static_cast<std::uint8_t>(rng.next_u64() & 1u);
  const BitWord message = spec.crc_bits ? crc16_append(payload) : payload;
  const BitWord u_tx = embed_message(spec, message);
  const BitWord x = polar_transformed(u_tx);
  const std::vector<double> llr = transmit_frame(x, ch, rng);

  BitWord u_hat;
  bool crc_ok = false;
  if (dec) {
    DecodeResult r = dec->decode(llr, 2 * static_cast<std::uint64_t>(index) + 1);
    u_hat = std::move(r.u);
    crc_ok = r.crc_ok;
    out.stats = r.stats;
  } else {
    u_hat = scd_decode(llr, spec, scd_opts);
    if (spec.crc_bits)
      crc_ok = message_crc_ok(spec, extract_message(spec, u_hat));
  }

  const bool wrong = u_hat != u_tx;
  out.block_err = wrong ? 1 : 0;
  out.crc_miss = (wrong && spec.crc_bits > 0 && crc_ok) ? 1 : 0;
  out.bit_err = 0;
  if (wrong) {
    const BitWord got = extract_message(spec, u_hat);
    for (int j = 0; j < spec.payload_bits(); ++j)
      if (got[j] != message[j]) ++out.bit_err;
  }
}

}  // namespace

std::string decoder_name(DecoderKind kind) {
  switch (kind) {
    case DecoderKind::kScd:
      return "scd";
    case DecoderKind::kLscdExact:
      return "lscd-exact";
    case DecoderKind::kLscdDts:
      return "lscd-dts";
    case DecoderKind::kLscdDtsAdvance:
      return "lscd-dts-advance";
  }
  return "scd";
}

DecoderKind decoder_from_name(const std::string& name) {
  if (name == "scd") return DecoderKind::kScd;
  if (name == "lscd-exact") return DecoderKind::kLscdExact;
  if (name == "lscd-dts") return DecoderKind::kLscdDts;
  if (name == "lscd-dts-advance") return DecoderKind::kLscdDtsAdvance;
  throw std::invalid_argument("unknown decoder: " + name);
}

SimPointResult run_point(const SimConfig& cfg, double ebno_db) {
  if (cfg.max_frames < 1) throw std::invalid_argument("max_frames must be >= 1");
  if (cfg.target_block_errors < 1)
    throw std::invalid_argument("target_block_errors must be >= 1");
  const CodeSpec spec = effective_spec(cfg);
  const ChannelConfig ch = make_channel_config(ebno_db, spec.payload_rate());

  Quantizer quant;
  const Quantizer* qp = nullptr;
  if (cfg.quantized) {
    quant = make_quantizer(cfg.llr_bits, cfg.metric_bits, ch.sigma2);
    qp = &quant;
  }

  ListConfig lc;
  lc.list_size = cfg.list_size;
  lc.pruner = pruner_of(cfg.decoder);
  lc.kernel = cfg.kernel;
  lc.copy = CopyPolicy::kLazy;
  lc.se_enabled = !spec.reliable_set.empty();
  lc.rt_index = cfg.rt_index;
  lc.dts_seed = cfg.master_seed;
  lc.quantizer = qp;
  lc.check_prune_bounds = cfg.check_prune_bounds;

  ScdOptions scd_opts;
  scd_opts.exact_kernel = cfg.kernel == KernelMode::kExact;
  scd_opts.quantizer = qp;

  const bool use_list = cfg.decoder != DecoderKind::kScd;
  if (use_list) {
    ListDecoder probe(spec, lc);  // fail fast on config mismatch
    (void)probe;
  }

  const auto t0 = std::chrono::steady_clock::now();
  SimPointResult res;
  res.ebno_db = ebno_db;
  res.payload_bits = spec.payload_bits();

  const int workers = std::max(1, cfg.workers);
  const long chunk_size = std::max<long>(256, 64L * workers);
  long next_frame = 0;
  bool done = false;
  std::vector<FrameOut> outs;

  while (!done && next_frame < cfg.max_frames) {
    const long count = std::min(chunk_size, cfg.max_frames - next_frame);
    outs.assign(count, FrameOut{});
    auto work = [&](int w) {
      std::unique_ptr<ListDecoder> dec;
      if (use_list) dec = std::make_unique<ListDecoder>(spec, lc);
      for (long k = w; k < count; k += workers)
        run_frame(next_frame + k, cfg, spec, ch, scd_opts, dec.get(), outs[k]);
    };
    if (workers == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(workers);
      for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
      for (auto& t : pool) t.join();
    }
    // consume in frame order; the stopping frame is the same for any worker count
    for (long k = 0; k < count && !done; ++k) {
      const FrameOut& o = outs[k];
      ++res.frames;
      res.block_errors += o.block_err;
      res.bit_errors += o.bit_err;
      res.crc_miss += o.crc_miss;
      res.stats.prune_events += o.stats.prune_events;
      res.stats.bound_checks += o.stats.bound_checks;
      res.stats.bound_violations += o.stats.bound_violations;
      if (res.block_errors >= cfg.target_block_errors) done = true;
    }
    next_frame += count;
  }

  res.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::vector<SimPointResult> run_sweep(const SimConfig& cfg, double start_db,
                                      double step_db, double stop_db) {
  if (step_db <= 0.0) throw std::invalid_argument("sweep step must be positive");
  if (start_db > stop_db + 1e-12) throw std::invalid_argument("empty sweep range");
  std::vector<SimPointResult> points;
  for (double db = start_db; db <= stop_db + 1e-9; db += step_db)
    points.push_back(run_point(cfg, db));
  return points;
}

std::string sim_config_json(const SimConfig& cfg) {
  nlohmann::ordered_json j;
  j["spec"] = nlohmann::ordered_json::parse(cfg.spec.to_json());
  j["decoder"] = decoder_name(cfg.decoder);
  j["list_size"] = cfg.list_size;
  j["rt_index"] = cfg.rt_index;
  j["kernel"] = cfg.kernel == KernelMode::kExact ? "exact" : "min-sum";
  j["quantized"] = cfg.quantized;
  j["llr_bits"] = cfg.llr_bits;
  j["metric_bits"] = cfg.metric_bits;
  j["se_epsilon"] = cfg.se_epsilon;
  j["p_b_lscd"] = cfg.p_b_lscd;
  if (cfg.se_profile_snr_db > -1e8) j["se_profile_snr_db"] = cfg.se_profile_snr_db;
  j["reliable_override"] = cfg.reliable_override;
  j["max_frames"] = cfg.max_frames;
  j["target_block_errors"] = cfg.target_block_errors;
  j["master_seed"] = cfg.master_seed;
  j["workers"] = cfg.workers;
  j["check_prune_bounds"] = cfg.check_prune_bounds;
  return j.dump(2);
}

void write_results_csv(const std::string& path, const SimConfig& cfg,
                       const std::vector<SimPointResult>& points) {
  std::ofstream csv(path);
  if (!csv) throw std::runtime_error("cannot open for writing: " + path);
  csv << "ebno_db,frames,block_errors,bit_errors,bler,ber,crc_miss,seconds\n";
  for (const SimPointResult& p : points) {
    std::ostringstream row;
    row.precision(10);
    row << p.ebno_db << ',' << p.frames << ',' << p.block_errors << ',' << p.bit_errors
        << ',' << p.bler() << ',' << p.ber() << ',' << p.crc_miss << ',';
    row.precision(3);
    row << std::fixed << p.wall_seconds;
    csv << row.str() << '\n';
  }
  if (!csv.good()) throw std::runtime_error("write failed: " + path);

  std::ofstream side(path + ".json");
  if (!side) throw std::runtime_error("cannot open for writing: " + path + ".json");
  side << sim_config_json(cfg) << '\n';
  if (!side.good()) throw std::runtime_error("write failed: " + path + ".json");
}

}  // namespace polarlab
