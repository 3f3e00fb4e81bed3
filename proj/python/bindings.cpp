// python bindings for the polar-code codec laboratory
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>

#include "polarlab/channel.hpp"
#include "polarlab/latency_model.hpp"
#include "polarlab/list_decoder.hpp"
#include "polarlab/polar_code.hpp"
#include "polarlab/rng.hpp"
#include "polarlab/scd.hpp"
#include "polarlab/sim.hpp"

namespace py = pybind11;
using namespace polarlab;

namespace {

ListConfig make_list_config(int list_size, const std::string& pruner,
                            const std::string& kernel, bool se_enabled, int rt_index,
                            std::uint64_t seed) {
  ListConfig cfg;
  cfg.list_size = list_size;
  if (pruner == "exact")
    cfg.pruner = PrunerKind::kExact;
  else if (pruner == "dts")
    cfg.pruner = PrunerKind::kDts;
  else if (pruner == "dts-advance")
    cfg.pruner = PrunerKind::kDtsAdvance;
  else
    throw std::invalid_argument("pruner must be exact, dts, or dts-advance");
  if (kernel == "min-sum")
    cfg.kernel = KernelMode::kMinSum;
  else if (kernel == "exact")
    cfg.kernel = KernelMode::kExact;
  else
    throw std::invalid_argument("kernel must be min-sum or exact");
  cfg.se_enabled = se_enabled;
  cfg.rt_index = rt_index;
  cfg.dts_seed = seed;
  return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "polar-code construction, list decoding, and latency modeling";

  py::class_<CodeSpec>(m, "CodeSpec")
      .def_readonly("block_length", &CodeSpec::block_length)
      .def_readonly("info_bits", &CodeSpec::info_bits)
      .def_readonly("crc_bits", &CodeSpec::crc_bits)
      .def_readonly("design_snr_db", &CodeSpec::design_snr_db)
      .def_readonly("frozen_set", &CodeSpec::frozen_set)
      .def_readonly("info_set", &CodeSpec::info_set)
      .def_readonly("reliable_set", &CodeSpec::reliable_set)
      .def_property_readonly("payload_bits", &CodeSpec::payload_bits)
      .def("to_json", &CodeSpec::to_json)
      .def_static("from_json", &CodeSpec::from_json)
      .def("__repr__", [](const CodeSpec& s) {
        return "CodeSpec(n=" + std::to_string(s.block_length) +
               ", k=" + std::to_string(s.info_bits) + ", crc=" + std::to_string(s.crc_bits) +
               ")";
      });

  m.def("make_code_spec", &make_code_spec, py::arg("block_length"), py::arg("info_bits"),
        py::arg("crc_bits"), py::arg("design_snr_db"), py::arg("epsilon") = -1.0,
        py::arg("p_b_lscd") = 0.0);

  m.def("polar_transform", &polar_transformed, py::arg("bits"),
        "source transform u F^(x)n over GF(2); its own inverse");
  m.def("crc16", &crc16, py::arg("bits"));
  m.def("crc16_append", &crc16_append, py::arg("payload"));
  m.def("crc16_check", &crc16_check, py::arg("message"));
  m.def("encode_frame", &encode_frame, py::arg("spec"), py::arg("message"));
  m.def("embed_message", &embed_message, py::arg("spec"), py::arg("message"));
  m.def("extract_message", &extract_message, py::arg("spec"), py::arg("u"));

  m.def(
      "scd_decode",
      [](const std::vector<double>& llr, const CodeSpec& spec, bool exact_kernel) {
        ScdOptions opts;
        opts.exact_kernel = exact_kernel;
        return scd_decode(llr, spec, opts);
      },
      py::arg("llr"), py::arg("spec"), py::arg("exact_kernel") = false);

  m.def(
      "lscd_decode",
      [](const std::vector<double>& llr, const CodeSpec& spec, int list_size,
         const std::string& pruner, const std::string& kernel, bool se_enabled,
         int rt_index, std::uint64_t seed) {
        const ListConfig cfg =
            make_list_config(list_size, pruner, kernel, se_enabled, rt_index, seed);
        const DecodeResult res = lscd_decode(llr, spec, cfg);
        py::dict out;
        out["u"] = res.u;
        out["metric"] = res.metric;
        out["crc_ok"] = res.crc_ok;
        return out;
      },
      py::arg("llr"), py::arg("spec"), py::arg("list_size") = 8,
      py::arg("pruner") = "exact", py::arg("kernel") = "min-sum",
      py::arg("se_enabled") = false, py::arg("rt_index") = -1, py::arg("seed") = 1);

  m.def("baseline_latency", &baseline_latency, py::arg("block_length"), py::arg("pe_count"));
  m.def(
      "latency_report",
      [](const CodeSpec& spec, int pe) { return latency_report(spec, pe).to_json(); },
      py::arg("spec"), py::arg("pe_count"));
  m.def(
      "latency_report_from_counts",
      [](int block_length, int pe, const std::vector<long>& six) {
        if (six.size() != 6) throw std::invalid_argument("expected six couple counts");
        CoupleCounts counts;
        std::copy(six.begin(), six.end(), counts.count.begin());
        return latency_report_from_counts(block_length, pe, counts).to_json();
      },
      py::arg("block_length"), py::arg("pe_count"), py::arg("counts"));

  m.def(
      "run_point",
      [](const CodeSpec& spec, const std::string& decoder, double ebno_db, int list_size,
         long max_frames, long target_block_errors, std::uint64_t seed, int workers,
         int rt_index, double se_epsilon, double p_b_lscd) {
        SimConfig cfg;
        cfg.spec = spec;
        cfg.decoder = decoder_from_name(decoder);
        cfg.list_size = list_size;
        cfg.max_frames = max_frames;
        cfg.target_block_errors = target_block_errors;
        cfg.master_seed = seed;
        cfg.workers = workers;
        cfg.rt_index = rt_index;
        cfg.se_epsilon = se_epsilon;
        cfg.p_b_lscd = p_b_lscd;
        const SimPointResult r = run_point(cfg, ebno_db);
        py::dict out;
        out["ebno_db"] = r.ebno_db;
        out["frames"] = r.frames;
        out["block_errors"] = r.block_errors;
        out["bit_errors"] = r.bit_errors;
        out["bler"] = r.bler();
        out["ber"] = r.ber();
        out["crc_miss"] = r.crc_miss;
        out["seconds"] = r.wall_seconds;
        return out;
      },
      py::arg("spec"), py::arg("decoder"), py::arg("ebno_db"), py::arg("list_size") = 8,
      py::arg("max_frames") = 10000, py::arg("target_block_errors") = 100,
      py::arg("seed") = 1, py::arg("workers") = 1, py::arg("rt_index") = -1,
      py::arg("se_epsilon") = -1.0, py::arg("p_b_lscd") = 0.0);

#ifdef POLARLAB_VERSION
  m.attr("__version__") = POLARLAB_VERSION;
#endif
}
