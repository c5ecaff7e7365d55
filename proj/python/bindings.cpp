// Python bindings. Patterns and layer states cross the boundary as 1-D numpy
// arrays of 0/1; weights as 2-D float arrays.

#include "tactile/harness.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace tactile;

namespace {

BinaryVector to_state(const Vector& v) { return BinaryVector::from_values(v); }

std::vector<Vector> to_arrays(std::span<const TactilePattern> ps) {
  std::vector<Vector> out;
  for (const auto& p : ps) out.push_back(p.values());
  return out;
}

Dataset to_dataset(const std::vector<Vector>& ps) {
  Dataset d;
  for (const auto& p : ps) d.patterns.push_back(to_state(p));
  return d;
}

py::dict scores_dict(const ScenarioScores& s) {
  py::dict d;
  d["q_pattern"] = s.q_pattern;
  d["q_corrupted"] = s.q_corrupted;
  d["q_blank"] = s.q_blank;
  return d;
}

py::dict result_dict(const ScenarioResult& r) {
  py::dict d;
  d["q_pattern"] = r.q_pattern;
  d["q_corrupted"] = r.q_corrupted;
  d["q_blank"] = r.q_blank;
  d["q_hallucination"] = r.q_hallucination;
  d["dq_loss"] = r.dq_loss;
  d["dq_gain"] = r.dq_gain;
  return d;
}

std::vector<double> trace_values(const QTrace& t) {
  std::vector<double> out;
  for (const auto& e : t.entries) out.push_back(e.q);
  return out;
}

}  // namespace

PYBIND11_MODULE(_tactile, m) {
  m.doc() = "Deep Boltzmann machine model of tactile hallucinations on a 3x6 skin";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);
  py::register_exception<CapacityError>(m, "CapacityError", PyExc_ValueError);
  py::register_exception<UndefinedCorrelation>(m, "UndefinedCorrelation", PyExc_ValueError);

  // ---- patterns and metrics ----
  m.def("triangle_dataset", [] { return to_arrays(make_triangle_dataset().patterns); },
        "The three vertical bar patterns, one per pair of columns.");
  m.def("dice", [](const Vector& a, const Vector& b) { return dice(to_state(a), to_state(b)); });
  m.def("performance_q", [](const Vector& s, const std::vector<Vector>& dataset) {
    return performance_q(to_state(s), to_dataset(dataset));
  });
  m.def("pearson", [](const std::vector<double>& xs, const std::vector<double>& ys) {
    return pearson_correlation(xs, ys);
  });
  m.def("mask", [](const std::string& kind) { return build_mask(parse_receptive_field(kind)).gate(); },
        py::arg("kind"), "18x18 0/1 connectivity gate for 'linear' or 'circular'.");
  m.def("format_patterns", [](const std::vector<Vector>& ps) { return format_patterns(to_dataset(ps).patterns); });
  m.def("parse_patterns", [](const std::string& text) { return to_arrays(parse_patterns(text)); });

  // ---- parameters ----
  py::class_<DbmParams>(m, "DbmParams")
      .def_static("zeros", &DbmParams::zeros, py::arg("visible") = 18, py::arg("hidden1") = 18,
                  py::arg("hidden2") = 18)
      .def_readwrite("w1", &DbmParams::w1)
      .def_readwrite("w2", &DbmParams::w2)
      .def_readwrite("visible_bias", &DbmParams::visible_bias)
      .def_readwrite("hidden1_bias", &DbmParams::hidden1_bias)
      .def_readwrite("hidden2_bias", &DbmParams::hidden2_bias)
      .def_property_readonly("mask1", [](const DbmParams& p) { return p.mask1.gate(); })
      .def_property_readonly("mask2", [](const DbmParams& p) { return p.mask2.gate(); })
      .def("validate", &DbmParams::validate)
      .def("__eq__", [](const DbmParams& a, const DbmParams& b) { return a == b; });

  m.def("write_checkpoint", [](const std::filesystem::path& path, const DbmParams& p, std::uint64_t seed) {
    write_checkpoint(path, Checkpoint{p, seed, {}});
  }, py::arg("path"), py::arg("params"), py::arg("seed") = 0);
  m.def("read_checkpoint", [](const std::filesystem::path& path) {
    Checkpoint c = read_checkpoint(path);
    return py::make_tuple(c.params, c.seed, c.config);
  }, "Returns (params, seed, config echo).");

  // ---- configuration ----
  py::class_<ExperimentConfig>(m, "Config")
      .def(py::init([](const std::string& text) { return parse_config(text); }), py::arg("text") = "",
           "Build from KEY=VALUE text on top of the defaults.")
      .def_static("load", [](const std::filesystem::path& p) { return load_config(p); })
      .def("update", [](const ExperimentConfig& c, const std::string& text) { return parse_config(text, c); },
           "Copy with the KEY=VALUE lines applied.")
      .def("echo", [](const ExperimentConfig& c) { return config_echo(c); })
      .def("validate", &ExperimentConfig::validate)
      .def("trial_seed", &ExperimentConfig::trial_seed)
      .def("__str__", [](const ExperimentConfig& c) { return format_config(c); })
      .def_property("receptive_field", [](const ExperimentConfig& c) { return to_string(c.receptive_field); },
                    [](ExperimentConfig& c, const std::string& k) { c.receptive_field = parse_receptive_field(k); })
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("seed", &ExperimentConfig::base_seed)
      .def_readwrite("output_dir", &ExperimentConfig::output_dir);

  // ---- sampling and decoding ----
  m.def("sample", [](const DbmParams& p, std::size_t count, std::size_t burn_in, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    return to_arrays(sample_dbm_batch(p, burn_in, count, rng));
  }, py::arg("params"), py::arg("count"), py::arg("burn_in") = 100, py::arg("seed") = 0);
  m.def("clamp_and_infer", [](const DbmParams& p, const Vector& v, std::size_t sweeps, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    const HiddenStates h = clamp_and_infer(p, to_state(v), sweeps, rng);
    return py::make_tuple(h.h1.values(), h.h2.values());
  }, py::arg("params"), py::arg("v"), py::arg("sweeps") = 20, py::arg("seed") = 0);
  m.def("decode", [](const DbmParams& p, const Vector& h2, const std::string& mode, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    return decode(p, to_state(h2), {parse_decode_mode(mode), 1}, rng).values();
  }, py::arg("params"), py::arg("h2"), py::arg("mode") = "stochastic", py::arg("seed") = 0);
  m.def("decode_performance", [](const DbmParams& p, const Vector& h2, std::size_t samples, std::uint64_t seed) {
    Rng rng = make_rng(seed);
    return decode_performance(p, to_state(h2), make_triangle_dataset(), {DecodeMode::stochastic, samples}, rng);
  }, py::arg("params"), py::arg("h2"), py::arg("samples") = 100, py::arg("seed") = 0);

  // ---- per-trial experiment steps ----
  m.def("train_trial", [](const ExperimentConfig& c, std::size_t trial) {
    const TrainedTrial t = train_trial(c, experiment_dataset(c), trial);
    py::list curve;
    for (const auto& pt : t.curve.points) curve.append(py::make_tuple(to_string(pt.phase), pt.iteration, pt.q_mean));
    return py::make_tuple(t.params, curve);
  }, py::arg("config"), py::arg("trial") = 0, "Returns (params, [(phase, iteration, q_mean), ...]).");
  m.def("score_trial", [](const ExperimentConfig& c, const DbmParams& p, std::uint64_t seed) {
    return scores_dict(score_trial(c, p, experiment_dataset(c), seed));
  });
  m.def("homeostasis_trial", [](const ExperimentConfig& c, const DbmParams& p, const py::dict& scores,
                                std::size_t trial, std::uint64_t seed) {
    const ScenarioScores s{scores["q_pattern"].cast<double>(), scores["q_corrupted"].cast<double>(),
                           scores["q_blank"].cast<double>()};
    HomeostasisTrial h = homeostasis_trial(c, p, s, experiment_dataset(c), trial, seed);
    return py::make_tuple(result_dict(h.result), trace_values(h.trace), h.params);
  }, py::arg("config"), py::arg("params"), py::arg("scores"), py::arg("trial"), py::arg("seed"),
     "Returns (summary dict, per-step Q trace, adapted params).");

  // ---- whole commands (write files under config.output_dir) ----
  m.def("run_train", [](const ExperimentConfig& c) {
    const TrainReport r = cmd_train(c);
    py::dict d;
    for (Phase ph : {Phase::pretrain1, Phase::pretrain2, Phase::dbm}) d[to_string(ph).c_str()] = r.mean_final_q(ph);
    return d;
  });
  m.def("run_scenarios", [](const ExperimentConfig& c) { return scores_dict(cmd_scenarios(c).mean()); });
  m.def("run_homeostasis", [](const ExperimentConfig& c) {
    const HomeostasisReport r = cmd_homeostasis(c);
    py::dict d = result_dict(r.mean());
    d["rho"] = r.rho ? py::cast(*r.rho) : py::none();
    return d;
  });
  m.def("simulate_skin", [](const ExperimentConfig& c) {
    const SkinReport r = cmd_simulate_skin(c);
    return py::make_tuple(r.acceptance_rate(), to_arrays(r.patterns));
  }, "Returns (acceptance rate, distinct acquired patterns).");
}
