#include "tactile/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace tactile {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double to_double(const std::string& key, const std::string& value) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw ConfigError(key + ": '" + value + "' is not a number");
  }
  return x;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  std::uint64_t x = 0;
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
  if (ec != std::errc() || p != value.data() + value.size()) {
    throw ConfigError(key + ": '" + value + "' is not a non-negative integer");
  }
  return x;
}

std::size_t to_size(const std::string& key, const std::string& value) {
  return static_cast<std::size_t>(to_u64(key, value));
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true") return true;
  if (value == "0" || value == "false") return false;
  throw ConfigError(key + ": '" + value + "' is not a boolean (true/false/1/0)");
}

std::string show(double x) {
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return ec == std::errc() ? std::string(buf, end) : "nan";
}

std::string show(std::uint64_t x) { return std::to_string(x); }

std::string show_decode_mode(DecodeMode m) {
  return m == DecodeMode::stochastic ? "stochastic" : "deterministic";
}

struct Key {
  std::string name;
  std::function<std::string(const ExperimentConfig&)> get;
  std::function<void(ExperimentConfig&, const std::string&)> set;
};

#define TACTILE_DOUBLE_KEY(NAME, FIELD)                                                     \
  Key {                                                                                     \
    NAME, [](const ExperimentConfig& c) { return show(c.FIELD); },                          \
        [](ExperimentConfig& c, const std::string& v) { c.FIELD = to_double(NAME, v); }     \
  }
#define TACTILE_SIZE_KEY(NAME, FIELD)                                                       \
  Key {                                                                                     \
    NAME, [](const ExperimentConfig& c) { return show(static_cast<std::uint64_t>(c.FIELD)); }, \
        [](ExperimentConfig& c, const std::string& v) { c.FIELD = to_size(NAME, v); }       \
  }

const std::vector<Key>& keys() {
  static const std::vector<Key> table = {
      // Skin firmware parameters.
      TACTILE_DOUBLE_KEY("MAX_FORCE", acquisition.force_threshold),
      TACTILE_SIZE_KEY("MIN_NUMBER_OF_CELLS", acquisition.min_cells),
      TACTILE_SIZE_KEY("COMBINE_ITER", acquisition.combine_iter),
      TACTILE_SIZE_KEY("DISPLAY_DURATION", acquisition.display_duration),
      // Experiment.
      Key{"RECEPTIVE_FIELD", [](const ExperimentConfig& c) { return to_string(c.receptive_field); },
          [](ExperimentConfig& c, const std::string& v) {
            try {
              c.receptive_field = parse_receptive_field(v);
            } catch (const InvalidInput& e) {
              throw ConfigError(std::string("RECEPTIVE_FIELD: ") + e.what());
            }
          }},
      TACTILE_SIZE_KEY("TRIALS", trials),
      Key{"SEED", [](const ExperimentConfig& c) { return show(c.base_seed); },
          [](ExperimentConfig& c, const std::string& v) { c.base_seed = to_u64("SEED", v); }},
      Key{"OUTPUT_DIR", [](const ExperimentConfig& c) { return c.output_dir.string(); },
          [](ExperimentConfig& c, const std::string& v) { c.output_dir = v; }},
      Key{"DATASET", [](const ExperimentConfig& c) { return c.dataset_path.string(); },
          [](ExperimentConfig& c, const std::string& v) { c.dataset_path = v; }},
      // Training.
      TACTILE_DOUBLE_KEY("LEARNING_RATE", train.learning_rate),
      TACTILE_DOUBLE_KEY("FINE_TUNE_LEARNING_RATE", train.fine_tune_learning_rate),
      TACTILE_SIZE_KEY("ITERATIONS", train.iterations),
      TACTILE_SIZE_KEY("PARTICLES", train.particle_count),
      TACTILE_SIZE_KEY("GIBBS_STEPS", train.gibbs_steps_per_update),
      TACTILE_SIZE_KEY("MEAN_FIELD_ITERATIONS", train.mean_field_iterations),
      TACTILE_SIZE_KEY("EVAL_INTERVAL", train.eval_interval),
      TACTILE_SIZE_KEY("EVAL_SAMPLES", train.eval_samples),
      TACTILE_SIZE_KEY("SAMPLE_BURN_IN", train.sample_burn_in),
      TACTILE_DOUBLE_KEY("EARLY_STOP_Q", train.early_stop_q),
      TACTILE_DOUBLE_KEY("COLLAPSE_FRACTION", train.collapse_min_fraction),
      TACTILE_DOUBLE_KEY("INIT_STDDEV", train.init_stddev),
      // Scenarios and decoding.
      TACTILE_SIZE_KEY("INFERENCE_SWEEPS", scenario.inference_sweeps),
      TACTILE_SIZE_KEY("SCENARIO_CHAINS", scenario.chains_per_input),
      TACTILE_SIZE_KEY("SCENARIO_DECODES", scenario.decodes),
      TACTILE_SIZE_KEY("CORRUPT_CELLS", scenario.corrupt_cells),
      Key{"DECODE_MODE", [](const ExperimentConfig& c) { return show_decode_mode(c.decode_mode); },
          [](ExperimentConfig& c, const std::string& v) {
            try {
              c.decode_mode = parse_decode_mode(v);
            } catch (const InvalidInput& e) {
              throw ConfigError(std::string("DECODE_MODE: ") + e.what());
            }
          }},
      // Homeostasis.
      TACTILE_DOUBLE_KEY("ETA", homeo.eta),
      TACTILE_SIZE_KEY("HOMEOSTASIS_STEPS", homeo.steps),
      TACTILE_SIZE_KEY("BASELINE_SWEEPS", homeo.baseline_sweeps),
      TACTILE_SIZE_KEY("BASELINE_BURN_IN", homeo.baseline_burn_in),
      TACTILE_SIZE_KEY("ACTIVITY_WINDOW", homeo.activity_window),
      TACTILE_SIZE_KEY("DECODE_SAMPLES", homeo.decode_samples),
      // Skin simulation.
      TACTILE_SIZE_KEY("SKIN_ROUNDS", skin_rounds),
      Key{"SKIN_NOISE", [](const ExperimentConfig& c) { return std::string(c.skin_noise ? "true" : "false"); },
          [](ExperimentConfig& c, const std::string& v) { c.skin_noise = to_bool("SKIN_NOISE", v); }},
  };
  return table;
}

#undef TACTILE_DOUBLE_KEY
#undef TACTILE_SIZE_KEY

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw IoError("cannot create directory " + dir.string());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) ensure_dir(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

std::string kind_name(const ExperimentConfig& c) { return to_string(c.receptive_field); }

std::filesystem::path csv_path(const ExperimentConfig& c, std::string_view stem) {
  return c.output_dir / (std::string(stem) + "_" + kind_name(c) + ".csv");
}

void validate_or_config_error(const std::function<void()>& check) {
  try {
    check();
  } catch (const InvalidInput& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  validate_or_config_error([&] {
    train.validate();
    homeo.validate();
    acquisition.validate();
    scenario.validate();
  });
  if (trials < 1) throw ConfigError("TRIALS must be >= 1");
  if (output_dir.empty()) throw ConfigError("OUTPUT_DIR must not be empty");
  if (skin_rounds < 1) throw ConfigError("SKIN_ROUNDS must be >= 1");
}

ExperimentConfig parse_config(std::string_view text, ExperimentConfig base) {
  std::map<std::string, const Key*> by_name;
  for (const Key& k : keys()) by_name[k.name] = &k;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line_no) + ": expected KEY=VALUE");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = by_name.find(key);
    if (it == by_name.end()) throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    it->second->set(base, value);
  }
  return base;
}

ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), std::move(base));
}

ConfigEcho config_echo(const ExperimentConfig& config) {
  ConfigEcho out;
  for (const Key& k : keys()) out.emplace_back(k.name, k.get(config));
  return out;
}

std::string format_config(const ExperimentConfig& config) {
  std::string out;
  for (const auto& [k, v] : config_echo(config)) out += k + "=" + v + "\n";
  return out;
}

Dataset experiment_dataset(const ExperimentConfig& config) {
  if (config.dataset_path.empty()) return make_triangle_dataset();
  return load_dataset(config.dataset_path, config.acquisition);
}

Rng stage_rng(std::uint64_t trial_seed, Stage stage) {
  return make_rng(trial_seed, static_cast<std::uint64_t>(stage));
}

TrainedTrial train_trial(const ExperimentConfig& config, const Dataset& dataset, std::size_t trial) {
  TrainedTrial out;
  out.trial = trial;
  out.seed = config.trial_seed(trial);
  TrainConfig tc = config.train;
  tc.rng_seed = out.seed;
  Rng rng = stage_rng(out.seed, Stage::train);
  const ConnectivityMask mask = build_mask(config.receptive_field);
  PretrainResult pre = pretrain_dbn(dataset, mask, mask, tc, rng);
  DbmTrainResult fine = train_dbm(std::move(pre.params), dataset, tc, rng);
  out.curve = std::move(pre.curve);
  out.curve.points.insert(out.curve.points.end(), fine.curve.points.begin(), fine.curve.points.end());
  out.curve.early_stopped = fine.curve.early_stopped;
  out.curve.collapsed = fine.curve.collapsed;
  out.params = std::move(fine.params);
  return out;
}

ScenarioScores score_trial(const ExperimentConfig& config, const DbmParams& params, const Dataset& dataset,
                           std::uint64_t seed) {
  Rng rng = stage_rng(seed, Stage::scenarios);
  return evaluate_scenarios(params, dataset, config.scenario, rng);
}

HomeostasisTrial homeostasis_trial(const ExperimentConfig& config, const DbmParams& params,
                                   const ScenarioScores& scores, const Dataset& dataset, std::size_t trial,
                                   std::uint64_t seed) {
  HomeostasisConfig hc = config.homeo;
  hc.rng_seed = seed;
  Rng rng = stage_rng(seed, Stage::homeostasis);
  const BaselineActivity mu = measure_baseline(params, dataset, hc, rng);
  HomeostasisResult run = run_homeostasis(params, mu, hc, dataset, rng, static_cast<int>(trial));
  Rng hallucination_rng = stage_rng(seed, Stage::hallucination);
  const double q_hallucination = blank_scenario_q(run.params, dataset, config.scenario, hallucination_rng);
  HomeostasisTrial out;
  out.result = ScenarioResult::make(scores.q_pattern, scores.q_corrupted, scores.q_blank, q_hallucination);
  out.trace = std::move(run.trace);
  out.params = std::move(run.params);
  return out;
}

std::optional<double> loss_gain_correlation(std::span<const ScenarioResult> results) {
  std::vector<double> loss, gain;
  for (const ScenarioResult& r : results) {
    loss.push_back(r.dq_loss);
    gain.push_back(r.dq_gain);
  }
  try {
    return pearson_correlation(loss, gain);
  } catch (const UndefinedCorrelation&) {
    return std::nullopt;
  } catch (const InvalidInput&) {
    return std::nullopt;
  }
}

std::filesystem::path checkpoint_path(const ExperimentConfig& config, std::size_t trial, bool after_homeostasis) {
  return config.output_dir / (after_homeostasis ? "checkpoints_homeostasis" : "checkpoints") / kind_name(config) /
         ("trial_" + std::to_string(trial) + ".ckpt");
}

double TrainReport::mean_final_q(Phase phase) const {
  if (trials.empty()) return 0.0;
  double sum = 0.0;
  for (const TrainedTrial& t : trials) sum += t.curve.final_q(phase);
  return sum / static_cast<double>(trials.size());
}

TrainReport cmd_train(const ExperimentConfig& config) {
  config.validate();
  const Dataset dataset = experiment_dataset(config);
  ensure_dir(config.output_dir);
  TrainReport report;
  std::string csv = "phase,iteration,trial,q_mean,seed\n";
  for (std::size_t t = 0; t < config.trials; ++t) {
    TrainedTrial trial = train_trial(config, dataset, t);
    for (const TrainingPoint& p : trial.curve.points) {
      csv += to_string(p.phase) + "," + std::to_string(p.iteration) + "," + std::to_string(t) + "," + fmt(p.q_mean) +
             "," + std::to_string(trial.seed) + "\n";
    }
    const auto path = checkpoint_path(config, t);
    ensure_dir(path.parent_path());
    write_checkpoint(path, Checkpoint{trial.params, trial.seed, config_echo(config)});
    report.trials.push_back(std::move(trial));
  }
  write_text(csv_path(config, "training"), csv);
  return report;
}

ScenarioScores ScenarioReport::mean() const {
  ScenarioScores m;
  if (rows.empty()) return m;
  for (const ScenarioRow& r : rows) {
    m.q_pattern += r.scores.q_pattern;
    m.q_corrupted += r.scores.q_corrupted;
    m.q_blank += r.scores.q_blank;
  }
  const double n = static_cast<double>(rows.size());
  m.q_pattern /= n;
  m.q_corrupted /= n;
  m.q_blank /= n;
  return m;
}

ScenarioReport cmd_scenarios(const ExperimentConfig& config) {
  config.validate();
  const Dataset dataset = experiment_dataset(config);
  ScenarioReport report;
  std::string csv = "trial,q_pattern,q_corrupted,q_blank,dq_loss,seed\n";
  for (std::size_t t = 0; t < config.trials; ++t) {
    const Checkpoint ckpt = read_checkpoint(checkpoint_path(config, t));
    const ScenarioScores s = score_trial(config, ckpt.params, dataset, ckpt.seed);
    csv += std::to_string(t) + "," + fmt(s.q_pattern) + "," + fmt(s.q_corrupted) + "," + fmt(s.q_blank) + "," +
           fmt(dq_loss(s.q_pattern, s.q_blank)) + "," + std::to_string(ckpt.seed) + "\n";
    report.rows.push_back({t, ckpt.seed, s});
  }
  write_text(csv_path(config, "scenarios"), csv);
  return report;
}

ScenarioResult HomeostasisReport::mean() const {
  ScenarioResult m;
  if (summary.empty()) return m;
  for (const ScenarioResult& r : summary) {
    m.q_pattern += r.q_pattern;
    m.q_corrupted += r.q_corrupted;
    m.q_blank += r.q_blank;
    m.q_hallucination += r.q_hallucination;
  }
  const double n = static_cast<double>(summary.size());
  return ScenarioResult::make(m.q_pattern / n, m.q_corrupted / n, m.q_blank / n, m.q_hallucination / n);
}

double HomeostasisReport::trace_mean(std::size_t first, std::size_t last) const {
  if (traces.empty()) return 0.0;
  double sum = 0.0;
  for (const QTrace& t : traces) sum += t.mean_between(first, last);
  return sum / static_cast<double>(traces.size());
}

HomeostasisReport cmd_homeostasis(const ExperimentConfig& config) {
  config.validate();
  const Dataset dataset = experiment_dataset(config);
  HomeostasisReport report;
  std::string trace_csv = "trial,step,q,seed\n";
  std::string summary_csv = "trial,q_pattern,q_corrupted,q_blank,q_hallucination,dq_loss,dq_gain,seed\n";
  for (std::size_t t = 0; t < config.trials; ++t) {
    const Checkpoint ckpt = read_checkpoint(checkpoint_path(config, t));
    const ScenarioScores scores = score_trial(config, ckpt.params, dataset, ckpt.seed);
    HomeostasisTrial h = homeostasis_trial(config, ckpt.params, scores, dataset, t, ckpt.seed);
    const std::string seed = std::to_string(ckpt.seed);
    for (const QTrace::Entry& e : h.trace.entries) {
      trace_csv += std::to_string(t) + "," + std::to_string(e.step) + "," + fmt(e.q) + "," + seed + "\n";
    }
    const ScenarioResult& r = h.result;
    summary_csv += std::to_string(t) + "," + fmt(r.q_pattern) + "," + fmt(r.q_corrupted) + "," + fmt(r.q_blank) +
                   "," + fmt(r.q_hallucination) + "," + fmt(r.dq_loss) + "," + fmt(r.dq_gain) + "," + seed + "\n";
    const auto path = checkpoint_path(config, t, true);
    ensure_dir(path.parent_path());
    write_checkpoint(path, Checkpoint{h.params, ckpt.seed, ckpt.config});
    report.summary.push_back(r);
    report.traces.push_back(std::move(h.trace));
  }
  report.rho = loss_gain_correlation(report.summary);
  write_text(csv_path(config, "homeostasis"), trace_csv);
  write_text(csv_path(config, "summary"), summary_csv);

  // correlation.csv keeps one row per kind; rows for other kinds survive.
  const auto corr_path = config.output_dir / "correlation.csv";
  std::map<std::string, std::string> rows;
  if (std::ifstream in(corr_path); in) {
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      const auto comma = line.find(',');
      if (comma != std::string::npos) rows[line.substr(0, comma)] = line;
    }
  }
  rows[kind_name(config)] = kind_name(config) + "," + (report.rho ? fmt(*report.rho) : std::string("nan")) + "," +
                            std::to_string(report.summary.size());
  std::string corr_csv = "kind,rho,n_trials\n";
  for (const auto& [kind, line] : rows) corr_csv += line + "\n";
  write_text(corr_path, corr_csv);
  return report;
}

SkinReport cmd_simulate_skin(const ExperimentConfig& config) {
  config.validate();
  const Dataset source = experiment_dataset(config);
  Rng rng = stage_rng(config.base_seed, Stage::skin);
  SkinReport report;
  report.rounds = config.skin_rounds;
  for (std::size_t r = 0; r < config.skin_rounds; ++r) {
    const TactilePattern& shown = source.patterns[r % source.size()];
    const auto frames =
        simulate_round(shown, config.acquisition, config.skin_noise, rng, r * config.acquisition.combine_iter);
    const auto acquired = acquire_pattern(frames, config.acquisition);
    if (!acquired) continue;
    ++report.accepted;
    if (std::find(report.patterns.begin(), report.patterns.end(), *acquired) == report.patterns.end()) {
      report.patterns.push_back(*acquired);
    }
  }
  report.dataset_file = config.output_dir / "dataset.txt";
  ensure_dir(config.output_dir);
  write_pattern_file(report.dataset_file, report.patterns);
  return report;
}

std::vector<TactilePattern> cmd_decode(const ExperimentConfig& config, const std::filesystem::path& checkpoint,
                                       const std::filesystem::path& states) {
  config.validate();
  const Checkpoint ckpt = read_checkpoint(checkpoint);
  const std::vector<LayerState> deep = read_pattern_file(states);
  Rng rng = stage_rng(config.base_seed, Stage::decode);
  const DecodeConfig dc{config.decode_mode, 1};
  std::vector<TactilePattern> out;
  std::string led;
  for (const LayerState& h2 : deep) {
    if (h2.size() != ckpt.params.hidden2_size()) throw ParseError("hidden state has the wrong number of units");
    out.push_back(decode(ckpt.params, h2, dc, rng));
    if (!led.empty()) led += "\n";
    led += format_led_frames(render_led_frames(out.back(), config.acquisition));
  }
  ensure_dir(config.output_dir);
  write_pattern_file(config.output_dir / "decoded.txt", out);
  write_text(config.output_dir / "decoded_led.txt", led);
  return out;
}

}  // namespace tactile
