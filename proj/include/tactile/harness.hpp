#pragma once

#include "tactile/checkpoint.hpp"
#include "tactile/connectivity.hpp"
#include "tactile/decoder.hpp"
#include "tactile/homeostasis.hpp"
#include "tactile/metrics.hpp"
#include "tactile/patterns.hpp"
#include "tactile/scenarios.hpp"
#include "tactile/training.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tactile {

struct ExperimentConfig {
  ReceptiveFieldKind receptive_field = ReceptiveFieldKind::circular;
  TrainConfig train;
  HomeostasisConfig homeo;
  AcquisitionConfig acquisition;
  ScenarioConfig scenario;
  DecodeMode decode_mode = DecodeMode::stochastic;
  std::size_t trials = 10;
  std::uint64_t base_seed = 1;
  std::filesystem::path output_dir = "out";
  /// Pattern file to train on; empty means the built-in triangle dataset.
  std::filesystem::path dataset_path;
  /// Rounds presented by simulate-skin, and whether its force stream is noisy.
  std::size_t skin_rounds = 30;
  bool skin_noise = true;

  /// Throws ConfigError describing the first invalid field.
  void validate() const;
  std::uint64_t trial_seed(std::size_t trial) const { return base_seed + trial; }
};

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// Flat KEY=VALUE lines; '#' starts a comment. Keys not present keep the value
/// in `base`. Unknown keys and malformed values throw ConfigError.
ExperimentConfig parse_config(std::string_view text, ExperimentConfig base = {});
/// Throws IoError if the file cannot be read.
ExperimentConfig load_config(const std::filesystem::path& path, ExperimentConfig base = {});
/// Every key with its current value, in documentation order. parse_config of
/// the echo reproduces the config.
ConfigEcho config_echo(const ExperimentConfig& config);
std::string format_config(const ExperimentConfig& config);

/// The training dataset: dataset_path if set, otherwise the triangles.
Dataset experiment_dataset(const ExperimentConfig& config);

// Independent random streams per trial and stage, so each command can be rerun
// on its own and reproduce the same numbers.
enum class Stage : std::uint64_t { train = 1, scenarios = 2, homeostasis = 3, hallucination = 4, skin = 5, decode = 6 };
Rng stage_rng(std::uint64_t trial_seed, Stage stage);

// ---- per-trial building blocks (no file I/O) ----

struct TrainedTrial {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  TrainingCurve curve;
  DbmParams params;
};

/// Pretraining followed by DBM fine-tuning for one trial.
TrainedTrial train_trial(const ExperimentConfig& config, const Dataset& dataset, std::size_t trial);

ScenarioScores score_trial(const ExperimentConfig& config, const DbmParams& params, const Dataset& dataset,
                           std::uint64_t seed);

struct HomeostasisTrial {
  ScenarioResult result;
  QTrace trace;
  DbmParams params;
};

/// Baseline, homeostasis run, then the blank scenario again on the adapted
/// parameters to give Q_hallucination.
HomeostasisTrial homeostasis_trial(const ExperimentConfig& config, const DbmParams& params,
                                   const ScenarioScores& scores, const Dataset& dataset, std::size_t trial,
                                   std::uint64_t seed);

/// Pearson rho between dq_loss and dq_gain, or nullopt when it is undefined.
std::optional<double> loss_gain_correlation(std::span<const ScenarioResult> results);

// ---- commands ----
//
// Output layout under output_dir:
//   checkpoints/<kind>/trial_<t>.ckpt
//   checkpoints_homeostasis/<kind>/trial_<t>.ckpt
//   training_<kind>.csv     phase,iteration,trial,q_mean,seed
//   scenarios_<kind>.csv    trial,q_pattern,q_corrupted,q_blank,dq_loss,seed
//   homeostasis_<kind>.csv  trial,step,q,seed
//   summary_<kind>.csv      trial,q_pattern,q_corrupted,q_blank,q_hallucination,dq_loss,dq_gain,seed
//   correlation.csv         kind,rho,n_trials (one row per kind run so far)

std::filesystem::path checkpoint_path(const ExperimentConfig& config, std::size_t trial, bool after_homeostasis = false);

struct TrainReport {
  std::vector<TrainedTrial> trials;
  double mean_final_q(Phase phase) const;
};
TrainReport cmd_train(const ExperimentConfig& config);

struct ScenarioRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  ScenarioScores scores;
};
struct ScenarioReport {
  std::vector<ScenarioRow> rows;
  ScenarioScores mean() const;
};
/// Reads the trained checkpoints; a missing one is an IoError.
ScenarioReport cmd_scenarios(const ExperimentConfig& config);

struct HomeostasisReport {
  std::vector<ScenarioResult> summary;
  std::vector<QTrace> traces;
  std::optional<double> rho;
  ScenarioResult mean() const;
  /// Mean over trials of each trace's mean over steps [first, last).
  double trace_mean(std::size_t first, std::size_t last) const;
};
HomeostasisReport cmd_homeostasis(const ExperimentConfig& config);

struct SkinReport {
  std::size_t rounds = 0;
  std::size_t accepted = 0;
  std::vector<TactilePattern> patterns;
  std::filesystem::path dataset_file;
  double acceptance_rate() const { return rounds == 0 ? 0.0 : static_cast<double>(accepted) / rounds; }
};
/// Presents the dataset patterns round-robin to a simulated skin, acquires
/// each round and writes the distinct accepted patterns to dataset.txt.
SkinReport cmd_simulate_skin(const ExperimentConfig& config);

/// Decodes every deep state in `states` (pattern-file format) through the
/// checkpoint; writes decoded.txt and decoded_led.txt.
std::vector<TactilePattern> cmd_decode(const ExperimentConfig& config, const std::filesystem::path& checkpoint,
                                       const std::filesystem::path& states);

}  // namespace tactile
