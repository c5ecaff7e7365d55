#pragma once

#include "tactile/dbm.hpp"
#include "tactile/patterns.hpp"
#include "tactile/rbm.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tactile {

struct TrainConfig {
  /// Step size of both pretraining phases.
  double learning_rate = 0.03;
  /// Step size of the joint DBM phase.
  double fine_tune_learning_rate = 0.015;
  std::size_t iterations = 2000;
  std::size_t particle_count = 200;
  std::size_t gibbs_steps_per_update = 1;
  std::size_t eval_interval = 50;
  std::size_t eval_samples = 100;
  /// Gibbs sweeps from a random start before an evaluation sample is read.
  std::size_t sample_burn_in = 100;
  double early_stop_q = 0.99;
  double collapse_min_fraction = 0.9;
  double init_stddev = 0.01;
  /// Extra mean-field refinements of the clamped phase after the upward pass.
  std::size_t mean_field_iterations = 1;
  std::uint64_t rng_seed = 0;

  void validate() const;
};

/// Samples scoring at least this Q while one pattern dominates count as collapse.
inline constexpr double kCollapseQ = 0.9;

/// Persistent fantasy particles: one matrix per layer, one particle per column.
struct PcdState {
  std::vector<Matrix> layers;

  std::size_t particle_count() const { return layers.empty() ? 0 : static_cast<std::size_t>(layers[0].cols()); }
  static PcdState random(std::span<const std::size_t> layer_sizes, std::size_t particles, Rng& rng);
};

/// Batch-averaged sufficient statistics of an RBM.
struct RbmStats {
  Matrix vh;
  Vector v;
  Vector h;
};

/// Visible clamped to the batch columns; hidden side uses activation probabilities.
RbmStats rbm_data_statistics(const RbmParams& params, const Matrix& batch);
/// Advances the particles by `sweeps` Gibbs sweeps and averages their sampled states.
RbmStats rbm_model_statistics(const RbmParams& params, PcdState& pcd, std::size_t sweeps, Rng& rng);
/// W += lr * (data.vh - model.vh) on allowed entries; biases likewise.
void apply_rbm_update(RbmParams& params, const RbmStats& data, const RbmStats& model, double learning_rate);

/// One persistent-contrastive-divergence step on a full batch (columns of `batch`).
void pcd_update(RbmParams& params, const Matrix& batch, PcdState& pcd, const TrainConfig& config, Rng& rng);
void pcd_update(RbmParams& params, std::span<const LayerState> batch, PcdState& pcd, const TrainConfig& config,
                Rng& rng);

struct DbmStats {
  Matrix vh1;
  Matrix h1h2;
  Vector v;
  Vector h1;
  Vector h2;
};

/// Visible clamped; one bottom-up pass of activation probabilities through both
/// hidden layers, then `mean_field_iterations` rounds that add top-down input to h1.
DbmStats dbm_data_statistics(const DbmParams& params, const Matrix& batch, std::size_t mean_field_iterations = 0);
DbmStats dbm_model_statistics(const DbmParams& params, PcdState& pcd, std::size_t sweeps, Rng& rng);
void apply_dbm_update(DbmParams& params, const DbmStats& data, const DbmStats& model, double learning_rate);

/// Joint step on both layer pairs at fine_tune_learning_rate.
void pcd_update(DbmParams& params, const Matrix& batch, PcdState& pcd, const TrainConfig& config, Rng& rng);

enum class Phase { pretrain1, pretrain2, dbm };
std::string to_string(Phase phase);

struct TrainingPoint {
  Phase phase = Phase::pretrain1;
  std::size_t iteration = 0;
  double q_mean = 0.0;
};

struct TrainingCurve {
  std::vector<TrainingPoint> points;
  bool early_stopped = false;
  bool collapsed = false;

  /// Last recorded Q of a phase, or 0 if the phase never ran.
  double final_q(Phase phase) const;
};

/// Summary of a batch of generated patterns against the dataset.
struct SampleScore {
  double q_mean = 0.0;
  /// Share of samples that reproduce a dataset pattern exactly.
  double matched_fraction = 0.0;
  /// Largest share of exact matches claimed by a single dataset pattern.
  double top_pattern_share = 0.0;
};

SampleScore score_samples(std::span<const TactilePattern> samples, const Dataset& dataset);
bool is_collapsed(const SampleScore& score, const TrainConfig& config);

/// Mean Q of free-running samples from the lower RBM alone.
SampleScore evaluate_rbm(const RbmParams& rbm, const Dataset& dataset, const TrainConfig& config, Rng& rng);
/// Mean Q of samples drawn from the upper RBM and projected to the visible layer through the lower RBM.
SampleScore evaluate_stack(const RbmParams& lower, const RbmParams& upper, const Dataset& dataset,
                           const TrainConfig& config, Rng& rng);
SampleScore evaluate_dbm(const DbmParams& params, const Dataset& dataset, const TrainConfig& config, Rng& rng);

struct PretrainResult {
  DbmParams params;
  TrainingCurve curve;
};

/// Greedy layer-wise pretraining. Phase 1 fits RBM(v, h1) to the dataset;
/// phase 2 fits RBM(h1, h2) to h1 states sampled from the dataset through the
/// phase-1 RBM.
PretrainResult pretrain_dbn(const Dataset& dataset, const ConnectivityMask& mask1, const ConnectivityMask& mask2,
                            const TrainConfig& config, Rng& rng);

struct DbmTrainResult {
  DbmParams params;
  TrainingCurve curve;
};

/// Joint PCD fine-tuning with periodic evaluation. Stops when the mean
/// sampled Q reaches early_stop_q, at the iteration cap, or on collapse; on
/// collapse the parameters from the previous evaluation are returned.
DbmTrainResult train_dbm(DbmParams params, const Dataset& dataset, const TrainConfig& config, Rng& rng);

}  // namespace tactile
