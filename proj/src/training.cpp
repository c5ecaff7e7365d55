#include "tactile/training.hpp"

#include "tactile/metrics.hpp"

#include <algorithm>

namespace tactile {
namespace {

Matrix hidden_probs(const RbmParams& p, const Matrix& v) {
  return sigmoid(Matrix((p.weights.transpose() * v).colwise() + p.hidden_bias));
}

Matrix visible_probs(const RbmParams& p, const Matrix& h) {
  return sigmoid(Matrix((p.weights * h).colwise() + p.visible_bias));
}

Matrix dataset_matrix(const Dataset& dataset) { return stack_columns(dataset.patterns); }

std::vector<TactilePattern> columns_to_patterns(const Matrix& m) {
  std::vector<TactilePattern> out;
  out.reserve(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index k = 0; k < m.cols(); ++k) out.push_back(TactilePattern::from_values(m.col(k)));
  return out;
}

// Free-running RBM chains from a uniform random start.
Matrix run_rbm_chains(const RbmParams& p, std::size_t count, std::size_t sweeps, Rng& rng) {
  Matrix v = random_binary(p.visible_size(), count, rng);
  for (std::size_t s = 0; s < sweeps; ++s) {
    const Matrix h = sample_bernoulli(hidden_probs(p, v), rng);
    v = sample_bernoulli(visible_probs(p, h), rng);
  }
  return v;
}

void record(TrainingCurve& curve, Phase phase, std::size_t iteration, const SampleScore& score) {
  curve.points.push_back({phase, iteration, score.q_mean});
}

bool due(std::size_t iteration, const TrainConfig& config) {
  return config.eval_interval > 0 && iteration % config.eval_interval == 0;
}

}  // namespace

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidInput("learning rate must be positive");
  if (!(fine_tune_learning_rate > 0.0)) throw InvalidInput("fine-tune learning rate must be positive");
  if (iterations < 1) throw InvalidInput("iterations must be >= 1");
  if (particle_count < 1) throw InvalidInput("particle count must be >= 1");
  if (gibbs_steps_per_update < 1) throw InvalidInput("Gibbs steps per update must be >= 1");
  if (eval_samples < 1) throw InvalidInput("evaluation sample count must be >= 1");
  if (!(early_stop_q > 0.0 && early_stop_q <= 1.0)) throw InvalidInput("early-stop Q must lie in (0, 1]");
  if (!(collapse_min_fraction > 0.0 && collapse_min_fraction <= 1.0)) {
    throw InvalidInput("collapse fraction must lie in (0, 1]");
  }
  if (!(init_stddev >= 0.0)) throw InvalidInput("initial weight stddev must be non-negative");
}

PcdState PcdState::random(std::span<const std::size_t> layer_sizes, std::size_t particles, Rng& rng) {
  if (particles < 1) throw InvalidInput("PCD needs at least one particle");
  PcdState s;
  for (std::size_t n : layer_sizes) s.layers.push_back(random_binary(n, particles, rng));
  return s;
}

RbmStats rbm_data_statistics(const RbmParams& params, const Matrix& batch) {
  if (batch.cols() == 0) throw InvalidInput("PCD batch is empty");
  if (batch.rows() != static_cast<Eigen::Index>(params.visible_size())) {
    throw InvalidInput("batch rows do not match visible layer");
  }
  const double n = static_cast<double>(batch.cols());
  const Matrix h = hidden_probs(params, batch);
  return {batch * h.transpose() / n, batch.rowwise().mean(), h.rowwise().mean()};
}

RbmStats rbm_model_statistics(const RbmParams& params, PcdState& pcd, std::size_t sweeps, Rng& rng) {
  if (pcd.layers.size() != 2) throw InvalidInput("RBM PCD state needs two layers");
  Matrix& v = pcd.layers[0];
  Matrix& h = pcd.layers[1];
  for (std::size_t s = 0; s < sweeps; ++s) {
    h = sample_bernoulli(hidden_probs(params, v), rng);
    v = sample_bernoulli(visible_probs(params, h), rng);
  }
  const double n = static_cast<double>(v.cols());
  return {v * h.transpose() / n, v.rowwise().mean(), h.rowwise().mean()};
}

void apply_rbm_update(RbmParams& params, const RbmStats& data, const RbmStats& model, double learning_rate) {
  params.weights += learning_rate * (data.vh - model.vh).cwiseProduct(params.mask.gate());
  params.visible_bias += learning_rate * (data.v - model.v);
  params.hidden_bias += learning_rate * (data.h - model.h);
  params.enforce_mask();
}

void pcd_update(RbmParams& params, const Matrix& batch, PcdState& pcd, const TrainConfig& config, Rng& rng) {
  const RbmStats data = rbm_data_statistics(params, batch);
  const RbmStats model = rbm_model_statistics(params, pcd, config.gibbs_steps_per_update, rng);
  apply_rbm_update(params, data, model, config.learning_rate);
}

void pcd_update(RbmParams& params, std::span<const LayerState> batch, PcdState& pcd, const TrainConfig& config,
                Rng& rng) {
  pcd_update(params, stack_columns(batch), pcd, config, rng);
}

DbmStats dbm_data_statistics(const DbmParams& params, const Matrix& batch, std::size_t mean_field_iterations) {
  if (batch.cols() == 0) throw InvalidInput("PCD batch is empty");
  if (batch.rows() != static_cast<Eigen::Index>(params.visible_size())) {
    throw InvalidInput("batch rows do not match visible layer");
  }
  const double n = static_cast<double>(batch.cols());
  const Matrix bottom_up = (params.w1.transpose() * batch).colwise() + params.hidden1_bias;
  Matrix h1 = sigmoid(bottom_up);
  Matrix h2 = sigmoid(Matrix((params.w2.transpose() * h1).colwise() + params.hidden2_bias));
  for (std::size_t k = 0; k < mean_field_iterations; ++k) {
    h1 = sigmoid(Matrix(bottom_up + params.w2 * h2));
    h2 = sigmoid(Matrix((params.w2.transpose() * h1).colwise() + params.hidden2_bias));
  }
  return {batch * h1.transpose() / n, h1 * h2.transpose() / n, batch.rowwise().mean(), h1.rowwise().mean(),
          h2.rowwise().mean()};
}

DbmStats dbm_model_statistics(const DbmParams& params, PcdState& pcd, std::size_t sweeps, Rng& rng) {
  if (pcd.layers.size() != 3) throw InvalidInput("DBM PCD state needs three layers");
  DbmChains chains{pcd.layers[0], pcd.layers[1], pcd.layers[2]};
  for (std::size_t s = 0; s < sweeps; ++s) gibbs_sweep(params, chains, rng, false);
  pcd.layers = {chains.v, chains.h1, chains.h2};
  const double n = static_cast<double>(chains.count());
  return {chains.v * chains.h1.transpose() / n, chains.h1 * chains.h2.transpose() / n, chains.v.rowwise().mean(),
          chains.h1.rowwise().mean(), chains.h2.rowwise().mean()};
}

void apply_dbm_update(DbmParams& params, const DbmStats& data, const DbmStats& model, double learning_rate) {
  params.w1 += learning_rate * (data.vh1 - model.vh1).cwiseProduct(params.mask1.gate());
  params.w2 += learning_rate * (data.h1h2 - model.h1h2).cwiseProduct(params.mask2.gate());
  params.visible_bias += learning_rate * (data.v - model.v);
  params.hidden1_bias += learning_rate * (data.h1 - model.h1);
  params.hidden2_bias += learning_rate * (data.h2 - model.h2);
  params.enforce_mask();
}

void pcd_update(DbmParams& params, const Matrix& batch, PcdState& pcd, const TrainConfig& config, Rng& rng) {
  const DbmStats data = dbm_data_statistics(params, batch, config.mean_field_iterations);
  const DbmStats model = dbm_model_statistics(params, pcd, config.gibbs_steps_per_update, rng);
  apply_dbm_update(params, data, model, config.fine_tune_learning_rate);
}

std::string to_string(Phase phase) {
  switch (phase) {
    case Phase::pretrain1:
      return "pretrain1";
    case Phase::pretrain2:
      return "pretrain2";
    case Phase::dbm:
      return "dbm";
  }
  return "unknown";
}

double TrainingCurve::final_q(Phase phase) const {
  for (auto it = points.rbegin(); it != points.rend(); ++it) {
    if (it->phase == phase) return it->q_mean;
  }
  return 0.0;
}

SampleScore score_samples(std::span<const TactilePattern> samples, const Dataset& dataset) {
  if (dataset.empty()) throw InvalidInput("cannot score samples against an empty dataset");
  SampleScore score;
  if (samples.empty()) return score;
  std::vector<std::size_t> matches(dataset.size(), 0);
  std::size_t matched = 0;
  double q_sum = 0.0;
  for (const TactilePattern& s : samples) {
    const std::size_t best = best_match(s, dataset);
    const double q = dice(dataset.patterns[best], s);
    q_sum += q;
    if (q == 1.0) {
      ++matches[best];
      ++matched;
    }
  }
  const double n = static_cast<double>(samples.size());
  score.q_mean = q_sum / n;
  score.matched_fraction = static_cast<double>(matched) / n;
  if (matched > 0) {
    score.top_pattern_share =
        static_cast<double>(*std::max_element(matches.begin(), matches.end())) / static_cast<double>(matched);
  }
  return score;
}

bool is_collapsed(const SampleScore& score, const TrainConfig& config) {
  return score.q_mean >= kCollapseQ && score.top_pattern_share > config.collapse_min_fraction;
}

SampleScore evaluate_rbm(const RbmParams& rbm, const Dataset& dataset, const TrainConfig& config, Rng& rng) {
  const Matrix v = run_rbm_chains(rbm, config.eval_samples, config.sample_burn_in, rng);
  return score_samples(columns_to_patterns(v), dataset);
}

SampleScore evaluate_stack(const RbmParams& lower, const RbmParams& upper, const Dataset& dataset,
                           const TrainConfig& config, Rng& rng) {
  const Matrix h1 = run_rbm_chains(upper, config.eval_samples, config.sample_burn_in, rng);
  const Matrix v = sample_bernoulli(visible_probs(lower, h1), rng);
  return score_samples(columns_to_patterns(v), dataset);
}

SampleScore evaluate_dbm(const DbmParams& params, const Dataset& dataset, const TrainConfig& config, Rng& rng) {
  const auto samples = sample_dbm_batch(params, config.sample_burn_in, config.eval_samples, rng);
  return score_samples(samples, dataset);
}

PretrainResult pretrain_dbn(const Dataset& dataset, const ConnectivityMask& mask1, const ConnectivityMask& mask2,
                            const TrainConfig& config, Rng& rng) {
  config.validate();
  if (dataset.empty()) throw InvalidInput("pretraining needs a nonempty dataset");
  if (mask1.post_size() != mask2.pre_size()) throw InvalidInput("masks disagree on the middle layer size");
  Rng eval_rng(rng());
  const Matrix data = dataset_matrix(dataset);
  PretrainResult result;

  // Phase 1: RBM(v, h1) on the patterns.
  RbmParams lower = RbmParams::initialized(mask1, rng, config.init_stddev);
  {
    const std::size_t sizes[] = {lower.visible_size(), lower.hidden_size()};
    PcdState pcd = PcdState::random(sizes, config.particle_count, rng);
    record(result.curve, Phase::pretrain1, 0, evaluate_rbm(lower, dataset, config, eval_rng));
    for (std::size_t it = 1; it <= config.iterations; ++it) {
      pcd_update(lower, data, pcd, config, rng);
      if (due(it, config) || it == config.iterations) {
        record(result.curve, Phase::pretrain1, it, evaluate_rbm(lower, dataset, config, eval_rng));
      }
    }
  }

  // Phase 2: RBM(h1, h2) on h1 states sampled through the frozen phase-1 RBM.
  RbmParams upper = RbmParams::initialized(mask2, rng, config.init_stddev);
  {
    const std::size_t sizes[] = {upper.visible_size(), upper.hidden_size()};
    PcdState pcd = PcdState::random(sizes, config.particle_count, rng);
    const Matrix h1_probs = hidden_probs(lower, data);
    record(result.curve, Phase::pretrain2, 0, evaluate_stack(lower, upper, dataset, config, eval_rng));
    for (std::size_t it = 1; it <= config.iterations; ++it) {
      const Matrix h1 = sample_bernoulli(h1_probs, rng);
      pcd_update(upper, h1, pcd, config, rng);
      if (due(it, config) || it == config.iterations) {
        record(result.curve, Phase::pretrain2, it, evaluate_stack(lower, upper, dataset, config, eval_rng));
      }
    }
  }

  result.params = DbmParams::assemble(lower, upper);
  return result;
}

DbmTrainResult train_dbm(DbmParams params, const Dataset& dataset, const TrainConfig& config, Rng& rng) {
  DbmTrainResult result;
  if (config.iterations == 0) {
    result.params = std::move(params);
    return result;
  }
  config.validate();
  params.validate();
  if (dataset.empty()) throw InvalidInput("training needs a nonempty dataset");
  Rng eval_rng(rng());
  const Matrix data = dataset_matrix(dataset);
  const std::size_t sizes[] = {params.visible_size(), params.hidden1_size(), params.hidden2_size()};
  PcdState pcd = PcdState::random(sizes, config.particle_count, rng);

  DbmParams snapshot = params;
  SampleScore score = evaluate_dbm(params, dataset, config, eval_rng);
  record(result.curve, Phase::dbm, 0, score);
  if (!is_collapsed(score, config)) {
    for (std::size_t it = 1; it <= config.iterations; ++it) {
      pcd_update(params, data, pcd, config, rng);
      if (!(due(it, config) || it == config.iterations)) continue;
      score = evaluate_dbm(params, dataset, config, eval_rng);
      if (is_collapsed(score, config)) {
        result.curve.collapsed = true;
        params = snapshot;
        break;
      }
      record(result.curve, Phase::dbm, it, score);
      snapshot = params;
      if (score.q_mean >= config.early_stop_q) {
        result.curve.early_stopped = true;
        break;
      }
    }
  } else {
    result.curve.collapsed = true;
  }
  result.params = std::move(params);
  return result;
}

}  // namespace tactile
