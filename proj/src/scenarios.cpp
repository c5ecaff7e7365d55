#include "tactile/scenarios.hpp"

#include <vector>

namespace tactile {

void ScenarioConfig::validate() const {
  if (chains_per_input < 1 || decodes < 1) throw InvalidInput("scenario chains and decodes must be >= 1");
}

double clamped_decode_q(const DbmParams& params, std::span<const TactilePattern> inputs, const Dataset& dataset,
                        const ScenarioConfig& config, Rng& rng) {
  config.validate();
  if (inputs.empty()) throw InvalidInput("scenario has no inputs");
  std::vector<TactilePattern> clamped;
  clamped.reserve(inputs.size() * config.chains_per_input);
  for (const TactilePattern& p : inputs) {
    for (std::size_t c = 0; c < config.chains_per_input; ++c) clamped.push_back(p);
  }
  const DbmChains chains = clamp_and_infer_batch(params, stack_columns(clamped), config.inference_sweeps, rng);
  const DecodeConfig decode_config{DecodeMode::stochastic, config.decodes};
  double total = 0.0;
  for (Eigen::Index k = 0; k < chains.h2.cols(); ++k) {
    total += decode_performance(params, LayerState::from_values(chains.h2.col(k)), dataset, decode_config, rng);
  }
  return total / static_cast<double>(chains.h2.cols());
}

double pattern_scenario_q(const DbmParams& params, const Dataset& dataset, const ScenarioConfig& config, Rng& rng) {
  return clamped_decode_q(params, dataset.patterns, dataset, config, rng);
}

double corrupted_scenario_q(const DbmParams& params, const Dataset& dataset, const ScenarioConfig& config,
                            Rng& rng) {
  std::vector<TactilePattern> inputs;
  for (const TactilePattern& p : dataset.patterns) {
    for (std::size_t c = 0; c < config.chains_per_input; ++c) inputs.push_back(corrupt(p, config.corrupt_cells, rng));
  }
  ScenarioConfig single = config;
  single.chains_per_input = 1;
  return clamped_decode_q(params, inputs, dataset, single, rng);
}

double blank_scenario_q(const DbmParams& params, const Dataset& dataset, const ScenarioConfig& config, Rng& rng) {
  const std::vector<TactilePattern> inputs(dataset.size(), TactilePattern(params.visible_size()));
  return clamped_decode_q(params, inputs, dataset, config, rng);
}

ScenarioScores evaluate_scenarios(const DbmParams& params, const Dataset& dataset, const ScenarioConfig& config,
                                  Rng& rng) {
  ScenarioScores s;
  s.q_pattern = pattern_scenario_q(params, dataset, config, rng);
  s.q_corrupted = corrupted_scenario_q(params, dataset, config, rng);
  s.q_blank = blank_scenario_q(params, dataset, config, rng);
  return s;
}

}  // namespace tactile
