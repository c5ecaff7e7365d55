#pragma once

#include "tactile/dbm.hpp"
#include "tactile/decoder.hpp"
#include "tactile/patterns.hpp"

namespace tactile {

/// How a clamped-input scenario is scored: each input is clamped in
/// chains_per_input independent chains for inference_sweeps sweeps, and the
/// deep state of every chain is decoded `decodes` times.
struct ScenarioConfig {
  std::size_t inference_sweeps = 20;
  std::size_t chains_per_input = 50;
  std::size_t decodes = 100;
  std::size_t corrupt_cells = 2;

  void validate() const;
};

struct ScenarioScores {
  double q_pattern = 0.0;
  double q_corrupted = 0.0;
  double q_blank = 0.0;
};

/// Mean decode performance over every (input, chain) pair.
double clamped_decode_q(const DbmParams& params, std::span<const TactilePattern> inputs, const Dataset& dataset,
                        const ScenarioConfig& config, Rng& rng);

double pattern_scenario_q(const DbmParams& params, const Dataset& dataset, const ScenarioConfig& config, Rng& rng);
/// Every chain sees its own corruption of a dataset pattern.
double corrupted_scenario_q(const DbmParams& params, const Dataset& dataset, const ScenarioConfig& config,
                            Rng& rng);
/// Same number of chains as the pattern scenario, all clamped to zeros.
double blank_scenario_q(const DbmParams& params, const Dataset& dataset, const ScenarioConfig& config, Rng& rng);

ScenarioScores evaluate_scenarios(const DbmParams& params, const Dataset& dataset, const ScenarioConfig& config,
                                  Rng& rng);

}  // namespace tactile
