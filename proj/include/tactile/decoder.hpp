#pragma once

#include "tactile/dbm.hpp"
#include "tactile/patterns.hpp"

#include <string_view>

namespace tactile {

enum class DecodeMode { stochastic, deterministic_threshold };

DecodeMode parse_decode_mode(std::string_view token);

struct DecodeConfig {
  DecodeMode mode = DecodeMode::stochastic;
  std::size_t samples_per_decode = 100;

  void validate() const;
};

/// Realises a probability vector: Bernoulli draws, or p > 0.5 (ties map to off).
Vector realise(const Vector& probs, DecodeMode mode, Rng& rng);

/// Single feedforward pass from the deep layer to the visible layer:
/// h1 ~ sigmoid(2 W2 h2 + c1), then v ~ sigmoid(W1 h1 + b). The deep stage
/// doubles its weights to make up for the missing bottom-up input; the
/// visible stage does not.
TactilePattern decode(const DbmParams& params, const LayerState& h2, const DecodeConfig& config, Rng& rng);

/// Mean performance Q over samples_per_decode independent decodes of h2.
double decode_performance(const DbmParams& params, const LayerState& h2, const Dataset& dataset,
                          const DecodeConfig& config, Rng& rng);

}  // namespace tactile
