#include "tactile/decoder.hpp"

#include "tactile/metrics.hpp"

namespace tactile {

DecodeMode parse_decode_mode(std::string_view token) {
  if (token == "stochastic") return DecodeMode::stochastic;
  if (token == "deterministic" || token == "deterministic-threshold") return DecodeMode::deterministic_threshold;
  throw InvalidInput("unknown decode mode '" + std::string(token) + "'");
}

void DecodeConfig::validate() const {
  if (samples_per_decode < 1) throw InvalidInput("samples per decode must be >= 1");
}

Vector realise(const Vector& probs, DecodeMode mode, Rng& rng) {
  if (mode == DecodeMode::stochastic) return sample_layer(probs, rng).values();
  return probs.unaryExpr([](double p) { return p > 0.5 ? 1.0 : 0.0; });
}

TactilePattern decode(const DbmParams& params, const LayerState& h2, const DecodeConfig& config, Rng& rng) {
  params.validate();
  if (h2.size() != params.hidden2_size()) throw InvalidInput("deep state has wrong length");
  const Vector h1_probs = sigmoid(Vector(2.0 * (params.w2 * h2.values()) + params.hidden1_bias));
  const Vector h1 = realise(h1_probs, config.mode, rng);
  const Vector v_probs = sigmoid(Vector(params.w1 * h1 + params.visible_bias));
  return TactilePattern::from_values(realise(v_probs, config.mode, rng));
}

double decode_performance(const DbmParams& params, const LayerState& h2, const Dataset& dataset,
                          const DecodeConfig& config, Rng& rng) {
  config.validate();
  if (dataset.empty()) throw InvalidInput("decode performance needs a nonempty dataset");
  params.validate();
  if (h2.size() != params.hidden2_size()) throw InvalidInput("deep state has wrong length");

  // Batched equivalent of calling decode() samples_per_decode times.
  const auto n = static_cast<Eigen::Index>(config.samples_per_decode);
  const Vector h1_input = 2.0 * (params.w2 * h2.values()) + params.hidden1_bias;
  const Matrix h1_probs = sigmoid(Vector(h1_input)).replicate(1, n);
  Matrix h1;
  if (config.mode == DecodeMode::stochastic) {
    h1 = sample_bernoulli(h1_probs, rng);
  } else {
    h1 = h1_probs.unaryExpr([](double p) { return p > 0.5 ? 1.0 : 0.0; });
  }
  const Matrix v_probs = sigmoid(Matrix((params.w1 * h1).colwise() + params.visible_bias));
  Matrix v;
  if (config.mode == DecodeMode::stochastic) {
    v = sample_bernoulli(v_probs, rng);
  } else {
    v = v_probs.unaryExpr([](double p) { return p > 0.5 ? 1.0 : 0.0; });
  }
  double total = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) total += performance_q(TactilePattern::from_values(v.col(k)), dataset);
  return total / static_cast<double>(n);
}

}  // namespace tactile
