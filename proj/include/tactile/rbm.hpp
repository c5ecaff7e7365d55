#pragma once

#include "tactile/connectivity.hpp"
#include "tactile/types.hpp"

#include <span>

namespace tactile {

/// Logistic function without overflow for large |x|.
double sigmoid(double x);
Vector sigmoid(const Vector& x);
Matrix sigmoid(const Matrix& x);

/// log(1 + exp(x)) without overflow.
double softplus(double x);

/// Weights are visible x hidden; weights(i, j) couples visible i to hidden j.
struct RbmParams {
  Matrix weights;
  Vector visible_bias;
  Vector hidden_bias;
  ConnectivityMask mask;

  /// All-zero parameters with a full mask.
  static RbmParams zeros(std::size_t visible, std::size_t hidden);
  /// Gaussian weights (mean 0, given stddev) gated by the mask; zero biases.
  static RbmParams initialized(const ConnectivityMask& mask, Rng& rng, double stddev = 0.01);

  std::size_t visible_size() const { return static_cast<std::size_t>(visible_bias.size()); }
  std::size_t hidden_size() const { return static_cast<std::size_t>(hidden_bias.size()); }

  void enforce_mask() { weights = weights.cwiseProduct(mask.gate()); }
  bool all_finite() const;
  /// Shape consistency and finiteness; throws InvalidInput / NumericError.
  void validate() const;
};

/// p(h_j = 1 | v) = sigmoid(sum_i v_i W_ij + c_j).
Vector hidden_prob_rbm(const LayerState& v, const RbmParams& params);
/// p(v_i = 1 | h) = sigmoid(sum_j W_ij h_j + b_i).
Vector visible_prob_rbm(const LayerState& h, const RbmParams& params);

/// Independent Bernoulli draws. Throws InvalidInput for probabilities outside [0, 1].
LayerState sample_layer(const Vector& probs, Rng& rng);

/// Column-wise Bernoulli draws for batched chains (no range check).
Matrix sample_bernoulli(const Matrix& probs, Rng& rng);
Matrix random_binary(std::size_t rows, std::size_t cols, Rng& rng);

/// E(v, h) = -b'v - c'h - v'Wh.
double energy_rbm(const LayerState& v, const LayerState& h, const RbmParams& params);

/// F(v) = -b'v - sum_j softplus(sum_i v_i W_ij + c_j), i.e. -log sum_h exp(-E(v, h)).
double free_energy_marginal(const LayerState& v, const RbmParams& params);

/// Stacks states as the columns of a matrix.
Matrix stack_columns(std::span<const LayerState> states);

}  // namespace tactile
