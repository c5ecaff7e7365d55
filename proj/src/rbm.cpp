#include "tactile/rbm.hpp"

#include <cmath>

namespace tactile {

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Vector sigmoid(const Vector& x) { return x.unaryExpr([](double v) { return sigmoid(v); }); }

Matrix sigmoid(const Matrix& x) { return x.unaryExpr([](double v) { return sigmoid(v); }); }

double softplus(double x) {
  if (x > 0.0) return x + std::log1p(std::exp(-x));
  return std::log1p(std::exp(x));
}

RbmParams RbmParams::zeros(std::size_t visible, std::size_t hidden) {
  RbmParams p;
  p.weights = Matrix::Zero(static_cast<Eigen::Index>(visible), static_cast<Eigen::Index>(hidden));
  p.visible_bias = Vector::Zero(static_cast<Eigen::Index>(visible));
  p.hidden_bias = Vector::Zero(static_cast<Eigen::Index>(hidden));
  p.mask = ConnectivityMask::full(visible, hidden);
  return p;
}

RbmParams RbmParams::initialized(const ConnectivityMask& mask, Rng& rng, double stddev) {
  RbmParams p = zeros(mask.pre_size(), mask.post_size());
  p.mask = mask;
  std::normal_distribution<double> normal(0.0, stddev);
  for (Eigen::Index j = 0; j < p.weights.cols(); ++j) {
    for (Eigen::Index i = 0; i < p.weights.rows(); ++i) p.weights(i, j) = normal(rng);
  }
  p.enforce_mask();
  return p;
}

bool RbmParams::all_finite() const {
  return weights.allFinite() && visible_bias.allFinite() && hidden_bias.allFinite();
}

void RbmParams::validate() const {
  if (weights.rows() != visible_bias.size() || weights.cols() != hidden_bias.size()) {
    throw InvalidInput("RBM weight shape does not match bias lengths");
  }
  if (mask.gate().rows() != weights.rows() || mask.gate().cols() != weights.cols()) {
    throw InvalidInput("RBM mask shape does not match weights");
  }
  if (!all_finite()) throw NumericError("RBM parameters contain non-finite values");
}

Vector hidden_prob_rbm(const LayerState& v, const RbmParams& params) {
  params.validate();
  if (v.size() != params.visible_size()) throw InvalidInput("visible state has wrong length");
  return sigmoid(Vector(params.weights.transpose() * v.values() + params.hidden_bias));
}

Vector visible_prob_rbm(const LayerState& h, const RbmParams& params) {
  params.validate();
  if (h.size() != params.hidden_size()) throw InvalidInput("hidden state has wrong length");
  return sigmoid(Vector(params.weights * h.values() + params.visible_bias));
}

LayerState sample_layer(const Vector& probs, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Vector out(probs.size());
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("probability outside [0, 1]");
    out[i] = uniform(rng) < p ? 1.0 : 0.0;
  }
  return LayerState::from_values(out);
}

Matrix sample_bernoulli(const Matrix& probs, Rng& rng) {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  Matrix out(probs.rows(), probs.cols());
  for (Eigen::Index j = 0; j < probs.cols(); ++j) {
    for (Eigen::Index i = 0; i < probs.rows(); ++i) out(i, j) = uniform(rng) < probs(i, j) ? 1.0 : 0.0;
  }
  return out;
}

Matrix random_binary(std::size_t rows, std::size_t cols, Rng& rng) {
  return sample_bernoulli(Matrix::Constant(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols), 0.5),
                          rng);
}

double energy_rbm(const LayerState& v, const LayerState& h, const RbmParams& params) {
  if (v.size() != params.visible_size() || h.size() != params.hidden_size()) {
    throw InvalidInput("state lengths do not match RBM");
  }
  return -params.visible_bias.dot(v.values()) - params.hidden_bias.dot(h.values()) -
         v.values().dot(params.weights * h.values());
}

double free_energy_marginal(const LayerState& v, const RbmParams& params) {
  params.validate();
  if (v.size() != params.visible_size()) throw InvalidInput("visible state has wrong length");
  const Vector input = params.weights.transpose() * v.values() + params.hidden_bias;
  double f = -params.visible_bias.dot(v.values());
  for (Eigen::Index j = 0; j < input.size(); ++j) f -= softplus(input[j]);
  return f;
}

Matrix stack_columns(std::span<const LayerState> states) {
  if (states.empty()) return {};
  Matrix m(static_cast<Eigen::Index>(states.front().size()), static_cast<Eigen::Index>(states.size()));
  for (std::size_t k = 0; k < states.size(); ++k) {
    if (states[k].size() != states.front().size()) throw InvalidInput("states differ in length");
    m.col(static_cast<Eigen::Index>(k)) = states[k].values();
  }
  return m;
}

}  // namespace tactile
