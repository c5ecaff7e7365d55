#include "tactile/dbm.hpp"

namespace tactile {

DbmParams DbmParams::zeros(std::size_t visible, std::size_t hidden1, std::size_t hidden2) {
  DbmParams p;
  p.w1 = Matrix::Zero(static_cast<Eigen::Index>(visible), static_cast<Eigen::Index>(hidden1));
  p.w2 = Matrix::Zero(static_cast<Eigen::Index>(hidden1), static_cast<Eigen::Index>(hidden2));
  p.visible_bias = Vector::Zero(static_cast<Eigen::Index>(visible));
  p.hidden1_bias = Vector::Zero(static_cast<Eigen::Index>(hidden1));
  p.hidden2_bias = Vector::Zero(static_cast<Eigen::Index>(hidden2));
  p.mask1 = ConnectivityMask::full(visible, hidden1);
  p.mask2 = ConnectivityMask::full(hidden1, hidden2);
  return p;
}

DbmParams DbmParams::assemble(const RbmParams& lower, const RbmParams& upper) {
  if (lower.hidden_size() != upper.visible_size()) {
    throw InvalidInput("lower RBM hidden layer does not match upper RBM visible layer");
  }
  DbmParams p;
  p.w1 = lower.weights;
  p.w2 = upper.weights;
  p.visible_bias = lower.visible_bias;
  p.hidden1_bias = 0.5 * (lower.hidden_bias + upper.visible_bias);
  p.hidden2_bias = upper.hidden_bias;
  p.mask1 = lower.mask;
  p.mask2 = upper.mask;
  p.enforce_mask();
  return p;
}

RbmParams DbmParams::lower() const {
  RbmParams r;
  r.weights = w1;
  r.visible_bias = visible_bias;
  r.hidden_bias = hidden1_bias;
  r.mask = mask1;
  return r;
}

RbmParams DbmParams::upper() const {
  RbmParams r;
  r.weights = w2;
  r.visible_bias = hidden1_bias;
  r.hidden_bias = hidden2_bias;
  r.mask = mask2;
  return r;
}

void DbmParams::enforce_mask() {
  w1 = w1.cwiseProduct(mask1.gate());
  w2 = w2.cwiseProduct(mask2.gate());
}

bool DbmParams::all_finite() const {
  return w1.allFinite() && w2.allFinite() && visible_bias.allFinite() && hidden1_bias.allFinite() &&
         hidden2_bias.allFinite();
}

void DbmParams::validate() const {
  if (w1.rows() != visible_bias.size() || w1.cols() != hidden1_bias.size() || w2.rows() != hidden1_bias.size() ||
      w2.cols() != hidden2_bias.size()) {
    throw InvalidInput("DBM weight shapes do not match bias lengths");
  }
  if (mask1.gate().rows() != w1.rows() || mask1.gate().cols() != w1.cols() || mask2.gate().rows() != w2.rows() ||
      mask2.gate().cols() != w2.cols()) {
    throw InvalidInput("DBM mask shapes do not match weights");
  }
  if (!all_finite()) throw NumericError("DBM parameters contain non-finite values");
}

bool operator==(const DbmParams& a, const DbmParams& b) {
  auto same = [](const auto& x, const auto& y) { return x.rows() == y.rows() && x.cols() == y.cols() && x == y; };
  return same(a.w1, b.w1) && same(a.w2, b.w2) && same(a.visible_bias, b.visible_bias) &&
         same(a.hidden1_bias, b.hidden1_bias) && same(a.hidden2_bias, b.hidden2_bias) && a.mask1 == b.mask1 &&
         a.mask2 == b.mask2;
}

Vector dbm_middle_prob(const LayerState& v, const LayerState& h2, const DbmParams& params) {
  params.validate();
  if (v.size() != params.visible_size() || h2.size() != params.hidden2_size()) {
    throw InvalidInput("state lengths do not match DBM");
  }
  return sigmoid(Vector(params.w1.transpose() * v.values() + params.w2 * h2.values() + params.hidden1_bias));
}

double energy_dbm(const LayerState& v, const LayerState& h1, const LayerState& h2, const DbmParams& params) {
  if (v.size() != params.visible_size() || h1.size() != params.hidden1_size() ||
      h2.size() != params.hidden2_size()) {
    throw InvalidInput("state lengths do not match DBM");
  }
  return -params.visible_bias.dot(v.values()) - params.hidden1_bias.dot(h1.values()) -
         params.hidden2_bias.dot(h2.values()) - v.values().dot(params.w1 * h1.values()) -
         h1.values().dot(params.w2 * h2.values());
}

DbmChains DbmChains::random(const DbmParams& params, std::size_t count, Rng& rng) {
  DbmChains c;
  c.v = random_binary(params.visible_size(), count, rng);
  c.h1 = random_binary(params.hidden1_size(), count, rng);
  c.h2 = random_binary(params.hidden2_size(), count, rng);
  return c;
}

SweepActivity gibbs_sweep(const DbmParams& params, DbmChains& chains, Rng& rng, bool clamp_visible) {
  SweepActivity act;
  act.h1 = sigmoid(Matrix((params.w1.transpose() * chains.v + params.w2 * chains.h2).colwise() +
                          params.hidden1_bias));
  chains.h1 = sample_bernoulli(act.h1, rng);
  if (!clamp_visible) {
    chains.v = sample_bernoulli(sigmoid(Matrix((params.w1 * chains.h1).colwise() + params.visible_bias)), rng);
  }
  act.h2 = sigmoid(Matrix((params.w2.transpose() * chains.h1).colwise() + params.hidden2_bias));
  chains.h2 = sample_bernoulli(act.h2, rng);
  return act;
}

TactilePattern sample_dbm(const DbmParams& params, std::size_t burn_in, Rng& rng) {
  return sample_dbm_batch(params, burn_in, 1, rng).front();
}

std::vector<TactilePattern> sample_dbm_batch(const DbmParams& params, std::size_t burn_in, std::size_t count,
                                             Rng& rng) {
  params.validate();
  DbmChains chains = DbmChains::random(params, count, rng);
  for (std::size_t s = 0; s < burn_in; ++s) gibbs_sweep(params, chains, rng, false);
  std::vector<TactilePattern> out;
  out.reserve(count);
  for (Eigen::Index k = 0; k < chains.v.cols(); ++k) {
    out.push_back(TactilePattern::from_values(chains.v.col(k)));
  }
  return out;
}

HiddenStates clamp_and_infer(const DbmParams& params, const TactilePattern& v, std::size_t sweeps, Rng& rng) {
  if (v.size() != params.visible_size()) throw InvalidInput("clamped pattern has wrong length");
  DbmChains chains = clamp_and_infer_batch(params, v.values(), sweeps, rng);
  return {LayerState::from_values(chains.h1.col(0)), LayerState::from_values(chains.h2.col(0))};
}

DbmChains clamp_and_infer_batch(const DbmParams& params, const Matrix& visible, std::size_t sweeps, Rng& rng) {
  params.validate();
  if (visible.rows() != static_cast<Eigen::Index>(params.visible_size())) {
    throw InvalidInput("clamped visible batch has wrong row count");
  }
  DbmChains chains;
  chains.v = visible;
  chains.h1 = random_binary(params.hidden1_size(), static_cast<std::size_t>(visible.cols()), rng);
  chains.h2 = random_binary(params.hidden2_size(), static_cast<std::size_t>(visible.cols()), rng);
  for (std::size_t s = 0; s < sweeps; ++s) gibbs_sweep(params, chains, rng, true);
  return chains;
}

}  // namespace tactile
