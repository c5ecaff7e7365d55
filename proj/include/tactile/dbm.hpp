#pragma once

#include "tactile/rbm.hpp"

#include <vector>

namespace tactile {

/// Three-layer DBM: visible v, middle h1, deep h2.
/// w1 is visible x h1, w2 is h1 x h2.
struct DbmParams {
  Matrix w1;
  Matrix w2;
  Vector visible_bias;
  Vector hidden1_bias;
  Vector hidden2_bias;
  ConnectivityMask mask1;
  ConnectivityMask mask2;

  static DbmParams zeros(std::size_t visible, std::size_t hidden1, std::size_t hidden2);
  /// Lower RBM (v, h1) and upper RBM (h1, h2) sharing the middle layer. The
  /// middle-layer bias is the mean of the two biases the RBMs learned for it.
  static DbmParams assemble(const RbmParams& lower, const RbmParams& upper);

  RbmParams lower() const;
  RbmParams upper() const;

  std::size_t visible_size() const { return static_cast<std::size_t>(visible_bias.size()); }
  std::size_t hidden1_size() const { return static_cast<std::size_t>(hidden1_bias.size()); }
  std::size_t hidden2_size() const { return static_cast<std::size_t>(hidden2_bias.size()); }

  void enforce_mask();
  bool all_finite() const;
  void validate() const;

  friend bool operator==(const DbmParams& a, const DbmParams& b);
};

/// p(h1_j = 1 | v, h2) = sigmoid(sum_i v_i W1_ij + sum_k W2_jk h2_k + c1_j).
Vector dbm_middle_prob(const LayerState& v, const LayerState& h2, const DbmParams& params);

/// E = -b'v - c1'h1 - c2'h2 - v'W1 h1 - h1'W2 h2.
double energy_dbm(const LayerState& v, const LayerState& h1, const LayerState& h2, const DbmParams& params);

/// A batch of Gibbs chains over all three layers, one chain per column.
struct DbmChains {
  Matrix v;
  Matrix h1;
  Matrix h2;

  std::size_t count() const { return static_cast<std::size_t>(v.cols()); }
  static DbmChains random(const DbmParams& params, std::size_t count, Rng& rng);
};

/// Activation probabilities computed during one sweep, before sampling.
struct SweepActivity {
  Matrix h1;
  Matrix h2;
};

/// One even/odd sweep: h1 given (v, h2), then v (unless clamped) and h2 given h1.
SweepActivity gibbs_sweep(const DbmParams& params, DbmChains& chains, Rng& rng, bool clamp_visible);

/// Free-running sample: random initial state, burn_in sweeps, visible layer returned.
TactilePattern sample_dbm(const DbmParams& params, std::size_t burn_in, Rng& rng);
std::vector<TactilePattern> sample_dbm_batch(const DbmParams& params, std::size_t burn_in, std::size_t count,
                                             Rng& rng);

struct HiddenStates {
  LayerState h1;
  LayerState h2;
};

/// Holds the visible layer at v and Gibbs-updates the hidden layers from a
/// random start for the given number of sweeps.
HiddenStates clamp_and_infer(const DbmParams& params, const TactilePattern& v, std::size_t sweeps, Rng& rng);

/// Batched form: column k of the result's hidden layers is the chain clamped to
/// visible column k.
DbmChains clamp_and_infer_batch(const DbmParams& params, const Matrix& visible, std::size_t sweeps, Rng& rng);

}  // namespace tactile
