#pragma once

#include "tactile/dbm.hpp"
#include "tactile/decoder.hpp"
#include "tactile/patterns.hpp"

#include <cstdint>
#include <deque>
#include <vector>

namespace tactile {

/// Healthy mean activity of every hidden neuron: h1 entries first, then h2.
struct BaselineActivity {
  Vector mu;

  std::size_t size() const { return static_cast<std::size_t>(mu.size()); }
};

struct HomeostasisConfig {
  double eta = 0.01;
  std::size_t steps = 2000;
  std::size_t baseline_sweeps = 100;
  std::size_t baseline_burn_in = 10;
  std::size_t activity_window = 10;
  std::size_t decode_samples = 20;
  std::uint64_t rng_seed = 0;

  /// eta = 0 is accepted so the ablation can run through the same code path.
  void validate() const;
};

struct QTrace {
  struct Entry {
    int trial = 0;
    std::size_t step = 0;
    double q = 0.0;
  };
  std::vector<Entry> entries;

  /// Mean q over steps in [first, last).
  double mean_between(std::size_t first, std::size_t last) const;
};

/// Clamps each dataset pattern, runs burn-in plus baseline_sweeps Gibbs sweeps
/// and averages the hidden activation probabilities over sweeps and patterns.
BaselineActivity measure_baseline(const DbmParams& params, const Dataset& dataset, const HomeostasisConfig& config,
                                  Rng& rng);

/// eta * (mu - a).
Vector homeostatic_bias_change(const Vector& mu, const Vector& activity, double eta);

/// Hidden-layer chain running under blank input, plus its recent activity.
struct HomeostasisChain {
  DbmChains chains;
  std::deque<Vector> recent_activity;

  static HomeostasisChain start(const DbmParams& params, Rng& rng);
  /// Mean of the stored activation probabilities (h1 then h2).
  Vector activity() const;
};

/// One step: a Gibbs sweep with the visible layer clamped to zeros, bias
/// update c += eta * (mu - a) with a averaged over the activity window, then
/// decode_samples decodes of the current deep state. Returns that mean Q.
double homeostasis_step(DbmParams& params, const BaselineActivity& mu, const HomeostasisConfig& config,
                        HomeostasisChain& chain, const Dataset& dataset, Rng& rng);

struct HomeostasisResult {
  DbmParams params;
  QTrace trace;
};

HomeostasisResult run_homeostasis(DbmParams params, const BaselineActivity& mu, const HomeostasisConfig& config,
                                  const Dataset& dataset, Rng& rng, int trial = 0);

}  // namespace tactile
