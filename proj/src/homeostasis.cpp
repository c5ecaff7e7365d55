#include "tactile/homeostasis.hpp"

namespace tactile {

void HomeostasisConfig::validate() const {
  if (!(eta >= 0.0)) throw InvalidInput("adaptation rate must be non-negative");
  if (steps < 1) throw InvalidInput("homeostasis steps must be >= 1");
  if (baseline_sweeps < 1) throw InvalidInput("baseline sweeps must be >= 1");
  if (activity_window < 1) throw InvalidInput("activity window must be >= 1");
  if (decode_samples < 1) throw InvalidInput("decode samples must be >= 1");
}

double QTrace::mean_between(std::size_t first, std::size_t last) const {
  double sum = 0.0;
  std::size_t n = 0;
  for (const Entry& e : entries) {
    if (e.step >= first && e.step < last) {
      sum += e.q;
      ++n;
    }
  }
  return n == 0 ? 0.0 : sum / static_cast<double>(n);
}

BaselineActivity measure_baseline(const DbmParams& params, const Dataset& dataset, const HomeostasisConfig& config,
                                  Rng& rng) {
  config.validate();
  params.validate();
  if (dataset.empty()) throw InvalidInput("baseline needs a nonempty dataset");
  const auto n1 = static_cast<Eigen::Index>(params.hidden1_size());
  const auto n2 = static_cast<Eigen::Index>(params.hidden2_size());

  // All patterns run side by side as columns of one clamped batch.
  DbmChains chains;
  chains.v = stack_columns(dataset.patterns);
  chains.h1 = random_binary(params.hidden1_size(), dataset.size(), rng);
  chains.h2 = random_binary(params.hidden2_size(), dataset.size(), rng);
  for (std::size_t s = 0; s < config.baseline_burn_in; ++s) gibbs_sweep(params, chains, rng, true);

  Vector sum = Vector::Zero(n1 + n2);
  for (std::size_t s = 0; s < config.baseline_sweeps; ++s) {
    const SweepActivity act = gibbs_sweep(params, chains, rng, true);
    sum.head(n1) += act.h1.rowwise().sum();
    sum.tail(n2) += act.h2.rowwise().sum();
  }
  return {sum / static_cast<double>(config.baseline_sweeps * dataset.size())};
}

Vector homeostatic_bias_change(const Vector& mu, const Vector& activity, double eta) {
  if (mu.size() != activity.size()) throw InvalidInput("baseline and activity lengths differ");
  return eta * (mu - activity);
}

HomeostasisChain HomeostasisChain::start(const DbmParams& params, Rng& rng) {
  HomeostasisChain c;
  c.chains.v = Matrix::Zero(static_cast<Eigen::Index>(params.visible_size()), 1);
  c.chains.h1 = random_binary(params.hidden1_size(), 1, rng);
  c.chains.h2 = random_binary(params.hidden2_size(), 1, rng);
  return c;
}

Vector HomeostasisChain::activity() const {
  if (recent_activity.empty()) throw InvalidInput("no activity recorded yet");
  Vector sum = Vector::Zero(recent_activity.front().size());
  for (const Vector& a : recent_activity) sum += a;
  return sum / static_cast<double>(recent_activity.size());
}

double homeostasis_step(DbmParams& params, const BaselineActivity& mu, const HomeostasisConfig& config,
                        HomeostasisChain& chain, const Dataset& dataset, Rng& rng) {
  const auto n1 = static_cast<Eigen::Index>(params.hidden1_size());
  const auto n2 = static_cast<Eigen::Index>(params.hidden2_size());
  if (mu.mu.size() != n1 + n2) throw InvalidInput("baseline length does not match hidden layers");

  chain.chains.v.setZero();
  const SweepActivity act = gibbs_sweep(params, chain.chains, rng, true);
  Vector current(n1 + n2);
  current << act.h1.col(0), act.h2.col(0);
  chain.recent_activity.push_back(std::move(current));
  while (chain.recent_activity.size() > config.activity_window) chain.recent_activity.pop_front();

  const Vector delta = homeostatic_bias_change(mu.mu, chain.activity(), config.eta);
  params.hidden1_bias += delta.head(n1);
  params.hidden2_bias += delta.tail(n2);

  const DecodeConfig decode_config{DecodeMode::stochastic, config.decode_samples};
  return decode_performance(params, LayerState::from_values(chain.chains.h2.col(0)), dataset, decode_config, rng);
}

HomeostasisResult run_homeostasis(DbmParams params, const BaselineActivity& mu, const HomeostasisConfig& config,
                                  const Dataset& dataset, Rng& rng, int trial) {
  config.validate();
  params.validate();
  HomeostasisResult result;
  HomeostasisChain chain = HomeostasisChain::start(params, rng);
  result.trace.entries.reserve(config.steps);
  for (std::size_t step = 0; step < config.steps; ++step) {
    const double q = homeostasis_step(params, mu, config, chain, dataset, rng);
    result.trace.entries.push_back({trial, step, q});
  }
  result.params = std::move(params);
  return result;
}

}  // namespace tactile
