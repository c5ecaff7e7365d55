#include "tactile/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace tactile {
namespace {

double log_sum_exp(const std::vector<double>& xs) {
  const double peak = *std::max_element(xs.begin(), xs.end());
  if (!std::isfinite(peak)) return peak;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - peak);
  return peak + std::log(acc);
}

void check_capacity(std::size_t units) {
  if (units > kMaxEnumerationUnits) {
    throw CapacityError("exact enumeration limited to " + std::to_string(kMaxEnumerationUnits) + " units, got " +
                        std::to_string(units));
  }
}

template <typename FreeEnergy>
PartitionResult normalise(const LayerState& v, std::size_t visible, FreeEnergy free_energy) {
  if (v.size() != visible) throw InvalidInput("visible state has wrong length");
  std::vector<double> neg_f(std::size_t{1} << visible);
  for (std::size_t x = 0; x < neg_f.size(); ++x) neg_f[x] = -free_energy(state_from_index(x, visible));
  PartitionResult r;
  r.log_z = log_sum_exp(neg_f);
  r.z = std::exp(r.log_z);
  r.log_probability = -free_energy(v) - r.log_z;
  r.probability = std::exp(r.log_probability);
  return r;
}

}  // namespace

LayerState state_from_index(std::size_t index, std::size_t size) {
  LayerState s(size);
  for (std::size_t i = 0; i < size; ++i) s.set(i, (index >> i) & 1U);
  return s;
}

PartitionResult partition_and_prob(const LayerState& v, const RbmParams& params) {
  params.validate();
  check_capacity(params.visible_size() + params.hidden_size());
  return normalise(v, params.visible_size(),
                   [&](const LayerState& x) { return free_energy_marginal(x, params); });
}

double free_energy_dbm(const LayerState& v, const DbmParams& params) {
  params.validate();
  check_capacity(params.visible_size() + params.hidden1_size() + params.hidden2_size());
  if (v.size() != params.visible_size()) throw InvalidInput("visible state has wrong length");
  const std::size_t n2 = params.hidden2_size();
  const Vector bottom_up = params.w1.transpose() * v.values() + params.hidden1_bias;
  const double visible_term = params.visible_bias.dot(v.values());
  std::vector<double> terms(std::size_t{1} << n2);
  for (std::size_t x = 0; x < terms.size(); ++x) {
    const LayerState h2 = state_from_index(x, n2);
    const Vector input = bottom_up + params.w2 * h2.values();
    double t = visible_term + params.hidden2_bias.dot(h2.values());
    for (Eigen::Index j = 0; j < input.size(); ++j) t += softplus(input[j]);
    terms[x] = t;
  }
  return -log_sum_exp(terms);
}

PartitionResult partition_and_prob(const LayerState& v, const DbmParams& params) {
  params.validate();
  check_capacity(params.visible_size() + params.hidden1_size() + params.hidden2_size());
  return normalise(v, params.visible_size(), [&](const LayerState& x) { return free_energy_dbm(x, params); });
}

}  // namespace tactile
