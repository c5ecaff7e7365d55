#pragma once

#include "tactile/dbm.hpp"
#include "tactile/rbm.hpp"

namespace tactile {

/// Networks with more units than this are refused by the enumeration routines.
inline constexpr std::size_t kMaxEnumerationUnits = 20;

struct PartitionResult {
  double log_z = 0.0;
  double z = 0.0;
  double log_probability = 0.0;
  double probability = 0.0;
};

/// Exact Z = sum_x exp(-F(x)) over all visible states and p(v) = exp(-F(v)) / Z.
/// Throws CapacityError beyond kMaxEnumerationUnits total units.
PartitionResult partition_and_prob(const LayerState& v, const RbmParams& params);
PartitionResult partition_and_prob(const LayerState& v, const DbmParams& params);

/// -log sum_{h1,h2} exp(-E(v, h1, h2)), summing h1 analytically and
/// enumerating h2. Throws CapacityError beyond kMaxEnumerationUnits.
double free_energy_dbm(const LayerState& v, const DbmParams& params);

/// The binary state whose bits are the low `size` bits of `index`.
LayerState state_from_index(std::size_t index, std::size_t size);

}  // namespace tactile
