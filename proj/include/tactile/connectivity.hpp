#pragma once

#include "tactile/patterns.hpp"
#include "tactile/types.hpp"

#include <string>
#include <string_view>

namespace tactile {

enum class ReceptiveFieldKind { linear, circular };

/// Accepts "linear" or "circular".
ReceptiveFieldKind parse_receptive_field(std::string_view token);
std::string to_string(ReceptiveFieldKind kind);

/// Which pre-layer neuron (row) may connect to which post-layer neuron (column).
/// Kept as a dense 0/1 matrix so it can gate weight matrices directly.
class ConnectivityMask {
 public:
  ConnectivityMask() = default;
  explicit ConnectivityMask(Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> allowed);

  static ConnectivityMask full(std::size_t pre, std::size_t post);
  static ConnectivityMask none(std::size_t pre, std::size_t post);

  std::size_t pre_size() const { return static_cast<std::size_t>(gate_.rows()); }
  std::size_t post_size() const { return static_cast<std::size_t>(gate_.cols()); }
  bool allowed(std::size_t pre, std::size_t post) const {
    return gate_(static_cast<Eigen::Index>(pre), static_cast<Eigen::Index>(post)) != 0.0;
  }
  std::size_t row_sum(std::size_t pre) const;

  const Matrix& gate() const { return gate_; }

  friend bool operator==(const ConnectivityMask& a, const ConnectivityMask& b) {
    return a.gate_.rows() == b.gate_.rows() && a.gate_.cols() == b.gate_.cols() && a.gate_ == b.gate_;
  }

 private:
  Matrix gate_;
};

/// Column-restricted receptive fields: neuron i connects to neuron j iff their
/// columns differ by at most one, with columns wrapping around for circular.
/// Both layers use the skin's column assignment.
ConnectivityMask build_mask(ReceptiveFieldKind kind, const SkinGeometry& geometry = SkinGeometry::standard());

/// Zeroes every weight the mask forbids. Throws InvalidInput on shape mismatch.
Matrix apply_mask(const Matrix& weights, const ConnectivityMask& mask);

}  // namespace tactile
