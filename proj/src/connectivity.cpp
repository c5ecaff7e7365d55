#include "tactile/connectivity.hpp"

#include <algorithm>
#include <cstdlib>

namespace tactile {

ReceptiveFieldKind parse_receptive_field(std::string_view token) {
  if (token == "linear") return ReceptiveFieldKind::linear;
  if (token == "circular") return ReceptiveFieldKind::circular;
  throw InvalidInput("unknown receptive field '" + std::string(token) + "' (expected linear|circular)");
}

std::string to_string(ReceptiveFieldKind kind) {
  return kind == ReceptiveFieldKind::linear ? "linear" : "circular";
}

ConnectivityMask::ConnectivityMask(Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> allowed)
    : gate_(allowed.cast<double>().matrix()) {}

ConnectivityMask ConnectivityMask::full(std::size_t pre, std::size_t post) {
  ConnectivityMask m;
  m.gate_ = Matrix::Ones(static_cast<Eigen::Index>(pre), static_cast<Eigen::Index>(post));
  return m;
}

ConnectivityMask ConnectivityMask::none(std::size_t pre, std::size_t post) {
  ConnectivityMask m;
  m.gate_ = Matrix::Zero(static_cast<Eigen::Index>(pre), static_cast<Eigen::Index>(post));
  return m;
}

std::size_t ConnectivityMask::row_sum(std::size_t pre) const {
  return static_cast<std::size_t>(gate_.row(static_cast<Eigen::Index>(pre)).sum());
}

ConnectivityMask build_mask(ReceptiveFieldKind kind, const SkinGeometry& geometry) {
  const auto n = static_cast<Eigen::Index>(geometry.cell_count());
  const auto cols = static_cast<long>(geometry.cols);
  Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic> allowed(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const long ci = static_cast<long>(geometry.column_of(static_cast<std::size_t>(i)));
      const long cj = static_cast<long>(geometry.column_of(static_cast<std::size_t>(j)));
      long distance = std::labs(ci - cj);
      if (kind == ReceptiveFieldKind::circular) distance = std::min(distance, cols - distance);
      allowed(i, j) = distance <= 1;
    }
  }
  return ConnectivityMask(allowed);
}

Matrix apply_mask(const Matrix& weights, const ConnectivityMask& mask) {
  if (weights.rows() != mask.gate().rows() || weights.cols() != mask.gate().cols()) {
    throw InvalidInput("weight matrix shape does not match connectivity mask");
  }
  return weights.cwiseProduct(mask.gate());
}

}  // namespace tactile
