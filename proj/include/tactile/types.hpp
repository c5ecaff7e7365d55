#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <string>

namespace tactile {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Random source used throughout. Every stochastic operation takes one by
/// reference so that a fixed seed reproduces a run bit for bit.
using Rng = std::mt19937_64;

/// Builds an independent stream from a base seed and a stage tag.
Rng make_rng(std::uint64_t seed, std::uint64_t stream = 0);

// Error taxonomy. Callers that only care about "something went wrong" can
// catch std::exception; the harness maps these onto exit codes.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NumericError : std::domain_error {
  using std::domain_error::domain_error;
};
struct CapacityError : std::length_error {
  using std::length_error::length_error;
};
struct UndefinedCorrelation : std::domain_error {
  using std::domain_error::domain_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Vector whose entries are all 0 or 1. Stored as doubles so it feeds the
/// linear algebra directly.
class BinaryVector {
 public:
  BinaryVector() = default;
  explicit BinaryVector(std::size_t size) : values_(Vector::Zero(static_cast<Eigen::Index>(size))) {}

  /// Throws InvalidInput unless every entry is exactly 0 or 1.
  static BinaryVector from_values(const Vector& values);
  static BinaryVector with_active(std::size_t size, std::initializer_list<std::size_t> active);

  std::size_t size() const { return static_cast<std::size_t>(values_.size()); }
  bool operator[](std::size_t i) const { return values_[static_cast<Eigen::Index>(i)] != 0.0; }
  void set(std::size_t i, bool on);

  std::size_t cardinality() const;
  const Vector& values() const { return values_; }

  std::string to_string() const;

  friend bool operator==(const BinaryVector& a, const BinaryVector& b) {
    return a.values_.size() == b.values_.size() && a.values_ == b.values_;
  }

 private:
  Vector values_;
};

using TactilePattern = BinaryVector;
using LayerState = BinaryVector;

}  // namespace tactile
