#include "tactile/types.hpp"

namespace tactile {

Rng make_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return Rng(seq);
}

BinaryVector BinaryVector::from_values(const Vector& values) {
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] != 0.0 && values[i] != 1.0) {
      throw InvalidInput("binary vector entry " + std::to_string(i) + " is not 0 or 1");
    }
  }
  BinaryVector out;
  out.values_ = values;
  return out;
}

BinaryVector BinaryVector::with_active(std::size_t size, std::initializer_list<std::size_t> active) {
  BinaryVector out(size);
  for (std::size_t i : active) {
    if (i >= size) throw InvalidInput("active index out of range");
    out.set(i, true);
  }
  return out;
}

void BinaryVector::set(std::size_t i, bool on) {
  if (i >= size()) throw InvalidInput("index out of range");
  values_[static_cast<Eigen::Index>(i)] = on ? 1.0 : 0.0;
}

std::size_t BinaryVector::cardinality() const {
  std::size_t n = 0;
  for (Eigen::Index i = 0; i < values_.size(); ++i) n += values_[i] != 0.0;
  return n;
}

std::string BinaryVector::to_string() const {
  std::string s;
  s.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) s.push_back((*this)[i] ? '1' : '0');
  return s;
}

}  // namespace tactile
