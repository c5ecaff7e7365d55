#pragma once

#include "tactile/dbm.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace tactile {

inline constexpr int kCheckpointVersion = 1;

/// Trained parameters plus what is needed to tell where they came from.
struct Checkpoint {
  DbmParams params;
  std::uint64_t seed = 0;
  /// Key/value echo of the configuration that produced the parameters, in file order.
  std::vector<std::pair<std::string, std::string>> config;

  friend bool operator==(const Checkpoint& a, const Checkpoint& b) {
    return a.params == b.params && a.seed == b.seed && a.config == b.config;
  }
};

// Plain text. Doubles are written as hexadecimal floats so reading a file back
// reproduces every bit; masks are written as rows of '0'/'1'.
//
//   tactile-dbm-checkpoint 1
//   seed 42
//   config 2
//   LEARNING_RATE=0.03
//   ...
//   mask mask1 18 18
//   <rows>
//   matrix w1 18 18
//   <rows of space-separated hexfloats>
//   vector visible_bias 18
//   <one line>
std::string format_checkpoint(const Checkpoint& checkpoint);
/// Throws ParseError on any structural problem or a version mismatch.
Checkpoint parse_checkpoint(std::string_view text);

void write_checkpoint(const std::filesystem::path& path, const Checkpoint& checkpoint);
/// Throws IoError if the file cannot be read and ParseError if it is malformed.
Checkpoint read_checkpoint(const std::filesystem::path& path);

/// Shortest text that parses back to exactly `x`.
std::string format_hexfloat(double x);
double parse_hexfloat(std::string_view token);

}  // namespace tactile
