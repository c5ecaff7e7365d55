#pragma once

#include "tactile/patterns.hpp"
#include "tactile/types.hpp"

#include <span>

namespace tactile {

/// 2|A and B| / (|A| + |B|). Two empty patterns score 1.
double dice(const TactilePattern& a, const TactilePattern& b);

/// Best Dice overlap between s and any dataset pattern.
double performance_q(const TactilePattern& s, const Dataset& dataset);

/// Index of the dataset pattern achieving performance_q (first on ties).
std::size_t best_match(const TactilePattern& s, const Dataset& dataset);

inline double dq_loss(double q_pattern, double q_blank) { return q_pattern - q_blank; }
inline double dq_gain(double q_hallucination, double q_blank) { return q_hallucination - q_blank; }

/// Sample Pearson coefficient. Throws InvalidInput for mismatched or short
/// series and UndefinedCorrelation when either series is constant.
double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

struct ScenarioResult {
  double q_pattern = 0.0;
  double q_corrupted = 0.0;
  double q_blank = 0.0;
  double q_hallucination = 0.0;
  double dq_loss = 0.0;
  double dq_gain = 0.0;

  static ScenarioResult make(double q_pattern, double q_corrupted, double q_blank, double q_hallucination);
  bool consistent(double tolerance = 1e-12) const;
};

}  // namespace tactile
