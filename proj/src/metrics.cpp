#include "tactile/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace tactile {

double dice(const TactilePattern& a, const TactilePattern& b) {
  if (a.size() != b.size()) throw InvalidInput("dice: pattern lengths differ");
  const double overlap = a.values().dot(b.values());
  const double total = a.values().sum() + b.values().sum();
  if (total == 0.0) return 1.0;
  return 2.0 * overlap / total;
}

double performance_q(const TactilePattern& s, const Dataset& dataset) {
  return dice(dataset.patterns[best_match(s, dataset)], s);
}

std::size_t best_match(const TactilePattern& s, const Dataset& dataset) {
  if (dataset.empty()) throw InvalidInput("performance Q needs a nonempty dataset");
  std::size_t best = 0;
  double best_q = -1.0;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const double d = dice(dataset.patterns[i], s);
    if (d > best_q) {
      best_q = d;
      best = i;
    }
  }
  return best;
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw InvalidInput("correlation series differ in length");
  if (xs.size() < 2) throw InvalidInput("correlation needs at least two points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx;
    const double dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw UndefinedCorrelation("correlation undefined for a constant series");
  const double rho = sxy / std::sqrt(sxx * syy);
  return std::clamp(rho, -1.0, 1.0);
}

ScenarioResult ScenarioResult::make(double q_pattern, double q_corrupted, double q_blank, double q_hallucination) {
  ScenarioResult r;
  r.q_pattern = q_pattern;
  r.q_corrupted = q_corrupted;
  r.q_blank = q_blank;
  r.q_hallucination = q_hallucination;
  r.dq_loss = tactile::dq_loss(q_pattern, q_blank);
  r.dq_gain = tactile::dq_gain(q_hallucination, q_blank);
  return r;
}

bool ScenarioResult::consistent(double tolerance) const {
  return std::abs(dq_loss - (q_pattern - q_blank)) <= tolerance &&
         std::abs(dq_gain - (q_hallucination - q_blank)) <= tolerance;
}

}  // namespace tactile
