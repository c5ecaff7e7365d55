#pragma once

#include "tactile/connectivity.hpp"
#include "tactile/harness.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tactile {

/// Reference scenario scores the experiments are compared against.
struct ReferenceScores {
  double q_pattern;
  double q_corrupted;
  double q_blank;
  double q_hallucination;
  double dq_gain;
};
ReferenceScores reference_scores(ReceptiveFieldKind kind);

namespace thresholds {
inline constexpr double kPretrainQ = 0.80;
inline constexpr double kFineTuneQ = 0.90;
inline constexpr double kPatternQMin = 0.75;
inline constexpr double kKindGap = 0.05;
inline constexpr double kScenarioBand = 0.15;
inline constexpr double kMinGain = 0.10;
inline constexpr double kAblationGain = 0.03;
inline constexpr double kMinRho = 0.5;
inline constexpr std::size_t kTraceEarlyEnd = 100;
/// Length of the closing stretch; with 2000 steps it covers steps 1500-2000.
inline constexpr std::size_t kTraceLateSpan = 500;
}  // namespace thresholds

struct CheckLine {
  std::string name;
  bool passed = false;
  std::string detail;
};

bool all_passed(const std::vector<CheckLine>& lines);
std::string format_check(const CheckLine& line);

/// Pretraining and fine-tuning levels. Only circular connectivity has targets.
std::vector<CheckLine> check_training(const TrainReport& report, ReceptiveFieldKind kind);
/// Pattern level, ordering, and the band around the reference scores.
std::vector<CheckLine> check_scenarios(const ScenarioScores& mean, ReceptiveFieldKind kind);
/// circular Q_pattern >= linear Q_pattern - gap.
CheckLine check_kind_gap(const ScenarioScores& circular, const ScenarioScores& linear);
/// Gain and trace rise over a run of `steps` steps; with eta = 0, the gain
/// must vanish instead.
std::vector<CheckLine> check_homeostasis(const HomeostasisReport& report, double eta, std::size_t steps);
CheckLine check_correlation(const std::optional<double>& rho, ReceptiveFieldKind kind);
/// Every round accepted and the distinct acquisitions equal the source set.
std::vector<CheckLine> check_skin(const SkinReport& report, const Dataset& source);

}  // namespace tactile
