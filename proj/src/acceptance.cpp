#include "tactile/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tactile {
namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

CheckLine at_least(std::string name, double value, double bound) {
  return {std::move(name), value >= bound, num(value) + " >= " + num(bound)};
}

CheckLine within(std::string name, double value, double reference, double band) {
  return {std::move(name), std::abs(value - reference) <= band,
          num(value) + " within " + num(band) + " of " + num(reference)};
}

}  // namespace

ReferenceScores reference_scores(ReceptiveFieldKind kind) {
  if (kind == ReceptiveFieldKind::circular) return {0.87, 0.58, 0.50, 0.72, 0.22};
  return {0.83, 0.50, 0.42, 0.62, 0.20};
}

bool all_passed(const std::vector<CheckLine>& lines) {
  return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.passed; });
}

std::string format_check(const CheckLine& line) {
  return std::string(line.passed ? "PASS " : "FAIL ") + line.name + ": " + line.detail;
}

std::vector<CheckLine> check_training(const TrainReport& report, ReceptiveFieldKind kind) {
  if (kind != ReceptiveFieldKind::circular) return {};
  using namespace thresholds;
  return {at_least("pretrain1 mean Q", report.mean_final_q(Phase::pretrain1), kPretrainQ),
          at_least("pretrain2 mean Q", report.mean_final_q(Phase::pretrain2), kPretrainQ),
          at_least("dbm mean Q", report.mean_final_q(Phase::dbm), kFineTuneQ)};
}

std::vector<CheckLine> check_scenarios(const ScenarioScores& mean, ReceptiveFieldKind kind) {
  using namespace thresholds;
  const std::string k = to_string(kind) + " ";
  const ReferenceScores ref = reference_scores(kind);
  std::vector<CheckLine> out;
  out.push_back({k + "Q_pattern range", mean.q_pattern >= kPatternQMin && mean.q_pattern <= 1.0,
                 num(mean.q_pattern) + " in [" + num(kPatternQMin) + ", 1]"});
  out.push_back({k + "ordering", mean.q_pattern > mean.q_corrupted && mean.q_corrupted >= mean.q_blank,
                 num(mean.q_pattern) + " > " + num(mean.q_corrupted) + " >= " + num(mean.q_blank)});
  out.push_back(within(k + "Q_pattern band", mean.q_pattern, ref.q_pattern, kScenarioBand));
  out.push_back(within(k + "Q_corrupted band", mean.q_corrupted, ref.q_corrupted, kScenarioBand));
  out.push_back(within(k + "Q_blank band", mean.q_blank, ref.q_blank, kScenarioBand));
  return out;
}

CheckLine check_kind_gap(const ScenarioScores& circular, const ScenarioScores& linear) {
  const double bound = linear.q_pattern - thresholds::kKindGap;
  return {"circular vs linear Q_pattern", circular.q_pattern >= bound,
          num(circular.q_pattern) + " >= " + num(linear.q_pattern) + " - " + num(thresholds::kKindGap)};
}

std::vector<CheckLine> check_homeostasis(const HomeostasisReport& report, double eta, std::size_t steps) {
  using namespace thresholds;
  const double gain = report.mean().dq_gain;
  if (eta == 0.0) {
    return {{"eta=0 gain vanishes", std::abs(gain) <= kAblationGain, "|" + num(gain) + "| <= " + num(kAblationGain)}};
  }
  // Shorter runs compare their own first and last stretches.
  const std::size_t early_end = std::min(kTraceEarlyEnd, steps);
  const std::size_t late_begin = steps > kTraceLateSpan ? steps - kTraceLateSpan : 0;
  const double early = report.trace_mean(0, early_end);
  const double late = report.trace_mean(late_begin, steps);
  return {at_least("mean dQ_gain", gain, kMinGain),
          {"trace rises", late > early,
           "steps " + std::to_string(late_begin) + "-" + std::to_string(steps) + " " + num(late) + " > steps 0-" +
               std::to_string(early_end) + " " + num(early)}};
}

CheckLine check_correlation(const std::optional<double>& rho, ReceptiveFieldKind kind) {
  const std::string name = to_string(kind) + " loss/gain rho";
  if (!rho) return {name, false, "undefined (constant series)"};
  return at_least(name, *rho, thresholds::kMinRho);
}

std::vector<CheckLine> check_skin(const SkinReport& report, const Dataset& source) {
  bool same = report.patterns.size() == source.size();
  for (const TactilePattern& p : source.patterns) {
    same = same && std::find(report.patterns.begin(), report.patterns.end(), p) != report.patterns.end();
  }
  return {{"acceptance rate", report.acceptance_rate() == 1.0,
           std::to_string(report.accepted) + "/" + std::to_string(report.rounds)},
          {"acquired set equals source", same, std::to_string(report.patterns.size()) + " distinct patterns"}};
}

}  // namespace tactile
