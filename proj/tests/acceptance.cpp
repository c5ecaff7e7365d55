// Acceptance run: one PASS/FAIL line per criterion, sub-checks indented below.
//
//   tactile_acceptance [--trials N] [--report FILE] [--strict]
//
// Without --strict the exit status is 0 even when a criterion fails, so the
// report can be produced as part of the normal test run; --strict turns any
// FAIL into exit status 1.

#include "properties.hpp"

#include "tactile/acceptance.hpp"
#include "tactile/harness.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

using namespace tactile;

namespace {

// Pinned tolerances for the oracle suite.
constexpr double kFreeEnergyTol = 1e-10;
constexpr double kNormalisationTol = 1e-9;
constexpr int kOracleInstances = 100;
constexpr int kKlUpdates = 500;
constexpr int kGradientCheckpoints = 5;
constexpr int kMaskUpdates = 1000;
// Share of free-running samples from a trained circular network with Q >= 0.9.
constexpr double kSampleShare = 0.6;
constexpr std::size_t kEscalatedTrials = 20;

std::string num(double x, const char* f = "%.3f") {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

struct Criterion {
  std::string title;
  std::vector<CheckLine> checks;
  std::vector<std::string> notes;
};

struct KindRun {
  ReceptiveFieldKind kind;
  TrainReport train;
  std::vector<ScenarioScores> scores;
  HomeostasisReport homeo;
  HomeostasisReport ablation;

  ScenarioScores mean_scores() const {
    ScenarioScores m;
    for (const auto& s : scores) {
      m.q_pattern += s.q_pattern;
      m.q_corrupted += s.q_corrupted;
      m.q_blank += s.q_blank;
    }
    const double n = static_cast<double>(scores.size());
    return {m.q_pattern / n, m.q_corrupted / n, m.q_blank / n};
  }
};

void run_trials(const ExperimentConfig& config, const Dataset& dataset, std::size_t first, std::size_t last,
                KindRun& run, bool with_ablation) {
  ExperimentConfig ablation = config;
  ablation.homeo.eta = 0.0;
  for (std::size_t t = first; t < last; ++t) {
    const auto start = std::chrono::steady_clock::now();
    TrainedTrial trained = train_trial(config, dataset, t);
    const ScenarioScores s = score_trial(config, trained.params, dataset, trained.seed);
    HomeostasisTrial h = homeostasis_trial(config, trained.params, s, dataset, t, trained.seed);
    run.scores.push_back(s);
    run.homeo.summary.push_back(h.result);
    run.homeo.traces.push_back(std::move(h.trace));
    if (with_ablation) {
      HomeostasisTrial a = homeostasis_trial(ablation, trained.params, s, dataset, t, trained.seed);
      run.ablation.summary.push_back(a.result);
      run.ablation.traces.push_back(std::move(a.trace));
    }
    run.train.trials.push_back(std::move(trained));
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "  %s trial %zu: Q_pattern %.3f  dQ_gain %.3f  (%.1fs)\n", to_string(config.receptive_field).c_str(),
                 t, s.q_pattern, h.result.dq_gain, secs);
  }
  run.homeo.rho = loss_gain_correlation(run.homeo.summary);
}

// Least-squares slope of the trial-averaged trace over [first, last), per step.
double trace_slope(const HomeostasisReport& r, std::size_t first, std::size_t last) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0, n = 0;
  for (std::size_t step = first; step < last; ++step) {
    const double y = r.trace_mean(step, step + 1);
    const double x = static_cast<double>(step);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    n += 1;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

CheckLine verdict_line(const std::string& name, const properties::Verdict& v) { return {name, v.passed, v.detail}; }

}  // namespace

int main(int argc, char** argv) {
  std::size_t trials = 10;
  std::string report_path;
  bool strict = false;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--strict")) {
      strict = true;
    } else if (!std::strcmp(argv[i], "--report") && i + 1 < argc) {
      report_path = argv[++i];
    } else if (!std::strcmp(argv[i], "--trials") && i + 1 < argc) {
      trials = std::stoul(argv[++i]);
    } else {
      std::cerr << "usage: tactile_acceptance [--trials N] [--report FILE] [--strict]\n";
      return 2;
    }
  }

  const Dataset dataset = make_triangle_dataset();
  std::vector<KindRun> runs;
  for (ReceptiveFieldKind kind : {ReceptiveFieldKind::circular, ReceptiveFieldKind::linear}) {
    ExperimentConfig c;
    c.receptive_field = kind;
    KindRun run{kind, {}, {}, {}, {}};
    std::fprintf(stderr, "%s: %zu trials\n", to_string(kind).c_str(), trials);
    run_trials(c, dataset, 0, trials, run, true);
    runs.push_back(std::move(run));
  }
  KindRun& circ = runs[0];
  KindRun& lin = runs[1];
  const ExperimentConfig defaults;
  const std::size_t steps = defaults.homeo.steps;

  std::vector<Criterion> criteria;

  {
    Criterion c{"1 training reproduction (circular)", check_training(circ.train, ReceptiveFieldKind::circular), {}};
    // Free-running samples of the first trained circular network.
    TrainConfig tc = defaults.train;
    tc.eval_samples = 100;
    Rng rng = make_rng(circ.train.trials[0].seed, 99);
    const auto samples = sample_dbm_batch(circ.train.trials[0].params, tc.sample_burn_in, tc.eval_samples, rng);
    std::size_t good = 0;
    for (const auto& s : samples) good += performance_q(s, dataset) >= 0.9;
    const double share = static_cast<double>(good) / static_cast<double>(samples.size());
    c.checks.push_back({"trial 0 samples with Q >= 0.9", share >= kSampleShare,
                        num(share) + " >= " + num(kSampleShare)});
    std::size_t early = 0, collapsed = 0;
    for (const auto& t : circ.train.trials) {
      early += t.curve.early_stopped;
      collapsed += t.curve.collapsed;
    }
    c.notes.push_back(std::to_string(early) + " trials stopped early, " + std::to_string(collapsed) +
                      " hit the collapse guard");
    criteria.push_back(std::move(c));
  }

  {
    Criterion c{"2 scenario table", {}, {}};
    for (const KindRun* r : {&circ, &lin}) {
      for (auto& l : check_scenarios(r->mean_scores(), r->kind)) c.checks.push_back(std::move(l));
    }
    c.checks.push_back(check_kind_gap(circ.mean_scores(), lin.mean_scores()));
    criteria.push_back(std::move(c));
  }

  {
    Criterion c{"3 homeostasis gain", {}, {}};
    for (const KindRun* r : {&circ, &lin}) {
      const std::string k = to_string(r->kind) + " ";
      for (auto l : check_homeostasis(r->homeo, defaults.homeo.eta, steps)) {
        l.name = k + l.name;
        c.checks.push_back(std::move(l));
      }
      for (auto l : check_homeostasis(r->ablation, 0.0, steps)) {
        l.name = k + l.name;
        c.checks.push_back(std::move(l));
      }
      const double slope = trace_slope(r->homeo, steps > 500 ? steps - 500 : 0, steps);
      c.notes.push_back(k + "trace slope over the last 500 steps " + num(slope * 1000.0, "%.4f") + " per 1000 steps");
    }
    criteria.push_back(std::move(c));
  }

  {
    Criterion c{"4 loss/gain correlation", {}, {}};
    auto best = [&] {
      double b = -2.0;
      for (const KindRun* r : {&circ, &lin}) {
        if (r->homeo.rho) b = std::max(b, *r->homeo.rho);
      }
      return b;
    };
    if (best() < thresholds::kMinRho && trials < kEscalatedTrials) {
      c.notes.push_back("rho below threshold at " + std::to_string(trials) + " trials, escalating to " +
                        std::to_string(kEscalatedTrials));
      for (KindRun* r : {&circ, &lin}) {
        ExperimentConfig cfg;
        cfg.receptive_field = r->kind;
        run_trials(cfg, dataset, trials, kEscalatedTrials, *r, false);
      }
    }
    std::vector<CheckLine> per_kind;
    for (const KindRun* r : {&circ, &lin}) {
      per_kind.push_back(check_correlation(r->homeo.rho, r->kind));
      per_kind.back().detail += " over " + std::to_string(r->homeo.summary.size()) + " trials";
    }
    const bool any = per_kind[0].passed || per_kind[1].passed;
    c.checks.push_back({"rho >= " + num(thresholds::kMinRho) + " for at least one kind", any,
                        any ? "met" : "met by neither kind"});
    for (const auto& l : per_kind) c.notes.push_back(format_check(l));
    criteria.push_back(std::move(c));
  }

  {
    Criterion c{"5 exact-inference oracle suite", {}, {}};
    const double fe = properties::free_energy_max_error(kOracleInstances, 501);
    c.checks.push_back({"free energy vs enumeration", fe <= kFreeEnergyTol,
                        "max error " + num(fe, "%.2e") + " over " + std::to_string(kOracleInstances) + " 4x3 RBMs"});
    const double z = properties::normalisation_max_error(kOracleInstances, 502);
    c.checks.push_back({"sum of p(v)", z <= kNormalisationTol, "max |sum - 1| " + num(z, "%.2e")});
    const auto kl = properties::pcd_kl_trajectory(kKlUpdates, 503);
    c.checks.push_back({"KL decreases", kl.after < kl.before,
                        num(kl.before, "%.4f") + " -> " + num(kl.after, "%.4f") + " over " +
                            std::to_string(kKlUpdates) + " PCD updates (6x4)"});
    const auto dots = properties::pcd_gradient_alignment(kGradientCheckpoints, 504);
    bool positive = true;
    std::string list;
    for (double d : dots) {
      positive = positive && d > 0.0;
      list += (list.empty() ? "" : ", ") + num(d, "%.2e");
    }
    c.checks.push_back({"PCD update . exact gradient > 0", positive, list});
    criteria.push_back(std::move(c));
  }

  {
    Criterion c{"6 metric and pipeline invariants", {}, {}};
    c.checks.push_back(verdict_line("dice and Q exhaustive", properties::dice_and_q_exhaustive()));
    c.checks.push_back(verdict_line("mask zeros preserved", properties::mask_preserved(kMaskUpdates)));
    c.checks.push_back(verdict_line("bit-identical reruns", properties::reruns_identical()));
    c.checks.push_back(verdict_line("decoder doubling sentinel", properties::decoder_doubling_sentinel()));
    c.checks.push_back(verdict_line("homeostasis touches hidden biases only", properties::homeostasis_hidden_only()));
    criteria.push_back(std::move(c));
  }

  {
    Criterion c{"7 acquisition pipeline", {}, {}};
    c.checks.push_back(verdict_line("noise-free rounds", properties::acquisition_reproduces_triangles(10)));
    c.checks.push_back(verdict_line("sparse rounds rejected", properties::acquisition_rejects_sparse()));
    c.checks.push_back(verdict_line("firmware thresholds", properties::acquisition_thresholds()));
    criteria.push_back(std::move(c));
  }

  std::ostringstream out;
  bool all = true;
  for (const Criterion& c : criteria) {
    const bool ok = all_passed(c.checks);
    all = all && ok;
    out << (ok ? "PASS " : "FAIL ") << c.title << '\n';
    for (const CheckLine& l : c.checks) out << "    " << format_check(l) << '\n';
    for (const std::string& n : c.notes) out << "    note: " << n << '\n';
  }
  out << (all ? "all criteria passed" : "some criteria failed") << '\n';
  std::cout << out.str();
  if (!report_path.empty()) {
    std::ofstream f(report_path);
    f << out.str();
  }
  return strict && !all ? 1 : 0;
}
