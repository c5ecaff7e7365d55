#include "tactile/harness.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace tactile;

namespace {

const char* kSmall = R"(# tiny run for tests
ITERATIONS=20
PARTICLES=20
EVAL_INTERVAL=10
EVAL_SAMPLES=20
SAMPLE_BURN_IN=5
TRIALS=2
SEED=7
HOMEOSTASIS_STEPS=15
BASELINE_SWEEPS=10
SCENARIO_CHAINS=2
SCENARIO_DECODES=5
DECODE_SAMPLES=5
)";

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name) : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing") {
  const ExperimentConfig c = parse_config(kSmall);
  CHECK(c.train.iterations == 20);
  CHECK(c.trials == 2);
  CHECK(c.base_seed == 7);
  CHECK(c.trial_seed(3) == 10);
  CHECK(c.receptive_field == ReceptiveFieldKind::circular);
  CHECK(c.homeo.eta == 0.01);

  const ExperimentConfig d = parse_config("RECEPTIVE_FIELD = linear  # trailing comment\nETA=0\n", c);
  CHECK(d.receptive_field == ReceptiveFieldKind::linear);
  CHECK(d.homeo.eta == 0.0);
  CHECK(d.train.iterations == 20);

  CHECK_THROWS_AS(parse_config("ITERATION=5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("ITERATIONS\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("ITERATIONS=many\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("RECEPTIVE_FIELD=square\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("LEARNING_RATE=-1\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse_config("TRIALS=0\n").validate(), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/tactile.cfg"), IoError);
}

TEST_CASE("config echo reproduces the config") {
  ExperimentConfig c = parse_config(kSmall);
  c.train.learning_rate = 0.1 + 0.2;
  c.receptive_field = ReceptiveFieldKind::linear;
  c.decode_mode = DecodeMode::deterministic_threshold;
  c.skin_noise = false;
  const std::string text = format_config(c);
  const ExperimentConfig back = parse_config(text);
  CHECK(format_config(back) == text);
  CHECK(back.train.learning_rate == c.train.learning_rate);
  CHECK(back.skin_noise == false);
  CHECK(config_echo(c).front().first == "MAX_FORCE");
}

TEST_CASE("stage streams are independent and reproducible") {
  Rng a = stage_rng(5, Stage::train), b = stage_rng(5, Stage::train), c = stage_rng(5, Stage::scenarios);
  const auto x = a();
  CHECK(x == b());
  CHECK(x != c());
  CHECK(stage_rng(5, Stage::train)() != stage_rng(6, Stage::train)());
}

TEST_CASE("loss/gain correlation") {
  const std::vector<ScenarioResult> rs{ScenarioResult::make(0.9, 0.6, 0.4, 0.7),
                                       ScenarioResult::make(0.8, 0.6, 0.5, 0.6),
                                       ScenarioResult::make(0.9, 0.6, 0.2, 0.7)};
  const auto rho = loss_gain_correlation(rs);
  REQUIRE(rho.has_value());
  CHECK(*rho > 0.9);
  CHECK_FALSE(loss_gain_correlation(std::vector<ScenarioResult>(2, rs[0])).has_value());
  CHECK_FALSE(loss_gain_correlation(std::span<const ScenarioResult>(rs.data(), 1)).has_value());
}

TEST_CASE("train, scenarios and homeostasis write reproducible files") {
  TempDir dir("tactile_harness_test");
  ExperimentConfig c = parse_config(kSmall);
  c.output_dir = dir.path / "a";
  const TrainReport tr = cmd_train(c);
  REQUIRE(tr.trials.size() == 2);
  CHECK(tr.trials[1].seed == 8);
  CHECK(std::filesystem::exists(checkpoint_path(c, 0)));
  CHECK(read_checkpoint(checkpoint_path(c, 1)).params == tr.trials[1].params);
  CHECK(read_checkpoint(checkpoint_path(c, 1)).seed == 8);

  const std::string training = slurp(c.output_dir / "training_circular.csv");
  CHECK(first_line(training) == "phase,iteration,trial,q_mean,seed");

  const ScenarioReport sr = cmd_scenarios(c);
  REQUIRE(sr.rows.size() == 2);
  const std::string scen = slurp(c.output_dir / "scenarios_circular.csv");
  CHECK(first_line(scen) == "trial,q_pattern,q_corrupted,q_blank,dq_loss,seed");
  CHECK(line_count(scen) == 3);

  const HomeostasisReport hr = cmd_homeostasis(c);
  CHECK(hr.summary.size() == 2);
  for (const auto& r : hr.summary) CHECK(r.consistent());
  const std::string trace = slurp(c.output_dir / "homeostasis_circular.csv");
  CHECK(first_line(trace) == "trial,step,q,seed");
  CHECK(line_count(trace) == 1 + 2 * 15);
  CHECK(first_line(slurp(c.output_dir / "summary_circular.csv")) ==
        "trial,q_pattern,q_corrupted,q_blank,q_hallucination,dq_loss,dq_gain,seed");
  CHECK(first_line(slurp(c.output_dir / "correlation.csv")) == "kind,rho,n_trials");
  CHECK(std::filesystem::exists(checkpoint_path(c, 1, true)));

  // The scenario numbers only depend on the checkpoint and seed.
  CHECK(score_trial(c, tr.trials[0].params, make_triangle_dataset(), tr.trials[0].seed).q_pattern ==
        sr.rows[0].scores.q_pattern);

  ExperimentConfig again = c;
  again.output_dir = dir.path / "b";
  cmd_train(again);
  cmd_scenarios(again);
  cmd_homeostasis(again);
  for (const char* f : {"training_circular.csv", "scenarios_circular.csv", "homeostasis_circular.csv",
                        "summary_circular.csv"}) {
    CHECK(slurp(c.output_dir / f) == slurp(again.output_dir / f));
  }
  // Checkpoints differ only in the echoed OUTPUT_DIR.
  CHECK(read_checkpoint(checkpoint_path(c, 0)).params == read_checkpoint(checkpoint_path(again, 0)).params);

  // A second kind adds its own correlation row.
  again.receptive_field = ReceptiveFieldKind::linear;
  again.trials = 1;
  cmd_train(again);
  cmd_homeostasis(again);
  const std::string corr = slurp(again.output_dir / "correlation.csv");
  CHECK(line_count(corr) == 3);
  CHECK(corr.find("circular,") != std::string::npos);
  CHECK(corr.find("linear,") != std::string::npos);
}

TEST_CASE("scenarios without checkpoints is an I/O error") {
  TempDir dir("tactile_harness_missing");
  ExperimentConfig c = parse_config(kSmall);
  c.output_dir = dir.path;
  CHECK_THROWS_AS(cmd_scenarios(c), IoError);
}

TEST_CASE("noise-free skin acquisition recovers the dataset") {
  TempDir dir("tactile_harness_skin");
  ExperimentConfig c = parse_config(kSmall);
  c.output_dir = dir.path;
  c.skin_noise = false;
  c.skin_rounds = 9;
  const SkinReport r = cmd_simulate_skin(c);
  CHECK(r.rounds == 9);
  CHECK(r.acceptance_rate() == 1.0);
  REQUIRE(r.patterns.size() == 3);
  CHECK(read_pattern_file(r.dataset_file) == r.patterns);
  for (const auto& p : make_triangle_dataset().patterns) {
    CHECK(std::find(r.patterns.begin(), r.patterns.end(), p) != r.patterns.end());
  }
  // The acquired file can drive training in place of the built-in triangles.
  c.dataset_path = r.dataset_file;
  CHECK(experiment_dataset(c).patterns == r.patterns);
}

TEST_CASE("decode command") {
  TempDir dir("tactile_harness_decode");
  std::filesystem::create_directories(dir.path);
  DbmParams p = DbmParams::zeros(18, 18, 18);
  p.w1 = 10.0 * Matrix::Identity(18, 18);
  p.w2 = 10.0 * Matrix::Identity(18, 18);
  write_checkpoint(dir.path / "id.ckpt", Checkpoint{p, 3, {}});
  const Dataset d = make_triangle_dataset();
  write_pattern_file(dir.path / "states.txt", d.patterns);

  ExperimentConfig c;
  c.output_dir = dir.path / "out";
  c.decode_mode = DecodeMode::deterministic_threshold;
  const auto decoded = cmd_decode(c, dir.path / "id.ckpt", dir.path / "states.txt");
  CHECK(decoded == d.patterns);
  CHECK(read_pattern_file(c.output_dir / "decoded.txt") == d.patterns);
  CHECK(std::filesystem::exists(c.output_dir / "decoded_led.txt"));

  {
    std::ofstream(dir.path / "bad.txt") << "1111111\n000000\n000000\n";
  }
  CHECK_THROWS_AS(cmd_decode(c, dir.path / "id.ckpt", dir.path / "bad.txt"), ParseError);
  CHECK_THROWS_AS(cmd_decode(c, dir.path / "missing.ckpt", dir.path / "states.txt"), IoError);
}
