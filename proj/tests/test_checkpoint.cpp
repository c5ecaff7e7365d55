#include "tactile/checkpoint.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace tactile;

namespace {

Checkpoint sample_checkpoint() {
  Rng rng = make_rng(1);
  const ConnectivityMask m = build_mask(ReceptiveFieldKind::linear);
  Checkpoint c;
  c.params = DbmParams::assemble(RbmParams::initialized(m, rng, 0.7), RbmParams::initialized(m, rng, 0.7));
  std::normal_distribution<double> g(0.0, 3.0);
  c.params.visible_bias = c.params.visible_bias.unaryExpr([&](double) { return g(rng); });
  c.params.hidden2_bias = c.params.hidden2_bias.unaryExpr([&](double) { return g(rng); });
  c.params.hidden1_bias[0] = 1e-300;
  c.params.hidden1_bias[1] = -0.0;
  c.seed = 18446744073709551615ULL;
  c.config = {{"LEARNING_RATE", "0.03"}, {"RECEPTIVE_FIELD", "linear"}};
  return c;
}

}  // namespace

TEST_CASE("hexfloat round trip") {
  for (double x : {0.0, -0.0, 1.0, -2.5, 0.1, 1e-310, 1.7976931348623157e308, 3.141592653589793}) {
    const double y = parse_hexfloat(format_hexfloat(x));
    CHECK(y == x);
    CHECK(std::signbit(y) == std::signbit(x));
  }
  CHECK(format_hexfloat(1.0) == "1p+0");
  CHECK(parse_hexfloat("-1.8p+1") == -3.0);
  CHECK_THROWS_AS(parse_hexfloat("0x1p+0"), ParseError);
  CHECK_THROWS_AS(parse_hexfloat("0x1p+0junk"), ParseError);
  CHECK_THROWS_AS(parse_hexfloat(""), ParseError);
}

TEST_CASE("checkpoint text round trip is bit exact") {
  const Checkpoint c = sample_checkpoint();
  const std::string text = format_checkpoint(c);
  CHECK(text.rfind("tactile-dbm-checkpoint 1\n", 0) == 0);
  const Checkpoint back = parse_checkpoint(text);
  CHECK(back == c);
  CHECK(std::signbit(back.params.hidden1_bias[1]));
  CHECK(format_checkpoint(back) == text);
}

TEST_CASE("malformed checkpoints are parse errors") {
  const std::string text = format_checkpoint(sample_checkpoint());
  CHECK_THROWS_AS(parse_checkpoint(""), ParseError);
  CHECK_THROWS_AS(parse_checkpoint("tactile-dbm-checkpoint 2\n" + text.substr(text.find('\n') + 1)), ParseError);
  CHECK_THROWS_AS(parse_checkpoint(text.substr(0, text.size() / 2)), ParseError);

  std::string bad_mask = text;
  bad_mask.replace(bad_mask.find("mask mask1 18 18\n") + 17, 1, "2");
  CHECK_THROWS_AS(parse_checkpoint(bad_mask), ParseError);

  // A weight outside the mask is refused rather than silently zeroed.
  Checkpoint c = sample_checkpoint();
  c.params.w1(0, 9) = 0.5;
  CHECK_THROWS_AS(parse_checkpoint(format_checkpoint(c)), ParseError);
}

TEST_CASE("checkpoint files") {
  const auto dir = std::filesystem::temp_directory_path() / "tactile_ckpt_test";
  std::filesystem::remove_all(dir);
  const auto path = dir / "nested" / "trial_0.ckpt";
  const Checkpoint c = sample_checkpoint();
  write_checkpoint(path, c);
  CHECK(read_checkpoint(path) == c);
  CHECK_THROWS_AS(read_checkpoint(dir / "missing.ckpt"), IoError);
  {
    std::ofstream(dir / "garbage.ckpt") << "not a checkpoint\n";
  }
  CHECK_THROWS_AS(read_checkpoint(dir / "garbage.ckpt"), ParseError);
  std::filesystem::remove_all(dir);
}
