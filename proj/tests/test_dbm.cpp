#include "tactile/dbm.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace tactile;

namespace {

DbmParams random_dbm(std::size_t nv, std::size_t n1, std::size_t n2, Rng& rng, double scale) {
  std::normal_distribution<double> g(0.0, scale);
  DbmParams p = DbmParams::zeros(nv, n1, n2);
  auto fill = [&](auto& m) { m = m.unaryExpr([&](double) { return g(rng); }); };
  fill(p.w1);
  fill(p.w2);
  fill(p.visible_bias);
  fill(p.hidden1_bias);
  fill(p.hidden2_bias);
  return p;
}

// v drives h1 and h1 drives h2 hard enough that each layer copies the one
// below, while the top-down input alone cannot switch h1 on.
DbmParams identity_chain() {
  DbmParams p = DbmParams::zeros(18, 18, 18);
  p.w1 = 40.0 * Matrix::Identity(18, 18);
  p.w2 = 20.0 * Matrix::Identity(18, 18);
  p.hidden1_bias.setConstant(-30.0);
  p.hidden2_bias.setConstant(-10.0);
  return p;
}

}  // namespace

TEST_CASE("middle-layer probabilities") {
  DbmParams p = DbmParams::zeros(3, 2, 4);
  const LayerState v = LayerState::with_active(3, {0, 2});
  const LayerState h2 = LayerState::with_active(4, {1});
  CHECK(dbm_middle_prob(v, h2, p).isApproxToConstant(0.5));

  Rng rng = make_rng(1);
  p = random_dbm(3, 2, 4, rng, 1.0);
  const Vector from_top = hidden_prob_rbm(h2, RbmParams{p.w2.transpose(), p.hidden2_bias, p.hidden1_bias,
                                                        ConnectivityMask::full(4, 2)});
  CHECK(dbm_middle_prob(LayerState(3), h2, p).isApprox(from_top, 1e-14));

  DbmParams flat = DbmParams::zeros(3, 2, 4);
  flat.w1.setConstant(0.4);
  flat.w2.setConstant(0.4);
  DbmParams doubled = flat;
  doubled.w1 *= 2.0;
  doubled.w2 *= 2.0;
  CHECK((dbm_middle_prob(v, h2, doubled).array() > dbm_middle_prob(v, h2, flat).array()).all());
  CHECK((dbm_middle_prob(v, h2, flat).array() > 0.5).all());
}

TEST_CASE("DBM energy") {
  const LayerState v = LayerState::with_active(3, {1});
  const LayerState h1 = LayerState::with_active(2, {0, 1});
  const LayerState h2 = LayerState::with_active(2, {1});
  CHECK(energy_dbm(v, h1, h2, DbmParams::zeros(3, 2, 2)) == 0.0);

  Rng rng = make_rng(2);
  DbmParams p = random_dbm(3, 2, 2, rng, 1.0);
  CHECK(energy_dbm(v, h1, LayerState(2), p) == doctest::Approx(energy_rbm(v, h1, p.lower())).epsilon(1e-14));
  CHECK(energy_dbm(v, h1, h2, p) ==
        doctest::Approx(oracle::dbm_energy(oracle::bits_of(v), oracle::bits_of(h1), oracle::bits_of(h2), p)));

  DbmParams stronger = p;
  stronger.w2(1, 1) += 0.25;
  CHECK(energy_dbm(v, h1, h2, stronger) < energy_dbm(v, h1, h2, p));
  stronger = p;
  stronger.w1(1, 0) += 0.25;
  CHECK(energy_dbm(v, h1, h2, stronger) < energy_dbm(v, h1, h2, p));
}

TEST_CASE("assembly averages the shared bias and keeps the masks") {
  Rng rng = make_rng(3);
  const ConnectivityMask m = build_mask(ReceptiveFieldKind::circular);
  RbmParams lower = RbmParams::initialized(m, rng, 0.5);
  RbmParams upper = RbmParams::initialized(m, rng, 0.5);
  lower.hidden_bias.setConstant(1.0);
  upper.visible_bias.setConstant(-3.0);
  const DbmParams p = DbmParams::assemble(lower, upper);
  CHECK(p.hidden1_bias.isApproxToConstant(-1.0));
  CHECK(p.w1 == lower.weights);
  CHECK(p.w2 == upper.weights);
  CHECK(p.lower().weights == p.w1);
  CHECK(p.upper().visible_bias == p.hidden1_bias);
  CHECK_THROWS_AS(DbmParams::assemble(lower, RbmParams::zeros(17, 18)), InvalidInput);
}

TEST_CASE("free-running samples") {
  const DbmParams zero = DbmParams::zeros(18, 18, 18);
  Rng rng = make_rng(4);
  Vector mean = Vector::Zero(18);
  const auto samples = sample_dbm_batch(zero, 5, 10000, rng);
  for (const auto& s : samples) mean += s.values();
  mean /= 10000.0;
  for (Eigen::Index i = 0; i < 18; ++i) CHECK(std::abs(mean[i] - 0.5) <= 0.02);

  Rng init = make_rng(9);
  const DbmParams p = random_dbm(18, 18, 18, init, 0.3);
  Rng c = make_rng(10), d = make_rng(10);
  CHECK(sample_dbm_batch(p, 20, 50, c) == sample_dbm_batch(p, 20, 50, d));
}

TEST_CASE("clamped inference") {
  SUBCASE("zero parameters give fair coins") {
    Rng rng = make_rng(5);
    const DbmParams zero = DbmParams::zeros(18, 18, 18);
    Matrix visible = Matrix::Zero(18, 10000);
    const DbmChains c = clamp_and_infer_batch(zero, visible, 3, rng);
    CHECK(c.v == visible);
    CHECK((c.h1.rowwise().mean().array() - 0.5).abs().maxCoeff() <= 0.02);
    CHECK((c.h2.rowwise().mean().array() - 0.5).abs().maxCoeff() <= 0.02);
  }
  SUBCASE("identity coupling copies the pattern up the stack") {
    // sigma(-10) is about 4.5e-5 per unit, so 18 * 2000 draws flip a handful at most.
    const DbmParams p = identity_chain();
    const TactilePattern tri = make_triangle_dataset().patterns[1];
    Rng rng = make_rng(6);
    std::size_t flips = 0;
    for (int i = 0; i < 2000; ++i) {
      const HiddenStates h = clamp_and_infer(p, tri, 20, rng);
      CHECK(h.h1 == tri);
      for (std::size_t k = 0; k < 18; ++k) flips += h.h2[k] != tri[k];
    }
    CHECK(flips <= 10);
  }
  SUBCASE("fixed seed reproduces the chain") {
    Rng init = make_rng(7);
    const DbmParams p = random_dbm(18, 18, 18, init, 0.5);
    const TactilePattern tri = make_triangle_dataset().patterns[0];
    Rng a = make_rng(8), b = make_rng(8);
    const HiddenStates x = clamp_and_infer(p, tri, 20, a);
    const HiddenStates y = clamp_and_infer(p, tri, 20, b);
    CHECK(x.h1 == y.h1);
    CHECK(x.h2 == y.h2);
  }
  Rng rng = make_rng(0);
  CHECK_THROWS_AS(clamp_and_infer(DbmParams::zeros(18, 18, 18), TactilePattern(17), 1, rng), InvalidInput);
}
