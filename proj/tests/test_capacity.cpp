#include <gtest/gtest.h>

#include <cmath>

#include "rebound/capacity.hpp"
#include "test_util.hpp"

using namespace rebound;
using rebound::testutil::projector;

namespace {

const Matrix plus_state = Matrix::Constant(2, 2, 0.5);

EnvParametrization replacer_env(const Matrix &theta0, const Matrix &theta1) {
  std::vector<Matrix> trace_out;
  for (Eigen::Index i = 0; i < 2; ++i) {
    Matrix k = Matrix::Zero(2, 4);
    k(0, 2 * i) = 1.0;
    k(1, 2 * i + 1) = 1.0;
    trace_out.push_back(k);
  }
  return EnvParametrization({"E", 2}, QuantumChannel({"B'E", 4}, {"B", 2}, trace_out),
                            {"zero", "one"}, {theta0, theta1});
}

} // namespace

TEST(Theorem2, DepolarizingClosedForm) {
  // 2 - H(1 - 3p/4, p/4, p/4, p/4), evaluated independently.
  const std::vector<std::pair<double, double>> cases{{0.0, 2.0},
                                                     {0.25, 1.0066072709896374},
                                                     {0.5, 0.45120505930460153},
                                                     {0.75, 0.11975918505585215},
                                                     {1.0, 0.0}};
  const auto rep = pauli_group();
  for (const auto &[p, expected] : cases) {
    const auto r = theorem2_capacity(depolarizing({"B'", 2}, "B", p), rep);
    EXPECT_NEAR(r.value, expected, 1e-12) << "p = " << p;
    EXPECT_EQ(r.kind, BoundKind::theorem2_equality);
  }
  EXPECT_THROW(theorem2_capacity(amplitude_damping({"B'", 2}, "B", 0.3), rep), NotCovariant);
}

TEST(Holevo, KnownEnsembles) {
  const auto r = holevo_capacity({projector(2, 0), plus_state}, 1e-12);
  // Two pure states at overlap 1/2: H2((1 + 2^{-1/2}) / 2) at the uniform prior.
  EXPECT_NEAR(r.value, 0.6008760366928562, 1e-11);
  EXPECT_NEAR(r.optimizer[0], 0.5, 1e-6);
  EXPECT_TRUE(r.converged);

  EXPECT_NEAR(holevo_capacity({projector(2, 0), projector(2, 1)}, 1e-12).value, 1.0, 1e-12);
  EXPECT_NEAR(holevo_capacity({plus_state, plus_state}, 1e-12).value, 0.0, 1e-12);
  EXPECT_NEAR(holevo_information({projector(2, 0), projector(2, 1)}, {0.25, 0.75}),
              0.8112781244591328, 1e-12);
}

TEST(Holevo, IterationIsMonotoneAndCertified) {
  Rng rng(41);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t nx = 2 + std::size_t(rng() % 3);
    std::vector<Matrix> states;
    for (std::size_t x = 0; x < nx; ++x)
      states.push_back(random_density_matrix(3, 1 + Eigen::Index(rng() % 3), rng));
    const auto r = holevo_capacity(states, 1e-9);
    EXPECT_LE(r.gap_certificate, 1e-9);
    for (std::size_t k = 1; k < r.history.size(); ++k)
      EXPECT_GE(r.history[k], r.history[k - 1] - 1e-12);
    // Any other prior gives at most the certified upper value.
    const auto p = random_probability(nx, rng);
    EXPECT_LE(holevo_information(states, p), r.value + r.gap_certificate + 1e-12);
  }
}

TEST(Holevo, IterationCapRaisesWithBestReport) {
  Matrix a = Matrix::Zero(3, 3), b = Matrix::Zero(3, 3), c = Matrix::Zero(3, 3);
  a(0, 0) = 1.0;
  b(1, 1) = 1.0;
  c(0, 0) = c(1, 1) = 0.5;
  try {
    holevo_capacity({a, b, c}, 1e-15, 2);
    FAIL() << "expected NonConvergence";
  } catch (const NonConvergence &e) {
    EXPECT_FALSE(e.best().converged);
    EXPECT_EQ(e.best().history.size(), 3u);
    EXPECT_GT(e.best().value, 0.5);
  }
}

TEST(Seizable, AgreesWithTheorem2) {
  const auto rep = pauli_group();
  const auto base = depolarizing({"B'", 2}, "B", 0.5);
  const auto coll = build_jointly_covariant(base, rep);
  const auto tele = teleportation_simulation(coll, rep);
  const double t2 = theorem2_capacity(base, rep).value;
  const auto sz = seizable_capacity(coll, tele.env, tele.seizure, 1e-10);
  EXPECT_EQ(sz.kind, BoundKind::seizable_equality);
  EXPECT_NEAR(sz.value, t2, 1e-9);
  EXPECT_NEAR(theorem1_upper_bound(tele.env, 1e-10).value, t2, 1e-9);

  SeizureData blind{DensityOperator({{"R", 2}, {"B'", 2}}, Matrix::Identity(4, 4) / 4.0),
                    tele.seizure.seizer};
  EXPECT_THROW(seizable_capacity(coll, tele.env, blind, 1e-10), NotSeizable);
}

TEST(Seizable, ImpliedCollectionIsParametrized) {
  Rng rng(43);
  const auto env = testutil::random_env(2, 3, 2, 3, rng);
  const auto coll = implied_collection(env);
  EXPECT_EQ(coll.size(), 3u);
  EXPECT_LT(verify_env_parametrization(coll, env).max_deviation, 1e-12);
}

TEST(FiniteBlocklength, OrthogonalReplacer) {
  const auto env = replacer_env(projector(2, 0), projector(2, 1));
  FiniteBlocklengthOptions o;
  o.n = 1;
  o.epsilon = 0.0;
  EXPECT_NEAR(finite_blocklength_bound(env, o).value, 1.0, 1e-12);
  o.n = 2;
  const auto r = finite_blocklength_bound(env, o);
  EXPECT_NEAR(r.value, 1.0, 1e-12);
  EXPECT_NEAR(r.finite_blocklength->certified_block_bits, 2.0, 1e-12);
}

TEST(FiniteBlocklength, IdenticalChannels) {
  const auto env = replacer_env(plus_state, plus_state);
  for (double eps : {0.1, 0.5}) {
    FiniteBlocklengthOptions o;
    o.epsilon = eps;
    for (auto mode : {PriorMode::general, PriorMode::iid}) {
      o.prior_mode = mode;
      const auto r = finite_blocklength_bound(env, o);
      EXPECT_NEAR(r.value, -std::log2(1.0 - eps), 1e-9);
      EXPECT_GE(r.gap_certificate, 0.0);
    }
  }
}

TEST(FiniteBlocklength, SupOverPriorsMatchesGridOracle) {
  // Oracle: grid over the prior followed by a 1-D dual solve per prior.
  const std::vector<Matrix> states{projector(2, 0), plus_state};
  const Matrix hat = 0.5 * (states[0] + states[1]);
  EXPECT_NEAR(sup_prior_dh(states, hat, 1, 0.1), 0.8624964762500653, 1e-8);
  EXPECT_NEAR(sup_prior_dh(states, hat, 2, 0.1), 1.4324138317668536, 1e-8);

  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_probability(4, rng);
    EXPECT_LE(dh_for_prior(states, hat, 2, p, 0.1), 1.4324138317668536 + 1e-8);
  }
}

TEST(FiniteBlocklength, FullRankEnvironmentHasNoZeroErrorRate) {
  const auto rep = pauli_group();
  const auto coll = build_jointly_covariant(depolarizing({"B'", 2}, "B", 0.5), rep);
  const auto tele = teleportation_simulation(coll, rep);
  FiniteBlocklengthOptions o;
  EXPECT_NEAR(finite_blocklength_bound(tele.env, o).value, 0.0, 1e-12);
}

TEST(FiniteBlocklength, GridStrategyIsDeterministic) {
  Rng rng(53);
  const auto env = testutil::random_env(2, 2, 2, 2, rng);
  FiniteBlocklengthOptions o;
  o.epsilon = 0.2;
  o.strategy = ThetaHatStrategy::grid;
  o.grid_size = 4;
  o.seed = 5;
  const auto a = finite_blocklength_bound(env, o);
  const auto b = finite_blocklength_bound(env, o);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.optimizer, b.optimizer);
  EXPECT_EQ(a.finite_blocklength->candidates.size(), 7u);
  // The bound can only tighten as candidates are added.
  o.strategy = ThetaHatStrategy::mixture;
  EXPECT_LE(a.value, finite_blocklength_bound(env, o).value + 1e-15);
}

TEST(FiniteBlocklength, BudgetAndInputChecks) {
  const auto env = replacer_env(projector(2, 0), projector(2, 1));
  FiniteBlocklengthOptions o;
  o.n = 4;
  EXPECT_THROW(finite_blocklength_bound(env, o), BudgetExceeded);
  o.n = 1;
  o.epsilon = 1.0;
  EXPECT_THROW(finite_blocklength_bound(env, o), BadEpsilon);
  o.epsilon = 0.1;
  o.strategy = ThetaHatStrategy::supplied;
  o.supplied = {Matrix::Identity(3, 3) / 3.0};
  EXPECT_THROW(finite_blocklength_bound(env, o), InvalidState);
}
