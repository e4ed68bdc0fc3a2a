#include <gtest/gtest.h>

#include <cmath>

#include "rebound/channels.hpp"
#include "rebound/random.hpp"
#include "test_util.hpp"

using namespace rebound;
using rebound::testutil::diag;
using rebound::testutil::max_abs;
using rebound::testutil::projector;

TEST(Channel, StandardActions) {
  Rng rng(1);
  const Matrix rho = random_density_matrix(2, 2, rng);
  const auto id = QuantumChannel::identity({"B'", 2}, "B");
  EXPECT_LT(max_abs(id.apply(rho) - rho), 1e-15);

  const auto full = depolarizing({"B'", 2}, "B", 1.0);
  EXPECT_LT(max_abs(full.apply(projector(2, 0)) - Matrix::Identity(2, 2) / 2.0), 1e-15);

  const auto ad = amplitude_damping({"B'", 2}, "B", 0.5);
  EXPECT_LT(max_abs(ad.apply(projector(2, 1)) - diag({0.5, 0.5})), 1e-15);
}

TEST(Channel, RejectsNonTracePreserving) {
  const std::vector<Matrix> kraus{std::sqrt(0.9) * Matrix::Identity(2, 2)};
  EXPECT_NEAR(cptp_deviation(kraus), 0.1, 1e-15);
  EXPECT_THROW(QuantumChannel({"B'", 2}, {"B", 2}, kraus), InvalidChannel);
  EXPECT_THROW(QuantumChannel({"B'", 2}, {"B", 3}, {Matrix::Identity(2, 2)}), InvalidChannel);
}

TEST(Channel, ApplyOnNamedRegister) {
  Rng rng(2);
  const DensityOperator rho({{"R", 2}, {"B'", 3}}, random_density_matrix(6, 6, rng));
  const auto ch = testutil::random_channel(3, 2, 3, rng, "B'", "B");
  const auto out = apply(ch, rho, "B'");
  ASSERT_EQ(out.registers().size(), 2u);
  EXPECT_EQ(out.registers()[1].name, "B");
  EXPECT_LT(max_abs(out.matrix() - apply_on_factor(ch, rho.matrix(), {2, 3}, 1)), 1e-14);
  EXPECT_NEAR(out.matrix().trace().real(), 1.0, 1e-12);
  EXPECT_THROW(apply(ch, rho, "R"), DimensionMismatch);
  EXPECT_THROW(apply(ch, rho, "X"), UnknownRegister);

  // Acting on the first factor is the mirror image of acting on the second.
  const auto swapped = reorder(rho, {"B'", "R"});
  const auto out2 = reorder(apply(ch, swapped, "B'"), {"R", "B"});
  EXPECT_LT(max_abs(out2.matrix() - out.matrix()), 1e-14);
}

TEST(Channel, AdjointIsDual) {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto ch = testutil::random_channel(3, 2, 2, rng);
    const Matrix rho = random_density_matrix(3, 3, rng);
    const Matrix y = hermitian_part(Matrix(ginibre(2, 2, rng)));
    const Complex lhs = (y * ch.apply(rho)).trace();
    const Complex rhs = (ch.apply_adjoint(y) * rho).trace();
    EXPECT_LT(std::abs(lhs - rhs), 1e-12);
  }
}

TEST(Channel, ChoiStateProperties) {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::Index din = 1 + Eigen::Index(rng() % 3), dout = 1 + Eigen::Index(rng() % 3);
    const auto ch = testutil::random_channel(din, dout, 1 + Eigen::Index(rng() % 3), rng);
    const auto c = choi(ch);
    EXPECT_NEAR(c.matrix().trace().real(), 1.0, 1e-12);
    const auto r = partial_trace(c, {"R"});
    EXPECT_LT(max_abs(r.matrix() - Matrix::Identity(din, din) / double(din)), 1e-12);
  }
}

TEST(Channel, ComposeMatchesSequentialApplication) {
  Rng rng(6);
  const auto a = testutil::random_channel(2, 3, 2, rng);
  const auto b = testutil::random_channel(2, 2, 3, rng);
  const Matrix rho = random_density_matrix(2, 2, rng);
  EXPECT_LT(max_abs(compose(a, b).apply(rho) - a.apply(b.apply(rho))), 1e-14);
  EXPECT_THROW(compose(b, a), DimensionMismatch);
}

TEST(Collection, Validation) {
  const auto a = QuantumChannel::identity({"B'", 2}, "B");
  const auto b = depolarizing({"B'", 2}, "B", 0.3);
  EXPECT_THROW(ChannelCollection({"a"}, {a}), InvalidCollection);
  EXPECT_THROW(ChannelCollection({"a", "a"}, {a, b}), InvalidCollection);
  const ChannelCollection coll({"a", "b"}, {a, b});
  EXPECT_EQ(coll.index_of("b"), 1u);
  EXPECT_THROW(coll.index_of("c"), CodebookMismatch);
}

namespace {

// Replacer collection: N^x(rho) = |x><x|, parametrized by F(rho (x) theta) = theta.
struct Replacer {
  ChannelCollection coll;
  EnvParametrization env;
};

Replacer replacer_instance() {
  std::vector<Matrix> trace_out;
  for (Eigen::Index i = 0; i < 2; ++i) {
    Matrix k = Matrix::Zero(2, 4);
    k(0, 2 * i) = 1.0;
    k(1, 2 * i + 1) = 1.0;
    trace_out.push_back(k);
  }
  QuantumChannel f({"B'E", 4}, {"B", 2}, trace_out);
  ChannelCollection coll({"zero", "one"}, {replacer({"B'", 2}, {"B", 2}, projector(2, 0)),
                                           replacer({"B'", 2}, {"B", 2}, projector(2, 1))});
  EnvParametrization env({"E", 2}, f, {"zero", "one"}, {projector(2, 0), projector(2, 1)});
  return {std::move(coll), std::move(env)};
}

} // namespace

TEST(Environment, ReplacerIsParametrizedAndSeizable) {
  const auto inst = replacer_instance();
  const auto report = verify_env_parametrization(inst.coll, inst.env);
  EXPECT_TRUE(report.pass);
  EXPECT_LT(report.max_deviation, 1e-15);

  SeizureData seize{DensityOperator({{"R", 1}, {"B'", 2}}, projector(2, 0)),
                    QuantumChannel::identity({"RB", 2}, "E")};
  EXPECT_TRUE(verify_seizable(inst.coll, inst.env, seize).pass);

  // Swapping the environment states breaks the parametrization.
  EnvParametrization wrong({"E", 2}, inst.env.interaction(), {"zero", "one"},
                           {projector(2, 1), projector(2, 0)});
  const auto bad = verify_env_parametrization(inst.coll, wrong);
  EXPECT_FALSE(bad.pass);
  EXPECT_NEAR(bad.max_deviation, 2.0, 1e-12);
}

TEST(Environment, CqStateAndPriorChecks) {
  const auto inst = replacer_instance();
  const auto cq = cq_environment_state(inst.env, {0.25, 0.75});
  EXPECT_LT(max_abs(cq.matrix() - diag({0.25, 0.0, 0.0, 0.75})), 1e-15);
  EXPECT_THROW(cq_environment_state(inst.env, {0.5, 0.6}), BadDistribution);
  EXPECT_THROW(cq_environment_state(inst.env, {1.0}), BadDistribution);
}
