#include <gtest/gtest.h>

#include "rebound/covariance.hpp"
#include "test_util.hpp"

using namespace rebound;
using rebound::testutil::pauli;

TEST(Group, PauliIsOneDesign) {
  const auto rep = pauli_group();
  EXPECT_EQ(rep.size(), 4u);
  EXPECT_TRUE(is_one_design(rep).pass);
  EXPECT_LT(twirl_choi_deviation(rep), 1e-15);

  const auto half = GroupRepresentation::symmetric({pauli('I'), pauli('Z')});
  const auto report = is_one_design(half);
  EXPECT_FALSE(report.pass);
  EXPECT_NEAR(report.max_deviation, 1.0, 1e-12); // |0><0| is left invariant
}

TEST(Group, RejectsBadRepresentations) {
  Matrix notu = pauli('X');
  notu(0, 0) = 0.1;
  EXPECT_THROW(GroupRepresentation::symmetric({pauli('I'), notu}), InvalidRepresentation);
  EXPECT_THROW(GroupRepresentation::symmetric({pauli('X'), pauli('Z')}), InvalidRepresentation);
  EXPECT_THROW(GroupRepresentation::symmetric({pauli('I'), pauli('X')}, MultiplicationTable{{0}}),
               InvalidRepresentation);
}

TEST(Covariance, DepolarizingButNotAmplitudeDamping) {
  const auto rep = pauli_group();
  EXPECT_TRUE(is_covariant(depolarizing({"B'", 2}, "B", 0.3), rep).pass);
  const auto ad = is_covariant(amplitude_damping({"B'", 2}, "B", 0.4), rep);
  EXPECT_FALSE(ad.pass);
  EXPECT_LT(ad.per_element[0], 1e-15);
  EXPECT_LT(composition_deviation(depolarizing({"B'", 2}, "B", 0.3), rep), 1e-14);
}

TEST(Covariance, WeylGroupQutrit) {
  const auto rep = heisenberg_weyl_group(3);
  EXPECT_EQ(rep.size(), 9u);
  EXPECT_TRUE(is_one_design(rep).pass);
  EXPECT_TRUE(is_covariant(depolarizing({"B'", 3}, "B", 0.4), rep).pass);
  EXPECT_LT(composition_deviation(depolarizing({"B'", 3}, "B", 0.4), rep), 1e-13);
}

TEST(JointlyCovariant, BuildsOneMemberPerElement) {
  const auto rep = pauli_group();
  const auto base = depolarizing({"B'", 2}, "B", 0.5);
  const auto coll = build_jointly_covariant(base, rep);
  ASSERT_EQ(coll.size(), 4u);
  EXPECT_EQ(coll.alphabet()[2], "g2");
  Rng rng(9);
  const Matrix rho = random_density_matrix(2, 2, rng);
  const Matrix y = pauli('Y');
  EXPECT_LT(testutil::max_abs(coll.at("g2").apply(rho) - base.apply(y * rho * y.adjoint())), 1e-14);

  EXPECT_THROW(build_jointly_covariant(amplitude_damping({"B'", 2}, "B", 0.4), rep),
               NotCovariant);
  EXPECT_THROW(build_jointly_covariant(base, GroupRepresentation::symmetric({pauli('I'), pauli('Z')})),
               NotOneDesign);
}

TEST(Teleportation, SimulatesAndSeizesCovariantFamilies) {
  for (Eigen::Index d : {2, 3}) {
    const auto rep = heisenberg_weyl_group(d);
    const auto coll = build_jointly_covariant(depolarizing({"B'", d}, "B", 0.35), rep);
    const auto tele = teleportation_simulation(coll, rep);
    EXPECT_EQ(tele.env.env_reg().dim, d * d);
    const auto param = verify_env_parametrization(coll, tele.env);
    EXPECT_TRUE(param.pass) << "d = " << d << " deviation " << param.max_deviation;
    EXPECT_LT(param.max_deviation, 1e-12);
    const auto seized = verify_seizable(coll, tele.env, tele.seizure);
    EXPECT_TRUE(seized.pass);
    EXPECT_LT(seized.max_deviation, 1e-12);
  }
}
