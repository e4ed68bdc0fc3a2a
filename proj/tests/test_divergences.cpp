#include <gtest/gtest.h>

#include <cmath>

#include "rebound/divergences.hpp"
#include "test_util.hpp"

using namespace rebound;
using rebound::testutil::diag;
using rebound::testutil::projector;

TEST(Dh, IdenticalStates) {
  Rng rng(1);
  const Matrix rho = random_density_matrix(3, 3, rng);
  for (double eps : {0.0, 0.1, 0.5, 0.9})
    EXPECT_NEAR(dh_epsilon(rho, rho, eps).value, -std::log2(1.0 - eps), 1e-9) << eps;
}

TEST(Dh, ClassicalExample) {
  // The optimal test keeps outcome 1 (ratio 5) and reaches type-1 error 0.5.
  const auto r = dh_epsilon(diag({0.5, 0.5}), diag({0.9, 0.1}), 0.5);
  EXPECT_NEAR(r.value, 3.321928094887362, 1e-12);
  EXPECT_NEAR(r.test.type1, 0.5, 1e-12);
  EXPECT_NEAR(r.dual_bound, r.test.type2, 1e-10);
}

TEST(Dh, PureStatesClosedForm) {
  // beta = (sqrt((1-eps)F) - sqrt(eps(1-F)))^2 with F = |<0|+>|^2 = 1/2.
  Matrix plus = Matrix::Constant(2, 2, 0.5);
  EXPECT_NEAR(dh_epsilon(projector(2, 0), plus, 0.1).value, 2.321928094887362, 1e-9);
}

TEST(Dh, NonCommutingMixedStates) {
  Matrix rho(2, 2), sigma(2, 2);
  rho << 0.7, Complex(0.2, 0.1), Complex(0.2, -0.1), 0.3;
  sigma << 0.4, -0.1, -0.1, 0.6;
  const auto r = dh_epsilon(rho, sigma, 0.2);
  EXPECT_NEAR(r.value, 1.4514925084928127, 1e-9);
  EXPECT_NEAR(r.test.type1, 0.8, 1e-9);
}

TEST(Dh, ZeroErrorUsesSupport) {
  EXPECT_NEAR(dh_epsilon(projector(2, 0), Matrix::Identity(2, 2) / 2.0, 0.0).value, 1.0, 1e-12);
  EXPECT_TRUE(std::isinf(dh_epsilon(projector(2, 0), projector(2, 1), 0.0).value));
  EXPECT_TRUE(std::isinf(dh_epsilon(projector(2, 0), projector(2, 1), 0.3).value));
}

TEST(Dh, RejectsBadEpsilon) {
  const Matrix rho = Matrix::Identity(2, 2) / 2.0;
  EXPECT_THROW(dh_epsilon(rho, rho, 1.0), BadEpsilon);
  EXPECT_THROW(dh_epsilon(rho, rho, -0.1), BadEpsilon);
  EXPECT_THROW(dh_epsilon(rho, Matrix::Identity(3, 3) / 3.0, 0.1), DimensionMismatch);
}

TEST(Dh, CommutingPairsMatchClassicalGreedy) {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const Eigen::Index d = 1 + Eigen::Index(rng() % 8);
    const Matrix u = random_unitary(d, rng);
    auto p = random_probability(std::size_t(d), rng);
    auto q = random_probability(std::size_t(d), rng);
    if (d > 2 && trial % 3 == 0) { // exercise support mismatches
      p[0] = 0.0;
      q[1] = 0.0;
      double sp = 0, sq = 0;
      for (auto v : p) sp += v;
      for (auto v : q) sq += v;
      for (auto &v : p) v /= sp;
      for (auto &v : q) v /= sq;
    }
    const double eps = std::uniform_real_distribution<double>(0.0, 0.95)(rng);
    const Matrix rho = u * diag(p) * u.adjoint(), sigma = u * diag(q) * u.adjoint();
    const double expected = testutil::classical_type2(p, q, eps);
    const auto r = dh_epsilon(hermitian_part(rho), hermitian_part(sigma), eps);
    EXPECT_NEAR(r.test.type2, expected, 1e-9) << "trial " << trial;
    EXPECT_LE(r.test.type1, 1.0 - eps + 1e-9);
    EXPECT_GE(r.test.type1, 1.0 - eps - 1e-9);
  }
}

TEST(Dh, BlockDiagonalAgreesWithDense) {
  Rng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<double> p = random_probability(3, rng), q = random_probability(3, rng);
    Matrix theta = Matrix::Zero(6, 6), hat = Matrix::Zero(6, 6);
    for (Eigen::Index x = 0; x < 3; ++x) {
      theta.block(2 * x, 2 * x, 2, 2) = p[std::size_t(x)] * random_density_matrix(2, 2, rng);
      hat.block(2 * x, 2 * x, 2, 2) = q[std::size_t(x)] * random_density_matrix(2, 2, rng);
    }
    const DensityOperator a({{"X", 3}, {"E", 2}}, hermitian_part(theta));
    const DensityOperator b({{"X", 3}, {"E", 2}}, hermitian_part(hat));
    for (double eps : {0.0, 0.05, 0.3})
      EXPECT_NEAR(dh_epsilon_cq(a, b, eps, 3), dh_epsilon(a, b, eps).value, 1e-8);
  }
  Matrix off = Matrix::Identity(4, 4) / 4.0;
  off(0, 2) = off(2, 0) = 0.1;
  const DensityOperator bad({{"X", 2}, {"E", 2}}, off);
  EXPECT_THROW(dh_epsilon_cq(bad, bad, 0.1, 2), NotBlockDiagonal);
}

TEST(Dh, DataProcessing) {
  Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index din = 2 + Eigen::Index(rng() % 3), dout = 1 + Eigen::Index(rng() % 4);
    const DensityOperator rho({{"A", din}}, random_density_matrix(din, 1 + Eigen::Index(rng() % din), rng));
    const DensityOperator sigma({{"A", din}}, random_density_matrix(din, din, rng));
    const auto ch = testutil::random_channel(din, dout, 1 + Eigen::Index(rng() % 3), rng);
    for (double eps : {0.05, 0.2, 0.5}) {
      const auto r = dpi_check(rho, sigma, ch, eps);
      EXPECT_TRUE(r.monotone) << r.before << " -> " << r.after;
    }
  }
}

TEST(Dh, DualBoundCertifiesOptimum) {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const Matrix rho = random_density_matrix(4, 2, rng), sigma = random_density_matrix(4, 4, rng);
    const auto r = dh_epsilon(rho, sigma, 0.25);
    EXPECT_LE(r.dual_bound, r.test.type2 + 1e-10);
    EXPECT_NEAR(r.dual_bound, r.test.type2, 1e-8);
  }
}
