#include <gtest/gtest.h>

#include <cmath>

#include "rebound/qcore.hpp"
#include "rebound/random.hpp"
#include "test_util.hpp"

using namespace rebound;
using rebound::testutil::diag;

TEST(DensityOperator, RejectsBadInput) {
  EXPECT_THROW(DensityOperator({{"A", 2}, {"A", 2}}, Matrix::Identity(4, 4) / 4.0), RegisterClash);
  EXPECT_THROW(DensityOperator({{"A", 2}}, Matrix::Identity(3, 3) / 3.0), DimensionMismatch);
  EXPECT_THROW(DensityOperator({{"A", 2}}, diag({1.5, -0.5})), InvalidState);
  EXPECT_THROW(DensityOperator({{"A", 2}}, diag({0.5, 0.4})), InvalidState);
  Matrix nonherm = Matrix::Identity(2, 2) / 2.0;
  nonherm(0, 1) = 0.1;
  EXPECT_THROW(DensityOperator({{"A", 2}}, nonherm), InvalidState);
  const auto rho = maximally_mixed({"A", 2});
  EXPECT_THROW(rho.index_of("B"), UnknownRegister);
}

TEST(DensityOperator, PartialTraceOfBellStateIsMixed) {
  const auto phi = maximally_entangled({"R", 2}, {"B", 2});
  const auto r = partial_trace(phi, {"R"});
  EXPECT_LT(testutil::max_abs(r.matrix() - Matrix::Identity(2, 2) / 2.0), 1e-15);
  EXPECT_NEAR(mutual_information(phi, {"R"}, {"B"}), 2.0, 1e-12);
}

TEST(DensityOperator, ReorderUndoesTensorOrder) {
  Rng rng(3);
  const DensityOperator a({{"A", 2}}, random_density_matrix(2, 2, rng));
  const DensityOperator b({{"B", 3}}, random_density_matrix(3, 3, rng));
  const auto ab = tensor(a, b);
  const auto ba = reorder(ab, {"B", "A"});
  EXPECT_LT(testutil::max_abs(ba.matrix() - tensor(b, a).matrix()), 1e-15);
  EXPECT_LT(testutil::max_abs(partial_trace(ab, {"B"}).matrix() - b.matrix()), 1e-14);
  EXPECT_NEAR(mutual_information(ab, {"A"}, {"B"}), 0.0, 1e-12);
}

TEST(Entropy, DepolarizedBellSpectrum) {
  // Spectrum (0.625, 0.125, 0.125, 0.125) of the p = 0.5 depolarized Bell state.
  EXPECT_NEAR(entropy_bits(diag({0.625, 0.125, 0.125, 0.125})), 1.5487949406953985, 1e-13);
}

TEST(Entropy, RelativeEntropyClassical) {
  EXPECT_NEAR(relative_entropy_bits(diag({0.5, 0.5}), diag({0.9, 0.1})), 0.7369655941662061,
              1e-13);
  EXPECT_TRUE(std::isinf(relative_entropy_bits(diag({0.5, 0.5}), diag({1.0, 0.0}))));
  EXPECT_NEAR(relative_entropy_bits(diag({1.0, 0.0}), diag({0.5, 0.5})), 1.0, 1e-13);
}

TEST(Entropy, MutualInformationPartitionChecked) {
  const auto phi = maximally_entangled({"R", 2}, {"B", 2});
  EXPECT_THROW(mutual_information(phi, {"R"}, {"R"}), BadPartition);
  EXPECT_THROW(mutual_information(phi, {"R"}, {}), BadPartition);
}

TEST(Properties, RandomStates) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::Index da = 1 + Eigen::Index(rng() % 3), db = 1 + Eigen::Index(rng() % 3);
    const Eigen::Index rank = 1 + Eigen::Index(rng() % (da * db));
    const DensityOperator rho({{"A", da}, {"B", db}}, random_density_matrix(da * db, rank, rng));
    const double s = von_neumann_entropy(rho);
    EXPECT_GE(s, -1e-12);
    EXPECT_LE(s, std::log2(double(da * db)) + 1e-12);
    const double i = mutual_information(rho, {"A"}, {"B"});
    EXPECT_GE(i, -1e-10);
    EXPECT_LE(i, 2.0 * std::log2(double(std::min(da, db))) + 1e-10);
    EXPECT_NEAR(partial_trace(rho, {"A"}).matrix().trace().real(), 1.0, 1e-12);

    const Matrix sigma = random_density_matrix(da * db, da * db, rng);
    const double f = fidelity(rho.matrix(), sigma);
    EXPECT_GE(f, -1e-12);
    EXPECT_LE(f, 1.0 + 1e-10);
    EXPECT_NEAR(fidelity(rho.matrix(), rho.matrix()), 1.0, 1e-7);
    EXPECT_GE(relative_entropy_bits(rho.matrix(), sigma), 0.0);
    // Fuchs-van de Graaf: 1 - sqrt(F) <= ||rho - sigma||_1 / 2.
    EXPECT_LE(1.0 - std::sqrt(f), 0.5 * trace_distance(rho.matrix(), sigma) + 1e-9);
  }
}
