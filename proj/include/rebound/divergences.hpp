#pragma once

// epsilon-hypothesis-testing divergence
//   D_h^eps(rho || sigma) = -log2 min { Tr L sigma : 0 <= L <= I, Tr L rho >= 1 - eps }
// solved exactly through the quantum Neyman-Pearson structure of the optimal
// test rather than a generic SDP.

#include <vector>

#include "rebound/channels.hpp"

namespace rebound {

struct HypothesisTest {
  Matrix op;          ///< 0 <= op <= I
  double type1 = 0.0; ///< Tr{op rho}
  double type2 = 0.0; ///< Tr{op sigma}
};

struct DhResult {
  double value = 0.0; ///< bits, +inf for a perfect test
  HypothesisTest test;
  /// Lagrange multiplier mu of the dual max_mu mu(1-eps) - Tr(mu rho - sigma)_+.
  double multiplier = 0.0;
  /// Dual lower bound on the optimal type-2 error at `multiplier`.
  double dual_bound = 0.0;
};

/// Blockwise Neyman-Pearson problem: rho and sigma are block diagonal and
/// given by their (sub-normalised) diagonal blocks.
struct BlockTestResult {
  double type2 = 0.0;
  double type1 = 0.0;
  double multiplier = 0.0;
  double dual_bound = 0.0;
  std::vector<Matrix> ops; ///< optimal test, one block per input block
};

/// Throws BadEpsilon unless 0 <= eps < 1, DimensionMismatch on shape errors.
BlockTestResult neyman_pearson(const std::vector<Matrix> &rho_blocks,
                               const std::vector<Matrix> &sigma_blocks, double eps);

/// Tr (m)_+ for Hermitian m.
double positive_part_trace(const Matrix &m);

/// -log2 of a type-2 error, +inf when it is at most tol::type2_zero.
double type2_to_bits(double type2);

DhResult dh_epsilon(const Matrix &rho, const Matrix &sigma, double eps);
DhResult dh_epsilon(const DensityOperator &rho, const DensityOperator &sigma, double eps);

/// D_h^eps of two classical-quantum states that are block diagonal over
/// `num_blocks` equal classical blocks. Throws NotBlockDiagonal if either
/// argument has off-block entries above tol::num.
double dh_epsilon_cq(const DensityOperator &theta, const DensityOperator &theta_hat, double eps,
                     std::size_t num_blocks);

struct DpiReport {
  double before = 0.0; ///< D_h^eps(rho || sigma)
  double after = 0.0;  ///< D_h^eps(C(rho) || C(sigma))
  bool monotone = false;
};

/// ch acts on the whole system of rho and sigma.
DpiReport dpi_check(const DensityOperator &rho, const DensityOperator &sigma,
                    const QuantumChannel &ch, double eps);

} // namespace rebound
