#pragma once

// Quantum-state primitives: registers, density operators and the entropic
// quantities built on them. All logarithms are base 2.

#include <string>
#include <string_view>
#include <vector>

#include "rebound/errors.hpp"
#include "rebound/linalg.hpp"
#include "rebound/tolerances.hpp"

namespace rebound {

struct Register {
  std::string name;
  Eigen::Index dim = 1;

  friend bool operator==(const Register &, const Register &) = default;
};

using Registers = std::vector<Register>;

Dims dims_of(const Registers &regs);

/// How far a matrix is from being a density operator.
struct StateDeviation {
  double hermiticity = 0.0; ///< max |m - m^dagger| entry
  double min_eigenvalue = 0.0;
  double trace_error = 0.0; ///< |Tr m - 1|
  bool finite = true;

  bool ok() const {
    return finite && hermiticity <= tol::herm && min_eigenvalue >= -tol::psd &&
           trace_error <= tol::trace;
  }
};

StateDeviation state_deviation(const Matrix &m);

/// Hermitian, positive semidefinite, unit-trace operator on an ordered list of
/// named registers. Immutable after construction; construction validates.
class DensityOperator {
public:
  /// Throws RegisterClash, DimensionMismatch or InvalidState.
  DensityOperator(Registers registers, Matrix matrix);

  const Registers &registers() const { return registers_; }
  const Matrix &matrix() const { return matrix_; }
  Dims dims() const { return dims_of(registers_); }
  Eigen::Index dim() const { return matrix_.rows(); }

  /// Position of a register; throws UnknownRegister.
  std::size_t index_of(std::string_view name) const;
  bool has_register(std::string_view name) const;

  /// Same matrix with registers renamed positionally.
  DensityOperator relabeled(const std::vector<std::string> &names) const;

private:
  Registers registers_;
  Matrix matrix_;
};

// Constructors for common states.
DensityOperator basis_state(const Register &reg, Eigen::Index index);
DensityOperator maximally_mixed(const Register &reg);
/// |psi><psi| for a (not necessarily normalised) vector; normalises.
DensityOperator pure_state(Registers regs, const Vector &psi);
/// Normalised maximally entangled state sum_i |ii>/sqrt(d) on (a, b).
DensityOperator maximally_entangled(const Register &a, const Register &b);

DensityOperator tensor(const DensityOperator &a, const DensityOperator &b);

/// Reduced state on `keep` (kept registers stay in their original order).
DensityOperator partial_trace(const DensityOperator &rho, const std::vector<std::string> &keep);

/// Reorder the registers of rho to the given name order.
DensityOperator reorder(const DensityOperator &rho, const std::vector<std::string> &order);

struct HermitianEigen {
  RealVector values; ///< descending
  Matrix vectors;    ///< columns match `values`
};

/// Throws NotHermitian when m deviates from its adjoint by more than tol::herm.
HermitianEigen eig_hermitian(const Matrix &m);

/// Entropy in bits of a positive semidefinite matrix of unit trace; the
/// spectrum is clipped to [0, 1] and eigenvalues below tol::eig_zero dropped.
double entropy_bits(const Matrix &m);

double von_neumann_entropy(const DensityOperator &rho);

/// Umegaki relative entropy in bits on raw matrices. Returns +inf when the
/// support of rho is not contained in that of sigma.
double relative_entropy_bits(const Matrix &rho, const Matrix &sigma,
                             double support_tol = tol::support);

/// Throws DimensionMismatch if the dimensions differ.
double relative_entropy(const DensityOperator &rho, const DensityOperator &sigma);

/// I(A;B) = S(A) + S(B) - S(AB). partA and partB must partition the
/// registers of rho (BadPartition otherwise).
double mutual_information(const DensityOperator &rho, const std::vector<std::string> &partA,
                          const std::vector<std::string> &partB);

double trace_distance(const Matrix &a, const Matrix &b); ///< ||a - b||_1 (no 1/2)

/// Uhlmann fidelity (Tr |sqrt(a) sqrt(b)|)^2.
double fidelity(const Matrix &a, const Matrix &b);

Matrix psd_sqrt(const Matrix &m);

/// Support projector: eigenvectors with eigenvalue above `threshold`.
Matrix support_projector(const Matrix &m, double threshold = tol::support);

} // namespace rebound
