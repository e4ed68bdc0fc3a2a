#pragma once

// Dense complex linear algebra helpers on top of Eigen. Everything here is a
// header-only template over the Eigen expression type so it works equally on
// Eigen::MatrixXcd, fixed-size matrices and lazy expressions.

#include <algorithm>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

namespace rebound {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using Matrix = CMatrix<double>;
using Vector = CVector<double>;
using RealVector = RVector<double>;
using Complex = std::complex<double>;

using Dims = std::vector<Eigen::Index>;

inline Eigen::Index product(const Dims &dims) {
  return std::accumulate(dims.begin(), dims.end(), Eigen::Index{1},
                         std::multiplies<>());
}

template <typename DA, typename DB>
auto kron(const Eigen::MatrixBase<DA> &a, const Eigen::MatrixBase<DB> &b) {
  using Scalar = typename DA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::kroneckerProduct(a.derived().eval(), b.derived().eval());
  return out;
}

/// Largest entrywise deviation of m from its adjoint.
template <typename Derived>
typename Derived::RealScalar hermitian_deviation(const Eigen::MatrixBase<Derived> &m) {
  if (m.rows() != m.cols())
    return std::numeric_limits<typename Derived::RealScalar>::infinity();
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// Frobenius distance of m^dagger m from the identity.
template <typename Derived>
typename Derived::RealScalar isometry_deviation(const Eigen::MatrixBase<Derived> &m) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  return (m.adjoint() * m - Mat::Identity(m.cols(), m.cols())).norm();
}

template <typename Derived>
typename Derived::RealScalar unitary_deviation(const Eigen::MatrixBase<Derived> &m) {
  if (m.rows() != m.cols())
    return std::numeric_limits<typename Derived::RealScalar>::infinity();
  return std::max(isometry_deviation(m), isometry_deviation(m.adjoint()));
}

template <typename Derived> auto hermitian_part(const Eigen::MatrixBase<Derived> &m) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Mat out = (m + m.adjoint()) / typename Derived::RealScalar(2);
  return out;
}

/// Eigenvalues of a Hermitian matrix (ascending, as Eigen returns them).
template <typename Derived> auto hermitian_eigenvalues(const Eigen::MatrixBase<Derived> &m) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Mat> solver(hermitian_part(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().eval();
}

/// Trace norm of a Hermitian argument: the sum of absolute eigenvalues.
template <typename Derived>
typename Derived::RealScalar trace_norm(const Eigen::MatrixBase<Derived> &m) {
  return hermitian_eigenvalues(m).cwiseAbs().sum();
}

/// Apply a scalar function to the spectrum of a Hermitian matrix.
template <typename Derived, typename Fn>
auto hermitian_function(const Eigen::MatrixBase<Derived> &m, Fn &&fn) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::SelfAdjointEigenSolver<Mat> solver(hermitian_part(m));
  auto values = solver.eigenvalues().unaryExpr(fn).eval();
  Mat out = solver.eigenvectors() * values.asDiagonal() * solver.eigenvectors().adjoint();
  return out;
}

/// Reorder tensor factors: output factor k is input factor perm[k].
template <typename Derived>
auto permute_subsystems(const Eigen::MatrixBase<Derived> &m, const Dims &dims,
                        const std::vector<std::size_t> &perm) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const std::size_t k = dims.size();
  const Eigen::Index total = product(dims);
  Dims out_dims(k);
  for (std::size_t i = 0; i < k; ++i)
    out_dims[i] = dims[perm[i]];

  // Row-major strides of the input factors.
  std::vector<Eigen::Index> in_stride(k, 1);
  for (std::size_t i = k; i-- > 1;)
    in_stride[i - 1] = in_stride[i] * dims[i];

  // Map each output multi-index to its input flat index.
  std::vector<Eigen::Index> source(static_cast<std::size_t>(total));
  std::vector<Eigen::Index> digit(k, 0);
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    Eigen::Index src = 0;
    for (std::size_t i = 0; i < k; ++i)
      src += digit[i] * in_stride[perm[i]];
    source[static_cast<std::size_t>(flat)] = src;
    for (std::size_t i = k; i-- > 0;) {
      if (++digit[i] < out_dims[i])
        break;
      digit[i] = 0;
    }
  }

  Mat out(total, total);
  for (Eigen::Index r = 0; r < total; ++r)
    for (Eigen::Index c = 0; c < total; ++c)
      out(r, c) = m(source[static_cast<std::size_t>(r)], source[static_cast<std::size_t>(c)]);
  return out;
}

/// Trace out every factor not listed in keep. Kept factors stay in their
/// original relative order.
template <typename Derived>
auto partial_trace(const Eigen::MatrixBase<Derived> &m, const Dims &dims,
                   std::vector<std::size_t> keep) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  std::sort(keep.begin(), keep.end());
  std::vector<std::size_t> perm = keep;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (!std::binary_search(keep.begin(), keep.end(), i))
      perm.push_back(i);

  Eigen::Index kept_dim = 1;
  for (auto i : keep)
    kept_dim *= dims[i];
  const Eigen::Index traced_dim = product(dims) / kept_dim;

  Mat arranged = permute_subsystems(m, dims, perm);
  Mat out = Mat::Zero(kept_dim, kept_dim);
  for (Eigen::Index r = 0; r < kept_dim; ++r)
    for (Eigen::Index c = 0; c < kept_dim; ++c)
      for (Eigen::Index t = 0; t < traced_dim; ++t)
        out(r, c) += arranged(r * traced_dim + t, c * traced_dim + t);
  return out;
}

/// I_left (x) op (x) I_right for an operator acting on factor `index`.
template <typename Derived>
auto embed_operator(const Eigen::MatrixBase<Derived> &op, const Dims &dims, std::size_t index) {
  using Mat = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Eigen::Index left = 1, right = 1;
  for (std::size_t i = 0; i < index; ++i)
    left *= dims[i];
  for (std::size_t i = index + 1; i < dims.size(); ++i)
    right *= dims[i];
  Mat out = kron(kron(Mat::Identity(left, left), op), Mat::Identity(right, right));
  return out;
}

} // namespace rebound
