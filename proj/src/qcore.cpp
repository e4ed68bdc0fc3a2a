#include "rebound/qcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace rebound {

Dims dims_of(const Registers &regs) {
  Dims dims;
  dims.reserve(regs.size());
  for (const auto &r : regs)
    dims.push_back(r.dim);
  return dims;
}

StateDeviation state_deviation(const Matrix &m) {
  StateDeviation dev;
  if (m.rows() != m.cols() || m.rows() == 0) {
    dev.finite = false;
    return dev;
  }
  dev.finite = m.allFinite();
  if (!dev.finite)
    return dev;
  dev.hermiticity = hermitian_deviation(m);
  dev.min_eigenvalue = hermitian_eigenvalues(m).minCoeff();
  dev.trace_error = std::abs(m.trace() - Complex(1.0));
  return dev;
}

DensityOperator::DensityOperator(Registers registers, Matrix matrix)
    : registers_(std::move(registers)), matrix_(std::move(matrix)) {
  if (registers_.empty())
    throw InvalidState("density operator needs at least one register");
  std::set<std::string> seen;
  for (const auto &r : registers_) {
    if (r.dim < 1)
      throw InvalidState("register '" + r.name + "' has non-positive dimension");
    if (!seen.insert(r.name).second)
      throw RegisterClash("duplicate register name '" + r.name + "'");
  }
  const auto d = product(dims_of(registers_));
  if (matrix_.rows() != d || matrix_.cols() != d)
    throw DimensionMismatch("matrix is " + std::to_string(matrix_.rows()) + "x" +
                            std::to_string(matrix_.cols()) + ", registers need " +
                            std::to_string(d));
  const auto dev = state_deviation(matrix_);
  if (!dev.finite)
    throw InvalidState("non-finite matrix entry");
  if (dev.hermiticity > tol::herm)
    throw InvalidState("not Hermitian (deviation " + std::to_string(dev.hermiticity) + ")");
  if (dev.min_eigenvalue < -tol::psd)
    throw InvalidState("negative eigenvalue " + std::to_string(dev.min_eigenvalue));
  if (dev.trace_error > tol::trace)
    throw InvalidState("trace differs from 1 by " + std::to_string(dev.trace_error));
}

std::size_t DensityOperator::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < registers_.size(); ++i)
    if (registers_[i].name == name)
      return i;
  throw UnknownRegister("no register named '" + std::string(name) + "'");
}

bool DensityOperator::has_register(std::string_view name) const {
  return std::any_of(registers_.begin(), registers_.end(),
                     [&](const Register &r) { return r.name == name; });
}

DensityOperator DensityOperator::relabeled(const std::vector<std::string> &names) const {
  if (names.size() != registers_.size())
    throw DimensionMismatch("relabel needs one name per register");
  Registers regs = registers_;
  for (std::size_t i = 0; i < regs.size(); ++i)
    regs[i].name = names[i];
  return DensityOperator(std::move(regs), matrix_);
}

DensityOperator basis_state(const Register &reg, Eigen::Index index) {
  if (index < 0 || index >= reg.dim)
    throw DimensionMismatch("basis index out of range");
  Matrix m = Matrix::Zero(reg.dim, reg.dim);
  m(index, index) = 1.0;
  return DensityOperator({reg}, std::move(m));
}

DensityOperator maximally_mixed(const Register &reg) {
  return DensityOperator({reg}, Matrix::Identity(reg.dim, reg.dim) / double(reg.dim));
}

DensityOperator pure_state(Registers regs, const Vector &psi) {
  const double norm = psi.norm();
  if (norm == 0.0 || !std::isfinite(norm))
    throw InvalidState("cannot normalise the zero vector");
  Vector v = psi / norm;
  return DensityOperator(std::move(regs), v * v.adjoint());
}

DensityOperator maximally_entangled(const Register &a, const Register &b) {
  if (a.dim != b.dim)
    throw DimensionMismatch("maximally entangled state needs equal dimensions");
  Vector psi = Vector::Zero(a.dim * b.dim);
  for (Eigen::Index i = 0; i < a.dim; ++i)
    psi(i * b.dim + i) = 1.0;
  return pure_state({a, b}, psi);
}

DensityOperator tensor(const DensityOperator &a, const DensityOperator &b) {
  for (const auto &r : b.registers())
    if (a.has_register(r.name))
      throw RegisterClash("register '" + r.name + "' appears on both sides");
  Registers regs = a.registers();
  regs.insert(regs.end(), b.registers().begin(), b.registers().end());
  return DensityOperator(std::move(regs), kron(a.matrix(), b.matrix()));
}

DensityOperator partial_trace(const DensityOperator &rho, const std::vector<std::string> &keep) {
  std::vector<std::size_t> idx;
  for (const auto &name : keep)
    idx.push_back(rho.index_of(name));
  std::sort(idx.begin(), idx.end());
  if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
    throw RegisterClash("register listed twice in keep");
  if (idx.empty())
    throw UnknownRegister("partial trace must keep at least one register");
  Registers regs;
  for (auto i : idx)
    regs.push_back(rho.registers()[i]);
  return DensityOperator(std::move(regs), partial_trace(rho.matrix(), rho.dims(), idx));
}

DensityOperator reorder(const DensityOperator &rho, const std::vector<std::string> &order) {
  if (order.size() != rho.registers().size())
    throw BadPartition("reorder must list every register exactly once");
  std::vector<std::size_t> perm;
  Registers regs;
  for (const auto &name : order) {
    perm.push_back(rho.index_of(name));
    regs.push_back(rho.registers()[perm.back()]);
  }
  auto sorted = perm;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw BadPartition("reorder lists a register twice");
  return DensityOperator(std::move(regs), permute_subsystems(rho.matrix(), rho.dims(), perm));
}

HermitianEigen eig_hermitian(const Matrix &m) {
  if (m.rows() != m.cols())
    throw NotHermitian("matrix is not square");
  const double dev = hermitian_deviation(m);
  if (!(dev <= tol::herm))
    throw NotHermitian("deviation from adjoint " + std::to_string(dev));
  Eigen::SelfAdjointEigenSolver<Matrix> solver(hermitian_part(m));
  const Eigen::Index n = m.rows();
  HermitianEigen out{RealVector(n), Matrix(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = solver.eigenvalues()(n - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }
  return out;
}

namespace {

double entropy_of_spectrum(const RealVector &values) {
  double s = 0.0;
  for (double lambda : values) {
    lambda = std::clamp(lambda, 0.0, 1.0);
    if (lambda > tol::eig_zero)
      s -= lambda * std::log2(lambda);
  }
  return s;
}

} // namespace

double entropy_bits(const Matrix &m) { return entropy_of_spectrum(hermitian_eigenvalues(m)); }

double von_neumann_entropy(const DensityOperator &rho) { return entropy_bits(rho.matrix()); }

double relative_entropy_bits(const Matrix &rho, const Matrix &sigma, double support_tol) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw DimensionMismatch("relative entropy of operators with different dimensions");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(sigma));
  const auto &lambda = es.eigenvalues();
  const auto &v = es.eigenvectors();
  // Weight of rho along each eigenvector of sigma.
  RealVector weight = (v.adjoint() * rho * v).diagonal().real();

  double cross = 0.0;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    if (lambda(j) <= support_tol) {
      if (weight(j) > support_tol)
        return std::numeric_limits<double>::infinity();
      continue;
    }
    cross -= weight(j) * std::log2(lambda(j));
  }
  return std::max(0.0, cross - entropy_bits(rho));
}

double relative_entropy(const DensityOperator &rho, const DensityOperator &sigma) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatch("relative entropy of states with different dimensions");
  return relative_entropy_bits(rho.matrix(), sigma.matrix());
}

double mutual_information(const DensityOperator &rho, const std::vector<std::string> &partA,
                          const std::vector<std::string> &partB) {
  if (partA.empty() || partB.empty())
    throw BadPartition("both parts must be non-empty");
  std::set<std::string> all(partA.begin(), partA.end());
  for (const auto &name : partB)
    if (!all.insert(name).second)
      throw BadPartition("register '" + name + "' in both parts");
  if (all.size() != partA.size() + partB.size() || all.size() != rho.registers().size())
    throw BadPartition("parts do not cover the registers");
  for (const auto &name : all)
    if (!rho.has_register(name))
      throw BadPartition("unknown register '" + name + "'");

  const double sA = von_neumann_entropy(partial_trace(rho, partA));
  const double sB = von_neumann_entropy(partial_trace(rho, partB));
  return std::max(0.0, sA + sB - von_neumann_entropy(rho));
}

double trace_distance(const Matrix &a, const Matrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("trace distance of operators with different dimensions");
  return trace_norm(a - b);
}

Matrix psd_sqrt(const Matrix &m) {
  return hermitian_function(m, [](double x) { return std::sqrt(std::max(x, 0.0)); });
}

double fidelity(const Matrix &a, const Matrix &b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("fidelity of operators with different dimensions");
  const Matrix sa = psd_sqrt(a);
  const Matrix inner = sa * b * sa;
  const RealVector lambda = hermitian_eigenvalues(inner);
  double root = 0.0;
  for (double x : lambda)
    root += std::sqrt(std::max(x, 0.0));
  return root * root;
}

Matrix support_projector(const Matrix &m, double threshold) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(m));
  Matrix p = Matrix::Zero(m.rows(), m.cols());
  for (Eigen::Index j = 0; j < m.rows(); ++j)
    if (es.eigenvalues()(j) > threshold)
      p += es.eigenvectors().col(j) * es.eigenvectors().col(j).adjoint();
  return p;
}

} // namespace rebound
