#include "rebound/divergences.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace rebound {

namespace {

struct Spectral {
  RealVector values;
  Matrix vectors;
  RealVector rho_weight; ///< <v|rho|v> for each eigenvector
};

struct PencilState {
  std::vector<Spectral> blocks;
  double positive_weight = 0.0; ///< Tr P_+ rho
  double positive_trace = 0.0;  ///< Tr (mu rho - sigma)_+
};

class Pencil {
public:
  Pencil(const std::vector<Matrix> &rho, const std::vector<Matrix> &sigma)
      : rho_(rho), sigma_(sigma) {
    for (std::size_t k = 0; k < rho.size(); ++k) {
      rho_norm_ = std::max(rho_norm_, rho[k].cwiseAbs().rowwise().sum().maxCoeff());
      sigma_norm_ = std::max(sigma_norm_, sigma[k].cwiseAbs().rowwise().sum().maxCoeff());
    }
  }

  /// Roundoff scale of the eigenvalues of mu rho - sigma.
  double noise(double mu) const {
    return 64.0 * std::numeric_limits<double>::epsilon() * (mu * rho_norm_ + sigma_norm_);
  }

  PencilState at(double mu) const {
    PencilState st;
    const double delta = noise(mu);
    for (std::size_t k = 0; k < rho_.size(); ++k) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(mu * rho_[k] - sigma_[k]));
      Spectral s{es.eigenvalues(), es.eigenvectors(), RealVector()};
      s.rho_weight = (s.vectors.adjoint() * rho_[k] * s.vectors).diagonal().real();
      for (Eigen::Index j = 0; j < s.values.size(); ++j)
        if (s.values(j) > delta) {
          st.positive_weight += s.rho_weight(j);
          st.positive_trace += s.values(j);
        }
      st.blocks.push_back(std::move(s));
    }
    return st;
  }

private:
  const std::vector<Matrix> &rho_;
  const std::vector<Matrix> &sigma_;
  double rho_norm_ = 0.0;
  double sigma_norm_ = 0.0;
};

void check_blocks(const std::vector<Matrix> &rho, const std::vector<Matrix> &sigma) {
  if (rho.empty() || rho.size() != sigma.size())
    throw DimensionMismatch("block lists must be non-empty and of equal length");
  for (std::size_t k = 0; k < rho.size(); ++k)
    if (rho[k].rows() != sigma[k].rows() || rho[k].rows() != rho[k].cols() ||
        sigma[k].rows() != sigma[k].cols())
      throw DimensionMismatch("block " + std::to_string(k) + " shapes differ");
}

double block_trace(const std::vector<Matrix> &ops, const std::vector<Matrix> &m) {
  double t = 0.0;
  for (std::size_t k = 0; k < ops.size(); ++k)
    t += (ops[k] * m[k]).trace().real();
  return t;
}

BlockTestResult zero_error_test(const std::vector<Matrix> &rho, const std::vector<Matrix> &sigma) {
  BlockTestResult out;
  for (const auto &r : rho)
    out.ops.push_back(support_projector(r, tol::support));
  out.type1 = block_trace(out.ops, rho);
  out.type2 = block_trace(out.ops, sigma);
  out.multiplier = std::numeric_limits<double>::infinity();
  out.dual_bound = out.type2;
  return out;
}

} // namespace

double positive_part_trace(const Matrix &m) {
  const RealVector values = hermitian_eigenvalues(m);
  double t = 0.0;
  for (double v : values)
    if (v > 0.0)
      t += v;
  return t;
}

double type2_to_bits(double type2) {
  if (type2 <= tol::type2_zero)
    return std::numeric_limits<double>::infinity();
  return -std::log2(type2);
}

BlockTestResult neyman_pearson(const std::vector<Matrix> &rho, const std::vector<Matrix> &sigma,
                               double eps) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw BadEpsilon("epsilon must lie in [0, 1)");
  check_blocks(rho, sigma);
  if (eps == 0.0)
    return zero_error_test(rho, sigma);

  const double target = 1.0 - eps;
  const Pencil pencil(rho, sigma);

  // Tr P_+(mu rho - sigma) rho is nondecreasing in mu; bracket the jump
  // through `target` and bisect on the multiplier.
  double lo = 0.0, hi = 1.0;
  PencilState hi_state = pencil.at(hi);
  while (hi_state.positive_weight < target && hi < 1e300) {
    lo = hi;
    hi *= 2.0;
    hi_state = pencil.at(hi);
  }
  for (int it = 0; it < 4000 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi;
       ++it) {
    const double mid = 0.5 * (lo + hi);
    PencilState st = pencil.at(mid);
    if (st.positive_weight >= target) {
      hi = mid;
      hi_state = std::move(st);
    } else {
      lo = mid;
    }
  }

  // At mu = hi the eigenvalues that crossed zero inside [lo, hi] are tiny and
  // positive. Demote the smallest positive directions to the boundary space
  // until P_+ carries at most `target`, then fill the rest with weight q.
  struct Direction {
    std::size_t block;
    Eigen::Index index;
    double value;
    double weight;
  };
  const double delta = pencil.noise(hi);
  std::vector<Direction> positive, boundary;
  for (std::size_t k = 0; k < hi_state.blocks.size(); ++k) {
    const auto &s = hi_state.blocks[k];
    for (Eigen::Index j = 0; j < s.values.size(); ++j) {
      const Direction d{k, j, s.values(j), s.rho_weight(j)};
      if (s.values(j) > delta)
        positive.push_back(d);
      else if (s.values(j) >= -delta)
        boundary.push_back(d);
    }
  }
  std::sort(positive.begin(), positive.end(),
            [](const Direction &a, const Direction &b) { return a.value > b.value; });
  double w_pos = 0.0;
  for (const auto &d : positive)
    w_pos += d.weight;
  while (!positive.empty() && w_pos > target) {
    w_pos -= positive.back().weight;
    boundary.push_back(positive.back());
    positive.pop_back();
  }
  double w_bnd = 0.0;
  for (const auto &d : boundary)
    w_bnd += d.weight;
  const double q = w_bnd > 0.0 ? std::clamp((target - w_pos) / w_bnd, 0.0, 1.0) : 0.0;

  BlockTestResult out;
  for (const auto &r : rho)
    out.ops.push_back(Matrix::Zero(r.rows(), r.cols()));
  auto add = [&](const Direction &d, double weight) {
    const auto v = hi_state.blocks[d.block].vectors.col(d.index);
    out.ops[d.block] += weight * (v * v.adjoint());
  };
  for (const auto &d : positive)
    add(d, 1.0);
  if (q > 0.0)
    for (const auto &d : boundary)
      add(d, q);

  out.type1 = block_trace(out.ops, rho);
  out.type2 = std::max(0.0, block_trace(out.ops, sigma));
  out.multiplier = hi;
  double plus = 0.0;
  for (std::size_t k = 0; k < rho.size(); ++k)
    plus += positive_part_trace(hi * rho[k] - sigma[k]);
  out.dual_bound = hi * target - plus;
  return out;
}

DhResult dh_epsilon(const Matrix &rho, const Matrix &sigma, double eps) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw DimensionMismatch("D_h of operators with different dimensions");
  const auto np = neyman_pearson({rho}, {sigma}, eps);
  DhResult out;
  out.test = {np.ops.front(), np.type1, np.type2};
  out.value = type2_to_bits(np.type2);
  out.multiplier = np.multiplier;
  out.dual_bound = np.dual_bound;
  return out;
}

DhResult dh_epsilon(const DensityOperator &rho, const DensityOperator &sigma, double eps) {
  if (rho.dim() != sigma.dim())
    throw DimensionMismatch("D_h of states with different dimensions");
  return dh_epsilon(rho.matrix(), sigma.matrix(), eps);
}

namespace {

std::vector<Matrix> split_blocks(const Matrix &m, std::size_t num_blocks) {
  const auto nb = static_cast<Eigen::Index>(num_blocks);
  if (nb < 1 || m.rows() % nb != 0)
    throw NotBlockDiagonal("dimension is not a multiple of the block count");
  const Eigen::Index b = m.rows() / nb;
  std::vector<Matrix> blocks;
  for (Eigen::Index i = 0; i < nb; ++i) {
    for (Eigen::Index j = 0; j < nb; ++j)
      if (i != j && m.block(i * b, j * b, b, b).cwiseAbs().maxCoeff() > tol::num)
        throw NotBlockDiagonal("off-diagonal block (" + std::to_string(i) + ", " +
                               std::to_string(j) + ") is non-zero");
    blocks.push_back(m.block(i * b, i * b, b, b));
  }
  return blocks;
}

} // namespace

double dh_epsilon_cq(const DensityOperator &theta, const DensityOperator &theta_hat, double eps,
                     std::size_t num_blocks) {
  if (theta.dim() != theta_hat.dim())
    throw DimensionMismatch("D_h of states with different dimensions");
  const auto np = neyman_pearson(split_blocks(theta.matrix(), num_blocks),
                                 split_blocks(theta_hat.matrix(), num_blocks), eps);
  return type2_to_bits(np.type2);
}

DpiReport dpi_check(const DensityOperator &rho, const DensityOperator &sigma,
                    const QuantumChannel &ch, double eps) {
  if (rho.dim() != ch.in_dim() || sigma.dim() != ch.in_dim())
    throw DimensionMismatch("channel input does not match the states");
  DpiReport out;
  out.before = dh_epsilon(rho.matrix(), sigma.matrix(), eps).value;
  out.after = dh_epsilon(ch.apply(rho.matrix()), ch.apply(sigma.matrix()), eps).value;
  out.monotone = std::isinf(out.before) || out.after <= out.before + tol::num;
  return out;
}

} // namespace rebound
