#include "rebound/random.hpp"

#include <cmath>
#include <stdexcept>

namespace rebound {

Matrix ginibre(Eigen::Index rows, Eigen::Index cols, Rng &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j)
      g(i, j) = Complex(normal(rng), normal(rng));
  return g;
}

Matrix random_unitary(Eigen::Index d, Rng &rng) {
  Eigen::HouseholderQR<Matrix> qr(ginibre(d, d, rng));
  Matrix q = qr.householderQ();
  Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0)
      q.col(j) *= r(j, j) / mag;
  }
  return q;
}

Vector random_pure_vector(Eigen::Index d, Rng &rng) {
  Vector v = ginibre(d, 1, rng).col(0);
  return v / v.norm();
}

Matrix random_density_matrix(Eigen::Index d, Eigen::Index rank, Rng &rng) {
  Matrix g = ginibre(d, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return hermitian_part(rho);
}

std::pair<Matrix, Matrix> random_commuting_pair(Eigen::Index d, Rng &rng) {
  const Matrix u = random_unitary(d, rng);
  auto p = random_probability(static_cast<std::size_t>(d), rng);
  auto q = random_probability(static_cast<std::size_t>(d), rng);
  RealVector a(d), b(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    a(i) = p[static_cast<std::size_t>(i)];
    b(i) = q[static_cast<std::size_t>(i)];
  }
  Matrix rho = u * a.cast<Complex>().asDiagonal() * u.adjoint();
  Matrix sigma = u * b.cast<Complex>().asDiagonal() * u.adjoint();
  return {hermitian_part(rho), hermitian_part(sigma)};
}

std::vector<Matrix> random_kraus(Eigen::Index d_in, Eigen::Index d_out, Eigen::Index num_kraus,
                                 Rng &rng) {
  const Eigen::Index big = d_out * num_kraus;
  if (big < d_in)
    throw std::invalid_argument("random_kraus: output space smaller than input");
  Matrix v = random_unitary(big, rng).leftCols(d_in);
  std::vector<Matrix> kraus;
  for (Eigen::Index k = 0; k < num_kraus; ++k)
    kraus.push_back(v.middleRows(k * d_out, d_out));
  return kraus;
}

std::vector<double> random_probability(std::size_t n, Rng &rng) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(n);
  double total = 0.0;
  for (auto &x : p)
    total += (x = expo(rng));
  for (auto &x : p)
    x /= total;
  return p;
}

} // namespace rebound
