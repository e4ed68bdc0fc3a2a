#pragma once

// Random instances shared by the unit tests and the acceptance binary.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "rebound/capacity.hpp"
#include "rebound/protocol.hpp"
#include "rebound/random.hpp"

namespace rebound::testutil {

inline double max_abs(const Matrix &m) { return m.cwiseAbs().maxCoeff(); }

inline QuantumChannel random_channel(Eigen::Index d_in, Eigen::Index d_out, Eigen::Index kraus,
                                     Rng &rng, const std::string &in = "in",
                                     const std::string &out = "out") {
  kraus = std::max(kraus, (d_in + d_out - 1) / d_out); // enough room for an isometry
  return QuantumChannel({in, d_in}, {out, d_out}, random_kraus(d_in, d_out, kraus, rng));
}

/// Random POVM with m outcomes: A_k / S^{1/2} normalisation of random PSD A_k.
inline std::vector<Matrix> random_povm(Eigen::Index d, std::size_t m, Rng &rng) {
  std::vector<Matrix> a;
  Matrix sum = Matrix::Zero(d, d);
  for (std::size_t k = 0; k < m; ++k) {
    const Matrix g = ginibre(d, d, rng);
    a.push_back(g * g.adjoint());
    sum += a.back();
  }
  const Matrix inv_sqrt =
      hermitian_function(hermitian_part(sum), [](double v) { return 1.0 / std::sqrt(v); });
  for (auto &x : a)
    x = hermitian_part(Matrix(inv_sqrt * x * inv_sqrt));
  return a;
}

/// F : B' (x) E -> B with random Kraus operators and random environment states.
inline EnvParametrization random_env(Eigen::Index d_in, Eigen::Index d_out, Eigen::Index d_env,
                                     std::size_t labels, Rng &rng) {
  QuantumChannel f({"B'E", d_in * d_env}, {"B", d_out}, random_kraus(d_in * d_env, d_out, 3, rng));
  std::vector<std::string> names;
  std::vector<Matrix> states;
  for (std::size_t x = 0; x < labels; ++x) {
    names.push_back("x" + std::to_string(x));
    states.push_back(random_density_matrix(d_env, d_env, rng));
  }
  return EnvParametrization({"E", d_env}, std::move(f), std::move(names), std::move(states));
}

/// Random adaptive protocol with memory dimension r at every stage.
inline ReboundProtocol random_protocol(std::size_t n, Eigen::Index r, Eigen::Index d_in,
                                       Eigen::Index d_out, std::size_t messages, Rng &rng) {
  DensityOperator initial({{"R1", r}, {"B'1", d_in}}, random_density_matrix(r * d_in, 2, rng));
  std::vector<QuantumChannel> adaptive;
  for (std::size_t i = 0; i + 1 < n; ++i)
    adaptive.push_back(random_channel(r * d_out, r * d_in, 2, rng));
  return ReboundProtocol(std::move(initial), std::move(adaptive),
                         random_povm(r * d_out, messages, rng), d_out);
}

/// Codebook using the first `messages` words of alphabet^n in lexicographic order.
inline Codebook lexicographic_codebook(const std::vector<std::string> &alphabet, std::size_t n,
                                       std::size_t messages) {
  std::vector<std::pair<std::string, Codebook::Word>> words;
  for (std::size_t m = 0; m < messages; ++m) {
    Codebook::Word w(n);
    std::size_t t = m;
    for (std::size_t i = n; i-- > 0;) {
      w[i] = alphabet[t % alphabet.size()];
      t /= alphabet.size();
    }
    words.emplace_back("m" + std::to_string(m), std::move(w));
  }
  return Codebook(std::move(words));
}

/// Classical minimal type-2 error: fill outcomes in decreasing likelihood
/// ratio p/q until the type-1 budget is met.
inline double classical_type2(std::vector<double> p, std::vector<double> q, double eps) {
  std::vector<std::size_t> order(p.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return p[a] * q[b] > p[b] * q[a];
  });
  double need = 1.0 - eps, type2 = 0.0;
  for (auto i : order) {
    if (need <= 0.0)
      break;
    if (p[i] <= 0.0)
      continue;
    const double take = std::min(1.0, need / p[i]);
    type2 += take * q[i];
    need -= take * p[i];
  }
  return type2;
}

inline Matrix diag(const std::vector<double> &v) {
  Matrix m = Matrix::Zero(Eigen::Index(v.size()), Eigen::Index(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i)
    m(Eigen::Index(i), Eigen::Index(i)) = v[i];
  return m;
}

inline Matrix projector(Eigen::Index d, Eigen::Index i) {
  Matrix m = Matrix::Zero(d, d);
  m(i, i) = 1.0;
  return m;
}

inline Matrix pauli(char which) {
  Matrix m(2, 2);
  const Complex i(0.0, 1.0);
  switch (which) {
  case 'X':
    m << 0, 1, 1, 0;
    break;
  case 'Y':
    m << 0, -i, i, 0;
    break;
  case 'Z':
    m << 1, 0, 0, -1;
    break;
  default:
    m = Matrix::Identity(2, 2);
  }
  return m;
}

} // namespace rebound::testutil
