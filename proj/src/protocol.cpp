#include "rebound/protocol.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "rebound/parallel.hpp"

namespace rebound {

Codebook::Codebook(std::vector<std::pair<std::string, Word>> words) : words_(std::move(words)) {
  if (words_.empty())
    throw CodebookMismatch("codebook has no messages");
  std::set<std::string> seen;
  for (const auto &[m, w] : words_) {
    if (!seen.insert(m).second)
      throw CodebookMismatch("duplicate message '" + m + "'");
    if (w.empty() || w.size() != words_.front().second.size())
      throw CodebookMismatch("word for '" + m + "' has length " + std::to_string(w.size()) +
                             ", expected " + std::to_string(words_.front().second.size()));
  }
}

std::vector<std::vector<std::size_t>>
Codebook::resolve(const std::vector<std::string> &alphabet) const {
  std::vector<std::vector<std::size_t>> out;
  for (const auto &[m, w] : words_) {
    std::vector<std::size_t> idx;
    for (const auto &x : w) {
      const auto it = std::find(alphabet.begin(), alphabet.end(), x);
      if (it == alphabet.end())
        throw CodebookMismatch("message '" + m + "' uses unknown label '" + x + "'");
      idx.push_back(static_cast<std::size_t>(it - alphabet.begin()));
    }
    out.push_back(std::move(idx));
  }
  return out;
}

double povm_deviation(const std::vector<Matrix> &povm, Eigen::Index d) {
  if (povm.empty())
    return std::numeric_limits<double>::infinity();
  Matrix sum = Matrix::Zero(d, d);
  double worst = 0.0;
  for (const auto &e : povm) {
    if (e.rows() != d || e.cols() != d || !e.allFinite())
      return std::numeric_limits<double>::infinity();
    worst = std::max(worst, hermitian_deviation(e));
    worst = std::max(worst, -hermitian_eigenvalues(hermitian_part(e)).minCoeff());
    sum += e;
  }
  const Matrix diff = hermitian_part(sum) - Matrix::Identity(d, d);
  return std::max(worst, hermitian_eigenvalues(diff).cwiseAbs().maxCoeff());
}

ReboundProtocol::ReboundProtocol(DensityOperator initial, std::vector<QuantumChannel> adaptive,
                                 std::vector<Matrix> povm, Eigen::Index out_dim)
    : initial_(std::move(initial)), adaptive_(std::move(adaptive)), povm_(std::move(povm)),
      out_dim_(out_dim) {
  const auto &regs = initial_.registers();
  if (regs.size() > 2)
    throw InvalidProtocol("initial state must live on (R_1, B'_1) or B'_1 alone");
  in_dim_ = regs.back().dim;
  memory_.push_back(regs.size() == 2 ? regs.front().dim : 1);
  if (out_dim_ < 1)
    throw InvalidProtocol("output dimension must be positive");
  for (std::size_t i = 0; i < adaptive_.size(); ++i) {
    const auto &a = adaptive_[i];
    if (a.in_dim() != memory_.back() * out_dim_)
      throw InvalidProtocol("adaptive channel " + std::to_string(i + 1) + " expects input " +
                            std::to_string(a.in_dim()) + ", stage provides " +
                            std::to_string(memory_.back() * out_dim_));
    if (a.out_dim() % in_dim_ != 0)
      throw InvalidProtocol("adaptive channel " + std::to_string(i + 1) + " output " +
                            std::to_string(a.out_dim()) + " is not a multiple of dim B' = " +
                            std::to_string(in_dim_));
    memory_.push_back(a.out_dim() / in_dim_);
  }
  const Eigen::Index final_dim = memory_.back() * out_dim_;
  const double dev = povm_deviation(povm_, final_dim);
  if (!(dev <= tol::povm))
    throw InvalidProtocol("POVM on dimension " + std::to_string(final_dim) +
                          " deviates by " + std::to_string(dev));
}

namespace {

ProtocolResult make_result(const Codebook &code, std::vector<double> success, std::size_t n) {
  ProtocolResult r;
  for (std::size_t m = 0; m < code.size(); ++m)
    r.messages.push_back(code.message(m));
  for (auto &s : success)
    s = std::clamp(s, 0.0, 1.0);
  r.per_message_success = std::move(success);
  double total = 0.0;
  for (double s : r.per_message_success)
    total += s;
  r.avg_success = total / double(code.size());
  r.error = 1.0 - r.avg_success;
  r.rate = std::log2(double(code.size())) / double(n);
  r.zero_error = r.avg_success >= 1.0 - tol::zero_error;
  return r;
}

void check_fit(const ReboundProtocol &proto, const ChannelCollection &coll, const Codebook &code) {
  if (coll.in_reg().dim != proto.in_dim() || coll.out_reg().dim != proto.out_dim())
    throw DimensionMismatch("collection dimensions " + std::to_string(coll.in_reg().dim) + " -> " +
                            std::to_string(coll.out_reg().dim) + " do not fit the protocol");
  if (code.n() != proto.n())
    throw CodebookMismatch("codebook words have length " + std::to_string(code.n()) +
                           ", protocol uses " + std::to_string(proto.n()) + " channels");
  if (proto.povm().size() != code.size())
    throw CodebookMismatch("POVM has " + std::to_string(proto.povm().size()) +
                           " outcomes for " + std::to_string(code.size()) + " messages");
}

double overlap(const Matrix &a, const Matrix &b) { return (a * b).trace().real(); }

/// Unitary P with P x P^dagger = permute_subsystems(x, dims, perm).
Matrix permutation_unitary(const Dims &dims, const std::vector<std::size_t> &perm) {
  const std::size_t k = dims.size();
  const Eigen::Index total = product(dims);
  std::vector<Eigen::Index> in_stride(k, 1);
  for (std::size_t i = k; i-- > 1;)
    in_stride[i - 1] = in_stride[i] * dims[i];
  Dims out_dims(k);
  for (std::size_t i = 0; i < k; ++i)
    out_dims[i] = dims[perm[i]];
  Matrix p = Matrix::Zero(total, total);
  std::vector<Eigen::Index> digit(k, 0);
  for (Eigen::Index flat = 0; flat < total; ++flat) {
    Eigen::Index src = 0;
    for (std::size_t i = 0; i < k; ++i)
      src += digit[i] * in_stride[perm[i]];
    p(flat, src) = 1.0;
    for (std::size_t i = k; i-- > 0;) {
      if (++digit[i] < out_dims[i])
        break;
      digit[i] = 0;
    }
  }
  return p;
}

/// Splits a parallel-strategy state into (dim R, dim B'); n factors of B'.
Eigen::Index idler_dim(const DensityOperator &initial, std::size_t n) {
  const auto &regs = initial.registers();
  if (regs.size() != n && regs.size() != n + 1)
    throw DimensionMismatch("parallel probe needs n or n + 1 registers, got " +
                            std::to_string(regs.size()));
  const std::size_t first = regs.size() - n;
  for (std::size_t i = first; i < regs.size(); ++i)
    if (regs[i].dim != regs[first].dim)
      throw DimensionMismatch("parallel probe registers B'_i have different dimensions");
  return first == 1 ? regs.front().dim : 1;
}

/// Outputs of a parallel strategy for every word.
std::vector<Matrix> parallel_outputs(const Matrix &probe, Eigen::Index r, std::size_t n,
                                     const ChannelCollection &coll,
                                     const std::vector<std::vector<std::size_t>> &words) {
  std::vector<Matrix> out(words.size());
  parallel_for(words.size(), [&](std::size_t m) {
    Dims dims(n + 1, coll.in_reg().dim);
    dims[0] = r;
    Matrix state = probe;
    for (std::size_t i = 0; i < n; ++i) {
      state = apply_on_factor(coll.channels()[words[m][i]], state, dims, i + 1);
      dims[i + 1] = coll.out_reg().dim;
    }
    out[m] = hermitian_part(state);
  });
  return out;
}

} // namespace

std::vector<Matrix> output_states(const ReboundProtocol &proto, const ChannelCollection &coll,
                                  const Codebook &code) {
  check_fit(proto, coll, code);
  const auto words = code.resolve(coll.alphabet());
  const auto &mem = proto.memory_dims();
  std::vector<Matrix> out(code.size());
  parallel_for(code.size(), [&](std::size_t m) {
    Matrix state = proto.initial().matrix();
    for (std::size_t i = 0; i < proto.n(); ++i) {
      state = apply_on_factor(coll.channels()[words[m][i]], state, {mem[i], proto.in_dim()}, 1);
      if (i + 1 < proto.n())
        state = proto.adaptive()[i].apply(state);
    }
    out[m] = hermitian_part(state);
  });
  return out;
}

Matrix success_matrix(const ReboundProtocol &proto, const ChannelCollection &coll,
                      const Codebook &code) {
  const auto states = output_states(proto, coll, code);
  const auto &povm = proto.povm();
  Matrix p(states.size(), povm.size());
  for (std::size_t m = 0; m < states.size(); ++m)
    for (std::size_t k = 0; k < povm.size(); ++k)
      p(m, k) = overlap(povm[k], states[m]);
  return p;
}

ProtocolResult run_adaptive(const ReboundProtocol &proto, const ChannelCollection &coll,
                            const Codebook &code) {
  const auto states = output_states(proto, coll, code);
  std::vector<double> success(states.size());
  for (std::size_t m = 0; m < states.size(); ++m)
    success[m] = overlap(proto.povm()[m], states[m]);
  return make_result(code, std::move(success), proto.n());
}

ProtocolResult run_nonadaptive(const DensityOperator &initial, const ChannelCollection &coll,
                               const Codebook &code, const std::vector<Matrix> &povm) {
  const std::size_t n = code.n();
  const Eigen::Index r = idler_dim(initial, n);
  if (initial.registers().back().dim != coll.in_reg().dim)
    throw DimensionMismatch("probe registers do not match the channel input");
  if (povm.size() != code.size())
    throw CodebookMismatch("POVM has " + std::to_string(povm.size()) + " outcomes for " +
                           std::to_string(code.size()) + " messages");
  const Eigen::Index final_dim =
      r * static_cast<Eigen::Index>(std::pow(double(coll.out_reg().dim), double(n)));
  const double dev = povm_deviation(povm, final_dim);
  if (!(dev <= tol::povm))
    throw DimensionMismatch("POVM on dimension " + std::to_string(final_dim) + " deviates by " +
                            std::to_string(dev));
  const auto states =
      parallel_outputs(initial.matrix(), r, n, coll, code.resolve(coll.alphabet()));
  std::vector<double> success(states.size());
  for (std::size_t m = 0; m < states.size(); ++m)
    success[m] = overlap(povm[m], states[m]);
  return make_result(code, std::move(success), n);
}

ReboundProtocol embed_nonadaptive(const DensityOperator &initial, const std::vector<Matrix> &povm,
                                  std::size_t n, Eigen::Index out_dim) {
  const Eigen::Index r = idler_dim(initial, n);
  const Eigen::Index d_in = initial.registers().back().dim;

  // Memory after stage i holds (R, B'_{i+1..n}, B_1..B_{i-1}); B_i is the
  // channel output. Each adaptive step moves B'_{i+1} to the channel port.
  Dims dims(n + 1, d_in);
  dims[0] = r;
  std::vector<std::size_t> perm{0};
  for (std::size_t i = 2; i <= n; ++i)
    perm.push_back(i);
  perm.push_back(1);
  const Matrix start = permute_subsystems(initial.matrix(), dims, perm);
  const Eigen::Index r1 = initial.dim() / d_in;
  DensityOperator first({{"R1", r1}, {"B'1", d_in}}, hermitian_part(start));

  std::vector<QuantumChannel> adaptive;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Dims stage{r};
    for (std::size_t k = 0; k < n - i - 1; ++k)
      stage.push_back(d_in);
    for (std::size_t k = 0; k < i + 1; ++k)
      stage.push_back(out_dim);
    std::vector<std::size_t> move{0};
    for (std::size_t k = 2; k < stage.size(); ++k)
      move.push_back(k);
    move.push_back(1);
    const Matrix p = permutation_unitary(stage, move);
    const std::string tag = std::to_string(i + 1);
    adaptive.push_back(QuantumChannel::unitary({"R" + tag + "B" + tag, product(stage)},
                                               "R" + std::to_string(i + 2) + "B'" +
                                                   std::to_string(i + 2),
                                               p));
  }
  return ReboundProtocol(std::move(first), std::move(adaptive), povm, out_dim);
}

std::vector<Matrix> reduce_to_povm(const ReboundProtocol &proto, const ChannelCollection &coll,
                                   const EnvParametrization &env) {
  if (env.in_dim() != proto.in_dim() || env.out_dim() != proto.out_dim() ||
      coll.in_reg().dim != proto.in_dim() || coll.out_reg().dim != proto.out_dim())
    throw DimensionMismatch("environment parametrization does not fit the protocol");
  const auto param = verify_env_parametrization(coll, env);
  if (!param.pass)
    throw NotParametrized("environment parametrization deviates by " +
                          std::to_string(param.max_deviation));

  const auto &mem = proto.memory_dims();
  const Eigen::Index d_in = proto.in_dim(), d_out = proto.out_dim(), de = env.env_reg().dim;
  const std::size_t n = proto.n();
  const Matrix &rho = proto.initial().matrix();
  std::vector<Matrix> gamma(proto.povm().size());

  // Heisenberg picture: pull each POVM element back through the channel uses
  // (B_i <- B'_i E_i via F) and the adaptive channels, collecting E_n, E_{n-1},
  // ... as trailing factors, then contract with the initial state.
  parallel_for(gamma.size(), [&](std::size_t k) {
    Matrix x = proto.povm()[k];
    Eigen::Index tail = 1;
    for (std::size_t i = n; i-- > 0;) {
      x = apply_adjoint_on_factor(env.interaction(), x, {mem[i], d_out, tail}, 1);
      tail *= de;
      if (i > 0)
        x = apply_adjoint_on_factor(proto.adaptive()[i - 1], x, {mem[i] * d_in, tail}, 0);
    }
    const Eigen::Index front = mem[0] * d_in;
    Matrix g = Matrix::Zero(tail, tail);
    for (Eigen::Index a = 0; a < front; ++a)
      for (Eigen::Index b = 0; b < front; ++b)
        if (rho(a, b) != Complex(0.0))
          g += rho(a, b) * x.block(b * tail, a * tail, tail, tail);
    gamma[k] = hermitian_part(g);
  });
  return gamma;
}

Matrix reduced_success_matrix(const std::vector<Matrix> &gamma, const EnvParametrization &env,
                              const Codebook &code) {
  const auto words = code.resolve(env.labels());
  Matrix p(code.size(), gamma.size());
  for (std::size_t m = 0; m < code.size(); ++m) {
    Matrix theta = env.env_states()[words[m][0]];
    for (std::size_t i = 1; i < words[m].size(); ++i)
      theta = kron(theta, env.env_states()[words[m][i]]);
    if (!gamma.empty() && gamma.front().rows() != theta.rows())
      throw DimensionMismatch("environment POVM does not act on E^n");
    for (std::size_t k = 0; k < gamma.size(); ++k)
      p(m, k) = overlap(gamma[k], theta);
  }
  return p;
}

ReductionReport check_reduction(const ReboundProtocol &proto, const ChannelCollection &coll,
                                const EnvParametrization &env, const Codebook &code) {
  ReductionReport out;
  out.direct = success_matrix(proto, coll, code);
  const auto gamma = reduce_to_povm(proto, coll, env);
  out.reduced = reduced_success_matrix(gamma, env, code);
  out.max_deviation = (out.direct - out.reduced).cwiseAbs().maxCoeff();
  out.povm_deviation = povm_deviation(gamma, gamma.front().rows());
  return out;
}

ZeroErrorReport zero_error_evaluate(const ReboundProtocol &proto, const ChannelCollection &coll,
                                    const Codebook &code) {
  ZeroErrorReport out;
  const auto states = output_states(proto, coll, code);
  std::vector<double> success(states.size());
  for (std::size_t m = 0; m < states.size(); ++m)
    success[m] = overlap(proto.povm()[m], states[m]);
  out.result = make_result(code, std::move(success), proto.n());
  out.min_success = *std::min_element(out.result.per_message_success.begin(),
                                      out.result.per_message_success.end());
  out.povm_zero_error = out.min_success >= 1.0 - tol::zero_error;
  for (std::size_t a = 0; a < states.size(); ++a)
    for (std::size_t b = a + 1; b < states.size(); ++b)
      out.max_pairwise_fidelity = std::max(out.max_pairwise_fidelity, fidelity(states[a], states[b]));
  out.orthogonal_outputs = out.max_pairwise_fidelity <= tol::zero_error;
  return out;
}

double helstrom_success(const Matrix &rho0, const Matrix &rho1) {
  return 0.5 * (1.0 + 0.5 * trace_norm(rho0 - rho1));
}

double pretty_good_success(const std::vector<Matrix> &states) {
  const double m = double(states.size());
  Matrix avg = Matrix::Zero(states.front().rows(), states.front().cols());
  for (const auto &s : states)
    avg += s / m;
  const Matrix inv_sqrt = hermitian_function(hermitian_part(avg), [](double v) {
    return v > tol::eig_zero ? 1.0 / std::sqrt(v) : 0.0;
  });
  double total = 0.0;
  for (const auto &s : states)
    total += overlap(inv_sqrt * (s / m) * inv_sqrt, s) / m;
  return std::clamp(total, 0.0, 1.0);
}

namespace {

/// Pure state sqrt(l)|0>|u> + sqrt(1-l)|1>|u_perp> with u on the Bloch sphere.
Matrix schmidt_probe(double l, double theta, double phi) {
  const Complex e(std::cos(phi), std::sin(phi));
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Vector u(2), v(2);
  u << c, e * s;
  v << -std::conj(e) * s, c;
  Vector psi(4);
  psi << std::sqrt(l) * u, std::sqrt(1.0 - l) * v;
  return psi * psi.adjoint();
}

} // namespace

NonadaptiveSearch best_nonadaptive_success(const ChannelCollection &coll, const Codebook &code,
                                           const ProbeFamily &family, PovmMode mode,
                                           const std::vector<Matrix> &povm) {
  const std::size_t n = code.n();
  const std::size_t msgs = code.size();
  const auto words = code.resolve(coll.alphabet());
  const Eigen::Index d_in = coll.in_reg().dim;
  const auto din_n = static_cast<Eigen::Index>(std::pow(double(d_in), double(n)));
  if (mode == PovmMode::helstrom_pairwise && msgs != 2)
    throw UnsupportedMode("helstrom_pairwise needs exactly two messages, got " +
                          std::to_string(msgs));
  if (mode == PovmMode::supplied && povm.size() != msgs)
    throw UnsupportedMode("supplied POVM needs one element per message");

  auto score = [&](const Matrix &probe, Eigen::Index r) {
    const auto states = parallel_outputs(probe, r, n, coll, words);
    switch (mode) {
    case PovmMode::helstrom_pairwise:
      return helstrom_success(states[0], states[1]);
    case PovmMode::pretty_good:
      return pretty_good_success(states);
    case PovmMode::supplied: {
      if (povm.front().rows() != states.front().rows())
        throw DimensionMismatch("supplied POVM does not match the output dimension");
      double total = 0.0;
      for (std::size_t m = 0; m < msgs; ++m)
        total += overlap(povm[m], states[m]);
      return std::clamp(total / double(msgs), 0.0, 1.0);
    }
    }
    return 0.0;
  };

  NonadaptiveSearch out;
  out.lower_bound = mode == PovmMode::pretty_good;
  out.value = -1.0;
  auto consider = [&](const Matrix &probe, Eigen::Index r) {
    const double v = score(probe, r);
    if (v > out.value) {
      out.value = v;
      out.best_probe = probe;
    }
    return v;
  };

  switch (family.kind) {
  case ProbeKind::supplied:
    if (family.probes.empty())
      throw UnsupportedMode("supplied probe family is empty");
    for (const auto &p : family.probes) {
      if (p.registers().back().dim != d_in)
        throw DimensionMismatch("probe registers do not match the channel input");
      consider(p.matrix(), idler_dim(p, n));
    }
    break;
  case ProbeKind::random_pure: {
    Rng rng(family.seed);
    for (std::size_t k = 0; k < std::max<std::size_t>(family.samples, 1); ++k) {
      const Vector psi = random_pure_vector(din_n * din_n, rng);
      consider(psi * psi.adjoint(), din_n);
    }
    break;
  }
  case ProbeKind::schmidt_qubit: {
    if (din_n != 2)
      throw UnsupportedMode("schmidt_qubit probes need a single qubit input");
    const std::size_t g = std::max<std::size_t>(family.grid, 3);
    const double pi = std::numbers::pi;
    std::array<double, 3> best{0.5, 0.0, 0.0};
    double best_value = -1.0;
    for (std::size_t a = 0; a < g; ++a)
      for (std::size_t b = 0; b < g; ++b)
        for (std::size_t c = 0; c < g; ++c) {
          const std::array<double, 3> p{double(a) / double(g - 1), pi * double(b) / double(g - 1),
                                        2 * pi * double(c) / double(g)};
          const double v = consider(schmidt_probe(p[0], p[1], p[2]), 2);
          if (v > best_value) {
            best_value = v;
            best = p;
          }
        }
    // Compass search around the best grid point.
    std::array<double, 3> step{1.0 / double(g - 1), pi / double(g - 1), 2 * pi / double(g)};
    const std::array<double, 3> lo{0.0, 0.0, -1e9}, hi{1.0, pi, 1e9};
    while (std::max({step[0], step[1], step[2]}) > 1e-10) {
      bool moved = false;
      for (int k = 0; k < 3; ++k)
        for (double sign : {1.0, -1.0}) {
          auto p = best;
          p[k] = std::clamp(p[k] + sign * step[k], lo[k], hi[k]);
          const double v = consider(schmidt_probe(p[0], p[1], p[2]), 2);
          if (v > best_value + 1e-15) {
            best_value = v;
            best = p;
            moved = true;
          }
        }
      if (!moved)
        for (auto &s : step)
          s *= 0.5;
    }
    break;
  }
  }
  return out;
}

} // namespace rebound
