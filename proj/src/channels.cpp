#include "rebound/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace rebound {

double cptp_deviation(const std::vector<Matrix> &kraus) {
  if (kraus.empty())
    return std::numeric_limits<double>::infinity();
  const Eigen::Index d = kraus.front().cols();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto &k : kraus)
    sum += k.adjoint() * k;
  sum -= Matrix::Identity(d, d);
  return hermitian_eigenvalues(sum).cwiseAbs().maxCoeff();
}

QuantumChannel::QuantumChannel(Register in, Register out, std::vector<Matrix> kraus)
    : in_(std::move(in)), out_(std::move(out)), kraus_(std::move(kraus)),
      choi_(std::make_shared<ChoiCache>()) {
  if (in_.dim < 1 || out_.dim < 1)
    throw InvalidChannel("register dimensions must be positive");
  if (kraus_.empty())
    throw InvalidChannel("empty Kraus list");
  for (const auto &k : kraus_) {
    if (k.rows() != out_.dim || k.cols() != in_.dim)
      throw InvalidChannel("Kraus operator is " + std::to_string(k.rows()) + "x" +
                           std::to_string(k.cols()) + ", expected " +
                           std::to_string(out_.dim) + "x" + std::to_string(in_.dim));
    if (!k.allFinite())
      throw InvalidChannel("non-finite Kraus entry");
  }
  const double dev = cptp_deviation(kraus_);
  if (!(dev <= tol::cptp))
    throw InvalidChannel("not trace preserving (deviation " + std::to_string(dev) + ")");
}

QuantumChannel QuantumChannel::identity(const Register &in, std::string out_name) {
  return QuantumChannel(in, {std::move(out_name), in.dim}, {Matrix::Identity(in.dim, in.dim)});
}

QuantumChannel QuantumChannel::unitary(const Register &in, std::string out_name, const Matrix &u) {
  return QuantumChannel(in, {std::move(out_name), u.rows()}, {u});
}

Matrix QuantumChannel::apply(const Matrix &x) const {
  if (x.rows() != in_.dim || x.cols() != in_.dim)
    throw DimensionMismatch("channel input must be " + std::to_string(in_.dim) + "-dimensional");
  Matrix out = Matrix::Zero(out_.dim, out_.dim);
  for (const auto &k : kraus_)
    out.noalias() += k * x * k.adjoint();
  return out;
}

Matrix QuantumChannel::apply_adjoint(const Matrix &y) const {
  if (y.rows() != out_.dim || y.cols() != out_.dim)
    throw DimensionMismatch("adjoint channel input must be " + std::to_string(out_.dim) +
                            "-dimensional");
  Matrix out = Matrix::Zero(in_.dim, in_.dim);
  for (const auto &k : kraus_)
    out.noalias() += k.adjoint() * y * k;
  return out;
}

const Matrix &QuantumChannel::choi_matrix() const {
  std::call_once(choi_->once, [this] {
    // (I (x) K)|Gamma> stacks the columns of K.
    const Eigen::Index d_in = in_.dim, d_out = out_.dim;
    Matrix c = Matrix::Zero(d_in * d_out, d_in * d_out);
    Vector v(d_in * d_out);
    for (const auto &k : kraus_) {
      for (Eigen::Index i = 0; i < d_in; ++i)
        v.segment(i * d_out, d_out) = k.col(i);
      c.noalias() += v * v.adjoint();
    }
    choi_->value = c / double(d_in);
  });
  return choi_->value;
}

QuantumChannel QuantumChannel::renamed(std::string in_name, std::string out_name) const {
  return QuantumChannel({std::move(in_name), in_.dim}, {std::move(out_name), out_.dim}, kraus_);
}

Matrix apply_on_factor(const QuantumChannel &ch, const Matrix &x, const Dims &dims,
                       std::size_t index) {
  if (index >= dims.size() || dims[index] != ch.in_dim())
    throw DimensionMismatch("channel does not fit the target factor");
  if (x.rows() != product(dims))
    throw DimensionMismatch("operator does not match the factor dimensions");
  Dims out_dims = dims;
  out_dims[index] = ch.out_dim();
  const Eigen::Index n = product(out_dims);
  Matrix out = Matrix::Zero(n, n);
  for (const auto &k : ch.kraus()) {
    const Matrix big = embed_operator(k, dims, index);
    out.noalias() += big * x * big.adjoint();
  }
  return out;
}

Matrix apply_adjoint_on_factor(const QuantumChannel &ch, const Matrix &y, const Dims &out_dims,
                               std::size_t index) {
  if (index >= out_dims.size() || out_dims[index] != ch.out_dim())
    throw DimensionMismatch("adjoint channel does not fit the target factor");
  if (y.rows() != product(out_dims))
    throw DimensionMismatch("operator does not match the factor dimensions");
  Dims in_dims = out_dims;
  in_dims[index] = ch.in_dim();
  const Eigen::Index n = product(in_dims);
  Matrix out = Matrix::Zero(n, n);
  for (const auto &k : ch.kraus()) {
    const Matrix big = embed_operator(k, out_dims, index);
    out.noalias() += big.adjoint() * y * big;
  }
  return out;
}

DensityOperator apply(const QuantumChannel &ch, const DensityOperator &rho,
                      const std::vector<std::string> &on) {
  if (on.empty())
    throw UnknownRegister("no target register given");
  std::vector<std::size_t> targets;
  Eigen::Index target_dim = 1;
  for (const auto &name : on) {
    targets.push_back(rho.index_of(name));
    target_dim *= rho.registers()[targets.back()].dim;
  }
  {
    auto sorted = targets;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw RegisterClash("target register listed twice");
  }
  if (target_dim != ch.in_dim())
    throw DimensionMismatch("target registers have dimension " + std::to_string(target_dim) +
                            ", channel expects " + std::to_string(ch.in_dim()));

  const auto &regs = rho.registers();
  std::vector<std::size_t> rest;
  for (std::size_t i = 0; i < regs.size(); ++i)
    if (std::find(targets.begin(), targets.end(), i) == targets.end())
      rest.push_back(i);
  const std::size_t first = *std::min_element(targets.begin(), targets.end());
  const auto split = static_cast<std::size_t>(
      std::count_if(rest.begin(), rest.end(), [&](std::size_t i) { return i < first; }));

  for (std::size_t i : rest)
    if (regs[i].name == ch.out_reg().name)
      throw RegisterClash("output register '" + ch.out_reg().name + "' already present");

  // Bring the targets together, then treat them as one factor.
  std::vector<std::size_t> perm(rest.begin(), rest.begin() + static_cast<long>(split));
  perm.insert(perm.end(), targets.begin(), targets.end());
  perm.insert(perm.end(), rest.begin() + static_cast<long>(split), rest.end());
  const Matrix arranged = permute_subsystems(rho.matrix(), rho.dims(), perm);

  Dims grouped;
  Registers out_regs;
  for (std::size_t k = 0; k < split; ++k) {
    grouped.push_back(regs[rest[k]].dim);
    out_regs.push_back(regs[rest[k]]);
  }
  grouped.push_back(target_dim);
  out_regs.push_back(ch.out_reg());
  for (std::size_t k = split; k < rest.size(); ++k) {
    grouped.push_back(regs[rest[k]].dim);
    out_regs.push_back(regs[rest[k]]);
  }
  Matrix out = apply_on_factor(ch, arranged, grouped, split);
  return DensityOperator(std::move(out_regs), hermitian_part(out));
}

DensityOperator apply(const QuantumChannel &ch, const DensityOperator &rho, const std::string &on) {
  return apply(ch, rho, std::vector<std::string>{on});
}

DensityOperator choi(const QuantumChannel &ch) {
  std::string r = "R";
  if (ch.out_reg().name == r)
    r = "R_ref";
  return DensityOperator({{r, ch.in_dim()}, ch.out_reg()}, hermitian_part(ch.choi_matrix()));
}

QuantumChannel compose(const QuantumChannel &a, const QuantumChannel &b) {
  if (a.in_dim() != b.out_dim())
    throw DimensionMismatch("cannot compose: dimensions differ");
  std::vector<Matrix> kraus;
  for (const auto &ka : a.kraus())
    for (const auto &kb : b.kraus())
      kraus.push_back(ka * kb);
  return QuantumChannel(b.in_reg(), a.out_reg(), std::move(kraus));
}

QuantumChannel convex_mixture(const QuantumChannel &a, const QuantumChannel &b, double weight) {
  if (a.in_dim() != b.in_dim() || a.out_dim() != b.out_dim())
    throw DimensionMismatch("cannot mix channels with different dimensions");
  if (!(weight >= 0.0 && weight <= 1.0))
    throw InvalidChannel("mixture weight outside [0, 1]");
  std::vector<Matrix> kraus;
  for (const auto &k : a.kraus())
    kraus.push_back(std::sqrt(weight) * k);
  for (const auto &k : b.kraus())
    kraus.push_back(std::sqrt(1.0 - weight) * k);
  return QuantumChannel(a.in_reg(), a.out_reg(), std::move(kraus));
}

std::vector<Matrix> weyl_operators(Eigen::Index d) {
  Matrix shift = Matrix::Zero(d, d);
  Matrix clock = Matrix::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    shift((j + 1) % d, j) = 1.0;
    clock(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * double(j) / double(d));
  }
  std::vector<Matrix> ops;
  Matrix xa = Matrix::Identity(d, d);
  for (Eigen::Index a = 0; a < d; ++a) {
    Matrix zb = Matrix::Identity(d, d);
    for (Eigen::Index b = 0; b < d; ++b) {
      ops.push_back(xa * zb);
      zb = zb * clock;
    }
    xa = xa * shift;
  }
  return ops;
}

QuantumChannel depolarizing(const Register &in, std::string out_name, double p) {
  if (!(p >= 0.0 && p <= 1.0))
    throw InvalidChannel("depolarizing parameter outside [0, 1]");
  const Eigen::Index d = in.dim;
  const double d2 = double(d * d);
  const auto ops = weyl_operators(d);
  std::vector<Matrix> kraus;
  kraus.push_back(std::sqrt(1.0 - p + p / d2) * ops[0]);
  for (std::size_t i = 1; i < ops.size(); ++i)
    if (p > 0.0)
      kraus.push_back(std::sqrt(p / d2) * ops[i]);
  return QuantumChannel(in, {std::move(out_name), d}, std::move(kraus));
}

QuantumChannel amplitude_damping(const Register &in, std::string out_name, double gamma) {
  if (in.dim != 2)
    throw InvalidChannel("amplitude damping is a qubit channel");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw InvalidChannel("damping parameter outside [0, 1]");
  Matrix k0 = Matrix::Zero(2, 2), k1 = Matrix::Zero(2, 2);
  k0(0, 0) = 1.0;
  k0(1, 1) = std::sqrt(1.0 - gamma);
  k1(0, 1) = std::sqrt(gamma);
  return QuantumChannel(in, {std::move(out_name), 2}, {k0, k1});
}

QuantumChannel replacer(const Register &in, const Register &out, const Matrix &state) {
  if (state.rows() != out.dim || state.cols() != out.dim)
    throw DimensionMismatch("replacement state does not match the output register");
  Eigen::SelfAdjointEigenSolver<Matrix> es(hermitian_part(state));
  std::vector<Matrix> kraus;
  for (Eigen::Index k = 0; k < out.dim; ++k) {
    const double lambda = es.eigenvalues()(k);
    if (lambda <= 0.0)
      continue;
    for (Eigen::Index i = 0; i < in.dim; ++i) {
      Matrix op = Matrix::Zero(out.dim, in.dim);
      op.col(i) = std::sqrt(lambda) * es.eigenvectors().col(k);
      kraus.push_back(std::move(op));
    }
  }
  return QuantumChannel(in, out, std::move(kraus));
}

std::vector<Matrix> hermitian_basis_states(Eigen::Index d) {
  std::vector<Matrix> states;
  for (Eigen::Index i = 0; i < d; ++i) {
    Matrix m = Matrix::Zero(d, d);
    m(i, i) = 1.0;
    states.push_back(std::move(m));
  }
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j) {
      for (Complex phase : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
        Vector v = Vector::Zero(d);
        v(i) = 1.0 / std::sqrt(2.0);
        v(j) = phase / std::sqrt(2.0);
        states.push_back(v * v.adjoint());
      }
    }
  return states;
}

ChannelCollection::ChannelCollection(std::vector<std::string> alphabet,
                                     std::vector<QuantumChannel> channels)
    : alphabet_(std::move(alphabet)), channels_(std::move(channels)) {
  if (alphabet_.size() != channels_.size())
    throw InvalidCollection("one label per channel required");
  if (channels_.size() < 2)
    throw InvalidCollection("a collection needs at least two channels");
  std::set<std::string> seen;
  for (const auto &label : alphabet_)
    if (!seen.insert(label).second)
      throw InvalidCollection("duplicate label '" + label + "'");
  for (const auto &ch : channels_)
    if (ch.in_dim() != channels_.front().in_dim() || ch.out_dim() != channels_.front().out_dim())
      throw InvalidCollection("channels have different dimensions");
}

std::size_t ChannelCollection::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < alphabet_.size(); ++i)
    if (alphabet_[i] == label)
      return i;
  throw CodebookMismatch("label '" + std::string(label) + "' not in the collection");
}

EnvParametrization::EnvParametrization(Register env, QuantumChannel interaction,
                                       std::vector<std::string> labels,
                                       std::vector<Matrix> env_states)
    : env_(std::move(env)), interaction_(std::move(interaction)), labels_(std::move(labels)),
      states_(std::move(env_states)) {
  if (labels_.size() != states_.size() || labels_.empty())
    throw DimensionMismatch("need one environment state per label");
  if (env_.dim < 1 || interaction_.in_dim() % env_.dim != 0)
    throw DimensionMismatch("interaction input is not B' (x) E");
  std::set<std::string> seen;
  for (const auto &label : labels_)
    if (!seen.insert(label).second)
      throw DimensionMismatch("duplicate label '" + label + "'");
  for (auto &s : states_) {
    if (s.rows() != env_.dim || s.cols() != env_.dim)
      throw DimensionMismatch("environment state does not match the environment register");
    const auto dev = state_deviation(s);
    if (!dev.ok())
      throw InvalidState("environment state is not a density operator");
    s = hermitian_part(s);
  }
}

std::size_t EnvParametrization::index_of(std::string_view label) const {
  for (std::size_t i = 0; i < labels_.size(); ++i)
    if (labels_[i] == label)
      return i;
  throw DimensionMismatch("label '" + std::string(label) + "' has no environment state");
}

Matrix EnvParametrization::simulate(std::string_view label, const Matrix &rho) const {
  return interaction_.apply(kron(rho, state(label)));
}

SimulationReport verify_env_parametrization(const ChannelCollection &coll,
                                            const EnvParametrization &env) {
  if (coll.in_reg().dim != env.in_dim() || coll.out_reg().dim != env.out_dim())
    throw DimensionMismatch("collection and interaction channel dimensions differ");
  const auto inputs = hermitian_basis_states(coll.in_reg().dim);
  SimulationReport report;
  for (std::size_t x = 0; x < coll.size(); ++x) {
    const auto &label = coll.alphabet()[x];
    double worst = 0.0;
    for (const auto &rho : inputs)
      worst = std::max(worst,
                       trace_distance(coll.channels()[x].apply(rho), env.simulate(label, rho)));
    report.per_label.push_back({label, worst});
    report.max_deviation = std::max(report.max_deviation, worst);
  }
  report.pass = report.max_deviation <= report.tolerance;
  return report;
}

SimulationReport verify_seizable(const ChannelCollection &coll, const EnvParametrization &env,
                                 const SeizureData &seize) {
  const auto &probe = seize.probe;
  if (probe.registers().size() != 2 || probe.registers()[1].dim != coll.in_reg().dim)
    throw DimensionMismatch("probe must live on (R, B') with B' the channel input");
  const Eigen::Index d_ref = probe.registers()[0].dim;
  if (seize.seizer.in_dim() != d_ref * coll.out_reg().dim ||
      seize.seizer.out_dim() != env.env_reg().dim)
    throw DimensionMismatch("seizer must map R (x) B to E");
  const Dims probe_dims{d_ref, coll.in_reg().dim};

  SimulationReport report;
  for (std::size_t x = 0; x < coll.size(); ++x) {
    const auto &label = coll.alphabet()[x];
    const Matrix out = apply_on_factor(coll.channels()[x], probe.matrix(), probe_dims, 1);
    const double dev = trace_distance(seize.seizer.apply(out), env.state(label));
    report.per_label.push_back({label, dev});
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  report.pass = report.max_deviation <= report.tolerance;
  return report;
}

void check_distribution(const std::vector<double> &prior, std::size_t n) {
  if (prior.size() != n)
    throw BadDistribution("prior has " + std::to_string(prior.size()) + " entries, expected " +
                          std::to_string(n));
  double total = 0.0;
  for (double p : prior) {
    if (!std::isfinite(p) || p < 0.0)
      throw BadDistribution("prior entries must be finite and nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > tol::probability)
    throw BadDistribution("prior sums to " + std::to_string(total));
}

DensityOperator cq_environment_state(const EnvParametrization &env,
                                     const std::vector<double> &prior) {
  check_distribution(prior, env.size());
  const auto nx = static_cast<Eigen::Index>(env.size());
  const Eigen::Index de = env.env_reg().dim;
  Matrix m = Matrix::Zero(nx * de, nx * de);
  for (Eigen::Index x = 0; x < nx; ++x)
    m.block(x * de, x * de, de, de) = prior[static_cast<std::size_t>(x)] *
                                      env.env_states()[static_cast<std::size_t>(x)];
  std::string xname = env.env_reg().name == "X" ? "X_label" : "X";
  return DensityOperator({{xname, nx}, env.env_reg()}, std::move(m));
}

} // namespace rebound
