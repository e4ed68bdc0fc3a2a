#include "rebound/covariance.hpp"

#include <cmath>

namespace rebound {

GroupRepresentation::GroupRepresentation(std::vector<Matrix> in_unitaries,
                                         std::vector<Matrix> out_unitaries,
                                         std::optional<MultiplicationTable> table)
    : in_(std::move(in_unitaries)), out_(std::move(out_unitaries)), table_(std::move(table)) {
  if (in_.empty() || in_.size() != out_.size())
    throw InvalidRepresentation("need the same non-zero number of input and output unitaries");
  for (std::size_t g = 0; g < in_.size(); ++g) {
    if (in_[g].rows() != in_.front().rows() || out_[g].rows() != out_.front().rows())
      throw InvalidRepresentation("unitaries have inconsistent dimensions");
    if (!(unitary_deviation(in_[g]) <= tol::unitary) ||
        !(unitary_deviation(out_[g]) <= tol::unitary))
      throw InvalidRepresentation("element " + std::to_string(g) + " is not unitary");
  }
  const Matrix id_in = Matrix::Identity(in_dim(), in_dim());
  const Matrix id_out = Matrix::Identity(out_dim(), out_dim());
  bool found = false;
  for (std::size_t g = 0; g < in_.size() && !found; ++g) {
    if ((in_[g] - id_in).cwiseAbs().maxCoeff() <= tol::unitary &&
        (out_[g] - id_out).cwiseAbs().maxCoeff() <= tol::unitary) {
      identity_ = g;
      found = true;
    }
  }
  if (!found)
    throw InvalidRepresentation("no element is represented by the identity");
  if (table_) {
    if (table_->size() != in_.size())
      throw InvalidRepresentation("multiplication table has the wrong size");
    for (const auto &row : *table_) {
      if (row.size() != in_.size())
        throw InvalidRepresentation("multiplication table has the wrong size");
      for (auto k : row)
        if (k >= in_.size())
          throw InvalidRepresentation("multiplication table entry out of range");
    }
  }
}

GroupRepresentation GroupRepresentation::symmetric(std::vector<Matrix> unitaries,
                                                   std::optional<MultiplicationTable> table) {
  auto copy = unitaries;
  return GroupRepresentation(std::move(unitaries), std::move(copy), std::move(table));
}

GroupRepresentation pauli_group() {
  const Complex i(0.0, 1.0);
  Matrix id = Matrix::Identity(2, 2), x(2, 2), y(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  y << 0, -i, i, 0;
  z << 1, 0, 0, -1;
  // Projective multiplication table (phases dropped): XY ~ Z etc.
  MultiplicationTable table{{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  return GroupRepresentation::symmetric({id, x, y, z}, table);
}

GroupRepresentation heisenberg_weyl_group(Eigen::Index d) {
  // X^a Z^b X^c Z^e ~ X^{a+c} Z^{b+e} up to phase.
  const auto n = static_cast<std::size_t>(d * d);
  MultiplicationTable table(n, std::vector<std::size_t>(n));
  for (std::size_t g = 0; g < n; ++g)
    for (std::size_t h = 0; h < n; ++h) {
      const auto du = static_cast<std::size_t>(d);
      const std::size_t a = (g / du + h / du) % du, b = (g % du + h % du) % du;
      table[g][h] = a * du + b;
    }
  return GroupRepresentation::symmetric(weyl_operators(d), table);
}

CovarianceReport is_covariant(const QuantumChannel &ch, const GroupRepresentation &rep) {
  if (ch.in_dim() != rep.in_dim() || ch.out_dim() != rep.out_dim())
    throw DimensionMismatch("representation does not match the channel dimensions");
  const auto inputs = hermitian_basis_states(ch.in_dim());
  CovarianceReport report;
  for (std::size_t g = 0; g < rep.size(); ++g) {
    const Matrix &u = rep.in(g);
    const Matrix &v = rep.out(g);
    double worst = 0.0;
    for (const auto &rho : inputs) {
      const Matrix lhs = ch.apply(u * rho * u.adjoint());
      const Matrix rhs = v * ch.apply(rho) * v.adjoint();
      worst = std::max(worst, trace_norm(lhs - rhs));
    }
    report.per_element.push_back(worst);
    report.max_deviation = std::max(report.max_deviation, worst);
  }
  report.pass = report.max_deviation <= report.tolerance;
  return report;
}

CovarianceReport is_one_design(const GroupRepresentation &rep) {
  const Eigen::Index d = rep.in_dim();
  const Matrix mixed = Matrix::Identity(d, d) / double(d);
  CovarianceReport report;
  for (const auto &rho : hermitian_basis_states(d)) {
    Matrix twirled = Matrix::Zero(d, d);
    for (const auto &u : rep.in_unitaries())
      twirled += u * rho * u.adjoint();
    twirled /= double(rep.size());
    const double dev = trace_norm(twirled - mixed);
    report.per_element.push_back(dev);
    report.max_deviation = std::max(report.max_deviation, dev);
  }
  report.pass = report.max_deviation <= report.tolerance;
  return report;
}

double twirl_choi_deviation(const GroupRepresentation &rep) {
  const Eigen::Index d = rep.in_dim();
  std::vector<Matrix> kraus;
  for (const auto &u : rep.in_unitaries())
    kraus.push_back(u / std::sqrt(double(rep.size())));
  const QuantumChannel twirl({"in", d}, {"out", d}, std::move(kraus));
  const Matrix target = Matrix::Identity(d * d, d * d) / double(d * d);
  return (twirl.choi_matrix() - target).cwiseAbs().maxCoeff();
}

std::vector<std::string> group_labels(const GroupRepresentation &rep) {
  std::vector<std::string> labels;
  for (std::size_t g = 0; g < rep.size(); ++g)
    labels.push_back("g" + std::to_string(g));
  return labels;
}

ChannelCollection build_jointly_covariant(const QuantumChannel &base,
                                          const GroupRepresentation &rep) {
  const auto design = is_one_design(rep);
  if (!design.pass)
    throw NotOneDesign("input representation twirl deviates from I/d by " +
                       std::to_string(design.max_deviation));
  const auto cov = is_covariant(base, rep);
  if (!cov.pass)
    throw NotCovariant("base channel violates covariance by " +
                       std::to_string(cov.max_deviation));
  std::vector<QuantumChannel> members;
  for (const auto &u : rep.in_unitaries())
    members.push_back(compose(base, QuantumChannel::unitary(base.in_reg(), base.in_reg().name, u)));
  return ChannelCollection(group_labels(rep), std::move(members));
}

double composition_deviation(const QuantumChannel &base, const GroupRepresentation &rep) {
  if (!rep.table())
    throw InvalidRepresentation("composition check needs a multiplication table");
  const auto &table = *rep.table();
  const auto inputs = hermitian_basis_states(base.in_dim());
  double worst = 0.0;
  for (std::size_t g = 0; g < rep.size(); ++g)
    for (std::size_t h = 0; h < rep.size(); ++h) {
      const Matrix &ug = rep.in(g), &uh = rep.in(h), &ugh = rep.in(table[g][h]);
      for (const auto &rho : inputs) {
        const Matrix lhs = base.apply(ug * uh * rho * uh.adjoint() * ug.adjoint());
        const Matrix rhs = base.apply(ugh * rho * ugh.adjoint());
        worst = std::max(worst, trace_norm(lhs - rhs));
      }
    }
  return worst;
}

TeleportationSimulation teleportation_simulation(const ChannelCollection &coll,
                                                 const GroupRepresentation &rep) {
  const Eigen::Index d = coll.in_reg().dim, d_out = coll.out_reg().dim;
  if (rep.in_dim() != d || rep.out_dim() != d_out)
    throw DimensionMismatch("representation does not match the collection dimensions");
  const auto design = is_one_design(rep);
  if (!design.pass)
    throw NotOneDesign("input representation twirl deviates from I/d by " +
                       std::to_string(design.max_deviation));
  for (std::size_t x = 0; x < coll.size(); ++x) {
    const auto cov = is_covariant(coll.channels()[x], rep);
    if (!cov.pass)
      throw NotCovariant("member '" + coll.alphabet()[x] + "' violates covariance by " +
                         std::to_string(cov.max_deviation));
  }

  // Input ordering B' (a) then E = R (r) (x) B (b).
  const Eigen::Index d_env = d * d_out;
  const double scale = std::sqrt(double(d) / double(rep.size()));
  std::vector<Matrix> kraus;
  for (std::size_t g = 0; g < rep.size(); ++g) {
    const Matrix &u = rep.in(g);
    const Matrix v_dag = rep.out(g).adjoint();
    Matrix k = Matrix::Zero(d_out, d * d_env);
    for (Eigen::Index a = 0; a < d; ++a)
      for (Eigen::Index r = 0; r < d; ++r)
        for (Eigen::Index b = 0; b < d_out; ++b)
          k.col(a * d_env + r * d_out + b) = scale * u(r, a) * v_dag.col(b);
    kraus.push_back(std::move(k));
  }
  const Register env_reg{"E", d_env};
  QuantumChannel interaction({coll.in_reg().name + "E", d * d_env}, coll.out_reg(),
                             std::move(kraus));

  std::vector<Matrix> states;
  for (const auto &ch : coll.channels())
    states.push_back(hermitian_part(ch.choi_matrix()));
  EnvParametrization env(env_reg, std::move(interaction), coll.alphabet(), std::move(states));

  const Register ref{"R", d};
  const Register in{"B'", d};
  SeizureData seizure{maximally_entangled(ref, in),
                      QuantumChannel::identity({"RB", d * d_out}, "E")};
  return {std::move(env), std::move(seizure)};
}

} // namespace rebound
