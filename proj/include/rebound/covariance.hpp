#pragma once

// Group representations, the covariance condition G(U rho U^dag) =
// V G(rho) V^dag, the unitary one-design test, and jointly covariant
// collections {G o U^g}.

#include <optional>
#include <vector>

#include "rebound/channels.hpp"

namespace rebound {

using MultiplicationTable = std::vector<std::vector<std::size_t>>;

/// Images U(g) on the channel input and V(g) on the channel output of a
/// finite group. Phases are irrelevant: every check conjugates by U(g).
class GroupRepresentation {
public:
  /// Throws InvalidRepresentation if a matrix is not unitary within
  /// tol::unitary, sizes disagree or no element maps to the identity pair.
  GroupRepresentation(std::vector<Matrix> in_unitaries, std::vector<Matrix> out_unitaries,
                      std::optional<MultiplicationTable> table = std::nullopt);

  /// Representation with V(g) = U(g).
  static GroupRepresentation symmetric(std::vector<Matrix> unitaries,
                                       std::optional<MultiplicationTable> table = std::nullopt);

  std::size_t size() const { return in_.size(); }
  Eigen::Index in_dim() const { return in_.front().rows(); }
  Eigen::Index out_dim() const { return out_.front().rows(); }
  const Matrix &in(std::size_t g) const { return in_[g]; }
  const Matrix &out(std::size_t g) const { return out_[g]; }
  const std::vector<Matrix> &in_unitaries() const { return in_; }
  const std::vector<Matrix> &out_unitaries() const { return out_; }
  const std::optional<MultiplicationTable> &table() const { return table_; }
  std::size_t identity_index() const { return identity_; }

private:
  std::vector<Matrix> in_;
  std::vector<Matrix> out_;
  std::optional<MultiplicationTable> table_;
  std::size_t identity_ = 0;
};

/// Qubit Pauli group {I, X, Y, Z} acting identically on input and output.
GroupRepresentation pauli_group();
/// The d^2 Weyl operators X^a Z^b on input and output.
GroupRepresentation heisenberg_weyl_group(Eigen::Index d);

struct CovarianceReport {
  std::vector<double> per_element; ///< indexed by group element
  double max_deviation = 0.0;
  double tolerance = tol::covariance;
  bool pass = false;
};

/// Max over group elements and hermitian_basis_states of
/// || G(U rho U^dag) - V G(rho) V^dag ||_1.
CovarianceReport is_covariant(const QuantumChannel &ch, const GroupRepresentation &rep);

/// Max over hermitian_basis_states of || twirl(rho) - I/d ||_1.
CovarianceReport is_one_design(const GroupRepresentation &rep);

/// Entrywise max distance between the Choi matrix of the input twirl and
/// that of the completely depolarizing channel.
double twirl_choi_deviation(const GroupRepresentation &rep);

/// Labels "g0", "g1", ... in representation order.
std::vector<std::string> group_labels(const GroupRepresentation &rep);

/// {G o U^g}_g. Throws NotOneDesign or NotCovariant.
ChannelCollection build_jointly_covariant(const QuantumChannel &base,
                                          const GroupRepresentation &rep);

/// Max over (g, h) of the trace-norm distance (over basis inputs) between
/// G o U^g o U^h and G o U^{g h}. Requires a multiplication table.
double composition_deviation(const QuantumChannel &base, const GroupRepresentation &rep);

struct TeleportationSimulation {
  EnvParametrization env;
  SeizureData seizure;
};

/// Teleportation-based simulation of a jointly covariant collection: the
/// environment states are the members' Choi states on E = R (x) B, the
/// interaction measures (B', R) in the group-twirled Bell basis and undoes
/// V(g) on B. The seizure probe is Phi_RB' with the identity as seizer.
/// Throws NotOneDesign, or NotCovariant if some member is not covariant.
TeleportationSimulation teleportation_simulation(const ChannelCollection &coll,
                                                 const GroupRepresentation &rep);

} // namespace rebound
