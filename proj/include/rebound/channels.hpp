#pragma once

// CPTP maps in Kraus form, labelled channel collections, and the
// environment-parametrized / environment-seizable packaging of a collection.

#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "rebound/qcore.hpp"

namespace rebound {

/// Spectral norm of sum_k K_k^dagger K_k - I.
double cptp_deviation(const std::vector<Matrix> &kraus);

/// A completely positive trace-preserving map in Kraus form. Each Kraus
/// operator is out_dim x in_dim. The Choi matrix is derived lazily and cached.
class QuantumChannel {
public:
  /// Throws InvalidChannel on shape errors, non-finite entries or when the
  /// Kraus operators are not trace preserving within tol::cptp.
  QuantumChannel(Register in, Register out, std::vector<Matrix> kraus);

  static QuantumChannel identity(const Register &in, std::string out_name);
  static QuantumChannel unitary(const Register &in, std::string out_name, const Matrix &u);

  const Register &in_reg() const { return in_; }
  const Register &out_reg() const { return out_; }
  Eigen::Index in_dim() const { return in_.dim; }
  Eigen::Index out_dim() const { return out_.dim; }
  const std::vector<Matrix> &kraus() const { return kraus_; }

  /// Raw Schroedinger-picture action on an in_dim x in_dim operator.
  Matrix apply(const Matrix &x) const;
  /// Heisenberg-picture (adjoint) action on an out_dim x out_dim operator.
  Matrix apply_adjoint(const Matrix &y) const;

  /// (id_R (x) N)(Phi_RB') with R first; dimension in_dim * out_dim.
  const Matrix &choi_matrix() const;

  QuantumChannel renamed(std::string in_name, std::string out_name) const;

private:
  struct ChoiCache {
    std::once_flag once;
    Matrix value;
  };

  Register in_;
  Register out_;
  std::vector<Matrix> kraus_;
  std::shared_ptr<ChoiCache> choi_;
};

/// Apply ch to the named registers of rho (identity elsewhere). The target
/// registers are consumed in the listed order and replaced by ch.out_reg(),
/// which takes the position of the first target.
DensityOperator apply(const QuantumChannel &ch, const DensityOperator &rho,
                      const std::vector<std::string> &on);
DensityOperator apply(const QuantumChannel &ch, const DensityOperator &rho, const std::string &on);

/// Raw-matrix variant: ch acts on factor `index` of a state with factor
/// dimensions `dims`.
Matrix apply_on_factor(const QuantumChannel &ch, const Matrix &x, const Dims &dims,
                       std::size_t index);
Matrix apply_adjoint_on_factor(const QuantumChannel &ch, const Matrix &y, const Dims &out_dims,
                               std::size_t index);

/// Choi state with registers named ("R", in_reg().name).
DensityOperator choi(const QuantumChannel &ch);

/// a after b.
QuantumChannel compose(const QuantumChannel &a, const QuantumChannel &b);
/// weight * a + (1 - weight) * b.
QuantumChannel convex_mixture(const QuantumChannel &a, const QuantumChannel &b, double weight);

// Standard channels.
std::vector<Matrix> weyl_operators(Eigen::Index d); ///< X^a Z^b, a-major order
QuantumChannel depolarizing(const Register &in, std::string out_name, double p);
QuantumChannel amplitude_damping(const Register &in, std::string out_name, double gamma);
/// Discards the input and prepares `state`.
QuantumChannel replacer(const Register &in, const Register &out, const Matrix &state);

/// The d^2 input states |i><i|, |i+j><i+j|/2 and |i+ij><i+ij|/2 spanning the
/// Hermitian operators on C^d.
std::vector<Matrix> hermitian_basis_states(Eigen::Index d);

/// Label-indexed family of channels with common input/output dimensions.
class ChannelCollection {
public:
  /// Throws InvalidCollection unless there are at least two channels, labels
  /// are unique and all dimensions agree.
  ChannelCollection(std::vector<std::string> alphabet, std::vector<QuantumChannel> channels);

  const std::vector<std::string> &alphabet() const { return alphabet_; }
  const std::vector<QuantumChannel> &channels() const { return channels_; }
  std::size_t size() const { return channels_.size(); }
  const Register &in_reg() const { return channels_.front().in_reg(); }
  const Register &out_reg() const { return channels_.front().out_reg(); }

  std::size_t index_of(std::string_view label) const; ///< throws CodebookMismatch
  const QuantumChannel &at(std::string_view label) const { return channels_[index_of(label)]; }

private:
  std::vector<std::string> alphabet_;
  std::vector<QuantumChannel> channels_;
};

/// Interaction channel F: B' (x) E -> B and labelled environment states
/// theta^x on E, so that E^x(rho) = F(rho (x) theta^x).
class EnvParametrization {
public:
  EnvParametrization(Register env, QuantumChannel interaction, std::vector<std::string> labels,
                     std::vector<Matrix> env_states);

  const Register &env_reg() const { return env_; }
  const QuantumChannel &interaction() const { return interaction_; }
  const std::vector<std::string> &labels() const { return labels_; }
  const std::vector<Matrix> &env_states() const { return states_; }
  std::size_t size() const { return labels_.size(); }
  Eigen::Index in_dim() const { return interaction_.in_dim() / env_.dim; }
  Eigen::Index out_dim() const { return interaction_.out_dim(); }

  std::size_t index_of(std::string_view label) const;
  const Matrix &state(std::string_view label) const { return states_[index_of(label)]; }

  /// F(rho (x) theta^x) for a raw input operator on B'.
  Matrix simulate(std::string_view label, const Matrix &rho) const;

private:
  Register env_;
  QuantumChannel interaction_;
  std::vector<std::string> labels_;
  std::vector<Matrix> states_;
};

/// Probe sigma on (R, B') and seizing channel S: R (x) B -> E.
struct SeizureData {
  DensityOperator probe;
  QuantumChannel seizer;
};

struct LabelDeviation {
  std::string label;
  double deviation = 0.0;
};

struct SimulationReport {
  std::vector<LabelDeviation> per_label;
  double max_deviation = 0.0;
  double tolerance = tol::simulation;
  bool pass = false;
};

/// Max trace-norm deviation between E^x and rho -> F(rho (x) theta^x) over
/// hermitian_basis_states, per label.
SimulationReport verify_env_parametrization(const ChannelCollection &coll,
                                            const EnvParametrization &env);

/// Per-label || S(E^x(sigma)) - theta^x ||_1.
SimulationReport verify_seizable(const ChannelCollection &coll, const EnvParametrization &env,
                                 const SeizureData &seize);

/// Validates a prior over n labels; throws BadDistribution.
void check_distribution(const std::vector<double> &prior, std::size_t n);

/// sum_x p(x) |x><x| (x) theta^x on registers ("X", env).
DensityOperator cq_environment_state(const EnvParametrization &env,
                                     const std::vector<double> &prior);

} // namespace rebound
