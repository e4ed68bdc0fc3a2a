#pragma once

// Rebound protocols: Bob prepares a state on R_1 B'_1, feeds B'_i through the
// i-th unknown channel, processes R_i B_i with a message-independent adaptive
// channel into R_{i+1} B'_{i+1}, and finally measures R_n B_n.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rebound/channels.hpp"
#include "rebound/random.hpp"

namespace rebound {

/// Messages in declaration order, each mapped to a word of n labels.
class Codebook {
public:
  using Word = std::vector<std::string>;

  /// Throws CodebookMismatch on empty codebooks, duplicate message ids or
  /// words of unequal or zero length.
  explicit Codebook(std::vector<std::pair<std::string, Word>> words);

  std::size_t size() const { return words_.size(); }
  std::size_t n() const { return words_.front().second.size(); }
  const std::string &message(std::size_t m) const { return words_[m].first; }
  const Word &word(std::size_t m) const { return words_[m].second; }
  const std::vector<std::pair<std::string, Word>> &words() const { return words_; }

  /// Label indices of every word into `alphabet`; throws CodebookMismatch.
  std::vector<std::vector<std::size_t>> resolve(const std::vector<std::string> &alphabet) const;

private:
  std::vector<std::pair<std::string, Word>> words_;
};

/// An n-use adaptive strategy. Memory dimensions r_i may change from stage to
/// stage; they are derived from the initial state and the adaptive channels:
///   initial state on (R_1, B'_1) with dims (r_1, d_in),
///   adaptive[i] : r_{i+1} d_out  ->  r_{i+2} d_in   (0-based i),
///   povm elements on r_n d_out.
class ReboundProtocol {
public:
  /// Throws InvalidProtocol when the dimension chain does not close or the
  /// POVM is not a POVM (elements PSD within tol::psd, sum I within tol::povm).
  ReboundProtocol(DensityOperator initial, std::vector<QuantumChannel> adaptive,
                  std::vector<Matrix> povm, Eigen::Index out_dim);

  std::size_t n() const { return adaptive_.size() + 1; }
  const DensityOperator &initial() const { return initial_; }
  const std::vector<QuantumChannel> &adaptive() const { return adaptive_; }
  const std::vector<Matrix> &povm() const { return povm_; }
  Eigen::Index in_dim() const { return in_dim_; }
  Eigen::Index out_dim() const { return out_dim_; }
  /// r_1 ... r_n.
  const std::vector<Eigen::Index> &memory_dims() const { return memory_; }

private:
  DensityOperator initial_;
  std::vector<QuantumChannel> adaptive_;
  std::vector<Matrix> povm_;
  Eigen::Index in_dim_ = 1;
  Eigen::Index out_dim_ = 1;
  std::vector<Eigen::Index> memory_;
};

/// Largest deviation of a list of operators from being a POVM on dimension d:
/// max(-min eigenvalue, hermiticity, spectral norm of sum - I).
double povm_deviation(const std::vector<Matrix> &povm, Eigen::Index d);

struct ProtocolResult {
  std::vector<std::string> messages;
  std::vector<double> per_message_success;
  double avg_success = 0.0;
  double error = 1.0;
  double rate = 0.0; ///< log2(M) / n
  bool zero_error = false;
};

/// rho^(m) on R_n B_n for every message.
std::vector<Matrix> output_states(const ReboundProtocol &proto, const ChannelCollection &coll,
                                  const Codebook &code);

ProtocolResult run_adaptive(const ReboundProtocol &proto, const ChannelCollection &coll,
                            const Codebook &code);

/// P(mhat | m) = Tr Lambda^(mhat) rho^(m); rows are sent messages.
Matrix success_matrix(const ReboundProtocol &proto, const ChannelCollection &coll,
                      const Codebook &code);

/// Parallel strategy: `initial` has registers (R, B'_1, ..., B'_n), or just
/// (B'_1, ..., B'_n) when there is no idler; `povm` acts on R B_1 ... B_n.
ProtocolResult run_nonadaptive(const DensityOperator &initial, const ChannelCollection &coll,
                               const Codebook &code, const std::vector<Matrix> &povm);

/// The same parallel strategy written as an adaptive protocol whose adaptive
/// channels only move registers around.
ReboundProtocol embed_nonadaptive(const DensityOperator &initial, const std::vector<Matrix> &povm,
                                  std::size_t n, Eigen::Index out_dim);

/// Effective POVM {Gamma^(mhat)} on E^n with
///   Tr Lambda^(mhat) rho^(m) = Tr Gamma^(mhat) (theta^{x_1(m)} (x) ... (x) theta^{x_n(m)}).
/// Throws NotParametrized unless env simulates coll.
std::vector<Matrix> reduce_to_povm(const ReboundProtocol &proto, const ChannelCollection &coll,
                                   const EnvParametrization &env);

/// P(mhat | m) evaluated through the environment POVM.
Matrix reduced_success_matrix(const std::vector<Matrix> &gamma, const EnvParametrization &env,
                              const Codebook &code);

struct ReductionReport {
  Matrix direct;
  Matrix reduced;
  double max_deviation = 0.0;
  double povm_deviation = 0.0; ///< of the environment POVM
};

ReductionReport check_reduction(const ReboundProtocol &proto, const ChannelCollection &coll,
                                const EnvParametrization &env, const Codebook &code);

struct ZeroErrorReport {
  ProtocolResult result;
  double min_success = 0.0;
  /// This POVM decodes every message with certainty (within tol::zero_error).
  bool povm_zero_error = false;
  /// max_{m != m'} F(rho^(m), rho^(m')); 0 for a single message.
  double max_pairwise_fidelity = 0.0;
  /// Output states pairwise orthogonal, so some POVM decodes without error.
  bool orthogonal_outputs = false;
};

ZeroErrorReport zero_error_evaluate(const ReboundProtocol &proto, const ChannelCollection &coll,
                                    const Codebook &code);

/// (1 + ||rho_0 - rho_1||_1 / 2) / 2.
double helstrom_success(const Matrix &rho0, const Matrix &rho1);
/// Average success of the pretty-good measurement for equiprobable states.
double pretty_good_success(const std::vector<Matrix> &states);

enum class PovmMode { helstrom_pairwise, pretty_good, supplied };
enum class ProbeKind { supplied, schmidt_qubit, random_pure };

struct ProbeFamily {
  ProbeKind kind = ProbeKind::random_pure;
  /// States on (R, B'_1..B'_n) or (B'_1..B'_n), for `supplied`.
  std::vector<DensityOperator> probes;
  /// Grid resolution per parameter for `schmidt_qubit` (Schmidt weight and the
  /// Bloch angles of the B' Schmidt basis), followed by a pattern search.
  std::size_t grid = 21;
  /// Number of random pure probes on R B'^n with dim R = d_in^n.
  std::size_t samples = 200;
  std::uint64_t seed = 0;
};

struct NonadaptiveSearch {
  double value = 0.0;
  bool lower_bound = false; ///< true for pretty_good with M > 2
  Matrix best_probe;
};

/// Best success over the probe family for parallel strategies.
/// helstrom_pairwise needs M = 2; supplied uses `povm` for every probe.
NonadaptiveSearch best_nonadaptive_success(const ChannelCollection &coll, const Codebook &code,
                                           const ProbeFamily &family, PovmMode mode,
                                           const std::vector<Matrix> &povm = {});

} // namespace rebound
