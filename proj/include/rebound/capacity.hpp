#pragma once

// Capacity bounds for environment-parametrized collections:
//   * sup_p I(X;E) over the environment ensemble (upper bound, and the exact
//     capacity when the collection is environment seizable),
//   * I(R;B) of the base channel's Choi state for jointly covariant
//     collections,
//   * the one-shot converse  nR <= sup_p inf_thetahat D_h^eps(theta || thetahat).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rebound/covariance.hpp"
#include "rebound/divergences.hpp"

namespace rebound {

enum class BoundKind { theorem1_upper, theorem2_equality, finite_blocklength, seizable_equality };
enum class PriorMode { iid, general };
enum class ThetaHatStrategy { mixture, grid, supplied };

const char *to_string(BoundKind kind);
const char *to_string(PriorMode mode);
const char *to_string(ThetaHatStrategy strategy);

struct ThetaHatCandidate {
  std::string id;
  Matrix state;
  /// sup over all priors on X^n of D_h^eps(theta || thetahat), in bits for the
  /// whole block (not per use). Exact up to the 1-D dual search tolerance.
  double sup_bits = 0.0;
  /// Best value found by projected-gradient ascent in the requested prior
  /// mode; a lower estimate of the supremum.
  double ascent_bits = 0.0;
  std::vector<double> ascent_prior;
};

struct FiniteBlocklengthDetail {
  std::size_t n = 1;
  double epsilon = 0.0;
  PriorMode prior_mode = PriorMode::general;
  ThetaHatStrategy strategy = ThetaHatStrategy::mixture;
  std::uint64_t seed = 0;
  std::vector<ThetaHatCandidate> candidates; ///< in evaluation order
  std::size_t best = 0;                      ///< index into candidates
  double certified_block_bits = 0.0;         ///< upper bound on log2 M = nR
  double ascent_block_bits = 0.0;            ///< heuristic counterpart at `best`
};

struct CapacityReport {
  BoundKind kind = BoundKind::theorem1_upper;
  double value = 0.0; ///< bits per channel use
  std::vector<std::string> labels;
  std::vector<double> optimizer;
  double gap_certificate = 0.0;
  std::size_t iterations = 0;
  double tolerance = 0.0;
  bool converged = true;
  std::vector<double> history; ///< I(X;E) per iteration
  std::optional<FiniteBlocklengthDetail> finite_blocklength;
};

/// Raised when the Holevo iteration hits its cap; carries the best report.
class NonConvergence : public Error {
public:
  explicit NonConvergence(CapacityReport best)
      : Error("NonConvergence: iteration cap reached with gap " +
              std::to_string(best.gap_certificate)),
        best_(std::move(best)) {}
  const CapacityReport &best() const { return best_; }

private:
  CapacityReport best_;
};

/// I(X;E) of sum_x p(x)|x><x| (x) states[x].
double holevo_information(const std::vector<Matrix> &states, const std::vector<double> &prior);

/// sup_p I(X;E) by the alternating update p'(x) ~ p(x) 2^{D(theta^x || avg_p)},
/// stopped once max_x D(theta^x || avg_p) - I(X;E)_p <= tol.
CapacityReport holevo_capacity(const std::vector<Matrix> &states, double tol,
                               std::size_t max_iterations = 100000);

CapacityReport theorem1_upper_bound(const EnvParametrization &env, double tol);

/// I(R;B) of the Choi state of `base`. Throws NotOneDesign / NotCovariant.
CapacityReport theorem2_capacity(const QuantumChannel &base, const GroupRepresentation &rep);

/// Environment-seizable collections attain the Holevo bound. The collection
/// checked is the one implied by env; throws NotSeizable.
CapacityReport seizable_capacity(const EnvParametrization &env, const SeizureData &seize,
                                 double tol);
/// As above, additionally checking that env parametrizes coll.
CapacityReport seizable_capacity(const ChannelCollection &coll, const EnvParametrization &env,
                                 const SeizureData &seize, double tol);

/// The collection rho -> F(rho (x) theta^x) defined by an environment
/// parametrization (needs at least two labels).
ChannelCollection implied_collection(const EnvParametrization &env);

struct FiniteBlocklengthOptions {
  std::size_t n = 1;
  double epsilon = 0.0;
  PriorMode prior_mode = PriorMode::general;
  ThetaHatStrategy strategy = ThetaHatStrategy::mixture;
  std::vector<Matrix> supplied;  ///< extra candidates for `supplied`
  std::size_t grid_size = 16;    ///< random candidates for `grid`
  std::uint64_t seed = 0;
  std::size_t restarts = 20;
  std::size_t ascent_iterations = 200;
  double holevo_tol = 1e-9;
  std::size_t n_max = 3;
  std::size_t max_blocks = 4096;       ///< |X|^n
  Eigen::Index max_block_dim = 64;     ///< dim(E)^n
};

/// Upper bound on the rate of any (n, R, eps) protocol. Throws
/// BudgetExceeded when n or the block sizes exceed the options' limits.
CapacityReport finite_blocklength_bound(const EnvParametrization &env,
                                        const FiniteBlocklengthOptions &options);

/// sup over priors on X^n of D_h^eps(theta_{X^n E^n} || thetahat_{X^n E^n}),
/// for a single-letter thetahat, through the dual
///   inf_p min_L Tr L thetahat_p = sup_mu [mu (1 - eps) - max_{x^n} Tr(mu theta_{x^n} - thetahat^{(x)n})_+].
double sup_prior_dh(const std::vector<Matrix> &states, const Matrix &theta_hat, std::size_t n,
                    double eps);

/// D_h^eps(theta_p || thetahat_p) for an explicit prior over X^n (length |X|^n,
/// lexicographic order with the first use most significant).
double dh_for_prior(const std::vector<Matrix> &states, const Matrix &theta_hat, std::size_t n,
                    const std::vector<double> &prior, double eps);

} // namespace rebound
