#include "rebound/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rebound/parallel.hpp"
#include "rebound/random.hpp"

namespace rebound {

const char *to_string(BoundKind kind) {
  switch (kind) {
  case BoundKind::theorem1_upper:
    return "theorem1_upper";
  case BoundKind::theorem2_equality:
    return "theorem2_equality";
  case BoundKind::finite_blocklength:
    return "finite_blocklength";
  case BoundKind::seizable_equality:
    return "seizable_equality";
  }
  return "unknown";
}

const char *to_string(PriorMode mode) { return mode == PriorMode::iid ? "iid" : "general"; }

const char *to_string(ThetaHatStrategy strategy) {
  switch (strategy) {
  case ThetaHatStrategy::mixture:
    return "mixture";
  case ThetaHatStrategy::grid:
    return "grid";
  case ThetaHatStrategy::supplied:
    return "supplied";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Holevo quantity

namespace {

/// D(theta || avg) for the Holevo iteration. avg always contains the support
/// of theta mathematically; numerically vanishing eigenvalues of avg are
/// floored so the update stays finite.
double iteration_divergence(const Matrix &theta, double theta_entropy,
                            const Eigen::SelfAdjointEigenSolver<Matrix> &avg) {
  const RealVector weight =
      (avg.eigenvectors().adjoint() * theta * avg.eigenvectors()).diagonal().real();
  double cross = 0.0;
  for (Eigen::Index j = 0; j < weight.size(); ++j) {
    if (weight(j) <= 1e-15)
      continue;
    cross -= weight(j) * std::log2(std::max(avg.eigenvalues()(j), 1e-300));
  }
  return std::max(0.0, cross - theta_entropy);
}

Matrix average(const std::vector<Matrix> &states, const std::vector<double> &prior) {
  Matrix avg = Matrix::Zero(states.front().rows(), states.front().cols());
  for (std::size_t x = 0; x < states.size(); ++x)
    avg += prior[x] * states[x];
  return hermitian_part(avg);
}

} // namespace

double holevo_information(const std::vector<Matrix> &states, const std::vector<double> &prior) {
  check_distribution(prior, states.size());
  double avg_entropy = 0.0;
  for (std::size_t x = 0; x < states.size(); ++x)
    avg_entropy += prior[x] * entropy_bits(states[x]);
  return std::max(0.0, entropy_bits(average(states, prior)) - avg_entropy);
}

CapacityReport holevo_capacity(const std::vector<Matrix> &states, double tol,
                               std::size_t max_iterations) {
  if (states.empty())
    throw DimensionMismatch("empty ensemble");
  if (!(tol > 0.0))
    throw BadDistribution("tolerance must be positive");
  const std::size_t nx = states.size();
  std::vector<double> entropies(nx);
  for (std::size_t x = 0; x < nx; ++x)
    entropies[x] = entropy_bits(states[x]);

  CapacityReport report;
  report.kind = BoundKind::theorem1_upper;
  report.tolerance = tol;
  std::vector<double> p(nx, 1.0 / double(nx));
  std::vector<double> div(nx);

  for (std::size_t it = 0;; ++it) {
    Eigen::SelfAdjointEigenSolver<Matrix> avg(average(states, p));
    double info = 0.0, upper = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      div[x] = iteration_divergence(states[x], entropies[x], avg);
      info += p[x] * div[x];
      upper = std::max(upper, div[x]);
    }
    report.history.push_back(info);
    report.value = info;
    report.optimizer = p;
    report.gap_certificate = std::max(0.0, upper - info);
    report.iterations = it;
    if (report.gap_certificate <= tol) {
      report.converged = true;
      return report;
    }
    if (it >= max_iterations) {
      report.converged = false;
      throw NonConvergence(report);
    }
    const double top = *std::max_element(div.begin(), div.end());
    double total = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      p[x] = std::max(p[x] * std::exp2(div[x] - top), 1e-300);
      total += p[x];
    }
    for (auto &v : p)
      v /= total;
  }
}

CapacityReport theorem1_upper_bound(const EnvParametrization &env, double tol) {
  if (env.size() < 2)
    throw DimensionMismatch("the alphabet needs at least two labels");
  CapacityReport report = holevo_capacity(env.env_states(), tol);
  report.labels = env.labels();
  return report;
}

CapacityReport theorem2_capacity(const QuantumChannel &base, const GroupRepresentation &rep) {
  const auto design = is_one_design(rep);
  if (!design.pass)
    throw NotOneDesign("input representation twirl deviates from I/d by " +
                       std::to_string(design.max_deviation));
  const auto cov = is_covariant(base, rep);
  if (!cov.pass)
    throw NotCovariant("base channel violates covariance by " + std::to_string(cov.max_deviation));
  const DensityOperator state = choi(base);
  CapacityReport report;
  report.kind = BoundKind::theorem2_equality;
  report.value = mutual_information(state, {state.registers()[0].name},
                                    {state.registers()[1].name});
  report.labels = group_labels(rep);
  report.optimizer.assign(rep.size(), 1.0 / double(rep.size()));
  report.tolerance = tol::num;
  return report;
}

ChannelCollection implied_collection(const EnvParametrization &env) {
  const Eigen::Index d_in = env.in_dim();
  std::vector<QuantumChannel> members;
  for (const auto &theta : env.env_states()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(theta);
    std::vector<Matrix> kraus;
    for (Eigen::Index j = 0; j < theta.rows(); ++j) {
      const double lambda = es.eigenvalues()(j);
      if (lambda <= 0.0)
        continue;
      const Matrix attach =
          kron(Matrix::Identity(d_in, d_in), Matrix(std::sqrt(lambda) * es.eigenvectors().col(j)));
      for (const auto &k : env.interaction().kraus())
        kraus.push_back(k * attach);
    }
    members.emplace_back(Register{"B'", d_in}, env.interaction().out_reg(), std::move(kraus));
  }
  return ChannelCollection(env.labels(), std::move(members));
}

CapacityReport seizable_capacity(const EnvParametrization &env, const SeizureData &seize,
                                 double tol) {
  return seizable_capacity(implied_collection(env), env, seize, tol);
}

CapacityReport seizable_capacity(const ChannelCollection &coll, const EnvParametrization &env,
                                 const SeizureData &seize, double tol) {
  const auto param = verify_env_parametrization(coll, env);
  if (!param.pass)
    throw NotSeizable("environment parametrization fails by " +
                      std::to_string(param.max_deviation));
  const auto seized = verify_seizable(coll, env, seize);
  if (!seized.pass)
    throw NotSeizable("seizure misses the environment states by " +
                      std::to_string(seized.max_deviation));
  CapacityReport report = theorem1_upper_bound(env, tol);
  report.kind = BoundKind::seizable_equality;
  return report;
}

// ---------------------------------------------------------------------------
// One-shot converse

namespace {

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t r = 1;
  while (exp--)
    r *= base;
  return r;
}

/// Digits of tuple index t (first use most significant).
std::vector<std::size_t> tuple_digits(std::size_t t, std::size_t nx, std::size_t n) {
  std::vector<std::size_t> digits(n);
  for (std::size_t i = n; i-- > 0;) {
    digits[i] = t % nx;
    t /= nx;
  }
  return digits;
}

Matrix tensor_power(const Matrix &m, std::size_t n) {
  Matrix out = m;
  for (std::size_t i = 1; i < n; ++i)
    out = kron(out, m);
  return out;
}

Matrix tuple_state(const std::vector<Matrix> &states, const std::vector<std::size_t> &digits) {
  Matrix out = states[digits.front()];
  for (std::size_t i = 1; i < digits.size(); ++i)
    out = kron(out, states[digits[i]]);
  return out;
}

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps < 1.0))
    throw BadEpsilon("epsilon must lie in [0, 1)");
}

/// Golden-section maximisation of a concave function on [a, b].
template <typename Fn> double maximize_concave(Fn &&g, double a, double b) {
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double gc = g(c), gd = g(d);
  double best = std::max({g(a), g(b), gc, gd});
  for (int it = 0; it < 400 && (b - a) > 1e-15 * std::max(1.0, b); ++it) {
    if (gc >= gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - ratio * (b - a);
      gc = g(c);
      best = std::max(best, gc);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + ratio * (b - a);
      gd = g(d);
      best = std::max(best, gd);
    }
  }
  return best;
}

} // namespace

double sup_prior_dh(const std::vector<Matrix> &states, const Matrix &theta_hat, std::size_t n,
                    double eps) {
  check_eps(eps);
  if (states.empty() || n == 0)
    throw DimensionMismatch("need a non-empty ensemble and n >= 1");
  const std::size_t nx = states.size();
  const Matrix hat_n = tensor_power(theta_hat, n);

  // Tr(mu theta_{x^n} - thetahat^{(x)n})_+ is invariant under permuting the
  // uses, so nondecreasing tuples suffice.
  std::vector<std::vector<std::size_t>> multisets;
  for (std::size_t t = 0; t < ipow(nx, n); ++t) {
    auto digits = tuple_digits(t, nx, n);
    if (std::is_sorted(digits.begin(), digits.end()))
      multisets.push_back(std::move(digits));
  }

  if (eps == 0.0) {
    std::vector<Matrix> proj;
    for (const auto &s : states)
      proj.push_back(support_projector(s, tol::support));
    double beta = std::numeric_limits<double>::infinity();
    for (const auto &digits : multisets)
      beta = std::min(beta, (tuple_state(proj, digits) * hat_n).trace().real());
    return type2_to_bits(std::max(beta, 0.0));
  }

  std::vector<Matrix> blocks;
  for (const auto &digits : multisets)
    blocks.push_back(tuple_state(states, digits));
  auto g = [&](double mu) {
    double worst = 0.0;
    for (const auto &b : blocks)
      worst = std::max(worst, positive_part_trace(mu * b - hat_n));
    return mu * (1.0 - eps) - worst;
  };
  const double beta = maximize_concave(g, 0.0, 1.0 / eps);
  return type2_to_bits(std::max(beta, 0.0));
}

double dh_for_prior(const std::vector<Matrix> &states, const Matrix &theta_hat, std::size_t n,
                    const std::vector<double> &prior, double eps) {
  const std::size_t nx = states.size();
  check_distribution(prior, ipow(nx, n));
  const Matrix hat_n = tensor_power(theta_hat, n);
  std::vector<Matrix> rho, sigma;
  for (std::size_t t = 0; t < prior.size(); ++t) {
    if (prior[t] <= 0.0)
      continue;
    rho.push_back(prior[t] * tuple_state(states, tuple_digits(t, nx, n)));
    sigma.push_back(prior[t] * hat_n);
  }
  return type2_to_bits(neyman_pearson(rho, sigma, eps).type2);
}

namespace {

/// Euclidean projection onto the probability simplex.
std::vector<double> project_simplex(const std::vector<double> &v) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0.0, shift = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    cumulative += u[k];
    const double candidate = (cumulative - 1.0) / double(k + 1);
    if (u[k] - candidate > 0.0)
      shift = candidate;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = std::max(v[i] - shift, 0.0);
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (auto &x : out)
    x /= total;
  return out;
}

/// Minimal type-2 error beta(P) for a prior P over tuples, and its gradient
/// d beta / d P_t = -Tr(mu* theta_t - thetahat_n)_+ (envelope theorem; for
/// eps = 0 the problem is linear with coefficients Tr Pi_t thetahat_n).
class TupleObjective {
public:
  TupleObjective(const std::vector<Matrix> &states, const Matrix &theta_hat, std::size_t n,
                 double eps)
      : eps_(eps), nx_(states.size()), n_(n) {
    hat_n_ = tensor_power(theta_hat, n);
    const std::size_t count = ipow(nx_, n);
    for (std::size_t t = 0; t < count; ++t) {
      tuples_.push_back(tuple_state(states, tuple_digits(t, nx_, n)));
      if (eps == 0.0)
        zero_coeff_.push_back(
            (support_projector(tuples_.back(), tol::support) * hat_n_).trace().real());
    }
  }

  std::size_t size() const { return tuples_.size(); }

  double beta(const std::vector<double> &prior, std::vector<double> *grad) const {
    if (eps_ == 0.0) {
      double b = 0.0;
      for (std::size_t t = 0; t < prior.size(); ++t)
        if (prior[t] > 0.0)
          b += prior[t] * zero_coeff_[t];
      if (grad)
        *grad = zero_coeff_;
      return b;
    }
    std::vector<Matrix> rho, sigma;
    for (std::size_t t = 0; t < prior.size(); ++t) {
      if (prior[t] <= 0.0)
        continue;
      rho.push_back(prior[t] * tuples_[t]);
      sigma.push_back(prior[t] * hat_n_);
    }
    const auto np = neyman_pearson(rho, sigma, eps_);
    if (grad) {
      grad->resize(prior.size());
      for (std::size_t t = 0; t < prior.size(); ++t)
        (*grad)[t] = -positive_part_trace(np.multiplier * tuples_[t] - hat_n_);
    }
    return np.type2;
  }

  std::size_t alphabet() const { return nx_; }
  std::size_t uses() const { return n_; }

private:
  double eps_;
  std::size_t nx_;
  std::size_t n_;
  Matrix hat_n_;
  std::vector<Matrix> tuples_;
  std::vector<double> zero_coeff_;
};

std::vector<double> iid_prior(const std::vector<double> &p, std::size_t n) {
  const std::size_t nx = p.size();
  std::vector<double> out(ipow(nx, n));
  for (std::size_t t = 0; t < out.size(); ++t) {
    double v = 1.0;
    for (auto d : tuple_digits(t, nx, n))
      v *= p[d];
    out[t] = v;
  }
  return out;
}

struct AscentResult {
  double bits = 0.0;
  std::vector<double> prior;
};

/// Minimise beta over the simplex of the chosen parametrisation by projected
/// gradient descent with backtracking and random restarts; returns the best
/// -log2 beta found.
AscentResult prior_ascent(const TupleObjective &obj, PriorMode mode, std::size_t restarts,
                          std::size_t iterations, Rng &rng) {
  const std::size_t nx = obj.alphabet(), n = obj.uses();
  const std::size_t dim = mode == PriorMode::general ? obj.size() : nx;

  auto evaluate = [&](const std::vector<double> &q, std::vector<double> *grad) {
    if (mode == PriorMode::general)
      return obj.beta(q, grad);
    std::vector<double> tuple_grad;
    const double b = obj.beta(iid_prior(q, n), grad ? &tuple_grad : nullptr);
    if (grad) {
      grad->assign(nx, 0.0);
      for (std::size_t t = 0; t < tuple_grad.size(); ++t) {
        const auto digits = tuple_digits(t, nx, n);
        for (std::size_t i = 0; i < n; ++i) {
          double rest = 1.0;
          for (std::size_t j = 0; j < n; ++j)
            if (j != i)
              rest *= q[digits[j]];
          (*grad)[digits[i]] += tuple_grad[t] * rest;
        }
      }
    }
    return b;
  };

  double best_beta = std::numeric_limits<double>::infinity();
  std::vector<double> best_prior;
  for (std::size_t r = 0; r < std::max<std::size_t>(restarts, 1); ++r) {
    std::vector<double> q =
        r == 0 ? std::vector<double>(dim, 1.0 / double(dim)) : random_probability(dim, rng);
    std::vector<double> grad;
    double b = evaluate(q, &grad);
    double step = 1.0;
    for (std::size_t it = 0; it < iterations; ++it) {
      bool improved = false;
      for (int halvings = 0; halvings < 40; ++halvings) {
        std::vector<double> trial(dim);
        for (std::size_t i = 0; i < dim; ++i)
          trial[i] = q[i] - step * grad[i];
        trial = project_simplex(trial);
        std::vector<double> trial_grad;
        const double tb = evaluate(trial, &trial_grad);
        if (tb < b - 1e-15 * std::max(b, 1e-300)) {
          const double gain = b - tb;
          q = std::move(trial);
          grad = std::move(trial_grad);
          b = tb;
          step *= 1.5;
          improved = gain > 1e-13 * std::max(b, 1e-300);
          break;
        }
        step *= 0.5;
      }
      if (!improved)
        break;
    }
    if (b < best_beta) {
      best_beta = b;
      best_prior = q;
    }
  }
  return {type2_to_bits(std::max(best_beta, 0.0)), best_prior};
}

} // namespace

CapacityReport finite_blocklength_bound(const EnvParametrization &env,
                                        const FiniteBlocklengthOptions &options) {
  check_eps(options.epsilon);
  const std::size_t n = options.n;
  if (n < 1 || n > options.n_max)
    throw BudgetExceeded("n = " + std::to_string(n) + " outside [1, " +
                         std::to_string(options.n_max) + "]");
  const std::size_t nx = env.size();
  const double blocks = std::pow(double(nx), double(n));
  const double block_dim = std::pow(double(env.env_reg().dim), double(n));
  if (blocks > double(options.max_blocks) || block_dim > double(options.max_block_dim))
    throw BudgetExceeded("|X|^n = " + std::to_string(blocks) + ", dim(E)^n = " +
                         std::to_string(block_dim) + " exceed the dense budget");

  const auto &states = env.env_states();
  const Eigen::Index de = env.env_reg().dim;

  std::vector<ThetaHatCandidate> candidates;
  {
    const auto opt = holevo_capacity(states, options.holevo_tol);
    candidates.push_back({"theorem1_mixture", average(states, opt.optimizer), 0, 0, {}});
    candidates.push_back(
        {"uniform_mixture", average(states, std::vector<double>(nx, 1.0 / double(nx))), 0, 0, {}});
    candidates.push_back({"maximally_mixed", Matrix::Identity(de, de) / double(de), 0, 0, {}});
  }
  char id[32];
  if (options.strategy == ThetaHatStrategy::grid) {
    Rng rng(options.seed);
    for (std::size_t k = 0; k < options.grid_size; ++k) {
      std::snprintf(id, sizeof id, "grid_%03zu", k);
      candidates.push_back({id, random_density_matrix(de, de, rng), 0, 0, {}});
    }
  }
  if (options.strategy == ThetaHatStrategy::supplied) {
    for (std::size_t k = 0; k < options.supplied.size(); ++k) {
      const auto &s = options.supplied[k];
      if (s.rows() != de || s.cols() != de || !state_deviation(s).ok())
        throw InvalidState("supplied thetahat " + std::to_string(k) +
                           " is not a state on the environment");
      std::snprintf(id, sizeof id, "supplied_%03zu", k);
      candidates.push_back({id, hermitian_part(s), 0, 0, {}});
    }
  }

  parallel_for(candidates.size(), [&](std::size_t k) {
    auto &c = candidates[k];
    c.sup_bits = sup_prior_dh(states, c.state, n, options.epsilon);
    const TupleObjective obj(states, c.state, n, options.epsilon);
    Rng rng(options.seed + 0x9e3779b97f4a7c15ULL * (k + 1));
    auto ascent = prior_ascent(obj, options.prior_mode, options.restarts,
                               options.ascent_iterations, rng);
    c.ascent_bits = ascent.bits;
    c.ascent_prior = std::move(ascent.prior);
  });

  std::size_t best = 0;
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    const auto &c = candidates[k], &b = candidates[best];
    if (c.sup_bits < b.sup_bits || (c.sup_bits == b.sup_bits && c.id < b.id))
      best = k;
  }

  FiniteBlocklengthDetail detail;
  detail.n = n;
  detail.epsilon = options.epsilon;
  detail.prior_mode = options.prior_mode;
  detail.strategy = options.strategy;
  detail.seed = options.seed;
  detail.best = best;
  detail.certified_block_bits = candidates[best].sup_bits;
  detail.ascent_block_bits = candidates[best].ascent_bits;

  CapacityReport report;
  report.kind = BoundKind::finite_blocklength;
  report.value = detail.certified_block_bits / double(n);
  report.optimizer = candidates[best].ascent_prior;
  if (options.prior_mode == PriorMode::iid || n == 1) {
    report.labels = env.labels();
  } else {
    for (std::size_t t = 0; t < ipow(nx, n); ++t) {
      std::string label;
      for (auto d : tuple_digits(t, nx, n))
        label += (label.empty() ? "" : ",") + env.labels()[d];
      report.labels.push_back(label);
    }
  }
  if (std::isinf(detail.certified_block_bits))
    report.gap_certificate = std::isinf(detail.ascent_block_bits)
                                 ? 0.0
                                 : std::numeric_limits<double>::infinity();
  else
    report.gap_certificate =
        std::max(0.0, detail.certified_block_bits - detail.ascent_block_bits);
  report.tolerance = tol::num;
  detail.candidates = std::move(candidates);
  report.finite_blocklength = std::move(detail);
  return report;
}

} // namespace rebound
