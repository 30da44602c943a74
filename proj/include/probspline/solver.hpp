/**
 * @file solver.hpp
 * @brief Sequential probabilistic ODE solver over B-spline coefficient
 *        Gaussians, plus marginal likelihood and grid posteriors for
 *        equation parameters.
 *
 * The solution of u' = f(t, u, theta), u(0) = u0 on [0, L] is modeled per
 * state dimension as a spline with N(0, sigma^2 I) coefficients. The prior
 * is conditioned exactly on u(0); each grid point t_i then contributes one
 * linear observation u'(t_i) = f(t_i, u_i, theta) with nugget eps^2, where
 * u_i is either the current posterior mean of u(t_i) (mean mode) or a seeded
 * draw from its marginal (sample mode). The posterior spread over the
 * coefficients is the discretization uncertainty left by interrogating the
 * model at only N points.
 */
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "probspline/bspline.hpp"
#include "probspline/errors.hpp"
#include "probspline/gaussian.hpp"
#include "probspline/grid.hpp"
#include "probspline/rng.hpp"

namespace probspline {

/// Right-hand side u' = f(t, u, theta) with initial value and domain.
struct OdeProblem {
  std::function<Eigen::VectorXd(double, const Eigen::VectorXd&, const Eigen::VectorXd&)> field;
  Eigen::VectorXd theta;
  Eigen::VectorXd u0;
  double domain_length = 1.0;

  [[nodiscard]] int dim() const { return static_cast<int>(u0.size()); }
};

enum class SolveMode { sample, mean };

/// Solver knobs. J <= 0 selects the default basis count N + q - 1 so the
/// spline space scales with the grid; nugget < 0 selects the default
/// 1e-8 * prior_scale. An empty grid means the uniform grid {i L / N}.
struct SolverConfig {
  int n_points = 0;           ///< N, number of interrogation points
  int basis_count = 0;        ///< J; <= 0 means auto (N + q - 1)
  int order = 4;              ///< q
  double prior_scale = 10.0;  ///< sigma^2
  double nugget = -1.0;       ///< eps^2; < 0 means auto (1e-8 * sigma^2)
  SolveMode mode = SolveMode::sample;
  std::uint64_t seed = 0;
  GridSpec grid;

  [[nodiscard]] int effective_basis_count() const {
    return basis_count > 0 ? basis_count : n_points + order - 1;
  }
  [[nodiscard]] double effective_nugget() const {
    return nugget >= 0.0 ? nugget : 1e-8 * prior_scale;
  }
};

/// Posterior coefficient Gaussians per state dimension after sequential
/// conditioning, with the grid and any trajectory draws from the final
/// posterior.
struct ProbSolution {
  std::vector<GaussianVector> coeff_posterior;  ///< one per dimension, each of length J
  KnotVector knots;
  std::vector<double> grid;
  std::vector<Eigen::MatrixXd> draws;  ///< each N x d
  SolveMode mode_used = SolveMode::mean;
  std::uint64_t seed_used = 0;

  [[nodiscard]] int dim() const { return static_cast<int>(coeff_posterior.size()); }

  [[nodiscard]] double mean_at(double t, int dimension) const {
    return eval_spline(knots, coeff_posterior[static_cast<std::size_t>(dimension)].mean, t);
  }

  [[nodiscard]] double variance_at(double t, int dimension) const {
    const Eigen::VectorXd b = eval_basis(knots, t);
    return b.dot(coeff_posterior[static_cast<std::size_t>(dimension)].cov * b);
  }
};

/// Linear observation map Y = A v + noise over stacked state values
/// v[(i * d) + l] = u_l(t_i) at the k observation times (time-major).
struct ObservationModel {
  Eigen::MatrixXd A;               ///< m x (k * d)
  std::vector<double> obs_times;   ///< k times in [0, L]
  double noise_var = 1.0;          ///< Var(noise) > 0
};

namespace detail {

inline void validate_config(const OdeProblem& problem, const SolverConfig& config) {
  if (problem.dim() < 1) {
    throw ValidationError("solver: state dimension must be at least 1");
  }
  if (!(problem.domain_length > 0.0)) {
    throw InvalidDomainError("solver: domain length must be positive");
  }
  if (config.n_points < 2) {
    throw ValidationError("solver: need N >= 2 interrogation points");
  }
  if (config.order < 2) {
    throw ValidationError("solver: need order q >= 2");
  }
  if (config.effective_basis_count() < config.order) {
    throw InvalidBasisError("solver: need J >= q");
  }
  if (!(config.prior_scale > 0.0)) {
    throw ValidationError("solver: prior scale must be positive");
  }
}

/// Seed of the normal stream used for the sample-mode draw of dimension
/// `dim` at step `i` (0-based). Dimension enters through the base seed so a
/// scalar solve with seed s + l reproduces dimension l of a system solve
/// with seed s.
[[nodiscard]] inline std::uint64_t step_draw_seed(std::uint64_t seed, int dim, std::size_t i) {
  return derive_seed(seed + static_cast<std::uint64_t>(dim), i + 1);
}

/// Stream index space for trajectory draws; disjoint from step indices.
inline constexpr std::uint64_t kDrawStreamBase = 1ULL << 32;

}  // namespace detail

/// Knot vector used by the solver for this problem/config pair.
[[nodiscard]] inline KnotVector solver_knots(const OdeProblem& problem, const SolverConfig& config) {
  return make_clamped_knots(problem.domain_length, config.effective_basis_count(), config.order);
}

/// Interrogation grid: the configured one, or the uniform grid {i L / N}.
[[nodiscard]] inline std::vector<double> solver_grid(const OdeProblem& problem, const SolverConfig& config) {
  if (!config.grid.points.empty()) {
    const auto& pts = config.grid.points;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (!(pts[i] > 0.0) || pts[i] > problem.domain_length) {
        throw OutOfDomainError("solver: grid points must lie in (0, L]");
      }
      if (i > 0 && !(pts[i] > pts[i - 1])) {
        throw InputOrderError("solver: grid points must be strictly ascending");
      }
    }
    return pts;
  }
  return make_quasi_uniform_grid(config.n_points, problem.domain_length, 1.0, 0).points;
}

/// Per-dimension coefficient prior N(0, sigma^2 I) conditioned exactly
/// (zero nugget) on u(0) = u0.
[[nodiscard]] inline std::vector<GaussianVector> init_prior(const OdeProblem& problem,
                                                            const SolverConfig& config) {
  detail::validate_config(problem, config);
  const KnotVector kv = solver_knots(problem, config);
  const int j_count = kv.basis_count();
  const Eigen::RowVectorXd h0 = eval_basis(kv, 0.0).transpose();

  std::vector<GaussianVector> state;
  state.reserve(static_cast<std::size_t>(problem.dim()));
  for (int l = 0; l < problem.dim(); ++l) {
    GaussianVector g;
    g.mean = Eigen::VectorXd::Zero(j_count);
    g.cov = config.prior_scale * Eigen::MatrixXd::Identity(j_count, j_count);
    LinearObservation obs;
    obs.H = h0;
    obs.y = Eigen::VectorXd::Constant(1, problem.u0[l]);
    obs.nugget = 0.0;
    state.push_back(condition(g, obs));
  }
  return state;
}

/// One interrogation at t: realize u(t) from the current state (posterior
/// mean, or a seeded marginal draw in sample mode), evaluate the field
/// there, and condition every dimension on u'(t) = f with nugget eps^2.
/// `step_index` (0-based) selects the draw stream.
[[nodiscard]] inline std::vector<GaussianVector> step(const std::vector<GaussianVector>& state,
                                                      double t,
                                                      const OdeProblem& problem,
                                                      const SolverConfig& config,
                                                      std::size_t step_index) {
  if (t < 0.0 || t > problem.domain_length) {
    throw OutOfDomainError("step: interrogation point outside the domain");
  }
  const int d = problem.dim();
  if (static_cast<int>(state.size()) != d) {
    throw DimensionError("step: state has wrong number of dimensions");
  }
  const KnotVector kv = solver_knots(problem, config);
  const Eigen::VectorXd b = eval_basis(kv, t);
  const DerivativeOperator deriv = derivative_operator(kv);
  const Eigen::RowVectorXd h_deriv =
      eval_basis(deriv.target_knots, t).transpose() * deriv.matrix;

  Eigen::VectorXd u_real(d);
  for (int l = 0; l < d; ++l) {
    const GaussianVector& g = state[static_cast<std::size_t>(l)];
    const double mean = b.dot(g.mean);
    if (config.mode == SolveMode::mean) {
      u_real[l] = mean;
    } else {
      const double var = b.dot(g.cov * b);
      const double sd = var > 0.0 ? std::sqrt(var) : 0.0;
      NormalSampler normals(detail::step_draw_seed(config.seed, l, step_index));
      u_real[l] = mean + sd * normals.next();
    }
  }

  const Eigen::VectorXd f = problem.field(t, u_real, problem.theta);
  if (f.size() != d || !f.allFinite()) {
    std::string msg = "step: field returned a non-finite value at t=" + std::to_string(t) + ", u=(";
    for (int l = 0; l < d; ++l) msg += (l ? ", " : "") + std::to_string(u_real[l]);
    throw FieldEvaluationError(msg + ")");
  }

  std::vector<GaussianVector> next;
  next.reserve(static_cast<std::size_t>(d));
  for (int l = 0; l < d; ++l) {
    LinearObservation obs;
    obs.H = h_deriv;
    obs.y = Eigen::VectorXd::Constant(1, f[l]);
    obs.nugget = config.effective_nugget();
    next.push_back(condition(state[static_cast<std::size_t>(l)], obs));
  }
  return next;
}

/// Runs init_prior and then one step per grid point in ascending order.
/// `trajectory_draws` requests that many samples of the solution at the grid
/// points from the final posterior (draw k of dimension l uses the stream
/// derive_seed(seed + l, 2^32 + k)).
[[nodiscard]] inline ProbSolution solve(const OdeProblem& problem, const SolverConfig& config,
                                        int trajectory_draws = 0) {
  detail::validate_config(problem, config);
  const std::vector<double> grid = solver_grid(problem, config);
  std::vector<GaussianVector> state = init_prior(problem, config);

  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      state = step(state, grid[i], problem, config, i);
    } catch (const FieldEvaluationError& e) {
      throw FieldEvaluationError("solve: divergence at step " + std::to_string(i) + ": " + e.what());
    }
  }

  ProbSolution sol;
  sol.coeff_posterior = std::move(state);
  sol.knots = solver_knots(problem, config);
  sol.grid = grid;
  sol.mode_used = config.mode;
  sol.seed_used = config.seed;

  if (trajectory_draws > 0) {
    const int n = static_cast<int>(grid.size());
    const int d = problem.dim();
    Eigen::MatrixXd basis_rows(n, sol.knots.basis_count());
    for (int i = 0; i < n; ++i) {
      basis_rows.row(i) = eval_basis(sol.knots, grid[static_cast<std::size_t>(i)]).transpose();
    }
    for (int k = 0; k < trajectory_draws; ++k) {
      Eigen::MatrixXd draw(n, d);
      for (int l = 0; l < d; ++l) {
        const std::uint64_t s = derive_seed(config.seed + static_cast<std::uint64_t>(l),
                                            detail::kDrawStreamBase + static_cast<std::uint64_t>(k));
        draw.col(l) = basis_rows * sample(sol.coeff_posterior[static_cast<std::size_t>(l)], s);
      }
      sol.draws.push_back(std::move(draw));
    }
  }
  return sol;
}

/// Log density of the data y under N(A m_u, A S_u A^T + noise_var I), where
/// (m_u, S_u) is the solver posterior of the stacked state values at the
/// observation times (time-major, dimension-minor).
[[nodiscard]] inline double marginal_likelihood(const ProbSolution& sol, const ObservationModel& obs,
                                                const Eigen::VectorXd& y) {
  if (!(obs.noise_var > 0.0)) {
    throw ValidationError("marginal_likelihood: noise variance must be positive");
  }
  const int d = sol.dim();
  const int k = static_cast<int>(obs.obs_times.size());
  const int state_len = k * d;
  if (obs.A.cols() != state_len) {
    throw DimensionError("marginal_likelihood: A has " + std::to_string(obs.A.cols()) +
                         " columns, expected k*d = " + std::to_string(state_len));
  }
  const int m = static_cast<int>(obs.A.rows());
  if (y.size() != m) {
    throw DimensionError("marginal_likelihood: y length does not match rows of A");
  }
  if (m == 0) return 0.0;

  Eigen::MatrixXd basis_rows(k, sol.knots.basis_count());
  for (int i = 0; i < k; ++i) {
    const double t = obs.obs_times[static_cast<std::size_t>(i)];
    if (t < 0.0 || t > sol.knots.domain_length) {
      throw OutOfDomainError("marginal_likelihood: observation time outside the domain");
    }
    basis_rows.row(i) = eval_basis(sol.knots, t).transpose();
  }

  Eigen::VectorXd state_mean(state_len);
  Eigen::MatrixXd state_cov = Eigen::MatrixXd::Zero(state_len, state_len);
  for (int l = 0; l < d; ++l) {
    const GaussianVector& g = sol.coeff_posterior[static_cast<std::size_t>(l)];
    const Eigen::VectorXd mu = basis_rows * g.mean;
    const Eigen::MatrixXd cov = basis_rows * g.cov * basis_rows.transpose();
    for (int i = 0; i < k; ++i) {
      state_mean[i * d + l] = mu[i];
      for (int j = 0; j < k; ++j) state_cov(i * d + l, j * d + l) = cov(i, j);
    }
  }

  Eigen::MatrixXd marginal_cov = obs.A * state_cov * obs.A.transpose();
  marginal_cov += obs.noise_var * Eigen::MatrixXd::Identity(m, m);
  marginal_cov = 0.5 * (marginal_cov + marginal_cov.transpose()).eval();
  const Eigen::LLT<Eigen::MatrixXd> llt(marginal_cov);
  if (llt.info() != Eigen::Success) {
    throw NotPsdError("marginal_likelihood: observation covariance is not positive definite");
  }
  const Eigen::VectorXd residual = y - obs.A * state_mean;
  double log_det = 0.0;
  for (int i = 0; i < m; ++i) log_det += std::log(llt.matrixL()(i, i));
  log_det *= 2.0;
  const double quad = residual.dot(llt.solve(residual));
  constexpr double kLog2Pi = 1.8378770664093454836;
  return -0.5 * (m * kLog2Pi + log_det + quad);
}

/// Normalized posterior weights over a finite parameter grid under a uniform
/// prior: weight_i proportional to exp(marginal likelihood of theta_i). Every
/// theta is solved with the same config (paired seeds). A theta whose solve
/// fails numerically gets weight zero; if no theta yields a finite
/// likelihood the posterior is degenerate.
[[nodiscard]] inline std::vector<std::pair<Eigen::VectorXd, double>> grid_posterior(
    const std::function<OdeProblem(const Eigen::VectorXd&)>& problem_family,
    const std::vector<Eigen::VectorXd>& theta_grid, const ObservationModel& obs,
    const Eigen::VectorXd& y, const SolverConfig& config) {
  if (theta_grid.empty()) {
    throw ValidationError("grid_posterior: parameter grid is empty");
  }
  const double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> log_liks;
  log_liks.reserve(theta_grid.size());
  for (const Eigen::VectorXd& theta : theta_grid) {
    double ll = neg_inf;
    try {
      const ProbSolution sol = solve(problem_family(theta), config);
      ll = marginal_likelihood(sol, obs, y);
      if (std::isnan(ll)) ll = neg_inf;
    } catch (const NumericalError&) {
      ll = neg_inf;  // this theta simply gets no posterior mass
    }
    log_liks.push_back(ll);
  }

  const double max_ll = *std::max_element(log_liks.begin(), log_liks.end());
  if (!std::isfinite(max_ll)) {
    throw DegeneratePosteriorError("grid_posterior: no parameter has finite likelihood");
  }
  double total = 0.0;
  for (double& ll : log_liks) {
    ll = std::exp(ll - max_ll);
    total += ll;
  }
  std::vector<std::pair<Eigen::VectorXd, double>> out;
  out.reserve(theta_grid.size());
  for (std::size_t i = 0; i < theta_grid.size(); ++i) {
    out.emplace_back(theta_grid[i], log_liks[i] / total);
  }
  return out;
}

}  // namespace probspline
