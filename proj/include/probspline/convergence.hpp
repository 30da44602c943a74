/**
 * @file convergence.hpp
 * @brief Empirical convergence-rate estimation: solve at increasing grid
 *        sizes, measure max error against an analytic reference, and fit a
 *        log-log slope.
 */
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "probspline/errors.hpp"
#include "probspline/grid.hpp"
#include "probspline/solver.hpp"

namespace probspline {

/// Grid sizes, max-abs errors against the reference, and the fitted
/// log-log regression line.
struct RateReport {
  std::vector<int> grid_sizes;
  std::vector<double> errors;
  std::vector<double> max_increments;    ///< h per grid
  std::vector<double> quasi_constants;   ///< realized h/min ratio per grid
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< regression RMS in log space
};

/// Ordinary least squares on (ln N, ln error). This is also the seam for
/// calibrating the estimator on synthetic error sequences. Errors must be
/// positive and at least three points are required.
[[nodiscard]] inline RateReport fit_loglog(const std::vector<int>& grid_sizes,
                                           const std::vector<double>& errors) {
  if (grid_sizes.size() != errors.size()) {
    throw DimensionError("fit_loglog: grid sizes and errors must pair up");
  }
  const int n = static_cast<int>(grid_sizes.size());
  if (n < 3) {
    throw ValidationError("fit_loglog: need at least three grid sizes");
  }
  for (int i = 0; i < n; ++i) {
    if (!(errors[static_cast<std::size_t>(i)] > 0.0)) {
      throw RateUndefinedError("fit_loglog: non-positive error at N=" +
                               std::to_string(grid_sizes[static_cast<std::size_t>(i)]) +
                               " (exact representation leaves no rate to fit)");
    }
  }

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(static_cast<double>(grid_sizes[static_cast<std::size_t>(i)]));
    const double y = std::log(errors[static_cast<std::size_t>(i)]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  RateReport report;
  report.grid_sizes = grid_sizes;
  report.errors = errors;
  const double denom = n * sxx - sx * sx;
  report.slope = (n * sxy - sx * sy) / denom;
  report.intercept = (sy - report.slope * sx) / n;

  double ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = std::log(static_cast<double>(grid_sizes[static_cast<std::size_t>(i)]));
    const double y = std::log(errors[static_cast<std::size_t>(i)]);
    const double r = y - (report.intercept + report.slope * x);
    ss += r * r;
  }
  report.residual = std::sqrt(ss / n);
  return report;
}

/// For each N: build a quasi-uniform grid (C from base_config.grid, per-N
/// seed base XOR N), solve in mean mode, and record the max grid-point error
/// of the posterior mean against the analytic reference. Fits the log-log
/// line over all N. base_config.basis_count <= 0 keeps the default
/// J = N + q - 1 scaling per N.
[[nodiscard]] inline RateReport estimate_rate(const OdeProblem& problem,
                                              const std::function<Eigen::VectorXd(double)>& analytic,
                                              const std::vector<int>& grid_sizes,
                                              const SolverConfig& base_config) {
  if (grid_sizes.size() < 3) {
    throw ValidationError("estimate_rate: need at least three grid sizes");
  }
  for (std::size_t i = 1; i < grid_sizes.size(); ++i) {
    if (grid_sizes[i] <= grid_sizes[i - 1]) {
      throw InputOrderError("estimate_rate: grid sizes must be strictly increasing");
    }
  }

  const double c_bound = base_config.grid.c_target >= 1.0 ? base_config.grid.c_target : 1.0;
  const std::uint64_t grid_seed = base_config.seed;

  RateReport report;
  report.grid_sizes = grid_sizes;
  for (const int n : grid_sizes) {
    SolverConfig config = base_config;
    config.n_points = n;
    config.mode = SolveMode::mean;
    config.grid = make_quasi_uniform_grid(n, problem.domain_length, c_bound,
                                          grid_seed ^ static_cast<std::uint64_t>(n));
    const ProbSolution sol = solve(problem, config);

    double err = 0.0;
    for (const double t : sol.grid) {
      const Eigen::VectorXd ref = analytic(t);
      for (int l = 0; l < problem.dim(); ++l) {
        err = std::max(err, std::abs(sol.mean_at(t, l) - ref[l]));
      }
    }
    if (!(err > 0.0)) {
      throw RateUndefinedError("estimate_rate: zero error at N=" + std::to_string(n) +
                               " (solution represented exactly)");
    }
    report.errors.push_back(err);
    report.max_increments.push_back(max_increment(config.grid));
    report.quasi_constants.push_back(quasi_uniformity_constant(config.grid));
  }

  const RateReport fit = fit_loglog(report.grid_sizes, report.errors);
  report.slope = fit.slope;
  report.intercept = fit.intercept;
  report.residual = fit.residual;
  return report;
}

}  // namespace probspline
