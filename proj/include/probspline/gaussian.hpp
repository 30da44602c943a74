/**
 * @file gaussian.hpp
 * @brief Finite-dimensional Gaussian algebra: joint laws of (u, u') under a
 *        coefficient prior, conditioning on linear observations, seeded
 *        sampling, and bandwidth diagnostics.
 */
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "probspline/bspline.hpp"
#include "probspline/errors.hpp"
#include "probspline/rng.hpp"

namespace probspline {

/// Mean and symmetric PSD covariance of a finite-dimensional Gaussian.
struct GaussianVector {
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;

  [[nodiscard]] int dim() const { return static_cast<int>(mean.size()); }
};

/// Linear observation y = Hx + noise with homoscedastic variance `nugget`.
struct LinearObservation {
  Eigen::MatrixXd H;
  Eigen::VectorXd y;
  double nugget = 0.0;  ///< r^2 >= 0
};

/// Zero-mean diagonal prior sigma^2 I on spline coefficients.
struct CoefficientPrior {
  double scale = 1.0;  ///< sigma^2 > 0
};

/// Smallest b such that |M(i,j)| <= tol whenever |i-j| > b.
[[nodiscard]] inline int bandwidth_of(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) {
    throw DimensionError("bandwidth_of: matrix is not square");
  }
  int band = 0;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      if (std::abs(m(i, j)) > tol) band = std::max(band, std::abs(i - j));
    }
  }
  return band;
}

namespace detail {

inline void require_sorted_in_domain(const std::vector<double>& pts, double length, const char* what) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (pts[i] < 0.0 || pts[i] > length) {
      throw OutOfDomainError(std::string(what) + ": point " + std::to_string(pts[i]) +
                             " outside [0, " + std::to_string(length) + "]");
    }
    if (i > 0 && pts[i] < pts[i - 1]) {
      throw InputOrderError(std::string(what) + ": points must be sorted ascending");
    }
  }
}

/// Lower Cholesky factor of a symmetric matrix, exploiting its bandwidth.
/// Returns false if a pivot is non-positive. The factor of a banded SPD
/// matrix keeps the same lower bandwidth, so entries beyond it are skipped.
inline bool banded_cholesky(const Eigen::MatrixXd& a, int bw, double jitter, Eigen::MatrixXd& l_out) {
  const int n = static_cast<int>(a.rows());
  l_out = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    double s = a(j, j) + jitter;
    for (int k = std::max(0, j - bw); k < j; ++k) s -= l_out(j, k) * l_out(j, k);
    if (!(s > 0.0) || !std::isfinite(s)) return false;
    l_out(j, j) = std::sqrt(s);
    const int i_max = std::min(n - 1, j + bw);
    for (int i = j + 1; i <= i_max; ++i) {
      double v = a(i, j);
      for (int k = std::max(0, i - bw); k < j; ++k) v -= l_out(i, k) * l_out(j, k);
      l_out(i, j) = v / l_out(j, j);
    }
  }
  return true;
}

}  // namespace detail

/// Zero-mean joint Gaussian of the stacked vector
/// (u(s) for s in u_points; u'(s') for s' in ut_points) under the diagonal
/// coefficient prior. Covariance is sigma^2 R R^T with R the stacked design:
/// basis rows for u, derivative-basis rows times D for u'.
[[nodiscard]] inline GaussianVector joint_state_gaussian(const KnotVector& kv,
                                                         const CoefficientPrior& prior,
                                                         const std::vector<double>& u_points,
                                                         const std::vector<double>& ut_points) {
  if (!(prior.scale > 0.0)) {
    throw ValidationError("joint_state_gaussian: prior scale must be positive");
  }
  detail::require_sorted_in_domain(u_points, kv.domain_length, "u_points");
  detail::require_sorted_in_domain(ut_points, kv.domain_length, "ut_points");

  const int j_count = kv.basis_count();
  const int nu = static_cast<int>(u_points.size());
  const int nt = static_cast<int>(ut_points.size());

  Eigen::MatrixXd design(nu + nt, j_count);
  for (int i = 0; i < nu; ++i) design.row(i) = eval_basis(kv, u_points[i]).transpose();
  if (nt > 0) {
    const DerivativeOperator op = derivative_operator(kv);
    for (int i = 0; i < nt; ++i) {
      design.row(nu + i) = eval_basis(op.target_knots, ut_points[i]).transpose() * op.matrix;
    }
  }

  GaussianVector g;
  g.mean = Eigen::VectorXd::Zero(nu + nt);
  g.cov = prior.scale * (design * design.transpose());
  g.cov = 0.5 * (g.cov + g.cov.transpose()).eval();
  return g;
}

/// Conditions g on the observation y = Hx + noise. Posterior mean is
/// mu + K (y - H mu) and covariance Sigma - K H Sigma with
/// K = Sigma H^T (H Sigma H^T + r^2 I)^{-1}. With a zero nugget a singular
/// innovation is inverted by an eigenvalue-thresholded pseudo-inverse
/// (threshold 1e-12 of the largest eigenvalue); a fully degenerate
/// innovation with an inconsistent value is rejected.
[[nodiscard]] inline GaussianVector condition(const GaussianVector& g, const LinearObservation& obs) {
  const int n = g.dim();
  if (obs.H.cols() != n) {
    throw DimensionError("condition: H has " + std::to_string(obs.H.cols()) +
                         " columns, state dimension is " + std::to_string(n));
  }
  if (obs.y.size() != obs.H.rows()) {
    throw DimensionError("condition: y length does not match rows of H");
  }
  if (obs.nugget < 0.0) {
    throw ValidationError("condition: nugget must be non-negative");
  }
  const int m = static_cast<int>(obs.H.rows());
  if (m == 0) return g;

  const Eigen::MatrixXd cross = g.cov * obs.H.transpose();  // n x m
  Eigen::MatrixXd innov = obs.H * cross;
  innov += obs.nugget * Eigen::MatrixXd::Identity(m, m);
  innov = 0.5 * (innov + innov.transpose()).eval();
  const Eigen::VectorXd residual = obs.y - obs.H * g.mean;

  Eigen::MatrixXd gain(n, m);
  if (obs.nugget > 0.0) {
    Eigen::LLT<Eigen::MatrixXd> llt(innov);
    if (llt.info() != Eigen::Success) {
      throw NotPsdError("condition: innovation covariance is not positive definite");
    }
    gain = llt.solve(cross.transpose()).transpose();
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(innov);
    if (eig.info() != Eigen::Success) {
      throw NotPsdError("condition: eigendecomposition of innovation failed");
    }
    const double lambda_max = eig.eigenvalues().maxCoeff();
    if (!(lambda_max > 0.0)) {
      if (innov.cwiseAbs().maxCoeff() == 0.0 && residual.cwiseAbs().maxCoeff() != 0.0) {
        throw SingularConditioningError(
            "condition: exact observation of a degenerate direction contradicts the state; "
            "add a nugget to condition approximately");
      }
      return g;  // no information along any observed direction
    }
    const double threshold = 1e-12 * lambda_max;
    Eigen::VectorXd inv_eig = eig.eigenvalues();
    for (int i = 0; i < m; ++i) inv_eig[i] = inv_eig[i] > threshold ? 1.0 / inv_eig[i] : 0.0;
    const Eigen::MatrixXd pinv =
        eig.eigenvectors() * inv_eig.asDiagonal() * eig.eigenvectors().transpose();
    gain = cross * pinv;
  }

  GaussianVector post;
  post.mean = g.mean + gain * residual;
  post.cov = g.cov - gain * cross.transpose();
  post.cov = 0.5 * (post.cov + post.cov.transpose()).eval();
  return post;
}

/// Draws mu + L z with L a lower Cholesky factor of cov (bandwidth-aware;
/// jitter ladder 1e-12, 1e-10, 1e-8 on the diagonal before giving up) and
/// z standard normals from NormalSampler(seed). Same seed, same draw.
[[nodiscard]] inline Eigen::VectorXd sample(const GaussianVector& g, std::uint64_t seed) {
  const int n = g.dim();
  if (g.cov.rows() != n || g.cov.cols() != n) {
    throw DimensionError("sample: covariance shape does not match mean length");
  }
  if (n == 0) return g.mean;
  const Eigen::MatrixXd sym = 0.5 * (g.cov + g.cov.transpose());
  if (sym.cwiseAbs().maxCoeff() == 0.0) {
    return g.mean;  // degenerate Gaussian: the factor is zero
  }

  const int bw = bandwidth_of(sym, 0.0);
  Eigen::MatrixXd l;
  bool ok = false;
  for (const double jitter : {0.0, 1e-12, 1e-10, 1e-8}) {
    if (detail::banded_cholesky(sym, bw, jitter, l)) {
      ok = true;
      break;
    }
  }
  if (!ok) {
    throw NotPsdError("sample: covariance is not positive semi-definite within jitter tolerance");
  }

  NormalSampler normals(seed);
  Eigen::VectorXd z(n);
  for (int i = 0; i < n; ++i) z[i] = normals.next();
  return g.mean + l * z;
}

}  // namespace probspline
