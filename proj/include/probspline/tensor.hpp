/**
 * @file tensor.hpp
 * @brief Tensor-product B-spline Gaussian priors for bivariate fields
 *        u(x, t): evaluation, mixed-partial coefficient operators, and joint
 *        Gaussian laws over field and derivative values.
 *
 * A mixed partial of a tensor spline is again a tensor spline: applying the
 * per-axis derivative operators to the coefficient matrix drops each axis to
 * a lower order. Under iid N(0, sigma^2) coefficients the covariance of any
 * collection of field/derivative values is sigma^2 R R^T, where each design
 * row is the outer product of per-axis rows flattened x-major (space index
 * outer, time index inner). Disjoint supports on either axis give exact
 * zeros, so covariances on sorted product grids are banded.
 */
#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "probspline/bspline.hpp"
#include "probspline/errors.hpp"
#include "probspline/gaussian.hpp"

namespace probspline {

/// Per-axis knot vectors for the space (x) and time (t) axes.
struct TensorBasis {
  KnotVector kx;
  KnotVector kt;
};

/// Coefficient matrix theta(j1, j2), shape J_x x J_t.
using TensorCoefficients = Eigen::MatrixXd;

/// Linear map on coefficient matrices realizing a mixed partial
/// d^{rx+rt} / dx^{rx} dt^{rt}, with the reduced basis it maps into.
struct MixedPartialOperator {
  Eigen::MatrixXd dx;  ///< (J_x - rx) x J_x iterated x-derivative map
  Eigen::MatrixXd dt;  ///< (J_t - rt) x J_t iterated t-derivative map
  TensorBasis reduced_basis;

  [[nodiscard]] TensorCoefficients apply(const TensorCoefficients& c) const {
    return dx * c * dt.transpose();
  }
};

/// Field value b_x(x)^T theta b_t(t).
[[nodiscard]] inline double tensor_eval(const TensorBasis& tb, const TensorCoefficients& coeffs,
                                        double x, double t) {
  if (coeffs.rows() != tb.kx.basis_count() || coeffs.cols() != tb.kt.basis_count()) {
    throw DimensionError("tensor_eval: coefficient shape does not match the basis");
  }
  const Eigen::VectorXd bx = eval_basis(tb.kx, x);
  const Eigen::VectorXd bt = eval_basis(tb.kt, t);
  return bx.dot(coeffs * bt);
}

namespace detail {

/// Iterated derivative map of order r on one axis, with the reduced knots.
inline std::pair<Eigen::MatrixXd, KnotVector> axis_derivative(const KnotVector& kv, int r) {
  Eigen::MatrixXd d = Eigen::MatrixXd::Identity(kv.basis_count(), kv.basis_count());
  KnotVector current = kv;
  for (int i = 0; i < r; ++i) {
    DerivativeOperator op = derivative_operator(current);
    d = (op.matrix * d).eval();
    current = std::move(op.target_knots);
  }
  return {std::move(d), std::move(current)};
}

}  // namespace detail

/// Coefficient map c -> Dx^{rx} c (Dt^{rt})^T together with the basis of
/// orders (q_x - rx, q_t - rt). Requires rx < q_x and rt < q_t.
[[nodiscard]] inline MixedPartialOperator mixed_partial_operator(const TensorBasis& tb, int rx, int rt) {
  if (rx < 0 || rt < 0) {
    throw ValidationError("mixed_partial_operator: derivative orders must be non-negative");
  }
  if (rx >= tb.kx.order || rt >= tb.kt.order) {
    throw DerivativeUndefinedError("mixed_partial_operator: derivative order must stay below the axis order");
  }
  MixedPartialOperator op;
  auto [dx, kx_red] = detail::axis_derivative(tb.kx, rx);
  auto [dt, kt_red] = detail::axis_derivative(tb.kt, rt);
  op.dx = std::move(dx);
  op.dt = std::move(dt);
  op.reduced_basis = TensorBasis{std::move(kx_red), std::move(kt_red)};
  return op;
}

/// Flattened design row (x-major) of the (rx, rt) mixed partial at (x, t):
/// entry (j1 * J_t + j2) is (Dx^T b_x)(j1) * (Dt^T b_t)(j2) with the reduced
/// per-axis bases evaluated at the point.
[[nodiscard]] inline Eigen::VectorXd tensor_design_row(const TensorBasis& tb, double x, double t,
                                                       int rx, int rt) {
  const MixedPartialOperator op = mixed_partial_operator(tb, rx, rt);
  const Eigen::VectorXd gx = op.dx.transpose() * eval_basis(op.reduced_basis.kx, x);
  const Eigen::VectorXd gt = op.dt.transpose() * eval_basis(op.reduced_basis.kt, t);
  const int j_t = tb.kt.basis_count();
  Eigen::VectorXd row(tb.kx.basis_count() * j_t);
  for (int j1 = 0; j1 < gx.size(); ++j1) {
    for (int j2 = 0; j2 < j_t; ++j2) row[j1 * j_t + j2] = gx[j1] * gt[j2];
  }
  return row;
}

/// Zero-mean Gaussian of the requested field/derivative values under iid
/// N(0, sigma^2) coefficients. `derivative_orders` pairs with `points`; an
/// empty list means plain field values everywhere.
[[nodiscard]] inline GaussianVector joint_field_gaussian(
    const TensorBasis& tb, double prior_scale, const std::vector<std::pair<double, double>>& points,
    const std::vector<std::pair<int, int>>& derivative_orders = {}) {
  if (!(prior_scale > 0.0)) {
    throw ValidationError("joint_field_gaussian: prior scale must be positive");
  }
  if (!derivative_orders.empty() && derivative_orders.size() != points.size()) {
    throw DimensionError("joint_field_gaussian: derivative order list must pair with points");
  }
  const int n = static_cast<int>(points.size());
  Eigen::MatrixXd design(n, tb.kx.basis_count() * tb.kt.basis_count());
  for (int i = 0; i < n; ++i) {
    const auto [rx, rt] = derivative_orders.empty() ? std::pair<int, int>{0, 0}
                                                    : derivative_orders[static_cast<std::size_t>(i)];
    design.row(i) = tensor_design_row(tb, points[static_cast<std::size_t>(i)].first,
                                      points[static_cast<std::size_t>(i)].second, rx, rt)
                        .transpose();
  }
  GaussianVector g;
  g.mean = Eigen::VectorXd::Zero(n);
  g.cov = prior_scale * (design * design.transpose());
  g.cov = 0.5 * (g.cov + g.cov.transpose()).eval();
  return g;
}

}  // namespace probspline
