/**
 * @file bspline.hpp
 * @brief Clamped B-spline bases: knot construction, basis and spline
 *        evaluation, and the derivative coefficient operator.
 *
 * A basis of order q (degree q-1) with J functions lives on a clamped knot
 * sequence tau_1 <= ... <= tau_{J+q} whose first and last q knots repeat the
 * domain endpoints. Differentiating a spline in this basis yields a spline
 * of order q-1 on the same sequence with the first and last knot dropped;
 * the coefficient map is a banded two-entry-per-row matrix, so a Gaussian
 * law on the coefficients induces a joint Gaussian on (u, u').
 */
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <string>
#include <vector>

#include "probspline/errors.hpp"

namespace probspline {

/// Clamped non-decreasing knot sequence defining a B-spline basis.
struct KnotVector {
  int order = 0;               ///< q = degree + 1
  std::vector<double> knots;   ///< size J + q, non-decreasing
  double domain_length = 0.0;  ///< L; knots live in [0, L]

  /// Number of basis functions J.
  [[nodiscard]] int basis_count() const {
    return static_cast<int>(knots.size()) - order;
  }
};

/// Derivative coefficient map: c -> Dc expresses d/dt of an order-q spline
/// in the order-(q-1) basis on target_knots. Each row of D has two adjacent
/// nonzeros and sums to zero.
struct DerivativeOperator {
  Eigen::MatrixXd matrix;  ///< (J-1) x J
  KnotVector target_knots;
};

/// Builds q repeated knots at 0 and L with J - q uniformly spaced interior
/// knots. Requires J >= q >= 1 and domain_length > 0.
[[nodiscard]] inline KnotVector make_clamped_knots(double domain_length, int basis_count, int order) {
  if (order < 1 || basis_count < order) {
    throw InvalidBasisError("make_clamped_knots: need J >= q >= 1, got J=" +
                            std::to_string(basis_count) + " q=" + std::to_string(order));
  }
  if (!(domain_length > 0.0)) {
    throw InvalidDomainError("make_clamped_knots: domain length must be positive");
  }
  KnotVector kv;
  kv.order = order;
  kv.domain_length = domain_length;
  kv.knots.reserve(static_cast<std::size_t>(basis_count + order));
  for (int i = 0; i < order; ++i) kv.knots.push_back(0.0);
  const int interior = basis_count - order;
  const double spacing = domain_length / static_cast<double>(interior + 1);
  for (int i = 1; i <= interior; ++i) kv.knots.push_back(spacing * static_cast<double>(i));
  for (int i = 0; i < order; ++i) kv.knots.push_back(domain_length);
  return kv;
}

namespace detail {

/// Index of the order-1 indicator that is active at t. The last nonempty
/// span is treated as closed so evaluation at t = L is left-continuous.
[[nodiscard]] inline int active_span(const KnotVector& kv, double t) {
  const auto& tau = kv.knots;
  if (t >= kv.domain_length) {
    int j = static_cast<int>(tau.size()) - 1;
    while (j > 0 && tau[static_cast<std::size_t>(j - 1)] >= kv.domain_length) --j;
    return j - 1;
  }
  auto it = std::upper_bound(tau.begin(), tau.end(), t);
  return static_cast<int>(it - tau.begin()) - 1;
}

}  // namespace detail

/// Evaluates all J basis functions at t in [0, L] via the two-term recursion
/// on orders 1..q (0/0 terms are taken as 0). The result has at most q
/// nonzero entries and sums to 1.
[[nodiscard]] inline Eigen::VectorXd eval_basis(const KnotVector& kv, double t) {
  if (t < 0.0 || t > kv.domain_length) {
    throw OutOfDomainError("eval_basis: t=" + std::to_string(t) + " outside [0, " +
                           std::to_string(kv.domain_length) + "]");
  }
  const auto& tau = kv.knots;
  const int j_count = kv.basis_count();
  const int order1_count = j_count + kv.order - 1;

  std::vector<double> b(static_cast<std::size_t>(order1_count), 0.0);
  b[static_cast<std::size_t>(detail::active_span(kv, t))] = 1.0;

  for (int k = 2; k <= kv.order; ++k) {
    const int count = j_count + kv.order - k;
    for (int j = 0; j < count; ++j) {
      const double left_den = tau[static_cast<std::size_t>(j + k - 1)] - tau[static_cast<std::size_t>(j)];
      const double right_den = tau[static_cast<std::size_t>(j + k)] - tau[static_cast<std::size_t>(j + 1)];
      const double left = left_den > 0.0 ? (t - tau[static_cast<std::size_t>(j)]) / left_den * b[static_cast<std::size_t>(j)] : 0.0;
      const double right = right_den > 0.0
                               ? (tau[static_cast<std::size_t>(j + k)] - t) / right_den * b[static_cast<std::size_t>(j + 1)]
                               : 0.0;
      b[static_cast<std::size_t>(j)] = left + right;
    }
  }

  Eigen::VectorXd out(j_count);
  for (int j = 0; j < j_count; ++j) out[j] = b[static_cast<std::size_t>(j)];
  return out;
}

/// Spline value sum_j c_j B_{j,q}(t).
[[nodiscard]] inline double eval_spline(const KnotVector& kv, const Eigen::VectorXd& coeffs, double t) {
  if (coeffs.size() != kv.basis_count()) {
    throw DimensionError("eval_spline: coefficient length " + std::to_string(coeffs.size()) +
                         " does not match basis count " + std::to_string(kv.basis_count()));
  }
  return eval_basis(kv, t).dot(coeffs);
}

/// Greville abscissae xi_j = (tau_{j+1} + ... + tau_{j+q-1}) / (q-1).
/// Using them as coefficients reproduces u(t) = t. Requires q >= 2.
[[nodiscard]] inline Eigen::VectorXd greville_abscissae(const KnotVector& kv) {
  if (kv.order < 2) {
    throw InvalidBasisError("greville_abscissae: requires order q >= 2");
  }
  const int j_count = kv.basis_count();
  Eigen::VectorXd xi(j_count);
  for (int j = 0; j < j_count; ++j) {
    double s = 0.0;
    for (int m = 1; m <= kv.order - 1; ++m) s += kv.knots[static_cast<std::size_t>(j + m)];
    xi[j] = s / static_cast<double>(kv.order - 1);
  }
  return xi;
}

/// Coefficient operator D with rows D[j,j] = -(q-1)/delta_j,
/// D[j,j+1] = +(q-1)/delta_j, delta_j = tau_{j+q} - tau_{j+1}, paired with
/// the order-(q-1) basis on the knot sequence with first and last knot
/// dropped: d/dt sum_j c_j B_{j,q} = sum_j (Dc)_j B_{j,q-1}.
[[nodiscard]] inline DerivativeOperator derivative_operator(const KnotVector& kv) {
  if (kv.order < 2) {
    throw DerivativeUndefinedError("derivative_operator: order-1 splines are piecewise constant");
  }
  const int j_count = kv.basis_count();
  DerivativeOperator op;
  op.matrix = Eigen::MatrixXd::Zero(j_count - 1, j_count);
  for (int j = 0; j < j_count - 1; ++j) {
    const double delta = kv.knots[static_cast<std::size_t>(j + kv.order)] - kv.knots[static_cast<std::size_t>(j + 1)];
    if (!(delta > 0.0)) {
      throw InvalidBasisError("derivative_operator: zero knot span at row " + std::to_string(j));
    }
    const double w = static_cast<double>(kv.order - 1) / delta;
    op.matrix(j, j) = -w;
    op.matrix(j, j + 1) = w;
  }
  op.target_knots.order = kv.order - 1;
  op.target_knots.domain_length = kv.domain_length;
  op.target_knots.knots.assign(kv.knots.begin() + 1, kv.knots.end() - 1);
  return op;
}

}  // namespace probspline
