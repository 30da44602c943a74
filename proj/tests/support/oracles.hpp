/**
 * @file oracles.hpp
 * @brief Test-only reference computations, kept independent of the library
 *        implementation paths they check.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <vector>

namespace oracles {

/// Degree-3 Bernstein basis on [0, 1]: the order-4 clamped B-spline basis on
/// a single span equals this exactly.
inline std::vector<double> bernstein_cubic(double t) {
  const double s = 1.0 - t;
  return {s * s * s, 3.0 * t * s * s, 3.0 * t * t * s, t * t * t};
}

/// Central finite difference (f(t+h) - f(t-h)) / (2h).
inline double central_diff(const std::function<double(double)>& f, double t, double h) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

/// Dense brute-force covariance assembly: sigma^2 * sum_k rows[i][k] rows[j][k],
/// entry by entry with plain loops.
inline std::vector<std::vector<double>> brute_force_covariance(
    const std::vector<std::vector<double>>& rows, double sigma_sq) {
  const std::size_t n = rows.size();
  std::vector<std::vector<double>> cov(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < rows[i].size(); ++k) s += rows[i][k] * rows[j][k];
      cov[i][j] = sigma_sq * s;
    }
  }
  return cov;
}

/// Whether basis function j (0-based) of an order-q basis on `knots` is
/// strictly positive at t: t inside the open support (tau_j, tau_{j+q}),
/// closed at a clamped domain endpoint.
inline bool basis_positive_at(const std::vector<double>& knots, int q, int j, double t,
                              double domain_length) {
  const double lo = knots[static_cast<std::size_t>(j)];
  const double hi = knots[static_cast<std::size_t>(j + q)];
  if (t > lo && t < hi) return true;
  if (t == 0.0 && lo == 0.0 && hi > 0.0) return true;
  if (t == domain_length && hi == domain_length && lo < domain_length) return true;
  return false;
}

/// Support-overlap bandwidth bound from knot/grid geometry alone: the largest
/// |i - j| over point pairs that lie inside a common basis support. Under a
/// diagonal coefficient prior this is the exact bandwidth of Cov(u, u).
inline int support_overlap_bandwidth(const std::vector<double>& knots, int q,
                                     const std::vector<double>& points, double domain_length) {
  const int j_count = static_cast<int>(knots.size()) - q;
  const int n = static_cast<int>(points.size());
  int band = 0;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      bool shared = false;
      for (int j = 0; j < j_count && !shared; ++j) {
        shared = basis_positive_at(knots, q, j, points[static_cast<std::size_t>(a)], domain_length) &&
                 basis_positive_at(knots, q, j, points[static_cast<std::size_t>(b)], domain_length);
      }
      if (shared) band = std::max(band, b - a);
    }
  }
  return band;
}

/// Kronecker product assembled with plain loops.
inline std::vector<std::vector<double>> kron(const std::vector<std::vector<double>>& a,
                                             const std::vector<std::vector<double>>& b) {
  const std::size_t ar = a.size(), ac = a[0].size();
  const std::size_t br = b.size(), bc = b[0].size();
  std::vector<std::vector<double>> out(ar * br, std::vector<double>(ac * bc, 0.0));
  for (std::size_t i = 0; i < ar; ++i) {
    for (std::size_t j = 0; j < ac; ++j) {
      for (std::size_t k = 0; k < br; ++k) {
        for (std::size_t l = 0; l < bc; ++l) {
          out[i * br + k][j * bc + l] = a[i][j] * b[k][l];
        }
      }
    }
  }
  return out;
}

}  // namespace oracles
