/**
 * @file grid.hpp
 * @brief Quasi-uniform interrogation grids on (0, L].
 *
 * A grid t_1 < ... < t_N is quasi-uniform with constant C when the largest
 * increment is at most C times the smallest, counting t_0 = 0 as the left
 * endpoint of the first increment.
 */
#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "probspline/errors.hpp"
#include "probspline/rng.hpp"

namespace probspline {

/// Sorted grid points in (0, L] together with the quasi-uniformity bound
/// they were generated under.
struct GridSpec {
  std::vector<double> points;
  double c_target = 1.0;
};

/// Ratio of the largest to the smallest increment, with t_0 = 0.
[[nodiscard]] inline double quasi_uniformity_constant(const GridSpec& grid) {
  if (grid.points.size() < 2) {
    throw DegenerateGridError("quasi_uniformity_constant: need at least two grid points");
  }
  double prev = 0.0;
  double h_max = 0.0;
  double h_min = std::numeric_limits<double>::infinity();
  for (const double t : grid.points) {
    const double inc = t - prev;
    if (!(inc > 0.0)) {
      throw DegenerateGridError("quasi_uniformity_constant: duplicate or decreasing grid points");
    }
    h_max = std::max(h_max, inc);
    h_min = std::min(h_min, inc);
    prev = t;
  }
  return h_max / h_min;
}

/// Largest increment of the grid (t_0 = 0 included).
[[nodiscard]] inline double max_increment(const GridSpec& grid) {
  double prev = 0.0;
  double h = 0.0;
  for (const double t : grid.points) {
    h = std::max(h, t - prev);
    prev = t;
  }
  return h;
}

/// N points in (0, L]: uniform increments L/N, each scaled by a seeded
/// multiplicative jitter in [C^{-1/2}, C^{1/2}], then renormalized so the
/// points end exactly at L. The max/min increment ratio is bounded by C by
/// construction; C = 1 returns the exact uniform grid.
[[nodiscard]] inline GridSpec make_quasi_uniform_grid(int n, double length, double c_bound,
                                                      std::uint64_t seed) {
  if (c_bound < 1.0) {
    throw InvalidBoundError("make_quasi_uniform_grid: quasi-uniformity bound must be >= 1, got " +
                            std::to_string(c_bound));
  }
  if (n < 2) {
    throw DegenerateGridError("make_quasi_uniform_grid: need at least two points");
  }
  if (!(length > 0.0)) {
    throw InvalidDomainError("make_quasi_uniform_grid: domain length must be positive");
  }

  std::vector<double> increments(static_cast<std::size_t>(n), length / static_cast<double>(n));
  if (c_bound > 1.0) {
    SplitMix64 gen(seed);
    for (double& inc : increments) {
      inc *= std::pow(c_bound, gen.next_uniform() - 0.5);
    }
  }

  double total = 0.0;
  std::vector<double> prefix(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    total += increments[static_cast<std::size_t>(i)];
    prefix[static_cast<std::size_t>(i)] = total;
  }

  GridSpec grid;
  grid.c_target = c_bound;
  grid.points.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    grid.points[static_cast<std::size_t>(i)] = length * prefix[static_cast<std::size_t>(i)] / total;
  }
  grid.points.back() = length;
  return grid;
}

}  // namespace probspline
