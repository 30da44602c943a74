/**
 * @file problems.hpp
 * @brief Built-in ODE catalog with closed-form solutions.
 *
 * Fields apply componentwise, so every problem works for any state
 * dimension d = len(u0). Keeping the catalog in code (rather than parsing
 * expressions at runtime) keeps field evaluation pure and auditable.
 */
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <string>

#include "probspline/errors.hpp"
#include "probspline/solver.hpp"

namespace probspline {

/// Names: "constant" (u' = 0), "linear-decay" (u' = -theta1 u),
/// "forced" (u' = 1), "logistic" (u' = theta1 u (1 - u / theta2)).
[[nodiscard]] inline OdeProblem make_builtin_problem(const std::string& name,
                                                     const Eigen::VectorXd& theta,
                                                     const Eigen::VectorXd& u0,
                                                     double domain_length) {
  OdeProblem p;
  p.theta = theta;
  p.u0 = u0;
  p.domain_length = domain_length;
  if (u0.size() < 1) {
    throw ValidationError("problem: u0 must have at least one component");
  }

  if (name == "constant") {
    p.field = [](double, const Eigen::VectorXd& u, const Eigen::VectorXd&) {
      return Eigen::VectorXd::Zero(u.size()).eval();
    };
  } else if (name == "linear-decay") {
    if (theta.size() != 1) {
      throw ValidationError("problem linear-decay: needs exactly one parameter");
    }
    p.field = [](double, const Eigen::VectorXd& u, const Eigen::VectorXd& th) {
      return (-th[0] * u).eval();
    };
  } else if (name == "forced") {
    p.field = [](double, const Eigen::VectorXd& u, const Eigen::VectorXd&) {
      return Eigen::VectorXd::Ones(u.size()).eval();
    };
  } else if (name == "logistic") {
    if (theta.size() != 2) {
      throw ValidationError("problem logistic: needs exactly two parameters (rate, capacity)");
    }
    if (theta[1] == 0.0) {
      throw ValidationError("problem logistic: capacity must be nonzero");
    }
    p.field = [](double, const Eigen::VectorXd& u, const Eigen::VectorXd& th) {
      return (th[0] * u.array() * (1.0 - u.array() / th[1])).matrix().eval();
    };
  } else {
    throw ValidationError("problem: unknown name '" + name + "'");
  }
  return p;
}

/// Closed-form solution of the named problem, componentwise in u0.
[[nodiscard]] inline std::function<Eigen::VectorXd(double)> builtin_analytic(
    const std::string& name, const Eigen::VectorXd& theta, const Eigen::VectorXd& u0) {
  if (name == "constant") {
    return [u0](double) { return u0; };
  }
  if (name == "linear-decay") {
    return [u0, theta](double t) { return (u0.array() * std::exp(-theta[0] * t)).matrix().eval(); };
  }
  if (name == "forced") {
    return [u0](double t) { return (u0.array() + t).matrix().eval(); };
  }
  if (name == "logistic") {
    return [u0, theta](double t) {
      const double e = std::exp(-theta[0] * t);
      Eigen::VectorXd out(u0.size());
      for (int i = 0; i < u0.size(); ++i) {
        out[i] = theta[1] * u0[i] / (u0[i] + (theta[1] - u0[i]) * e);
      }
      return out;
    };
  }
  throw ValidationError("problem: unknown name '" + name + "'");
}

}  // namespace probspline
