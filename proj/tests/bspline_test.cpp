#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "probspline/bspline.hpp"
#include "support/oracles.hpp"

using namespace probspline;

TEST_CASE("make_clamped_knots places uniform interior knots") {
  const KnotVector a = make_clamped_knots(1.0, 4, 4);
  REQUIRE(a.knots == std::vector<double>{0, 0, 0, 0, 1, 1, 1, 1});

  const KnotVector b = make_clamped_knots(1.0, 5, 4);
  REQUIRE(b.knots == std::vector<double>{0, 0, 0, 0, 0.5, 1, 1, 1, 1});

  const KnotVector c = make_clamped_knots(2.0, 6, 2);
  REQUIRE(c.knots.size() == 8);
  REQUIRE(c.knots[0] == 0.0);
  REQUIRE(c.knots[1] == 0.0);
  for (int i = 2; i <= 5; ++i) {
    REQUIRE(c.knots[static_cast<std::size_t>(i)] == Catch::Approx(0.4 * (i - 1)).margin(1e-15));
  }
  REQUIRE(c.knots[6] == 2.0);
  REQUIRE(c.knots[7] == 2.0);
  REQUIRE(c.basis_count() == 6);
}

TEST_CASE("make_clamped_knots rejects bad shapes") {
  REQUIRE_THROWS_AS(make_clamped_knots(1.0, 3, 4), InvalidBasisError);
  REQUIRE_THROWS_AS(make_clamped_knots(0.0, 4, 2), InvalidDomainError);
  REQUIRE_THROWS_AS(make_clamped_knots(-1.0, 4, 2), InvalidDomainError);
  REQUIRE_THROWS_AS(make_clamped_knots(1.0, 2, 0), InvalidBasisError);
}

TEST_CASE("eval_basis: hat function peaks at its knot") {
  const KnotVector kv = make_clamped_knots(1.0, 3, 2);
  const Eigen::VectorXd b = eval_basis(kv, 0.5);
  REQUIRE(b[0] == Catch::Approx(0.0).margin(1e-15));
  REQUIRE(b[1] == Catch::Approx(1.0).margin(1e-15));
  REQUIRE(b[2] == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("eval_basis matches the cubic Bernstein oracle on one span") {
  const KnotVector kv = make_clamped_knots(1.0, 4, 4);
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    const double t = i == 0 ? 0.5 : u(gen);
    const Eigen::VectorXd b = eval_basis(kv, t);
    const auto ref = oracles::bernstein_cubic(t);
    for (int j = 0; j < 4; ++j) {
      REQUIRE(b[j] == Catch::Approx(ref[static_cast<std::size_t>(j)]).margin(1e-14));
    }
  }
  const Eigen::VectorXd mid = eval_basis(kv, 0.5);
  REQUIRE(mid[0] == Catch::Approx(0.125).margin(1e-15));
  REQUIRE(mid[1] == Catch::Approx(0.375).margin(1e-15));
  REQUIRE(mid[2] == Catch::Approx(0.375).margin(1e-15));
  REQUIRE(mid[3] == Catch::Approx(0.125).margin(1e-15));
}

TEST_CASE("partition of unity over 1000 random points, orders 2..5") {
  std::mt19937 gen(7);
  for (int q = 2; q <= 5; ++q) {
    const KnotVector kv = make_clamped_knots(1.5, q + 6, q);
    std::uniform_real_distribution<double> u(0.0, 1.5);
    for (int i = 0; i < 1000; ++i) {
      const double t = u(gen);
      REQUIRE(std::abs(eval_basis(kv, t).sum() - 1.0) <= 1e-12);
    }
    REQUIRE(std::abs(eval_basis(kv, 0.0).sum() - 1.0) <= 1e-12);
    REQUIRE(std::abs(eval_basis(kv, 1.5).sum() - 1.0) <= 1e-12);
  }
}

TEST_CASE("clamped endpoints load a single basis function") {
  const KnotVector kv = make_clamped_knots(2.0, 9, 4);
  const Eigen::VectorXd b0 = eval_basis(kv, 0.0);
  REQUIRE(b0[0] == 1.0);
  REQUIRE(b0.sum() == Catch::Approx(1.0).margin(1e-15));
  const Eigen::VectorXd bL = eval_basis(kv, 2.0);
  REQUIRE(bL[8] == 1.0);
  REQUIRE(bL.head(8).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("local support: basis vanishes exactly outside its knot span") {
  const KnotVector kv = make_clamped_knots(1.0, 8, 3);
  const int j_count = kv.basis_count();
  for (int i = 0; i <= 400; ++i) {
    const double t = i / 400.0;
    const Eigen::VectorXd b = eval_basis(kv, t);
    for (int j = 0; j < j_count; ++j) {
      const bool inside =
          oracles::basis_positive_at(kv.knots, kv.order, j, t, kv.domain_length);
      if (!inside) {
        REQUIRE(b[j] == 0.0);
      } else {
        REQUIRE(b[j] > 0.0);
      }
    }
  }
}

TEST_CASE("eval_basis rejects out-of-domain points") {
  const KnotVector kv = make_clamped_knots(1.0, 5, 3);
  REQUIRE_THROWS_AS(eval_basis(kv, -0.01), OutOfDomainError);
  REQUIRE_THROWS_AS(eval_basis(kv, 1.01), OutOfDomainError);
}

TEST_CASE("eval_spline reproduces constants and zeros") {
  const KnotVector kv = make_clamped_knots(1.0, 7, 4);
  const Eigen::VectorXd c = Eigen::VectorXd::Constant(7, 3.7);
  const Eigen::VectorXd z = Eigen::VectorXd::Zero(7);
  for (const double t : {0.0, 0.123, 0.5, 0.77, 1.0}) {
    REQUIRE(eval_spline(kv, c, t) == Catch::Approx(3.7).margin(1e-13));
    REQUIRE(eval_spline(kv, z, t) == 0.0);
  }
}

TEST_CASE("Greville coefficients reproduce the identity") {
  std::mt19937 gen(3);
  for (int q = 2; q <= 5; ++q) {
    const KnotVector kv = make_clamped_knots(1.0, q + 4, q);
    const Eigen::VectorXd xi = greville_abscissae(kv);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
      const double t = i == 0 ? 0.3 : u(gen);
      REQUIRE(std::abs(eval_spline(kv, xi, t) - t) <= 1e-12);
    }
  }
}

TEST_CASE("eval_spline validates coefficient length") {
  const KnotVector kv = make_clamped_knots(1.0, 6, 3);
  REQUIRE_THROWS_AS(eval_spline(kv, Eigen::VectorXd::Zero(5), 0.5), DimensionError);
}

TEST_CASE("derivative_operator structure: banded rows summing to zero") {
  const KnotVector kv = make_clamped_knots(2.0, 9, 4);
  const DerivativeOperator op = derivative_operator(kv);
  REQUIRE(op.matrix.rows() == 8);
  REQUIRE(op.matrix.cols() == 9);
  for (int j = 0; j < op.matrix.rows(); ++j) {
    for (int k = 0; k < op.matrix.cols(); ++k) {
      if (k != j && k != j + 1) REQUIRE(op.matrix(j, k) == 0.0);
    }
    REQUIRE(op.matrix(j, j) + op.matrix(j, j + 1) == 0.0);
    REQUIRE(op.matrix(j, j + 1) > 0.0);
  }
  // target basis: same knots with first and last dropped, order q-1
  REQUIRE(op.target_knots.order == 3);
  REQUIRE(op.target_knots.basis_count() == 8);
  REQUIRE(op.target_knots.knots.front() == 0.0);
  REQUIRE(op.target_knots.knots.back() == 2.0);
  for (std::size_t i = 0; i < op.target_knots.knots.size(); ++i) {
    REQUIRE(op.target_knots.knots[i] == kv.knots[i + 1]);
  }
}

TEST_CASE("derivative_operator annihilates constants exactly") {
  const KnotVector kv = make_clamped_knots(1.0, 8, 4);
  const DerivativeOperator op = derivative_operator(kv);
  const Eigen::VectorXd dc = op.matrix * Eigen::VectorXd::Constant(8, 4.2);
  REQUIRE(dc.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("derivative of the identity spline has all-ones coefficients") {
  const KnotVector kv = make_clamped_knots(1.0, 5, 4);
  const DerivativeOperator op = derivative_operator(kv);
  const Eigen::VectorXd dc = op.matrix * greville_abscissae(kv);
  REQUIRE(dc.size() == 4);
  for (int j = 0; j < 4; ++j) {
    REQUIRE(dc[j] == Catch::Approx(1.0).margin(1e-13));
  }
}

TEST_CASE("derivative_operator rejects order-1 bases") {
  const KnotVector kv = make_clamped_knots(1.0, 4, 1);
  REQUIRE_THROWS_AS(derivative_operator(kv), DerivativeUndefinedError);
}

TEST_CASE("derivative identity against the central finite-difference oracle") {
  const KnotVector kv = make_clamped_knots(1.0, 8, 4);
  const DerivativeOperator op = derivative_operator(kv);
  std::mt19937 gen(42);
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_real_distribution<double> interior(0.05, 0.95);
  const double h = 1e-4;

  for (int rep = 0; rep < 100; ++rep) {
    Eigen::VectorXd c(8);
    for (int j = 0; j < 8; ++j) c[j] = coeff(gen);
    const Eigen::VectorXd dc = op.matrix * c;
    const auto spline = [&](double t) { return eval_spline(kv, c, t); };
    for (int k = 0; k < 100; ++k) {
      const double t = interior(gen);
      const double lhs = eval_spline(op.target_knots, dc, t);
      const double fd = oracles::central_diff(spline, t, h);
      REQUIRE(std::abs(lhs - fd) <= 1e-5 * std::max({1.0, std::abs(lhs), std::abs(fd)}));
    }
  }
}
