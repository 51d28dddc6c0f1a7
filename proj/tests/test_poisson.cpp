#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "latlab/counting.hpp"
#include "latlab/domain.hpp"
#include "latlab/numerics.hpp"
#include "latlab/poisson.hpp"

using namespace latlab;

TEST_CASE("epsilon schedule") {
  CHECK(epsilon_schedule(3, 16.0) == doctest::Approx(0.25));
  CHECK(epsilon_schedule(3, 1.0) == doctest::Approx(1.0));
  CHECK(epsilon_schedule(5, 64.0) == doctest::Approx(0.0625));
  CHECK_THROWS(epsilon_schedule(3, 0.5));
}

TEST_CASE("mollifier kernel properties") {
  auto ball = builtin_spec("ball-d3");
  auto mol = make_mollifier(ball);
  CHECK(mol.d == 3);
  CHECK(mol.order == 8);
  CHECK(mol.support_radius > 0.0);
  CHECK(mol.rho_hat1(0.0) == doctest::Approx(1.0));
  std::vector<double> zero(3, 0.0);
  CHECK(mol.rho_hat(zero) == doctest::Approx(1.0));

  // unit mass, nonnegativity, compact support
  double mass = tanh_sinh(
      [&](double x) { return mol.rho1(x); }, -mol.support_radius,
      mol.support_radius);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
  for (double x = -mol.support_radius; x <= mol.support_radius; x += 0.01)
    CHECK(mol.rho1(x) >= 0.0);
  CHECK(mol.rho1(mol.support_radius * 1.0001) == 0.0);
  CHECK(mol.cdf1(-mol.support_radius) == doctest::Approx(0.0));
  CHECK(mol.cdf1(mol.support_radius) == doctest::Approx(1.0));
  CHECK(mol.cdf1(0.0) == doctest::Approx(0.5));

  // per-axis transform decay
  CHECK(std::abs(mol.rho_hat1(40.0)) < 1e-4);

  // the kernel cube fits inside D, so the sandwich argument applies
  std::vector<double> corner(3, mol.support_radius);
  CHECK(eval_F(ball, corner) <= 0.0);
}

TEST_CASE("smoothed count approaches the exact count as eps -> 0") {
  auto ball = builtin_spec("ball-d3");
  auto mol = make_mollifier(ball);
  // 5/2 keeps lattice points off the boundary sphere
  Rational t(5, 2);
  double exact =
      static_cast<double>(count_lattice_points(ball, t).get_si());
  double smoothed = smoothed_count(ball, t.to_double(), 1e-3, mol, 2);
  CHECK(std::abs(smoothed - exact) < 0.01);
}

TEST_CASE("tiny scales see only the origin") {
  for (const auto& name : {"ball-d3", "kn-m2k4"}) {
    auto spec = builtin_spec(name);
    auto mol = make_mollifier(spec);
    CHECK(smoothed_count(spec, 0.5, 0.01, mol, 1) ==
          doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("sandwich ordering around the exact count") {
  auto ball = builtin_spec("ball-d3");
  auto mol = make_mollifier(ball);
  const double t = 2.0, eps = 0.25;
  double lower = smoothed_count(ball, t - eps, eps, mol, 2);
  double upper = smoothed_count(ball, t + eps, eps, mol, 2);
  double exact =
      static_cast<double>(count_lattice_points(ball, Rational(2, 1)).get_si());
  CHECK(lower <= exact + 1e-9);
  CHECK(exact <= upper + 1e-9);
  CHECK(upper - lower >= 0.0);
}

TEST_CASE("frequency sum: zero mode carries the volume term") {
  auto ball = builtin_spec("ball-d3");
  FtEngine engine(ball);
  std::vector<double> e1 = {1.0, 0.0, 0.0};
  const double t = 2.0;
  CHECK(std::pow(t, 3) * engine.ft(e1, 0.0) ==
        doctest::Approx(volume(ball) * std::pow(t, 3)).epsilon(1e-8));
  auto mol = make_mollifier(ball);
  std::vector<double> zero(3, 0.0);
  CHECK(mol.rho_hat(zero) == doctest::Approx(1.0));
  CHECK_THROWS(poisson_rhs(ball, engine, t, 0.25, mol, 0));
}

TEST_CASE("poisson identity cross-validates both sides") {
  auto ball = builtin_spec("ball-d3");
  auto verdict = poisson_check(ball, Rational(2, 1), 8, 8, 2);
  CHECK(verdict.sandwich_ok);
  CHECK(verdict.poisson_ok);
  CHECK(verdict.pass);
  CHECK(verdict.poisson_gap <= verdict.tail_bound + verdict.quad_tol);
  CHECK(verdict.exact == "33");
  CHECK(verdict.rhs_minus <= std::stod(verdict.exact) + 1e-9);
  CHECK(std::stod(verdict.exact) <= verdict.rhs_plus + 1e-9);
  auto json = poisson_json(verdict);
  CHECK(json.find("\"pass\":true") != std::string::npos);
  CHECK(json.find("\"exact\":\"33\"") != std::string::npos);
}
