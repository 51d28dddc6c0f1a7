#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "latlab/domain.hpp"
#include "latlab/fourier.hpp"
#include "latlab/numerics.hpp"

using namespace latlab;

namespace {
constexpr double kPi = std::numbers::pi;

double ball_ft(double t) {
  // closed-form transform of the unit-ball indicator in R^3
  if (t < 1e-8) return 4.0 * kPi / 3.0;
  const double w = 2.0 * kPi * t;
  return (std::sin(w) - w * std::cos(w)) / (2.0 * kPi * kPi * t * t * t);
}

std::vector<double> unit(std::vector<double> v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  for (double& x : v) x /= n;
  return v;
}
}  // namespace

TEST_CASE("axis slice areas") {
  auto ball = builtin_spec("ball-d3");
  std::vector<double> e1 = {1.0, 0.0, 0.0};
  CHECK(slice_area(ball, e1, 0.0) == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(slice_area(ball, e1, 0.5) ==
        doctest::Approx(kPi * 0.75).epsilon(1e-10));
  CHECK(slice_area(ball, e1, 1.5) == 0.0);

  auto ss4 = builtin_spec("ss4-d3");
  const double a0 = 4.0 * gamma_fn(1.25) * gamma_fn(1.25) / gamma_fn(1.5);
  CHECK(slice_area(ss4, e1, 0.0) == doctest::Approx(a0).epsilon(1e-9));
  CHECK(a0 == doctest::Approx(3.708).epsilon(1e-3));
  // slice body scales like (1 - s^4)^{1/2} for the one-block omega=4 case
  CHECK(slice_area(ss4, e1, 0.5) ==
        doctest::Approx(a0 * std::sqrt(1.0 - 0.0625)).epsilon(1e-9));
}

TEST_CASE("generic slices agree with the axis reduction") {
  auto ball = builtin_spec("ball-d3");
  auto xi = unit({1.0, 2.0, -0.5});
  for (double s : {0.0, 0.3, 0.7}) {
    CHECK(slice_area(ball, xi, s) ==
          doctest::Approx(kPi * (1.0 - s * s)).epsilon(1e-6));
  }
}

TEST_CASE("slice profiles are continuous with vanishing endpoints") {
  auto kn = builtin_spec("kn-m2k4");
  auto profile = build_slice_profile(kn, unit({0.6, 0.5, 0.4}));
  CHECK(profile.h > 0.0);
  CHECK(profile.eval(profile.h * 0.999999) < 0.05);
  double prev = profile.eval(-profile.h);
  for (int i = 1; i <= 200; ++i) {
    double s = -profile.h + 2.0 * profile.h * i / 200.0;
    double cur = profile.eval(s);
    CHECK(cur >= 0.0);
    CHECK(std::abs(cur - prev) < 0.25);
    prev = cur;
  }
}

TEST_CASE("ball transform matches the closed form") {
  auto ball = builtin_spec("ball-d3");
  std::vector<double> e1 = {1.0, 0.0, 0.0};
  auto generic = unit({1.0, 1.0, 1.0});
  for (double t = 0.5; t <= 50.0; t *= 1.4) {
    CHECK(std::abs(ft_indicator(ball, e1, t).value - ball_ft(t)) < 1e-6);
    CHECK(std::abs(ft_indicator(ball, generic, t).value - ball_ft(t)) < 1e-6);
  }
  CHECK(ft_indicator(ball, e1, 1.0).value ==
        doctest::Approx(-1.0 / kPi).epsilon(1e-6));
}

TEST_CASE("transform at zero equals the volume") {
  for (const auto& spec : builtin_corpus()) {
    if (spec.d > 4) continue;
    std::vector<double> e1(spec.d, 0.0);
    e1[0] = 1.0;
    auto v = ft_indicator(spec, e1, 0.0);
    CHECK(std::abs(v.value - volume(spec)) <
          std::max(v.quad_error, 1e-8) + 1e-9);
  }
}

TEST_CASE("scaling identity") {
  auto ss6 = builtin_spec("ss6-d3");
  std::vector<double> e2 = {0.0, 1.0, 0.0};
  for (double t : {0.7, 2.0, 9.5}) {
    double lhs = ft_scaled(ss6, e2, t);
    double rhs = std::pow(t, 3) * ft_indicator(ss6, e2, t).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("theorem 2 bound branches") {
  auto ss4 = builtin_spec("ss4-d3");
  std::vector<double> e1 = {1.0, 0.0, 0.0};
  const double nu = ss4.table.nu[0];
  for (double t : {10.0, 100.0}) {
    CHECK(theorem2_bound(ss4, 0, e1, t) ==
          doctest::Approx(std::pow(t, -1.0 - nu)).epsilon(1e-12));
  }

  auto ball = builtin_spec("ball-d3");
  auto diag = unit({1.0, 1.0, 1.0});
  // omega = 2 kills the second-branch xi dependence: bound = t^{-1} t^{-(d-1)/2}
  CHECK(theorem2_bound(ball, 0, diag, 50.0) ==
        doctest::Approx(std::pow(50.0, -2.0)).epsilon(1e-12));

  auto kn = builtin_spec("kn-m2k4");
  const double t = 100.0;
  const double f =
      std::min(std::pow(t, -0.125),
               std::pow(t, -0.5) * std::pow(1.0 / std::sqrt(3.0), -3.0 / 7.0));
  CHECK(theorem2_bound(kn, 0, diag, t) ==
        doctest::Approx(f * f / t).epsilon(1e-12));

  CHECK_THROWS(theorem2_bound(ss4, 0, unit({0.05, 1.0, 1.0}), 10.0));
}

TEST_CASE("decay check is trendless for the ball") {
  auto ball = builtin_spec("ball-d3");
  auto check = decay_check(ball, 0, 4, 1.0, 100.0, 12, 99, 2);
  CHECK(check.pass);
  CHECK(check.rows.size() == 4 * 12);
  CHECK(check.max_ratio > 0.0);
  CHECK(std::abs(check.top_decade_slope) <= 0.05);
  auto csv = decay_csv(check);
  CHECK(csv.rfind("xi1,xi2,xi3,t,re,im,err,bound,ratio", 0) == 0);
}

TEST_CASE("axis asymptotics") {
  auto ball = builtin_spec("ball-d3");
  auto fb = axis_asymptotics(ball, 0, 1.0, 120.0, 3000);
  CHECK(fb.predicted_exponent == doctest::Approx(-2.0));
  CHECK(std::abs(fb.fitted_exponent + 2.0) < 0.05);
  CHECK(std::abs(fb.mean_zero_spacing - 0.5) < 0.01);
  CHECK(fb.max_spacing_deviation < 0.02);

  auto ss4 = builtin_spec("ss4-d3");
  auto fs = axis_asymptotics(ss4, 0, 1.0, 120.0, 3000);
  CHECK(std::abs(fs.fitted_exponent + 1.5) < 0.1);

  auto kn = builtin_spec("kn-m2k4");
  auto fk = axis_asymptotics(kn, 0, 1.0, 120.0, 3000);
  CHECK(fk.nu == doctest::Approx(0.25));
  CHECK(std::abs(fk.fitted_exponent + 1.25) < 0.1);
}

TEST_CASE("engine caches directions up to scaling and sign") {
  auto ss4 = builtin_spec("ss4-d3");
  FtEngine engine(ss4);
  auto xi = unit({0.8, 0.4, 0.2});
  double a = engine.ft(xi, 3.0);
  std::vector<double> scaled(3);
  for (int l = 0; l < 3; ++l) scaled[l] = -2.0 * xi[l];
  double b = engine.ft(scaled, 1.5);
  CHECK(a == doctest::Approx(b).epsilon(1e-12));
  CHECK(engine.cache_size() == 1);
  CHECK(a == doctest::Approx(ft_indicator(ss4, xi, 3.0).value).epsilon(1e-10));
}
