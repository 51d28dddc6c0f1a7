#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "latlab/caps.hpp"
#include "latlab/domain.hpp"

using namespace latlab;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> unit(std::vector<double> v) {
  double n = 0.0;
  for (double x : v) n += x * x;
  n = std::sqrt(n);
  for (double& x : v) x /= n;
  return v;
}
}  // namespace

TEST_CASE("ball cap measure is 2 pi delta") {
  auto ball = builtin_spec("ball-d3");
  std::vector<double> e1 = {1.0, 0.0, 0.0};
  auto diag = unit({1.0, -1.0, 1.0});
  for (double delta : {0.01, 0.05, 0.1, 0.2}) {
    CHECK(std::abs(cap_measure(ball, e1, delta) - 2.0 * kPi * delta) /
              (2.0 * kPi * delta) <
          1e-3);
    CHECK(std::abs(cap_measure(ball, diag, delta) - 2.0 * kPi * delta) /
              (2.0 * kPi * delta) <
          1e-3);
  }
}

TEST_CASE("ball cap extents follow the circle geometry") {
  auto ball = builtin_spec("ball-d3");
  std::vector<double> e1 = {1.0, 0.0, 0.0};
  const double delta = 0.02;
  auto ext = cap_extents(ball, e1, delta);
  const double chord = std::sqrt(2.0 * delta - delta * delta);
  CHECK(ext[1] == doctest::Approx(chord).epsilon(1e-3));
  CHECK(ext[2] == doctest::Approx(chord).epsilon(1e-3));
  CHECK(ext[0] == doctest::Approx(delta).epsilon(1e-2));
}

TEST_CASE("supersphere flat-direction extent scaling") {
  auto ss4 = builtin_spec("ss4-d3");
  std::vector<double> e1 = {1.0, 0.0, 0.0};
  const double delta = 1e-4;
  auto ext = cap_extents(ss4, e1, delta);
  // transverse extent solves x^4 ~ omega * delta near the flat axis point
  CHECK(ext[1] == doctest::Approx(std::pow(4.0 * delta, 0.25)).epsilon(0.02));
}

TEST_CASE("cap stats satisfy the support-point conditions") {
  for (const auto& name : {"ss6-d3", "kn-m2k4"}) {
    auto spec = builtin_spec(name);
    auto xi = unit({0.8, 0.5, 0.3});
    auto stats = cap_stats(spec, xi, 0.01);
    CHECK(std::abs(eval_F(spec, stats.support_pt)) < 1e-9);
    std::vector<double> g(spec.d);
    grad_F(spec, stats.support_pt, g);
    double gn = 0.0, dot = 0.0;
    for (int l = 0; l < spec.d; ++l) {
      gn += g[l] * g[l];
      dot += g[l] * xi[l];
    }
    CHECK(dot / std::sqrt(gn) > 1.0 - 1e-9);
    CHECK(stats.measure > 0.0);
    for (double e : stats.extents) CHECK(e >= 0.0);
  }
}

TEST_CASE("extents and measure are monotone in delta") {
  auto ss4 = builtin_spec("ss4-d3");
  auto xi = unit({1.0, 0.6, -0.2});
  double prev_measure = 0.0;
  std::vector<double> prev_ext(3, 0.0);
  for (double delta : {0.005, 0.02, 0.08, 0.2}) {
    auto stats = cap_stats(ss4, xi, delta);
    CHECK(stats.measure >= prev_measure);
    for (int l = 0; l < 3; ++l) {
      CHECK(stats.extents[l] >= prev_ext[l] - 1e-12);
      prev_ext[l] = stats.extents[l];
    }
    prev_measure = stats.measure;
  }
}

TEST_CASE("cap bound branch selection") {
  auto ss4 = builtin_spec("ss4-d3");
  std::vector<double> e1 = {1.0, 0.0, 0.0};
  const double t = 100.0;
  // axis direction forces the first branch in every factor
  CHECK(cap_bound(ss4, 0, e1, t) ==
        doctest::Approx(std::pow(t, -0.25) * std::pow(t, -0.25)));
  auto factors = cap_extent_bounds(ss4, 0, e1, t);
  CHECK(factors[0] == 1.0);
  CHECK(factors[1] == doctest::Approx(std::pow(t, -0.25)));

  auto ball = builtin_spec("ball-d3");
  auto diag = unit({1.0, 1.0, 1.0});
  CHECK(cap_bound(ball, 0, diag, t) == doctest::Approx(1.0 / t));
  CHECK_THROWS(cap_bound(ss4, 0, unit({0.05, 1.0, 1.0}), t));
}

TEST_CASE("lemma 1 sweep is trendless") {
  auto ball = builtin_spec("ball-d3");
  auto check = lemma1_check(ball, 0, 4, 10.0, 1000.0, 8, 17, 2);
  CHECK(check.pass);
  CHECK(check.rows.size() == 4 * 8);
  CHECK(std::abs(check.measure_slope) <= 0.05);
  CHECK(std::abs(check.extent_slope) <= 0.05);
  // ball ratio should hover near the constant 2 pi
  CHECK(check.max_ratio == doctest::Approx(2.0 * kPi).epsilon(0.05));
  auto csv = cap_csv(check);
  CHECK(csv.rfind("xi1,xi2,xi3,t,delta,ext1,ext2,ext3,measure,bound,ratio",
                  0) == 0);
  auto json = cap_json(check);
  CHECK(json.find("\"pass\":true") != std::string::npos);
}
