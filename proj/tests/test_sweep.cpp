#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>

#include "doctest.h"
#include "latlab/domain.hpp"
#include "latlab/sweep.hpp"

using namespace latlab;

namespace {

std::vector<SweepRow> synthetic_rows(double exponent, bool modulate) {
  std::vector<SweepRow> rows;
  for (const auto& t : make_t_grid(1.0, 60.0, 80)) {
    SweepRow row;
    row.t = t;
    const double td = t.to_double();
    row.remainder = std::pow(td, exponent);
    if (modulate) row.remainder *= std::sin(td);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("t grid construction") {
  auto grid = make_t_grid(1.0, 100.0, 50);
  CHECK(grid.size() >= 20);
  CHECK(grid.front().to_double() == doctest::Approx(1.0));
  CHECK(grid.back().to_double() == doctest::Approx(100.0));
  for (size_t i = 0; i < grid.size(); ++i) {
    CHECK(20 % grid[i].den == 0);  // snapped to denominator 20
    if (i > 0)
      CHECK(grid[i].to_double() > grid[i - 1].to_double());
  }
}

TEST_CASE("sweep rows on the ball") {
  auto ball = builtin_spec("ball-d3");
  auto rows =
      sweep_remainder(ball, {Rational(1, 2), Rational(1, 1), Rational(2, 1)});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].count == 1);
  CHECK(rows[1].remainder == doctest::Approx(2.811).epsilon(1e-3));
  CHECK(rows[2].remainder == doctest::Approx(-0.510).epsilon(2e-3));
  for (size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].count >= rows[i - 1].count);
}

TEST_CASE("fit recovers a pure power law") {
  auto fit = fit_growth_exponent(synthetic_rows(1.5, false), 1.5);
  CHECK(fit.fitted_exponent == doctest::Approx(1.5).epsilon(1e-9));
  CHECK(fit.residual == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("fit recovers a modulated envelope") {
  auto fit = fit_growth_exponent(synthetic_rows(1.5, true), 1.5);
  CHECK(std::abs(fit.fitted_exponent - 1.5) < 0.05);
}

TEST_CASE("fit preconditions") {
  auto rows = synthetic_rows(1.0, false);
  std::vector<SweepRow> few(rows.begin(), rows.begin() + 5);
  CHECK_THROWS(fit_growth_exponent(few, 1.0));
  auto zero = synthetic_rows(1.0, false);
  for (auto& row : zero) row.remainder = 0.0;
  CHECK_THROWS(fit_growth_exponent(zero, 1.0));
}

TEST_CASE("verdicts against the predicted bound") {
  FitResult fit;
  fit.predicted = 1.5;
  fit.fitted_exponent = 1.40;
  auto v = compare_to_bound(fit);
  CHECK(v.pass);
  CHECK(v.margin == doctest::Approx(0.25));

  fit.fitted_exponent = 1.70;
  CHECK(!compare_to_bound(fit).pass);

  fit.fitted_exponent = 1.5;
  CHECK(compare_to_bound(fit).pass);
}

TEST_CASE("ball sweep stays below the predicted exponent") {
  auto ball = builtin_spec("ball-d3");
  auto rows = sweep_remainder(ball, make_t_grid(2.0, 120.0, 60), 2);
  auto fit = fit_growth_exponent(rows, predicted_exponents(ball).overall);
  auto verdict = compare_to_bound(fit);
  CHECK(verdict.pass);
  CHECK(fit.fitted_exponent < 1.65);
  CHECK(normalized_trend_slope(rows) < 0.05);
}

TEST_CASE("omega scan produces positive window evidence") {
  auto ball = builtin_spec("ball-d3");
  auto ev = omega_scan(ball, 0, 10.0, 2, 0.05, 2);
  CHECK(ev.window_sups.size() == 2);
  CHECK(ev.evidence > 0.0);
  CHECK(!ev.inconclusive);
}

TEST_CASE("CSV and JSON artifacts") {
  auto ball = builtin_spec("ball-d3");
  auto rows = sweep_remainder(ball, {Rational(1, 1), Rational(2, 1)});
  auto csv = sweep_csv(rows);
  CHECK(csv.rfind("t,count,volume_term,remainder,normalized", 0) == 0);
  std::istringstream lines(csv);
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) ++n;
  CHECK(n == 3);

  auto fit = fit_growth_exponent(synthetic_rows(1.5, false), 1.5);
  auto json = fit_json(fit, compare_to_bound(fit));
  CHECK(json.find("\"fitted\"") != std::string::npos);
  CHECK(json.find("\"pass\":true") != std::string::npos);
}
