#include "latlab/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"
#include "latlab/numerics.hpp"
#include "latlab/parallel.hpp"
#include "latlab/report.hpp"

namespace latlab {

std::vector<Rational> make_t_grid(double t_min, double t_max, int steps) {
  if (!(t_min > 0.0) || !(t_max > t_min) || steps < 2) {
    throw std::invalid_argument("make_t_grid: need 0 < t_min < t_max, steps >= 2");
  }
  std::vector<Rational> grid;
  const double la = std::log(t_min), lb = std::log(t_max);
  long long prev = -1;
  for (int i = 0; i < steps; ++i) {
    const double t = std::exp(la + (lb - la) * i / (steps - 1));
    const long long n = std::llround(t * 20.0);
    if (n <= 0 || n == prev) continue;
    prev = n;
    grid.emplace_back(n, 20);
  }
  return grid;
}

std::vector<SweepRow> sweep_remainder(const DomainSpec& spec,
                                      const std::vector<Rational>& grid,
                                      int threads) {
  for (size_t i = 0; i + 1 < grid.size(); ++i) {
    if (!(grid[i].to_double() < grid[i + 1].to_double())) {
      throw std::invalid_argument("sweep_remainder: grid must be increasing");
    }
  }
  const ExponentReport rep = predicted_exponents(spec);
  std::vector<SweepRow> rows(grid.size());
  parallel_for(static_cast<int>(grid.size()), threads, [&](int i) {
    const CountResult cr = remainder(spec, grid[i], 1);
    rows[i].t = cr.t;
    rows[i].count = cr.count;
    rows[i].volume_term = cr.volume_term;
    rows[i].remainder = cr.remainder;
    rows[i].normalized =
        cr.remainder / std::pow(grid[i].to_double(), rep.overall);
  });
  return rows;
}

FitResult fit_growth_exponent(const std::vector<SweepRow>& rows,
                              double predicted) {
  if (rows.size() < 20) {
    throw std::invalid_argument("fit_growth_exponent: need >= 20 rows");
  }
  const double t0 = rows.front().t.to_double();
  const double t1 = rows.back().t.to_double();
  if (t1 < 10.0 * t0) {
    throw std::invalid_argument("fit_growth_exponent: need >= 1 decade of t");
  }
  // Theorem-style bounds control sup growth, so fit the running maximum.
  std::vector<double> lx, ly;
  double run_max = 0.0;
  for (const auto& row : rows) {
    run_max = std::max(run_max, std::abs(row.remainder));
    if (run_max < 1e-9) continue;
    lx.push_back(std::log(row.t.to_double()));
    ly.push_back(std::log(run_max));
  }
  if (lx.size() < 2) {
    throw std::invalid_argument("fit_growth_exponent: degenerate grid, |R| ~ 0");
  }
  const LineFit lf = fit_line(lx, ly);
  FitResult fit;
  fit.fitted_exponent = lf.slope;
  fit.intercept = lf.intercept;
  fit.t_lo = t0;
  fit.t_hi = t1;
  fit.predicted = predicted;
  fit.residual = lf.slope - predicted;
  return fit;
}

Verdict compare_to_bound(const FitResult& fit, double tolerance) {
  Verdict v;
  v.fitted = fit.fitted_exponent;
  v.predicted = fit.predicted;
  v.tolerance = tolerance;
  v.margin = fit.predicted + tolerance - fit.fitted_exponent;
  v.pass = fit.fitted_exponent <= fit.predicted + tolerance;
  return v;
}

OmegaEvidence omega_scan(const DomainSpec& spec, int axis, double window_lo,
                         int n_windows, double step, int threads) {
  if (axis < 0 || axis >= spec.d) {
    throw std::out_of_range("omega_scan: axis out of range");
  }
  if (step > 0.05 + 1e-12) {
    throw std::invalid_argument("omega_scan: grid step must be <= 0.05");
  }
  OmegaEvidence ev;
  ev.axis = axis;
  ev.exponent = spec.d - 1 - spec.table.nu[axis];

  const long long per_window = std::llround(1.0 / step);
  std::vector<Rational> grid;
  for (int w = 0; w < n_windows; ++w) {
    const long long base = std::llround((window_lo + w) * per_window);
    for (long long i = 0; i < per_window; ++i) {
      grid.emplace_back(base + i, per_window);
    }
  }
  std::vector<double> vals(grid.size(), 0.0);
  parallel_for(static_cast<int>(grid.size()), threads, [&](int i) {
    const CountResult cr = remainder(spec, grid[i], 1);
    vals[i] = std::abs(cr.remainder) /
              std::pow(grid[i].to_double(), ev.exponent);
  });
  const size_t n = grid.size() / n_windows;
  ev.evidence = 1e300;
  for (int w = 0; w < n_windows; ++w) {
    double sup = 0.0;
    for (size_t i = w * n; i < (w + 1) * n; ++i) sup = std::max(sup, vals[i]);
    ev.window_sups.push_back(sup);
    ev.evidence = std::min(ev.evidence, sup);
  }
  ev.inconclusive = ev.evidence < 1e-9;
  return ev;
}

double normalized_trend_slope(const std::vector<SweepRow>& rows) {
  // slope of log(running max |normalized|) over the last decade
  const double t_hi = rows.back().t.to_double();
  std::vector<double> lx, ly;
  double run_max = 0.0;
  for (const auto& row : rows) {
    run_max = std::max(run_max, std::abs(row.normalized));
    if (row.t.to_double() >= t_hi / 10.0 && run_max > 0.0) {
      lx.push_back(std::log(row.t.to_double()));
      ly.push_back(std::log(run_max));
    }
  }
  if (lx.size() < 2) return 0.0;
  return fit_line(lx, ly).slope;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "t,count,volume_term,remainder,normalized\n";
  for (const auto& row : rows) {
    out += format_double(row.t.to_double());
    out += ',';
    out += row.count.get_str();
    out += ',';
    out += format_double(row.volume_term);
    out += ',';
    out += format_double(row.remainder);
    out += ',';
    out += format_double(row.normalized);
    out += '\n';
  }
  return out;
}

std::string fit_json(const FitResult& fit, const Verdict& verdict) {
  nlohmann::json j;
  j["fitted"] = round_for_report(fit.fitted_exponent);
  j["intercept"] = round_for_report(fit.intercept);
  j["t_lo"] = fit.t_lo;
  j["t_hi"] = fit.t_hi;
  j["predicted"] = round_for_report(fit.predicted);
  j["margin"] = round_for_report(verdict.margin);
  j["pass"] = verdict.pass;
  return j.dump();
}

std::string omega_scan_json(const OmegaEvidence& ev) {
  nlohmann::json j;
  j["axis"] = ev.axis + 1;
  j["exponent"] = round_for_report(ev.exponent);
  j["window_sups"] = nlohmann::json::array();
  for (double s : ev.window_sups) j["window_sups"].push_back(round_for_report(s));
  j["evidence"] = round_for_report(ev.evidence);
  j["inconclusive"] = ev.inconclusive;
  return j.dump();
}

}  // namespace latlab
