#pragma once

// Remainder sweeps over t grids, growth-exponent fits against the
// predicted bounds, and Omega-direction evidence scans.

#include <string>
#include <vector>

#include "latlab/counting.hpp"
#include "latlab/domain.hpp"

namespace latlab {

struct SweepRow {
  Rational t;
  mpz_class count;
  double volume_term = 0.0;
  double remainder = 0.0;
  double normalized = 0.0;  // remainder / t^E for the reference exponent E
};

struct FitResult {
  double fitted_exponent = 0.0;  // slope of log(running max |R|) vs log t
  double intercept = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  double predicted = 0.0;
  double residual = 0.0;  // fitted - predicted
};

struct Verdict {
  bool pass = false;
  double margin = 0.0;  // predicted + tol - fitted
  double fitted = 0.0;
  double predicted = 0.0;
  double tolerance = 0.0;
};

struct OmegaEvidence {
  int axis = 0;          // 0-based
  double exponent = 0.0; // E_j = d - 1 - nu_j
  std::vector<double> window_sups;
  double evidence = 0.0; // min over windows of sup |R|/t^{E_j}
  bool inconclusive = false;
};

// Log-spaced grid snapped to rationals with denominator 20 (so exact
// counting thresholds stay cheap), deduplicated, increasing.
std::vector<Rational> make_t_grid(double t_min, double t_max, int steps);

std::vector<SweepRow> sweep_remainder(const DomainSpec& spec,
                                      const std::vector<Rational>& grid,
                                      int threads = 1);

// Least-squares slope of log(running max |R|) against log t. Requires
// >= 20 rows spanning at least one decade.
FitResult fit_growth_exponent(const std::vector<SweepRow>& rows,
                              double predicted);

Verdict compare_to_bound(const FitResult& fit, double tolerance = 0.15);

OmegaEvidence omega_scan(const DomainSpec& spec, int axis, double window_lo,
                         int n_windows, double step = 0.05, int threads = 1);

// Envelope fit over the sweep, plus fit of running max |R|/t^E in the
// last decade (trend check for normalized boundedness).
double normalized_trend_slope(const std::vector<SweepRow>& rows);

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string fit_json(const FitResult& fit, const Verdict& verdict);
std::string omega_scan_json(const OmegaEvidence& ev);

}  // namespace latlab
