#pragma once

// Boundary caps: for a direction xi, the normal point x(xi) on the
// boundary (outward normal xi/|xi|), the cap
//   B(x(xi), delta) = { y on the boundary : dist(y, tangent plane) < delta },
// its per-coordinate extents, and its surface measure, plus the
// product-bound conformance sweep.
//
// The cap is parametrized as a graph over the tangent plane: walking
// rho v from x(xi) along a tangent direction v and descending depth g
// along the inward normal back to the boundary. The surface measure is
// the integral of the graph area element |grad F| / <grad F, n> over
// the patch; extents are maximized over the same patch.

#include <span>
#include <string>
#include <vector>

#include "latlab/domain.hpp"

namespace latlab {

struct CapStats {
  std::vector<double> xi;  // unit direction
  double delta = 0.0;
  std::vector<double> support_pt;  // x(xi)
  std::vector<double> extents;     // per-coordinate max |y_l - x(xi)_l|
  double measure = 0.0;            // surface measure of the cap
};

// Extents and measure in one pass over the graph patch.
CapStats cap_stats(const DomainSpec& spec, std::span<const double> xi,
                   double delta);
double cap_measure(const DomainSpec& spec, std::span<const double> xi,
                   double delta);
std::vector<double> cap_extents(const DomainSpec& spec,
                                std::span<const double> xi, double delta);

// The product bound for caps of depth 1/t in the cone |xi_j| >= eps0
// (unit xi, 0-based j):
//   prod_{l != j} min{ t^{-1/(m_jl w_l)},
//                      t^{-1/2} |xi_l|^{-(m_jl w_l - 2)/(2(m_jl w_l - 1))} }.
double cap_bound(const DomainSpec& spec, int j, std::span<const double> xi,
                 double t, double eps0 = -1.0);

// The same per-coordinate factors, for the extent comparison (entry j is
// set to 1).
std::vector<double> cap_extent_bounds(const DomainSpec& spec, int j,
                                      std::span<const double> xi, double t,
                                      double eps0 = -1.0);

struct CapRow {
  std::vector<double> xi;
  double t = 0.0;
  double delta = 0.0;  // 1/t
  std::vector<double> extents;
  double measure = 0.0;
  double bound = 0.0;
  double ratio = 0.0;         // measure / bound
  double extent_ratio = 0.0;  // max over l != j of extent_l / factor_l
};

struct CapCheck {
  int axis = 0;  // 0-based
  std::vector<CapRow> rows;
  double max_ratio = 0.0;
  double max_extent_ratio = 0.0;
  double measure_slope = 0.0;  // top-decade slope of the running max ratio
  double extent_slope = 0.0;
  bool pass = false;
};

CapCheck lemma1_check(const DomainSpec& spec, int axis, int n_dirs,
                      double t_lo, double t_hi, int n_freqs,
                      std::uint64_t seed, int threads,
                      double slope_tol = 0.05, double eps0 = -1.0);

std::string cap_csv(const CapCheck& check);
std::string cap_json(const CapCheck& check);
std::string cap_stats_json(const CapStats& stats);

}  // namespace latlab
