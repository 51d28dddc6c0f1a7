#pragma once

// Fourier transform of the domain indicator.
//
// The d-dimensional oscillatory integral is reduced to one dimension
// through the slice profile A(s) = vol_{d-1}(D intersect {x.xi = s});
// then chi-hat(t xi) = integral A(s) exp(-2 pi i t s) ds is evaluated by
// Filon quadrature: A is projected onto Legendre polynomials panel by
// panel and the oscillatory moments are spherical Bessel values, so the
// cost is independent of t. Profiles are t-independent and cached per
// direction.
//
// Axis profiles are computed from the block-density reduction (a smooth
// 1-D integral at worst); generic directions use the star-shaped radial
// representation of the convex slice about a chord-interpolated center,
// with a fixed spherical node set so s -> A(s) stays smooth.

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <vector>

#include "latlab/domain.hpp"

namespace latlab {

struct FtOptions {
  int base_panels = 9;     // uniform panels on [0, 0.75 h]
  int refine_depth = 20;   // geometric (ratio 2) refinement toward s = h
  int panel_degree = 11;   // Legendre degree per panel (12 GL nodes)
};

struct Panel {
  double a = 0.0, b = 0.0;
  std::vector<double> coeffs;  // Legendre coefficients of A on [a, b]
};

struct SliceProfile {
  std::vector<double> xi;  // unit direction
  double h = 0.0;          // support half-width; s ranges over [-h, h]
  std::vector<Panel> panels;                        // covering [0, h]
  std::vector<std::pair<double, double>> samples;   // (s, A(s)) at GL nodes
  double quad_error = 0.0;  // Legendre-tail + truncation estimate

  double eval(double s) const;     // A(|s|), 0 outside the support
  double fourier(double r) const;  // integral_{-h}^{h} A(s) e^{-2 pi i r s} ds
};

// (d-1)-volume of the hyperplane slice D intersect {x.xi = s}.
double slice_area(const DomainSpec& spec, std::span<const double> xi, double s);

SliceProfile build_slice_profile(const DomainSpec& spec,
                                 std::span<const double> xi,
                                 const FtOptions& opts = {});

struct FTValue {
  std::vector<double> xi;
  double t = 0.0;
  double value = 0.0;  // the transform is real: D is symmetric under x -> -x
  double quad_error = 0.0;
};

// chi-hat_D(t xi) for unit xi; t >= 0.
FTValue ft_indicator(const DomainSpec& spec, std::span<const double> xi,
                     double t, const FtOptions& opts = {});

// Scaling wrapper: chi-hat_{tD}(xi) = t^d chi-hat_D(t xi).
double ft_scaled(const DomainSpec& spec, std::span<const double> xi, double t,
                 const FtOptions& opts = {});

// Decay-bound product for directions in the cone |xi_j| >= eps0:
//   t^{-1} prod_{l != j} min{ t^{-1/(m_jl w_l)},
//                             t^{-1/2} |xi_l|^{-(m_jl w_l - 2)/(2(m_jl w_l - 1))} }.
// xi must be a unit vector; j is 0-based. Throws if |xi_j| < eps0.
double theorem2_bound(const DomainSpec& spec, int j, std::span<const double> xi,
                      double t, double eps0 = -1.0 /* default (2d)^{-1/2} */);

struct DecayRow {
  std::vector<double> xi;
  double t = 0.0;
  double value = 0.0;
  double bound = 0.0;
  double ratio = 0.0;
};

struct DecayCheck {
  int axis = 0;  // 0-based
  std::vector<DecayRow> rows;
  double max_ratio = 0.0;
  double top_decade_slope = 0.0;  // of the running max of the per-t sup ratio
  bool pass = false;              // slope <= tolerance (default 0.05)
};

DecayCheck decay_check(const DomainSpec& spec, int axis, int n_dirs,
                       double t_lo, double t_hi, int n_freqs,
                       std::uint64_t seed, int threads,
                       double slope_tol = 0.05, double eps0 = -1.0);

struct AxisAsymptotics {
  int axis = 0;                    // 0-based
  double nu = 0.0;                 // nu_j
  double predicted_exponent = 0.0; // -1 - nu_j
  double fitted_exponent = 0.0;    // envelope slope of log |chi-hat| peaks
  double fitted_amplitude = 0.0;   // envelope constant at t = 1
  double mean_zero_spacing = 0.0;  // successive-crossing spacing (expect 1/2)
  double max_spacing_deviation = 0.0;  // max |spacing - 1/2| / (1/2)
  double phase_offset = 0.0;           // mean crossing position mod 1/2
  double expected_offset = 0.0;        // (nu/4 - 1/4) mod 1/2
  int n_zeros = 0;
  int n_peaks = 0;
};

// Fits the axis-direction transform to its envelope C t^{-1-nu_j} and
// extracts zero-crossing statistics. t_grid spans [t_lo, t_hi].
AxisAsymptotics axis_asymptotics(const DomainSpec& spec, int axis, double t_lo,
                                 double t_hi, int n_grid = 4000);

// Per-direction profile cache (immutable profiles, thread-safe lookup).
class FtEngine {
 public:
  explicit FtEngine(const DomainSpec& spec, FtOptions opts = {})
      : spec_(spec), opts_(opts) {}

  // xi need not be normalized; profiles are keyed by the normalized
  // direction folded under the sign symmetry of D.
  double ft(std::span<const double> xi, double t);
  std::shared_ptr<const SliceProfile> profile(std::span<const double> xi);
  size_t cache_size() const;

 private:
  DomainSpec spec_;
  FtOptions opts_;
  mutable std::mutex mu_;
  std::map<std::vector<double>, std::shared_ptr<const SliceProfile>> cache_;
};

std::string decay_csv(const DecayCheck& check);
std::string decay_json(const DecayCheck& check);
std::string axis_asymptotics_json(const AxisAsymptotics& fit);

}  // namespace latlab
