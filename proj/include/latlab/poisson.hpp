#pragma once

// Mollification sandwich and frequency-side cross-validation.
//
// The mollifier is a d-fold product of centered B-splines scaled so its
// support cube lies inside D; then supp(rho_eps) is contained in eps*D
// and convexity gives the sandwich
//   chi_{(t-eps)D} * rho_eps <= chi_{tD} <= chi_{(t+eps)D} * rho_eps.
// Summing over the lattice, the smoothed counts bracket the exact count.
// The smoothed count is also evaluated on the frequency side through the
// Poisson summation identity, with the transform values supplied by the
// fourier engine and an explicit truncation-tail bound.

#include <span>
#include <string>

#include "latlab/counting.hpp"
#include "latlab/domain.hpp"
#include "latlab/fourier.hpp"

namespace latlab {

struct Mollifier {
  int order = 8;                // B-spline order (C^{order-2} smoothness)
  int d = 0;
  double support_radius = 0.0;  // h: rho supported on [-h, h]^d, inside D

  double rho1(double x) const;      // 1-D kernel, unit mass
  double cdf1(double x) const;      // its cumulative integral
  double rho_hat1(double f) const;  // 1-D transform: power-of-sinc
  double rho(std::span<const double> x) const;
  double rho_hat(std::span<const double> xi) const;
};

Mollifier make_mollifier(const DomainSpec& spec, int order = 8);

// eps = t^{-(d-1)/(d+1)}; requires t >= 1.
double epsilon_schedule(int d, double t);

// sum over k in Z^d of (chi_{tD} * rho_eps)(k). Interior and exterior
// lattice cubes are classified exactly through coordinate monotonicity
// of F; only the boundary shell is integrated (product Gauss rule
// across the mollifier cube, innermost coordinate by the exact kernel
// CDF against the analytic chord).
double smoothed_count(const DomainSpec& spec, double t, double eps,
                      const Mollifier& mol, int threads = 0,
                      int n_quad = 16);

struct PoissonRhs {
  double value = 0.0;       // sum over |k|_inf <= K of t^d ft(tk) rho_hat(eps k)
  double tail_bound = 0.0;  // measured-envelope estimate of the truncation
  int K = 0;
};

PoissonRhs poisson_rhs(const DomainSpec& spec, FtEngine& engine, double t,
                       double eps, const Mollifier& mol, int K,
                       int threads = 0);

struct PoissonVerdict {
  double t = 0.0;
  double eps = 0.0;
  int K = 0;
  int order = 0;
  double lhs = 0.0;        // smoothed count at t
  std::string exact;       // exact lattice count (big integer)
  double rhs_minus = 0.0;  // smoothed count at t - eps (lower sandwich)
  double rhs_plus = 0.0;   // smoothed count at t + eps (upper sandwich)
  double rhs = 0.0;        // frequency-side value at t
  double poisson_gap = 0.0;
  double tail_bound = 0.0;
  double quad_tol = 0.0;  // Richardson estimate of the spatial-side error
  bool sandwich_ok = false;
  bool poisson_ok = false;
  bool pass = false;
};

PoissonVerdict poisson_check(const DomainSpec& spec, const Rational& t,
                             int K = 8, int order = 8, int threads = 0);

std::string poisson_json(const PoissonVerdict& verdict);

}  // namespace latlab
