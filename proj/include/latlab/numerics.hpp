#pragma once

// Small numerical toolbox shared by the lab modules: gamma function,
// Gauss-Legendre rules, tanh-sinh quadrature for endpoint-singular
// integrands, spherical Bessel functions (Filon moments), bracketed
// root finding, and least-squares line fits.

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace latlab {

// Gamma(x) for x > 0, accurate to ~1e-14 relative on (0, 30].
// Integer and half-integer arguments take an exact path.
double gamma_fn(double x);

struct GaussRule {
  std::vector<double> nodes;    // on (-1, 1)
  std::vector<double> weights;  // sum to 2
};

// n-point Gauss-Legendre rule (cached per n, thread-safe).
const GaussRule& gauss_legendre(int n);

// Integrates f over (a, b) with tanh-sinh quadrature. Handles algebraic
// endpoint singularities of the integrand.
double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-12);

// Spherical Bessel j_0..j_nmax at x >= 0 (Miller downward recurrence in
// the regime n > x, upward otherwise).
void spherical_jn(int nmax, double x, double* out);

// Root of a continuous f with f(lo) <= 0 <= f(hi), lo < hi, single sign
// change. Bisection with a secant polish; |f| driven below f_tol or the
// bracket below x_tol.
double solve_bracketed(const std::function<double(double)>& f, double lo,
                       double hi, double x_tol = 1e-14, int max_iter = 200);

// Fixed quadrature rule on the unit sphere S^k in R^{k+1}: uniform
// angles for S^1, Gauss-Legendre polar layers above. Weights sum to the
// sphere surface measure. Cached per k, thread-safe.
struct SphereRule {
  std::vector<double> w;
  std::vector<std::vector<double>> v;  // unit vectors in R^{k+1}
};
const SphereRule& sphere_surface_rule(int k);

// Orthonormal basis of the hyperplane orthogonal to the unit vector u
// (d-1 vectors, deterministic Gram-Schmidt of the least-aligned
// standard basis vectors).
std::vector<std::vector<double>> orthonormal_complement(
    std::span<const double> u);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LineFit fit_line(std::span<const double> x, std::span<const double> y);

// Legendre-coefficient projection of samples taken at the n-point
// Gauss-Legendre nodes; returns coefficients c_0..c_{deg}.
std::vector<double> legendre_coeffs(std::span<const double> samples, int deg);

double legendre_p(int n, double x);

}  // namespace latlab
