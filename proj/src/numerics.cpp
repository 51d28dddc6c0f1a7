#include "latlab/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace latlab {

namespace {

// Lanczos, g = 607/128, 15 terms (Boost/GSL coefficient set).
constexpr double kLanczosG = 607.0 / 128.0;
constexpr double kLanczos[15] = {
    0.99999999999999709182,     57.156235665862923517,
    -59.597960355475491248,     14.136097974741747174,
    -0.49191381609762019978,    3.3994649984811888699e-5,
    4.6523628927048575665e-5,   -9.8374475304879564677e-5,
    1.5808870322491248884e-4,   -2.1026444172410488319e-4,
    2.1743961811521264320e-4,   -1.6431810653676389022e-4,
    8.4418223983852743293e-5,   -2.6190838401581408670e-5,
    3.6899182659531622704e-6};

double lanczos_gamma(double x) {
  // Gamma(x) = sqrt(2 pi) * (x + g - 1/2)^(x - 1/2) e^{-(x+g-1/2)} A(x)
  double acc = kLanczos[0];
  for (int k = 1; k < 15; ++k) acc += kLanczos[k] / (x + k - 1);
  const double w = x + kLanczosG - 0.5;
  return std::sqrt(2.0 * M_PI) * std::pow(w, x - 0.5) * std::exp(-w) * acc;
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) throw std::domain_error("gamma_fn: requires x > 0");
  const double two_x = 2.0 * x;
  const double r = std::nearbyint(two_x);
  if (std::abs(two_x - r) < 1e-13 && r <= 60.0) {
    const long n2 = static_cast<long>(r);
    if (n2 % 2 == 0) {  // integer argument
      double v = 1.0;
      for (long k = 2; k < n2 / 2; ++k) v *= k;
      return v;
    }
    // half-integer: Gamma(m + 1/2) = sqrt(pi) * prod_{j=1..m} (j - 1/2)
    double v = std::sqrt(M_PI);
    for (double a = 0.5; a < x - 0.25; a += 1.0) v *= a;
    return v;
  }
  return lanczos_gamma(x);
}

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Chebyshev initial guess, Newton on P_n.
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
  return cache.emplace(n, std::move(rule)).first->second;
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  // Abscissas x = tanh(pi/2 sinh(kh)) on (-1, 1). Endpoint distances are
  // computed in exp form (never via 1 - tanh) so algebraic singularities
  // at a or b are sampled accurately; the k sweep runs until the terms
  // underflow rather than to a fixed cap.
  const double hw = 0.5 * (b - a);
  const double c = 0.5 * (a + b);

  auto node_term = [&](double t, bool both) {
    const double u = 0.5 * M_PI * std::sinh(t);
    const double w =
        0.5 * M_PI * std::cosh(t) / std::pow(std::cosh(u), 2);
    // (1 - x)/2 for the node x = tanh(u), evaluated stably
    const double dm = 1.0 / (1.0 + std::exp(2.0 * u));
    if (dm <= 0.0 || dm >= 1.0) return 0.0;
    const double lo = a + 2.0 * hw * dm;   // node -x mirrored to (a, b)
    const double hi = b - 2.0 * hw * dm;   // node +x
    double acc = 0.0;
    const double fhi = f(hi);
    if (std::isfinite(fhi)) acc += fhi;
    if (both) {
      const double flo = f(lo);
      if (std::isfinite(flo)) acc += flo;
    }
    return w * acc;
  };

  double prev = 0.0;
  double sum = 0.0;
  for (int level = 0; level <= 12; ++level) {
    const double h = 1.0 / static_cast<double>(1 << level);
    double acc = node_term(0.0, false);  // central node once
    int quiet = 0;
    for (int k = 1; k * h <= 7.0; ++k) {
      const double term = node_term(k * h, true);
      acc += term;
      if (std::abs(term) <= 1e-16 * (std::abs(acc) + 1e-300)) {
        if (++quiet >= 4) break;
      } else {
        quiet = 0;
      }
    }
    sum = acc * h * hw;
    if (level >= 2 &&
        std::abs(sum - prev) <= rel_tol * (std::abs(sum) + 1e-300)) {
      return sum;
    }
    prev = sum;
  }
  return sum;
}

void spherical_jn(int nmax, double x, double* out) {
  if (x < 1e-10) {
    out[0] = 1.0 - x * x / 6.0;
    for (int n = 1; n <= nmax; ++n) out[n] = 0.0;
    // leading order for tiny x, enough for our moment use
    if (nmax >= 1) out[1] = x / 3.0;
    return;
  }
  const double j0 = std::sin(x) / x;
  if (x > nmax + 12.0) {  // upward recurrence stable
    out[0] = j0;
    if (nmax >= 1) out[1] = std::sin(x) / (x * x) - std::cos(x) / x;
    for (int n = 1; n < nmax; ++n) {
      out[n + 1] = (2 * n + 1) / x * out[n] - out[n - 1];
    }
    return;
  }
  // Miller downward recurrence, normalized by j0.
  const int start = nmax + 16 + static_cast<int>(x);
  double jp2 = 0.0, jp1 = 1e-30;
  std::vector<double> tmp(start + 1, 0.0);
  for (int n = start; n >= 0; --n) {
    const double jn = (2 * n + 3) / x * jp1 - jp2;
    if (n <= nmax) tmp[n] = jn;
    jp2 = jp1;
    jp1 = jn;
    if (std::abs(jp1) > 1e250) {  // rescale
      jp1 *= 1e-250;
      jp2 *= 1e-250;
      for (int m = n; m <= nmax; ++m) tmp[m] *= 1e-250;
    }
  }
  // Normalize against whichever of j0, j1 is better conditioned.
  const double j1 = std::sin(x) / (x * x) - std::cos(x) / x;
  double scale;
  if (nmax >= 1 && std::abs(tmp[1]) > std::abs(tmp[0])) {
    scale = j1 / tmp[1];
  } else {
    scale = j0 / tmp[0];
  }
  for (int n = 0; n <= nmax; ++n) out[n] = tmp[n] * scale;
}

double solve_bracketed(const std::function<double(double)>& f, double lo,
                       double hi, double x_tol, int max_iter) {
  double flo = f(lo), fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if (flo > 0.0 || fhi < 0.0) {
    throw std::invalid_argument("solve_bracketed: root not bracketed");
  }
  double x = lo;
  for (int i = 0; i < max_iter; ++i) {
    // secant proposal, clipped into the bracket; fall back to bisection
    double xs = hi - fhi * (hi - lo) / (fhi - flo);
    const double mid = 0.5 * (lo + hi);
    if (!(xs > lo && xs < hi)) xs = mid;
    x = (i % 3 == 2) ? mid : xs;  // keep the bracket shrinking
    const double fx = f(x);
    if (fx == 0.0) return x;
    if (fx < 0.0) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
      fhi = fx;
    }
    if (hi - lo < x_tol * (1.0 + std::abs(mid))) break;
  }
  return 0.5 * (lo + hi);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) {
    throw std::invalid_argument("fit_line: need >= 2 paired samples");
  }
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit fit;
  fit.slope = sxx == 0.0 ? 0.0 : sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

double legendre_p(int n, double x) {
  if (n == 0) return 1.0;
  double p0 = 1.0, p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

std::vector<double> legendre_coeffs(std::span<const double> samples, int deg) {
  const int n = static_cast<int>(samples.size());
  const GaussRule& rule = gauss_legendre(n);
  std::vector<double> coeff(deg + 1, 0.0);
  for (int m = 0; m <= deg; ++m) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      acc += rule.weights[i] * legendre_p(m, rule.nodes[i]) * samples[i];
    }
    coeff[m] = (2 * m + 1) * 0.5 * acc;
  }
  return coeff;
}

const SphereRule& sphere_surface_rule(int k) {
  // recursive: building S^k (k >= 3) consults the cached S^{k-1} rule
  static std::recursive_mutex mu;
  static std::map<int, SphereRule> cache;
  std::lock_guard<std::recursive_mutex> lock(mu);
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;

  SphereRule rule;
  if (k < 0) throw std::invalid_argument("sphere_surface_rule: k < 0");
  if (k == 0) {
    rule.w = {1.0, 1.0};
    rule.v = {{1.0}, {-1.0}};
  } else if (k == 1) {
    const int n = 64;
    const double two_pi = 2.0 * M_PI;
    for (int i = 0; i < n; ++i) {
      const double th = two_pi * (i + 0.5) / n;
      rule.w.push_back(two_pi / n);
      rule.v.push_back({std::cos(th), std::sin(th)});
    }
  } else {
    // S^k = polar angle (Gauss-Legendre on [0, pi], weight sin^{k-1}) x
    // S^{k-1}; the azimuthal sub-rule gets fewer nodes at higher k to
    // keep total counts workable.
    const int n_theta = (k == 2) ? 20 : 12;
    SphereRule sub;
    if (k == 2) {
      const int n = 40;
      const double two_pi = 2.0 * M_PI;
      for (int i = 0; i < n; ++i) {
        const double th = two_pi * (i + 0.5) / n;
        sub.w.push_back(two_pi / n);
        sub.v.push_back({std::cos(th), std::sin(th)});
      }
    } else {
      sub = sphere_surface_rule(k - 1);  // cached copy
    }
    const GaussRule& gl = gauss_legendre(n_theta);
    for (int i = 0; i < n_theta; ++i) {
      const double th = M_PI * 0.5 * (gl.nodes[i] + 1.0);
      const double wt =
          gl.weights[i] * M_PI * 0.5 * std::pow(std::sin(th), k - 1);
      for (size_t m = 0; m < sub.w.size(); ++m) {
        std::vector<double> p;
        p.reserve(k + 1);
        for (double c : sub.v[m]) p.push_back(std::sin(th) * c);
        p.push_back(std::cos(th));
        rule.w.push_back(wt * sub.w[m]);
        rule.v.push_back(std::move(p));
      }
    }
  }
  return cache.emplace(k, std::move(rule)).first->second;
}

std::vector<std::vector<double>> orthonormal_complement(
    std::span<const double> u) {
  const int d = static_cast<int>(u.size());
  std::vector<int> order(d);
  for (int l = 0; l < d; ++l) order[l] = l;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return std::abs(u[a]) < std::abs(u[b]) ||
           (std::abs(u[a]) == std::abs(u[b]) && a < b);
  });
  std::vector<std::vector<double>> basis;
  for (int idx = 0; idx < d - 1; ++idx) {
    std::vector<double> e(d, 0.0);
    e[order[idx]] = 1.0;
    double dot = 0.0;
    for (int l = 0; l < d; ++l) dot += e[l] * u[l];
    for (int l = 0; l < d; ++l) e[l] -= dot * u[l];
    for (const auto& prev : basis) {
      double p = 0.0;
      for (int l = 0; l < d; ++l) p += e[l] * prev[l];
      for (int l = 0; l < d; ++l) e[l] -= p * prev[l];
    }
    double n2 = 0.0;
    for (double v : e) n2 += v * v;
    const double inv = 1.0 / std::sqrt(n2);
    for (double& v : e) v *= inv;
    basis.push_back(std::move(e));
  }
  return basis;
}

}  // namespace latlab
