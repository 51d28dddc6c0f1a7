#include "latlab/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "latlab/numerics.hpp"
#include "latlab/parallel.hpp"
#include "latlab/report.hpp"

namespace latlab {

namespace {

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

// Uncentered B-spline of order m on [0, m] and its cumulative integral.
double bspline(int m, double u) {
  if (u <= 0.0 || u >= m) return 0.0;
  double fact = 1.0;
  for (int i = 2; i < m; ++i) fact *= i;
  double acc = 0.0;
  for (int k = 0; k <= static_cast<int>(u); ++k) {
    const double base = u - k;
    acc += (k % 2 ? -1.0 : 1.0) * binomial(m, k) * std::pow(base, m - 1);
  }
  return acc / fact;
}

double bspline_cdf(int m, double u) {
  if (u <= 0.0) return 0.0;
  if (u >= m) return 1.0;
  double fact = 1.0;
  for (int i = 2; i <= m; ++i) fact *= i;
  double acc = 0.0;
  for (int k = 0; k <= static_cast<int>(u); ++k) {
    const double base = u - k;
    acc += (k % 2 ? -1.0 : 1.0) * binomial(m, k) * std::pow(base, m);
  }
  return std::clamp(acc / fact, 0.0, 1.0);
}

// Largest X >= 0 such that coordinate c = X stays inside tD when
// coordinates c+1..d-1 hold the listed values and coordinates 0..c-1
// are zero; -1 when even X = 0 is infeasible. `higher` holds
// coordinates c+1..d-1.
double max_abs_coord(const DomainSpec& spec, double t, int c,
                     std::span<const double> higher) {
  const int pc = spec.table.p_of[c];
  double outer = 0.0, inner_c = 0.0;
  int coord = 0;
  for (size_t p = 0; p < spec.blocks.size(); ++p) {
    double s = 0.0;
    for (size_t i = 0; i < spec.blocks[p].size(); ++i, ++coord) {
      if (coord <= c) continue;
      s += std::pow(std::abs(higher[coord - c - 1] / t), spec.blocks[p][i]);
    }
    if (static_cast<int>(p) == pc) {
      inner_c = s;
    } else {
      outer += std::pow(s, spec.ms[p]);
    }
  }
  const double budget = 1.0 - outer;
  if (budget < 0.0) return -1.0;
  const double room = std::pow(budget, 1.0 / spec.ms[pc]) - inner_c;
  if (room < 0.0) return -1.0;
  return t * std::pow(room, 1.0 / spec.omega[c]);
}

}  // namespace

double Mollifier::rho1(double x) const {
  const double scale = order / (2.0 * support_radius);
  return scale * bspline(order, x * scale + order * 0.5);
}

double Mollifier::cdf1(double x) const {
  const double scale = order / (2.0 * support_radius);
  return bspline_cdf(order, x * scale + order * 0.5);
}

double Mollifier::rho_hat1(double f) const {
  const double z = 2.0 * support_radius * f / order;
  if (std::abs(z) < 1e-14) return 1.0;
  return std::pow(std::sin(M_PI * z) / (M_PI * z), order);
}

double Mollifier::rho(std::span<const double> x) const {
  double v = 1.0;
  for (double c : x) v *= rho1(c);
  return v;
}

double Mollifier::rho_hat(std::span<const double> xi) const {
  double v = 1.0;
  for (double c : xi) v *= rho_hat1(c);
  return v;
}

Mollifier make_mollifier(const DomainSpec& spec, int order) {
  if (order < 4) throw std::invalid_argument("make_mollifier: order >= 4");
  Mollifier mol;
  mol.order = order;
  mol.d = spec.d;
  // support cube inside D so the scaled support sits inside eps * D
  mol.support_radius = diagonal_extent(spec);
  return mol;
}

double epsilon_schedule(int d, double t) {
  if (!(t >= 1.0)) throw std::invalid_argument("epsilon_schedule: t >= 1");
  return std::pow(t, -(d - 1.0) / (d + 1.0));
}

double smoothed_count(const DomainSpec& spec, double t, double eps,
                      const Mollifier& mol, int threads, int n_quad) {
  if (!(t > 0.0) || !(eps > 0.0)) {
    throw std::invalid_argument("smoothed_count: t, eps must be positive");
  }
  const int d = spec.d;
  const double hmax = eps * mol.support_radius;
  const long long kmax = static_cast<long long>(std::floor(t + hmax)) + 1;

  std::vector<std::vector<long long>> points;
  std::vector<long long> k(d, -kmax);
  while (true) {
    points.push_back(k);
    int i = 0;
    while (i < d && ++k[i] > kmax) k[i++] = -kmax;
    if (i == d) break;
  }

  const GaussRule& gl = gauss_legendre(n_quad);
  std::vector<double> vals(points.size(), 0.0);
  parallel_for(static_cast<int>(points.size()), threads, [&](int idx) {
    const std::vector<long long>& kk = points[idx];
    // exact classification off the boundary shell: F is monotone in
    // each |x_l|, so the dominant/dominated corner decides the cube
    std::vector<double> corner(d);
    for (int l = 0; l < d; ++l) {
      corner[l] = (std::abs(static_cast<double>(kk[l])) + hmax) / t;
    }
    if (eval_F(spec, corner) <= 0.0) {
      vals[idx] = 1.0;
      return;
    }
    for (int l = 0; l < d; ++l) {
      corner[l] = std::max(std::abs(static_cast<double>(kk[l])) - hmax, 0.0) / t;
    }
    if (eval_F(spec, corner) > 0.0) {
      vals[idx] = 0.0;
      return;
    }
    // Boundary shell: nested Gauss quadrature from coordinate d-1 in to
    // coordinate 1, each level restricted to the exact feasible interval
    // of that coordinate (so the chord-collapse kink sits at interval
    // endpoints), innermost coordinate via the kernel CDF against the
    // chord.
    std::vector<double> higher(d);  // values of coordinates > level
    auto integrate = [&](auto&& self, int level) -> double {
      std::span<const double> fixed(higher.data() + level + 1,
                                    d - 1 - level);
      const double X = max_abs_coord(spec, t, level, fixed);
      if (X < 0.0) return 0.0;
      if (level == 0) {
        return mol.cdf1((kk[0] + X) / eps) - mol.cdf1((kk[0] - X) / eps);
      }
      const double a = std::max(-hmax, static_cast<double>(kk[level]) - X);
      const double b = std::min(hmax, static_cast<double>(kk[level]) + X);
      if (!(b > a)) return 0.0;
      double acc = 0.0;
      for (int q = 0; q < n_quad; ++q) {
        const double y = 0.5 * (a + b) + 0.5 * (b - a) * gl.nodes[q];
        const double w =
            gl.weights[q] * 0.5 * (b - a) * mol.rho1(y / eps) / eps;
        if (w == 0.0) continue;
        higher[level] = kk[level] - y;
        acc += w * self(self, level - 1);
      }
      return acc;
    };
    vals[idx] = integrate(integrate, d - 1);
  });
  double total = 0.0;
  for (double v : vals) total += v;
  return total;
}

PoissonRhs poisson_rhs(const DomainSpec& spec, FtEngine& engine, double t,
                       double eps, const Mollifier& mol, int K, int threads) {
  if (K < 1) throw std::invalid_argument("poisson_rhs: K >= 1");
  const int d = spec.d;
  const double td = std::pow(t, d);

  std::vector<std::vector<long long>> freqs;
  std::vector<long long> k(d, -K);
  while (true) {
    freqs.push_back(k);
    int i = 0;
    while (i < d && ++k[i] > K) k[i++] = -K;
    if (i == d) break;
  }

  std::vector<double> terms(freqs.size(), 0.0);
  std::vector<double> fvals(freqs.size(), 0.0);
  parallel_for(static_cast<int>(freqs.size()), threads, [&](int idx) {
    const std::vector<long long>& kk = freqs[idx];
    long long g = 0;
    double norm2 = 0.0;
    for (long long c : kk) {
      g = std::gcd(g, std::llabs(c));
      norm2 += static_cast<double>(c) * c;
    }
    if (g == 0) {
      terms[idx] = volume(spec) * td;
      return;
    }
    std::vector<double> base(d);
    for (int l = 0; l < d; ++l) {
      base[l] = static_cast<double>(std::llabs(kk[l]) / g);
    }
    const double ft = engine.profile(base)->fourier(t * std::sqrt(norm2));
    fvals[idx] = ft;
    double rh = 1.0;
    for (long long c : kk) rh *= mol.rho_hat1(eps * c);
    terms[idx] = td * ft * rh;
  });
  PoissonRhs out;
  out.K = K;
  for (double v : terms) out.value += v;

  // Truncation tail from the measured transform envelope: the axis
  // directions decay slowest, |ft(r u)| <= C r^{-1-nu_min}; C is read
  // off the computed terms and doubled.
  const double nu_min =
      *std::min_element(spec.table.nu.begin(), spec.table.nu.end());
  double c_env = 0.0;
  for (size_t i = 0; i < freqs.size(); ++i) {
    double norm2 = 0.0;
    for (long long c : freqs[i]) norm2 += static_cast<double>(c) * c;
    if (norm2 == 0.0) continue;
    const double r = t * std::sqrt(norm2);
    c_env = std::max(c_env, std::abs(fvals[i]) * std::pow(r, 1.0 + nu_min));
  }
  c_env *= 2.0;
  const int m = mol.order;
  const double h = mol.support_radius;
  for (long long s = K + 1; s <= K + 400; ++s) {
    const double shell =
        std::pow(2.0 * s + 1.0, d) - std::pow(2.0 * s - 1.0, d);
    const double arg = 2.0 * h * eps * s / m;  // scaled sinc argument
    const double rho_factor =
        arg > 1.0 / M_PI ? std::pow(1.0 / (M_PI * arg), m) : 1.0;
    const double inc = td * c_env * std::pow(t * s, -1.0 - nu_min) * shell *
                       rho_factor;
    out.tail_bound += inc;
    if (inc < 1e-9 * std::max(out.tail_bound, 1e-12)) break;
  }
  return out;
}

PoissonVerdict poisson_check(const DomainSpec& spec, const Rational& t, int K,
                             int order, int threads) {
  const double td = t.to_double();
  if (!(td >= 2.0)) {
    throw std::invalid_argument("poisson_check: need t >= 2 so t - eps >= 1");
  }
  PoissonVerdict v;
  v.t = td;
  v.eps = epsilon_schedule(spec.d, td);
  v.K = K;
  v.order = order;
  const Mollifier mol = make_mollifier(spec, order);

  v.lhs = smoothed_count(spec, td, v.eps, mol, threads);
  const double lhs_coarse = smoothed_count(spec, td, v.eps, mol, threads, 12);
  v.quad_tol = 4.0 * std::abs(v.lhs - lhs_coarse) + 1e-4;

  v.rhs_minus = smoothed_count(spec, td - v.eps, v.eps, mol, threads);
  v.rhs_plus = smoothed_count(spec, td + v.eps, v.eps, mol, threads);
  v.exact = count_lattice_points(spec, t, threads).get_str();

  FtEngine engine(spec);
  const PoissonRhs rhs = poisson_rhs(spec, engine, td, v.eps, mol, K, threads);
  v.rhs = rhs.value;
  v.tail_bound = rhs.tail_bound;
  v.poisson_gap = std::abs(v.lhs - v.rhs);

  const double exact_d = std::strtod(v.exact.c_str(), nullptr);
  v.sandwich_ok = v.rhs_minus <= exact_d + 1e-6 && exact_d <= v.rhs_plus + 1e-6;
  v.poisson_ok = v.poisson_gap <= v.tail_bound + v.quad_tol;
  v.pass = v.sandwich_ok && v.poisson_ok;
  return v;
}

std::string poisson_json(const PoissonVerdict& v) {
  nlohmann::json j;
  j["t"] = round_for_report(v.t);
  j["eps"] = round_for_report(v.eps);
  j["K"] = v.K;
  j["order"] = v.order;
  j["lhs"] = round_for_report(v.lhs);
  j["exact"] = v.exact;
  j["rhs_minus"] = round_for_report(v.rhs_minus);
  j["rhs_plus"] = round_for_report(v.rhs_plus);
  j["rhs"] = round_for_report(v.rhs);
  j["poisson_gap"] = round_for_report(v.poisson_gap);
  j["tail_bound"] = round_for_report(v.tail_bound);
  j["quad_tol"] = round_for_report(v.quad_tol);
  j["sandwich_ok"] = v.sandwich_ok;
  j["poisson_ok"] = v.poisson_ok;
  j["pass"] = v.pass;
  return j.dump();
}

}  // namespace latlab
