#include "latlab/caps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "latlab/numerics.hpp"
#include "latlab/parallel.hpp"
#include "latlab/report.hpp"

namespace latlab {

namespace {

std::vector<double> unit_direction(std::span<const double> xi, int d) {
  if (static_cast<int>(xi.size()) != d) {
    throw std::invalid_argument("direction dimension mismatch");
  }
  double n2 = 0.0;
  for (double v : xi) n2 += v * v;
  if (!(n2 > 0.0)) throw std::invalid_argument("direction must be nonzero");
  std::vector<double> u(xi.begin(), xi.end());
  const double inv = 1.0 / std::sqrt(n2);
  for (double& v : u) v *= inv;
  return u;
}

struct CapGeometry {
  const DomainSpec* spec = nullptr;
  std::vector<double> n;  // unit outward normal = direction
  std::vector<double> a;  // normal point x(xi)
  std::vector<std::vector<double>> basis;  // tangent-plane basis
  const SphereRule* rule = nullptr;
  double g_cap = 0.0;    // deeper than any chord through the body
  double rho_cap = 0.0;  // wider than the body's shadow on the plane
};

CapGeometry make_cap_geometry(const DomainSpec& spec,
                              std::span<const double> xi) {
  CapGeometry g;
  g.spec = &spec;
  g.n = unit_direction(xi, spec.d);
  g.a = support_point(spec, g.n);
  g.basis = orthonormal_complement(g.n);
  g.rule = &sphere_surface_rule(spec.d - 2);
  double h = 0.0;
  for (int l = 0; l < spec.d; ++l) h += g.a[l] * g.n[l];
  g.g_cap = 2.0 * h + 1.0;
  // per-coordinate extent of D is 1, so the shadow fits in this radius
  g.rho_cap = 2.0 * std::sqrt(static_cast<double>(spec.d)) + 1.0;
  return g;
}

// Depth of the boundary below the tangent plane at a + rho * dir, i.e.
// the g >= 0 with F(a + rho dir - g n) = 0; +inf when the inward ray
// misses the body.
double cap_depth(const CapGeometry& g, std::span<const double> dir,
                 double rho) {
  const DomainSpec& spec = *g.spec;
  const int d = spec.d;
  std::vector<double> pt(d);
  auto f = [&](double depth) {
    for (int l = 0; l < d; ++l) {
      pt[l] = g.a[l] + rho * dir[l] - depth * g.n[l];
    }
    return eval_F(spec, pt);
  };
  if (f(0.0) <= 0.0) return 0.0;
  double hi = 1e-6;
  while (hi <= g.g_cap && f(hi) > 0.0) hi *= 2.0;
  if (hi > g.g_cap) return std::numeric_limits<double>::infinity();
  auto neg = [&](double depth) { return -f(depth); };
  return solve_bracketed(neg, 0.0, hi, 1e-12);
}

// Patch radius along dir at which the depth reaches delta (depth is
// nondecreasing in rho by convexity).
double cap_rho_max(const CapGeometry& g, std::span<const double> dir,
                   double delta) {
  double hi = std::max(1e-4, 0.25 * delta);
  while (cap_depth(g, dir, hi) < delta) {
    hi *= 2.0;
    if (hi > g.rho_cap) {
      throw std::runtime_error("cap patch does not cover the cap "
                               "(delta too large for this direction)");
    }
  }
  auto f = [&](double rho) {
    const double dep = cap_depth(g, dir, rho);
    return std::isinf(dep) ? g.g_cap : dep - delta;
  };
  return solve_bracketed(f, 0.0, hi, 1e-11);
}

}  // namespace

CapStats cap_stats(const DomainSpec& spec, std::span<const double> xi,
                   double delta) {
  if (!(delta > 0.0) || delta > 1.0) {
    throw std::invalid_argument("cap_stats: need 0 < delta <= 1");
  }
  const CapGeometry g = make_cap_geometry(spec, xi);
  const int d = spec.d;

  CapStats stats;
  stats.xi = g.n;
  stats.delta = delta;
  stats.support_pt = g.a;
  stats.extents.assign(d, 0.0);

  const int n_rho = 16;
  const GaussRule& gl = gauss_legendre(n_rho);
  std::vector<double> dir(d), y(d), grad(d);
  double measure = 0.0;
  for (size_t m = 0; m < g.rule->w.size(); ++m) {
    for (int l = 0; l < d; ++l) dir[l] = 0.0;
    for (int b = 0; b < d - 1; ++b) {
      for (int l = 0; l < d; ++l) dir[l] += g.rule->v[m][b] * g.basis[b][l];
    }
    const double rmax = cap_rho_max(g, dir, delta);
    double patch = 0.0;
    for (int q = 0; q <= n_rho; ++q) {
      // GL nodes for the measure, plus the rim point (q == n_rho) which
      // only feeds the extents.
      const double rho = (q < n_rho)
                             ? 0.5 * rmax * (gl.nodes[q] + 1.0)
                             : rmax;
      const double dep = cap_depth(g, dir, rho);
      for (int l = 0; l < d; ++l) {
        y[l] = g.a[l] + rho * dir[l] - dep * g.n[l];
      }
      for (int l = 0; l < d; ++l) {
        stats.extents[l] = std::max(stats.extents[l], std::abs(y[l] - g.a[l]));
      }
      if (q == n_rho) continue;
      grad_F(spec, y, grad);
      double gn = 0.0, gg = 0.0;
      for (int l = 0; l < d; ++l) {
        gn += grad[l] * g.n[l];
        gg += grad[l] * grad[l];
      }
      const double area_factor = std::sqrt(gg) / gn;
      patch += gl.weights[q] * 0.5 * rmax * area_factor *
               std::pow(rho, d - 2);
    }
    measure += g.rule->w[m] * patch;
  }
  stats.measure = measure;
  return stats;
}

double cap_measure(const DomainSpec& spec, std::span<const double> xi,
                   double delta) {
  return cap_stats(spec, xi, delta).measure;
}

std::vector<double> cap_extents(const DomainSpec& spec,
                                std::span<const double> xi, double delta) {
  return cap_stats(spec, xi, delta).extents;
}

std::vector<double> cap_extent_bounds(const DomainSpec& spec, int j,
                                      std::span<const double> xi, double t,
                                      double eps0) {
  if (j < 0 || j >= spec.d) throw std::out_of_range("cap_extent_bounds: axis");
  if (!(t > 0.0)) throw std::invalid_argument("cap_extent_bounds: t > 0");
  const std::vector<double> u = unit_direction(xi, spec.d);
  if (eps0 <= 0.0) eps0 = 1.0 / std::sqrt(2.0 * spec.d);
  if (std::abs(u[j]) < eps0) {
    throw std::invalid_argument("cap_extent_bounds: direction outside cone");
  }
  std::vector<double> factors(spec.d, 1.0);
  for (int l = 0; l < spec.d; ++l) {
    if (l == j) continue;
    const double mw = static_cast<double>(m_exponent(spec, j, l)) *
                      spec.omega[l];
    const double b1 = std::pow(t, -1.0 / mw);
    double b2;
    if (mw <= 2.0) {
      b2 = std::pow(t, -0.5);
    } else if (u[l] == 0.0) {
      b2 = std::numeric_limits<double>::infinity();
    } else {
      b2 = std::pow(t, -0.5) *
           std::pow(std::abs(u[l]), -(mw - 2.0) / (2.0 * (mw - 1.0)));
    }
    factors[l] = std::min(b1, b2);
  }
  return factors;
}

double cap_bound(const DomainSpec& spec, int j, std::span<const double> xi,
                 double t, double eps0) {
  const std::vector<double> factors = cap_extent_bounds(spec, j, xi, t, eps0);
  double bound = 1.0;
  for (int l = 0; l < spec.d; ++l) {
    if (l != j) bound *= factors[l];
  }
  return bound;
}

CapCheck lemma1_check(const DomainSpec& spec, int axis, int n_dirs,
                      double t_lo, double t_hi, int n_freqs,
                      std::uint64_t seed, int threads, double slope_tol,
                      double eps0) {
  if (axis < 0 || axis >= spec.d) throw std::out_of_range("lemma1_check: axis");
  if (n_dirs < 1 || n_freqs < 2 || !(t_lo > 1.0) || !(t_hi > 10.0 * t_lo)) {
    throw std::invalid_argument("lemma1_check: need n_dirs >= 1, t_lo > 1 "
                                "and a span of at least one decade");
  }
  const int d = spec.d;
  if (eps0 <= 0.0) eps0 = 1.0 / std::sqrt(2.0 * d);

  std::vector<std::vector<double>> dirs;
  {
    std::vector<double> e(d, 0.0);
    e[axis] = 1.0;
    dirs.push_back(e);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.05, 0.95);
  const double rho_max = std::sqrt(1.0 - eps0 * eps0);
  while (static_cast<int>(dirs.size()) < n_dirs) {
    std::vector<double> w(d, 0.0);
    double n2 = 0.0;
    for (int l = 0; l < d; ++l) {
      if (l == axis) continue;
      w[l] = gauss(rng);
      n2 += w[l] * w[l];
    }
    if (n2 < 1e-12) continue;
    const double rho = rho_max * unif(rng);
    const double scale = rho / std::sqrt(n2);
    for (int l = 0; l < d; ++l) w[l] *= scale;
    w[axis] = std::sqrt(1.0 - rho * rho);
    dirs.push_back(std::move(w));
  }

  std::vector<double> grid(n_freqs);
  const double la = std::log(t_lo), lb = std::log(t_hi);
  for (int i = 0; i < n_freqs; ++i) {
    grid[i] = std::exp(la + (lb - la) * i / (n_freqs - 1));
  }

  const int n_tasks = static_cast<int>(dirs.size() * grid.size());
  std::vector<CapRow> rows(n_tasks);
  parallel_for(n_tasks, threads, [&](int task) {
    const size_t di = task / grid.size();
    const size_t ti = task % grid.size();
    CapRow& row = rows[task];
    row.xi = dirs[di];
    row.t = grid[ti];
    row.delta = 1.0 / grid[ti];
    const CapStats stats = cap_stats(spec, dirs[di], row.delta);
    row.extents = stats.extents;
    row.measure = stats.measure;
    row.bound = cap_bound(spec, axis, dirs[di], grid[ti], eps0);
    row.ratio = stats.measure / row.bound;
    const std::vector<double> fac =
        cap_extent_bounds(spec, axis, dirs[di], grid[ti], eps0);
    row.extent_ratio = 0.0;
    for (int l = 0; l < d; ++l) {
      if (l == axis) continue;
      row.extent_ratio = std::max(row.extent_ratio, stats.extents[l] / fac[l]);
    }
  });

  CapCheck check;
  check.axis = axis;
  check.rows = std::move(rows);
  std::vector<double> sup_m(grid.size(), 0.0), sup_e(grid.size(), 0.0);
  for (size_t di = 0; di < dirs.size(); ++di) {
    for (size_t ti = 0; ti < grid.size(); ++ti) {
      const CapRow& row = check.rows[di * grid.size() + ti];
      sup_m[ti] = std::max(sup_m[ti], row.ratio);
      sup_e[ti] = std::max(sup_e[ti], row.extent_ratio);
      check.max_ratio = std::max(check.max_ratio, row.ratio);
      check.max_extent_ratio = std::max(check.max_extent_ratio,
                                        row.extent_ratio);
    }
  }
  auto top_slope = [&](const std::vector<double>& sup) {
    std::vector<double> lx, ly;
    double run = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
      run = std::max(run, sup[i]);
      if (grid[i] >= t_hi / 10.0 && run > 0.0) {
        lx.push_back(std::log(grid[i]));
        ly.push_back(std::log(run));
      }
    }
    if (lx.size() < 2) return 0.0;
    return fit_line(lx, ly).slope;
  };
  check.measure_slope = top_slope(sup_m);
  check.extent_slope = top_slope(sup_e);
  check.pass = check.measure_slope <= slope_tol &&
               check.extent_slope <= slope_tol;
  return check;
}

std::string cap_csv(const CapCheck& check) {
  std::string out;
  if (!check.rows.empty()) {
    const size_t d = check.rows.front().xi.size();
    for (size_t l = 0; l < d; ++l) out += "xi" + std::to_string(l + 1) + ",";
    out += "t,delta,";
    for (size_t l = 0; l < d; ++l) out += "ext" + std::to_string(l + 1) + ",";
  } else {
    out += "t,delta,";
  }
  out += "measure,bound,ratio\n";
  for (const CapRow& row : check.rows) {
    for (double c : row.xi) {
      out += format_double(round_for_report(c));
      out += ',';
    }
    out += format_double(round_for_report(row.t));
    out += ',';
    out += format_double(round_for_report(row.delta));
    out += ',';
    for (double e : row.extents) {
      out += format_double(round_for_report(e));
      out += ',';
    }
    out += format_double(round_for_report(row.measure));
    out += ',';
    out += format_double(round_for_report(row.bound));
    out += ',';
    out += format_double(round_for_report(row.ratio));
    out += '\n';
  }
  return out;
}

std::string cap_json(const CapCheck& check) {
  nlohmann::json j;
  j["axis"] = check.axis + 1;
  j["max_ratio"] = round_for_report(check.max_ratio);
  j["max_extent_ratio"] = round_for_report(check.max_extent_ratio);
  j["measure_slope"] = round_for_report(check.measure_slope);
  j["extent_slope"] = round_for_report(check.extent_slope);
  j["pass"] = check.pass;
  j["rows"] = check.rows.size();
  return j.dump();
}

std::string cap_stats_json(const CapStats& stats) {
  nlohmann::json j;
  j["xi"] = nlohmann::json::array();
  for (double c : stats.xi) j["xi"].push_back(round_for_report(c));
  j["delta"] = round_for_report(stats.delta);
  j["support_point"] = nlohmann::json::array();
  for (double c : stats.support_pt) {
    j["support_point"].push_back(round_for_report(c));
  }
  j["extents"] = nlohmann::json::array();
  for (double e : stats.extents) j["extents"].push_back(round_for_report(e));
  j["measure"] = round_for_report(stats.measure);
  return j.dump();
}

}  // namespace latlab
