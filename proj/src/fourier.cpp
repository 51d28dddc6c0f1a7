#include "latlab/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

#include "json.hpp"
#include "latlab/numerics.hpp"
#include "latlab/parallel.hpp"
#include "latlab/report.hpp"

namespace latlab {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<double> normalized(std::span<const double> xi, int d) {
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

// Returns the axis index if xi is supported on a single coordinate.
int axis_of(std::span<const double> xi) {
  int axis = -1;
  for (size_t l = 0; l < xi.size(); ++l) {
    if (xi[l] != 0.0) {
      if (axis >= 0) return -1;
      axis = static_cast<int>(l);
    }
  }
  return axis;
}

// ---- axis slices via the block-density reduction ------------------------
//
// Fix x_j = s with j in block p and write u = |s|^{w_j}. The slice volume
// splits into the block-p residual (a Dirichlet density C' a' v^{a'-1})
// and the closed-form volume of the remaining blocks,
// V_rest(T) = D_rest T^{S_rest}:
//   A_j(s) = int_0^{1-u} C' a' v^{a'-1} V_rest(1 - (u+v)^{m_p}) dv.

struct AxisSliceData {
  int block = 0;
  int m = 1;
  double alpha_res = 0.0;  // residual block-p coordinates
  double c_res = 1.0;
  bool has_res = false;
  double s_rest = 0.0;  // sum over other blocks of alpha_q / m_q
  double d_rest = 1.0;
  bool has_rest = false;
};

AxisSliceData axis_slice_data(const DomainSpec& spec, int j) {
  AxisSliceData data;
  data.block = spec.table.p_of[j];
  data.m = spec.ms[data.block];

  double prod = 1.0;
  int coord = 0;
  for (size_t p = 0; p < spec.blocks.size(); ++p) {
    if (static_cast<int>(p) == data.block) {
      for (int w : spec.blocks[p]) {
        if (coord != j) {
          data.alpha_res += 1.0 / w;
          prod *= 2.0 * gamma_fn(1.0 + 1.0 / w);
          data.has_res = true;
        }
        ++coord;
      }
    } else {
      coord += static_cast<int>(spec.blocks[p].size());
    }
  }
  if (data.has_res) data.c_res = prod / gamma_fn(1.0 + data.alpha_res);

  double num = 1.0;
  for (size_t q = 0; q < spec.blocks.size(); ++q) {
    if (static_cast<int>(q) == data.block) continue;
    data.has_rest = true;
    double alpha_q = 0.0, cprod = 1.0;
    for (int w : spec.blocks[q]) {
      alpha_q += 1.0 / w;
      cprod *= 2.0 * gamma_fn(1.0 + 1.0 / w);
    }
    const double c_q = cprod / gamma_fn(1.0 + alpha_q);
    const double beta_q = alpha_q / spec.ms[q];
    data.s_rest += beta_q;
    num *= c_q * gamma_fn(1.0 + beta_q);
  }
  if (data.has_rest) data.d_rest = num / gamma_fn(1.0 + data.s_rest);
  return data;
}

double axis_slice_area(const AxisSliceData& data, int omega_j, double s) {
  const double u = std::pow(std::abs(s), omega_j);
  if (u >= 1.0) return 0.0;
  if (!data.has_res) {
    // block p is the single coordinate j
    const double t = 1.0 - std::pow(u, data.m);
    if (t <= 0.0) return 0.0;
    return data.has_rest ? data.d_rest * std::pow(t, data.s_rest) : 0.0;
  }
  if (!data.has_rest) {
    return data.c_res * std::pow(1.0 - u, data.alpha_res);
  }
  const double ca = data.c_res * data.alpha_res;
  const double ar = data.alpha_res;
  const int m = data.m;
  const double sr = data.s_rest, dr = data.d_rest;
  auto f = [&](double v) {
    const double t = 1.0 - std::pow(u + v, m);
    if (t <= 0.0) return 0.0;
    return ca * std::pow(v, ar - 1.0) * dr * std::pow(t, sr);
  };
  return tanh_sinh(f, 0.0, 1.0 - u, 1e-11);
}

// ---- generic slices via star-shaped radial integration ------------------

// Geometry shared by all slice evaluations along one direction.
struct SliceGeometry {
  const DomainSpec* spec = nullptr;
  std::vector<double> xi;     // unit
  double h = 0.0;             // support half-width
  std::vector<double> xstar;  // support point: <xstar, xi> = h
  std::vector<std::vector<double>> basis;  // orthonormal basis of xi-perp
  const SphereRule* rule = nullptr;
};

SliceGeometry make_geometry(const DomainSpec& spec, std::vector<double> xi) {
  SliceGeometry g;
  g.spec = &spec;
  g.xi = std::move(xi);
  g.xstar = support_point(spec, g.xi);
  g.h = 0.0;
  for (int l = 0; l < spec.d; ++l) g.h += g.xstar[l] * g.xi[l];
  g.basis = orthonormal_complement(g.xi);
  g.rule = &sphere_surface_rule(spec.d - 2);
  return g;
}

// A(s) as the (d-1)-volume of the convex slice, integrated radially about
// the chord point (s/h) * xstar:  A = (d-1)^{-1} int_{S^{d-2}} r^{d-1}.
double generic_slice_area(const SliceGeometry& g, double s) {
  const DomainSpec& spec = *g.spec;
  const int d = spec.d;
  if (std::abs(s) >= g.h) return 0.0;
  std::vector<double> center(d);
  for (int l = 0; l < d; ++l) center[l] = (s / g.h) * g.xstar[l];
  std::vector<double> pt(d);
  double acc = 0.0;
  for (size_t m = 0; m < g.rule->w.size(); ++m) {
    std::vector<double> dir(d, 0.0);
    for (int b = 0; b < d - 1; ++b) {
      const double c = g.rule->v[m][b];
      for (int l = 0; l < d; ++l) dir[l] += c * g.basis[b][l];
    }
    auto f = [&](double rho) {
      for (int l = 0; l < d; ++l) pt[l] = center[l] + rho * dir[l];
      return eval_F(spec, pt);
    };
    double hi = 0.5;
    while (f(hi) < 0.0 && hi < 64.0) hi *= 2.0;
    const double r = solve_bracketed(f, 0.0, hi, 1e-13);
    acc += g.rule->w[m] * std::pow(r, d - 1);
  }
  return acc / (d - 1);
}

std::vector<double> panel_edges(double h, const FtOptions& opts) {
  std::vector<double> edges;
  const double split = 0.75 * h;
  for (int i = 0; i <= opts.base_panels; ++i) {
    edges.push_back(split * i / opts.base_panels);
  }
  double w = h - split;
  for (int k = 1; k <= opts.refine_depth; ++k) {
    w *= 0.5;
    edges.push_back(h - w);
  }
  edges.push_back(h);
  return edges;
}

double running_max_top_decade_slope(const std::vector<double>& t,
                                    const std::vector<double>& vals) {
  std::vector<double> lx, ly;
  double run_max = 0.0;
  const double t_hi = t.back();
  for (size_t i = 0; i < t.size(); ++i) {
    run_max = std::max(run_max, vals[i]);
    if (t[i] >= t_hi / 10.0 && run_max > 0.0) {
      lx.push_back(std::log(t[i]));
      ly.push_back(std::log(run_max));
    }
  }
  if (lx.size() < 2) return 0.0;
  return fit_line(lx, ly).slope;
}

}  // namespace

double SliceProfile::eval(double s) const {
  s = std::abs(s);
  if (s >= h || panels.empty()) return 0.0;
  size_t lo = 0, hi = panels.size() - 1;
  while (lo < hi) {
    const size_t mid = (lo + hi) / 2;
    if (s < panels[mid].b) hi = mid; else lo = mid + 1;
  }
  const Panel& p = panels[lo];
  const double x = (2.0 * s - p.a - p.b) / (p.b - p.a);
  double acc = 0.0;
  for (size_t n = 0; n < p.coeffs.size(); ++n) {
    acc += p.coeffs[n] * legendre_p(static_cast<int>(n), x);
  }
  return std::max(acc, 0.0);
}

double SliceProfile::fourier(double r) const {
  std::complex<double> total(0.0, 0.0);
  std::vector<double> jn;
  for (const Panel& p : panels) {
    const double c = 0.5 * (p.a + p.b), e = 0.5 * (p.b - p.a);
    const int deg = static_cast<int>(p.coeffs.size()) - 1;
    std::complex<double> inner(0.0, 0.0);
    const double kappa = kTwoPi * r * e;
    if (kappa < 1e-12) {
      inner = 2.0 * p.coeffs[0];
    } else {
      jn.assign(deg + 1, 0.0);
      spherical_jn(deg, kappa, jn.data());
      // int_{-1}^{1} P_n(x) e^{-i kappa x} dx = 2 (-i)^n j_n(kappa)
      static const std::complex<double> kPow[4] = {
          {1.0, 0.0}, {0.0, -1.0}, {-1.0, 0.0}, {0.0, 1.0}};
      for (int n = 0; n <= deg; ++n) {
        inner += p.coeffs[n] * 2.0 * kPow[n % 4] * jn[n];
      }
    }
    const double phase = -kTwoPi * r * c;
    total += e * std::polar(1.0, phase) * inner;
  }
  // A is even, so the two half-axes are complex conjugates.
  return 2.0 * total.real();
}

double slice_area(const DomainSpec& spec, std::span<const double> xi,
                  double s) {
  const std::vector<double> u = normalized(xi, spec.d);
  const int axis = axis_of(u);
  if (axis >= 0) {
    return axis_slice_area(axis_slice_data(spec, axis), spec.omega[axis], s);
  }
  return generic_slice_area(make_geometry(spec, u), s);
}

SliceProfile build_slice_profile(const DomainSpec& spec,
                                 std::span<const double> xi,
                                 const FtOptions& opts) {
  SliceProfile prof;
  prof.xi = normalized(xi, spec.d);
  const int axis = axis_of(prof.xi);

  std::function<double(double)> area;
  if (axis >= 0) {
    prof.h = radial_boundary(spec, prof.xi);
    AxisSliceData data = axis_slice_data(spec, axis);
    const int w = spec.omega[axis];
    area = [data, w](double s) { return axis_slice_area(data, w, s); };
  } else {
    auto geom = std::make_shared<SliceGeometry>(make_geometry(spec, prof.xi));
    prof.h = geom->h;
    area = [geom](double s) { return generic_slice_area(*geom, s); };
  }

  const std::vector<double> edges = panel_edges(prof.h, opts);
  const int n_nodes = opts.panel_degree + 1;
  const GaussRule& gl = gauss_legendre(n_nodes);
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    Panel panel;
    panel.a = edges[i];
    panel.b = edges[i + 1];
    std::vector<double> vals(n_nodes);
    for (int q = 0; q < n_nodes; ++q) {
      const double s = 0.5 * (panel.a + panel.b) +
                       0.5 * (panel.b - panel.a) * gl.nodes[q];
      vals[q] = area(s);
      prof.samples.emplace_back(s, vals[q]);
    }
    panel.coeffs = legendre_coeffs(vals, opts.panel_degree);
    const size_t deg = panel.coeffs.size() - 1;
    prof.quad_error += (panel.b - panel.a) *
                       (std::abs(panel.coeffs[deg]) +
                        std::abs(panel.coeffs[deg - 1]));
    prof.panels.push_back(std::move(panel));
  }
  prof.quad_error = 2.0 * prof.quad_error + 1e-12;
  return prof;
}

FTValue ft_indicator(const DomainSpec& spec, std::span<const double> xi,
                     double t, const FtOptions& opts) {
  if (t < 0.0) throw std::invalid_argument("ft_indicator: t must be >= 0");
  const SliceProfile prof = build_slice_profile(spec, xi, opts);
  FTValue out;
  out.xi = prof.xi;
  out.t = t;
  out.value = prof.fourier(t);
  out.quad_error = prof.quad_error;
  return out;
}

double ft_scaled(const DomainSpec& spec, std::span<const double> xi, double t,
                 const FtOptions& opts) {
  double n = 0.0;
  for (double v : xi) n += v * v;
  n = std::sqrt(n);
  const FTValue base = ft_indicator(spec, xi, t * n, opts);
  return std::pow(t, spec.d) * base.value;
}

double theorem2_bound(const DomainSpec& spec, int j, std::span<const double> xi,
                      double t, double eps0) {
  if (j < 0 || j >= spec.d) throw std::out_of_range("theorem2_bound: axis");
  if (!(t > 0.0)) throw std::invalid_argument("theorem2_bound: t must be > 0");
  const std::vector<double> u = normalized(xi, spec.d);
  if (eps0 <= 0.0) eps0 = 1.0 / std::sqrt(2.0 * spec.d);
  if (std::abs(u[j]) < eps0) {
    throw std::invalid_argument("theorem2_bound: direction outside the cone");
  }
  double bound = 1.0 / t;
  for (int l = 0; l < spec.d; ++l) {
    if (l == j) continue;
    const double mw = static_cast<double>(m_exponent(spec, j, l)) *
                      spec.omega[l];
    const double b1 = std::pow(t, -1.0 / mw);
    double b2;
    if (mw <= 2.0) {
      b2 = std::pow(t, -0.5);
    } else if (std::abs(u[l]) == 0.0) {
      b2 = std::numeric_limits<double>::infinity();
    } else {
      b2 = std::pow(t, -0.5) *
           std::pow(std::abs(u[l]), -(mw - 2.0) / (2.0 * (mw - 1.0)));
    }
    bound *= std::min(b1, b2);
  }
  return bound;
}

DecayCheck decay_check(const DomainSpec& spec, int axis, int n_dirs,
                       double t_lo, double t_hi, int n_freqs,
                       std::uint64_t seed, int threads, double slope_tol,
                       double eps0) {
  if (axis < 0 || axis >= spec.d) throw std::out_of_range("decay_check: axis");
  if (n_dirs < 1 || n_freqs < 2 || !(t_lo > 0.0) || !(t_hi > 10.0 * t_lo)) {
    throw std::invalid_argument("decay_check: need n_dirs >= 1 and a t span "
                                "of at least one decade");
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

  std::vector<std::vector<DecayRow>> per_dir(dirs.size());
  parallel_for(static_cast<int>(dirs.size()), threads, [&](int di) {
    const SliceProfile prof = build_slice_profile(spec, dirs[di]);
    auto& rows = per_dir[di];
    rows.resize(grid.size());
    for (size_t i = 0; i < grid.size(); ++i) {
      DecayRow& row = rows[i];
      row.xi = dirs[di];
      row.t = grid[i];
      row.value = prof.fourier(grid[i]);
      row.bound = theorem2_bound(spec, axis, dirs[di], grid[i], eps0);
      row.ratio = std::abs(row.value) / row.bound;
    }
  });

  DecayCheck check;
  check.axis = axis;
  std::vector<double> sup(grid.size(), 0.0);
  for (size_t di = 0; di < per_dir.size(); ++di) {
    for (size_t i = 0; i < grid.size(); ++i) {
      check.rows.push_back(per_dir[di][i]);
      sup[i] = std::max(sup[i], per_dir[di][i].ratio);
      check.max_ratio = std::max(check.max_ratio, per_dir[di][i].ratio);
    }
  }
  check.top_decade_slope = running_max_top_decade_slope(grid, sup);
  check.pass = check.top_decade_slope <= slope_tol;
  return check;
}

AxisAsymptotics axis_asymptotics(const DomainSpec& spec, int axis, double t_lo,
                                 double t_hi, int n_grid) {
  if (axis < 0 || axis >= spec.d) {
    throw std::out_of_range("axis_asymptotics: axis");
  }
  if (!(t_lo > 0.0) || t_hi < t_lo * std::pow(10.0, 1.5)) {
    throw std::invalid_argument("axis_asymptotics: need >= 1.5 decades of t");
  }
  std::vector<double> e(spec.d, 0.0);
  e[axis] = 1.0;
  const SliceProfile prof = build_slice_profile(spec, e);

  AxisAsymptotics fit;
  fit.axis = axis;
  fit.nu = spec.table.nu[axis];
  fit.predicted_exponent = -1.0 - fit.nu;
  fit.expected_offset = std::fmod(fit.nu / 4.0, 0.5);

  const double step = (t_hi - t_lo) / (n_grid - 1);
  if (step > 0.2) {
    throw std::invalid_argument(
        "axis_asymptotics: grid too coarse to resolve oscillations");
  }
  std::vector<double> ts(n_grid), vals(n_grid);
  for (int i = 0; i < n_grid; ++i) {
    ts[i] = t_lo + step * i;
    vals[i] = prof.fourier(ts[i]);
  }

  std::vector<double> zeros;
  for (int i = 0; i + 1 < n_grid; ++i) {
    if (vals[i] == 0.0) { zeros.push_back(ts[i]); continue; }
    if (vals[i] * vals[i + 1] < 0.0) {
      auto f = [&](double t) { return prof.fourier(t); };
      const double lo = vals[i] < 0.0 ? ts[i] : ts[i + 1];
      const double hi = vals[i] < 0.0 ? ts[i + 1] : ts[i];
      // solve_bracketed wants f(lo) <= 0 <= f(hi); allow reversed order
      double z;
      if (lo < hi) {
        z = solve_bracketed(f, lo, hi, 1e-10);
      } else {
        auto g = [&](double t) { return -prof.fourier(t); };
        z = solve_bracketed(g, hi, lo, 1e-10);
      }
      zeros.push_back(z);
    }
  }
  std::sort(zeros.begin(), zeros.end());
  fit.n_zeros = static_cast<int>(zeros.size());
  if (zeros.size() < 6) {
    throw std::invalid_argument("axis_asymptotics: too few oscillations");
  }
  double sum = 0.0, max_dev = 0.0;
  for (size_t i = 0; i + 1 < zeros.size(); ++i) {
    const double sp = zeros[i + 1] - zeros[i];
    sum += sp;
    max_dev = std::max(max_dev, std::abs(sp - 0.5) / 0.5);
  }
  fit.mean_zero_spacing = sum / (zeros.size() - 1);
  fit.max_spacing_deviation = max_dev;

  // circular mean of the crossing positions mod 1/2
  double cx = 0.0, sx = 0.0;
  for (double z : zeros) {
    const double ang = 2.0 * kTwoPi * std::fmod(z, 0.5);
    cx += std::cos(ang);
    sx += std::sin(ang);
  }
  double off = std::atan2(sx, cx) / (2.0 * kTwoPi);
  if (off < 0.0) off += 0.5;
  fit.phase_offset = off;

  // envelope: quadratically refined |value| peaks between crossings,
  // fitted over the top 1.5 decades
  std::vector<double> lx, ly;
  const double t_min_fit = std::max(t_lo, t_hi / std::pow(10.0, 1.5));
  for (int i = 1; i + 1 < n_grid; ++i) {
    const double a0 = std::abs(vals[i - 1]), a1 = std::abs(vals[i]),
                 a2 = std::abs(vals[i + 1]);
    if (a1 >= a0 && a1 >= a2 && a1 > 0.0) {
      const double denom = a0 - 2.0 * a1 + a2;
      double tp = ts[i], ap = a1;
      if (denom < 0.0) {
        const double dx = 0.5 * (a0 - a2) / denom;
        tp = ts[i] + dx * step;
        ap = a1 - 0.25 * (a0 - a2) * dx;
      }
      if (tp >= t_min_fit) {
        lx.push_back(std::log(tp));
        ly.push_back(std::log(ap));
        ++fit.n_peaks;
      }
    }
  }
  if (fit.n_peaks < 4) {
    throw std::invalid_argument("axis_asymptotics: too few envelope peaks");
  }
  const LineFit lf = fit_line(lx, ly);
  fit.fitted_exponent = lf.slope;
  fit.fitted_amplitude = std::exp(lf.intercept);
  return fit;
}

double FtEngine::ft(std::span<const double> xi, double t) {
  double n = 0.0;
  for (double v : xi) n += v * v;
  n = std::sqrt(n);
  return profile(xi)->fourier(t * n);
}

std::shared_ptr<const SliceProfile> FtEngine::profile(
    std::span<const double> xi) {
  std::vector<double> key = normalized(xi, spec_.d);
  // D is invariant under coordinate sign flips, so fold the direction
  // into the nonnegative orthant for caching.
  for (double& v : key) v = std::abs(v);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto prof = std::make_shared<SliceProfile>(
      build_slice_profile(spec_, key, opts_));
  std::lock_guard<std::mutex> lock(mu_);
  auto [it, inserted] = cache_.emplace(std::move(key), std::move(prof));
  return it->second;
}

size_t FtEngine::cache_size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

std::string decay_csv(const DecayCheck& check) {
  std::string out;
  if (!check.rows.empty()) {
    for (size_t l = 0; l < check.rows.front().xi.size(); ++l) {
      out += "xi" + std::to_string(l + 1) + ",";
    }
  }
  out += "t,re,im,err,bound,ratio\n";
  for (const DecayRow& row : check.rows) {
    for (double c : row.xi) {
      out += format_double(round_for_report(c));
      out += ',';
    }
    out += format_double(round_for_report(row.t));
    out += ',';
    out += format_double(round_for_report(row.value));
    out += ",0,0,";
    out += format_double(round_for_report(row.bound));
    out += ',';
    out += format_double(round_for_report(row.ratio));
    out += '\n';
  }
  return out;
}

std::string decay_json(const DecayCheck& check) {
  nlohmann::json j;
  j["axis"] = check.axis + 1;
  j["max_ratio"] = round_for_report(check.max_ratio);
  j["top_decade_slope"] = round_for_report(check.top_decade_slope);
  j["pass"] = check.pass;
  j["rows"] = check.rows.size();
  return j.dump();
}

std::string axis_asymptotics_json(const AxisAsymptotics& fit) {
  nlohmann::json j;
  j["axis"] = fit.axis + 1;
  j["nu"] = round_for_report(fit.nu);
  j["predicted_exponent"] = round_for_report(fit.predicted_exponent);
  j["fitted_exponent"] = round_for_report(fit.fitted_exponent);
  j["fitted_amplitude"] = round_for_report(fit.fitted_amplitude);
  j["mean_zero_spacing"] = round_for_report(fit.mean_zero_spacing);
  j["max_spacing_deviation"] = round_for_report(fit.max_spacing_deviation);
  j["phase_offset"] = round_for_report(fit.phase_offset);
  j["expected_offset"] = round_for_report(fit.expected_offset);
  j["n_zeros"] = fit.n_zeros;
  j["n_peaks"] = fit.n_peaks;
  return j.dump();
}

}  // namespace latlab
