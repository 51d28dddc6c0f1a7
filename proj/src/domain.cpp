#include "latlab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "latlab/numerics.hpp"

namespace latlab {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (double b = x; n > 0; n >>= 1, b *= b) {
    if (n & 1) r *= b;
  }
  return r;
}

}  // namespace

int DomainSpec::omega_max() const {
  int w = 0;
  for (int j = 0; j < d; ++j) {
    for (int l = 0; l < d; ++l) {
      w = std::max(w, table.m_jl[j][l] * omega[l]);
    }
  }
  return w;
}

DomainSpec validate_spec(int d, std::vector<std::vector<int>> blocks,
                         std::vector<int> ms, std::string name) {
  if (d < 2) throw SpecError("dimension must be >= 2, got " + std::to_string(d));
  if (blocks.empty()) throw SpecError("at least one block required");
  if (ms.size() != blocks.size()) {
    throw SpecError("need one outer exponent per block: " +
                    std::to_string(blocks.size()) + " blocks vs " +
                    std::to_string(ms.size()) + " ms");
  }
  DomainSpec spec;
  spec.d = d;
  spec.name = std::move(name);
  int coord = 0;
  for (size_t p = 0; p < blocks.size(); ++p) {
    if (blocks[p].empty()) {
      throw SpecError("block " + std::to_string(p) + " is empty",
                      static_cast<int>(p));
    }
    if (ms[p] < 1) {
      throw SpecError("outer exponent m of block " + std::to_string(p) +
                          " must be >= 1, got " + std::to_string(ms[p]),
                      static_cast<int>(p));
    }
    for (int w : blocks[p]) {
      if (w < 2 || w % 2 != 0) {
        throw SpecError("omega of coordinate " + std::to_string(coord) +
                            " must be an even integer >= 2, got " +
                            std::to_string(w),
                        coord);
      }
      spec.omega.push_back(w);
      spec.table.p_of.push_back(static_cast<int>(p));
      ++coord;
    }
  }
  if (coord != d) {
    throw SpecError("block sizes sum to " + std::to_string(coord) +
                    " but d = " + std::to_string(d));
  }
  spec.blocks = std::move(blocks);
  spec.ms = std::move(ms);

  auto& tbl = spec.table;
  tbl.m_jl.assign(d, std::vector<int>(d, 1));
  for (int j = 0; j < d; ++j) {
    for (int l = 0; l < d; ++l) {
      tbl.m_jl[j][l] = tbl.p_of[j] == tbl.p_of[l] ? 1 : spec.ms[tbl.p_of[l]];
    }
  }
  tbl.nu.assign(d, 0.0);
  tbl.eta.assign(d, 1);
  for (int j = 0; j < d; ++j) {
    for (int l = 0; l < d; ++l) {
      if (l == j) continue;
      const long long mw = static_cast<long long>(tbl.m_jl[j][l]) * spec.omega[l];
      tbl.nu[j] += 1.0 / static_cast<double>(mw);
      tbl.eta[j] = std::lcm(tbl.eta[j], mw);
    }
  }
  return spec;
}

DomainSpec spec_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("invalid JSON: ") + e.what());
  }
  try {
    const int d = j.at("d").get<int>();
    std::vector<std::vector<int>> blocks;
    for (const auto& b : j.at("blocks")) {
      blocks.push_back(b.at("omegas").get<std::vector<int>>());
    }
    std::vector<int> ms = j.at("ms").get<std::vector<int>>();
    std::string name = j.value("name", std::string());
    return validate_spec(d, std::move(blocks), std::move(ms), std::move(name));
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("malformed spec: ") + e.what());
  }
}

std::string spec_to_json(const DomainSpec& spec) {
  nlohmann::json j;
  j["d"] = spec.d;
  j["blocks"] = nlohmann::json::array();
  for (const auto& b : spec.blocks) {
    j["blocks"].push_back({{"omegas", b}});
  }
  j["ms"] = spec.ms;
  if (!spec.name.empty()) j["name"] = spec.name;
  return j.dump();
}

double eval_F(const DomainSpec& spec, std::span<const double> x) {
  double total = 0.0;
  int coord = 0;
  for (size_t p = 0; p < spec.blocks.size(); ++p) {
    double inner = 0.0;
    for (int w : spec.blocks[p]) {
      inner += ipow(x[coord], w);
      ++coord;
    }
    total += ipow(inner, spec.ms[p]);
  }
  return total - 1.0;
}

void grad_F(const DomainSpec& spec, std::span<const double> x,
            std::span<double> g) {
  int coord = 0;
  for (size_t p = 0; p < spec.blocks.size(); ++p) {
    double inner = 0.0;
    for (int w : spec.blocks[p]) {
      inner += ipow(x[coord], w);
      ++coord;
    }
    const int m = spec.ms[p];
    const double outer = m * ipow(inner, m - 1);
    int c = coord - static_cast<int>(spec.blocks[p].size());
    for (int w : spec.blocks[p]) {
      g[c] = outer * w * ipow(x[c], w - 1);
      ++c;
    }
  }
}

int m_exponent(const DomainSpec& spec, int j, int l) {
  if (j < 0 || j >= spec.d || l < 0 || l >= spec.d) {
    throw std::out_of_range("m_exponent: coordinate index out of range");
  }
  return spec.table.m_jl[j][l];
}

ExponentReport predicted_exponents(const DomainSpec& spec) {
  const int d = spec.d;
  ExponentReport rep;
  rep.omega_max = spec.omega_max();
  rep.randol_exponent = (d - 1) * (1.0 - 1.0 / rep.omega_max);
  rep.generic_exponent = d - 2 + 2.0 / (d + 1);
  rep.overall = std::max(rep.randol_exponent, rep.generic_exponent);

  for (int j = 0; j < d; ++j) {
    ExponentTerm term;
    term.j = j;
    term.exponent = d - 1 - spec.table.nu[j];
    rep.axis_terms.push_back(std::move(term));
  }
  // subsets S containing j with |S| = i >= 2
  for (int j = 0; j < d; ++j) {
    for (unsigned mask = 0; mask < (1u << d); ++mask) {
      if (!(mask & (1u << j))) continue;
      const int i = __builtin_popcount(mask);
      if (i < 2) continue;
      double outside = 0.0;
      ExponentTerm term;
      term.j = j;
      for (int l = 0; l < d; ++l) {
        if (mask & (1u << l)) {
          term.subset.push_back(l);
        } else {
          outside += 1.0 / (spec.table.m_jl[j][l] * spec.omega[l]);
        }
      }
      term.exponent =
          d - 1 - static_cast<double>(i - 1) / (d + 1) -
          2.0 * d / (d + 1) * outside;
      rep.subset_terms.push_back(std::move(term));
    }
  }
  rep.max_term = -1e300;
  for (const auto& t : rep.axis_terms) rep.max_term = std::max(rep.max_term, t.exponent);
  for (const auto& t : rep.subset_terms) rep.max_term = std::max(rep.max_term, t.exponent);
  rep.consistent = std::abs(rep.max_term - rep.overall) < 1e-12;
  return rep;
}

std::string exponent_report_json(const DomainSpec& spec) {
  const ExponentReport rep = predicted_exponents(spec);
  nlohmann::json j;
  j["omega"] = rep.omega_max;
  j["randol_exponent"] = rep.randol_exponent;
  j["generic_exponent"] = rep.generic_exponent;
  j["overall"] = rep.overall;
  j["max_term"] = rep.max_term;
  j["consistent"] = rep.consistent;
  auto term_json = [](const ExponentTerm& t) {
    nlohmann::json o;
    o["j"] = t.j + 1;  // 1-based in reports
    if (!t.subset.empty()) {
      std::vector<int> s;
      for (int l : t.subset) s.push_back(l + 1);
      o["S"] = s;
    }
    o["exponent"] = t.exponent;
    return o;
  };
  j["axis_terms"] = nlohmann::json::array();
  for (const auto& t : rep.axis_terms) j["axis_terms"].push_back(term_json(t));
  j["subset_terms"] = nlohmann::json::array();
  for (const auto& t : rep.subset_terms) j["subset_terms"].push_back(term_json(t));
  for (int jax = 0; jax < spec.d; ++jax) {
    j["nu"].push_back(spec.table.nu[jax]);
    j["eta"].push_back(spec.table.eta[jax]);
  }
  return j.dump();
}

double volume(const DomainSpec& spec) {
  // vol(D) = prod_p (c_p alpha_p / m_p * Gamma(alpha_p/m_p)) / Gamma(1 + sum beta_p)
  double numer = 1.0;
  double beta_sum = 0.0;
  for (size_t p = 0; p < spec.blocks.size(); ++p) {
    double alpha = 0.0;
    double c = 1.0;
    for (int w : spec.blocks[p]) {
      alpha += 1.0 / w;
      c *= 2.0 * gamma_fn(1.0 + 1.0 / w);
    }
    c /= gamma_fn(1.0 + alpha);
    const double beta = alpha / spec.ms[p];
    numer *= c * beta * gamma_fn(beta);
    beta_sum += beta;
  }
  return numer / gamma_fn(1.0 + beta_sum);
}

namespace {

// van der Corput radical inverse in the given base.
double radical_inverse(std::uint64_t n, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (n > 0) {
    r += f * static_cast<double>(n % base);
    n /= base;
    f *= inv;
  }
  return r;
}

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

}  // namespace

double volume_qmc(const DomainSpec& spec, std::int64_t n_points,
                  std::uint64_t seed) {
  const int d = spec.d;
  // Cranley-Patterson rotation from the seed.
  std::vector<double> shift(d - 1, 0.0);
  std::uint64_t state = seed ? seed : 0x9e3779b97f4a7c15ull;
  for (int i = 0; i < d - 1; ++i) {
    state = state * 6364136223846793005ull + 1442695040888963407ull;
    shift[i] = static_cast<double>(state >> 11) * 0x1.0p-53;
  }

  // Chord length along coordinate 0 given the others: x0max solves
  // (u_q0 + x0^w0)^{m_q} <= 1 - rest, analytically invertible.
  const int q = spec.table.p_of[0];
  const int w0 = spec.omega[0];
  const int mq = spec.ms[q];

  double acc = 0.0;
  std::vector<double> x(d, 0.0);
  for (std::int64_t i = 0; i < n_points; ++i) {
    for (int c = 1; c < d; ++c) {
      double u = radical_inverse(static_cast<std::uint64_t>(i) + 1,
                                 kPrimes[c - 1]) +
                 shift[c - 1];
      x[c] = u - std::floor(u);
    }
    double rest = 0.0, uq0 = 0.0;
    int coord = 0;
    for (size_t p = 0; p < spec.blocks.size(); ++p) {
      double inner = 0.0;
      for (int w : spec.blocks[p]) {
        if (coord != 0) inner += ipow(x[coord], w);
        ++coord;
      }
      if (static_cast<int>(p) == q) {
        uq0 = inner;
      } else {
        rest += ipow(inner, spec.ms[p]);
      }
    }
    const double budget = 1.0 - rest;
    if (budget <= 0.0) continue;
    const double cap = std::pow(budget, 1.0 / mq) - uq0;
    if (cap <= 0.0) continue;
    acc += std::pow(cap, 1.0 / w0);
  }
  return std::ldexp(acc / static_cast<double>(n_points), d);  // * 2^d
}

double radial_boundary(const DomainSpec& spec, std::span<const double> u) {
  double norm = 0.0;
  for (double v : u) norm += v * v;
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw std::invalid_argument("radial_boundary: u = 0");
  std::vector<double> dir(u.begin(), u.end());
  for (double& v : dir) v /= norm;

  std::vector<double> x(spec.d);
  auto F_at = [&](double r) {
    for (int i = 0; i < spec.d; ++i) x[i] = r * dir[i];
    return eval_F(spec, x);
  };
  double hi = 1.0;
  while (F_at(hi) < 0.0) hi *= 2.0;
  return solve_bracketed(F_at, 0.0, hi, 1e-15);
}

double diagonal_extent(const DomainSpec& spec) {
  std::vector<double> diag(spec.d, 1.0);
  return radial_boundary(spec, diag) / std::sqrt(static_cast<double>(spec.d));
}

std::vector<double> support_point(const DomainSpec& spec,
                                  std::span<const double> xi) {
  const int d = spec.d;
  double norm = 0.0;
  for (double v : xi) norm += v * v;
  norm = std::sqrt(norm);
  if (!(norm > 0.0)) throw std::invalid_argument("support_point: xi = 0");

  std::vector<double> axi(d);
  for (int i = 0; i < d; ++i) axi[i] = std::abs(xi[i]) / norm;

  const int n = static_cast<int>(spec.blocks.size());
  // Coordinates with xi_l = 0 have x_l = 0 exactly; drop them.
  std::vector<std::vector<int>> active(n);  // coordinate indices per block
  for (int i = 0; i < d; ++i) {
    if (axi[i] > 0.0) active[spec.table.p_of[i]].push_back(i);
  }

  // For a given multiplier lam, block sums u_p solve
  //   u = sum_{l active} (lam xi_l / (m_p w_l))^{w_l/(w_l-1)} u^{-(m_p-1)w_l/(w_l-1)}
  // (unique root; RHS decreasing in u). Then F(x(lam)) is increasing in lam.
  std::vector<double> u(n, 0.0);
  std::vector<double> x(d, 0.0);
  auto solve_blocks = [&](double lam) {
    for (int p = 0; p < n; ++p) {
      if (active[p].empty()) {
        u[p] = 0.0;
        continue;
      }
      const int m = spec.ms[p];
      auto rhs = [&](double up) {
        double s = 0.0;
        for (int l : active[p]) {
          const int w = spec.omega[l];
          const double base = lam * axi[l] / (m * w);
          double xl = std::pow(base, 1.0 / (w - 1));
          if (m > 1) xl *= std::pow(up, -static_cast<double>(m - 1) / (w - 1));
          s += ipow(xl, w);
        }
        return s;
      };
      if (m == 1) {
        u[p] = rhs(1.0);
      } else {
        auto h = [&](double up) { return up - rhs(up); };
        double hi = 1.0;
        while (h(hi) < 0.0) hi *= 2.0;
        double lo = hi;
        while (h(lo) > 0.0 && lo > 1e-300) lo *= 0.5;
        u[p] = solve_bracketed(h, lo, hi, 1e-15);
      }
      for (int l : active[p]) {
        const int w = spec.omega[l];
        double xl = std::pow(lam * axi[l] / (m * w), 1.0 / (w - 1));
        if (m > 1) xl *= std::pow(u[p], -static_cast<double>(m - 1) / (w - 1));
        x[l] = xl;
      }
    }
  };
  auto F_of_lam = [&](double lam) {
    solve_blocks(lam);
    double tot = 0.0;
    for (int p = 0; p < n; ++p) tot += ipow(u[p], spec.ms[p]);
    return tot - 1.0;
  };

  double lam_hi = 1.0;
  while (F_of_lam(lam_hi) < 0.0) lam_hi *= 2.0;
  double lam_lo = lam_hi;
  while (F_of_lam(lam_lo) > 0.0) lam_lo *= 0.5;
  const double lam = solve_bracketed(F_of_lam, lam_lo, lam_hi, 1e-15);
  solve_blocks(lam);

  std::vector<double> result(d, 0.0);
  for (int i = 0; i < d; ++i) {
    result[i] = xi[i] < 0.0 ? -x[i] : x[i];
  }
  return result;
}

double support_function(const DomainSpec& spec, std::span<const double> xi) {
  const std::vector<double> p = support_point(spec, xi);
  double norm = 0.0, dot = 0.0;
  for (int i = 0; i < spec.d; ++i) {
    norm += xi[i] * xi[i];
    dot += p[i] * xi[i];
  }
  return dot / std::sqrt(norm);
}

std::vector<DomainSpec> builtin_corpus() {
  std::vector<DomainSpec> out;
  out.push_back(validate_spec(3, {{2, 2, 2}}, {1}, "ball-d3"));
  for (int w : {4, 6, 8}) {
    out.push_back(validate_spec(3, {{w, w, w}}, {1},
                                "ss" + std::to_string(w) + "-d3"));
  }
  for (int w : {4, 6, 8}) {
    out.push_back(validate_spec(4, {{w, w, w, w}}, {1},
                                "ss" + std::to_string(w) + "-d4"));
  }
  out.push_back(validate_spec(3, {{4}, {4, 4}}, {2, 2}, "kn-m2k4"));
  out.push_back(
      validate_spec(5, {{2, 2}, {4, 4}, {2}}, {1, 1, 2}, "threeblock-d5"));
  return out;
}

DomainSpec builtin_spec(const std::string& name) {
  for (auto& s : builtin_corpus()) {
    if (s.name == name) return s;
  }
  throw SpecError("unknown builtin spec: " + name);
}

}  // namespace latlab
