#include "latlab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "latlab/parallel.hpp"

namespace latlab {

Rational::Rational(long long n, long long d) : num(n), den(d) {
  if (den == 0) throw std::invalid_argument("Rational: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
}

Rational Rational::parse(const std::string& text) {
  if (text.empty()) throw std::invalid_argument("Rational: empty string");
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    return Rational(std::stoll(text.substr(0, slash)),
                    std::stoll(text.substr(slash + 1)));
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(std::stoll(text), 1);
  const std::string head = text.substr(0, dot), tail = text.substr(dot + 1);
  if (tail.size() > 15) throw std::invalid_argument("Rational: too many digits");
  long long den = 1;
  for (size_t i = 0; i < tail.size(); ++i) den *= 10;
  long long whole = head.empty() || head == "-" ? 0 : std::stoll(head);
  long long frac = tail.empty() ? 0 : std::stoll(tail);
  const bool neg = !head.empty() && head[0] == '-';
  long long num = whole * den + (neg ? -frac : frac);
  return Rational(num, den);
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

// Integer-cleared membership form for t = a/b:
//   k in tD  <=>  sum_p (sum_{l in p} C_l k_l^{w_l})^{m_p} * mult_p <= a^M
// with C_l = b^{w_l} a^{Omega_p - w_l}, Omega_p = max omega in block p,
// M = max_p Omega_p m_p, mult_p = a^{M - Omega_p m_p}.
struct ExactForm {
  const DomainSpec& spec;
  int d, n;
  std::vector<mpz_class> coeff;       // per coordinate
  std::vector<mpz_class> mult;        // per block
  mpz_class threshold;
  std::vector<int> order;             // recursion order, outermost first

  ExactForm(const DomainSpec& s, const Rational& t) : spec(s), d(s.d) {
    if (t.num <= 0) throw std::invalid_argument("count: t must be > 0");
    n = static_cast<int>(s.blocks.size());
    const mpz_class a(static_cast<long>(t.num)), b(static_cast<long>(t.den));

    std::vector<int> big_omega(n, 0);
    for (int l = 0; l < d; ++l) {
      const int p = s.table.p_of[l];
      big_omega[p] = std::max(big_omega[p], s.omega[l]);
    }
    long long M = 0;
    for (int p = 0; p < n; ++p) {
      M = std::max<long long>(M, static_cast<long long>(big_omega[p]) * s.ms[p]);
    }
    coeff.resize(d);
    for (int l = 0; l < d; ++l) {
      const int p = s.table.p_of[l];
      mpz_class c;
      mpz_pow_ui(c.get_mpz_t(), b.get_mpz_t(), s.omega[l]);
      mpz_class ap;
      mpz_pow_ui(ap.get_mpz_t(), a.get_mpz_t(), big_omega[p] - s.omega[l]);
      coeff[l] = c * ap;
    }
    mult.resize(n);
    for (int p = 0; p < n; ++p) {
      mpz_pow_ui(mult[p].get_mpz_t(), a.get_mpz_t(),
                 static_cast<unsigned long>(M - static_cast<long long>(big_omega[p]) * s.ms[p]));
    }
    mpz_pow_ui(threshold.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(M));

    order.resize(d);
    for (int l = 0; l < d; ++l) order[l] = l;
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      const long long kx = static_cast<long long>(s.ms[s.table.p_of[x]]) * s.omega[x];
      const long long ky = static_cast<long long>(s.ms[s.table.p_of[y]]) * s.omega[y];
      if (kx != ky) return kx > ky;
      return x > y;  // later blocks first on ties
    });
  }

  // lhs given per-block inner sums
  bool feasible(const std::vector<mpz_class>& block_sum) const {
    mpz_class lhs = 0, term;
    for (int p = 0; p < n; ++p) {
      mpz_pow_ui(term.get_mpz_t(), block_sum[p].get_mpz_t(), spec.ms[p]);
      lhs += term * mult[p];
      if (lhs > threshold) return false;
    }
    return true;
  }

  // block sums with coordinate c set to v on top of the given partials
  bool feasible_with(std::vector<mpz_class>& block_sum, int c,
                     long long v) const {
    const int q = spec.table.p_of[c];
    mpz_class kpow, save = block_sum[q];
    mpz_ui_pow_ui(kpow.get_mpz_t(), static_cast<unsigned long>(v),
                  spec.omega[c]);
    block_sum[q] += kpow * coeff[c];
    const bool ok = feasible(block_sum);
    block_sum[q] = save;
    return ok;
  }

  // Largest v >= 0 keeping membership possible for coordinate c (all
  // unfixed coordinates at 0); nullopt when even v = 0 fails.
  std::optional<long long> max_feasible(std::vector<mpz_class>& block_sum,
                                        int c) const {
    if (!feasible(block_sum)) return std::nullopt;
    const int q = spec.table.p_of[c];
    const int mq = spec.ms[q];

    // float bracket from the remaining budget
    mpz_class base = 0, term;
    for (int p = 0; p < n; ++p) {
      if (p == q) continue;
      mpz_pow_ui(term.get_mpz_t(), block_sum[p].get_mpz_t(), spec.ms[p]);
      base += term * mult[p];
    }
    const mpz_class rem = threshold - base;
    double guess = 0.0;
    const double remd = mpz_get_d(rem.get_mpz_t());
    const double multd = mpz_get_d(mult[q].get_mpz_t());
    if (remd > 0.0 && multd > 0.0) {
      const double cap = std::pow(remd / multd, 1.0 / mq) -
                         mpz_get_d(block_sum[q].get_mpz_t());
      if (cap > 0.0) {
        guess = std::pow(cap / mpz_get_d(coeff[c].get_mpz_t()),
                         1.0 / spec.omega[c]);
      }
    }
    long long v = std::max<long long>(0, static_cast<long long>(guess));
    // exact guard
    while (v > 0 && !feasible_with(block_sum, c, v)) --v;
    while (feasible_with(block_sum, c, v + 1)) ++v;
    if (v == 0 && !feasible_with(block_sum, c, 0)) return std::nullopt;
    return v;
  }
};

mpz_class count_recursive(const ExactForm& form,
                          std::vector<mpz_class>& block_sum, int depth,
                          unsigned long fold) {
  const int c = form.order[depth];
  const auto vmax = form.max_feasible(block_sum, c);
  if (!vmax) return 0;
  if (depth == form.d - 1) {
    // innermost: [-vmax, vmax] all admissible
    mpz_class span = 2 * mpz_class(static_cast<long>(*vmax)) + 1;
    return span * fold;
  }
  mpz_class total = 0;
  const int q = form.spec.table.p_of[c];
  const mpz_class save = block_sum[q];
  mpz_class kpow;
  for (long long v = 0; v <= *vmax; ++v) {
    mpz_ui_pow_ui(kpow.get_mpz_t(), static_cast<unsigned long>(v),
                  form.spec.omega[c]);
    block_sum[q] = save + kpow * form.coeff[c];
    total += count_recursive(form, block_sum, depth + 1,
                             v > 0 ? fold * 2 : fold);
  }
  block_sum[q] = save;
  return total;
}

}  // namespace

bool lattice_point_in_scaled_domain(const DomainSpec& spec, const Rational& t,
                                    const std::vector<long long>& k) {
  ExactForm form(spec, t);
  std::vector<mpz_class> block_sum(form.n, 0);
  mpz_class kpow;
  for (int l = 0; l < spec.d; ++l) {
    const unsigned long av = static_cast<unsigned long>(k[l] < 0 ? -k[l] : k[l]);
    mpz_ui_pow_ui(kpow.get_mpz_t(), av, spec.omega[l]);
    block_sum[spec.table.p_of[l]] += kpow * form.coeff[l];
  }
  return form.feasible(block_sum);
}

mpz_class count_lattice_points(const DomainSpec& spec, const Rational& t,
                               int threads) {
  ExactForm form(spec, t);
  std::vector<mpz_class> block_sum(form.n, 0);
  const int c0 = form.order[0];
  const auto vmax = form.max_feasible(block_sum, c0);
  if (!vmax) return 0;

  const long long nvals = *vmax + 1;
  std::vector<mpz_class> partial(nvals);
  const int q0 = form.spec.table.p_of[c0];
  parallel_for(static_cast<int>(nvals), threads, [&](int i) {
    const long long v = i;
    ExactForm local(spec, t);  // own mpz scratch per task
    std::vector<mpz_class> bs(local.n, 0);
    mpz_class kpow;
    mpz_ui_pow_ui(kpow.get_mpz_t(), static_cast<unsigned long>(v),
                  spec.omega[c0]);
    bs[q0] += kpow * local.coeff[c0];
    if (spec.d == 1) {
      partial[i] = 1;
      return;
    }
    partial[i] = count_recursive(local, bs, 1, v > 0 ? 2 : 1);
  });
  mpz_class total = 0;
  for (long long i = 0; i < nvals; ++i) total += partial[i];
  return total;
}

mpz_class brute_force_count(const DomainSpec& spec, const Rational& t,
                            double cap) {
  if (t.to_double() > cap) {
    throw std::invalid_argument("brute_force_count: t above oracle cap");
  }
  ExactForm form(spec, t);
  const long long bound = t.num / t.den;  // axis intercepts are exactly 1
  std::vector<long long> k(spec.d, -bound);
  std::vector<mpz_class> block_sum(form.n, 0);
  mpz_class count = 0, kpow;
  for (;;) {
    for (int p = 0; p < form.n; ++p) block_sum[p] = 0;
    for (int l = 0; l < spec.d; ++l) {
      const unsigned long av =
          static_cast<unsigned long>(k[l] < 0 ? -k[l] : k[l]);
      mpz_ui_pow_ui(kpow.get_mpz_t(), av, spec.omega[l]);
      block_sum[spec.table.p_of[l]] += kpow * form.coeff[l];
    }
    if (form.feasible(block_sum)) ++count;
    int i = 0;
    while (i < spec.d && ++k[i] > bound) {
      k[i] = -bound;
      ++i;
    }
    if (i == spec.d) break;
  }
  return count;
}

std::optional<long long> coordinate_range(
    const DomainSpec& spec, const Rational& t, int coord,
    const std::vector<std::pair<int, long long>>& fixed) {
  ExactForm form(spec, t);
  std::vector<mpz_class> block_sum(form.n, 0);
  mpz_class kpow;
  for (const auto& [l, v] : fixed) {
    if (l == coord) {
      throw std::invalid_argument("coordinate_range: coord is fixed");
    }
    const unsigned long av = static_cast<unsigned long>(v < 0 ? -v : v);
    mpz_ui_pow_ui(kpow.get_mpz_t(), av, spec.omega[l]);
    block_sum[spec.table.p_of[l]] += kpow * form.coeff[l];
  }
  return form.max_feasible(block_sum, coord);
}

CountResult remainder(const DomainSpec& spec, const Rational& t, int threads) {
  CountResult result;
  result.t = t;
  result.count = count_lattice_points(spec, t, threads);
  const double vol = volume(spec);
  // t^d exactly, then high-precision subtraction: the remainder is a tiny
  // difference of huge numbers.
  mpz_class num_d, den_d;
  mpz_ui_pow_ui(num_d.get_mpz_t(), static_cast<unsigned long>(t.num), spec.d);
  mpz_ui_pow_ui(den_d.get_mpz_t(), static_cast<unsigned long>(t.den), spec.d);
  mpf_set_default_prec(256);
  const mpf_class td = mpf_class(num_d) / mpf_class(den_d);
  const mpf_class vterm = mpf_class(vol) * td;
  result.volume_term = vterm.get_d();
  result.remainder = mpf_class(mpf_class(result.count) - vterm).get_d();
  return result;
}

}  // namespace latlab
