// C ABI wrapper around the C++ core. All exceptions are converted to
// status codes; the message of the most recent failure is kept in a
// thread-local buffer exposed through latlab_last_error().

#include "latlab.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <span>
#include <stdexcept>
#include <string>

#include "latlab/caps.hpp"
#include "latlab/counting.hpp"
#include "latlab/domain.hpp"
#include "latlab/fourier.hpp"
#include "latlab/poisson.hpp"
#include "latlab/report.hpp"
#include "latlab/sweep.hpp"

struct latlab_domain {
  latlab::DomainSpec spec;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <typename Fn>
latlab_status guard(Fn&& fn) {
  try {
    fn();
    return LATLAB_OK;
  } catch (const latlab::SpecError& e) {
    g_last_error = e.what();
    return LATLAB_ERR_SPEC;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return LATLAB_ERR_INVALID;
  } catch (const std::out_of_range& e) {
    g_last_error = e.what();
    return LATLAB_ERR_INVALID;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return LATLAB_ERR_RUNTIME;
  } catch (...) {
    g_last_error = "unknown error";
    return LATLAB_ERR_RUNTIME;
  }
}

latlab_status invalid(const char* msg) {
  g_last_error = msg;
  return LATLAB_ERR_INVALID;
}

const latlab::DomainSpec& need(const latlab_domain* dom) {
  if (dom == nullptr) throw std::invalid_argument("null domain handle");
  return dom->spec;
}

// Converts a 1-based axis argument to the 0-based internal index.
int need_axis(const latlab::DomainSpec& spec, int axis) {
  if (axis < 1 || axis > spec.d)
    throw std::invalid_argument("axis must be in [1, d]");
  return axis - 1;
}

std::span<const double> need_vector(const latlab::DomainSpec& spec,
                                    const double* xi, int dim) {
  if (xi == nullptr) throw std::invalid_argument("null direction vector");
  if (dim != spec.d)
    throw std::invalid_argument("direction length does not match dimension");
  return {xi, static_cast<size_t>(dim)};
}

}  // namespace

extern "C" {

latlab_status latlab_domain_from_json(const char* json_text,
                                      latlab_domain** out) {
  if (json_text == nullptr || out == nullptr)
    return invalid("null argument");
  return guard([&] {
    auto* dom = new latlab_domain{latlab::spec_from_json(json_text)};
    *out = dom;
  });
}

latlab_status latlab_domain_builtin(const char* name, latlab_domain** out) {
  if (name == nullptr || out == nullptr) return invalid("null argument");
  return guard([&] {
    auto* dom = new latlab_domain{latlab::builtin_spec(name)};
    *out = dom;
  });
}

latlab_status latlab_builtin_names(char** out) {
  if (out == nullptr) return invalid("null argument");
  return guard([&] {
    std::string names;
    for (const auto& spec : latlab::builtin_corpus()) {
      names += spec.name;
      names += '\n';
    }
    *out = dup_string(names);
  });
}

void latlab_domain_free(latlab_domain* dom) { delete dom; }

latlab_status latlab_domain_json(const latlab_domain* dom, char** out) {
  if (out == nullptr) return invalid("null argument");
  return guard([&] { *out = dup_string(latlab::spec_to_json(need(dom))); });
}

latlab_status latlab_domain_dimension(const latlab_domain* dom, int* out) {
  if (out == nullptr) return invalid("null argument");
  return guard([&] { *out = need(dom).d; });
}

latlab_status latlab_volume(const latlab_domain* dom, double* out) {
  if (out == nullptr) return invalid("null argument");
  return guard([&] { *out = latlab::volume(need(dom)); });
}

latlab_status latlab_volume_qmc(const latlab_domain* dom, long long n_points,
                                unsigned long long seed, double* out) {
  if (out == nullptr) return invalid("null argument");
  return guard([&] {
    if (n_points <= 0) throw std::invalid_argument("n_points must be positive");
    *out = latlab::volume_qmc(need(dom), n_points, seed);
  });
}

latlab_status latlab_exponent_report(const latlab_domain* dom,
                                     char** json_out) {
  if (json_out == nullptr) return invalid("null argument");
  return guard(
      [&] { *json_out = dup_string(latlab::exponent_report_json(need(dom))); });
}

latlab_status latlab_count(const latlab_domain* dom, const char* t,
                           int threads, char** count_out) {
  if (t == nullptr || count_out == nullptr) return invalid("null argument");
  return guard([&] {
    auto count = latlab::count_lattice_points(
        need(dom), latlab::Rational::parse(t), threads);
    *count_out = dup_string(count.get_str());
  });
}

latlab_status latlab_remainder(const latlab_domain* dom, const char* t,
                               int threads, char** json_out) {
  if (t == nullptr || json_out == nullptr) return invalid("null argument");
  return guard([&] {
    auto result =
        latlab::remainder(need(dom), latlab::Rational::parse(t), threads);
    std::string json = "{\"t\": \"" + result.t.str() + "\", \"count\": \"" +
                       result.count.get_str() + "\", \"volume_term\": " +
                       latlab::format_double(result.volume_term) +
                       ", \"remainder\": " +
                       latlab::format_double(result.remainder) + "}";
    *json_out = dup_string(json);
  });
}

latlab_status latlab_sweep(const latlab_domain* dom, const char* t_min,
                           const char* t_max, int steps, int threads,
                           char** csv_out) {
  if (t_min == nullptr || t_max == nullptr || csv_out == nullptr)
    return invalid("null argument");
  return guard([&] {
    const auto& spec = need(dom);
    double lo = latlab::Rational::parse(t_min).to_double();
    double hi = latlab::Rational::parse(t_max).to_double();
    auto grid = latlab::make_t_grid(lo, hi, steps);
    auto rows = latlab::sweep_remainder(spec, grid, threads);
    *csv_out = dup_string(latlab::sweep_csv(rows));
  });
}

latlab_status latlab_fit(const latlab_domain* dom, const char* t_min,
                         const char* t_max, int steps, double tol,
                         int threads, int* pass_out, char** json_out) {
  if (t_min == nullptr || t_max == nullptr || json_out == nullptr)
    return invalid("null argument");
  return guard([&] {
    const auto& spec = need(dom);
    double lo = latlab::Rational::parse(t_min).to_double();
    double hi = latlab::Rational::parse(t_max).to_double();
    auto grid = latlab::make_t_grid(lo, hi, steps);
    auto rows = latlab::sweep_remainder(spec, grid, threads);
    double predicted = latlab::predicted_exponents(spec).overall;
    auto fit = latlab::fit_growth_exponent(rows, predicted);
    auto verdict = latlab::compare_to_bound(fit, tol);
    if (pass_out != nullptr) *pass_out = verdict.pass ? 1 : 0;
    *json_out = dup_string(latlab::fit_json(fit, verdict));
  });
}

latlab_status latlab_omega_scan(const latlab_domain* dom, int axis,
                                double window_lo, int n_windows, double step,
                                int threads, char** json_out) {
  if (json_out == nullptr) return invalid("null argument");
  return guard([&] {
    const auto& spec = need(dom);
    auto ev = latlab::omega_scan(spec, need_axis(spec, axis), window_lo,
                                 n_windows, step, threads);
    *json_out = dup_string(latlab::omega_scan_json(ev));
  });
}

latlab_status latlab_ft(const latlab_domain* dom, const double* xi, int dim,
                        double t, char** json_out) {
  if (json_out == nullptr) return invalid("null argument");
  return guard([&] {
    const auto& spec = need(dom);
    auto value = latlab::ft_indicator(spec, need_vector(spec, xi, dim), t);
    std::string json = "{\"xi\": [";
    for (int l = 0; l < dim; ++l) {
      if (l > 0) json += ", ";
      json += latlab::format_double(value.xi[l]);
    }
    json += "], \"t\": " + latlab::format_double(value.t) +
            ", \"value\": " + latlab::format_double(value.value) +
            ", \"err\": " + latlab::format_double(value.quad_error) + "}";
    *json_out = dup_string(json);
  });
}

latlab_status latlab_decay_check(const latlab_domain* dom, int axis,
                                 int n_dirs, double t_lo, double t_hi,
                                 int n_freqs, unsigned long long seed,
                                 int threads, int* pass_out, char** csv_out,
                                 char** json_out) {
  return guard([&] {
    const auto& spec = need(dom);
    auto check = latlab::decay_check(spec, need_axis(spec, axis), n_dirs, t_lo,
                                     t_hi, n_freqs, seed, threads);
    if (pass_out != nullptr) *pass_out = check.pass ? 1 : 0;
    if (csv_out != nullptr) *csv_out = dup_string(latlab::decay_csv(check));
    if (json_out != nullptr) *json_out = dup_string(latlab::decay_json(check));
  });
}

latlab_status latlab_axis_asymptotics(const latlab_domain* dom, int axis,
                                      double t_lo, double t_hi, int n_grid,
                                      char** json_out) {
  if (json_out == nullptr) return invalid("null argument");
  return guard([&] {
    const auto& spec = need(dom);
    auto fit = latlab::axis_asymptotics(spec, need_axis(spec, axis), t_lo,
                                        t_hi, n_grid);
    *json_out = dup_string(latlab::axis_asymptotics_json(fit));
  });
}

latlab_status latlab_cap_stats(const latlab_domain* dom, const double* xi,
                               int dim, double delta, char** json_out) {
  if (json_out == nullptr) return invalid("null argument");
  return guard([&] {
    const auto& spec = need(dom);
    if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
    auto stats = latlab::cap_stats(spec, need_vector(spec, xi, dim), delta);
    *json_out = dup_string(latlab::cap_stats_json(stats));
  });
}

latlab_status latlab_caps_check(const latlab_domain* dom, int axis,
                                int n_dirs, double t_lo, double t_hi,
                                int n_freqs, unsigned long long seed,
                                int threads, int* pass_out, char** csv_out,
                                char** json_out) {
  return guard([&] {
    const auto& spec = need(dom);
    auto check = latlab::lemma1_check(spec, need_axis(spec, axis), n_dirs,
                                      t_lo, t_hi, n_freqs, seed, threads);
    if (pass_out != nullptr) *pass_out = check.pass ? 1 : 0;
    if (csv_out != nullptr) *csv_out = dup_string(latlab::cap_csv(check));
    if (json_out != nullptr) *json_out = dup_string(latlab::cap_json(check));
  });
}

latlab_status latlab_poisson_check(const latlab_domain* dom, const char* t,
                                   int K, int order, int threads,
                                   int* pass_out, char** json_out) {
  if (t == nullptr || json_out == nullptr) return invalid("null argument");
  return guard([&] {
    const auto& spec = need(dom);
    if (K < 1) throw std::invalid_argument("K must be >= 1");
    if (order < 2 || order % 2 != 0)
      throw std::invalid_argument("order must be even and >= 2");
    auto verdict = latlab::poisson_check(spec, latlab::Rational::parse(t), K,
                                         order, threads);
    if (pass_out != nullptr) *pass_out = verdict.pass ? 1 : 0;
    *json_out = dup_string(latlab::poisson_json(verdict));
  });
}

const char* latlab_last_error(void) { return g_last_error.c_str(); }

void latlab_string_free(char* s) { std::free(s); }

}  // extern "C"
