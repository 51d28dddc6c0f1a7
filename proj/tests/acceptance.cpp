// Acceptance gate: ten conformance criteria, one PASS/FAIL line each.
// argv[1] must point at the CLI binary (used by the determinism check).

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "latlab/caps.hpp"
#include "latlab/counting.hpp"
#include "latlab/domain.hpp"
#include "latlab/fourier.hpp"
#include "latlab/parallel.hpp"
#include "latlab/poisson.hpp"
#include "latlab/sweep.hpp"

using namespace latlab;

namespace {

constexpr double kPi = std::numbers::pi;
int g_failures = 0;

void report(int index, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%2d/10] %-28s %s  (%s)\n", index, name.c_str(),
              pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

int worker_threads() { return std::max(default_threads(), 2); }

// One representative axis per block: axes within a block are equivalent
// under the coordinate symmetry of the spec.
std::vector<int> block_axes(const DomainSpec& spec) {
  std::vector<int> axes;
  int coord = 0;
  for (const auto& block : spec.blocks) {
    axes.push_back(coord);
    coord += static_cast<int>(block.size());
  }
  return axes;
}

double ball_ft(double t) {
  if (t < 1e-8) return 4.0 * kPi / 3.0;
  const double w = 2.0 * kPi * t;
  return (std::sin(w) - w * std::cos(w)) / (2.0 * kPi * kPi * t * t * t);
}

std::string read_all(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 1. counter == brute force on the corpus (d <= 4), t in {0.5, 1, ..., 10}.
void criterion_counting() {
  int checked = 0;
  std::string bad;
  for (const auto& spec : builtin_corpus()) {
    if (spec.d > 4) continue;
    for (long long twice_t = 1; twice_t <= 20; ++twice_t) {
      const Rational t(twice_t, 2);
      if (count_lattice_points(spec, t, worker_threads()) !=
          brute_force_count(spec, t)) {
        bad = spec.name + " t=" + t.str();
      }
      ++checked;
    }
  }
  report(1, "counting oracle equality", bad.empty(),
         bad.empty() ? std::to_string(checked) + " spec/t pairs exact"
                     : "mismatch at " + bad);
}

// 2. closed-form volume vs 1e7-point QMC; ball exact to 1e-12.
void criterion_volume() {
  double worst = 0.0;
  std::string worst_name;
  for (const auto& spec : builtin_corpus()) {
    const double closed = volume(spec);
    const double qmc = volume_qmc(spec, 10000000, 20260824);
    const double rel = std::abs(qmc - closed) / closed;
    if (rel > worst) {
      worst = rel;
      worst_name = spec.name;
    }
  }
  const double ball_err =
      std::abs(volume(builtin_spec("ball-d3")) - 4.0 * kPi / 3.0);
  const bool pass = worst <= 1e-3 && ball_err <= 1e-12;
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "max rel err %.2e (%s), ball err %.1e", worst,
                worst_name.c_str(), ball_err);
  report(2, "volume vs QMC oracle", pass, detail);
}

// 3. fitted running-max exponent <= predicted + 0.15 over t in [2, 300].
void criterion_exponent_fit() {
  bool pass = true;
  std::string detail;
  for (const auto& name : {"ss4-d3", "ss6-d3", "ss8-d3", "kn-m2k4"}) {
    const auto spec = builtin_spec(name);
    const auto rows =
        sweep_remainder(spec, make_t_grid(2.0, 300.0, 60), worker_threads());
    const auto fit =
        fit_growth_exponent(rows, predicted_exponents(spec).overall);
    const auto verdict = compare_to_bound(fit, 0.15);
    pass = pass && verdict.pass;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s %.2f<=%.2f ", name,
                  fit.fitted_exponent, fit.predicted + 0.15);
    detail += buf;
  }
  report(3, "theorem-1 exponent bound", pass, detail);
}

// 4. omega-scan evidence positive on five unit windows for ss8-d3.
void criterion_omega_evidence() {
  const auto ev = omega_scan(builtin_spec("ss8-d3"), 0, 50.0, 5, 0.05,
                             worker_threads());
  bool pass = !ev.inconclusive && ev.evidence > 0.0;
  for (double sup : ev.window_sups) pass = pass && sup > 0.0;
  char detail[96];
  std::snprintf(detail, sizeof(detail), "%zu windows, min sup %.4f",
                ev.window_sups.size(), ev.evidence);
  report(4, "omega-direction evidence", pass, detail);
}

// 5. ball transform vs closed form; chi-hat(0) = volume on the corpus.
void criterion_fourier_oracle() {
  const auto ball = builtin_spec("ball-d3");
  std::vector<double> e1 = {1.0, 0.0, 0.0};
  double worst = 0.0;
  for (double t = 0.5; t <= 50.0; t *= 1.12) {
    worst = std::max(worst,
                     std::abs(ft_indicator(ball, e1, t).value - ball_ft(t)));
  }
  double worst_zero = 0.0;
  for (const auto& spec : builtin_corpus()) {
    std::vector<double> axis(spec.d, 0.0);
    axis[0] = 1.0;
    const auto v = ft_indicator(spec, axis, 0.0);
    const double err = std::abs(v.value - volume(spec));
    worst_zero = std::max(worst_zero, err - std::max(v.quad_error, 1e-7));
  }
  const bool pass = worst <= 1e-6 && worst_zero <= 0.0;
  char detail[96];
  std::snprintf(detail, sizeof(detail),
                "ball err %.1e, zero-freq excess %.1e", worst, worst_zero);
  report(5, "fourier closed-form oracle", pass, detail);
}

// 6. theorem-2 ratio trendless on 12x30 cone grids for every spec.
void criterion_decay() {
  bool pass = true;
  double worst_slope = 0.0;
  std::string worst_at;
  for (const auto& spec : builtin_corpus()) {
    for (int axis : block_axes(spec)) {
      const auto check = decay_check(spec, axis, 12, 1.0, 1000.0, 30,
                                     20260824, worker_threads());
      pass = pass && check.pass;
      if (std::abs(check.top_decade_slope) > std::abs(worst_slope)) {
        worst_slope = check.top_decade_slope;
        worst_at = spec.name + " j=" + std::to_string(axis + 1);
      }
    }
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "worst slope %.3f at %s", worst_slope,
                worst_at.c_str());
  report(6, "theorem-2 decay ratios", pass, detail);
}

// 7. axis envelope exponents and zero-crossing spacing.
void criterion_axis_asymptotics() {
  struct Case {
    const char* name;
    double expect;
  };
  bool pass = true;
  std::string detail;
  for (const Case& c : {Case{"ball-d3", -2.0}, Case{"ss4-d3", -1.5},
                        Case{"kn-m2k4", -1.25}}) {
    const auto fit =
        axis_asymptotics(builtin_spec(c.name), 0, 1.0, 150.0, 4000);
    const bool exp_ok = std::abs(fit.fitted_exponent - c.expect) <= 0.1;
    const bool spacing_ok =
        std::abs(fit.mean_zero_spacing - 0.5) <= 0.01 &&
        fit.max_spacing_deviation <= 0.02;
    pass = pass && exp_ok && spacing_ok;
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%s %.3f/%.2f sp %.3f ", c.name,
                  fit.fitted_exponent, c.expect, fit.mean_zero_spacing);
    detail += buf;
  }
  report(7, "axis asymptotics", pass, detail);
}

// 8. lemma-1 cap ratios trendless; ball cap measure exact.
void criterion_caps() {
  bool pass = true;
  double worst_slope = 0.0;
  for (const auto& spec : builtin_corpus()) {
    if (spec.d != 3) continue;
    for (int axis : block_axes(spec)) {
      const auto check = lemma1_check(spec, axis, 6, 10.0, 10000.0, 17,
                                      20260824, worker_threads());
      pass = pass && check.pass;
      worst_slope = std::max({worst_slope, std::abs(check.measure_slope),
                              std::abs(check.extent_slope)});
    }
  }
  const auto ball = builtin_spec("ball-d3");
  std::vector<double> e1 = {1.0, 0.0, 0.0};
  double ball_err = 0.0;
  for (double delta : {0.01, 0.05, 0.1, 0.2}) {
    ball_err = std::max(ball_err,
                        std::abs(cap_measure(ball, e1, delta) -
                                 2.0 * kPi * delta) /
                            (2.0 * kPi * delta));
  }
  pass = pass && ball_err <= 1e-3;
  char detail[96];
  std::snprintf(detail, sizeof(detail),
                "worst slope %.3f, ball cap rel err %.1e", worst_slope,
                ball_err);
  report(8, "lemma-1 cap bounds", pass, detail);
}

// 9. Poisson identity and sandwich for d=3 specs at t in {2, 3, 4}, K=8.
void criterion_poisson() {
  bool pass = true;
  double worst_gap_frac = 0.0;
  std::string worst_at;
  for (const auto& spec : builtin_corpus()) {
    if (spec.d != 3) continue;
    for (long long t = 2; t <= 4; ++t) {
      const auto v =
          poisson_check(spec, Rational(t, 1), 8, 8, worker_threads());
      pass = pass && v.pass;
      const double frac = v.poisson_gap / (v.tail_bound + v.quad_tol);
      if (frac > worst_gap_frac) {
        worst_gap_frac = frac;
        worst_at = spec.name + " t=" + std::to_string(t);
      }
    }
  }
  char detail[96];
  std::snprintf(detail, sizeof(detail), "worst gap/tolerance %.2f at %s",
                worst_gap_frac, worst_at.c_str());
  report(9, "poisson cross-validation", pass, detail);
}

// 10. CLI reports byte-identical across thread counts 1 and 8.
void criterion_determinism(const std::string& cli) {
  auto run = [&](const std::string& args) {
    const std::string cmd = cli + " " + args + " > /dev/null 2>&1";
    return std::system(cmd.c_str()) == 0;
  };
  bool pass = true;
  pass = pass && run("sweep --builtin ss4-d3 --t-min 1 --t-max 40 "
                     "--t-steps 30 --threads 1 --out acc_sweep_1.csv");
  pass = pass && run("sweep --builtin ss4-d3 --t-min 1 --t-max 40 "
                     "--t-steps 30 --threads 8 --out acc_sweep_8.csv");
  pass = pass && run("fourier-decay --builtin ss4-d3 --axis 1 --dirs 6 "
                     "--t-min 1 --t-max 100 --freqs 10 --seed 42 "
                     "--threads 1 --out acc_decay_1.csv");
  pass = pass && run("fourier-decay --builtin ss4-d3 --axis 1 --dirs 6 "
                     "--t-min 1 --t-max 100 --freqs 10 --seed 42 "
                     "--threads 8 --out acc_decay_8.csv");
  const std::string s1 = read_all("acc_sweep_1.csv");
  const std::string s8 = read_all("acc_sweep_8.csv");
  const std::string d1 = read_all("acc_decay_1.csv");
  const std::string d8 = read_all("acc_decay_8.csv");
  pass = pass && !s1.empty() && s1 == s8 && !d1.empty() && d1 == d8;
  char detail[96];
  std::snprintf(detail, sizeof(detail),
                "sweep %zu bytes %s, decay %zu bytes %s", s1.size(),
                s1 == s8 ? "identical" : "differ", d1.size(),
                d1 == d8 ? "identical" : "differ");
  report(10, "thread-count determinism", pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: acceptance <path-to-cli>\n");
    return 2;
  }
  const auto start = std::chrono::steady_clock::now();
  criterion_counting();
  criterion_volume();
  criterion_exponent_fit();
  criterion_omega_evidence();
  criterion_fourier_oracle();
  criterion_decay();
  criterion_axis_asymptotics();
  criterion_caps();
  criterion_poisson();
  criterion_determinism(argv[1]);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  std::printf("acceptance: %d/10 criteria passed in %.0f s\n",
              10 - g_failures, secs);
  return g_failures == 0 ? 0 : 1;
}
