// latlab command-line front end. Talks to the core exclusively through
// the C API in latlab.h.
//
// Exit codes: 0 success / conformance pass, 1 failed conformance check,
// 2 unknown command, 3 malformed or missing spec, 4 conflicting t flags.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <memory>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "latlab.h"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUnknownCommand = 2;
constexpr int kExitBadSpec = 3;
constexpr int kExitConflictingT = 4;

const std::set<std::string> kCommands = {
    "validate",  "volume",        "count",     "sweep",       "fit",
    "fourier-decay", "axis-asym", "caps-check", "poisson-check",
    "full-report"};

struct CString {
  char* p = nullptr;
  ~CString() { latlab_string_free(p); }
  std::string str() const { return p == nullptr ? std::string() : p; }
};

struct Domain {
  latlab_domain* p = nullptr;
  ~Domain() { latlab_domain_free(p); }
};

[[noreturn]] void die(int code, const std::string& msg) {
  std::fprintf(stderr, "error: %s\n", msg.c_str());
  std::exit(code);
}

void check(latlab_status st, int exit_code) {
  if (st != LATLAB_OK) die(exit_code, latlab_last_error());
}

// Status from a core call after config validation; spec problems map to
// exit 3, everything else is a runtime failure (also fatal, exit 3 would
// be wrong, use 1? -> the contract reserves 1 for failed conformance, so
// generic runtime errors use the spec-independent fallback below).
void check_run(latlab_status st) {
  if (st == LATLAB_ERR_SPEC) die(kExitBadSpec, latlab_last_error());
  if (st != LATLAB_OK) die(kExitFail, latlab_last_error());
}

std::string read_file(const std::string& path, int missing_exit) {
  std::ifstream in(path, std::ios::binary);
  if (!in) die(missing_exit, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  if (content.empty()) die(kExitFail, "refusing to write empty report " + path);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) die(kExitFail, "cannot write " + path);
  out << content;
  if (!out) die(kExitFail, "write failed for " + path);
}

struct RunConfig {
  std::string command;
  std::string spec_path;
  std::string builtin;
  std::string t;
  std::string t_min;
  std::string t_max;
  int t_steps = 0;
  int axis = 1;
  unsigned long long seed = 1;
  int threads = 0;
  int dirs = 12;
  int freqs = 30;
  int grid = 4000;
  long long qmc = 0;
  int K = 8;
  int order = 8;
  int windows = 5;
  double window_lo = 50.0;
  double step = 0.05;
  double tol = 0.15;
  std::string out;
};

int default_threads() {
  const char* env = std::getenv("LATLAB_THREADS");
  if (env != nullptr) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

Domain load_domain(const RunConfig& cfg) {
  Domain dom;
  if (!cfg.spec_path.empty() && !cfg.builtin.empty())
    die(kExitBadSpec, "--spec and --builtin are mutually exclusive");
  if (!cfg.spec_path.empty()) {
    std::string text = read_file(cfg.spec_path, kExitBadSpec);
    latlab_status st = latlab_domain_from_json(text.c_str(), &dom.p);
    if (st != LATLAB_OK)
      die(kExitBadSpec,
          cfg.spec_path + ": " + std::string(latlab_last_error()));
  } else if (!cfg.builtin.empty()) {
    check(latlab_domain_builtin(cfg.builtin.c_str(), &dom.p), kExitBadSpec);
  } else {
    die(kExitBadSpec, "no spec given (use --spec or --builtin)");
  }
  return dom;
}

void require_t(const RunConfig& cfg) {
  if (cfg.t.empty()) die(kExitConflictingT, "this command requires --t");
}

void require_t_range(const RunConfig& cfg) {
  if (cfg.t_min.empty() || cfg.t_max.empty() || cfg.t_steps <= 0)
    die(kExitConflictingT,
        "this command requires --t-min, --t-max and --t-steps");
}

void emit(const RunConfig& cfg, const std::string& artifact) {
  if (!cfg.out.empty())
    write_file(cfg.out, artifact);
  else
    std::printf("%s", artifact.c_str());
}

int cmd_validate(const RunConfig& cfg) {
  Domain dom = load_domain(cfg);
  CString json;
  check_run(latlab_domain_json(dom.p, &json.p));
  int d = 0;
  check_run(latlab_domain_dimension(dom.p, &d));
  if (!cfg.out.empty()) write_file(cfg.out, json.str() + "\n");
  std::printf("valid spec, d=%d: %s\n", d, json.p);
  return kExitPass;
}

int cmd_volume(const RunConfig& cfg) {
  Domain dom = load_domain(cfg);
  double vol = 0.0;
  check_run(latlab_volume(dom.p, &vol));
  if (cfg.qmc > 0) {
    double qv = 0.0;
    check_run(latlab_volume_qmc(dom.p, cfg.qmc, cfg.seed, &qv));
    std::printf("volume %.12g (qmc %.12g, rel diff %.3g)\n", vol, qv,
                std::abs(qv - vol) / vol);
  } else {
    std::printf("volume %.12g\n", vol);
  }
  return kExitPass;
}

int cmd_count(const RunConfig& cfg) {
  require_t(cfg);
  Domain dom = load_domain(cfg);
  CString count, rem;
  check_run(latlab_count(dom.p, cfg.t.c_str(), cfg.threads, &count.p));
  check_run(latlab_remainder(dom.p, cfg.t.c_str(), cfg.threads, &rem.p));
  if (!cfg.out.empty()) write_file(cfg.out, rem.str() + "\n");
  std::printf("count %s at t=%s: %s\n", count.p, cfg.t.c_str(), rem.p);
  return kExitPass;
}

int cmd_sweep(const RunConfig& cfg) {
  require_t_range(cfg);
  Domain dom = load_domain(cfg);
  CString csv;
  check_run(latlab_sweep(dom.p, cfg.t_min.c_str(), cfg.t_max.c_str(),
                         cfg.t_steps, cfg.threads, &csv.p));
  emit(cfg, csv.str());
  if (!cfg.out.empty())
    std::printf("sweep %s: %d-step grid on [%s, %s] -> %s\n",
                cfg.builtin.empty() ? cfg.spec_path.c_str()
                                    : cfg.builtin.c_str(),
                cfg.t_steps, cfg.t_min.c_str(), cfg.t_max.c_str(),
                cfg.out.c_str());
  return kExitPass;
}

int cmd_fit(const RunConfig& cfg) {
  require_t_range(cfg);
  Domain dom = load_domain(cfg);
  CString json;
  int pass = 0;
  check_run(latlab_fit(dom.p, cfg.t_min.c_str(), cfg.t_max.c_str(),
                       cfg.t_steps, cfg.tol, cfg.threads, &pass, &json.p));
  if (!cfg.out.empty()) write_file(cfg.out, json.str() + "\n");
  nlohmann::json j = nlohmann::json::parse(json.str());
  std::printf("fitted %.4g <= predicted %.4g + tol %.4g %s\n",
              j["fitted"].get<double>(), j["predicted"].get<double>(),
              cfg.tol, pass ? "PASS" : "FAIL");
  return pass ? kExitPass : kExitFail;
}

int cmd_fourier_decay(const RunConfig& cfg) {
  Domain dom = load_domain(cfg);
  std::string t_min = cfg.t_min.empty() ? "1" : cfg.t_min;
  std::string t_max = cfg.t_max.empty() ? "1000" : cfg.t_max;
  CString csv, json;
  int pass = 0;
  check_run(latlab_decay_check(dom.p, cfg.axis, cfg.dirs, std::stod(t_min),
                               std::stod(t_max), cfg.freqs, cfg.seed,
                               cfg.threads, &pass, &csv.p, &json.p));
  if (!cfg.out.empty()) write_file(cfg.out, csv.str());
  nlohmann::json j = nlohmann::json::parse(json.str());
  std::printf(
      "decay axis %d: max ratio %.4g, top-decade slope %.4g %s\n", cfg.axis,
      j["max_ratio"].get<double>(), j["top_decade_slope"].get<double>(),
      pass ? "PASS" : "FAIL");
  return pass ? kExitPass : kExitFail;
}

int cmd_axis_asym(const RunConfig& cfg) {
  Domain dom = load_domain(cfg);
  std::string t_min = cfg.t_min.empty() ? "1" : cfg.t_min;
  std::string t_max = cfg.t_max.empty() ? "200" : cfg.t_max;
  CString json;
  check_run(latlab_axis_asymptotics(dom.p, cfg.axis, std::stod(t_min),
                                    std::stod(t_max), cfg.grid, &json.p));
  if (!cfg.out.empty()) write_file(cfg.out, json.str() + "\n");
  nlohmann::json j = nlohmann::json::parse(json.str());
  std::printf("axis %d: fitted exponent %.4g (predicted %.4g), "
              "zero spacing %.4g\n",
              cfg.axis, j["fitted_exponent"].get<double>(),
              j["predicted_exponent"].get<double>(),
              j["mean_zero_spacing"].get<double>());
  return kExitPass;
}

int cmd_caps_check(const RunConfig& cfg) {
  Domain dom = load_domain(cfg);
  std::string t_min = cfg.t_min.empty() ? "10" : cfg.t_min;
  std::string t_max = cfg.t_max.empty() ? "10000" : cfg.t_max;
  CString csv, json;
  int pass = 0;
  check_run(latlab_caps_check(dom.p, cfg.axis, cfg.dirs, std::stod(t_min),
                              std::stod(t_max), cfg.freqs, cfg.seed,
                              cfg.threads, &pass, &csv.p, &json.p));
  if (!cfg.out.empty()) write_file(cfg.out, csv.str());
  nlohmann::json j = nlohmann::json::parse(json.str());
  std::printf("caps axis %d: measure slope %.4g, extent slope %.4g %s\n",
              cfg.axis, j["measure_slope"].get<double>(),
              j["extent_slope"].get<double>(), pass ? "PASS" : "FAIL");
  return pass ? kExitPass : kExitFail;
}

int cmd_poisson_check(const RunConfig& cfg) {
  require_t(cfg);
  Domain dom = load_domain(cfg);
  CString json;
  int pass = 0;
  check_run(latlab_poisson_check(dom.p, cfg.t.c_str(), cfg.K, cfg.order,
                                 cfg.threads, &pass, &json.p));
  if (!cfg.out.empty()) write_file(cfg.out, json.str() + "\n");
  nlohmann::json j = nlohmann::json::parse(json.str());
  std::printf("poisson t=%s K=%d: gap %.4g <= tol %.4g, sandwich %s %s\n",
              cfg.t.c_str(), cfg.K, j["poisson_gap"].get<double>(),
              j["tail_bound"].get<double>() + j["quad_tol"].get<double>(),
              j["sandwich_ok"].get<bool>() ? "ok" : "violated",
              pass ? "PASS" : "FAIL");
  return pass ? kExitPass : kExitFail;
}

int cmd_full_report(const RunConfig& cfg) {
  Domain dom = load_domain(cfg);
  CString spec_json, exp_json, fit_json;
  double vol = 0.0;
  check_run(latlab_domain_json(dom.p, &spec_json.p));
  check_run(latlab_volume(dom.p, &vol));
  check_run(latlab_exponent_report(dom.p, &exp_json.p));
  nlohmann::json report;
  report["spec"] = nlohmann::json::parse(spec_json.str());
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", vol);
  report["volume"] = std::stod(buf);
  report["exponents"] = nlohmann::json::parse(exp_json.str());
  int pass = 1;
  if (!cfg.t_min.empty() && !cfg.t_max.empty() && cfg.t_steps > 0) {
    check_run(latlab_fit(dom.p, cfg.t_min.c_str(), cfg.t_max.c_str(),
                         cfg.t_steps, cfg.tol, cfg.threads, &pass,
                         &fit_json.p));
    report["fit"] = nlohmann::json::parse(fit_json.str());
  }
  std::string text = report.dump(2) + "\n";
  if (!cfg.out.empty()) write_file(cfg.out, text);
  else std::printf("%s", text.c_str());
  std::printf("full report: volume %.6g, predicted exponent %.4g %s\n", vol,
              report["exponents"]["overall"].get<double>(),
              pass ? "PASS" : "FAIL");
  return pass ? kExitPass : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) die(kExitUnknownCommand, "usage: latlab <command> [flags]");
  std::string command = argv[1];
  if (command == "-h" || command == "--help") {
    std::printf("latlab <command> --spec file.json | --builtin name [flags]\n"
                "commands: validate volume count sweep fit fourier-decay\n"
                "          axis-asym caps-check poisson-check full-report\n");
    return kExitPass;
  }
  if (kCommands.count(command) == 0)
    die(kExitUnknownCommand, "unknown command: " + command);

  RunConfig cfg;
  cfg.command = command;
  cfg.threads = default_threads();

  CLI::App app{"lattice-point counting laboratory"};
  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (flags override)");
  app.add_option("--spec", cfg.spec_path, "domain spec JSON file");
  app.add_option("--builtin", cfg.builtin, "built-in corpus spec name");
  auto* opt_t = app.add_option("--t", cfg.t, "scale t (rational)");
  auto* opt_tmin = app.add_option("--t-min", cfg.t_min, "grid start");
  auto* opt_tmax = app.add_option("--t-max", cfg.t_max, "grid end");
  auto* opt_tsteps = app.add_option("--t-steps", cfg.t_steps, "grid size");
  app.add_option("--axis", cfg.axis, "axis j (1-based)");
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--threads", cfg.threads, "thread budget");
  app.add_option("--dirs", cfg.dirs, "cone directions per check");
  app.add_option("--freqs", cfg.freqs, "frequencies per direction");
  app.add_option("--grid", cfg.grid, "axis-asym t-grid size");
  app.add_option("--qmc", cfg.qmc, "QMC points for volume cross-check");
  app.add_option("--K", cfg.K, "Poisson frequency cutoff |k|_inf <= K");
  app.add_option("--order", cfg.order, "mollifier B-spline order");
  app.add_option("--windows", cfg.windows, "omega-scan window count");
  app.add_option("--window-lo", cfg.window_lo, "omega-scan first window");
  app.add_option("--step", cfg.step, "omega-scan grid step");
  app.add_option("--tol", cfg.tol, "fit tolerance");
  app.add_option("--out", cfg.out, "output artifact path");

  try {
    app.parse(argc - 1, argv + 1);
  } catch (const CLI::ParseError& e) {
    die(kExitUnknownCommand, e.what());
  }

  if (!config_path.empty()) {
    // File supplies defaults; explicit flags keep priority.
    nlohmann::json file;
    try {
      file = nlohmann::json::parse(read_file(config_path, kExitBadSpec));
    } catch (const nlohmann::json::exception& e) {
      die(kExitBadSpec, config_path + ": " + e.what());
    }
    auto str = [&](const char* key, std::string& dst, const CLI::Option* opt) {
      if (file.contains(key) && (opt == nullptr || opt->count() == 0) &&
          dst.empty())
        dst = file[key].is_string() ? file[key].get<std::string>()
                                    : file[key].dump();
    };
    str("spec", cfg.spec_path, nullptr);
    str("builtin", cfg.builtin, nullptr);
    str("t", cfg.t, opt_t);
    str("t_min", cfg.t_min, opt_tmin);
    str("t_max", cfg.t_max, opt_tmax);
    if (file.contains("t_steps") && opt_tsteps->count() == 0)
      cfg.t_steps = file["t_steps"].get<int>();
    if (file.contains("axis")) cfg.axis = file["axis"].get<int>();
    if (file.contains("seed"))
      cfg.seed = file["seed"].get<unsigned long long>();
    if (file.contains("threads")) cfg.threads = file["threads"].get<int>();
    if (file.contains("tol")) cfg.tol = file["tol"].get<double>();
    if (file.contains("out") && cfg.out.empty())
      cfg.out = file["out"].get<std::string>();
  }

  bool has_point = !cfg.t.empty();
  bool has_range =
      !cfg.t_min.empty() || !cfg.t_max.empty() || cfg.t_steps > 0;
  if (has_point && has_range)
    die(kExitConflictingT, "--t conflicts with --t-min/--t-max/--t-steps");
  if (cfg.threads < 1) die(kExitUnknownCommand, "threads must be >= 1");

  if (command == "validate") return cmd_validate(cfg);
  if (command == "volume") return cmd_volume(cfg);
  if (command == "count") return cmd_count(cfg);
  if (command == "sweep") return cmd_sweep(cfg);
  if (command == "fit") return cmd_fit(cfg);
  if (command == "fourier-decay") return cmd_fourier_decay(cfg);
  if (command == "axis-asym") return cmd_axis_asym(cfg);
  if (command == "caps-check") return cmd_caps_check(cfg);
  if (command == "poisson-check") return cmd_poisson_check(cfg);
  if (command == "full-report") return cmd_full_report(cfg);
  die(kExitUnknownCommand, "unknown command: " + command);
}
