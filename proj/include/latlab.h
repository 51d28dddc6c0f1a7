#ifndef LATLAB_H
#define LATLAB_H

/* C API of the lattice-point laboratory.
 *
 * All entry points are thread-safe. Domains are opaque immutable handles;
 * every function returns a status code and writes results through out
 * parameters. Returned strings are heap-allocated and must be released
 * with latlab_string_free. On failure, latlab_last_error() returns a
 * thread-local message describing the most recent error.
 *
 * Axis arguments are 1-based (matching the CLI flags and reports).
 * Scales t are passed as strings and parsed as exact rationals:
 * "7", "2.5" and "7/2" are all accepted.
 */

#ifdef __cplusplus
extern "C" {
#endif

typedef struct latlab_domain latlab_domain;

typedef enum {
  LATLAB_OK = 0,
  LATLAB_ERR_INVALID = 1, /* bad argument (range, parse of t, axis, ...) */
  LATLAB_ERR_SPEC = 2,    /* malformed or inadmissible domain spec */
  LATLAB_ERR_RUNTIME = 3  /* numerical or internal failure */
} latlab_status;

/* ---- domain lifecycle ------------------------------------------------- */

/* JSON form: {"d":3,"blocks":[{"omegas":[4]},{"omegas":[4,4]}],"ms":[2,2]} */
latlab_status latlab_domain_from_json(const char* json_text,
                                      latlab_domain** out);
latlab_status latlab_domain_builtin(const char* name, latlab_domain** out);
/* Newline-separated names of the built-in corpus. */
latlab_status latlab_builtin_names(char** out);
void latlab_domain_free(latlab_domain* dom);

latlab_status latlab_domain_json(const latlab_domain* dom, char** out);
latlab_status latlab_domain_dimension(const latlab_domain* dom, int* out);

/* ---- geometry and exponents ------------------------------------------- */

latlab_status latlab_volume(const latlab_domain* dom, double* out);
latlab_status latlab_volume_qmc(const latlab_domain* dom, long long n_points,
                                unsigned long long seed, double* out);
latlab_status latlab_exponent_report(const latlab_domain* dom, char** json_out);

/* ---- exact counting ---------------------------------------------------- */

/* count_out receives the decimal digits of the exact count. */
latlab_status latlab_count(const latlab_domain* dom, const char* t,
                           int threads, char** count_out);
/* JSON: {t, count, volume_term, remainder} */
latlab_status latlab_remainder(const latlab_domain* dom, const char* t,
                               int threads, char** json_out);

/* ---- remainder sweeps -------------------------------------------------- */

/* CSV with header t,count,volume_term,remainder,normalized. */
latlab_status latlab_sweep(const latlab_domain* dom, const char* t_min,
                           const char* t_max, int steps, int threads,
                           char** csv_out);
/* Fits the running-max growth exponent and compares to the predicted
 * exponent with the given tolerance. pass_out may be NULL. */
latlab_status latlab_fit(const latlab_domain* dom, const char* t_min,
                         const char* t_max, int steps, double tol,
                         int threads, int* pass_out, char** json_out);
/* Lower-bound direction evidence on unit windows starting at window_lo. */
latlab_status latlab_omega_scan(const latlab_domain* dom, int axis,
                                double window_lo, int n_windows, double step,
                                int threads, char** json_out);

/* ---- Fourier transform ------------------------------------------------- */

/* xi has length dim = dimension of the domain. JSON: {xi, t, value, err}. */
latlab_status latlab_ft(const latlab_domain* dom, const double* xi, int dim,
                        double t, char** json_out);
latlab_status latlab_decay_check(const latlab_domain* dom, int axis,
                                 int n_dirs, double t_lo, double t_hi,
                                 int n_freqs, unsigned long long seed,
                                 int threads, int* pass_out, char** csv_out,
                                 char** json_out);
latlab_status latlab_axis_asymptotics(const latlab_domain* dom, int axis,
                                      double t_lo, double t_hi, int n_grid,
                                      char** json_out);

/* ---- caps -------------------------------------------------------------- */

latlab_status latlab_cap_stats(const latlab_domain* dom, const double* xi,
                               int dim, double delta, char** json_out);
latlab_status latlab_caps_check(const latlab_domain* dom, int axis,
                                int n_dirs, double t_lo, double t_hi,
                                int n_freqs, unsigned long long seed,
                                int threads, int* pass_out, char** csv_out,
                                char** json_out);

/* ---- Poisson / mollification ------------------------------------------ */

latlab_status latlab_poisson_check(const latlab_domain* dom, const char* t,
                                   int K, int order, int threads,
                                   int* pass_out, char** json_out);

/* ---- utilities --------------------------------------------------------- */

const char* latlab_last_error(void);
void latlab_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* LATLAB_H */
