/* jumpsplit — deep splitting solver for semilinear PDEs / PIDEs with jumps.
 *
 * C89-compatible shared-library interface.  All objects are opaque handles;
 * every fallible call returns a js_status and, on failure, leaves a
 * human-readable message retrievable with js_last_error() (thread-local).
 * Strings returned through char** are heap-allocated; release them with
 * js_string_free().  Handles are released with their matching *_free, which
 * accept NULL.
 */

#ifndef JUMPSPLIT_H
#define JUMPSPLIT_H

#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum js_status {
    JS_OK = 0,
    JS_ERR_PARAMETER = 1, /* invalid argument or parameter out of range */
    JS_ERR_NUMERIC = 2,   /* numeric routine left its supported regime */
    JS_ERR_SINGULAR = 3,  /* least-squares system singular after ridge escalation */
    JS_ERR_BUDGET = 4,    /* projected work exceeds a hard budget */
    JS_ERR_CONFIG = 5,    /* malformed config or file I/O failure */
    JS_ERR_UNKNOWN = 6,   /* anything else */
    JS_PARTIAL = 7        /* sweep finished but some runs failed */
} js_status;

typedef struct js_problem js_problem;
typedef struct js_solution js_solution;

/* Static version string; do not free. */
const char* js_version(void);

/* Message of the last failed call on this thread; static storage, do not
 * free.  Empty string when no failure has occurred yet. */
const char* js_last_error(void);

void js_string_free(char* s);

/* ------------------------------------------------------------------ */
/* Problems                                                            */

/* Instantiate a benchmark preset ("bs_default", "merton_default",
 * "vasicek_cc", "expvg_cc") in dimension d.  overrides_json is NULL or a flat
 * JSON object of numeric parameter overrides, e.g. {"mu0": -0.01}. */
js_status js_problem_new_preset(const char* name, int d, const char* overrides_json,
                                js_problem** out);
void js_problem_free(js_problem* p);

/* ------------------------------------------------------------------ */
/* Solver                                                              */

/* config_json keys (all optional): "method" ("random" | "deterministic"),
 * "euler" {N, delta, m_comp}, "net" {K, activation}, "train" {J, epochs, lr},
 * "seed", "truncation_theta".  NULL or "{}" selects all defaults. */
js_status js_solve(const js_problem* p, const char* config_json, js_solution** out);

js_status js_solution_u0(const js_solution* s, double* out);
js_status js_solution_evals(const js_solution* s, int64_t* out);
js_status js_solution_diagnostics_json(const js_solution* s, char** out);

/* Evaluate the fitted value function of time slot n (0..N; n = N evaluates
 * the terminal condition) at the point x of length d (must equal the
 * problem's dimension). */
js_status js_solution_eval(const js_solution* s, int n, const double* x, int d,
                           double* out);
void js_solution_free(js_solution* s);

/* ------------------------------------------------------------------ */
/* Batch front-ends                                                    */

/* Run a sweep from a full run-config JSON document.  Writes results.csv and
 * runs.json under out_dir (NULL = the config's "output" path) and returns the
 * CSV body through csv_out.  Returns JS_PARTIAL when some runs failed;
 * completed rows are still written. */
js_status js_run_sweep(const char* config_json, const char* out_dir, char** csv_out);

/* Error-budget calculator; config/report schemas documented in the README. */
js_status js_bounds_json(const char* config_json, char** out);

/* Monte-Carlo reference estimators; emits {estimate, stderr, evals}. */
js_status js_oracle_json(const char* config_json, char** out);

/* Simulated-path dump as CSV with header j,k,x_1..x_d (d <= 16 only). */
js_status js_paths_csv(const char* config_json, char** out);

#ifdef __cplusplus
}
#endif

#endif /* JUMPSPLIT_H */
