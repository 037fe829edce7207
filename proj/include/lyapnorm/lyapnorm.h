/* lyapnorm - Lyapounov normal forms for polynomial Hamiltonians near an
 * equilibrium: Lie-series normalization, small-divisor certificates,
 * majorant-bound ledgers and periodic-orbit extraction.
 *
 * C interface of the shared library.  All functions return a lyp_status;
 * results are delivered through opaque handles or malloc'd strings that the
 * caller releases with lyp_string_free.  On failure *err (when non-NULL)
 * receives a malloc'd diagnostic message.
 */

#ifndef LYAPNORM_H
#define LYAPNORM_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LYP_API __declspec(dllexport)
#else
#define LYP_API __attribute__((visibility("default")))
#endif

typedef enum lyp_status {
  LYP_OK = 0,
  LYP_E_INPUT = 1,      /* malformed input, bad arguments, rejected config */
  LYP_E_RESONANCE = 2,  /* Melnikov violation / zero small divisor */
  LYP_E_VALIDATION = 3, /* structural invariant or tolerance check failed */
  LYP_E_DEGENERATE = 4, /* degenerate majorant fit (empty perturbation) */
  LYP_E_DIVERGENCE = 5, /* integration guard tripped */
  LYP_E_INTERNAL = 9
} lyp_status;

typedef struct lyp_model lyp_model;
typedef struct lyp_normal_form lyp_normal_form;

LYP_API const char* lyp_version(void);
LYP_API void lyp_string_free(char* s);

/* Model JSON: {"n":2, "lambda":[[0,1],[0,1.41421356]], "mode":"thm1",
 * "terms":[{"j":[2,0],"k":[0,1],"c":[1,0]}], "radii":[1,1]}.  Parsing a
 * thm1/thm2 model verifies the Melnikov condition and certifies the
 * small-divisor constant gamma (brute force up to |k| <= 200). */
LYP_API lyp_status lyp_model_parse(const char* json_text, lyp_model** out,
                                   char** err);
LYP_API lyp_status lyp_model_from_file(const char* path, lyp_model** out,
                                       char** err);
LYP_API void lyp_model_free(lyp_model* model);
LYP_API lyp_status lyp_model_info(const lyp_model* model, char** json_out);
LYP_API lyp_status lyp_model_set_radii(lyp_model* model, const double* radii,
                                       int n, char** err);
LYP_API lyp_status lyp_model_set_mode(lyp_model* model, const char* mode,
                                      char** err);

typedef struct lyp_normalize_opts {
  int order;        /* normalization order, >= 1 for the CLI contract */
  int trunc_order;  /* literal truncation degree; <= 0 selects order + 4 */
  double prune;     /* relative coefficient prune threshold, default 0 */
  double residual_tol; /* homological residual tolerance, default 1e-12 */
} lyp_normalize_opts;
LYP_API void lyp_normalize_opts_init(lyp_normalize_opts* opts);

LYP_API lyp_status lyp_normalize(const lyp_model* model,
                                 const lyp_normalize_opts* opts,
                                 lyp_normal_form** out, char** err);
LYP_API void lyp_normal_form_free(lyp_normal_form* nf);
LYP_API lyp_status lyp_normal_form_to_json(const lyp_normal_form* nf,
                                           char** json_out);
LYP_API lyp_status lyp_normal_form_summary(const lyp_normal_form* nf,
                                           char** json_out);

typedef struct lyp_certify_opts {
  double d;       /* domain-loss budget, 0 < d < 1/2, default 0.25 */
  double margin;  /* displacement margin for the convergence radius, 0.1 */
  int exact_t;    /* nonzero: exact T enumeration instead of the closed bound */
} lyp_certify_opts;
LYP_API void lyp_certify_opts_init(lyp_certify_opts* opts);

/* Ledger CSV (actual vs Lemma-3 bounds per order) and certificate JSON
 * (beta, G, rho, margins).  LYP_E_VALIDATION when any actual exceeds its
 * bound; LYP_E_DEGENERATE when the perturbation is empty. */
LYP_API lyp_status lyp_certify(const lyp_normal_form* nf,
                               const lyp_certify_opts* opts, char** ledger_csv,
                               char** certificate_json, char** err);

typedef struct lyp_orbit_opts {
  double amplitude; /* xi0 = eta0 = amplitude on the manifold, default 0.01 */
  double dt;        /* RK4 step, default 1e-3 */
  int nsamples;     /* trajectory rows in the CSV, default 256 */
} lyp_orbit_opts;
LYP_API void lyp_orbit_opts_init(lyp_orbit_opts* opts);

/* Synthesizes the Lyapounov orbit, integrates the original Hamiltonian over
 * one predicted period and reports the periodicity residual and energy
 * drift.  LYP_E_DIVERGENCE when the trajectory leaves the guard polydisk. */
LYP_API lyp_status lyp_orbit(const lyp_normal_form* nf, const lyp_orbit_opts* opts,
                             char** orbit_csv, char** summary_json, char** err);

typedef struct lyp_verify_opts {
  int trials;              /* randomized Cauchy-estimate trials, default 200 */
  unsigned long long seed; /* RNG seed, default 0 */
  double d;                /* delta sequence budget for T properties, 0.25 */
} lyp_verify_opts;
LYP_API void lyp_verify_opts_init(lyp_verify_opts* opts);

/* Randomized Cauchy-estimate trials plus the exact sequence checks
 * (T properties, mu recursion, Catalan closed form, Lemma 2 brute force).
 * LYP_E_VALIDATION if anything is violated. */
LYP_API lyp_status lyp_verify(const lyp_model* model, const lyp_verify_opts* opts,
                              char** report_json, char** err);

/* Converts a real oscillator Hamiltonian, JSON {"n":..,"mode":..,
 * "terms":[{"q":[..],"p":[..],"c":..},..]} with quadratic part
 * sum omega_l (q_l^2 + p_l^2)/2, into the complex model JSON. */
LYP_API lyp_status lyp_convert_real(const char* real_json, char** model_json,
                                    char** err);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LYAPNORM_H */
