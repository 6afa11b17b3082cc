/* C interface to the singular pseudodifferential calculus library.
 *
 * All functions return spcalc_status; SPCALC_OK means success. On failure a
 * thread-local message is available through spcalc_last_error(). Objects are
 * opaque handles owned by the caller and released with the matching
 * *_destroy function. Strings returned through char** are heap-allocated and
 * released with spcalc_string_free.
 */
#ifndef SPCALC_H
#define SPCALC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  SPCALC_OK = 0,
  SPCALC_ERR_SHAPE = 1,
  SPCALC_ERR_PARAMETER = 2,
  SPCALC_ERR_GEOMETRY = 3,
  SPCALC_ERR_DOMAIN = 4,
  SPCALC_ERR_SMOOTHNESS = 5,
  SPCALC_ERR_SIZE = 6,
  SPCALC_ERR_CONVERGENCE = 7,
  SPCALC_ERR_LOOKUP = 8,
  SPCALC_ERR_CONFIG = 9,
  SPCALC_ERR_IO = 10,
  SPCALC_ERR_INTERNAL = 11
} spcalc_status;

typedef struct spcalc_grid spcalc_grid;
typedef struct spcalc_field spcalc_field;
typedef struct spcalc_operator spcalc_operator;

const char* spcalc_version(void);
const char* spcalc_last_error(void);
void spcalc_string_free(char* s);

/* ---- grids ---------------------------------------------------------- */

spcalc_status spcalc_grid_create_wavetrain(int d, double L, int Nx, int Kmax,
                                           spcalc_grid** out);
spcalc_status spcalc_grid_create_pulse(int d, double L, int Nx, double Theta,
                                       int Ntheta, spcalc_grid** out);
void spcalc_grid_destroy(spcalc_grid* g);
spcalc_status spcalc_grid_describe(const spcalc_grid* g, char** out);

/* ---- fields --------------------------------------------------------- */

spcalc_status spcalc_field_random(const spcalc_grid* g, int ncomp, uint64_t seed,
                                  spcalc_field** out);
spcalc_status spcalc_field_load(const char* path, spcalc_field** out);
spcalc_status spcalc_field_save(const spcalc_field* f, const char* path);
void spcalc_field_destroy(spcalc_field* f);
/* clone of the grid the field lives on (caller destroys it) */
spcalc_status spcalc_field_grid(const spcalc_field* f, spcalc_grid** out);

spcalc_status spcalc_field_l2_norm(const spcalc_field* f, double* out);
spcalc_status spcalc_field_parseval_defect(const spcalc_field* f, double* out);
spcalc_status spcalc_field_sobolev_norm(const spcalc_field* f, double s, double gamma,
                                        double* out);
/* beta is a d-vector; pass beta_len == d */
spcalc_status spcalc_field_singular_norm(const spcalc_field* f, double s, double gamma,
                                         double eps, const double* beta, int beta_len,
                                         double* out);

/* ---- operators ------------------------------------------------------ */

/* symbol/profile are catalog names; *_params_json are flat JSON objects of
 * numeric parameters (may be NULL or "" for defaults); profile may be NULL
 * or "zero" for a profile-free symbol. */
spcalc_status spcalc_operator_create(const spcalc_grid* g, const char* symbol,
                                     const char* symbol_params_json,
                                     const char* profile,
                                     const char* profile_params_json, double eps,
                                     double gamma, const double* beta, int beta_len,
                                     spcalc_operator** out);
void spcalc_operator_destroy(spcalc_operator* op);
spcalc_status spcalc_operator_apply(const spcalc_operator* op, const spcalc_field* in,
                                    spcalc_field** out);
/* method: 0 = power iteration, 1 = dense SVD (oracle sizes only) */
spcalc_status spcalc_operator_norm(const spcalc_operator* op, int method, double* out);
spcalc_status spcalc_operator_descriptor(const spcalc_operator* op, char** out);

/* ---- catalog and experiment harness --------------------------------- */

spcalc_status spcalc_catalog_text(char** out);
spcalc_status spcalc_catalog_json(char** out);

/* Runs the configured verification suite. run_exit receives the harness
 * verdict (0 = all selected estimates PASS, 1 = some estimate FAILED);
 * the return value reports configuration/numerical errors only.
 * out_dir may be NULL to use the config's "out"; jobs_override <= 0,
 * seed_override < 0 and empty oracle_override fall back to the config. */
spcalc_status spcalc_run_suite(const char* config_path, const char* out_dir,
                               int jobs_override, long long seed_override,
                               const char* oracle_override, int* run_exit);

/* diff_exit: 0 identical verdicts, 1 verdict changed; the report text is
 * returned through report_out. */
spcalc_status spcalc_compare_runs(const char* dir_a, const char* dir_b,
                                  char** report_out, int* diff_exit);

#ifdef __cplusplus
}
#endif

#endif /* SPCALC_H */
