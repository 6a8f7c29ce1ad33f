/* C interface to the fracheat library. All functions return a status code;
 * on failure fracheat_last_error() describes the problem (per thread). */
#ifndef FRACHEAT_H
#define FRACHEAT_H

#include <stddef.h>

#if defined(FRACHEAT_BUILDING_LIBRARY)
#define FRACHEAT_API __attribute__((visibility("default")))
#else
#define FRACHEAT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fracheat_status {
  FRACHEAT_OK = 0,
  FRACHEAT_E_INVALID_ARGUMENT = 1,
  FRACHEAT_E_DOMAIN = 2,
  FRACHEAT_E_INADMISSIBLE_TIME = 3,
  FRACHEAT_E_QUADRATURE = 4,
  FRACHEAT_E_DEGENERATE = 5,
  FRACHEAT_E_NON_FINITE = 6,
  FRACHEAT_E_IO = 7,
  FRACHEAT_E_INTERNAL = 8
} fracheat_status;

typedef struct fracheat_grid fracheat_grid;
typedef struct fracheat_function fracheat_function;

FRACHEAT_API const char* fracheat_version(void);
FRACHEAT_API const char* fracheat_last_error(void);

/* Periodic box [-L, L)^dim with M cells per axis, dim in {1, 2, 3}. */
FRACHEAT_API fracheat_status fracheat_grid_create(int dim, double half_width, int points_per_axis,
                                                  fracheat_grid** out);
FRACHEAT_API void fracheat_grid_destroy(fracheat_grid* grid);
FRACHEAT_API fracheat_status fracheat_grid_size(const fracheat_grid* grid, size_t* out);

/* Values in row-major order (last axis fastest). */
FRACHEAT_API fracheat_status fracheat_function_from_values(const fracheat_grid* grid,
                                                           const double* values, size_t n,
                                                           fracheat_function** out);
/* profile_json: {"kind": "critical" | "supercritical" | "power" | "indicator" | "constant",
 * "theta", "p", "scale", "exponent", "support_radius"}. */
FRACHEAT_API fracheat_status fracheat_function_sample(const fracheat_grid* grid,
                                                      const char* profile_json,
                                                      fracheat_function** out);
FRACHEAT_API void fracheat_function_destroy(fracheat_function* f);
FRACHEAT_API fracheat_status fracheat_function_values(const fracheat_function* f, double* out,
                                                      size_t n);

/* flavor: "strong", "frak", "weak", "strong_primed", "weak_primed".
 * q may be INFINITY; rho = INFINITY gives the global norm, otherwise the
 * uniformly-local norm with radius rho. */
FRACHEAT_API fracheat_status fracheat_norm(const fracheat_function* f, double q, double alpha,
                                           const char* flavor, double rho, double* out);

/* S(t) f for the fractional heat semigroup of order theta in (0, 2]. */
FRACHEAT_API fracheat_status fracheat_semigroup_apply(const fracheat_function* f, double theta,
                                                      double t, double max_leakage,
                                                      fracheat_function** out);

/* Runs one experiment. kind may be NULL (taken from the config); overrides
 * is a JSON merge patch applied to the config, may be NULL. *exit_code is
 * 0 ok, 1 usage error, 2 assertion failure. *summary_json (if non-NULL)
 * receives the summary; release it with fracheat_string_free. The status is
 * FRACHEAT_OK whenever the experiment ran to a verdict. */
FRACHEAT_API fracheat_status fracheat_run_experiment(const char* kind, const char* config_json,
                                                     const char* overrides_json, int* exit_code,
                                                     char** summary_json);

FRACHEAT_API void fracheat_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* FRACHEAT_H */
