#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "fracheat/fracheat.h"

static int failures = 0;

#define EXPECT(cond)                                                   \
  do {                                                                 \
    if (!(cond)) {                                                     \
      fprintf(stderr, "%s:%d: expectation failed: %s (%s)\n", __FILE__, \
              __LINE__, #cond, fracheat_last_error());                 \
      ++failures;                                                      \
    }                                                                  \
  } while (0)

int main(void) {
  fracheat_grid* grid = NULL;
  fracheat_function* f = NULL;
  fracheat_function* g = NULL;
  size_t n = 0;
  double value = 0.0;

  EXPECT(strlen(fracheat_version()) > 0);
  EXPECT(fracheat_grid_create(1, 32.0, 1000, &grid) == FRACHEAT_E_INVALID_ARGUMENT);
  EXPECT(strlen(fracheat_last_error()) > 0);
  EXPECT(fracheat_grid_create(1, 4.0, 64, &grid) == FRACHEAT_OK);
  EXPECT(fracheat_grid_size(grid, &n) == FRACHEAT_OK && n == 64);

  {
    double vals[64];
    double back[64];
    double l1 = 0.0;
    for (int i = 0; i < 64; ++i) {
      vals[i] = (i % 3 == 0) ? 0.0 : 1.0 + 0.1 * i;
      l1 += vals[i] * 0.125;
    }
    EXPECT(fracheat_function_from_values(grid, vals, 63, &f) == FRACHEAT_E_INVALID_ARGUMENT);
    EXPECT(fracheat_function_from_values(grid, vals, 64, &f) == FRACHEAT_OK);
    EXPECT(fracheat_norm(f, 1.0, 0.0, "strong", INFINITY, &value) == FRACHEAT_OK);
    EXPECT(fabs(value - l1) < 1e-10 * l1);
    EXPECT(fracheat_norm(f, 0.5, 0.0, "strong", INFINITY, &value) == FRACHEAT_E_INVALID_ARGUMENT);
    EXPECT(fracheat_norm(f, 2.0, 0.0, "sideways", INFINITY, &value) ==
           FRACHEAT_E_INVALID_ARGUMENT);
    EXPECT(fracheat_norm(f, 1.0, 1.0, "frak", 0.5, &value) == FRACHEAT_OK && value > 0.0);

    EXPECT(fracheat_semigroup_apply(f, 2.0, 0.01, 1e-8, &g) == FRACHEAT_OK);
    EXPECT(fracheat_function_values(g, back, 64) == FRACHEAT_OK);
    {
      double mass = 0.0;
      for (int i = 0; i < 64; ++i) mass += back[i] * 0.125;
      EXPECT(fabs(mass - l1) < 1e-12 * l1);
    }
    fracheat_function_destroy(g);
    g = NULL;
    EXPECT(fracheat_semigroup_apply(f, 2.0, 100.0, 1e-8, &g) == FRACHEAT_E_INADMISSIBLE_TIME);
  }
  fracheat_function_destroy(f);
  f = NULL;

  EXPECT(fracheat_function_sample(grid, "{\"kind\": \"indicator\", \"support_radius\": 1}", &f) ==
         FRACHEAT_OK);
  EXPECT(fracheat_norm(f, 1.0, 0.0, "strong", INFINITY, &value) == FRACHEAT_OK);
  EXPECT(fabs(value - 2.0) < 1e-12);
  EXPECT(fracheat_function_sample(grid, "{\"kind\": \"nope\"}", &g) == FRACHEAT_E_INVALID_ARGUMENT);
  EXPECT(fracheat_function_sample(grid, "{broken", &g) == FRACHEAT_E_INVALID_ARGUMENT);
  fracheat_function_destroy(f);
  fracheat_grid_destroy(grid);
  EXPECT(fracheat_grid_size(NULL, &n) == FRACHEAT_E_INVALID_ARGUMENT);

  {
    int code = -1;
    char* summary = NULL;
    const char* cfg =
        "{\"grid\": {\"dim\": 2, \"half_width\": 2, \"points_per_axis\": 16},"
        " \"params\": {\"profile\": {\"kind\": \"constant\", \"scale\": 0},"
        " \"max_leakage\": 0.5, \"n_time\": 16}}";
    const char* patch = "{\"output_dir\": \"capi_out\"}";
    EXPECT(fracheat_run_experiment("solve", cfg, patch, &code, &summary) == FRACHEAT_OK);
    EXPECT(code == 0);
    EXPECT(summary != NULL && strstr(summary, "\"converged\"") != NULL);
    fracheat_string_free(summary);
    summary = NULL;
    EXPECT(fracheat_run_experiment("norms", "{\"kind\": \"solve\"}", NULL, &code, &summary) ==
           FRACHEAT_E_INVALID_ARGUMENT);
    EXPECT(fracheat_run_experiment("warp", NULL, NULL, &code, &summary) == FRACHEAT_OK);
    EXPECT(code == 1);
    fracheat_string_free(summary);
  }

  if (failures) fprintf(stderr, "%d failure(s)\n", failures);
  return failures ? 1 : 0;
}
