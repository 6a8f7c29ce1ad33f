#include "fracheat/fracheat.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "fracheat/error.hpp"
#include "fracheat/gridfn.hpp"
#include "fracheat/harness.hpp"
#include "fracheat/semigroup.hpp"
#include "fracheat/zygmund.hpp"

struct fracheat_grid {
  fracheat::gridfn::GridSpec spec;
};

struct fracheat_function {
  fracheat::gridfn::GridFunction fn;
};

namespace {

thread_local std::string last_error;

template <class F>
fracheat_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return FRACHEAT_OK;
  } catch (const fracheat::Error& e) {
    last_error = e.what();
    return static_cast<fracheat_status>(e.code());
  } catch (const fracheat::harness::Json::exception& e) {
    last_error = e.what();
    return FRACHEAT_E_INVALID_ARGUMENT;
  } catch (const std::exception& e) {
    last_error = e.what();
    return FRACHEAT_E_INTERNAL;
  } catch (...) {
    last_error = "unknown exception";
    return FRACHEAT_E_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  fracheat::require(p != nullptr, what);
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw fracheat::Error(fracheat::ErrorCode::internal, "out of memory");
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* fracheat_version(void) { return "1.0.0"; }

const char* fracheat_last_error(void) { return last_error.c_str(); }

fracheat_status fracheat_grid_create(int dim, double half_width, int points_per_axis,
                                     fracheat_grid** out) {
  return guarded([&] {
    need(out, "output pointer is null");
    *out = new fracheat_grid{fracheat::gridfn::make_grid(dim, half_width, points_per_axis)};
  });
}

void fracheat_grid_destroy(fracheat_grid* grid) { delete grid; }

fracheat_status fracheat_grid_size(const fracheat_grid* grid, size_t* out) {
  return guarded([&] {
    need(grid, "grid is null");
    need(out, "output pointer is null");
    *out = grid->spec.size();
  });
}

fracheat_status fracheat_function_from_values(const fracheat_grid* grid, const double* values,
                                              size_t n, fracheat_function** out) {
  return guarded([&] {
    need(grid, "grid is null");
    need(values, "values pointer is null");
    need(out, "output pointer is null");
    fracheat::require(n == grid->spec.size(), "value count does not match the grid");
    *out = new fracheat_function{
        fracheat::gridfn::GridFunction(grid->spec, std::vector<double>(values, values + n))};
  });
}

fracheat_status fracheat_function_sample(const fracheat_grid* grid, const char* profile_json,
                                         fracheat_function** out) {
  return guarded([&] {
    need(grid, "grid is null");
    need(profile_json, "profile JSON is null");
    need(out, "output pointer is null");
    const auto doc = fracheat::harness::Json::parse(profile_json);
    const auto spec = fracheat::harness::profile_from_json(doc, grid->spec.dim);
    *out = new fracheat_function{fracheat::gridfn::sample_profile(grid->spec, spec)};
  });
}

void fracheat_function_destroy(fracheat_function* f) { delete f; }

fracheat_status fracheat_function_values(const fracheat_function* f, double* out, size_t n) {
  return guarded([&] {
    need(f, "function is null");
    need(out, "output pointer is null");
    fracheat::require(n == f->fn.size(), "buffer size does not match the grid");
    std::memcpy(out, f->fn.data().data(), n * sizeof(double));
  });
}

fracheat_status fracheat_norm(const fracheat_function* f, double q, double alpha,
                              const char* flavor, double rho, double* out) {
  return guarded([&] {
    need(f, "function is null");
    need(flavor, "flavor is null");
    need(out, "output pointer is null");
    const fracheat::zygmund::NormSpec spec{q, alpha, fracheat::zygmund::flavor_from_string(flavor),
                                           rho};
    *out = std::isinf(rho) ? fracheat::zygmund::norm(f->fn, spec)
                           : fracheat::zygmund::ul_norm(f->fn, spec).value;
  });
}

fracheat_status fracheat_semigroup_apply(const fracheat_function* f, double theta, double t,
                                         double max_leakage, fracheat_function** out) {
  return guarded([&] {
    need(f, "function is null");
    need(out, "output pointer is null");
    *out = new fracheat_function{
        fracheat::semigroup::apply(f->fn, {theta, t}, {max_leakage})};
  });
}

fracheat_status fracheat_run_experiment(const char* kind, const char* config_json,
                                        const char* overrides_json, int* exit_code,
                                        char** summary_json) {
  return guarded([&] {
    need(exit_code, "exit code pointer is null");
    fracheat::harness::Json patch = overrides_json && *overrides_json
                                        ? fracheat::harness::Json::parse(overrides_json)
                                        : fracheat::harness::Json::object();
    std::string config = config_json ? config_json : "";
    if (kind) {
      // the explicit kind must agree with the config when both are given
      auto doc = config.empty() ? fracheat::harness::Json::object()
                                : fracheat::harness::Json::parse(config);
      fracheat::require(!doc.contains("kind") || doc["kind"] == kind,
                        std::string("config kind does not match '") + kind + "'");
      doc["kind"] = kind;
      config = doc.dump();
    }
    const auto outcome = fracheat::harness::run_document(config, patch.dump());
    *exit_code = outcome.exit_code;
    if (summary_json) *summary_json = copy_string(outcome.summary.dump(2));
  });
}

void fracheat_string_free(char* s) { std::free(s); }

}  // extern "C"
