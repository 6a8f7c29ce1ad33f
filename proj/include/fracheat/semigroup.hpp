#pragma once

#include <span>
#include <vector>

#include "fracheat/fft.hpp"
#include "fracheat/fit.hpp"
#include "fracheat/gridfn.hpp"
#include "fracheat/zygmund.hpp"

namespace fracheat::semigroup {

using gridfn::GridFunction;
using gridfn::GridSpec;

struct SemigroupParams {
  double theta = 2.0;
  double t = 1.0;
};

struct PropagatorOptions {
  // Largest admissible fraction of kernel mass outside radius L/2.
  double max_leakage = 1e-8;
};

void validate(const SemigroupParams& p);

// Fraction of the continuum kernel mass beyond radius L/2: exact Gaussian
// tail for theta = 2, otherwise the normalized tail of h_t.
double leakage_bound(const GridSpec& grid, const SemigroupParams& p);

// Throws ErrorCode::inadmissible_time when the leakage bound is too large.
void check_admissible(const GridSpec& grid, const SemigroupParams& p,
                      const PropagatorOptions& opts = {});

// exp(-t |xi|^theta) per spectral entry.
std::vector<double> symbol(const fft::Plan& plan, const SemigroupParams& p);

GridFunction apply(const GridFunction& f, const SemigroupParams& p,
                   const PropagatorOptions& opts = {});

// Discrete kernel on the node lattice x = (i - M/2) h per axis.
struct KernelSnapshot {
  GridSpec grid;
  double theta = 2.0;
  double t = 1.0;
  std::vector<double> values;

  double coordinate(int i) const { return (i - grid.points_per_axis / 2) * grid.spacing(); }
  double radius(std::size_t idx) const;
  double mass() const;  // sum(values) h^N
};

KernelSnapshot kernel(const SemigroupParams& p, const GridSpec& grid,
                      const PropagatorOptions& opts = {});

// h_t(x) = t^{-N/theta} (1 + t^{-1/theta} |x|)^{-N-theta}
double h_bound(int dim, double theta, double t, double r);

struct KernelBoundReport {
  double c_lower = 0.0;  // min G / h_t over |x| <= L/2
  double c_upper = 0.0;  // max G / h_t over |x| <= L/2
  double min_kernel = 0.0;
};

KernelBoundReport kernel_bound_fit(const SemigroupParams& p, const GridSpec& grid,
                                   const PropagatorOptions& opts = {});

// Smallest time above which the discrete kernel satisfies
// min >= -1e-12 max; calibrated once per (grid, theta) and cached.
double positivity_time(const GridSpec& grid, double theta);

struct RateProbeSpec {
  double r = 1.0;      // source exponent
  double alpha = 0.0;  // source log exponent
  zygmund::Flavor source_flavor = zygmund::Flavor::frak;
  double q = 2.0;      // target exponent
  double beta = 0.0;   // target log exponent
  zygmund::Flavor flavor = zygmund::Flavor::strong;  // target flavor
};

struct RateProbeResult {
  harness::RateFit fit;
  double predicted_a = 0.0;
  double predicted_b = 0.0;
  std::vector<harness::RateSample> samples;
  bool residual_flagged = false;
};

// Checks (r, alpha, source_flavor) against the three admissible source
// patterns; throws on mismatch.
void validate_probe(const RateProbeSpec& spec);

RateProbeResult smoothing_rate_probe(const GridFunction& f, double theta,
                                     const RateProbeSpec& spec, std::span<const double> t_grid,
                                     const PropagatorOptions& opts = {},
                                     double residual_threshold = 0.05);

std::vector<double> geometric_times(double t0, double t1, int n);

}  // namespace fracheat::semigroup
