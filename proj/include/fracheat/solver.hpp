#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fracheat/gridfn.hpp"
#include "fracheat/zygmund.hpp"

namespace fracheat::solver {

using gridfn::GridFunction;
using gridfn::GridSpec;

enum class Regime { critical, supercritical };

const char* to_string(Regime r);
Regime regime_from_string(const std::string& name);

struct SolveConfig {
  double theta = 1.0;
  double p = 2.0;
  double T = 0.25;
  int n_time = 32;
  double grading = 1.15;  // ratio of consecutive time steps, refined toward t = 0
  double epsilon = 1.0;   // smallness level the gauge is compared against
  int max_iter = 60;
  double divergence_cap = 1e6;  // relative to the first Picard increment
  double tolerance = 1e-8;      // stop when d_k < tolerance * d_1
  Regime regime = Regime::critical;
  double max_leakage = 1e-8;    // forwarded to the propagator admissibility check
  int center_stride = 4;
};

// Checks field ranges and the regime against (N, theta, p).
void validate(const SolveConfig& cfg, int dim);

// p* = N / (N - theta)
double critical_exponent(int dim, double theta);
// r* = N (p - 1) / (theta p)
double supercritical_r(int dim, double theta, double p);

// Graded times t_1 < ... < t_n = T (t_0 = 0 implicit).
std::vector<double> time_grid(const SolveConfig& cfg);

struct SpaceTimeFunction {
  std::vector<double> times;
  std::vector<GridFunction> slices;

  const GridSpec& spec() const { return slices.front().spec(); }
  std::size_t size() const { return times.size(); }
};

// Norm used by the metric d: primed weak with (p, p gamma) in the critical
// regime and (p r*, 0) in the supercritical one, radius T^{1/theta}.
zygmund::NormSpec metric_norm(const SolveConfig& cfg, int dim);
// Norm of the solution bound: weak with (p, N/theta) resp. (p r*, 0).
zygmund::NormSpec solution_norm(const SolveConfig& cfg, int dim);
// Smallness gauge of mu: frak (1, gamma) resp. weak (r*, 0).
zygmund::NormSpec gauge_norm(const SolveConfig& cfg, int dim);

// sup over slices of the uniformly-local norm; `global` reports whether the
// ball covered the torus.
double sup_in_time(const SpaceTimeFunction& u, const zygmund::NormSpec& spec,
                   const zygmund::NormOptions& opts = {}, bool* global = nullptr);

// int_0^t S(s) mu ds on the time grid (exact per Fourier mode).
SpaceTimeFunction duhamel_source(const GridFunction& mu, const SolveConfig& cfg);

// int_0^t S(t - s) F_p(u(s)) ds with F_p(u) piecewise linear in s and u(0) = 0.
SpaceTimeFunction nonlinear_duhamel(const SpaceTimeFunction& u, const SolveConfig& cfg);

enum class Verdict { converged, diverged, max_iter };
const char* to_string(Verdict v);

struct IterationReport {
  std::vector<double> distances;  // d(u_k, u_{k-1}), k = 1, 2, ...
  std::vector<double> ratios;     // d_k / d_{k-1}, from k = 2
  Verdict verdict = Verdict::max_iter;
  int iterations = 0;
  double gauge = 0.0;          // smallness gauge of mu
  bool within_epsilon = false; // gauge <= cfg.epsilon
  double source_norm = 0.0;    // d_1 = sup_t ||duhamel source||'
  double solution_norm = 0.0;  // sup_t ||u(t)|| in the bound's norm
  double bound_constant = 0.0; // solution_norm / gauge
  bool global_metric = false;  // T^{1/theta} ball covered the torus
  std::string diagnostic;
};

struct SolveResult {
  SpaceTimeFunction u;
  IterationReport report;
};

SolveResult picard_iterate(const GridFunction& mu, const SolveConfig& cfg);

struct ContractionReport {
  std::vector<double> epsilons;
  std::vector<double> max_ratios;
  double max_ratio = 0.0;
  double epsilon_power_fit = 0.0;  // slope of log max_ratio against log epsilon
};

// Random pairs u, v with sup_t ||u||', ||v||' <= 2 epsilon built from the
// normalized Duhamel source of mu plus smooth random perturbations; measures
// d(F u, F v) / d(u, v).
ContractionReport contraction_probe(const GridFunction& mu, const SolveConfig& cfg, int n_pairs,
                                    const std::vector<double>& epsilons = {1e-3, 2e-3, 4e-3},
                                    std::uint64_t seed = 1);

struct ThresholdReport {
  double lambda_lo = 0.0;  // converged
  double lambda_hi = 0.0;  // not converged
  int evaluations = 0;
  std::vector<double> lambdas;  // every lambda evaluated, in order
  std::vector<Verdict> verdicts;
};

// Bisects lambda on the verdict of picard_iterate(lambda mu). Brackets are
// widened by factors of 4 (at most `max_widen` times each way).
ThresholdReport threshold_bisect(const GridFunction& mu, const SolveConfig& cfg,
                                 double lambda_lo, double lambda_hi, int max_widen = 8);

struct SweepReport {
  std::vector<double> lambdas;
  std::vector<Verdict> verdicts;
  bool monotone = false;  // converged below, not converged above, one crossover
};

SweepReport verdict_sweep(const GridFunction& mu, const SolveConfig& cfg,
                          const std::vector<double>& lambdas);

}  // namespace fracheat::solver
