#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "fracheat/gridfn.hpp"
#include "fracheat/rearrange.hpp"
#include "fracheat/zygmund.hpp"

namespace fracheat::interp {

using gridfn::GridFunction;
using rearrange::StepProfile;

enum class SpaceFamily { frak_log, plain_lebesgue };

struct InterpPairSpec {
  double q0 = 1.0;
  double q1 = 4.0;
  double q = 2.0;
  double kappa = 0.5;
  double alpha = 0.0;
  SpaceFamily family = SpaceFamily::frak_log;
};

void validate(const InterpPairSpec& pair);
// Solves 1/q = (1 - kappa)/q0 + kappa/q1 for kappa.
InterpPairSpec make_pair(double q0, double q1, double q, double alpha, SpaceFamily family);

// Norm specs of X0 and X1.
zygmund::NormSpec endpoint_norm(const InterpPairSpec& pair, int which);

struct KOptions {
  int tau_points = 128;
  int lambda_points = 64;
};

// Endpoint norms of the height truncations f chi_{|f| > tau} and
// f chi_{|f| <= tau}, tabulated once per function.
class KTable {
 public:
  KTable(const StepProfile& prof, const InterpPairSpec& pair, const KOptions& opts = {});
  // Upper bound on K(f, lambda; X0, X1).
  double k_upper(double lambda) const;
  double norm_x0() const { return x0_full_; }
  double norm_x1() const { return x1_full_; }

 private:
  std::vector<double> n0_, n1_;
  double x0_full_ = 0.0, x1_full_ = 0.0;
};

double k_functional_upper(const GridFunction& f, double lambda, const InterpPairSpec& pair,
                          const KOptions& opts = {});
double k_functional_upper(const StepProfile& f, double lambda, const InterpPairSpec& pair,
                          const KOptions& opts = {});

struct EmbeddingReport {
  double lhs = 0.0;       // ||f||_{L^{q,inf}(log L)^alpha}
  double rhs = 0.0;       // 2^{1/q0} sup_lambda lambda^{-kappa} K(f, lambda)
  double sup_term = 0.0;  // sup_lambda lambda^{-kappa} K(f, lambda)
  bool holds = false;
};

EmbeddingReport interp_embedding_check(const StepProfile& f, const InterpPairSpec& pair,
                                       const KOptions& opts = {});
EmbeddingReport interp_embedding_check(const GridFunction& f, const InterpPairSpec& pair,
                                       const KOptions& opts = {});

// sup over the lambda grid of lambda^{-kappa} K_upper(f, lambda), any family.
double interpolation_norm_upper(const StepProfile& f, const InterpPairSpec& pair,
                                const KOptions& opts = {});

// ---- Hardy inequalities --------------------------------------------------

enum class HardyDirection { lower_limit, upper_limit };

struct HardyWeights {
  HardyDirection direction = HardyDirection::lower_limit;
  double a = 0.0;
  double b = 1.0;  // may be infinity; truncated at HardyGrid::b_cap
  std::function<double(double)> U;
  std::function<double(double)> V;
  double q = 2.0;  // in [1, inf]
};

// Cells on (a, b): geometrically graded toward a (and toward b when b is
// finite and grading is two-sided).
struct HardyGrid {
  std::vector<double> edges;
  static HardyGrid graded(double a, double b, int cells, double first_fraction = 1e-10,
                          double b_cap = 1e6);
  std::size_t cells() const { return edges.size() - 1; }
  double mid(std::size_t i) const { return 0.5 * (edges[i] + edges[i + 1]); }
};

enum class HardyVerdict { ok, violated, unverifiable };

struct HardyReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double B = 0.0;
  double B_refined = 0.0;
  double constant = 0.0;  // q^{1/q} q'^{1/q'} for q in (1, inf), else 1
  HardyVerdict verdict = HardyVerdict::ok;
  bool bound_ok = false;
};

// B_1 or B_2 on a tabulation (weights sampled at cell midpoints).
double hardy_constant(const HardyWeights& w, const HardyGrid& grid);

// f given per cell of `grid`.
HardyReport hardy_check(const HardyWeights& w, const HardyGrid& grid,
                        const std::vector<double>& f);

// ---- integral and maximal-function estimates -----------------------------

// power_from_zero:   int_0^s t^q Phi(1/t)^alpha dt <= C s^{q+1} Phi(1/s)^alpha, q > -1
// log_from_zero:     int_0^s t^{-1} Phi(1/t)^alpha dt <= C Phi(1/s)^{alpha+1}, alpha < -1, s < S
// power_to_infinity: int_s^inf t^q Phi(1/t)^alpha dt <= C s^{q+1} Phi(1/s)^alpha, q < -1
enum class LogIntegralCase { power_from_zero, log_from_zero, power_to_infinity };

struct LogIntegralParams {
  double q = 0.0;
  double alpha = 0.0;
  double S = 1.0;        // case 2 upper end
  double s_min = 1e-8;   // log grid of s
  double s_max = 1e4;
  int points = 97;
};

struct LogIntegralReport {
  std::vector<double> s, lhs, rhs;
  double fitted_C = 0.0;          // max lhs/rhs on the grid
  double fitted_C_refined = 0.0;  // same on a doubled grid
  bool stable = false;            // within 10%
};

LogIntegralReport log_integral_estimates_check(LogIntegralCase c, const LogIntegralParams& p);

// Source norm on the right: frak (r, alpha) with constant 1; weak (r, alpha)
// for r > 1; weak (1, alpha + 1) on a set of finite measure E.
enum class MaximalCase { frak_source, weak_source, log_source };

struct MaximalReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double fitted_C = 0.0;
  bool holds = false;  // case 1: fitted_C <= 1 + 1e-9; else finite
};

// lhs = sup_s {s Phi(1/s)^alpha f**(s)^r}^{1/r} (r = 1 in case 3).
double maximal_sup(const StepProfile& f, double r, double alpha);

MaximalReport maximal_bound_check(MaximalCase c, const StepProfile& f, double r, double alpha);
MaximalReport maximal_bound_check(MaximalCase c, const GridFunction& f, double r, double alpha,
                                  double E_measure = std::numeric_limits<double>::infinity());

}  // namespace fracheat::interp
