#pragma once

#include <limits>
#include <string>
#include <vector>

#include "fracheat/gridfn.hpp"
#include "fracheat/phi.hpp"
#include "fracheat/rearrange.hpp"

namespace fracheat::zygmund {

using gridfn::GridFunction;
using rearrange::StepProfile;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Flavor { strong, frak, weak, strong_primed, weak_primed };

const char* to_string(Flavor f);
Flavor flavor_from_string(const std::string& name);

struct NormSpec {
  double q = 1.0;
  double alpha = 0.0;
  Flavor flavor = Flavor::strong;
  double rho = kInf;  // locality radius; infinity = global
};

void validate(const NormSpec& spec);

enum class SupStrategy {
  stationary,   // endpoints plus bisection on sign changes of the log-derivative
  log_sampled,  // endpoints plus a fixed number of log-spaced points per step
};

struct NormOptions {
  SupStrategy sup_strategy = SupStrategy::stationary;
  int sup_points = 64;    // per step, log_sampled only
  int center_stride = 4;  // uniformly-local center lattice, in cells
};

// Where a sup-type norm attains its value (s = measure variable).
struct SupPoint {
  double value = 0.0;
  double s = 0.0;
};

double norm(const StepProfile& prof, const NormSpec& spec, const NormOptions& opts = {});
double norm(const GridFunction& f, const NormSpec& spec, const NormOptions& opts = {});

// Sup-type flavors (frak, weak, weak_primed): the norm and its maximizer.
SupPoint sup_norm_with_argmax(const StepProfile& prof, const NormSpec& spec,
                              const NormOptions& opts = {});

// int_a^b Phi(1/tau)^alpha dtau, a >= 0.
double weight_integral(double alpha, double a, double b);

struct UlReport {
  double value = 0.0;
  gridfn::Point center{0.0, 0.0, 0.0};
  bool global = false;       // the ball covers the torus; global norm used
  std::size_t centers = 0;   // lattice centers in the sup
  std::size_t evaluated = 0; // centers evaluated after pruning
};

// sup over lattice centers z of norm(f chi_{B(z, rho)}); a lower bound on the
// full sup over z.
UlReport ul_norm(const GridFunction& f, const NormSpec& spec, const NormOptions& opts = {});

// ---- checks --------------------------------------------------------------

struct OrderingReport {
  double strong = 0.0, frak = 0.0, weak = 0.0;
  bool holds = false;
};
OrderingReport norm_ordering_report(const StepProfile& prof, double q, double alpha);
OrderingReport norm_ordering_report(const GridFunction& f, double q, double alpha);

// sup over s of Phi(2/s) / Phi(1/s).
double phi_doubling_constant();

struct ProductReport {
  double lhs = 0.0;         // ||fg|| weak(q, alpha)
  double rhs_factor = 0.0;  // ||f|| weak(q1, alpha1) * ||g|| weak(q2, alpha2)
  double constant = 0.0;    // 2^{1/q}
  double phi_doubling = 0.0;
  bool holds = false;
};
ProductReport product_norm_check(const GridFunction& f, const GridFunction& g, double q,
                                 double q1, double q2, double alpha, double alpha1,
                                 double alpha2, double rho = kInf, const NormOptions& opts = {});

struct PowerReport {
  double lhs = 0.0;  // || |f|^r ||_{q, alpha}
  double rhs = 0.0;  // ||f||_{rq, alpha}^r
  double rel_error = 0.0;
  bool holds = false;
};
PowerReport power_identity_check(const GridFunction& f, double r, double q, double alpha,
                                 Flavor flavor = Flavor::weak, double rho = kInf,
                                 const NormOptions& opts = {});

struct DowngradeReport {
  double lhs = 0.0;  // |||f|||_{1, alpha; rho}
  double rhs = 0.0;  // |||f|||_{1, beta; rho}
  double fitted_constant = 0.0;  // lhs / (Phi(1/rho)^{alpha-beta} rhs)
};
DowngradeReport log_downgrade_check(const GridFunction& f, double alpha, double beta,
                                    double rho, const NormOptions& opts = {});

}  // namespace fracheat::zygmund
