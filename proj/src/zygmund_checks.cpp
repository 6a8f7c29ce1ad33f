#include <algorithm>
#include <cmath>

#include "fracheat/error.hpp"
#include "fracheat/zygmund.hpp"

namespace fracheat::zygmund {

namespace {
bool ordered(double hi, double lo) { return hi >= lo * (1.0 - 1e-9); }
}  // namespace

OrderingReport norm_ordering_report(const StepProfile& p, double q, double alpha) {
  require(std::isfinite(q) && q >= 1.0, "ordering report needs finite q >= 1");
  OrderingReport r;
  r.strong = norm(p, {q, alpha, Flavor::strong});
  r.frak = norm(p, {q, alpha, Flavor::frak});
  r.weak = norm(p, {q, alpha, Flavor::weak});
  r.holds = ordered(r.strong, r.frak) && ordered(r.frak, r.weak);
  return r;
}

OrderingReport norm_ordering_report(const GridFunction& f, double q, double alpha) {
  return norm_ordering_report(rearrange::rearrangement(f), q, alpha);
}

double phi_doubling_constant() {
  double best = 1.0;
  for (int k = -2400; k <= 2400; ++k) {
    const double s = std::pow(10.0, k / 100.0);
    best = std::max(best, phi_recip(s / 2.0) / phi_recip(s));
  }
  return best;
}

ProductReport product_norm_check(const GridFunction& f, const GridFunction& g, double q,
                                 double q1, double q2, double alpha, double alpha1,
                                 double alpha2, double rho, const NormOptions& opts) {
  require(q >= 1.0 && q1 >= 1.0 && q2 >= 1.0, "product check exponents must be >= 1");
  require(std::isfinite(q), "product check needs finite q");
  const double inv = (std::isinf(q1) ? 0.0 : 1.0 / q1) + (std::isinf(q2) ? 0.0 : 1.0 / q2);
  const double wt = (std::isinf(q1) ? 0.0 : alpha1 / q1) + (std::isinf(q2) ? 0.0 : alpha2 / q2);
  require(std::abs(1.0 / q - inv) <= 1e-12, "exponents violate 1/q = 1/q1 + 1/q2");
  require(std::abs(alpha / q - wt) <= 1e-12, "log exponents violate alpha/q = a1/q1 + a2/q2");
  ProductReport r;
  r.lhs = norm(f * g, {q, alpha, Flavor::weak, rho}, opts);
  r.rhs_factor = norm(f, {q1, alpha1, Flavor::weak, rho}, opts) *
                 norm(g, {q2, alpha2, Flavor::weak, rho}, opts);
  r.constant = std::pow(2.0, 1.0 / q);
  r.phi_doubling = phi_doubling_constant();
  r.holds = r.lhs <= r.constant * r.rhs_factor * (1.0 + 1e-9);
  return r;
}

PowerReport power_identity_check(const GridFunction& f, double r, double q, double alpha,
                                 Flavor flavor, double rho, const NormOptions& opts) {
  require(r > 0.0 && r * q >= 1.0, "power identity needs r > 0 and rq >= 1");
  PowerReport rep;
  const GridFunction fr = f.map([r](double x) { return std::pow(std::abs(x), r); });
  rep.lhs = norm(fr, {q, alpha, flavor, rho}, opts);
  rep.rhs = std::pow(norm(f, {r * q, alpha, flavor, rho}, opts), r);
  const double scale = std::max(std::abs(rep.lhs), std::abs(rep.rhs));
  rep.rel_error = scale > 0.0 ? std::abs(rep.lhs - rep.rhs) / scale : 0.0;
  rep.holds = rep.rel_error <= 1e-10;
  return rep;
}

DowngradeReport log_downgrade_check(const GridFunction& f, double alpha, double beta,
                                    double rho, const NormOptions& opts) {
  require(alpha >= 0.0 && alpha <= beta, "log downgrade needs 0 <= alpha <= beta");
  require(rho > 0.0 && std::isfinite(rho), "log downgrade needs a finite radius");
  DowngradeReport r;
  r.lhs = norm(f, {1.0, alpha, Flavor::frak, rho}, opts);
  r.rhs = norm(f, {1.0, beta, Flavor::frak, rho}, opts);
  const double denom = std::pow(phi_recip(rho), alpha - beta) * r.rhs;
  r.fitted_constant = alpha == beta ? 1.0 : (denom > 0.0 ? r.lhs / denom : 0.0);
  return r;
}

}  // namespace fracheat::zygmund
