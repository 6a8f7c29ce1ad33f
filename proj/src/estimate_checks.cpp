#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <cmath>

#include "fracheat/error.hpp"
#include "fracheat/interp.hpp"
#include "fracheat/phi.hpp"

namespace fracheat::interp {

namespace {

using zygmund::phi_exp;
using zygmund::phi_recip;

constexpr double kInf = std::numeric_limits<double>::infinity();

// lhs / rhs at one s. Each case is rewritten with tau = s e^{-+u} so that
// the s-dependence of the right side cancels inside the integrand.
double log_integral_ratio(LogIntegralCase c, double q, double alpha, double s) {
  thread_local boost::math::quadrature::exp_sinh<double> integrator;
  const double ls = std::log(s);
  const double base = phi_exp(-ls);  // Phi(1/s)
  double err = 0.0;
  switch (c) {
    case LogIntegralCase::power_from_zero: {
      auto g = [&](double u) {
        return std::exp(alpha * std::log(phi_exp(u - ls) / base) - (q + 1.0) * u);
      };
      return integrator.integrate(g, 0.0, kInf, 1e-12, &err);
    }
    case LogIntegralCase::log_from_zero: {
      // int_0^inf Phi(e^u / s)^alpha du over Phi(1/s)^{alpha + 1}
      auto g = [&](double u) { return std::pow(phi_exp(u - ls) / base, alpha); };
      return integrator.integrate(g, 0.0, kInf, 1e-12, &err) / base;
    }
    case LogIntegralCase::power_to_infinity: {
      auto g = [&](double u) {
        return std::exp((q + 1.0) * u) * std::pow(phi_exp(-u - ls) / base, alpha);
      };
      return integrator.integrate(g, 0.0, kInf, 1e-12, &err);
    }
  }
  return 0.0;
}

double log_integral_rhs(LogIntegralCase c, double q, double alpha, double s) {
  if (c == LogIntegralCase::log_from_zero) return std::pow(phi_recip(s), alpha + 1.0);
  return std::pow(s, q + 1.0) * std::pow(phi_recip(s), alpha);
}

}  // namespace

LogIntegralReport log_integral_estimates_check(LogIntegralCase c, const LogIntegralParams& p) {
  require(p.points >= 2, "log-integral check needs at least two grid points");
  require(p.s_min > 0.0 && p.s_max > p.s_min, "log-integral grid needs 0 < s_min < s_max");
  require(std::isfinite(p.alpha), "alpha must be finite");
  double s_max = p.s_max;
  switch (c) {
    case LogIntegralCase::power_from_zero:
      require(p.q > -1.0, "first estimate needs q > -1");
      break;
    case LogIntegralCase::log_from_zero:
      require(p.alpha < -1.0, "second estimate needs alpha < -1");
      require(p.S > 0.0 && std::isfinite(p.S), "second estimate needs finite S > 0");
      require(p.s_min < p.S, "second estimate needs s_min < S");
      // s ranges over (0, S)
      s_max = std::min(s_max, p.S * (1.0 - 1e-12));
      break;
    case LogIntegralCase::power_to_infinity:
      require(p.q < -1.0, "third estimate needs q < -1");
      break;
  }

  auto sweep = [&](int n, LogIntegralReport* keep) {
    double best = 0.0;
    for (int k = 0; k < n; ++k) {
      const double s = p.s_min * std::pow(s_max / p.s_min, double(k) / (n - 1));
      const double ratio = log_integral_ratio(c, p.q, p.alpha, s);
      require(std::isfinite(ratio), "log-integral quadrature is not finite",
              ErrorCode::quadrature_failure);
      best = std::max(best, ratio);
      if (keep) {
        const double rhs = log_integral_rhs(c, p.q, p.alpha, s);
        keep->s.push_back(s);
        keep->rhs.push_back(rhs);
        keep->lhs.push_back(ratio * rhs);
      }
    }
    return best;
  };

  LogIntegralReport rep;
  rep.fitted_C = sweep(p.points, &rep);
  rep.fitted_C_refined = sweep(2 * p.points - 1, nullptr);
  rep.stable = std::isfinite(rep.fitted_C) && rep.fitted_C > 0.0 &&
               std::abs(rep.fitted_C_refined - rep.fitted_C) <= 0.1 * rep.fitted_C;
  return rep;
}

double maximal_sup(const StepProfile& f, double r, double alpha) {
  require(r >= 1.0 && std::isfinite(r), "maximal bound needs 1 <= r < infinity");
  require(alpha >= 0.0, "maximal bound needs alpha >= 0");
  // s f**(s) = int_0^s f*, so r = 1 is the frak norm; for r > 1 the quantity
  // is the primed weak norm.
  if (r == 1.0) return zygmund::norm(f, {1.0, alpha, zygmund::Flavor::frak});
  return zygmund::norm(f, {r, alpha, zygmund::Flavor::weak_primed});
}

MaximalReport maximal_bound_check(MaximalCase c, const StepProfile& f, double r, double alpha) {
  using zygmund::Flavor;
  MaximalReport rep;
  switch (c) {
    case MaximalCase::frak_source:
      require(r >= 1.0, "first maximal bound needs r >= 1");
      require(alpha >= 0.0, "first maximal bound needs alpha >= 0");
      rep.rhs = zygmund::norm(f, {r, alpha, Flavor::frak});
      break;
    case MaximalCase::weak_source:
      require(r > 1.0, "second maximal bound needs r > 1");
      require(alpha >= 0.0, "second maximal bound needs alpha >= 0");
      rep.rhs = zygmund::norm(f, {r, alpha, Flavor::weak});
      break;
    case MaximalCase::log_source:
      require(r == 1.0, "third maximal bound needs r = 1");
      require(alpha > 0.0, "third maximal bound needs alpha > 0");
      rep.rhs = zygmund::norm(f, {1.0, alpha + 1.0, Flavor::weak});
      break;
  }
  rep.lhs = maximal_sup(f, r, alpha);
  rep.fitted_C = rep.rhs > 0.0 ? rep.lhs / rep.rhs : (rep.lhs > 0.0 ? kInf : 0.0);
  rep.holds = c == MaximalCase::frak_source ? rep.fitted_C <= 1.0 + 1e-9
                                        : std::isfinite(rep.fitted_C);
  return rep;
}

MaximalReport maximal_bound_check(MaximalCase c, const GridFunction& f, double r, double alpha,
                                  double E_measure) {
  const StepProfile prof = rearrange::rearrangement(f);
  if (c == MaximalCase::log_source) {
    require(std::isfinite(E_measure) && E_measure > 0.0,
            "third maximal bound needs a set E of finite measure");
    require(prof.support_measure() <= E_measure * (1.0 + 1e-12),
            "f must vanish outside E (support larger than |E|)");
  }
  return maximal_bound_check(c, prof, r, alpha);
}

}  // namespace fracheat::interp
