#include "fracheat/zygmund.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>

#include "fracheat/error.hpp"

namespace fracheat::zygmund {

const char* to_string(Flavor f) {
  switch (f) {
    case Flavor::strong: return "strong";
    case Flavor::frak: return "frak";
    case Flavor::weak: return "weak";
    case Flavor::strong_primed: return "strong_primed";
    case Flavor::weak_primed: return "weak_primed";
  }
  return "?";
}

Flavor flavor_from_string(const std::string& name) {
  for (Flavor f : {Flavor::strong, Flavor::frak, Flavor::weak, Flavor::strong_primed,
                   Flavor::weak_primed})
    if (name == to_string(f)) return f;
  fail(ErrorCode::invalid_argument, "unknown norm flavor '" + name + "'");
}

void validate(const NormSpec& s) {
  require(s.q >= 1.0, "norm exponent q must be >= 1");
  require(s.alpha >= 0.0 && std::isfinite(s.alpha), "log exponent alpha must be >= 0");
  require(s.rho > 0.0, "locality radius must be > 0");
  if (std::isfinite(s.q) && (s.flavor == Flavor::strong_primed || s.flavor == Flavor::weak_primed))
    require(s.q > 1.0, "primed norms require q > 1");
}

namespace {

using boost::math::quadrature::exp_sinh;
using boost::math::quadrature::gauss;
using boost::math::quadrature::gauss_kronrod;

// d/ds log Phi(1/s)
double dlog_phi(double s) {
  return -1.0 / (phi_recip(s) * s * (1.0 + std::numbers::e * s));
}

// int_a^b F(tau) dtau with 0 < a < b, integrated in x = log tau.
template <class F>
double log_integral(F&& fn, double a, double b) {
  const double la = std::log(a), lb = std::log(b);
  auto g = [&](double x) {
    const double t = std::exp(x);
    return t * fn(t);
  };
  if (lb - la <= 0.5) return gauss<double, 10>::integrate(g, la, lb);
  double err = 0.0;
  return gauss_kronrod<double, 21>::integrate(g, la, lb, 20, 1e-13, &err);
}

double tail_integral(double alpha, double q, double s) {
  // int_s^inf Phi(1/tau)^alpha tau^{-q} dtau, q > 1, with tau = s e^u
  thread_local exp_sinh<double> integrator;
  const double ls = std::log(s);
  auto g = [&](double u) { return std::pow(phi_exp(-u - ls), alpha) * std::exp((1.0 - q) * u); };
  double err = 0.0;
  return std::pow(s, 1.0 - q) * integrator.integrate(g, 0.0, kInf, 1e-13, &err);
}

// Sup of value() over [a, b] given its log-derivative. The log-derivative is
// sampled on a log-spaced partition and every + to - sign change is bisected.
template <class V, class D>
SupPoint interval_sup(V&& value, D&& dlog, double a, double b, const NormOptions& opts) {
  SupPoint best{value(b), b};
  auto consider = [&](double s) {
    const double v = value(s);
    if (v > best.value) best = {v, s};
  };
  const double a_eff = a > 0.0 ? a : b * 1e-30;
  if (a > 0.0) consider(a);
  const double la = std::log(a_eff), lb = std::log(b);
  if (opts.sup_strategy == SupStrategy::log_sampled) {
    const int n = std::max(1, opts.sup_points);
    for (int k = 1; k < n; ++k) consider(std::exp(la + (lb - la) * k / n));
    return best;
  }
  const int n = std::clamp(static_cast<int>(std::ceil((lb - la) / 0.25)), 1, 64);
  double xprev = la;
  double dprev = dlog(a_eff);
  for (int k = 1; k <= n; ++k) {
    const double x = k == n ? lb : la + (lb - la) * k / n;
    const double d = dlog(std::exp(x));
    if (k < n) consider(std::exp(x));
    if (dprev > 0.0 && d < 0.0) {
      double lo = xprev, hi = x;
      for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (dlog(std::exp(mid)) > 0.0) lo = mid; else hi = mid;
      }
      consider(std::exp(0.5 * (lo + hi)));
    }
    xprev = x;
    dprev = d;
  }
  return best;
}

double strong_norm(const StepProfile& p, double q, double alpha) {
  const auto& bp = p.breakpoints();
  const auto& v = p.values();
  double acc = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    acc += std::pow(v[i], q) * weight_integral(alpha, bp[i], bp[i + 1]);
  return std::pow(acc, 1.0 / q);
}

double strong_primed_norm(const StepProfile& p, double q, double alpha) {
  const auto& bp = p.breakpoints();
  const auto& v = p.values();
  if (v.empty()) return 0.0;
  double acc = std::pow(v[0], q) * weight_integral(alpha, 0.0, bp[1]);
  for (std::size_t i = 1; i < v.size(); ++i) {
    const double a = bp[i], c = p.cumulative(i), vi = v[i];
    acc += log_integral(
        [&](double t) {
          return std::pow(phi_recip(t), alpha) * std::pow((c + vi * (t - a)) / t, q);
        },
        a, bp[i + 1]);
  }
  const double sK = bp.back();
  acc += std::pow(p.cumulative(v.size()), q) * tail_integral(alpha, q, sK);
  return std::pow(acc, 1.0 / q);
}

SupPoint weak_sup(const StepProfile& p, double q, double alpha, const NormOptions& o) {
  const auto& bp = p.breakpoints();
  const auto& v = p.values();
  SupPoint best;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double vq = std::pow(v[i], q);
    auto value = [&](double s) { return s * std::pow(phi_recip(s), alpha) * vq; };
    auto dlog = [&](double s) { return 1.0 / s + alpha * dlog_phi(s); };
    const SupPoint sp = interval_sup(value, dlog, bp[i], bp[i + 1], o);
    if (sp.value > best.value) best = sp;
  }
  return {std::pow(best.value, 1.0 / q), best.s};
}

SupPoint frak_sup(const StepProfile& p, double q, double alpha, const NormOptions& o) {
  const auto& bp = p.breakpoints();
  const auto& v = p.values();
  SupPoint best;
  double c = 0.0;  // int_0^{s_i} (f*)^q
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double vq = std::pow(v[i], q), a = bp[i];
    auto cum = [&](double s) { return c + vq * (s - a); };
    auto value = [&](double s) { return std::pow(phi_recip(s), alpha) * cum(s); };
    auto dlog = [&](double s) { return vq / cum(s) + alpha * dlog_phi(s); };
    const SupPoint sp = alpha == 0.0 ? SupPoint{value(bp[i + 1]), bp[i + 1]}
                                     : interval_sup(value, dlog, a, bp[i + 1], o);
    if (sp.value > best.value) best = sp;
    c += vq * (bp[i + 1] - a);
  }
  return {std::pow(best.value, 1.0 / q), best.s};
}

SupPoint weak_primed_sup(const StepProfile& p, double q, double alpha, const NormOptions& o) {
  const auto& bp = p.breakpoints();
  const auto& v = p.values();
  SupPoint best;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double a = bp[i], c = p.cumulative(i), vi = v[i];
    auto fss = [&](double s) { return (c + vi * (s - a)) / s; };
    auto value = [&](double s) {
      return std::pow(s, 1.0 / q) * std::pow(phi_recip(s), alpha / q) * fss(s);
    };
    auto dlog = [&](double s) {
      return (1.0 / q - 1.0) / s + (alpha / q) * dlog_phi(s) + vi / (c + vi * (s - a));
    };
    const SupPoint sp = interval_sup(value, dlog, a, bp[i + 1], o);
    if (sp.value > best.value) best = sp;
  }
  return best;
}

}  // namespace

double weight_integral(double alpha, double a, double b) {
  require(a >= 0.0 && b >= a, "weight integral needs 0 <= a <= b");
  if (b == a) return 0.0;
  if (alpha == 0.0) return b - a;
  if (a == 0.0) {
    // int_0^b = b int_0^inf Phi(e^u / b)^alpha e^{-u} du
    thread_local exp_sinh<double> integrator;
    const double lb = std::log(b);
    auto g = [&](double u) { return std::exp(alpha * std::log(phi_exp(u - lb)) - u); };
    double err = 0.0;
    return b * integrator.integrate(g, 0.0, kInf, 1e-13, &err);
  }
  return log_integral([&](double t) { return std::pow(phi_recip(t), alpha); }, a, b);
}

SupPoint sup_norm_with_argmax(const StepProfile& p, const NormSpec& spec,
                              const NormOptions& opts) {
  validate(spec);
  require(std::isinf(spec.rho), "profile norms are global (rho = infinity)");
  if (p.empty()) return {};
  if (std::isinf(spec.q)) return {p.sup(), 0.0};
  switch (spec.flavor) {
    case Flavor::weak: return weak_sup(p, spec.q, spec.alpha, opts);
    case Flavor::frak: return frak_sup(p, spec.q, spec.alpha, opts);
    case Flavor::weak_primed: return weak_primed_sup(p, spec.q, spec.alpha, opts);
    default: fail(ErrorCode::invalid_argument, "not a sup-type flavor");
  }
}

double norm(const StepProfile& p, const NormSpec& spec, const NormOptions& opts) {
  validate(spec);
  require(std::isinf(spec.rho), "local norms need a grid function (ball restriction)");
  if (p.empty()) return 0.0;
  if (std::isinf(spec.q)) return p.sup();
  switch (spec.flavor) {
    case Flavor::strong: return strong_norm(p, spec.q, spec.alpha);
    case Flavor::strong_primed: return strong_primed_norm(p, spec.q, spec.alpha);
    default: return sup_norm_with_argmax(p, spec, opts).value;
  }
}

double norm(const GridFunction& f, const NormSpec& spec, const NormOptions& opts) {
  validate(spec);
  if (std::isinf(spec.rho)) return norm(rearrange::rearrangement(f), spec, opts);
  return ul_norm(f, spec, opts).value;
}

}  // namespace fracheat::zygmund
