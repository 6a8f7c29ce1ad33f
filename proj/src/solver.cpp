#include "fracheat/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "fracheat/error.hpp"
#include "fracheat/fft.hpp"
#include "fracheat/parallel.hpp"
#include "fracheat/semigroup.hpp"

namespace fracheat::solver {

using zygmund::Flavor;
using zygmund::NormSpec;

const char* to_string(Regime r) {
  return r == Regime::critical ? "critical" : "supercritical";
}

Regime regime_from_string(const std::string& name) {
  if (name == "critical") return Regime::critical;
  if (name == "supercritical") return Regime::supercritical;
  fail(ErrorCode::invalid_argument, "unknown regime '" + name + "'");
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::converged: return "converged";
    case Verdict::diverged: return "diverged";
    case Verdict::max_iter: return "max_iter";
  }
  return "?";
}

double critical_exponent(int dim, double theta) {
  require(dim > theta, "critical exponent needs N > theta");
  return dim / (dim - theta);
}

double supercritical_r(int dim, double theta, double p) {
  return dim * (p - 1.0) / (theta * p);
}

void validate(const SolveConfig& c, int dim) {
  require(c.theta > 0.0 && c.theta <= 2.0, "theta must lie in (0, 2]");
  require(dim > c.theta, "the solver needs N > theta");
  require(c.p > 1.0, "p must be > 1");
  require(c.T > 0.0 && std::isfinite(c.T), "horizon T must be positive and finite");
  require(c.n_time >= 16, "n_time must be >= 16");
  require(c.grading >= 1.0, "grading must be >= 1");
  require(c.epsilon > 0.0, "epsilon must be > 0");
  require(c.max_iter >= 1, "max_iter must be >= 1");
  require(c.divergence_cap > 1.0, "divergence cap must exceed 1");
  require(c.tolerance > 0.0 && c.tolerance < 1.0, "tolerance must lie in (0, 1)");
  require(c.max_leakage > 0.0, "max_leakage must be > 0");
  require(c.center_stride >= 1, "center stride must be >= 1");
  const double ps = critical_exponent(dim, c.theta);
  if (c.regime == Regime::critical) {
    require(std::abs(c.p - ps) <= 1e-10 * ps, "critical regime needs p = N/(N - theta)");
  } else {
    require(c.p > ps * (1.0 + 1e-10), "supercritical regime needs p > N/(N - theta)");
    require(supercritical_r(dim, c.theta, c.p) >= 1.0, "supercritical regime needs r* >= 1");
  }
}

std::vector<double> time_grid(const SolveConfig& c) {
  const int n = c.n_time;
  std::vector<double> w(n);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += (w[i] = std::pow(c.grading, i));
  std::vector<double> t(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) t[i] = c.T * ((acc += w[i]) / sum);
  t.back() = c.T;
  return t;
}

NormSpec metric_norm(const SolveConfig& c, int dim) {
  const double rho = std::pow(c.T, 1.0 / c.theta);
  if (c.regime == Regime::critical) return {c.p, dim / c.theta, Flavor::weak_primed, rho};
  return {c.p * supercritical_r(dim, c.theta, c.p), 0.0, Flavor::weak_primed, rho};
}

NormSpec solution_norm(const SolveConfig& c, int dim) {
  NormSpec s = metric_norm(c, dim);
  s.flavor = Flavor::weak;
  return s;
}

NormSpec gauge_norm(const SolveConfig& c, int dim) {
  const double rho = std::pow(c.T, 1.0 / c.theta);
  if (c.regime == Regime::critical) return {1.0, (dim - c.theta) / c.theta, Flavor::frak, rho};
  return {supercritical_r(dim, c.theta, c.p), 0.0, Flavor::weak, rho};
}

double sup_in_time(const SpaceTimeFunction& u, const NormSpec& spec,
                   const zygmund::NormOptions& opts, bool* global) {
  std::vector<double> v(u.size());
  std::vector<char> g(u.size(), 0);
  parallel_for(u.size(), [&](std::size_t i) {
    const auto rep = zygmund::ul_norm(u.slices[i], spec, opts);
    v[i] = rep.value;
    g[i] = rep.global;
  });
  if (global) *global = std::any_of(g.begin(), g.end(), [](char c) { return c != 0; });
  double best = 0.0;
  for (double x : v) {
    if (std::isnan(x)) return x;
    best = std::max(best, x);
  }
  return best;
}

namespace {

// phi1(z) = (1 - e^{-z}) / z and phi2(z) = (z - 1 + e^{-z}) / z^2
void phi_functions(double z, double& phi1, double& phi2) {
  if (z < 0.1) {
    // alternating Taylor series; 12 terms are exact to roundoff for z < 0.1
    double term1 = 1.0, term2 = 0.5;
    phi1 = 0.0;
    phi2 = 0.0;
    for (int k = 0; k < 12; ++k) {
      phi1 += term1;
      phi2 += term2;
      term1 *= -z / (k + 2);
      term2 *= -z / (k + 3);
    }
    return;
  }
  const double em = std::expm1(-z);
  phi1 = -em / z;
  phi2 = (z + em) / (z * z);
}

std::vector<double> rates(const fft::Plan& plan, double theta) {
  const auto& xi = plan.frequency_norm();
  std::vector<double> lam(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) lam[i] = std::pow(xi[i], theta);
  return lam;
}

void check_times(const GridSpec& g, const SolveConfig& c) {
  semigroup::check_admissible(g, {c.theta, c.T}, {c.max_leakage});
}

zygmund::NormOptions norm_options(const SolveConfig& c) {
  zygmund::NormOptions o;
  o.center_stride = c.center_stride;
  return o;
}

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

SpaceTimeFunction difference(const SpaceTimeFunction& a, const SpaceTimeFunction& b) {
  SpaceTimeFunction d{a.times, {}};
  for (std::size_t i = 0; i < a.size(); ++i) d.slices.push_back(a.slices[i] - b.slices[i]);
  return d;
}

SpaceTimeFunction add(const SpaceTimeFunction& a, const SpaceTimeFunction& b) {
  SpaceTimeFunction s{a.times, {}};
  for (std::size_t i = 0; i < a.size(); ++i) s.slices.push_back(a.slices[i] + b.slices[i]);
  return s;
}

// Builds a slice, reporting overflow instead of throwing.
bool make_slice(const GridSpec& g, std::vector<double>&& v, std::vector<GridFunction>& out) {
  if (!all_finite(v)) return false;
  out.emplace_back(g, std::move(v));
  return true;
}

// Nonlinear Duhamel term; returns false (and leaves `out` partial) when a
// slice is not finite.
bool nonlinear_duhamel_checked(const SpaceTimeFunction& u, const SolveConfig& c,
                               SpaceTimeFunction& out) {
  const GridSpec& g = u.spec();
  const auto plan = fft::plan_for(g);
  const auto lam = rates(*plan, c.theta);
  const std::size_t ns = plan->spectrum_size();
  const double norm = 1.0 / static_cast<double>(g.size());
  std::vector<fft::cplx> acc(ns, 0.0), fprev(ns, 0.0), fcur(ns);
  std::vector<double> fx(g.size()), outx(g.size());
  std::vector<fft::cplx> tmp(ns);
  out = SpaceTimeFunction{u.times, {}};
  double tprev = 0.0;
  const double p = c.p;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const auto uv = u.slices[i].values();
    for (std::size_t j = 0; j < fx.size(); ++j)
      fx[j] = std::copysign(std::pow(std::abs(uv[j]), p), uv[j]);
    if (!all_finite(fx)) return false;
    plan->forward(fx, fcur);
    const double dt = u.times[i] - tprev;
    for (std::size_t k = 0; k < ns; ++k) {
      const double z = dt * lam[k];
      double p1, p2;
      phi_functions(z, p1, p2);
      acc[k] = std::exp(-z) * acc[k] + dt * ((p1 - p2) * fprev[k] + p2 * fcur[k]);
    }
    std::swap(fprev, fcur);
    for (std::size_t k = 0; k < ns; ++k) tmp[k] = acc[k] * norm;
    plan->inverse(tmp, outx);
    if (!make_slice(g, std::vector<double>(outx), out.slices)) return false;
    tprev = u.times[i];
  }
  return true;
}

}  // namespace

SpaceTimeFunction duhamel_source(const GridFunction& mu, const SolveConfig& c) {
  const GridSpec& g = mu.spec();
  validate(c, g.dim);
  check_times(g, c);
  const auto plan = fft::plan_for(g);
  const auto lam = rates(*plan, c.theta);
  std::vector<fft::cplx> M(plan->spectrum_size()), D(plan->spectrum_size());
  plan->forward(mu.values(), M);
  const double norm = 1.0 / static_cast<double>(g.size());
  SpaceTimeFunction out{time_grid(c), {}};
  std::vector<double> x(g.size());
  for (double t : out.times) {
    // int_0^t e^{-s lambda} ds = t phi1(t lambda)
    for (std::size_t k = 0; k < M.size(); ++k) {
      double p1, p2;
      phi_functions(t * lam[k], p1, p2);
      D[k] = M[k] * (t * p1 * norm);
    }
    plan->inverse(D, x);
    out.slices.emplace_back(g, x, mu.label());
  }
  return out;
}

SpaceTimeFunction nonlinear_duhamel(const SpaceTimeFunction& u, const SolveConfig& c) {
  require(!u.slices.empty(), "nonlinear Duhamel term needs at least one slice");
  SpaceTimeFunction out;
  if (!nonlinear_duhamel_checked(u, c, out))
    fail(ErrorCode::non_finite, "nonlinear Duhamel term overflowed");
  return out;
}

SolveResult picard_iterate(const GridFunction& mu, const SolveConfig& c) {
  const int N = mu.spec().dim;
  validate(c, N);
  const auto opts = norm_options(c);
  const NormSpec dspec = metric_norm(c, N);

  SolveResult res;
  IterationReport& rep = res.report;
  rep.gauge = zygmund::ul_norm(mu, gauge_norm(c, N), opts).value;
  rep.within_epsilon = rep.gauge <= c.epsilon;

  const SpaceTimeFunction source = duhamel_source(mu, c);
  SpaceTimeFunction u = source;  // u_1 (u_0 = 0)
  rep.source_norm = sup_in_time(u, dspec, opts, &rep.global_metric);
  rep.distances.push_back(rep.source_norm);
  rep.iterations = 1;
  auto finish = [&](Verdict v, std::string diag = {}) {
    rep.verdict = v;
    rep.diagnostic = std::move(diag);
    if (v != Verdict::diverged) {
      rep.solution_norm = sup_in_time(u, solution_norm(c, N), opts);
      rep.bound_constant = rep.gauge > 0.0 ? rep.solution_norm / rep.gauge : 0.0;
    }
    res.u = std::move(u);
    return res;
  };
  if (std::isnan(rep.source_norm))
    return finish(Verdict::diverged, "non-finite norm of the Duhamel source");
  if (rep.source_norm == 0.0) return finish(Verdict::converged);

  double bound = rep.source_norm;  // triangle bound on sup_t ||u_k||'
  for (int k = 2; k <= c.max_iter; ++k) {
    SpaceTimeFunction nl;
    if (!nonlinear_duhamel_checked(u, c, nl)) {
      std::ostringstream os;
      os << "non-finite values in the nonlinear term at iteration " << k;
      return finish(Verdict::diverged, os.str());
    }
    SpaceTimeFunction next = add(source, nl);
    const double d = sup_in_time(difference(next, u), dspec, opts);
    rep.iterations = k;
    u = std::move(next);
    if (!std::isfinite(d)) {
      std::ostringstream os;
      os << "non-finite distance at iteration " << k;
      return finish(Verdict::diverged, os.str());
    }
    rep.ratios.push_back(d / rep.distances.back());
    rep.distances.push_back(d);
    bound += d;
    if (bound > c.divergence_cap * rep.source_norm) return finish(Verdict::diverged);
    if (d < c.tolerance * rep.source_norm) return finish(Verdict::converged);
  }
  return finish(Verdict::max_iter);
}

ContractionReport contraction_probe(const GridFunction& mu, const SolveConfig& c, int n_pairs,
                                    const std::vector<double>& epsilons, std::uint64_t seed) {
  const GridSpec& g = mu.spec();
  validate(c, g.dim);
  require(n_pairs >= 1, "contraction probe needs at least one pair");
  require(epsilons.size() >= 2, "contraction probe needs at least two epsilons");
  for (double e : epsilons) require(e > 0.0, "epsilons must be positive");
  const auto opts = norm_options(c);
  const NormSpec dspec = metric_norm(c, g.dim);

  // Shape functions, each normalized to sup_t ||.||' = 1.
  auto normalized = [&](SpaceTimeFunction f) {
    const double n = sup_in_time(f, dspec, opts);
    require(n > 0.0 && std::isfinite(n), "contraction probe shape has zero norm",
            ErrorCode::degenerate);
    for (auto& s : f.slices) s = (1.0 / n) * s;
    return f;
  };
  const SpaceTimeFunction w = normalized(duhamel_source(mu, c));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double smooth_t = std::pow(4.0 * g.spacing(), 2.0);
  auto random_field = [&] {
    std::vector<double> v(g.size());
    for (double& x : v) x = normal(rng);
    const GridFunction noise(g, std::move(v));
    const GridFunction smooth = semigroup::apply(noise, {2.0, smooth_t}, {1.0});
    SpaceTimeFunction f{w.times, {}};
    for (double t : w.times) f.slices.push_back((t / c.T) * smooth);
    return normalized(f);
  };
  struct Pair {
    double a, b, ca, cb;
    SpaceTimeFunction ga, gb;
  };
  std::vector<Pair> pairs;
  for (int j = 0; j < n_pairs; ++j) {
    Pair pr{0.25 + 0.75 * unif(rng), 0.0, unif(rng) - 0.5, unif(rng) - 0.5, random_field(),
            random_field()};
    pr.b = 0.25 + 0.75 * unif(rng);
    if (pr.b == pr.a) pr.b = 0.5 * pr.a;  // distinct draws
    pairs.push_back(std::move(pr));
  }
  auto combine = [&](double eps, double a, const SpaceTimeFunction& gfun, double cc) {
    SpaceTimeFunction u{w.times, {}};
    for (std::size_t i = 0; i < w.size(); ++i)
      u.slices.push_back((eps * a) * w.slices[i] + (eps * cc) * gfun.slices[i]);
    return u;
  };

  ContractionReport rep;
  rep.epsilons = epsilons;
  for (double eps : epsilons) {
    double best = 0.0;
    for (const auto& pr : pairs) {
      const auto u = combine(eps, pr.a, pr.ga, pr.ca);
      const auto v = combine(eps, pr.b, pr.gb, pr.cb);
      const double duv = sup_in_time(difference(u, v), dspec, opts);
      if (!(duv > 0.0)) continue;
      // the source term cancels in F(u) - F(v)
      const double dF =
          sup_in_time(difference(nonlinear_duhamel(u, c), nonlinear_duhamel(v, c)), dspec, opts);
      best = std::max(best, dF / duv);
    }
    rep.max_ratios.push_back(best);
    rep.max_ratio = std::max(rep.max_ratio, best);
  }
  // least-squares slope in log-log
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(epsilons.size());
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    require(rep.max_ratios[i] > 0.0, "contraction ratio vanished", ErrorCode::degenerate);
    const double x = std::log(epsilons[i]), y = std::log(rep.max_ratios[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  require(den > 0.0, "epsilon ladder must contain distinct values", ErrorCode::degenerate);
  rep.epsilon_power_fit = (n * sxy - sx * sy) / den;
  return rep;
}

namespace {

bool converges(const GridFunction& mu, double lambda, const SolveConfig& c, ThresholdReport& r) {
  const Verdict v = picard_iterate(lambda * mu, c).report.verdict;
  r.lambdas.push_back(lambda);
  r.verdicts.push_back(v);
  ++r.evaluations;
  return v == Verdict::converged;
}

}  // namespace

ThresholdReport threshold_bisect(const GridFunction& mu, const SolveConfig& c, double lo,
                                 double hi, int max_widen) {
  require(lo >= 0.0 && hi > lo, "threshold bracket needs 0 <= lambda_lo < lambda_hi");
  ThresholdReport r;
  int widen = 0;
  while (!converges(mu, lo, c, r)) {
    require(lo > 0.0 && widen++ < max_widen,
            "no converged lambda found below the bracket", ErrorCode::domain_error);
    hi = lo;
    lo /= 4.0;
  }
  widen = 0;
  while (converges(mu, hi, c, r)) {
    require(widen++ < max_widen, "no diverging lambda found above the bracket",
            ErrorCode::domain_error);
    lo = hi;
    hi *= 4.0;
  }
  const double target = (hi - lo) * std::pow(2.0, -10);
  while (hi - lo > target) {
    const double mid = 0.5 * (lo + hi);
    if (converges(mu, mid, c, r)) lo = mid; else hi = mid;
  }
  r.lambda_lo = lo;
  r.lambda_hi = hi;
  return r;
}

SweepReport verdict_sweep(const GridFunction& mu, const SolveConfig& c,
                          const std::vector<double>& lambdas) {
  require(std::is_sorted(lambdas.begin(), lambdas.end()), "sweep lambdas must be ascending");
  SweepReport r;
  r.lambdas = lambdas;
  std::vector<Verdict> v(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    v[i] = picard_iterate(lambdas[i] * mu, c).report.verdict;
  r.verdicts = v;
  std::size_t i = 0;
  while (i < v.size() && v[i] == Verdict::converged) ++i;
  r.monotone = std::none_of(v.begin() + i, v.end(),
                            [](Verdict x) { return x == Verdict::converged; });
  return r;
}

}  // namespace fracheat::solver
