#include "fracheat/semigroup.hpp"

#include <algorithm>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <map>
#include <mutex>
#include <sstream>
#include <tuple>

#include "fracheat/error.hpp"

namespace fracheat::semigroup {

void validate(const SemigroupParams& p) {
  require(p.theta > 0.0 && p.theta <= 2.0, "theta must lie in (0, 2]");
  require(p.t > 0.0 && std::isfinite(p.t), "semigroup time must be positive");
}

double leakage_bound(const GridSpec& grid, const SemigroupParams& p) {
  validate(p);
  const double R = 0.5 * grid.half_width;
  const double N = grid.dim;
  if (p.theta == 2.0) return boost::math::gamma_q(N / 2.0, R * R / (4.0 * p.t));
  const double rho0 = R / std::pow(p.t, 1.0 / p.theta);
  return boost::math::ibetac(N, p.theta, rho0 / (1.0 + rho0));
}

void check_admissible(const GridSpec& grid, const SemigroupParams& p,
                      const PropagatorOptions& opts) {
  const double leak = leakage_bound(grid, p);
  if (leak > opts.max_leakage) {
    std::ostringstream os;
    os << "inadmissible time t=" << p.t << " (theta=" << p.theta << "): kernel mass beyond L/2 is "
       << leak << " > " << opts.max_leakage;
    fail(ErrorCode::inadmissible_time, os.str());
  }
}

std::vector<double> symbol(const fft::Plan& plan, const SemigroupParams& p) {
  const auto& xi = plan.frequency_norm();
  std::vector<double> s(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i)
    s[i] = std::exp(-p.t * std::pow(xi[i], p.theta));
  return s;
}

GridFunction apply(const GridFunction& f, const SemigroupParams& p,
                   const PropagatorOptions& opts) {
  check_admissible(f.spec(), p, opts);
  const auto plan = fft::plan_for(f.spec());
  std::vector<fft::cplx> F(plan->spectrum_size());
  plan->forward(f.values(), F);
  const auto s = symbol(*plan, p);
  const double norm = 1.0 / static_cast<double>(f.size());
  for (std::size_t i = 0; i < F.size(); ++i) F[i] *= s[i] * norm;
  std::vector<double> out(f.size());
  plan->inverse(F, out);
  return GridFunction(f.spec(), std::move(out), f.label());
}

double KernelSnapshot::radius(std::size_t idx) const {
  const auto ij = gridfn::unflatten(grid, idx);
  double r2 = 0.0;
  for (int d = 0; d < grid.dim; ++d) r2 += coordinate(ij[d]) * coordinate(ij[d]);
  return std::sqrt(r2);
}

double KernelSnapshot::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.cell_measure();
}

namespace {

KernelSnapshot raw_kernel(const SemigroupParams& p, const GridSpec& grid) {
  const auto plan = fft::plan_for(grid);
  const auto s = symbol(*plan, p);
  std::vector<fft::cplx> S(s.begin(), s.end());
  std::vector<double> wrapped(grid.size());
  plan->inverse(S, wrapped);
  const double scale = 1.0 / grid.total_measure();
  const int M = grid.points_per_axis;
  KernelSnapshot k{grid, p.theta, p.t, std::vector<double>(grid.size())};
  for (std::size_t j = 0; j < wrapped.size(); ++j) {
    const auto ij = gridfn::unflatten(grid, j);
    std::size_t i = 0;
    for (int d = 0; d < grid.dim; ++d) i = i * M + static_cast<std::size_t>((ij[d] + M / 2) % M);
    k.values[i] = wrapped[j] * scale;
  }
  return k;
}

bool kernel_positive(const GridSpec& grid, double theta, double t) {
  const auto k = raw_kernel({theta, t}, grid);
  const auto [mn, mx] = std::minmax_element(k.values.begin(), k.values.end());
  return *mn >= -1e-12 * *mx;
}

}  // namespace

KernelSnapshot kernel(const SemigroupParams& p, const GridSpec& grid,
                      const PropagatorOptions& opts) {
  check_admissible(grid, p, opts);
  return raw_kernel(p, grid);
}

double h_bound(int dim, double theta, double t, double r) {
  return std::pow(t, -dim / theta) * std::pow(1.0 + r / std::pow(t, 1.0 / theta), -dim - theta);
}

KernelBoundReport kernel_bound_fit(const SemigroupParams& p, const GridSpec& grid,
                                   const PropagatorOptions& opts) {
  const auto k = kernel(p, grid, opts);
  KernelBoundReport rep;
  rep.c_lower = std::numeric_limits<double>::infinity();
  rep.min_kernel = *std::min_element(k.values.begin(), k.values.end());
  const double rmax = 0.5 * grid.half_width;
  for (std::size_t i = 0; i < k.values.size(); ++i) {
    const double r = k.radius(i);
    if (r > rmax) continue;
    const double ratio = k.values[i] / h_bound(grid.dim, p.theta, p.t, r);
    rep.c_lower = std::min(rep.c_lower, ratio);
    rep.c_upper = std::max(rep.c_upper, ratio);
  }
  return rep;
}

double positivity_time(const GridSpec& grid, double theta) {
  gridfn::validate(grid);
  require(theta > 0.0 && theta <= 2.0, "theta must lie in (0, 2]");
  static std::mutex m;
  static std::map<std::tuple<int, double, int, double>, double> cache;
  const auto key = std::make_tuple(grid.dim, grid.half_width, grid.points_per_axis, theta);
  {
    std::lock_guard lock(m);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  double pass = std::pow(8.0 * grid.spacing(), theta);
  for (int i = 0; i < 80 && !kernel_positive(grid, theta, pass); ++i) pass *= 2.0;
  const double floor_t = std::pow(grid.spacing() / 64.0, theta);
  double failing = 0.0;
  for (double t = pass / std::pow(2.0, 0.25); t > floor_t; t /= std::pow(2.0, 0.25)) {
    if (!kernel_positive(grid, theta, t)) {
      failing = t;
      break;
    }
    pass = t;
  }
  if (failing > 0.0) {
    for (int it = 0; it < 40; ++it) {
      const double mid = std::sqrt(pass * failing);
      if (kernel_positive(grid, theta, mid)) pass = mid; else failing = mid;
    }
  }
  std::lock_guard lock(m);
  cache[key] = pass;
  return pass;
}

std::vector<double> geometric_times(double t0, double t1, int n) {
  require(n >= 2 && t0 > 0.0 && t1 > t0, "geometric grid needs 0 < t0 < t1 and n >= 2");
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = t0 * std::pow(t1 / t0, double(i) / (n - 1));
  return t;
}

void validate_probe(const RateProbeSpec& s) {
  using zygmund::Flavor;
  require(s.r >= 1.0 && s.q >= s.r, "rate probe needs 1 <= r <= q");
  require(s.alpha >= 0.0 && s.beta >= 0.0, "rate probe log exponents must be >= 0");
  if (s.r == s.q) require(s.alpha <= s.beta, "rate probe with r = q needs alpha <= beta");
  const bool frak_source = s.source_flavor == Flavor::frak;
  const bool weak_source = s.source_flavor == Flavor::weak && s.r > 1.0;
  const bool weak_log_source = s.source_flavor == Flavor::weak && s.r == 1.0 && s.alpha > 0.0;
  require(frak_source || weak_source || weak_log_source,
          "rate probe source must be frak (r >= 1), weak (r > 1), or weak with r = 1 and "
          "alpha > 0 (source weight alpha + 1)");
  require(s.flavor == Flavor::strong || s.flavor == Flavor::frak || s.flavor == Flavor::weak,
          "rate probe target flavor must be strong, frak or weak");
}

RateProbeResult smoothing_rate_probe(const GridFunction& f, double theta,
                                     const RateProbeSpec& spec, std::span<const double> t_grid,
                                     const PropagatorOptions& opts, double residual_threshold) {
  validate_probe(spec);
  require(harness::is_geometric(t_grid), "rate probe needs a geometric time grid");
  const auto [tmin, tmax] = std::minmax_element(t_grid.begin(), t_grid.end());
  require(*tmax / *tmin >= 10.0 * (1.0 - 1e-9), "rate probe time grid must span a decade");
  const double N = f.spec().dim;
  const double inv_q = std::isinf(spec.q) ? 0.0 : 1.0 / spec.q;
  RateProbeResult res;
  res.predicted_a = -(N / theta) * (1.0 / spec.r - inv_q);
  res.predicted_b = -spec.alpha / spec.r + spec.beta * inv_q;
  const zygmund::NormSpec target{spec.q, spec.beta, spec.flavor};
  for (double t : t_grid)
    res.samples.push_back({t, zygmund::norm(apply(f, {theta, t}, opts), target)});
  res.fit = harness::fit_rate(res.samples, std::abs(res.predicted_b) > 0.0);
  res.residual_flagged = res.fit.residual > residual_threshold;
  return res;
}

}  // namespace fracheat::semigroup
