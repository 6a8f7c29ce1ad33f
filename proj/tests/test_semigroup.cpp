#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fracheat/error.hpp"
#include "fracheat/fit.hpp"
#include "fracheat/semigroup.hpp"

using namespace fracheat;
using namespace fracheat::semigroup;
using gridfn::make_grid;
using harness::RateSample;

namespace {

GridFunction random_nonnegative(std::mt19937_64& rng, const GridSpec& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(g.size());
  for (auto& x : v) x = u(rng) < 0.6 ? 0.0 : std::exp(2.0 * u(rng));
  return GridFunction(g, v);
}

double max_diff(const GridFunction& a, const GridFunction& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_SUITE("semigroup") {

TEST_CASE("constants are fixed and mass is conserved") {
  const auto g = make_grid(2, 4.0, 64);
  const auto c = apply(GridFunction::constant(g, 2.5), {1.0, 0.7}, {1.0});
  for (double x : c.values()) CHECK(x == doctest::Approx(2.5).epsilon(1e-13));
  std::mt19937_64 rng(1);
  const auto f = random_nonnegative(rng, g);
  for (double theta : {0.5, 1.0, 2.0}) {
    const auto out = apply(f, {theta, 0.3}, {1.0});
    CHECK(out.mean() == doctest::Approx(f.mean()).epsilon(1e-12));
  }
}

TEST_CASE("semigroup law") {
  const auto g = make_grid(1, 8.0, 256);
  std::mt19937_64 rng(2);
  const auto f = random_nonnegative(rng, g);
  const PropagatorOptions loose{1.0};
  for (double theta : {0.7, 1.0, 2.0}) {
    const auto two = apply(apply(f, {theta, 0.2}, loose), {theta, 0.5}, loose);
    const auto one = apply(f, {theta, 0.7}, loose);
    CHECK(max_diff(one, two) <= 1e-12 * f.max_abs());
  }
}

TEST_CASE("Gaussian kernel") {
  const auto g = make_grid(1, 32.0, 1024);
  const auto k = kernel({2.0, 0.25}, g);
  double err = 0.0;
  for (int i = 0; i < 1024; ++i) {
    const double x = k.coordinate(i);
    err = std::max(err, std::abs(k.values[i] - std::exp(-x * x) / std::sqrt(std::numbers::pi)));
  }
  CHECK(err < 1e-8);
  CHECK(k.mass() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("kernel scaling and Chapman-Kolmogorov") {
  const auto g = make_grid(1, 32.0, 2048);
  const auto k1 = kernel({2.0, 1.0}, g), k4 = kernel({2.0, 4.0}, g, {1e-6});
  // G(x, 4) = 4^{-1/2} G(x / 2, 1)
  for (int j = -200; j <= 200; ++j) {
    const double big = k4.values[std::size_t(1024 + 2 * j)];
    CHECK(big == doctest::Approx(0.5 * k1.values[std::size_t(1024 + j)]).epsilon(1e-6).scale(1e-6));
  }
  const auto g2 = make_grid(2, 8.0, 64);
  const auto a = kernel({1.0, 0.5}, g2, {1.0});
  const auto b = kernel({1.0, 0.75}, g2, {1.0});
  const auto shifted = apply(GridFunction(g2, a.values), {1.0, 0.25}, {1.0});
  double m = 0.0, top = 0.0;
  for (std::size_t i = 0; i < b.values.size(); ++i) {
    m = std::max(m, std::abs(shifted[i] - b.values[i]));
    top = std::max(top, b.values[i]);
  }
  CHECK(m <= 1e-10 * top);
}

TEST_CASE("kernel shape") {
  const auto g = make_grid(1, 16.0, 1024);
  for (double theta : {1.0, 2.0}) {
    const auto k = kernel({theta, 1.0}, g, {1.0});
    CHECK(k.mass() == doctest::Approx(1.0).epsilon(1e-10));
    const double top = k.values[512];
    for (int i = 513; i < 1024; ++i) CHECK(k.values[i] <= k.values[i - 1] + 1e-9 * top);
    for (int i = 1; i < 512; ++i) CHECK(k.values[i] >= k.values[i - 1] - 1e-9 * top);
  }
}

TEST_CASE("positivity above the calibrated time") {
  const auto g = make_grid(1, 8.0, 256);
  const double tmin = positivity_time(g, 1.0);
  CHECK(tmin > 0.0);
  CHECK(positivity_time(g, 1.0) == tmin);
  const auto k = kernel({1.0, 2.0 * tmin}, g, {1.0});
  double lo = 0.0, hi = 0.0;
  for (double v : k.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo >= -1e-12 * hi);
  std::mt19937_64 rng(3);
  const auto out = apply(random_nonnegative(rng, g), {1.0, 2.0 * tmin}, {1.0});
  double mn = 0.0;
  for (double v : out.values()) mn = std::min(mn, v);
  CHECK(mn >= -1e-12 * out.max_abs());
}

TEST_CASE("admissibility") {
  const auto g = make_grid(1, 4.0, 128);
  CHECK_NOTHROW(check_admissible(g, {2.0, 0.01}));
  try {
    check_admissible(g, {2.0, 100.0});
    FAIL("expected inadmissible time");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::inadmissible_time);
  }
  CHECK(leakage_bound(g, {2.0, 1.0}) == doctest::Approx(std::erfc(1.0)).epsilon(1e-12));
  CHECK(leakage_bound(g, {1.0, 1.0}) > leakage_bound(g, {1.0, 0.1}));
}

TEST_CASE("kernel bound fit for theta = 1") {
  const auto g = make_grid(1, 64.0, 4096);
  const auto r1 = kernel_bound_fit({1.0, 1.0}, g, {0.2});
  const auto r4 = kernel_bound_fit({1.0, 4.0}, g, {0.2});
  CHECK(r1.c_lower > 0.0);
  CHECK(std::isfinite(r1.c_upper));
  CHECK(r4.c_upper == doctest::Approx(r1.c_upper).epsilon(0.05));
  // the Cauchy kernel over h_t is 1/pi at 0 and (1 + r)^2 / (pi (1 + r^2)) in general
  CHECK(r1.c_upper <= 2.0 / std::numbers::pi * 1.01);
  CHECK(r1.c_lower >= 1.0 / std::numbers::pi * 0.99);
  const auto gauss = kernel_bound_fit({2.0, 1.0}, make_grid(1, 32.0, 1024));
  CHECK(std::isfinite(gauss.c_upper));
}

TEST_CASE("monotone decay and Young") {
  const auto g = make_grid(1, 16.0, 512);
  std::mt19937_64 rng(5);
  double cmax = 0.0, cmin = 1e300;
  for (int i = 0; i < 10; ++i) {
    const auto f = random_nonnegative(rng, g);
    double prev = 1e300;
    for (double t : geometric_times(0.05, 2.0, 8)) {
      const auto s = apply(f, {2.0, t}, {1e-3});
      const double n2 = zygmund::norm(s, {2.0, 0.0, zygmund::Flavor::strong});
      CHECK(n2 <= prev * (1 + 1e-9));
      prev = n2;
    }
    // L^1 -> L^2 for theta = 2: ||S(t) f||_2 <= (8 pi t)^{-1/4} ||f||_1
    const double t = 1.0;
    const double ratio = zygmund::norm(apply(f, {2.0, t}, {1e-3}), {2.0, 0.0, zygmund::Flavor::strong}) /
                         (std::pow(t, -0.25) * zygmund::norm(f, {1.0, 0.0, zygmund::Flavor::strong}));
    CHECK(ratio <= std::pow(8.0 * std::numbers::pi, -0.25) * (1 + 1e-9));
    cmax = std::max(cmax, ratio);
    cmin = std::min(cmin, ratio);
  }
  CHECK(cmax / cmin < 10.0);
}

TEST_CASE("fit_rate") {
  std::vector<RateSample> s;
  for (double t : geometric_times(0.01, 0.1, 9)) s.push_back({t, std::pow(t, -0.5)});
  auto fit = harness::fit_rate(s, false);
  CHECK(fit.power_exponent == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fit.residual < 1e-12);

  s.clear();
  for (double t : geometric_times(0.01, 0.1, 9)) s.push_back({t, 3.0});
  CHECK(std::abs(harness::fit_rate(s, false).power_exponent) < 1e-12);

  s.clear();
  for (double t : geometric_times(1e-3, 1e-2, 9))
    s.push_back({t, std::pow(t, -1.0) * std::pow(zygmund::phi_recip(t), -2.0)});
  fit = harness::fit_rate(s, true);
  CHECK(fit.power_exponent == doctest::Approx(-1.0).epsilon(0.05));
  CHECK(fit.log_exponent == doctest::Approx(-2.0).epsilon(0.05));

  CHECK_THROWS_AS(harness::fit_rate(std::span(s).first(4), false), Error);
  std::vector<RateSample> flat(6, RateSample{1.0, 1.0});
  CHECK_THROWS_AS(harness::fit_rate(flat, false), Error);
}

TEST_CASE("rate probe on a spike") {
  const auto g = make_grid(1, 1024.0, 65536);
  std::vector<double> v(g.size(), 0.0);
  v[g.size() / 2] = 1.0 / g.cell_measure();
  const GridFunction delta(g, v);
  const auto times = geometric_times(0.5, 5.0, 9);
  const RateProbeSpec spec{1.0, 0.0, zygmund::Flavor::frak, 2.0, 0.0, zygmund::Flavor::strong};
  const auto res = smoothing_rate_probe(delta, 1.0, spec, times, {0.05});
  CHECK(res.predicted_a == doctest::Approx(-0.5));
  CHECK(res.fit.power_exponent == doctest::Approx(-0.5).epsilon(0.05));
  std::vector<double> bad{0.5, 0.7, 2.0, 2.1, 5.0};
  CHECK_THROWS_AS(smoothing_rate_probe(delta, 1.0, spec, bad, {0.05}), Error);
}

}
