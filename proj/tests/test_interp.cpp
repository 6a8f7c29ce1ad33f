#include <cmath>
#include <random>

#include "doctest.h"
#include "fracheat/error.hpp"
#include "fracheat/interp.hpp"

using namespace fracheat;
using namespace fracheat::interp;
using zygmund::kInf;
using zygmund::phi_recip;

namespace {

StepProfile random_profile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int k = 1 + int(u(rng) * 25);
  std::vector<double> b{0.0}, v;
  double level = std::exp(3.0 * u(rng));
  for (int i = 0; i < k; ++i) {
    b.push_back(b.back() + std::exp(-5.0 + 6.0 * u(rng)));
    v.push_back(level);
    level *= 0.2 + 0.75 * u(rng);
  }
  return StepProfile(b, v, 1e6);
}

}  // namespace

TEST_SUITE("interp") {

TEST_CASE("pair construction") {
  const auto p = make_pair(1.0, 4.0, 2.0, 0.0, SpaceFamily::plain_lebesgue);
  CHECK((1.0 - p.kappa) / p.q0 + p.kappa / p.q1 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p.kappa == doctest::Approx(2.0 / 3.0));
  CHECK_THROWS_AS(make_pair(4.0, 1.0, 2.0, 0.0, SpaceFamily::frak_log), Error);
  CHECK_THROWS_AS(make_pair(1.0, 4.0, 5.0, 0.0, SpaceFamily::frak_log), Error);
}

TEST_CASE("K-functional of a two-level function") {
  // values {4, 1} on measures {1, 8}; L^1 and L^4 endpoints
  const StepProfile f({0.0, 1.0, 9.0}, {4.0, 1.0}, 100.0);
  const auto pair = make_pair(1.0, 4.0, 2.0, 0.0, SpaceFamily::plain_lebesgue);
  const KTable table(f, pair);
  for (double lam : {0.01, 0.1, 0.5, 1.0, 2.0, 5.0, 50.0}) {
    double best = 1e300;
    for (int k = 0; k <= 10000; ++k) {
      const double tau = std::pow(10.0, -1.0 + 2.0 * k / 10000.0);  // [0.1, 10]
      double n0 = 0.0, t1 = 0.0;
      if (4.0 > tau) n0 += 4.0; else t1 += 256.0;
      if (1.0 > tau) n0 += 8.0; else t1 += 8.0;
      best = std::min(best, n0 + lam * std::pow(t1, 0.25));
    }
    CHECK(table.k_upper(lam) == doctest::Approx(best).epsilon(1e-3));
  }
  CHECK(k_functional_upper(StepProfile(), 1.0, pair) == 0.0);
}

TEST_CASE("K-functional envelope") {
  std::mt19937_64 rng(3);
  for (auto fam : {SpaceFamily::frak_log, SpaceFamily::plain_lebesgue}) {
    const auto pair = make_pair(1.5, 3.0, 2.0, 2.0, fam);
    for (int i = 0; i < 20; ++i) {
      const auto f = random_profile(rng);
      const KTable t(f, pair);
      double prev = 0.0, prev_slope = 1e300, prev_lam = 0.0;
      for (int k = 0; k < 60; ++k) {
        const double lam = std::pow(10.0, -3.0 + 6.0 * k / 59.0);
        const double v = t.k_upper(lam);
        CHECK(v <= std::min(t.norm_x0(), lam * t.norm_x1()) * (1 + 1e-12) + 1e-9);
        CHECK(v >= prev - 1e-9);
        if (k > 0) {
          const double slope = (v - prev) / (lam - prev_lam);
          CHECK(slope <= prev_slope * (1 + 1e-9) + 1e-9);
          prev_slope = slope;
        }
        prev = v;
        prev_lam = lam;
      }
    }
  }
}

TEST_CASE("embedding") {
  const StepProfile chi({0.0, 0.7}, {1.0}, 10.0);
  CHECK(interp_embedding_check(chi, make_pair(1.0, 4.0, 2.0, 0.0, SpaceFamily::frak_log)).holds);
  std::mt19937_64 rng(5);
  const auto pair = make_pair(1.5, 3.0, 2.0, 2.0, SpaceFamily::frak_log);
  for (int i = 0; i < 100; ++i) {
    const auto rep = interp_embedding_check(random_profile(rng), pair);
    CHECK(rep.holds);
    CHECK(rep.lhs <= rep.rhs * (1 + 1e-9));
  }
  CHECK_THROWS_AS(
      interp_embedding_check(chi, make_pair(1.0, 4.0, 2.0, 0.0, SpaceFamily::plain_lebesgue)),
      Error);
  // plain Lebesgue pair against the weak L^q norm, both directions within a factor of 4
  const auto plain = make_pair(1.0, 4.0, 2.0, 0.0, SpaceFamily::plain_lebesgue);
  for (int i = 0; i < 50; ++i) {
    const auto f = random_profile(rng);
    const double weak = zygmund::norm(f, {2.0, 0.0, zygmund::Flavor::weak});
    const double interp = interpolation_norm_upper(f, plain);
    CHECK(interp / weak <= 4.0);
    CHECK(weak / interp <= 4.0);
  }
}

TEST_CASE("Hardy with unit weights") {
  const auto grid = HardyGrid::graded(0.0, 1.0, 200);
  HardyWeights w;
  w.a = 0.0;
  w.b = 1.0;
  w.q = 1.0;
  w.U = [](double) { return 1.0; };
  w.V = [](double) { return 1.0; };
  CHECK(hardy_constant(w, grid) == doctest::Approx(1.0).epsilon(1e-6));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> f(grid.cells());
  for (auto& x : f) x = u(rng) * 3.0;
  double lhs = 0.0, rhs = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double wdt = grid.edges[i + 1] - grid.edges[i];
    lhs += f[i] * wdt * (1.0 - grid.mid(i));
    rhs += f[i] * wdt;
  }
  const auto rep = hardy_check(w, grid, f);
  CHECK(rep.lhs == doctest::Approx(lhs).epsilon(1e-12));
  CHECK(rep.rhs == doctest::Approx(rhs).epsilon(1e-12));
  CHECK(rep.bound_ok);

  const auto zero = hardy_check(w, grid, std::vector<double>(grid.cells(), 0.0));
  CHECK(zero.lhs == 0.0);
  CHECK(zero.bound_ok);

  // scaling U by c scales lhs and B by c
  auto w3 = w;
  w3.U = [](double) { return 3.0; };
  const auto rep3 = hardy_check(w3, grid, f);
  CHECK(rep3.lhs == doctest::Approx(3.0 * rep.lhs));
  CHECK(rep3.B == doctest::Approx(3.0 * rep.B));
  CHECK(rep3.bound_ok == rep.bound_ok);
}

TEST_CASE("Hardy with logarithmic weights") {
  const double q = 2.0, alpha = 1.0;
  HardyWeights w;
  w.a = 0.0;
  w.b = 1.0;
  w.q = q;
  w.U = [=](double t) { return std::pow(t, -1.0 + 1.0 / q) * std::pow(phi_recip(t), alpha / q); };
  w.V = [=](double t) { return std::pow(t, 1.0 / q) * std::pow(phi_recip(t), alpha / q); };
  const auto grid = HardyGrid::graded(0.0, 1.0, 240);
  std::vector<double> ones(grid.cells(), 1.0);
  // with an L^2 norm these weights give B = infinity: int_0^x dt / (t Phi(1/t)) diverges
  CHECK(hardy_check(w, grid, ones).verdict == HardyVerdict::unverifiable);
  // the weak-type (q = inf) form used for the primed weak norm has finite B
  w.q = kInf;
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> f(grid.cells());
    for (auto& x : f) x = u(rng) < 0.5 ? 0.0 : std::exp(4.0 * u(rng));
    const auto rep = hardy_check(w, grid, f);
    CHECK(std::isfinite(rep.B));
    CHECK(rep.verdict == HardyVerdict::ok);
    CHECK(rep.bound_ok);
  }
}

TEST_CASE("log-integral estimates") {
  LogIntegralParams p;
  p.q = 0.0;
  p.alpha = 0.0;
  auto r = log_integral_estimates_check(LogIntegralCase::power_from_zero, p);
  CHECK(r.fitted_C == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(r.stable);
  p.q = 0.0;
  p.alpha = -2.0;
  p.S = 1.0;
  p.s_max = 1.0;
  r = log_integral_estimates_check(LogIntegralCase::log_from_zero, p);
  CHECK(std::isfinite(r.fitted_C));
  CHECK(r.stable);
  // midpoint rule in u = log(1/tau) for int_0^s tau^{-1} Phi(1/tau)^{-2} dtau
  for (std::size_t k = 0; k < r.s.size(); k += 24) {
    double acc = 0.0;
    const double du = 1e-2;
    for (double u = -std::log(r.s[k]) + du / 2; u < 2e4; u += du)
      acc += du / std::pow(zygmund::phi_exp(u), 2.0);
    const double tail = 1.0 / (2e4 + 1.0);
    CHECK(r.lhs[k] == doctest::Approx(acc + tail).epsilon(1e-4));
  }
  p = LogIntegralParams{};
  p.q = -2.0;
  p.alpha = 3.0;
  r = log_integral_estimates_check(LogIntegralCase::power_to_infinity, p);
  CHECK(std::isfinite(r.fitted_C));
  CHECK(r.stable);
  p.q = -0.5;
  CHECK_THROWS_AS(log_integral_estimates_check(LogIntegralCase::power_to_infinity, p), Error);
  p.q = 0.0;
  p.alpha = -0.5;
  CHECK_THROWS_AS(log_integral_estimates_check(LogIntegralCase::log_from_zero, p), Error);
}

TEST_CASE("maximal bounds") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 50; ++i) {
    const auto f = random_profile(rng);
    const auto c1 = maximal_bound_check(MaximalCase::frak_source, f, 1.0, 1.0);
    CHECK(c1.holds);
    CHECK(c1.fitted_C <= 1.0 + 1e-9);
    const auto c2 = maximal_bound_check(MaximalCase::weak_source, f, 2.0, 0.0);
    CHECK(c2.holds);
    CHECK(std::isfinite(c2.fitted_C));
    // f** >= f*, so the maximal sup dominates the weak norm
    CHECK(maximal_sup(f, 2.0, 0.0) >=
          zygmund::norm(f, {2.0, 0.0, zygmund::Flavor::weak}) * (1 - 1e-9));
  }
  CHECK_THROWS_AS(maximal_bound_check(MaximalCase::weak_source, random_profile(rng), 1.0, 0.0), Error);
}

}
