#include <cmath>
#include <random>

#include "doctest.h"
#include "fracheat/error.hpp"
#include "fracheat/zygmund.hpp"

using namespace fracheat;
using namespace fracheat::zygmund;
using gridfn::make_grid;

namespace {

StepProfile random_profile(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int k = 1 + int(u(rng) * 30);
  std::vector<double> b{0.0}, v;
  double level = std::exp(4.0 * u(rng));
  for (int i = 0; i < k; ++i) {
    b.push_back(b.back() + std::exp(-6.0 + 7.0 * u(rng)));
    v.push_back(level);
    level *= 0.2 + 0.75 * u(rng);
  }
  return StepProfile(b, v, 1e6);
}

GridFunction random_grid_function(std::mt19937_64& rng, const gridfn::GridSpec& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(g.size());
  for (auto& x : v) x = u(rng) < 0.5 ? 0.0 : std::exp(3.0 * u(rng)) * (u(rng) < 0.5 ? -1 : 1);
  return GridFunction(g, v);
}

}  // namespace

TEST_SUITE("zygmund") {

TEST_CASE("phi") {
  CHECK(phi(0.0) == 1.0);
  CHECK(phi(std::exp(2.0) - std::exp(1.0)) == doctest::Approx(2.0).epsilon(1e-15));
  double prev = phi_recip(1e-12);
  for (double s = 1e-12; s < 1e12; s *= 3.0) {
    const double v = phi_recip(s);
    CHECK(v >= 1.0);
    CHECK(v <= prev * (1 + 1e-15));
    CHECK(v == doctest::Approx(std::log(std::exp(1.0) + 1.0 / s)).epsilon(1e-12));
    CHECK(phi_exp(std::log(s)) == doctest::Approx(phi(s)).epsilon(1e-12));
    prev = v;
  }
  // Phi(1/s) and Phi(1/s^k) are comparable for k in {1/2, 2}
  for (double k : {0.5, 2.0}) {
    double lo = 1e300, hi = 0.0;
    for (double s = 1e-30; s < 1e30; s *= 10.0) {
      const double r = phi_recip(s) / phi_exp(-k * std::log(s));
      lo = std::min(lo, r);
      hi = std::max(hi, r);
    }
    CHECK(lo > 0.2);
    CHECK(hi < 5.0);
  }
}

TEST_CASE("spec validation") {
  const StepProfile p({0.0, 1.0}, {1.0}, 10.0);
  CHECK_THROWS_AS(norm(p, {0.5, 0.0, Flavor::strong}), Error);
  CHECK_THROWS_AS(norm(p, {1.0, 0.0, Flavor::weak_primed}), Error);
  CHECK_THROWS_AS(norm(p, {2.0, -1.0, Flavor::weak}), Error);
  CHECK(flavor_from_string(to_string(Flavor::strong_primed)) == Flavor::strong_primed);
  CHECK_THROWS_AS(flavor_from_string("lorentz"), Error);
}

TEST_CASE("strong q=1 alpha=0 is the L1 norm") {
  std::mt19937_64 rng(2);
  const auto g = make_grid(2, 2.0, 32);
  for (int i = 0; i < 10; ++i) {
    const auto f = random_grid_function(rng, g);
    double l1 = 0.0;
    for (double x : f.values()) l1 += std::abs(x);
    l1 *= g.cell_measure();
    CHECK(norm(f, {1.0, 0.0, Flavor::strong}) == doctest::Approx(l1).epsilon(1e-10));
  }
}

TEST_CASE("q = inf is the sup norm in every flavor") {
  std::mt19937_64 rng(4);
  const auto f = random_grid_function(rng, make_grid(1, 4.0, 64));
  for (auto fl : {Flavor::strong, Flavor::frak, Flavor::weak, Flavor::strong_primed, Flavor::weak_primed})
    CHECK(norm(f, {kInf, 2.0, fl}) == f.max_abs());
}

TEST_CASE("weak L2 norm of |x|^{-1/2} on [-1, 1]") {
  // continuum: f*(s) = (s/2)^{-1/2}, so s f*(s)^2 = 2 on (0, 2)
  std::vector<double> b{0.0}, v;
  for (int k = 1; k <= 4000; ++k) {
    b.push_back(2.0 * k / 4000.0);
    v.push_back(std::pow(b.back() / 2.0, -0.5));  // right-endpoint value keeps f* below the truth
  }
  const StepProfile fine(b, v, 8.0);
  CHECK(norm(fine, {2.0, 0.0, Flavor::weak}) == doctest::Approx(std::sqrt(2.0)).epsilon(0.02));

  // On cells the two cells at 0 carry the average 2/sqrt(h) and dominate the
  // sup at s = 2h: 2h (4/h) = 8 at every resolution.
  for (int M : {1024, 4096}) {
    const auto g = make_grid(1, 4.0, M);
    gridfn::SingularProfileSpec s;
    s.kind = gridfn::ProfileKind::power;
    s.exponent = -0.5;
    s.support_radius = 1.0;
    const auto f = gridfn::sample_profile(g, s);
    CHECK(norm(f, {2.0, 0.0, Flavor::weak}) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-9));
  }
}

TEST_CASE("closed forms on an indicator") {
  // f* = chi_[0, a): strong = int_0^a Phi(1/s)^alpha; s Phi(1/s)^alpha increases, so
  // frak = weak = a Phi(1/a)^alpha
  const double a = 0.3;
  const StepProfile p({0.0, a}, {1.0}, 100.0);
  for (double alpha : {0.0, 0.5, 2.0}) {
    const double strong = norm(p, {1.0, alpha, Flavor::strong});
    CHECK(strong == doctest::Approx(weight_integral(alpha, 0.0, a)).epsilon(1e-10));
    const double top = a * std::pow(phi_recip(a), alpha);
    CHECK(norm(p, {1.0, alpha, Flavor::frak}) == doctest::Approx(top).epsilon(1e-10));
    CHECK(norm(p, {1.0, alpha, Flavor::weak}) == doctest::Approx(top).epsilon(1e-10));
    if (alpha == 0.0) CHECK(strong == doctest::Approx(a).epsilon(1e-12));
  }
  // independent midpoint rule in u = log(1/s) for the weight integral
  double acc = 0.0;
  const double u0 = -std::log(a), du = 1e-4;
  for (double u = u0 + du / 2; u < 60.0; u += du) acc += std::pow(std::log(std::exp(1.0) + std::exp(u)), 1.5) * std::exp(-u) * du;
  CHECK(weight_integral(1.5, 0.0, a) == doctest::Approx(acc).epsilon(1e-7));
}

TEST_CASE("ordering and collapse on random profiles") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    const auto p = random_profile(rng);
    const double q = 1.0 + 3.0 * (i % 4) / 3.0, alpha = (i % 5) * 0.5;
    const auto rep = norm_ordering_report(p, q, alpha);
    CHECK(rep.holds);
    CHECK(rep.strong >= rep.frak * (1 - 1e-9));
    CHECK(rep.frak >= rep.weak * (1 - 1e-9));
    const double lq = std::pow(p.powered(q).cumulative(p.steps()), 1.0 / q);
    CHECK(norm(p, {q, 0.0, Flavor::frak}) == doctest::Approx(lq).epsilon(1e-10));
  }
}

TEST_CASE("power identity") {
  std::mt19937_64 rng(8);
  const auto g = make_grid(1, 2.0, 128);
  for (int i = 0; i < 20; ++i) {
    const auto f = random_grid_function(rng, g);
    for (auto [r, q] : {std::pair{2.0, 1.0}, {1.0, 3.0}, {0.5, 4.0}}) {
      const auto rep = power_identity_check(f, r, q, 1.0, i % 2 ? Flavor::weak : Flavor::strong);
      CHECK(rep.holds);
      CHECK(rep.rel_error <= 1e-10);
      // second path: raise the values first
      const auto fr = f.map([r](double x) { return std::pow(std::abs(x), r); });
      const NormSpec spec{q, 1.0, i % 2 ? Flavor::weak : Flavor::strong};
      const NormSpec spec_rq{r * q, 1.0, spec.flavor};
      CHECK(norm(fr, spec) == doctest::Approx(std::pow(norm(f, spec_rq), r)).epsilon(1e-10));
    }
  }
  CHECK_THROWS_AS(power_identity_check(GridFunction::constant(g, 1.0), 0.5, 1.0, 0.0), Error);
}

TEST_CASE("product estimate") {
  const auto g = make_grid(1, 4.0, 256);
  std::mt19937_64 rng(10);
  const auto one = GridFunction::constant(g, 1.0);
  const auto f = random_grid_function(rng, g);
  const auto id = product_norm_check(f, one, 2.0, 2.0, kInf, 1.0, 1.0, 0.0);
  CHECK(id.lhs == doctest::Approx(norm(f, {2.0, 1.0, Flavor::weak})).epsilon(1e-12));
  CHECK(id.holds);

  gridfn::SingularProfileSpec s;
  s.kind = gridfn::ProfileKind::power;
  s.exponent = -0.25;
  s.support_radius = 1.0;
  const auto w = gridfn::sample_profile(g, s);
  CHECK(product_norm_check(w, w, 4.0, 8.0, 8.0, 0.0, 0.0, 0.0).holds);

  for (int i = 0; i < 100; ++i) {
    const auto a = random_grid_function(rng, g), b = random_grid_function(rng, g);
    // 1/2 = 1/3 + 1/6 and alpha/2 = 1/3 + 2/6
    CHECK(product_norm_check(a, b, 2.0, 3.0, 6.0, 4.0 / 3.0, 1.0, 2.0).holds);
  }
  CHECK_THROWS_AS(product_norm_check(f, f, 2.0, 3.0, 3.0, 0.0, 0.0, 0.0), Error);
}

TEST_CASE("primed equivalence and triangle inequality") {
  std::mt19937_64 rng(12);
  const auto g = make_grid(1, 4.0, 128);
  for (double q : {1.5, 3.0}) {
    double cw = 0.0, cs = 0.0;
    for (int i = 0; i < 40; ++i) {
      const auto f = random_grid_function(rng, g);
      const double w = norm(f, {q, 1.0, Flavor::weak}), wp = norm(f, {q, 1.0, Flavor::weak_primed});
      const double s = norm(f, {q, 1.0, Flavor::strong}), sp = norm(f, {q, 1.0, Flavor::strong_primed});
      CHECK(w <= wp * (1 + 1e-9));
      CHECK(s <= sp * (1 + 1e-9));
      cw = std::max(cw, wp / w);
      cs = std::max(cs, sp / s);
    }
    CHECK(cw < 2.0 * q / (q - 1.0) + 1.0);
    CHECK(cs < 2.0 * q / (q - 1.0) + 1.0);
  }
  for (int i = 0; i < 50; ++i) {
    const auto a = random_grid_function(rng, g), b = random_grid_function(rng, g);
    for (auto fl : {Flavor::weak_primed, Flavor::strong_primed}) {
      const NormSpec sp{2.0, 1.0, fl};
      CHECK(norm(a + b, sp) <= (norm(a, sp) + norm(b, sp)) * (1 + 1e-9));
    }
  }
}

TEST_CASE("uniformly local norms") {
  std::mt19937_64 rng(14);
  const auto g = make_grid(2, 2.0, 32);
  const auto f = random_grid_function(rng, g);
  const NormSpec base{1.0, 1.0, Flavor::frak};
  double prev = 0.0;
  for (double rho : {0.1, 0.3, 0.8, 1.5}) {
    NormSpec s = base;
    s.rho = rho;
    const double v = ul_norm(f, s).value;
    CHECK(v >= prev * (1 - 1e-12));
    prev = v;
    NormOptions coarse, fine;
    coarse.center_stride = 4;
    fine.center_stride = 2;
    CHECK(ul_norm(f, s, fine).value >= ul_norm(f, s, coarse).value * (1 - 1e-12));
  }
  NormSpec whole = base;
  whole.rho = 10.0;
  const auto rep = ul_norm(f, whole);
  CHECK(rep.global);
  CHECK(rep.value == doctest::Approx(norm(f, base)).epsilon(1e-12));
}

TEST_CASE("log downgrade") {
  std::mt19937_64 rng(16);
  const auto g = make_grid(1, 4.0, 128);
  const auto f = random_grid_function(rng, g);
  const auto same = log_downgrade_check(f, 1.0, 1.0, 0.5);
  CHECK(same.fitted_constant == doctest::Approx(1.0).epsilon(1e-12));
  for (int i = 0; i < 10; ++i) {
    const auto r = log_downgrade_check(random_grid_function(rng, g), 0.0, 2.0, 0.25);
    CHECK(std::isfinite(r.fitted_constant));
    CHECK(r.lhs <= r.rhs * (1 + 1e-12));
  }
  CHECK_THROWS_AS(log_downgrade_check(f, 2.0, 1.0, 0.5), Error);
}

}
