#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "fracheat/rearrange.hpp"

using namespace fracheat;
using namespace fracheat::rearrange;
using gridfn::GridFunction;
using gridfn::make_grid;

namespace {

GridFunction random_function(std::mt19937_64& rng, const gridfn::GridSpec& g, bool ties) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(g.size());
  for (auto& x : v) x = ties ? std::floor(4.0 * u(rng)) : (u(rng) < 0.3 ? 0.0 : std::exp(3 * u(rng)) - 2.0);
  return GridFunction(g, v);
}

}  // namespace

TEST_SUITE("rearrange") {

TEST_CASE("distribution function") {
  const auto g = make_grid(1, 32.0, 1024);
  const auto one = GridFunction::constant(g, 1.0);
  CHECK(distribution_function(one, 0.5) == 64.0);
  CHECK(distribution_function(one, 1.0) == 0.0);
  std::mt19937_64 rng(3);
  const auto f = random_function(rng, g, false);
  for (double lam : {0.0, 0.1, 1.0, 5.0}) {
    std::size_t count = 0;
    for (double x : f.values()) count += std::abs(x) > lam;
    CHECK(distribution_function(f, lam) == count * g.cell_measure());
  }
}

TEST_CASE("indicator and constant rearrangements") {
  const auto g = make_grid(1, 8.0, 64);
  std::vector<double> v(64, 0.0);
  for (int i = 5; i < 25; i += 2) v[i] = 1.0;
  const auto e = rearrangement(GridFunction(g, v));
  REQUIRE(e.steps() == 1);
  CHECK(e.values()[0] == 1.0);
  CHECK(e.support_measure() == 10 * g.spacing());
  CHECK(e.value_at(e.support_measure()) == 0.0);
  const auto c = rearrangement(GridFunction::constant(g, 3.0));
  CHECK(c.value_at(0.0) == 3.0);
  CHECK(c.value_at(15.99) == 3.0);
  CHECK(c.support_measure() == 16.0);
}

TEST_CASE("equimeasurability, scaling and powers") {
  std::mt19937_64 rng(11);
  const auto g = make_grid(2, 2.0, 32);
  for (int trial = 0; trial < 20; ++trial) {
    const auto f = random_function(rng, g, trial % 3 == 0);
    const auto fs = rearrangement(f);
    for (double q : {1.0, 2.0, 3.5}) {
      double lhs = 0.0;
      for (double x : f.values()) lhs += std::pow(std::abs(x), q);
      lhs *= g.cell_measure();
      const auto pq = fs.powered(q);
      CHECK(pq.cumulative(pq.steps()) == doctest::Approx(lhs).epsilon(1e-12));
      const auto direct = rearrangement(f.map([q](double x) { return std::pow(std::abs(x), q); }));
      REQUIRE(direct.steps() == pq.steps());
      for (std::size_t i = 0; i < pq.steps(); ++i) {
        CHECK(direct.breakpoints()[i + 1] == pq.breakpoints()[i + 1]);
        CHECK(direct.values()[i] == doctest::Approx(pq.values()[i]).epsilon(1e-14));
      }
    }
    const auto scaled = rearrangement(-2.5 * f);
    REQUIRE(scaled.steps() == fs.steps());
    for (std::size_t i = 0; i < fs.steps(); ++i) {
      CHECK(scaled.values()[i] == doctest::Approx(2.5 * fs.values()[i]).epsilon(1e-15));
      CHECK(scaled.breakpoints()[i + 1] == fs.breakpoints()[i + 1]);
    }
  }
}

TEST_CASE("maximal average") {
  const StepProfile chi({0.0, 1.0}, {1.0}, 10.0);
  CHECK(maximal_average(chi, 2.0) == 0.5);
  const StepProfile c({0.0, 10.0}, {3.0}, 10.0);
  CHECK(maximal_average(c, 7.0) == doctest::Approx(3.0).epsilon(1e-15));

  // independent per-step overlap sum
  const StepProfile p({0.0, 0.25, 1.0, 3.5}, {4.0, 2.0, 0.5}, 8.0);
  for (double s : {0.1, 0.25, 0.6, 2.0, 3.5, 7.0}) {
    double acc = 0.0;
    for (std::size_t i = 0; i < p.steps(); ++i) {
      const double a = p.breakpoints()[i], b = std::min(p.breakpoints()[i + 1], s);
      if (b > a) acc += p.values()[i] * (b - a);
    }
    CHECK(maximal_average(p, s) == doctest::Approx(acc / s).epsilon(1e-12));
  }
}

TEST_CASE("subadditivity, maximal and product properties") {
  std::mt19937_64 rng(5);
  const auto g = make_grid(1, 4.0, 128);
  const double h = g.cell_measure();
  for (int trial = 0; trial < 30; ++trial) {
    const auto f = random_function(rng, g, false), k = random_function(rng, g, trial % 2);
    const auto fs = rearrangement(f), ks = rearrangement(k), ss = rearrangement(f + k);
    const auto ps = rearrangement(f * k);
    for (int i = 0; i <= 40; ++i)
      for (int j = 0; j <= 40; ++j) {
        const double t = i * 3 * h, s = j * 3 * h;
        CHECK(ss.value_at(t + s) <= fs.value_at(t) + ks.value_at(s) + 1e-12);
      }
    for (int i = 1; i <= 64; ++i) {
      const double s = i * 8.0 / 64.0 - 1e-3;
      CHECK(maximal_average(fs, s) >= fs.value_at(s) * (1 - 1e-12));
      CHECK(maximal_average(ps, s) <= product_integral(fs, ks, s) / s + 1e-9);
    }
  }
}

TEST_CASE("product integral matches a cell sum") {
  const auto g = make_grid(1, 4.0, 64);
  std::mt19937_64 rng(9);
  const auto f = random_function(rng, g, false), k = random_function(rng, g, false);
  std::vector<double> a, b;
  for (double x : f.values()) a.push_back(std::abs(x));
  for (double x : k.values()) b.push_back(std::abs(x));
  std::sort(a.rbegin(), a.rend());
  std::sort(b.rbegin(), b.rend());
  double acc = 0.0;
  for (int i = 0; i < 40; ++i) acc += a[i] * b[i] * g.cell_measure();
  CHECK(product_integral(rearrangement(f), rearrangement(k), 40 * g.cell_measure()) ==
        doctest::Approx(acc).epsilon(1e-12));
}

TEST_CASE("O'Neil inequality") {
  const auto g = make_grid(1, 8.0, 256);
  std::vector<double> v(g.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(g.center(int(i))) < 0.5) v[i] = 1.0;
  const GridFunction chi(g, v);
  const auto rep = oneil_bound_check(chi, chi, 1.0);
  CHECK(std::isfinite(rep.lhs));
  CHECK(std::isfinite(rep.rhs));
  CHECK_FALSE(rep.wraps);
  CHECK(rep.holds);

  const auto zero = GridFunction::zeros(g);
  const auto z = oneil_bound_check(zero, chi, 1.0);
  CHECK(z.lhs == 0.0);
  CHECK(z.holds);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(g.size(), 0.0), b(g.size(), 0.0);
    for (int i = 0; i < 40; ++i) {
      a[100 + i] = u(rng) < 0.3 ? 0.0 : std::exp(2 * u(rng));
      b[120 + i] = std::exp(2 * u(rng));
    }
    const auto r = oneil_bound_check(GridFunction(g, a), GridFunction(g, b), 0.01 + 3 * u(rng));
    CHECK(r.holds);
  }
}

TEST_CASE("convolution with a unit spike is a shift") {
  const auto g = make_grid(1, 4.0, 64);
  std::vector<double> d(64, 0.0), v(64);
  d[0] = 1.0 / g.cell_measure();
  for (int i = 0; i < 64; ++i) v[i] = std::cos(0.3 * i) + 2.0;
  const auto out = convolve(GridFunction(g, v), GridFunction(g, d));
  double mass = 0.0;
  for (double x : out.values()) mass += x;
  double ref = 0.0;
  for (double x : v) ref += x;
  CHECK(mass == doctest::Approx(ref).epsilon(1e-12));
}

}
