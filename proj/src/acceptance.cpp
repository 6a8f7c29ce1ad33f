#include "fracheat/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "fracheat/error.hpp"
#include "fracheat/gridfn.hpp"
#include "fracheat/interp.hpp"
#include "fracheat/rearrange.hpp"
#include "fracheat/semigroup.hpp"
#include "fracheat/solver.hpp"
#include "fracheat/zygmund.hpp"

namespace fracheat::acceptance {

namespace {

using gridfn::GridFunction;
using gridfn::GridSpec;
using gridfn::make_grid;
using rearrange::StepProfile;
using rearrange::rearrangement;
using zygmund::Flavor;
using Rng = std::mt19937_64;

constexpr double kInf = std::numeric_limits<double>::infinity();

class Checks {
 public:
  void expect(bool ok, const std::string& what) {
    if (!ok) fails_.push_back(what);
  }
  void record(const std::string& key, double v) { values_.emplace_back(key, v); }

  void finish(CriterionResult& r) const {
    r.passed = fails_.empty();
    std::ostringstream os;
    for (std::size_t i = 0; i < fails_.size(); ++i) os << (i ? "; " : "") << fails_[i];
    if (fails_.size()) os << " | ";
    for (std::size_t i = 0; i < values_.size(); ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.4g", values_[i].second);
      os << (i ? ", " : "") << values_[i].first << "=" << buf;
    }
    r.detail = os.str();
    r.values = values_;
  }

 private:
  std::vector<std::string> fails_;
  std::vector<std::pair<std::string, double>> values_;
};

double uniform(Rng& rng, double a, double b) {
  return std::uniform_real_distribution<double>(a, b)(rng);
}

// Mixed families: generic, sparse, tied levels, smooth bump, signed.
GridFunction random_grid_function(Rng& rng, const GridSpec& g) {
  std::normal_distribution<double> gauss;
  std::vector<double> v(g.size());
  const int kind = static_cast<int>(rng() % 5);
  const double width = uniform(rng, 0.5, 8.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    switch (kind) {
      case 0: v[i] = std::abs(gauss(rng)) * std::exp(gauss(rng)); break;
      case 1: v[i] = uniform(rng, 0, 1) < 0.8 ? 0.0 : std::exp(2.0 * gauss(rng)); break;
      case 2: v[i] = 0.5 * std::floor(uniform(rng, 0, 5)); break;
      case 3: {
        const double x = gridfn::cell_center(g, i)[0];
        v[i] = 3.0 * std::exp(-x * x / (width * width)) + 1e-3 * std::abs(gauss(rng));
        break;
      }
      default: v[i] = 3.0 * gauss(rng); break;
    }
  }
  return GridFunction(g, std::move(v));
}

StepProfile random_profile(Rng& rng) {
  const int k = 1 + static_cast<int>(rng() % 40);
  std::vector<double> bp{0.0}, vals;
  double v = std::pow(10.0, uniform(rng, -1, 2));
  for (int i = 0; i < k; ++i) {
    bp.push_back(bp.back() + std::pow(10.0, uniform(rng, -4, 1)));
    vals.push_back(v);
    v *= uniform(rng, 0.05, 0.95);
  }
  const double total = bp.back() * uniform(rng, 1.0, 3.0);
  return StepProfile(bp, vals, total);
}

double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

GridFunction critical_mu(const GridSpec& g, double theta = 1.0) {
  gridfn::SingularProfileSpec s;
  s.kind = gridfn::ProfileKind::critical;
  s.theta = theta;
  s.p = solver::critical_exponent(g.dim, theta);
  return gridfn::sample_profile(g, s);
}

GridFunction supercritical_mu(const GridSpec& g, double p, double theta = 1.0) {
  gridfn::SingularProfileSpec s;
  s.kind = gridfn::ProfileKind::supercritical;
  s.theta = theta;
  s.p = p;
  return gridfn::sample_profile(g, s);
}

GridFunction unit_ball(const GridFunction& f) {
  return gridfn::restrict_to_ball(f, {0.0, 0.0, 0.0}, 1.0);
}

// ---- 1: rearrangement calculus --------------------------------------------

void criterion_1(Checks& ck, Rng& rng) {
  const GridSpec g = make_grid(1, 32.0, 1024);
  const double h = g.cell_measure();
  double r1 = 0.0;
  int r2 = 0, r4 = 0, r7 = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const GridFunction f = random_grid_function(rng, g), k = random_grid_function(rng, g);
    const StepProfile fs = rearrangement(f), ks = rearrangement(k);

    for (double q : {1.0, 2.0, 3.5}) {
      long double lhs = 0.0L, rhs = 0.0L;
      for (double x : f.values()) lhs += std::pow(std::abs((long double)x), (long double)q);
      lhs *= h;
      const auto& bp = fs.breakpoints();
      for (std::size_t i = 0; i < fs.steps(); ++i)
        rhs += std::pow((long double)fs.values()[i], (long double)q) * (bp[i + 1] - bp[i]);
      r1 = std::max(r1, rel_diff(double(lhs), double(rhs)));
    }

    const StepProfile ss = rearrangement(f + k);
    const double slack = 1e-12 * (fs.sup() + ks.sup());
    for (int j = 0; j < 64; ++j) {
      // lattice points (exact arithmetic) and off-lattice points
      double t = h * double(rng() % 1100), s = h * double(rng() % 1100);
      if (j % 2) {
        t = uniform(rng, 0, 70);
        s = uniform(rng, 0, 70);
      }
      if (ss.value_at(t + s) > fs.value_at(t) + ks.value_at(s) + slack) ++r2;
    }

    const StepProfile ps = rearrangement(f * k);
    for (int j = 0; j < 48; ++j) {
      const double s = h / 8.0 * std::pow(64.0 * 8.0 / h, j / 47.0);
      if (rearrange::maximal_average(fs, s) < fs.value_at(s) * (1.0 - 1e-12)) ++r4;
      const double lhs = rearrange::maximal_average(ps, s);
      const double rhs = rearrange::product_integral(fs, ks, s) / s;
      if (lhs > rhs * (1.0 + 1e-9) + 1e-300) ++r7;
    }
  }
  ck.record("R1_max_rel", r1);
  ck.expect(r1 <= 1e-12, "R1 equimeasurability off by more than 1e-12");
  ck.expect(r2 == 0, "R2 violated at " + std::to_string(r2) + " points");
  ck.expect(r4 == 0, "R4 violated at " + std::to_string(r4) + " points");
  ck.expect(r7 == 0, "R7 violated at " + std::to_string(r7) + " points");

  int r3 = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const double frac = uniform(rng, 0.01, 0.99);
    std::vector<double> v(g.size());
    std::size_t count = 0;
    for (auto& x : v) {
      x = uniform(rng, 0, 1) < frac ? 1.0 : 0.0;
      count += x > 0.0;
    }
    const StepProfile e = rearrangement(GridFunction(g, v));
    const bool ok = count == 0 ? e.empty()
                               : e.steps() == 1 && e.values()[0] == 1.0 &&
                                     rel_diff(e.support_measure(), count * h) <= 1e-15;
    r3 += !ok;
  }
  ck.expect(r3 == 0, "R3 indicator rearrangement inexact in " + std::to_string(r3) + " cases");

  // O'Neil on supports that do not wrap around the torus
  int oneil = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(g.size(), 0.0), b(g.size(), 0.0);
    for (int i = 0; i < 100; ++i) {
      a[400 + i] = std::exp(uniform(rng, -2, 2));
      b[400 + i] = uniform(rng, 0, 1) < 0.5 ? 0.0 : std::exp(uniform(rng, -2, 2));
    }
    const double s = uniform(rng, 0.05, 200.0 * h);
    const auto rep = rearrange::oneil_bound_check(GridFunction(g, a), GridFunction(g, b), s);
    oneil += !(rep.holds && !rep.wraps);
    if (rep.rhs > 0.0) worst = std::max(worst, rep.lhs / rep.rhs);
  }
  ck.record("oneil_max_ratio", worst);
  ck.expect(oneil == 0, "O'Neil bound failed in " + std::to_string(oneil) + " cases");
}

// ---- 2: ordering and collapse ---------------------------------------------

void criterion_2(Checks& ck, Rng& rng) {
  int bad = 0;
  double collapse = 0.0;
  for (int i = 0; i < 200; ++i) {
    const StepProfile p = random_profile(rng);
    bad += !zygmund::norm_ordering_report(p, uniform(rng, 1, 4), uniform(rng, 0, 3)).holds;
    const double q = uniform(rng, 1, 4);
    collapse = std::max(collapse, rel_diff(zygmund::norm(p, {q, 0.0, Flavor::frak}),
                                           zygmund::norm(p, {q, 0.0, Flavor::strong})));
  }
  ck.expect(bad == 0, "ordering failed on " + std::to_string(bad) + " random profiles");
  const auto mu = unit_ball(critical_mu(make_grid(2, 2.0, 256)));
  const auto rep = zygmund::norm_ordering_report(mu, 1.0, 1.0);
  ck.record("mu_strong", rep.strong);
  ck.record("mu_frak", rep.frak);
  ck.record("mu_weak", rep.weak);
  ck.expect(rep.holds, "ordering failed on the critical profile");
  ck.record("collapse_max_rel", collapse);
  ck.expect(collapse <= 1e-10, "frak and strong differ at alpha = 0");
}

// ---- 3: power identity ------------------------------------------------------

void criterion_3(Checks& ck, Rng& rng) {
  const GridSpec g = make_grid(1, 32.0, 1024);
  const Flavor flavors[] = {Flavor::strong, Flavor::frak, Flavor::weak};
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const GridFunction f = random_grid_function(rng, g);
    const double q = uniform(rng, 1, 4);
    const double r = uniform(rng, std::max(0.25, 1.0 / q), 3.0);
    const auto rep =
        zygmund::power_identity_check(f, r, q, uniform(rng, 0, 2), flavors[rng() % 3]);
    worst = std::max(worst, rep.rel_error);
  }
  ck.record("max_rel_error", worst);
  ck.expect(worst <= 1e-10, "power identity off by more than 1e-10");
}

// ---- 4: membership of the critical profiles --------------------------------

void criterion_4(Checks& ck, Rng&) {
  double crit[2], super[2];
  const int res[2] = {256, 512};
  for (int i = 0; i < 2; ++i) {
    const GridSpec g = make_grid(2, 2.0, res[i]);
    crit[i] = zygmund::norm(unit_ball(critical_mu(g)), {1.0, 1.0, Flavor::frak});
    super[i] = zygmund::norm(unit_ball(supercritical_mu(g, 3.0)), {4.0 / 3.0, 0.0, Flavor::weak});
    ck.record("critical_M" + std::to_string(res[i]), crit[i]);
    ck.record("supercritical_M" + std::to_string(res[i]), super[i]);
  }
  ck.expect(std::isfinite(crit[0]) && std::isfinite(crit[1]), "critical sup not finite");
  ck.expect(rel_diff(crit[0], crit[1]) <= 0.1, "critical sup not stable within 10%");
  ck.expect(std::isfinite(super[0]) && std::isfinite(super[1]), "supercritical sup not finite");
  ck.expect(rel_diff(super[0], super[1]) <= 0.1, "supercritical sup not stable within 10%");
}

// ---- 5: semigroup exactness -------------------------------------------------

// (1/pi) int_0^40 e^{-xi} cos(x xi) dxi, composite Simpson with 10^6 panels.
double poisson_oracle(double x) {
  const int n = 1'000'000;
  const double b = 40.0, dx = b / n;
  double sum = 1.0 + std::exp(-b) * std::cos(x * b);
  for (int i = 1; i < n; ++i) {
    const double xi = i * dx;
    sum += (i % 2 ? 4.0 : 2.0) * std::exp(-xi) * std::cos(x * xi);
  }
  return sum * dx / 3.0 / std::numbers::pi;
}

void criterion_5(Checks& ck, Rng& rng) {
  const semigroup::PropagatorOptions loose{1.0};
  double mass = 0.0, law = 0.0;
  for (const GridSpec& g : {make_grid(1, 4.0, 256), make_grid(2, 4.0, 64)}) {
    for (double theta : {0.5, 1.0, 1.5, 2.0}) {
      std::vector<double> v(g.size());
      for (auto& x : v) x = std::exp(uniform(rng, -2, 2));
      const GridFunction f(g, v);
      const double s = 0.05, t = 0.3;
      const auto ft = semigroup::apply(f, {theta, t}, loose);
      mass = std::max(mass, rel_diff(ft.integral(), f.integral()));
      const auto two = semigroup::apply(semigroup::apply(f, {theta, s}, loose), {theta, t}, loose);
      const auto one = semigroup::apply(f, {theta, s + t}, loose);
      law = std::max(law, (two - one).max_abs() / f.max_abs());
    }
  }
  ck.record("mass_rel", mass);
  ck.record("law_rel", law);
  ck.expect(mass <= 1e-12, "mass not conserved to 1e-12");
  ck.expect(law <= 1e-12, "semigroup law off by more than 1e-12");

  {
    const double t = 0.25;
    const auto k = semigroup::kernel({2.0, t}, make_grid(1, 32.0, 1024));
    double err = 0.0;
    for (int i = 0; i < 1024; ++i) {
      const double x = k.coordinate(i);
      const double exact = std::exp(-x * x / (4 * t)) / std::sqrt(4 * std::numbers::pi * t);
      err = std::max(err, std::abs(k.values[i] - exact));
    }
    ck.record("gaussian_sup_err", err);
    ck.expect(err <= 1e-8, "Gaussian kernel off by more than 1e-8");
  }
  {
    const GridSpec g = make_grid(1, 4096.0, 65536);
    const auto k = semigroup::kernel({1.0, 1.0}, g, {1e-3});
    double err = 0.0;
    for (int j = -50; j <= 50; ++j) {
      const int i = g.points_per_axis / 2 + j * 8;  // x = j
      err = std::max(err, std::abs(k.values[i] - poisson_oracle(k.coordinate(i))));
    }
    ck.record("poisson_sup_err", err);
    ck.expect(err <= 1e-7, "theta = 1 kernel off the quadrature oracle by more than 1e-7");
  }
}

// ---- 6: kernel bounds -------------------------------------------------------

void criterion_6(Checks& ck, Rng&) {
  struct Case {
    int dim;
    double L;
    int M[2];
    double t[2];
    double leak;
  };
  const Case cases[] = {{1, 64.0, {4096, 8192}, {1.0, 4.0}, 0.2},
                        {2, 16.0, {256, 512}, {0.5, 1.0}, 0.5}};
  for (const auto& c : cases) {
    double lo_min = kInf, lo_max = 0.0, up_min = kInf, up_max = 0.0;
    for (int M : c.M)
      for (double t : c.t) {
        const auto rep = semigroup::kernel_bound_fit({1.0, t}, make_grid(c.dim, c.L, M), {c.leak});
        lo_min = std::min(lo_min, rep.c_lower);
        lo_max = std::max(lo_max, rep.c_lower);
        up_min = std::min(up_min, rep.c_upper);
        up_max = std::max(up_max, rep.c_upper);
      }
    const std::string n = "N" + std::to_string(c.dim);
    ck.record(n + "_c_lower", lo_min);
    ck.record(n + "_c_upper", up_max);
    ck.expect(lo_min > 0.0, n + ": c_lower not positive");
    ck.expect(std::isfinite(up_max), n + ": c_upper not finite");
    ck.expect(lo_max <= 1.2 * lo_min, n + ": c_lower not stable within 20%");
    ck.expect(up_max <= 1.2 * up_min, n + ": c_upper not stable within 20%");
  }
}

// ---- 7: smoothing exponents -------------------------------------------------

void criterion_7(Checks& ck, Rng&) {
  const GridSpec g = make_grid(1, 1024.0, 65536);
  std::vector<double> d(g.size(), 0.0);
  d[g.size() / 2] = 1.0 / g.cell_measure();
  const GridFunction delta(g, d);
  gridfn::SingularProfileSpec ps;
  ps.kind = gridfn::ProfileKind::power;
  ps.exponent = -0.5;
  const GridFunction power = gridfn::sample_profile(g, ps);
  const auto times = semigroup::geometric_times(0.5, 5.0, 9);

  struct Case {
    const char* name;
    const GridFunction* f;
    semigroup::RateProbeSpec spec;
  };
  const Case cases[] = {
      {"r1q2", &delta, {1.0, 0.0, Flavor::frak, 2.0, 0.0, Flavor::strong}},
      {"r1qinf", &delta, {1.0, 0.0, Flavor::frak, kInf, 0.0, Flavor::strong}},
      {"r2q4", &power, {2.0, 0.0, Flavor::weak, 4.0, 0.0, Flavor::strong}},
  };
  for (double theta : {1.0, 2.0})
    for (const auto& c : cases) {
      const auto res = semigroup::smoothing_rate_probe(*c.f, theta, c.spec, times, {0.05});
      const std::string key = std::string(c.name) + "_theta" + std::to_string(int(theta));
      ck.record(key, res.fit.power_exponent);
      ck.expect(std::abs(res.fit.power_exponent - res.predicted_a) <= 0.05,
                key + ": exponent off the prediction by more than 0.05");
    }

  // log case: mu_c on the unit ball, weak source with weight alpha + 1
  const GridSpec g2 = make_grid(2, 2.0, 1024);
  const auto mu = unit_ball(critical_mu(g2));
  const auto res = semigroup::smoothing_rate_probe(
      mu, 1.0, {1.0, 1.0, Flavor::weak, 2.0, 0.0, Flavor::strong},
      semigroup::geometric_times(0.02, 0.2, 9), {0.35});
  ck.record("log_a", res.fit.power_exponent);
  ck.record("log_b", res.fit.log_exponent);
  ck.record("log_b_predicted", res.predicted_b);
  ck.expect(std::abs(res.fit.log_exponent - res.predicted_b) <= 0.25,
            "log exponent off the prediction by more than 0.25");
}

// ---- 8: Hardy verifier ------------------------------------------------------

void criterion_8(Checks& ck, Rng& rng) {
  using interp::HardyWeights;
  const double q = 2.0;
  const auto grid = interp::HardyGrid::graded(0.0, kInf, 240);
  int failures = 0, unverifiable = 0;
  double worst = 0.0;
  for (double alpha : {0.0, 1.0}) {
    auto Phi = [alpha, q](double t) { return std::pow(zygmund::phi_recip(t), alpha / q); };
    HardyWeights w1{interp::HardyDirection::lower_limit, 0.0, kInf,
                    [=](double t) { return Phi(t) / t; }, Phi, q};
    HardyWeights w2{interp::HardyDirection::lower_limit, 0.0, kInf,
                    [=](double t) { return std::pow(t, -1.0 + 1.0 / q) * Phi(t); },
                    [=](double t) { return std::pow(t, 1.0 / q) * Phi(t); }, kInf};
    for (const HardyWeights* w : {&w1, &w2}) {
      for (int i = 0; i < 100; ++i) {
        std::vector<double> f(grid.cells());
        const bool monotone = i % 2 == 0;
        double level = std::exp(uniform(rng, 0, 8));
        for (auto& x : f) {
          if (monotone) {
            level *= uniform(rng, 0.8, 1.0);
            x = level;
          } else {
            x = uniform(rng, 0, 1) < 0.3 ? 0.0 : std::exp(uniform(rng, -6, 6));
          }
        }
        const auto rep = interp::hardy_check(*w, grid, f);
        unverifiable += rep.verdict == interp::HardyVerdict::unverifiable;
        failures += !rep.bound_ok;
        if (rep.B > 0.0 && rep.rhs > 0.0)
          worst = std::max(worst, rep.lhs / (rep.constant * rep.B * rep.rhs));
      }
    }
  }
  ck.record("max_lhs_over_bound", worst);
  ck.expect(unverifiable == 0, std::to_string(unverifiable) + " checks unverifiable");
  ck.expect(failures == 0, std::to_string(failures) + " checks failed bound_ok");
  ck.expect(worst <= 1.0 + 1e-6, "constant bound violated");
}

// ---- 9: log-integral estimates ---------------------------------------------

void criterion_9(Checks& ck, Rng&) {
  using interp::LogIntegralCase;
  struct Case {
    const char* name;
    LogIntegralCase c;
    double q, alpha;
  };
  const Case cases[] = {{"case1_a2", LogIntegralCase::power_from_zero, 0.5, 2.0},
                        {"case1_a-1.5", LogIntegralCase::power_from_zero, 0.5, -1.5},
                        {"case2", LogIntegralCase::log_from_zero, 0.0, -2.0},
                        {"case3", LogIntegralCase::power_to_infinity, -2.0, 3.0}};
  for (const auto& c : cases) {
    interp::LogIntegralParams p;
    p.q = c.q;
    p.alpha = c.alpha;
    const auto rep = interp::log_integral_estimates_check(c.c, p);
    ck.record(c.name, rep.fitted_C);
    ck.expect(rep.stable, std::string(c.name) + ": fitted constant not stable within 10%");
  }
}

// ---- 10: maximal bounds -----------------------------------------------------

void criterion_10(Checks& ck, Rng& rng) {
  using interp::MaximalCase;
  double c1 = 0.0, c2 = 0.0;
  int bad1 = 0, bad2 = 0;
  for (int i = 0; i < 100; ++i) {
    const StepProfile f = random_profile(rng);
    const double rs[] = {1.0, 1.5, 2.0, 3.0};
    const auto a = interp::maximal_bound_check(MaximalCase::frak_source, f, rs[rng() % 4],
                                               uniform(rng, 0, 2));
    bad1 += !a.holds;
    c1 = std::max(c1, a.fitted_C);
    const auto b = interp::maximal_bound_check(MaximalCase::weak_source, f, rs[1 + rng() % 3],
                                               uniform(rng, 0, 2));
    bad2 += !b.holds;
    c2 = std::max(c2, b.fitted_C);
  }
  ck.record("case1_max_C", c1);
  ck.record("case2_max_C", c2);
  ck.expect(bad1 == 0, "first bound exceeded 1 + 1e-9");
  ck.expect(bad2 == 0, "second bound produced a non-finite constant");
  for (int M : {128, 256}) {
    const auto mu = unit_ball(critical_mu(make_grid(2, 2.0, M)));
    const double E = rearrange::rearrangement(mu).support_measure();
    const auto rep = interp::maximal_bound_check(MaximalCase::log_source, mu, 1.0, 1.0, E);
    ck.record("case3_C_M" + std::to_string(M), rep.fitted_C);
    ck.expect(rep.holds, "third bound produced a non-finite constant");
  }
}

// ---- 11: interpolation embedding -------------------------------------------

std::vector<GridFunction> source_snapshots(const GridFunction& mu, const solver::SolveConfig& cfg) {
  const auto src = solver::duhamel_source(mu, cfg);
  const double rho = std::pow(cfg.T, 1.0 / cfg.theta);
  std::vector<GridFunction> out;
  for (std::size_t i = 3; i < src.size(); i += 4) {
    out.push_back(src.slices[i]);
    out.push_back(gridfn::restrict_to_ball(src.slices[i], {0.0, 0.0, 0.0}, rho));
  }
  return out;
}

void criterion_11(Checks& ck, Rng& rng) {
  using interp::SpaceFamily;
  const GridSpec g = make_grid(2, 4.0, 128);
  solver::SolveConfig cfg;
  cfg.max_leakage = 0.3;
  cfg.n_time = 16;
  const auto crit_snaps = source_snapshots(critical_mu(g), cfg);
  solver::SolveConfig scfg = cfg;
  scfg.p = 3.0;
  scfg.regime = solver::Regime::supercritical;
  const auto super_snaps = source_snapshots(supercritical_mu(g, 3.0), scfg);

  struct Case {
    const char* name;
    interp::InterpPairSpec pair;
    const std::vector<GridFunction>* snaps;
  };
  const Case cases[] = {
      {"critical", interp::make_pair(1.5, 3.0, 2.0, 2.0, SpaceFamily::frak_log), &crit_snaps},
      {"supercritical", interp::make_pair(3.0, 6.0, 4.0, 0.0, SpaceFamily::frak_log),
       &super_snaps}};
  for (const auto& c : cases) {
    int bad = 0;
    double worst = 0.0;
    auto tally = [&](const interp::EmbeddingReport& rep) {
      bad += !rep.holds;
      if (rep.rhs > 0.0) worst = std::max(worst, rep.lhs / rep.rhs);
    };
    for (int i = 0; i < 100; ++i) tally(interp::interp_embedding_check(random_profile(rng), c.pair));
    for (const auto& s : *c.snaps) tally(interp::interp_embedding_check(s, c.pair));
    ck.record(std::string(c.name) + "_max_lhs_over_rhs", worst);
    ck.expect(bad == 0, std::string(c.name) + ": embedding failed in " + std::to_string(bad) +
                            " cases");
  }

  const auto plain = interp::make_pair(1.5, 3.0, 2.0, 0.0, SpaceFamily::plain_lebesgue);
  double lo = kInf, hi = 0.0;
  for (int i = 0; i < 100; ++i) {
    const StepProfile f = random_profile(rng);
    const double ratio = interp::interpolation_norm_upper(f, plain) /
                         zygmund::norm(f, {2.0, 0.0, Flavor::weak});
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
  }
  ck.record("plain_ratio_min", lo);
  ck.record("plain_ratio_max", hi);
  ck.expect(lo >= 0.25 && hi <= 4.0, "plain Lebesgue pair outside a factor of 4");
}

// ---- 12: inhomogeneous estimate --------------------------------------------

void criterion_12(Checks& ck, Rng&) {
  // Resolutions matched to the locality radius T^{1/theta}: 8 and 16 cells
  // per radius for each T.
  struct Case {
    double T;
    int M;
  };
  const Case cases[] = {{1.0, 64}, {1.0, 128}, {0.25, 256}, {0.25, 512}};
  double lo = kInf, hi = 0.0;
  for (const auto& c : cases) {
    const auto mu = critical_mu(make_grid(2, 4.0, c.M));
    solver::SolveConfig cfg;
    cfg.T = c.T;
    cfg.max_leakage = 0.6;
    const auto src = solver::duhamel_source(mu, cfg);
    const double num = solver::sup_in_time(src, solver::metric_norm(cfg, 2));
    const double den = zygmund::ul_norm(mu, solver::gauge_norm(cfg, 2)).value;
    const double C = num / den;
    char key[48];
    std::snprintf(key, sizeof key, "C_M%d_T%g", c.M, c.T);
    ck.record(key, C);
    lo = std::min(lo, C);
    hi = std::max(hi, C);
  }
  ck.expect(std::isfinite(hi) && lo > 0.0, "fitted constant not finite");
  ck.expect(hi <= 1.25 * lo, "fitted constant not stable within 25%");
}

// ---- 13, 14: existence -----------------------------------------------------

void existence(Checks& ck, bool critical) {
  const auto start = std::chrono::steady_clock::now();
  const GridSpec g = make_grid(2, 4.0, 256);
  solver::SolveConfig cfg;
  cfg.max_leakage = 0.3;
  GridFunction mu = critical ? critical_mu(g) : supercritical_mu(g, 3.0);
  if (!critical) {
    cfg.p = 3.0;
    cfg.regime = solver::Regime::supercritical;
  }
  const auto thr = solver::threshold_bisect(mu, cfg, 0.25, 2.0);
  const double lambda = 0.25 * thr.lambda_lo;
  const auto res = solver::picard_iterate(lambda * mu, cfg);
  const auto& r = res.report;
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  ck.record("threshold_lo", thr.lambda_lo);
  ck.record("threshold_hi", thr.lambda_hi);
  ck.record("lambda", lambda);
  ck.record("iterations", r.iterations);
  ck.record("final_ratio", r.ratios.empty() ? 0.0 : r.ratios.back());
  ck.record("gauge", r.gauge);
  ck.record("solution_norm", r.solution_norm);
  ck.record("C", r.bound_constant);
  ck.record("seconds", seconds);
  ck.expect(thr.lambda_lo > 0.0, "no converging lambda found");
  ck.expect(r.verdict == solver::Verdict::converged,
            std::string("Picard verdict ") + solver::to_string(r.verdict));
  ck.expect(!r.ratios.empty() && r.ratios.back() <= 0.5, "final contraction ratio above 1/2");
  ck.expect(std::isfinite(r.bound_constant), "bound constant not finite");
  ck.expect(seconds <= 300.0, "runtime above 5 minutes");
}

// ---- 15: contraction scaling -------------------------------------------------

void criterion_15(Checks& ck, std::uint64_t seed) {
  const GridSpec g = make_grid(2, 4.0, 64);
  for (bool critical : {true, false}) {
    solver::SolveConfig cfg;
    cfg.max_leakage = 0.3;
    cfg.n_time = 16;
    GridFunction mu = critical ? critical_mu(g) : supercritical_mu(g, 3.0);
    if (!critical) {
      cfg.p = 3.0;
      cfg.regime = solver::Regime::supercritical;
    }
    const auto rep = solver::contraction_probe(mu, cfg, 4, {1e-3, 2e-3, 4e-3}, seed);
    const std::string name = critical ? "critical" : "supercritical";
    ck.record(name + "_slope", rep.epsilon_power_fit);
    ck.record(name + "_max_ratio", rep.max_ratio);
    ck.expect(std::abs(rep.epsilon_power_fit - (cfg.p - 1.0)) <= 0.25,
              name + ": epsilon exponent off p - 1 by more than 0.25");
  }
}

// ---- 16: threshold behaviour -----------------------------------------------

void criterion_16(Checks& ck, Rng&) {
  const GridSpec g = make_grid(2, 4.0, 128);
  const auto mu = critical_mu(g);
  solver::SolveConfig cfg;
  cfg.max_leakage = 0.3;
  std::vector<double> lambdas;
  for (int i = 0; i < 20; ++i) lambdas.push_back(0.1 * std::pow(100.0, i / 19.0));
  const auto sweep = solver::verdict_sweep(mu, cfg, lambdas);
  ck.expect(sweep.monotone, "verdict sweep not monotone");

  double mid[2];
  const int nts[2] = {32, 64};
  for (int i = 0; i < 2; ++i) {
    cfg.n_time = nts[i];
    const auto thr = solver::threshold_bisect(mu, cfg, 0.25, 2.0);
    mid[i] = 0.5 * (thr.lambda_lo + thr.lambda_hi);
    ck.record("threshold_nt" + std::to_string(nts[i]), mid[i]);
  }
  const double spread = std::abs(mid[0] - mid[1]) / std::min(mid[0], mid[1]);
  ck.record("relative_spread", spread);
  ck.expect(spread <= 0.05, "threshold not reproducible within 5% across time resolutions");
}

}  // namespace

const char* title(int id) {
  static const char* const names[kCriteria] = {
      "rearrangement calculus",      "norm ordering",
      "power identity",              "critical profile membership",
      "semigroup exactness",         "kernel bounds",
      "smoothing exponents",         "Hardy verifier",
      "log-integral estimates",      "maximal bounds",
      "interpolation embedding",     "inhomogeneous estimate",
      "existence, critical",         "existence, supercritical",
      "contraction scaling",         "threshold behaviour",
      "unreproducible constants",
  };
  require(id >= 1 && id <= kCriteria, "criterion id out of range");
  return names[id - 1];
}

CriterionResult run_criterion(int id, std::uint64_t seed) {
  CriterionResult r;
  r.id = id;
  r.title = title(id);
  const auto start = std::chrono::steady_clock::now();
  Rng rng(seed + 7919ULL * id);
  Checks ck;
  try {
    switch (id) {
      case 1: criterion_1(ck, rng); break;
      case 2: criterion_2(ck, rng); break;
      case 3: criterion_3(ck, rng); break;
      case 4: criterion_4(ck, rng); break;
      case 5: criterion_5(ck, rng); break;
      case 6: criterion_6(ck, rng); break;
      case 7: criterion_7(ck, rng); break;
      case 8: criterion_8(ck, rng); break;
      case 9: criterion_9(ck, rng); break;
      case 10: criterion_10(ck, rng); break;
      case 11: criterion_11(ck, rng); break;
      case 12: criterion_12(ck, rng); break;
      case 13: existence(ck, true); break;
      case 14: existence(ck, false); break;
      case 15: criterion_15(ck, seed); break;
      case 16: criterion_16(ck, rng); break;
      case 17:
        // The exact constants and the nonexistence side have no computable target.
        r.applicable = false;
        break;
    }
  } catch (const std::exception& e) {
    ck.expect(false, std::string("exception: ") + e.what());
  }
  ck.finish(r);
  if (!r.applicable) {
    r.passed = true;
    r.detail = "not reproducible numerically; reported only";
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string format_line(const CriterionResult& r) {
  const char* verdict = !r.applicable ? "N/A" : (r.passed ? "PASS" : "FAIL");
  char head[160];
  std::snprintf(head, sizeof head, "criterion %2d [%s]: %s (%.1fs) ", r.id, r.title.c_str(),
                verdict, r.seconds);
  return head + r.detail;
}

}  // namespace fracheat::acceptance
