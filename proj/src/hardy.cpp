#include <algorithm>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <limits>

#include "fracheat/error.hpp"
#include "fracheat/interp.hpp"

namespace fracheat::interp {

HardyGrid HardyGrid::graded(double a, double b, int cells, double first_fraction,
                            double b_cap) {
  require(cells >= 2, "Hardy grid needs at least two cells");
  require(b > a && a >= 0.0, "Hardy interval needs 0 <= a < b");
  require(first_fraction > 0.0 && first_fraction < 1.0, "first cell fraction must be in (0, 1)");
  const double b_eff = std::isinf(b) ? std::max(b_cap, 2.0 * a + 1.0) : b;
  HardyGrid g;
  g.edges.push_back(a);
  for (int k = 1; k <= cells; ++k) {
    const double frac = std::pow(first_fraction, double(cells - k) / (cells - 1));
    g.edges.push_back(a + (b_eff - a) * frac);
  }
  g.edges.back() = b_eff;
  return g;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tab {
  std::vector<double> w, u, v;  // widths; U and V at cell midpoints
};

Tab tabulate(const HardyWeights& hw, const HardyGrid& g) {
  Tab t;
  for (std::size_t i = 0; i < g.cells(); ++i) {
    const double m = g.mid(i);
    t.w.push_back(g.edges[i + 1] - g.edges[i]);
    t.u.push_back(std::abs(hw.U(m)));
    t.v.push_back(std::abs(hw.V(m)));
    require(std::isfinite(t.u.back()) && std::isfinite(t.v.back()) && t.v.back() > 0.0,
            "Hardy weights must be finite (and V positive) on the tabulation");
  }
  return t;
}

void validate_weights(const HardyWeights& w) {
  require(w.q >= 1.0, "Hardy exponent must lie in [1, infinity]");
  require(static_cast<bool>(w.U) && static_cast<bool>(w.V), "Hardy weights need U and V");
  require(w.a >= 0.0 && w.b > w.a, "Hardy interval needs 0 <= a < b");
}

// Exact sup over x in [0, w] of P(x)^{1/q} Q(x)^{1/q'} for affine P, Q;
// log-concave, so the stationary point (if interior) is the maximizer.
double cell_sup(double P0, double dP, double Q0, double dQ, double w, double q, double qc) {
  auto F = [&](double x) {
    const double P = std::max(0.0, P0 + dP * x), Q = std::max(0.0, Q0 + dQ * x);
    return std::pow(P, 1.0 / q) * std::pow(Q, 1.0 / qc);
  };
  double best = std::max(F(0.0), F(w));
  if (dP != 0.0 && dQ != 0.0) {
    // d/dx [log P / q + log Q / q'] = 0
    const double x = -(qc * dP * Q0 + q * dQ * P0) / (dP * dQ * (q + qc));
    if (x > 0.0 && x < w) best = std::max(best, F(x));
  }
  return best;
}

// int_0^w (A + f x)^q dx with A, f >= 0
double power_cell(double A, double f, double w, double q) {
  if (f == 0.0) return std::pow(A, q) * w;
  if (A == 0.0) return std::pow(f, q) * std::pow(w, q + 1.0) / (q + 1.0);
  if (f * w > 0.1 * A)
    return (std::pow(A + f * w, q + 1.0) - std::pow(A, q + 1.0)) / ((q + 1.0) * f);
  return boost::math::quadrature::gauss<double, 8>::integrate(
      [&](double x) { return std::pow(A + f * x, q); }, 0.0, w);
}

}  // namespace

double hardy_constant(const HardyWeights& hw, const HardyGrid& grid) {
  validate_weights(hw);
  const Tab t = tabulate(hw, grid);
  const std::size_t n = t.w.size();
  const double q = hw.q;
  const bool lower = hw.direction == HardyDirection::lower_limit;
  double B = 0.0;
  if (std::isinf(q)) {
    // q' = 1
    std::vector<double> Vint(n + 1, 0.0);  // prefix of V^{-1}
    for (std::size_t i = 0; i < n; ++i) Vint[i + 1] = Vint[i] + t.w[i] / t.v[i];
    if (lower) {
      double umax = 0.0;
      for (std::size_t k = n; k-- > 0;) {
        umax = std::max(umax, t.u[k]);
        B = std::max(B, umax * Vint[k + 1]);
      }
    } else {
      double umax = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        umax = std::max(umax, t.u[i]);
        B = std::max(B, umax * (Vint[n] - Vint[i]));
      }
    }
    return B;
  }
  if (q == 1.0) {
    // q' = infinity
    std::vector<double> Uint(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) Uint[i + 1] = Uint[i] + t.u[i] * t.w[i];
    if (lower) {
      double vinv = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        vinv = std::max(vinv, 1.0 / t.v[i]);
        B = std::max(B, (Uint[n] - Uint[i]) * vinv);
      }
    } else {
      double vinv = 0.0;
      for (std::size_t k = n; k-- > 0;) {
        vinv = std::max(vinv, 1.0 / t.v[k]);
        B = std::max(B, Uint[k + 1] * vinv);
      }
    }
    return B;
  }
  const double qc = q / (q - 1.0);
  std::vector<double> Up(n + 1, 0.0), Vp(n + 1, 0.0);  // prefix sums of U^q, V^{-q'}
  for (std::size_t i = 0; i < n; ++i) {
    Up[i + 1] = Up[i] + std::pow(t.u[i], q) * t.w[i];
    Vp[i + 1] = Vp[i] + std::pow(t.v[i], -qc) * t.w[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const double al = std::pow(t.u[i], q), be = std::pow(t.v[i], -qc), w = t.w[i];
    if (lower) {
      // P = int_s^b U^q, Q = int_a^s V^{-q'}
      const double P0 = Up[n] - Up[i];
      B = std::max(B, cell_sup(P0, -al, Vp[i], be, w, q, qc));
    } else {
      const double Q0 = Vp[n] - Vp[i];
      B = std::max(B, cell_sup(Up[i], al, Q0, -be, w, q, qc));
    }
  }
  return B;
}

HardyReport hardy_check(const HardyWeights& hw, const HardyGrid& grid,
                        const std::vector<double>& f) {
  validate_weights(hw);
  require(f.size() == grid.cells(), "f must be tabulated on the Hardy grid");
  for (double x : f) require(x >= 0.0 && std::isfinite(x), "Hardy check needs f >= 0");
  const Tab t = tabulate(hw, grid);
  const std::size_t n = t.w.size();
  const double q = hw.q;
  const bool lower = hw.direction == HardyDirection::lower_limit;
  HardyReport rep;

  // F at cell edges: lower F(s) = int_a^s f; upper F(s) = int_s^b f
  std::vector<double> F(n + 1, 0.0);
  if (lower) {
    for (std::size_t i = 0; i < n; ++i) F[i + 1] = F[i] + f[i] * t.w[i];
  } else {
    for (std::size_t k = n; k-- > 0;) F[k] = F[k + 1] + f[k] * t.w[k];
  }
  if (std::isinf(q)) {
    for (std::size_t i = 0; i < n; ++i) {
      rep.lhs = std::max(rep.lhs, t.u[i] * (lower ? F[i + 1] : F[i]));
      rep.rhs = std::max(rep.rhs, t.v[i] * f[i]);
    }
  } else {
    double l = 0.0, r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      // on the cell, F is affine: starts at A (small end) and grows by f_i
      const double A = lower ? F[i] : F[i + 1];
      l += std::pow(t.u[i], q) * power_cell(A, f[i], t.w[i], q);
      r += std::pow(t.v[i] * f[i], q) * t.w[i];
    }
    rep.lhs = std::pow(l, 1.0 / q);
    rep.rhs = std::pow(r, 1.0 / q);
  }

  rep.B = hardy_constant(hw, grid);
  // Refinement: twice the cells, a finer first cell, and a longer tail for
  // infinite intervals.
  const double ff = (grid.edges[1] - grid.edges[0]) / (grid.edges.back() - grid.edges[0]);
  const double cap = std::isinf(hw.b) ? grid.edges.back() * 100.0 : hw.b;
  rep.B_refined = hardy_constant(
      hw, HardyGrid::graded(hw.a, hw.b, static_cast<int>(2 * n), std::max(ff * 1e-4, 1e-300),
                            cap));
  rep.constant = (q > 1.0 && std::isfinite(q))
                     ? std::pow(q, 1.0 / q) * std::pow(q / (q - 1.0), (q - 1.0) / q)
                     : 1.0;
  if (!std::isfinite(rep.B) || rep.B_refined > 1.1 * rep.B) {
    rep.verdict = HardyVerdict::unverifiable;
    rep.bound_ok = false;
    return rep;
  }
  const double slack = (q > 1.0 && std::isfinite(q)) ? 1e-6 : 1e-12;
  rep.bound_ok = rep.lhs <= rep.constant * rep.B * rep.rhs * (1.0 + slack);
  rep.verdict = rep.bound_ok ? HardyVerdict::ok : HardyVerdict::violated;
  return rep;
}

}  // namespace fracheat::interp
