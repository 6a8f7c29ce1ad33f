#include "fracheat/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "fracheat/error.hpp"
#include "fracheat/fft.hpp"

namespace fracheat::rearrange {

using gridfn::GridFunction;

StepProfile::StepProfile(std::vector<double> breakpoints, std::vector<double> values,
                         double total_measure)
    : breakpoints_(std::move(breakpoints)),
      values_(std::move(values)),
      total_measure_(total_measure) {
  require(!breakpoints_.empty() && breakpoints_.front() == 0.0,
          "step profile breakpoints must start at 0");
  require(breakpoints_.size() == values_.size() + 1, "step profile size mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    require(breakpoints_[i + 1] > breakpoints_[i], "breakpoints must increase");
    require(values_[i] > 0.0 && std::isfinite(values_[i]), "step values must be positive");
    require(i == 0 || values_[i] < values_[i - 1], "step values must strictly decrease");
  }
  require(breakpoints_.back() <= total_measure_ * (1.0 + 1e-12),
          "profile support exceeds total measure");
  cumulative_.resize(breakpoints_.size());
  cumulative_[0] = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i)
    cumulative_[i + 1] = cumulative_[i] + values_[i] * (breakpoints_[i + 1] - breakpoints_[i]);
}

StepProfile StepProfile::from_sorted(std::span<const double> v, double cm, double total) {
  std::vector<double> bps{0.0};
  std::vector<double> vals;
  std::size_t count = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = v[i];
    if (x <= 0.0) break;
    ++count;
    if (i + 1 < v.size() && v[i + 1] == x) continue;
    vals.push_back(x);
    bps.push_back(static_cast<double>(count) * cm);
  }
  return StepProfile(std::move(bps), std::move(vals), total);
}

double StepProfile::value_at(double s) const {
  if (s < 0.0) return values_.empty() ? 0.0 : values_.front();
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
  const auto i = static_cast<std::size_t>(it - breakpoints_.begin());
  return i >= breakpoints_.size() ? 0.0 : values_[i - 1];
}

double StepProfile::integral_upto(double s) const {
  if (s <= 0.0) return 0.0;
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s);
  const auto i = static_cast<std::size_t>(it - breakpoints_.begin());
  if (i >= breakpoints_.size()) return cumulative_.back();
  return cumulative_[i - 1] + values_[i - 1] * (s - breakpoints_[i - 1]);
}

StepProfile StepProfile::powered(double q) const {
  require(q > 0.0, "power must be positive");
  std::vector<double> vals(values_.size());
  for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = std::pow(values_[i], q);
  return StepProfile(breakpoints_, std::move(vals), total_measure_);
}

StepProfile StepProfile::scaled(double k) const {
  if (k == 0.0) return StepProfile({0.0}, {}, total_measure_);
  std::vector<double> vals(values_);
  for (double& x : vals) x *= std::abs(k);
  return StepProfile(breakpoints_, std::move(vals), total_measure_);
}

StepProfile StepProfile::head(std::size_t k) const {
  k = std::min(k, values_.size());
  return StepProfile(std::vector<double>(breakpoints_.begin(), breakpoints_.begin() + k + 1),
                     std::vector<double>(values_.begin(), values_.begin() + k), total_measure_);
}

StepProfile StepProfile::tail(std::size_t k) const {
  k = std::min(k, values_.size());
  std::vector<double> bps{0.0};
  for (std::size_t i = k + 1; i < breakpoints_.size(); ++i)
    bps.push_back(breakpoints_[i] - breakpoints_[k]);
  return StepProfile(std::move(bps), std::vector<double>(values_.begin() + k, values_.end()),
                     total_measure_);
}

double distribution_function(const GridFunction& f, double lambda) {
  std::size_t n = 0;
  for (double v : f.values()) n += std::abs(v) > lambda ? 1 : 0;
  return static_cast<double>(n) * f.spec().cell_measure();
}

StepProfile rearrangement(std::span<const double> values, double cm, double total) {
  std::vector<double> mags(values.size());
  std::transform(values.begin(), values.end(), mags.begin(), [](double x) { return std::abs(x); });
  std::sort(mags.begin(), mags.end(), std::greater<>());
  return StepProfile::from_sorted(mags, cm, total);
}

StepProfile rearrangement(const GridFunction& f) {
  return rearrangement(f.values(), f.spec().cell_measure(), f.spec().total_measure());
}

double maximal_average(const StepProfile& prof, double s) {
  require(s > 0.0, "maximal average needs s > 0");
  return prof.integral_upto(s) / s;
}

namespace {

// On the step containing tau, f**(tau) = (A + B tau) / tau.
std::pair<double, double> affine_piece(const StepProfile& p, double tau) {
  const auto& bp = p.breakpoints();
  auto it = std::upper_bound(bp.begin(), bp.end(), tau);
  const auto i = static_cast<std::size_t>(it - bp.begin());
  if (i >= bp.size()) return {p.cumulative(p.steps()), 0.0};
  const double v = p.values()[i - 1];
  return {p.cumulative(i - 1) - v * bp[i - 1], v};
}

}  // namespace

double maximal_product_integral(const StepProfile& f, const StepProfile& g, double a, double b) {
  require(a > 0.0 && b >= a, "product integral needs 0 < a <= b");
  std::vector<double> cuts{a, b};
  for (double x : f.breakpoints())
    if (x > a && x < b) cuts.push_back(x);
  for (double x : g.breakpoints())
    if (x > a && x < b) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double l = cuts[i], r = cuts[i + 1];
    const double mid = 0.5 * (l + r);
    const auto [A1, B1] = affine_piece(f, mid);
    const auto [A2, B2] = affine_piece(g, mid);
    total += A1 * A2 * (1.0 / l - 1.0 / r) + (A1 * B2 + A2 * B1) * std::log(r / l) +
             B1 * B2 * (r - l);
  }
  return total;
}

double product_integral(const StepProfile& f, const StepProfile& g, double s) {
  require(s >= 0.0, "product integral needs s >= 0");
  std::vector<double> cuts{0.0, s};
  for (double x : f.breakpoints())
    if (x > 0.0 && x < s) cuts.push_back(x);
  for (double x : g.breakpoints())
    if (x > 0.0 && x < s) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
    total += f.value_at(mid) * g.value_at(mid) * (cuts[i + 1] - cuts[i]);
  }
  return total;
}

GridFunction convolve(const GridFunction& f, const GridFunction& g) {
  require(f.spec() == g.spec(), "convolution needs a shared grid");
  const auto plan = fft::plan_for(f.spec());
  std::vector<fft::cplx> F(plan->spectrum_size()), G(plan->spectrum_size());
  plan->forward(f.values(), F);
  plan->forward(g.values(), G);
  for (std::size_t i = 0; i < F.size(); ++i) F[i] *= G[i];
  std::vector<double> out(f.size());
  plan->inverse(F, out);
  const double scale = f.spec().cell_measure() / static_cast<double>(f.size());
  for (double& v : out) v *= scale;
  return GridFunction(f.spec(), std::move(out));
}

namespace {

// Length in cells of the shortest circular arc covering the support's
// projection on axis d.
int support_extent(const GridFunction& f, int d) {
  const int M = f.spec().points_per_axis;
  std::vector<char> occupied(M, 0);
  bool any = false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] != 0.0) {
      occupied[gridfn::unflatten(f.spec(), i)[d]] = 1;
      any = true;
    }
  }
  if (!any) return 0;
  int best_gap = 0, run = 0;
  for (int k = 0; k < 2 * M; ++k) {
    if (occupied[k % M]) {
      run = 0;
    } else {
      run = std::min(run + 1, M);
      best_gap = std::max(best_gap, run);
    }
  }
  return M - best_gap;
}

}  // namespace

OneilReport oneil_bound_check(const GridFunction& f, const GridFunction& g, double s) {
  require(f.spec() == g.spec(), "O'Neil check needs a shared grid");
  require(s > 0.0, "O'Neil check needs s > 0");
  OneilReport rep;
  const int M = f.spec().points_per_axis;
  for (int d = 0; d < f.spec().dim; ++d) {
    const int ef = support_extent(f, d), eg = support_extent(g, d);
    if (ef > 0 && eg > 0 && ef + eg - 1 > M) rep.wraps = true;
  }
  const StepProfile fs = rearrangement(f), gs = rearrangement(g);
  const double total = f.spec().total_measure();
  rep.lhs = maximal_average(rearrangement(convolve(f, g)), s);
  // Beyond the torus measure f**(tau) = ||f||_1 / tau, so the tail of the
  // integral up to infinity is ||f||_1 ||g||_1 / b in closed form.
  const double b = std::max(s, total);
  const double mass = fs.cumulative(fs.steps()) * gs.cumulative(gs.steps());
  rep.rhs = (s < b ? maximal_product_integral(fs, gs, s, b) : 0.0) + mass / b;
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-9) + 1e-14 * (fs.sup() * gs.sup() + 1e-300);
  return rep;
}

}  // namespace fracheat::rearrange
