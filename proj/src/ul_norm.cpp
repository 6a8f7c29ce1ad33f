#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "fracheat/error.hpp"
#include "fracheat/parallel.hpp"
#include "fracheat/zygmund.hpp"

namespace fracheat::zygmund {

namespace {

struct BallOffsets {
  std::vector<std::array<int, 3>> d;
};

BallOffsets ball_offsets(const gridfn::GridSpec& g, double rho) {
  const int M = g.points_per_axis;
  const double h = g.spacing();
  const double r2max = (rho / h) * (rho / h);
  BallOffsets out;
  const int lo = -M / 2, hi = M / 2;
  const int ylo = g.dim >= 2 ? lo : 0, yhi = g.dim >= 2 ? hi : 1;
  const int zlo = g.dim >= 3 ? lo : 0, zhi = g.dim >= 3 ? hi : 1;
  for (int a = lo; a < hi; ++a)
    for (int b = ylo; b < yhi; ++b)
      for (int c = zlo; c < zhi; ++c) {
        const double r2 = double(a) * a + double(b) * b + double(c) * c;
        if (r2 < r2max) out.d.push_back({a, b, c});
      }
  return out;
}

int floor_pow2(double x) {
  int p = 1;
  while (2.0 * p <= x) p *= 2;
  return p;
}

// Upper bound for the norm of any profile with sup <= fmax and mass <= mass:
// the single step of that height and mass (weak is dominated by frak). Norms
// are homogeneous in the height and non-decreasing in the step width, so the
// unit-height norm is tabulated on widths ball * 2^{-k/8} and rounded up.
class StepBound {
 public:
  StepBound(const NormSpec& spec, double ball_measure) : spec_(spec), ball_(ball_measure) {
    spec_.rho = kInf;
    if (spec_.flavor == Flavor::weak) spec_.flavor = Flavor::frak;
  }
  double operator()(double fmax, double mass) {
    if (fmax <= 0.0 || mass <= 0.0) return 0.0;
    const double width = std::min(mass / fmax, ball_);
    const auto k = static_cast<std::size_t>(std::max(0.0, std::floor(8.0 * std::log2(ball_ / width))));
    if (k >= table_.size()) table_.resize(k + 1, -1.0);
    if (table_[k] < 0.0) {
      const double w = ball_ * std::exp2(-double(k) / 8.0);
      table_[k] = norm(StepProfile({0.0, w}, {1.0}, ball_), spec_);
    }
    return fmax * table_[k];
  }

 private:
  NormSpec spec_;
  double ball_;
  std::vector<double> table_;
};

}  // namespace

UlReport ul_norm(const GridFunction& f, const NormSpec& spec, const NormOptions& opts) {
  validate(spec);
  const auto& g = f.spec();
  UlReport rep;
  NormSpec global = spec;
  global.rho = kInf;
  if (std::isinf(spec.rho)) {
    rep.value = norm(rearrange::rearrangement(f), global, opts);
    rep.global = true;
    return rep;
  }
  const BallOffsets ball = ball_offsets(g, spec.rho);
  if (ball.d.size() == g.size()) {
    rep.value = norm(rearrange::rearrangement(f), global, opts);
    rep.global = true;
    return rep;
  }
  const int M = g.points_per_axis;
  const int N = g.dim;
  const int stride = std::clamp(opts.center_stride, 1, M);
  require(M % stride == 0, "center stride must divide points per axis");
  const double cm = g.cell_measure();
  const double ball_measure = static_cast<double>(ball.d.size()) * cm;

  // Tiles of T^N cells; a block is the set of lattice centers inside a tile.
  const int T = std::clamp(floor_pow2(spec.rho / g.spacing()), stride, M);
  const int nt = M / T;
  const std::size_t ntiles = static_cast<std::size_t>(std::pow(nt, N));
  std::vector<double> tmax(ntiles, 0.0), tsum(ntiles, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto ij = gridfn::unflatten(g, i);
    std::size_t t = 0;
    for (int d = 0; d < N; ++d) t = t * nt + ij[d] / T;
    const double v = std::abs(f[i]);
    tmax[t] = std::max(tmax[t], v);
    tsum[t] += v * cm;
  }
  const int reach = static_cast<int>(std::ceil(spec.rho / g.spacing() / T)) + 1;
  auto tile_coords = [&](std::size_t t) {
    std::array<int, 3> c{0, 0, 0};
    for (int d = N - 1; d >= 0; --d) {
      c[d] = static_cast<int>(t % nt);
      t /= nt;
    }
    return c;
  };
  std::vector<double> bound(ntiles, 0.0);
  StepBound step_bound(spec, ball_measure);
  for (std::size_t t = 0; t < ntiles; ++t) {
    const auto c = tile_coords(t);
    double fmax = 0.0, mass = 0.0;
    const int span = std::min(2 * reach + 1, nt);
    const int start = span == nt ? 0 : -reach;
    std::array<int, 3> o{0, 0, 0};
    const int oy = N >= 2 ? span : 1, oz = N >= 3 ? span : 1;
    for (int a = 0; a < span; ++a)
      for (int b = 0; b < oy; ++b)
        for (int e = 0; e < oz; ++e) {
          o = {a + start, b + (N >= 2 ? start : 0), e + (N >= 3 ? start : 0)};
          std::size_t idx = 0;
          for (int d = 0; d < N; ++d) idx = idx * nt + ((c[d] + o[d]) % nt + nt) % nt;
          fmax = std::max(fmax, tmax[idx]);
          mass += tsum[idx];
        }
    bound[t] = step_bound(fmax, mass);
  }
  std::vector<std::size_t> order(ntiles);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return bound[a] > bound[b]; });

  const int per_axis = T / stride;
  const std::size_t centers_per_block = static_cast<std::size_t>(std::pow(per_axis, N));
  rep.centers = centers_per_block * ntiles;

  auto eval_center = [&](const std::array<int, 3>& c, std::vector<double>& buf) {
    buf.clear();
    const int mask = M - 1;
    for (const auto& d : ball.d) {
      std::size_t idx = 0;
      for (int k = 0; k < N; ++k) idx = idx * M + static_cast<std::size_t>((c[k] + d[k]) & mask);
      const double v = std::abs(f[idx]);
      if (v > 0.0) buf.push_back(v);
    }
    std::sort(buf.begin(), buf.end(), std::greater<>());
    return norm(StepProfile::from_sorted(buf, cm, g.total_measure()), global, opts);
  };

  struct Best {
    double value = 0.0;
    std::array<int, 3> center{0, 0, 0};
    bool set = false;
  };
  Best best;
  const std::size_t wave = std::max(1u, worker_count());
  std::size_t pos = 0;
  std::size_t evaluated = 0;
  while (pos < order.size()) {
    if (best.set && bound[order[pos]] <= best.value * (1.0 - 1e-12)) break;
    const std::size_t end = std::min(order.size(), pos + wave);
    std::vector<Best> local(end - pos);
    parallel_for(end - pos, [&](std::size_t w) {
      const auto tc = tile_coords(order[pos + w]);
      std::vector<double> buf;
      buf.reserve(ball.d.size());
      Best b;
      for (std::size_t k = 0; k < centers_per_block; ++k) {
        std::size_t rest = k;
        std::array<int, 3> c{0, 0, 0};
        for (int d = N - 1; d >= 0; --d) {
          c[d] = tc[d] * T + static_cast<int>(rest % per_axis) * stride;
          rest /= per_axis;
        }
        const double v = eval_center(c, buf);
        if (!b.set || v > b.value) b = {v, c, true};
      }
      local[w] = b;
    });
    for (const auto& b : local) {
      // deterministic tie-break: first in bound order wins
      if (!best.set || b.value > best.value) best = b;
    }
    evaluated += (end - pos) * centers_per_block;
    pos = end;
  }
  rep.value = best.value;
  rep.evaluated = evaluated;
  for (int d = 0; d < N; ++d) rep.center[d] = g.center(best.center[d]);
  return rep;
}

}  // namespace fracheat::zygmund
