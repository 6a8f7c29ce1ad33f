#include "fracheat/gridfn.hpp"

#include <algorithm>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <sstream>

#include "fracheat/error.hpp"
#include "fracheat/phi.hpp"

namespace fracheat::gridfn {

namespace {

bool is_power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

std::string describe(const GridSpec& s) {
  std::ostringstream os;
  os << "grid(N=" << s.dim << ", L=" << s.half_width << ", M=" << s.points_per_axis << ")";
  return os.str();
}

}  // namespace

double GridSpec::cell_measure() const { return std::pow(spacing(), dim); }
double GridSpec::total_measure() const { return std::pow(2.0 * half_width, dim); }
std::size_t GridSpec::size() const {
  std::size_t n = 1;
  for (int d = 0; d < dim; ++d) n *= static_cast<std::size_t>(points_per_axis);
  return n;
}

void validate(const GridSpec& spec) {
  require(spec.dim >= 1 && spec.dim <= 3, "grid dimension must be 1, 2 or 3");
  require(spec.half_width > 0.0 && std::isfinite(spec.half_width),
          "grid half width must be positive");
  require(is_power_of_two(spec.points_per_axis),
          "points per axis must be a power of two, got " + std::to_string(spec.points_per_axis));
  require(spec.points_per_axis >= 16, "points per axis must be >= 16");
}

GridSpec make_grid(int dim, double half_width, int points_per_axis) {
  GridSpec s{dim, half_width, points_per_axis};
  validate(s);
  return s;
}

std::array<int, 3> unflatten(const GridSpec& spec, std::size_t idx) {
  std::array<int, 3> out{0, 0, 0};
  const auto m = static_cast<std::size_t>(spec.points_per_axis);
  for (int d = spec.dim - 1; d >= 0; --d) {
    out[d] = static_cast<int>(idx % m);
    idx /= m;
  }
  return out;
}

Point cell_center(const GridSpec& spec, std::size_t idx) {
  auto ij = unflatten(spec, idx);
  Point p{0.0, 0.0, 0.0};
  for (int d = 0; d < spec.dim; ++d) p[d] = spec.center(ij[d]);
  return p;
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values, std::string label,
                           bool diverged)
    : spec_(spec), values_(std::move(values)), label_(std::move(label)), diverged_(diverged) {
  validate(spec_);
  require(values_.size() == spec_.size(), "value count does not match " + describe(spec_));
  if (!diverged_) {
    for (double v : values_)
      require(std::isfinite(v), "grid function has non-finite values", ErrorCode::non_finite);
  }
}

GridFunction GridFunction::zeros(const GridSpec& spec) {
  return GridFunction(spec, std::vector<double>(spec.size(), 0.0));
}

GridFunction GridFunction::constant(const GridSpec& spec, double c) {
  return GridFunction(spec, std::vector<double>(spec.size(), c));
}

GridFunction GridFunction::with_label(std::string label) const {
  GridFunction g = *this;
  g.label_ = std::move(label);
  return g;
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double GridFunction::integral() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * spec_.cell_measure();
}

double GridFunction::mean() const { return integral() / spec_.total_measure(); }

namespace {
template <class Op>
GridFunction combine(const GridFunction& a, const GridFunction& b, Op op) {
  require(a.spec() == b.spec(), "grid functions live on different grids");
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a[i], b[i]);
  return GridFunction(a.spec(), std::move(out));
}
}  // namespace

GridFunction operator+(const GridFunction& a, const GridFunction& b) {
  return combine(a, b, [](double x, double y) { return x + y; });
}
GridFunction operator-(const GridFunction& a, const GridFunction& b) {
  return combine(a, b, [](double x, double y) { return x - y; });
}
GridFunction operator*(const GridFunction& a, const GridFunction& b) {
  return combine(a, b, [](double x, double y) { return x * y; });
}
GridFunction operator*(double k, const GridFunction& a) {
  std::vector<double> out(a.data());
  for (double& v : out) v *= k;
  return GridFunction(a.spec(), std::move(out));
}

GridFunction GridFunction::map(const std::function<double(double)>& fn) const {
  std::vector<double> out(values_.size());
  std::transform(values_.begin(), values_.end(), out.begin(), fn);
  return GridFunction(spec_, std::move(out));
}

// ---- profiles -------------------------------------------------------------

void validate(const SingularProfileSpec& pr, int dim) {
  require(pr.scale >= 0.0 && std::isfinite(pr.scale), "profile scale must be >= 0");
  require(pr.support_radius > 0.0, "profile support radius must be > 0");
  const double N = dim;
  switch (pr.kind) {
    case ProfileKind::critical:
    case ProfileKind::supercritical: {
      require(pr.theta > 0.0 && pr.theta <= 2.0, "theta must lie in (0, 2]");
      require(pr.p > 1.0, "p must be > 1");
      require(N > pr.theta, "singular profiles require N > theta");
      const double pstar = N / (N - pr.theta);
      if (pr.kind == ProfileKind::critical)
        require(std::abs(pr.p - pstar) <= 1e-10 * pstar,
                "critical profile requires p = N/(N - theta)");
      else
        require(pr.p > pstar * (1.0 + 1e-10), "supercritical profile requires p > N/(N - theta)");
      break;
    }
    case ProfileKind::power:
      require(pr.exponent > -N, "power exponent must exceed -N for local integrability");
      break;
    case ProfileKind::indicator:
      require(std::isfinite(pr.support_radius), "indicator needs a finite radius");
      break;
    case ProfileKind::constant:
      break;
    case ProfileKind::custom_radial:
      require(static_cast<bool>(pr.radial), "custom radial profile needs a callable");
      break;
  }
}

double radial_value(const SingularProfileSpec& pr, int dim, double r) {
  const double N = dim;
  switch (pr.kind) {
    case ProfileKind::critical:
      return pr.scale * std::pow(r, -N) * std::pow(zygmund::phi_recip(r), -N / pr.theta);
    case ProfileKind::supercritical:
      return pr.scale * std::pow(r, -pr.theta * pr.p / (pr.p - 1.0));
    case ProfileKind::power:
      return pr.scale * std::pow(r, pr.exponent);
    case ProfileKind::indicator:
    case ProfileKind::constant:
      return pr.scale;
    case ProfileKind::custom_radial:
      return pr.radial(r);
  }
  return 0.0;
}

namespace {

bool is_singular(const SingularProfileSpec& pr) {
  switch (pr.kind) {
    case ProfileKind::critical:
    case ProfileKind::supercritical:
    case ProfileKind::custom_radial:
      return true;
    case ProfileKind::power:
      return pr.exponent < 0.0;
    default:
      return false;
  }
}

// g(l) = f(e^l) e^{N l}, evaluated from the log radius.
double weighted_radial(const SingularProfileSpec& pr, int dim, double l) {
  const double N = dim;
  if (l >= std::log(pr.support_radius)) return 0.0;
  switch (pr.kind) {
    case ProfileKind::critical:
      return pr.scale * std::pow(zygmund::phi_exp(-l), -N / pr.theta);
    case ProfileKind::supercritical:
      return pr.scale * std::exp((N - pr.theta * pr.p / (pr.p - 1.0)) * l);
    case ProfileKind::power:
      return pr.scale * std::exp((N + pr.exponent) * l);
    case ProfileKind::custom_radial: {
      const double r = std::exp(l);
      return r > 0.0 ? pr.radial(r) * std::exp(N * l) : 0.0;
    }
    default:
      return pr.scale * std::exp(N * l);
  }
}

// I(rho) = rho^N * int_0^1 f(s rho) s^{N-1} ds = int_0^inf g(log rho - u) du
double radial_moment(const SingularProfileSpec& pr, int dim, double rho) {
  thread_local boost::math::quadrature::exp_sinh<double> integrator;
  const double lr = std::log(rho);
  const double u0 = std::max(0.0, lr - std::log(pr.support_radius));
  auto g = [&](double u) { return weighted_radial(pr, dim, lr - u); };
  double err = 0.0;
  double val = integrator.integrate(g, u0, std::numeric_limits<double>::infinity(), 1e-13, &err);
  if (!std::isfinite(val) || err > 1e-8 * std::max(1e-300, std::abs(val)))
    fail(ErrorCode::quadrature_failure, "radial quadrature did not converge");
  return val;
}

template <int P>
double face_integral(const SingularProfileSpec& pr, int dim, double h) {
  using boost::math::quadrature::gauss;
  auto kernel = [&](double y2) {
    const double rho = std::sqrt(h * h + y2);
    return std::pow(rho, -dim) * radial_moment(pr, dim, rho);
  };
  if (dim == 1) return kernel(0.0);
  if (dim == 2) return gauss<double, P>::integrate([&](double y) { return kernel(y * y); }, 0.0, h);
  return gauss<double, P>::integrate(
      [&](double y) {
        return gauss<double, P>::integrate([&](double z) { return kernel(y * y + z * z); }, 0.0,
                                           h);
      },
      0.0, h);
}

}  // namespace

double corner_cell_average(const SingularProfileSpec& pr, int dim, double h,
                           double* rel_change) {
  // Pyramid decomposition of [0,h]^N over its N outer faces.
  const double pre = dim * h / std::pow(h, dim);
  double prev = pre * face_integral<8>(pr, dim, h);
  double change = 0.0;
  if (dim == 1) {
    if (rel_change) *rel_change = 0.0;
    return prev;
  }
  const double levels[] = {pre * face_integral<16>(pr, dim, h),
                           pre * face_integral<32>(pr, dim, h)};
  for (double cur : levels) {
    change = std::abs(cur - prev) / std::max(std::abs(cur), 1e-300);
    prev = cur;
    if (change < 1e-12) break;
  }
  if (change > 1e-6) {
    double cur = pre * face_integral<64>(pr, dim, h);
    change = std::abs(cur - prev) / std::max(std::abs(cur), 1e-300);
    prev = cur;
  }
  if (rel_change) *rel_change = change;
  if (change > 1e-6)
    fail(ErrorCode::quadrature_failure, "cell-average quadrature failed to converge");
  return prev;
}

GridFunction sample_profile(const GridSpec& spec, const SingularProfileSpec& pr,
                            SampleReport* report) {
  validate(spec);
  validate(pr, spec.dim);
  const double h = spec.spacing();
  const int M = spec.points_per_axis;
  const bool singular = is_singular(pr);
  double avg = 0.0;
  double change = 0.0;
  if (singular) avg = corner_cell_average(pr, spec.dim, h, &change);
  std::vector<double> values(spec.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto ij = unflatten(spec, i);
    bool corner = true;
    double r2 = 0.0;
    for (int d = 0; d < spec.dim; ++d) {
      corner = corner && (ij[d] == M / 2 - 1 || ij[d] == M / 2);
      const double x = spec.center(ij[d]);
      r2 += x * x;
    }
    const double r = std::sqrt(r2);
    if (pr.kind == ProfileKind::constant && std::isinf(pr.support_radius)) {
      values[i] = pr.scale;
    } else if (singular && corner) {
      values[i] = avg;
    } else {
      values[i] = r < pr.support_radius ? radial_value(pr, spec.dim, r) : 0.0;
    }
  }
  if (report) *report = SampleReport{avg, change, singular};
  return GridFunction(spec, std::move(values));
}

double torus_distance(const GridSpec& spec, const Point& a, const Point& b) {
  const double period = 2.0 * spec.half_width;
  double r2 = 0.0;
  for (int d = 0; d < spec.dim; ++d) {
    double dx = std::fmod(std::abs(a[d] - b[d]), period);
    dx = std::min(dx, period - dx);
    r2 += dx * dx;
  }
  return std::sqrt(r2);
}

GridFunction restrict_to_ball(const GridFunction& f, const Point& center, double radius) {
  require(radius > 0.0, "ball radius must be > 0");
  std::vector<double> out(f.data());
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (torus_distance(f.spec(), cell_center(f.spec(), i), center) >= radius) out[i] = 0.0;
  }
  return GridFunction(f.spec(), std::move(out), f.label());
}

}  // namespace fracheat::gridfn
