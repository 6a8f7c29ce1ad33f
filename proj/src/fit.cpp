#include "fracheat/fit.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "fracheat/error.hpp"
#include "fracheat/phi.hpp"

namespace fracheat::harness {

bool is_geometric(std::span<const double> t, double rel_tol) {
  if (t.size() < 2) return false;
  for (double x : t)
    if (!(x > 0.0)) return false;
  const double ratio = t[1] / t[0];
  if (ratio == 1.0) return false;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (std::abs(t[i] / t[i - 1] - ratio) > rel_tol * ratio) return false;
  return true;
}

RateFit fit_rate(std::span<const RateSample> samples, bool with_log) {
  const auto n = static_cast<Eigen::Index>(samples.size());
  require(n >= 5, "rate fit needs at least 5 samples");
  const bool increasing = samples[1].t > samples[0].t;
  for (Eigen::Index i = 0; i < n; ++i) {
    require(samples[i].t > 0.0 && samples[i].y > 0.0, "rate fit needs positive t and y");
    if (i > 0)
      require(increasing ? samples[i].t > samples[i - 1].t : samples[i].t < samples[i - 1].t,
              "rate fit needs strictly monotone t");
  }
  const Eigen::Index cols = with_log ? 3 : 2;
  Eigen::MatrixXd A(n, cols);
  Eigen::VectorXd b(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = samples[i].t;
    A(i, 0) = std::log(t);
    if (with_log) A(i, 1) = std::log(zygmund::phi_recip(t));
    A(i, cols - 1) = 1.0;
    b(i) = std::log(samples[i].y);
  }
  // column scaling keeps the rank test meaningful
  Eigen::VectorXd scale = A.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < cols; ++j) {
    require(scale(j) > 0.0, "degenerate design matrix", ErrorCode::degenerate);
    A.col(j) /= scale(j);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
  qr.setThreshold(1e-10);
  require(qr.rank() == cols, "degenerate design matrix", ErrorCode::degenerate);
  Eigen::VectorXd x = qr.solve(b);
  const Eigen::VectorXd r = A * x - b;
  for (Eigen::Index j = 0; j < cols; ++j) x(j) /= scale(j);
  RateFit fit;
  fit.with_log = with_log;
  fit.power_exponent = x(0);
  fit.log_exponent = with_log ? x(1) : 0.0;
  fit.intercept = x(cols - 1);
  fit.residual = std::sqrt(r.squaredNorm() / static_cast<double>(n));
  return fit;
}

}  // namespace fracheat::harness
