#pragma once

#include <span>
#include <vector>

namespace fracheat::harness {

// log y = a log t + b log Phi(1/t) + intercept
struct RateFit {
  double power_exponent = 0.0;  // a
  double log_exponent = 0.0;    // b (0 when fitted without the log regressor)
  double intercept = 0.0;
  double residual = 0.0;        // RMS in log space
  bool with_log = false;
};

struct RateSample {
  double t = 0.0;
  double y = 0.0;
};

RateFit fit_rate(std::span<const RateSample> samples, bool with_log_regressor);

// True when t is strictly monotone with a constant ratio (relative tol).
bool is_geometric(std::span<const double> t, double rel_tol = 1e-9);

}  // namespace fracheat::harness
