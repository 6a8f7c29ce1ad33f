#include "fracheat/phi.hpp"

#include <cmath>
#include <numbers>

#include "fracheat/error.hpp"

namespace fracheat::zygmund {

double phi(double s) {
  require(s >= 0.0, "phi: argument must be >= 0");
  if (s == 0.0) return 1.0;
  return std::log(std::numbers::e + s);
}

double phi_exp(double x) {
  if (x > 30.0) return x + std::log1p(std::numbers::e * std::exp(-x));
  return std::log(std::numbers::e + std::exp(x));
}

double phi_recip(double s) {
  require(s > 0.0, "phi_recip: argument must be > 0");
  if (std::isinf(s)) return 1.0;
  return phi_exp(-std::log(s));
}

}  // namespace fracheat::zygmund
