#pragma once

namespace fracheat::zygmund {

// Phi(s) = log(e + s), s >= 0.
double phi(double s);
// Phi(1/s) for s > 0, stable as s -> 0; Phi(0) = 1 at s = infinity.
double phi_recip(double s);
// Phi(e^x), stable for large |x|.
double phi_exp(double x);

}  // namespace fracheat::zygmund
