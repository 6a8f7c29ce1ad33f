#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fracheat/gridfn.hpp"

namespace fracheat::rearrange {

// Right-continuous non-increasing step function: f*(s) = values[i] on
// [breakpoints[i], breakpoints[i+1]), zero beyond breakpoints.back().
class StepProfile {
 public:
  StepProfile() : breakpoints_{0.0}, cumulative_{0.0} {}
  // breakpoints: s_0 = 0 < s_1 < ... < s_K; values: v_1 >= ... >= v_K > 0.
  StepProfile(std::vector<double> breakpoints, std::vector<double> values,
              double total_measure);

  // Builds from magnitudes already sorted in descending order, each of
  // measure `cell_measure`. Equal adjacent values merge; zeros are dropped.
  static StepProfile from_sorted(std::span<const double> sorted_desc, double cell_measure,
                                 double total_measure);

  std::size_t steps() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }
  double total_measure() const { return total_measure_; }
  double support_measure() const { return breakpoints_.back(); }
  double sup() const { return values_.empty() ? 0.0 : values_.front(); }

  double value_at(double s) const;        // f*(s)
  double integral_upto(double s) const;   // int_0^s f*
  double cumulative(std::size_t i) const { return cumulative_[i]; }  // int_0^{s_i} f*

  StepProfile powered(double q) const;  // (f*)^q = (|f|^q)*
  StepProfile scaled(double k) const;   // |k| f*

  // Truncations at height tau: the part above tau (head) and the rest (tail).
  StepProfile head(std::size_t k) const;  // first k steps
  StepProfile tail(std::size_t k) const;  // steps k.. shifted to start at 0

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::vector<double> cumulative_;
  double total_measure_ = 0.0;
};

double distribution_function(const gridfn::GridFunction& f, double lambda);

StepProfile rearrangement(const gridfn::GridFunction& f);
StepProfile rearrangement(std::span<const double> values, double cell_measure,
                          double total_measure);

// f**(s) = (1/s) int_0^s f*.
double maximal_average(const StepProfile& prof, double s);

// int_a^b f**(tau) g**(tau) dtau in closed form.
double maximal_product_integral(const StepProfile& f, const StepProfile& g, double a, double b);

// int_0^s f*(tau) g*(tau) dtau
double product_integral(const StepProfile& f, const StepProfile& g, double s);

struct OneilReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool wraps = false;  // supports too large: the torus convolution wraps
  bool holds = false;
};

// Periodic convolution (f*g)(x) = sum_y f(x - y) g(y) h^N via FFT.
gridfn::GridFunction convolve(const gridfn::GridFunction& f, const gridfn::GridFunction& g);

OneilReport oneil_bound_check(const gridfn::GridFunction& f, const gridfn::GridFunction& g,
                              double s);

}  // namespace fracheat::rearrange
