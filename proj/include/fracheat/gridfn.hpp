#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace fracheat::gridfn {

// Uniform periodic box [-L, L)^N with M cells per axis.
struct GridSpec {
  int dim = 1;
  double half_width = 1.0;
  int points_per_axis = 16;

  double spacing() const { return 2.0 * half_width / points_per_axis; }
  double cell_measure() const;
  double total_measure() const;
  std::size_t size() const;
  double center(int j) const { return -half_width + (j + 0.5) * spacing(); }

  bool operator==(const GridSpec&) const = default;
};

GridSpec make_grid(int dim, double half_width, int points_per_axis);
void validate(const GridSpec& spec);

using Point = std::array<double, 3>;

// Per-axis cell indices of linear index `idx` (last axis fastest).
std::array<int, 3> unflatten(const GridSpec& spec, std::size_t idx);
Point cell_center(const GridSpec& spec, std::size_t idx);

class GridFunction {
 public:
  GridFunction(GridSpec spec, std::vector<double> values, std::string label = {},
               bool diverged = false);
  static GridFunction zeros(const GridSpec& spec);
  static GridFunction constant(const GridSpec& spec, double c);

  const GridSpec& spec() const { return spec_; }
  std::span<const double> values() const { return values_; }
  const std::vector<double>& data() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }
  const std::string& label() const { return label_; }
  bool diverged() const { return diverged_; }

  GridFunction with_label(std::string label) const;

  double max_abs() const;
  double integral() const;  // sum(values) * h^N
  double mean() const;

  friend GridFunction operator+(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator-(const GridFunction& a, const GridFunction& b);
  friend GridFunction operator*(double k, const GridFunction& a);
  // pointwise product
  friend GridFunction operator*(const GridFunction& a, const GridFunction& b);

  GridFunction map(const std::function<double(double)>& fn) const;

 private:
  GridSpec spec_;
  std::vector<double> values_;
  std::string label_;
  bool diverged_ = false;
};

enum class ProfileKind { critical, supercritical, power, indicator, constant, custom_radial };

struct SingularProfileSpec {
  ProfileKind kind = ProfileKind::constant;
  double theta = 1.0;
  double p = 2.0;
  double scale = 1.0;
  double exponent = 0.0;  // power kind: |x|^exponent
  // Profile vanishes for |x| >= support_radius. Indicator: the ball radius.
  double support_radius = std::numeric_limits<double>::infinity();
  std::function<double(double)> radial;  // custom_radial: r -> f(r)
};

void validate(const SingularProfileSpec& profile, int dim);

// Pointwise radial value f(r) of the profile (r > 0), ignoring the cutoff.
double radial_value(const SingularProfileSpec& profile, int dim, double r);

struct SampleReport {
  double singular_cell_average = 0.0;  // shared value of the cells touching 0
  double quadrature_rel_change = 0.0;  // last refinement change
  bool averaged = false;
};

GridFunction sample_profile(const GridSpec& spec, const SingularProfileSpec& profile,
                            SampleReport* report = nullptr);

// Average of the profile over the cell [0,h]^N (one of the 2^N cells at 0).
double corner_cell_average(const SingularProfileSpec& profile, int dim, double h,
                           double* rel_change = nullptr);

double torus_distance(const GridSpec& spec, const Point& a, const Point& b);

GridFunction restrict_to_ball(const GridFunction& f, const Point& center, double radius);

}  // namespace fracheat::gridfn
