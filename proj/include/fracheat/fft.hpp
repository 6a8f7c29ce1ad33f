#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "fracheat/gridfn.hpp"

namespace fracheat::fft {

using cplx = std::complex<double>;

// Real-to-complex transforms on an M^N grid (last axis halved). Instances are
// immutable after construction and safe to execute concurrently.
class Plan {
 public:
  explicit Plan(const gridfn::GridSpec& spec);
  ~Plan();
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;

  const gridfn::GridSpec& spec() const { return spec_; }
  std::size_t real_size() const { return spec_.size(); }
  std::size_t spectrum_size() const { return spectrum_size_; }

  void forward(std::span<const double> in, std::span<cplx> out) const;
  // Unnormalized inverse: result is M^N times the true inverse.
  void inverse(std::span<const cplx> in, std::span<double> out) const;

  // |xi| per spectral entry, xi_d = pi k_d / L with signed k_d.
  const std::vector<double>& frequency_norm() const { return xi_; }

 private:
  gridfn::GridSpec spec_;
  std::size_t spectrum_size_ = 0;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
  std::vector<double> xi_;
};

// Shared plan per grid, created on first use.
std::shared_ptr<const Plan> plan_for(const gridfn::GridSpec& spec);

}  // namespace fracheat::fft
