#include "fracheat/fft.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "fracheat/error.hpp"

namespace fracheat::fft {

namespace {
// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Plan::Plan(const gridfn::GridSpec& spec) : spec_(spec) {
  gridfn::validate(spec);
  const int M = spec.points_per_axis;
  int dims[3] = {M, M, M};
  const std::size_t half = static_cast<std::size_t>(M / 2 + 1);
  spectrum_size_ = spec.size() / static_cast<std::size_t>(M) * half;
  {
    std::lock_guard lock(planner_mutex());
    double* rbuf = fftw_alloc_real(spec.size());
    fftw_complex* cbuf = fftw_alloc_complex(spectrum_size_);
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    forward_plan_ = fftw_plan_dft_r2c(spec.dim, dims, rbuf, cbuf, flags);
    inverse_plan_ = fftw_plan_dft_c2r(spec.dim, dims, cbuf, rbuf, flags);
    fftw_free(rbuf);
    fftw_free(cbuf);
  }
  if (!forward_plan_ || !inverse_plan_) fail(ErrorCode::internal, "FFTW planning failed");

  xi_.resize(spectrum_size_);
  const double w = std::numbers::pi / spec.half_width;
  auto signed_k = [M](std::size_t j) {
    return j <= static_cast<std::size_t>(M / 2) ? static_cast<double>(j)
                                                 : static_cast<double>(j) - M;
  };
  for (std::size_t idx = 0; idx < spectrum_size_; ++idx) {
    std::size_t rest = idx;
    const double k_last = static_cast<double>(rest % half);
    rest /= half;
    double k2 = k_last * k_last;
    for (int d = 0; d + 1 < spec.dim; ++d) {
      const double k = signed_k(rest % static_cast<std::size_t>(M));
      rest /= static_cast<std::size_t>(M);
      k2 += k * k;
    }
    xi_[idx] = w * std::sqrt(k2);
  }
}

Plan::~Plan() {
  std::lock_guard lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void Plan::forward(std::span<const double> in, std::span<cplx> out) const {
  require(in.size() == real_size() && out.size() == spectrum_size_, "fft size mismatch",
          ErrorCode::internal);
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void Plan::inverse(std::span<const cplx> in, std::span<double> out) const {
  require(in.size() == spectrum_size_ && out.size() == real_size(), "fft size mismatch",
          ErrorCode::internal);
  // c2r overwrites its input.
  thread_local std::vector<cplx> scratch;
  scratch.assign(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
}

std::shared_ptr<const Plan> plan_for(const gridfn::GridSpec& spec) {
  static std::mutex m;
  static std::map<std::tuple<int, double, int>, std::shared_ptr<const Plan>> cache;
  const auto key = std::make_tuple(spec.dim, spec.half_width, spec.points_per_axis);
  {
    std::lock_guard lock(m);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto plan = std::make_shared<const Plan>(spec);
  std::lock_guard lock(m);
  return cache.emplace(key, plan).first->second;
}

}  // namespace fracheat::fft
