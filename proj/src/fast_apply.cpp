#include "fast_apply.hpp"

#include <fftw3.h>

#include <mutex>

namespace hbz {

namespace {

// FFTW's planner is not reentrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_plan as_plan(void* p) { return static_cast<fftw_plan>(p); }

}  // namespace

FastToeplitzHankel::FastToeplitzHankel(std::size_t n) : n_(n), len_(2 * n) {
  const std::size_t bins = len_ / 2 + 1;
  std::vector<double> real(len_);
  Spectrum cplx(bins);
  {
    std::lock_guard lock(planner_mutex());
    const int len = static_cast<int>(len_);
    auto* out = reinterpret_cast<fftw_complex*>(cplx.data());
    forward_ = fftw_plan_dft_r2c_1d(len, real.data(), out, FFTW_ESTIMATE | FFTW_UNALIGNED);
    backward_ = fftw_plan_dft_c2r_1d(len, out, real.data(),
                                     FFTW_ESTIMATE | FFTW_UNALIGNED | FFTW_DESTROY_INPUT);
  }

  // Kernels indexed by the lag m = i - j in [-(N-1), N-1], stored at m mod 2N.
  const auto lag_kernel = [&](auto&& value) {
    std::vector<double> c(len_, 0.0);
    const long nn = static_cast<long>(n_);
    for (long m = -(nn - 1); m <= nn - 1; ++m) {
      const std::size_t idx = m >= 0 ? static_cast<std::size_t>(m) : len_ - static_cast<std::size_t>(-m);
      c[idx] = value(static_cast<double>(m));
    }
    return c;
  };
  // A: 1/(n-k+1/2) with m = k - n. A^T: 1/(m+1/2).
  toeplitz_ = spectrum_of(lag_kernel([](double m) { return 1.0 / (0.5 - m); }));
  toeplitz_t_ = spectrum_of(lag_kernel([](double m) { return 1.0 / (m + 0.5); }));
  // Hankel 1/(k+n+1/2) acting on the reversed input has lag kernel 1/(m+N+3/2).
  const double nd = static_cast<double>(n_);
  hankel_ = spectrum_of(lag_kernel([nd](double m) { return 1.0 / (m + nd + 1.5); }));
}

FastToeplitzHankel::~FastToeplitzHankel() {
  std::lock_guard lock(planner_mutex());
  if (forward_) fftw_destroy_plan(as_plan(forward_));
  if (backward_) fftw_destroy_plan(as_plan(backward_));
}

FastToeplitzHankel::Spectrum FastToeplitzHankel::spectrum_of(const std::vector<double>& kernel) const {
  std::vector<double> in(kernel);
  Spectrum out(len_ / 2 + 1);
  fftw_execute_dft_r2c(as_plan(forward_), in.data(), reinterpret_cast<fftw_complex*>(out.data()));
  // Fold the inverse-transform normalisation into the kernel.
  const double scale = 1.0 / static_cast<double>(len_);
  for (auto& z : out) z *= scale;
  return out;
}

void FastToeplitzHankel::run(std::span<const double> x, std::span<double> y,
                             const Spectrum& toeplitz) const {
  const std::size_t bins = len_ / 2 + 1;
  std::vector<double> direct(len_, 0.0);
  std::vector<double> reversed(len_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    direct[j] = x[j];
    reversed[j] = x[n_ - 1 - j];
  }
  Spectrum xd(bins);
  Spectrum xr(bins);
  fftw_execute_dft_r2c(as_plan(forward_), direct.data(), reinterpret_cast<fftw_complex*>(xd.data()));
  fftw_execute_dft_r2c(as_plan(forward_), reversed.data(), reinterpret_cast<fftw_complex*>(xr.data()));
  for (std::size_t b = 0; b < bins; ++b) xd[b] = toeplitz[b] * xd[b] + hankel_[b] * xr[b];
  fftw_execute_dft_c2r(as_plan(backward_), reinterpret_cast<fftw_complex*>(xd.data()), direct.data());
  for (std::size_t i = 0; i < n_; ++i) y[i] = direct[i];
}

}  // namespace hbz
