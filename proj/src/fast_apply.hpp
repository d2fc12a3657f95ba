#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace hbz {

/// y = T x + H x for the truncated A (or its transpose) by circular
/// convolution of length 2N. Toeplitz and Hankel spectra are precomputed.
class FastToeplitzHankel {
 public:
  explicit FastToeplitzHankel(std::size_t n);
  ~FastToeplitzHankel();
  FastToeplitzHankel(const FastToeplitzHankel&) = delete;
  FastToeplitzHankel& operator=(const FastToeplitzHankel&) = delete;

  std::size_t size() const noexcept { return n_; }

  /// y_k = sum_n a_{k,n} x_n
  void apply(std::span<const double> x, std::span<double> y) const { run(x, y, toeplitz_); }
  /// y_n = sum_k a_{k,n} x_k
  void apply_transpose(std::span<const double> x, std::span<double> y) const {
    run(x, y, toeplitz_t_);
  }

 private:
  using Spectrum = std::vector<std::complex<double>>;

  void run(std::span<const double> x, std::span<double> y, const Spectrum& toeplitz) const;
  Spectrum spectrum_of(const std::vector<double>& kernel) const;

  std::size_t n_;
  std::size_t len_;
  void* forward_ = nullptr;
  void* backward_ = nullptr;
  Spectrum toeplitz_;
  Spectrum toeplitz_t_;
  Spectrum hankel_;
};

}  // namespace hbz
