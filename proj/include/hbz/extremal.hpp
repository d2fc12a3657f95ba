#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "hbz/seqspace.hpp"

namespace hbz {

/// Even entire function with zeros +-tau_n taken from a table for
/// n <= tail_start and at the grid points n + 1/2 beyond it:
///
///   phi(x) = cos(pi x) prod_{n<=M} (1 - x^2/tau_n^2) / prod_{j=0..M} (1 - x^2/(j+1/2)^2)
///
/// with M = tail_start. The grid tail is resummed through
/// prod_{j>=0} (1 - x^2/(j+1/2)^2) = cos(pi x).
class PhiEvaluator {
 public:
  /// tail_start defaults to (and may not exceed) the number of tabulated zeros.
  explicit PhiEvaluator(ZeroTable zeros, std::optional<std::size_t> tail_start = std::nullopt);

  const ZeroTable& zeros() const noexcept { return zeros_; }
  std::size_t tail_start() const noexcept { return tail_start_; }
  /// Largest |x| accepted by operator().
  double max_abs_x() const noexcept { return static_cast<double>(tail_start_); }

  /// Throws OutOfRange if |x| > max_abs_x().
  double operator()(double x) const;

  /// phi(x) (1 - 4x^2) / cos(pi x): the slowly varying factor by which phi
  /// differs from cos(pi x)/(1 - 4x^2). Only meaningful away from half-integers.
  double envelope_ratio(double x) const;

 private:
  ZeroTable zeros_;
  std::size_t tail_start_;
};

double eval_phi(const PhiEvaluator& ev, double x);

struct L1Norm {
  /// 2 * (panels + tail): the estimate of ||phi||_1.
  double value = 0.0;
  /// Integral of |phi| over [0, tau_{n_zeros}].
  double panels = 0.0;
  /// Modelled integral of |phi| over [tau_{n_zeros}, inf).
  double tail = 0.0;
  /// Half-width of the band around `value` from tail modelling and quadrature.
  double uncertainty = 0.0;
  std::size_t n_zeros = 0;
  std::size_t evaluations = 0;
};

/// ||phi||_1 integrated zero to zero, so every panel is smooth. Beyond
/// tau_{n_zeros} |phi| is modelled as |R| |cos(pi x)| / (4x^2 - 1) with R the
/// envelope ratio at the next integer; the spread of R up to the tail start
/// gives the uncertainty band. Requires 1 <= n_zeros <= tail_start - 5.
L1Norm l1_norm_phi(const PhiEvaluator& ev, std::size_t n_zeros, double tol);

/// Integral of |cos(pi x)| / (4x^2 - 1) over [x0, inf), x0 >= 1.
double grid_tail_integral(double x0);

/// Left-hand side of the sinc-integral system at row k:
///   int_{-1/2}^{1/2} sinc pi(x-k) dx
///     + sum_n (-1)^n int_{tau_n}^{n+1/2} (sinc pi(x-k) + sinc pi(x+k)) dx
/// in closed form through Si. Zeros past the table contribute nothing.
/// Requires 1 <= k <= zeros.size() / 2.
double residual_start(const ZeroTable& zeros, std::size_t k);

namespace reference {
/// Published bracket for the sharp point-evaluation constant in PW^1.
inline constexpr double kConstantLower = 0.5409288219;
inline constexpr double kConstantUpper = 0.5409288220;
}  // namespace reference

struct ConstantBracket {
  double phi_l1 = 0.0;
  double lower = 0.0;  // 1 / phi_l1
  /// 1/(phi_l1 + uncertainty) .. 1/(phi_l1 - uncertainty)
  double lower_min = 0.0;
  double lower_max = 0.0;
  double tail = 0.0;
  double uncertainty = 0.0;
  std::size_t n_zeros = 0;
  double reference_lower = reference::kConstantLower;
  double reference_upper = reference::kConstantUpper;
  /// Only the lower bound 1/||phi||_1 is computed; the sup-norm correction
  /// that would give an upper bound is not.
  static constexpr std::string_view kNote =
      "lower bound 1/||phi||_1 only; the sup-norm upper-bound term is not computed";
};

struct ConstantConfig {
  std::size_t n_zeros = 300;
  double tol = 1e-11;
};

ConstantBracket constant_bracket(const PhiEvaluator& ev, const ConstantConfig& cfg = {});

}  // namespace hbz
