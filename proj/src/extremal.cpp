#include "hbz/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "hbz/errors.hpp"
#include "hbz/special.hpp"

namespace hbz {

namespace {

constexpr double kPi = std::numbers::pi;

// 1 - x^2/a^2 in factored form, accurate near x = a.
double one_minus_sq_ratio(double x, double a) noexcept { return (a - x) * (a + x) / (a * a); }

}  // namespace

PhiEvaluator::PhiEvaluator(ZeroTable zeros, std::optional<std::size_t> tail_start)
    : zeros_(std::move(zeros)), tail_start_(tail_start.value_or(zeros_.size())) {
  if (tail_start_ > zeros_.size()) {
    throw PreconditionViolation("PhiEvaluator: tail_start " + std::to_string(tail_start_) + " exceeds the " +
                                std::to_string(zeros_.size()) + " tabulated zeros");
  }
}

double PhiEvaluator::operator()(double x) const {
  const double ax = std::abs(x);
  if (!(ax <= max_abs_x())) {
    throw OutOfRange("eval_phi: |x| = " + std::to_string(ax) + " beyond the tail model limit " +
                     std::to_string(max_abs_x()));
  }
  if (ax == 0.0) return 1.0;

  // Nearest grid point g = j + 1/2; cos(pi x) / (1 - x^2/g^2) is evaluated as
  // (-1)^j g^2 (sin(pi h)/h) / (2g + h) with h = |x| - g.
  const auto j = static_cast<std::size_t>(std::floor(ax));
  const double g = static_cast<double>(j) + 0.5;
  const double h = ax - g;
  const double sinc_h = h == 0.0 ? kPi : std::sin(kPi * h) / h;
  double value = (j % 2 == 0 ? 1.0 : -1.0) * g * g * sinc_h / (2.0 * g + h);

  if (j != 0) value /= one_minus_sq_ratio(ax, 0.5);
  const auto tau = zeros_.values();
  for (std::size_t n = 1; n <= tail_start_; ++n) {
    const double t = tau[n - 1];
    if (n == j) {
      value *= one_minus_sq_ratio(ax, t);
    } else {
      value *= one_minus_sq_ratio(ax, t) / one_minus_sq_ratio(ax, static_cast<double>(n) + 0.5);
    }
  }
  return value;
}

double PhiEvaluator::envelope_ratio(double x) const {
  const double ax = std::abs(x);
  if (!(ax <= max_abs_x())) throw OutOfRange("envelope_ratio: |x| beyond the tail model limit");
  const auto tau = zeros_.values();
  double r = 1.0;
  for (std::size_t n = 1; n <= tail_start_; ++n) {
    r *= one_minus_sq_ratio(ax, tau[n - 1]) / one_minus_sq_ratio(ax, static_cast<double>(n) + 0.5);
  }
  return r;
}

double eval_phi(const PhiEvaluator& ev, double x) { return ev(x); }

double grid_tail_integral(double x0) {
  if (!(x0 >= 1.0)) throw PreconditionViolation("grid_tail_integral: x0 must be at least 1");
  static const QuadratureRule rule = gauss_legendre(16);
  const auto f = [](double x) { return std::abs(std::cos(kPi * x)) / (4.0 * x * x - 1.0); };
  // |cos(pi x)| is smooth between consecutive half-integers.
  double first = std::floor(x0 - 0.5) + 1.5;
  double sum = integrate(f, x0, first, rule);
  constexpr int kPanels = 4000;
  for (int p = 0; p < kPanels; ++p) sum += integrate(f, first + p, first + p + 1, rule);
  // Past L, |cos| averages to 2/pi; the error is O(L^-3).
  const double L = first + kPanels;
  sum += (2.0 / kPi) * 0.25 * std::log((2.0 * L + 1.0) / (2.0 * L - 1.0));
  return sum;
}

L1Norm l1_norm_phi(const PhiEvaluator& ev, std::size_t n_zeros, double tol) {
  if (n_zeros < 1 || n_zeros + 5 > ev.tail_start()) {
    throw PreconditionViolation("l1_norm_phi: n_zeros " + std::to_string(n_zeros) +
                                " must lie in [1, tail_start - 5] with tail_start " +
                                std::to_string(ev.tail_start()));
  }
  if (!(tol > 0.0)) throw PreconditionViolation("l1_norm_phi: tol must be positive");

  static const QuadratureRule rule = gauss_legendre(8);
  const auto abs_phi = [&ev](double x) { return std::abs(ev(x)); };
  const double panel_tol = tol / static_cast<double>(n_zeros);

  L1Norm out;
  out.n_zeros = n_zeros;
  double quad_error = 0.0;
  double left = 0.0;
  for (std::size_t n = 1; n <= n_zeros; ++n) {
    const double right = ev.zeros()(n);
    const AdaptiveResult r = integrate_adaptive(abs_phi, left, right, panel_tol, rule);
    out.panels += r.value;
    out.evaluations += r.evaluations;
    quad_error += r.error_estimate;
    left = right;
  }

  // Envelope amplitude at integers past the last zero, where |cos(pi x)| = 1.
  const std::size_t first = n_zeros + 1;
  const std::size_t last = std::min(ev.tail_start(), 2 * n_zeros + 1);
  const double amplitude = std::abs(ev.envelope_ratio(static_cast<double>(first)));
  double lo = amplitude;
  double hi = amplitude;
  for (std::size_t m = first + 1; m <= last; ++m) {
    const double r = std::abs(ev.envelope_ratio(static_cast<double>(m)));
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  const double shape = grid_tail_integral(left);
  out.tail = amplitude * shape;
  out.value = 2.0 * (out.panels + out.tail);
  out.uncertainty = 2.0 * ((hi - lo) * shape + quad_error);
  return out;
}

double residual_start(const ZeroTable& zeros, std::size_t k) {
  if (k < 1 || 2 * k > zeros.size()) {
    throw PreconditionViolation("residual_start: k = " + std::to_string(k) + " outside [1, N/2] with N = " +
                                std::to_string(zeros.size()));
  }
  // int_a^b sinc pi(x - c) dx = (Si(pi (b - c)) - Si(pi (a - c))) / pi
  const double kd = static_cast<double>(k);
  double total = sine_integral(kPi * (0.5 - kd)) - sine_integral(kPi * (-0.5 - kd));
  for (std::size_t n = 1; n <= zeros.size(); ++n) {
    const double g = static_cast<double>(n) + 0.5;
    const double t = zeros(n);
    const double piece = sine_integral(kPi * (g - kd)) - sine_integral(kPi * (t - kd)) +
                         sine_integral(kPi * (g + kd)) - sine_integral(kPi * (t + kd));
    total += n % 2 == 0 ? piece : -piece;
  }
  return total / kPi;
}

ConstantBracket constant_bracket(const PhiEvaluator& ev, const ConstantConfig& cfg) {
  const L1Norm l1 = l1_norm_phi(ev, cfg.n_zeros, cfg.tol);
  ConstantBracket out;
  out.phi_l1 = l1.value;
  out.lower = 1.0 / l1.value;
  out.lower_min = 1.0 / (l1.value + l1.uncertainty);
  out.lower_max = 1.0 / (l1.value - l1.uncertainty);
  out.tail = 2.0 * l1.tail;
  out.uncertainty = l1.uncertainty;
  out.n_zeros = cfg.n_zeros;
  return out;
}

}  // namespace hbz
