#include "hbz/special.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "hbz/errors.hpp"

namespace hbz {

QuadratureRule gauss_legendre(int m) {
  if (m < 1 || m > kMaxGaussLegendreOrder) {
    throw UnsupportedOrder("gauss_legendre: order " + std::to_string(m) + " outside [1, " +
                           std::to_string(kMaxGaussLegendreOrder) + "]");
  }
  QuadratureRule rule;
  rule.nodes.assign(static_cast<std::size_t>(m), 0.0);
  rule.weights.assign(static_cast<std::size_t>(m), 0.0);

  const int half = (m + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = 0.0;
      for (int j = 1; j <= m; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
      }
      dp = m * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    // One more evaluation at the converged node for the weight.
    double p0 = 1.0;
    double p1 = 0.0;
    for (int j = 1; j <= m; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
    }
    dp = m * (z * p0 - p1) / (z * z - 1.0);
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);

    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(m - 1 - i);
    rule.nodes[lo] = -z;
    rule.nodes[hi] = z;
    rule.weights[lo] = w;
    rule.weights[hi] = w;
  }
  if (m % 2 == 1) rule.nodes[static_cast<std::size_t>(m / 2)] = 0.0;
  return rule;
}

double integrate(const RealFunction& f, double a, double b, const QuadratureRule& rule) {
  if (a == b) return 0.0;
  if (b < a) return -integrate(f, b, a, rule);
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.order(); ++i) {
    const double x = mid + half * rule.nodes[i];
    const double fx = f(x);
    if (!std::isfinite(fx)) {
      throw NonFiniteIntegrand("integrate: integrand not finite at x = " + std::to_string(x));
    }
    sum += rule.weights[i] * fx;
  }
  return half * sum;
}

double integrate_composite(const RealFunction& f, double a, double b, int panels,
                           const QuadratureRule& rule) {
  if (panels < 1) throw PreconditionViolation("integrate_composite: panels must be positive");
  const double h = (b - a) / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double hi = p + 1 == panels ? b : a + (p + 1) * h;
    sum += integrate(f, lo, hi, rule);
  }
  return sum;
}

namespace {

void adaptive_step(const RealFunction& f, double a, double b, double coarse, double tol,
                   const QuadratureRule& rule, int depth, int max_depth, AdaptiveResult& acc) {
  const double mid = 0.5 * (a + b);
  const double left = integrate(f, a, mid, rule);
  const double right = integrate(f, mid, b, rule);
  acc.evaluations += 2 * rule.order();
  const double fine = left + right;
  const double err = std::abs(fine - coarse);
  if (err <= tol || depth >= max_depth) {
    if (err > tol) acc.reached_max_depth = true;
    acc.value += fine;
    acc.error_estimate += err;
    return;
  }
  adaptive_step(f, a, mid, left, 0.5 * tol, rule, depth + 1, max_depth, acc);
  adaptive_step(f, mid, b, right, 0.5 * tol, rule, depth + 1, max_depth, acc);
}

}  // namespace

AdaptiveResult integrate_adaptive(const RealFunction& f, double a, double b, double abs_tol,
                                  const QuadratureRule& rule, int max_depth) {
  if (!(abs_tol > 0.0)) throw PreconditionViolation("integrate_adaptive: tolerance must be positive");
  AdaptiveResult acc;
  if (a == b) return acc;
  const double coarse = integrate(f, a, b, rule);
  acc.evaluations = rule.order();
  adaptive_step(f, a, b, coarse, abs_tol, rule, 0, max_depth, acc);
  return acc;
}

namespace {

// Power series, used for |t| <= 4 where the terms stay below 10 in size.
double sine_integral_series(double t) {
  const double t2 = t * t;
  double term = t;  // t^(2k+1) / (2k+1)!
  double sum = t;
  for (int k = 1; k < 60; ++k) {
    term *= -t2 / ((2.0 * k) * (2.0 * k + 1.0));
    const double add = term / (2.0 * k + 1.0);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

// Si(t) = pi/2 + Im(e^{-it} h) where h is the continued fraction for
// e^{it} E1(it), evaluated with the modified Lentz method.
double sine_integral_cf(double t) {
  using cplx = std::complex<double>;
  constexpr double tiny = 1e-300;
  cplx b(1.0, t);
  cplx c(1.0 / tiny, 0.0);
  cplx d = 1.0 / b;
  cplx h = d;
  for (int i = 2; i < 1000; ++i) {
    const double a = -static_cast<double>(i - 1) * static_cast<double>(i - 1);
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const cplx del = c * d;
    h *= del;
    if (std::abs(del.real() - 1.0) + std::abs(del.imag()) < 1e-16) break;
  }
  h *= cplx(std::cos(t), -std::sin(t));
  return 0.5 * std::numbers::pi + h.imag();
}

}  // namespace

double sine_integral(double t) {
  const double a = std::abs(t);
  const double si = a <= 4.0 ? sine_integral_series(a) : sine_integral_cf(a);
  return t < 0.0 ? -si : si;
}

}  // namespace hbz
