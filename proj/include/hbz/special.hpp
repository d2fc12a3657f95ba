#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace hbz {

/// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;    // ascending
  std::vector<double> weights;  // positive

  std::size_t order() const noexcept { return nodes.size(); }
};

inline constexpr int kMaxGaussLegendreOrder = 64;

/// m-point rule, 1 <= m <= 64. Nodes are found by Newton iteration on P_m
/// and symmetrised so that node[i] == -node[m-1-i] exactly.
QuadratureRule gauss_legendre(int m);

using RealFunction = std::function<double(double)>;

/// Oriented integral of f over [a, b] with the rule mapped affinely.
/// integrate(f, b, a, r) == -integrate(f, a, b, r) and integrate(f, a, a, r) == 0.
/// Throws NonFiniteIntegrand if f is not finite at a node.
double integrate(const RealFunction& f, double a, double b, const QuadratureRule& rule);

/// Same rule on `panels` equal subintervals of [a, b].
double integrate_composite(const RealFunction& f, double a, double b, int panels,
                           const QuadratureRule& rule);

struct AdaptiveResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
  bool reached_max_depth = false;
};

/// Recursive bisection. On each interval the rule is compared with the sum
/// over its two halves; the absolute tolerance is halved along with the
/// interval and recursion stops at `max_depth`.
AdaptiveResult integrate_adaptive(const RealFunction& f, double a, double b, double abs_tol,
                                  const QuadratureRule& rule, int max_depth = 40);

/// Si(t) = integral of sin(u)/u over [0, t].
double sine_integral(double t);

}  // namespace hbz
