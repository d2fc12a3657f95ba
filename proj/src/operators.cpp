#include "hbz/operators.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "fast_apply.hpp"
#include "hbz/errors.hpp"

namespace hbz {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPi2 = kPi * kPi;

// Column weight (1 - (2n+1)^-2) and row weight (1 - (2k)^-2) of B.
double b_column_weight(double n) noexcept {
  const double s = 2.0 * n + 1.0;
  return 1.0 - 1.0 / (s * s);
}

double b_row_weight(double k) noexcept {
  const double s = 2.0 * k;
  return 1.0 - 1.0 / (s * s);
}

void check_fits(const CoeffSequence& x, std::size_t n, const char* who) {
  if (x.size() > n) {
    throw DimensionMismatch(std::string(who) + ": input of length " + std::to_string(x.size()) +
                            " exceeds truncation " + std::to_string(n));
  }
}

}  // namespace

double a_entry(long k, long n) noexcept {
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  return 1.0 / (nd + kd + 0.5) + 1.0 / (nd - kd + 0.5);
}

double b_entry(long k, long n) noexcept {
  const double kd = static_cast<double>(k);
  const double nd = static_cast<double>(n);
  return b_column_weight(nd) / (kPi2 * b_row_weight(kd)) * a_entry(k, n);
}

HilbertOperator::HilbertOperator(OperatorTruncation trunc) : trunc_(trunc) {
  if (trunc_.n == 0) throw PreconditionViolation("HilbertOperator: truncation must be positive");
  if (trunc_.fast_apply) fast_ = std::make_unique<FastToeplitzHankel>(trunc_.n);
}

HilbertOperator::~HilbertOperator() = default;
HilbertOperator::HilbertOperator(HilbertOperator&&) noexcept = default;
HilbertOperator& HilbertOperator::operator=(HilbertOperator&&) noexcept = default;

CoeffSequence HilbertOperator::apply_A(const CoeffSequence& x) const {
  check_fits(x, trunc_.n, "apply_A");
  if (!fast_) return apply_A_rows(x, trunc_.n);
  const CoeffSequence padded = x.resized(trunc_.n);
  CoeffSequence y(trunc_.n);
  fast_->apply(padded.values(), y.values());
  return y;
}

CoeffSequence HilbertOperator::apply_B(const CoeffSequence& x) const {
  check_fits(x, trunc_.n, "apply_B");
  const std::size_t n = trunc_.n;
  CoeffSequence y(n);
  if (!fast_) {
    for (std::size_t row = 1; row <= n; ++row) {
      double s = 0.0;
      for (std::size_t k = 1; k <= x.size(); ++k) {
        s += b_entry(static_cast<long>(k), static_cast<long>(row)) * x(k);
      }
      y(row) = s;
    }
    return y;
  }
  // B = diag(column weights) / pi^2 * A^T * diag(1 / row weights).
  CoeffSequence scaled = x.resized(n);
  for (std::size_t k = 1; k <= n; ++k) scaled(k) /= b_row_weight(static_cast<double>(k));
  fast_->apply_transpose(scaled.values(), y.values());
  for (std::size_t row = 1; row <= n; ++row) y(row) *= b_column_weight(static_cast<double>(row)) / kPi2;
  return y;
}

CoeffSequence apply_A(const CoeffSequence& x, OperatorTruncation trunc) {
  return HilbertOperator(trunc).apply_A(x);
}

CoeffSequence apply_B(const CoeffSequence& x, OperatorTruncation trunc) {
  return HilbertOperator(trunc).apply_B(x);
}

CoeffSequence apply_A_rows(const CoeffSequence& x, std::size_t rows) {
  CoeffSequence y(rows);
  for (std::size_t k = 1; k <= rows; ++k) {
    double s = 0.0;
    for (std::size_t n = 1; n <= x.size(); ++n) s += a_entry(static_cast<long>(k), static_cast<long>(n)) * x(n);
    y(k) = s;
  }
  return y;
}

RhsVector compute_w(std::size_t K, const QuadratureRule& rule) {
  if (K == 0) throw PreconditionViolation("compute_w: K must be positive");
  RhsVector out{CoeffSequence(K), static_cast<int>(rule.order())};
  for (std::size_t k = 1; k <= K; ++k) {
    const double kd = static_cast<double>(k);
    const auto integrand = [kd](double x) {
      const double r = x - kd;
      return std::cos(kPi * x) / (r * r);
    };
    out.w(k) = integrate_composite(integrand, -0.5, 0.5, kRhsPanels, rule) / kPi;
  }
  return out;
}

CoeffSequence apply_Q(const CoeffSequence& d, std::size_t K, const QuadratureRule& rule) {
  for (std::size_t n = 1; n <= d.size(); ++n) {
    if (!(std::abs(d(n)) < kMaxAbsDelta)) {
      throw DeltaTooLarge("apply_Q: |delta_" + std::to_string(n) + "| = " + std::to_string(std::abs(d(n))) +
                          " is not below 1/4");
    }
  }
  const std::size_t m = rule.order();
  // Per column: nodes y on [0, d_n], oriented weights, and cos(pi y) - 1
  // in the cancellation-free form -2 sin^2(pi y / 2).
  std::vector<double> ys(d.size() * m);
  std::vector<double> ws(d.size() * m);
  std::vector<double> cm1(d.size() * m);
  for (std::size_t n = 1; n <= d.size(); ++n) {
    const double half = 0.5 * d(n);
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t idx = (n - 1) * m + i;
      const double y = half * (1.0 + rule.nodes[i]);
      const double s = std::sin(0.5 * kPi * y);
      ys[idx] = y;
      ws[idx] = half * rule.weights[i];
      cm1[idx] = -2.0 * s * s;
    }
  }
  // cos(pi y)/(t - y) - 1/t = ((cos(pi y) - 1) t + y) / (t (t - y))
  const auto term = [](double t, double y, double c) { return (c * t + y) / (t * (t - y)); };

  CoeffSequence out(K);
  for (std::size_t k = 1; k <= K; ++k) {
    const double kd = static_cast<double>(k);
    double total = 0.0;
    for (std::size_t n = 1; n <= d.size(); ++n) {
      if (d(n) == 0.0) continue;
      const double tp = static_cast<double>(n) + 0.5 + kd;
      const double tm = static_cast<double>(n) + 0.5 - kd;
      double s = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        const std::size_t idx = (n - 1) * m + i;
        s += ws[idx] * (term(tp, ys[idx], cm1[idx]) + term(tm, ys[idx], cm1[idx]));
      }
      total += s;
    }
    out(k) = total;
  }
  return out;
}

QDecomposition decompose_Q(const CoeffSequence& d, std::size_t K, const QuadratureRule& rule) {
  const CoeffSequence q = apply_Q(d, K, rule);
  CoeffSequence alpha(d.size());
  for (std::size_t n = 1; n <= d.size(); ++n) alpha(n) = std::sin(kPi * d(n)) / kPi - d(n);
  CoeffSequence remainder = q - apply_A_rows(alpha, K);
  return {std::move(alpha), std::move(remainder)};
}

}  // namespace hbz
