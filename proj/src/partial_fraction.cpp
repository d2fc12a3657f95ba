#include <cmath>
#include <string>
#include <vector>

#include "hbz/errors.hpp"
#include "hbz/operators.hpp"

namespace hbz {

namespace {

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double v) noexcept {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Integral of 1/((x+p)(x+q)) over [L, inf), L + min(p, q) > 0.
double pair_tail_integral(double p, double q, double L) {
  if (p == q) return 1.0 / (L + p);
  return std::log1p((q - p) / (L + p)) / (q - p);
}

}  // namespace

double partial_fraction_constant(std::span<const int> a) {
  const std::size_t r = a.size();
  if (r < 2 || r > 4) {
    throw UnsupportedArity("partial_fraction_constant: arity " + std::to_string(r) + " outside [2, 4]");
  }
  std::vector<double> shift(r);
  for (std::size_t i = 0; i < r; ++i) shift[i] = static_cast<double>(a[i]) + 0.5;

  // r = 2 tails decay like 1/n^2 and need the integral correction below;
  // for r >= 3 the truncation error at 1e5 is already below 1e-9.
  const long M = r == 2 ? 1'000'000 : 100'000;

  const auto term = [&](double n) {
    double prod = 1.0;
    for (double s : shift) prod *= n + s;
    return 1.0 / prod;
  };

  // Outermost terms first so the large central terms land on a settled sum.
  CompensatedSum sum;
  for (long n = M; n >= 1; --n) {
    sum.add(term(static_cast<double>(n)));
    sum.add(term(-static_cast<double>(n)));
  }
  sum.add(term(0.0));

  if (r == 2) {
    // Midpoint rule: sum over n > M of f(n) ~ integral over [M + 1/2, inf).
    const double L = static_cast<double>(M) + 0.5;
    sum.add(pair_tail_integral(shift[0], shift[1], L));
    // n < -M: substitute n = -u, f(-u) = 1/((u - p)(u - q)).
    sum.add(pair_tail_integral(-shift[0], -shift[1], L));
  }
  return sum.value();
}

}  // namespace hbz
