#include "hbz/seqspace.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "hbz/errors.hpp"

namespace hbz {

CoeffSequence::CoeffSequence(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw InvariantViolation("CoeffSequence: entry " + std::to_string(i + 1) + " is not finite");
    }
  }
}

CoeffSequence CoeffSequence::unit(std::size_t n, std::size_t index) {
  if (index < 1 || index > n) throw DimensionMismatch("CoeffSequence::unit: index out of range");
  CoeffSequence e(n);
  e(index) = 1.0;
  return e;
}

CoeffSequence CoeffSequence::resized(std::size_t n) const {
  CoeffSequence out(n);
  const std::size_t m = std::min(n, values_.size());
  std::copy_n(values_.begin(), m, out.values_.begin());
  return out;
}

CoeffSequence& CoeffSequence::operator+=(const CoeffSequence& rhs) {
  if (rhs.size() > size()) values_.resize(rhs.size(), 0.0);
  for (std::size_t i = 0; i < rhs.size(); ++i) values_[i] += rhs.values_[i];
  return *this;
}

CoeffSequence& CoeffSequence::operator-=(const CoeffSequence& rhs) {
  if (rhs.size() > size()) values_.resize(rhs.size(), 0.0);
  for (std::size_t i = 0; i < rhs.size(); ++i) values_[i] -= rhs.values_[i];
  return *this;
}

CoeffSequence& CoeffSequence::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

double l2_norm(std::span<const double> x) noexcept {
  // Scaled accumulation in the style of the reference BLAS dnrm2.
  double scale = 0.0;
  double ssq = 1.0;
  for (double v : x) {
    if (v == 0.0) continue;
    const double a = std::abs(v);
    if (scale < a) {
      ssq = 1.0 + ssq * (scale / a) * (scale / a);
      scale = a;
    } else {
      ssq += (a / scale) * (a / scale);
    }
  }
  return scale * std::sqrt(ssq);
}

double l2_norm(const CoeffSequence& x) noexcept { return l2_norm(x.values()); }

double dot(const CoeffSequence& x, const CoeffSequence& y) noexcept {
  const std::size_t m = std::min(x.size(), y.size());
  double s = 0.0;
  for (std::size_t i = 1; i <= m; ++i) s += x(i) * y(i);
  return s;
}

ZeroTable::ZeroTable(std::vector<double> tau) : tau_(std::move(tau)) {
  for (std::size_t i = 0; i < tau_.size(); ++i) {
    const double t = tau_[i];
    const double nominal = static_cast<double>(i + 1) + 0.5;
    if (!std::isfinite(t)) {
      throw InvariantViolation("ZeroTable: tau_" + std::to_string(i + 1) + " is not finite");
    }
    if (!(std::abs(t - nominal) < 0.5)) {
      throw InvariantViolation("ZeroTable: tau_" + std::to_string(i + 1) + " = " + std::to_string(t) +
                               " leaves its cell (n, n+1)");
    }
    if (i > 0 && !(tau_[i - 1] < t)) {
      throw InvariantViolation("ZeroTable: zeros not strictly increasing at n = " + std::to_string(i + 1));
    }
  }
  if (!tau_.empty() && tau_[0] < 0.5) throw InvariantViolation("ZeroTable: tau_1 < 1/2");
}

ZeroTable ZeroTable::prefix(std::size_t n) const {
  if (n > tau_.size()) throw DimensionMismatch("ZeroTable::prefix: not enough zeros");
  return ZeroTable(std::vector<double>(tau_.begin(), tau_.begin() + static_cast<std::ptrdiff_t>(n)));
}

ZeroTable deltas_to_zeros(const CoeffSequence& delta) {
  std::vector<double> tau(delta.size());
  for (std::size_t n = 1; n <= delta.size(); ++n) {
    tau[n - 1] = (static_cast<double>(n) + 0.5) - delta(n);
  }
  return ZeroTable(std::move(tau));
}

CoeffSequence zeros_to_deltas(const ZeroTable& zeros) {
  // n + 1/2 - tau_n is exact (Sterbenz) since tau_n lies in (n, n+1).
  std::vector<double> d(zeros.size());
  for (std::size_t n = 1; n <= zeros.size(); ++n) d[n - 1] = (static_cast<double>(n) + 0.5) - zeros(n);
  return CoeffSequence(std::move(d));
}

}  // namespace hbz
