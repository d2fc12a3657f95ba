#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace hbz {

/// A finitely supported element of l^2(N): entries 1..size() are stored,
/// every later entry is exactly zero.
///
/// Indexing through operator() is 1-based to match the natural numbering
/// of the zeros; values() exposes the 0-based storage.
class CoeffSequence {
 public:
  CoeffSequence() = default;
  explicit CoeffSequence(std::size_t n) : values_(n, 0.0) {}
  /// Throws InvariantViolation if any entry is NaN or infinite.
  explicit CoeffSequence(std::vector<double> values);
  CoeffSequence(std::initializer_list<double> values) : CoeffSequence(std::vector<double>(values)) {}

  static CoeffSequence unit(std::size_t n, std::size_t index);

  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  double operator()(std::size_t n) const { return values_.at(n - 1); }
  double& operator()(std::size_t n) { return values_.at(n - 1); }

  /// Entry n, or 0 for n past the stored prefix.
  double at_or_zero(std::size_t n) const noexcept {
    return n >= 1 && n <= values_.size() ? values_[n - 1] : 0.0;
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  /// Copy of the first n entries, zero padded if n > size().
  CoeffSequence resized(std::size_t n) const;

  CoeffSequence& operator+=(const CoeffSequence& rhs);
  CoeffSequence& operator-=(const CoeffSequence& rhs);
  CoeffSequence& operator*=(double s);

  friend CoeffSequence operator+(CoeffSequence lhs, const CoeffSequence& rhs) { return lhs += rhs; }
  friend CoeffSequence operator-(CoeffSequence lhs, const CoeffSequence& rhs) { return lhs -= rhs; }
  friend CoeffSequence operator*(double s, CoeffSequence x) { return x *= s; }

  friend bool operator==(const CoeffSequence&, const CoeffSequence&) = default;

 private:
  std::vector<double> values_;
};

/// Euclidean norm, computed with scaling so it cannot overflow.
double l2_norm(const CoeffSequence& x) noexcept;
double l2_norm(std::span<const double> x) noexcept;

double dot(const CoeffSequence& x, const CoeffSequence& y) noexcept;

/// Positive zeros tau_1 < tau_2 < ... of an even product of exponential type pi.
class ZeroTable {
 public:
  /// Validates: strictly increasing, tau_1 >= 1/2, |tau_n - (n + 1/2)| < 1/2.
  explicit ZeroTable(std::vector<double> tau);

  std::size_t size() const noexcept { return tau_.size(); }
  double operator()(std::size_t n) const { return tau_.at(n - 1); }
  std::span<const double> values() const noexcept { return tau_; }

  /// The first n zeros.
  ZeroTable prefix(std::size_t n) const;

 private:
  std::vector<double> tau_;
};

/// tau_n = n + 1/2 - delta_n. Throws InvariantViolation when the result is
/// not a valid ZeroTable.
ZeroTable deltas_to_zeros(const CoeffSequence& delta);

/// Inverse of deltas_to_zeros.
CoeffSequence zeros_to_deltas(const ZeroTable& zeros);

}  // namespace hbz
