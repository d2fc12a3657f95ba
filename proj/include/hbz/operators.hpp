#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "hbz/seqspace.hpp"
#include "hbz/special.hpp"

namespace hbz {

/// Leading N x N block on which A and B act. Row and column tails are dropped.
struct OperatorTruncation {
  std::size_t n = 0;
  /// Apply A and B through FFT-based Toeplitz + Hankel products.
  bool fast_apply = false;
};

/// a_{k,n} = 1/(n+k+1/2) + 1/(n-k+1/2). Denominators are half-integers, never zero.
double a_entry(long k, long n) noexcept;

/// b_{k,n} = (1 - (2n+1)^-2) / (pi^2 (1 - (2k)^-2)) * a_{k,n}.
///
/// The inverse of A acts as (Bx)_n = sum_k b_{k,n} x_k, i.e. b_{k,n} sits in
/// row n, column k of the matrix of B.
double b_entry(long k, long n) noexcept;

class FastToeplitzHankel;

/// A and B restricted to a truncation. Holds the FFT plan when fast_apply is
/// set, so repeated applications reuse it. Applications are const and may be
/// called concurrently.
class HilbertOperator {
 public:
  explicit HilbertOperator(OperatorTruncation trunc);
  ~HilbertOperator();
  HilbertOperator(HilbertOperator&&) noexcept;
  HilbertOperator& operator=(HilbertOperator&&) noexcept;

  const OperatorTruncation& truncation() const noexcept { return trunc_; }
  std::size_t size() const noexcept { return trunc_.n; }

  /// (Ax)_k = sum_{n<=N} a_{k,n} x_n for k = 1..N.
  CoeffSequence apply_A(const CoeffSequence& x) const;
  /// (Bx)_n = sum_{k<=N} b_{k,n} x_k for n = 1..N.
  CoeffSequence apply_B(const CoeffSequence& x) const;

 private:
  OperatorTruncation trunc_;
  std::unique_ptr<FastToeplitzHankel> fast_;
};

/// Throws DimensionMismatch if x is longer than trunc.n.
CoeffSequence apply_A(const CoeffSequence& x, OperatorTruncation trunc);
CoeffSequence apply_B(const CoeffSequence& x, OperatorTruncation trunc);

/// Rows 1..rows of A applied to x (all of x's columns). O(rows * x.size()).
CoeffSequence apply_A_rows(const CoeffSequence& x, std::size_t rows);

/// Number of equal panels on [-1/2, 1/2] used for the w_k integrals.
inline constexpr int kRhsPanels = 8;

/// w_k = (1/pi) * integral over [-1/2, 1/2] of cos(pi x) / (x - k)^2.
struct RhsVector {
  CoeffSequence w;
  int quad_order = 0;

  std::size_t size() const noexcept { return w.size(); }
};

RhsVector compute_w(std::size_t K, const QuadratureRule& rule);

/// Largest admissible |delta_n| for Q.
inline constexpr double kMaxAbsDelta = 0.25;

/// (Q d)_k = sum_n integral over [0, d_n] of
///   cos(pi y)/(n+1/2-y+k) - 1/(n+1/2+k) + cos(pi y)/(n+1/2-y-k) - 1/(n+1/2-k)
/// for k = 1..K, each integral by the fixed rule on the oriented interval.
/// Throws DeltaTooLarge if some |d_n| >= 1/4.
CoeffSequence apply_Q(const CoeffSequence& d, std::size_t K, const QuadratureRule& rule);

/// Q d = A alpha + remainder with alpha_n = sin(pi d_n)/pi - d_n.
struct QDecomposition {
  CoeffSequence alpha;
  CoeffSequence remainder;
};

QDecomposition decompose_Q(const CoeffSequence& d, std::size_t K, const QuadratureRule& rule);

/// C(a_1, ..., a_r) = sum over n in Z of 1 / prod_i (n + a_i + 1/2), 2 <= r <= 4.
/// Numerical bilateral sum; absolute accuracy about 1e-9 for |a_i| <= 100.
/// Throws UnsupportedArity outside 2 <= r <= 4.
double partial_fraction_constant(std::span<const int> a);

}  // namespace hbz
