#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hbz/operators.hpp"
#include "hbz/seqspace.hpp"
#include "hbz/special.hpp"

namespace hbz {

struct SolverConfig {
  std::size_t n = 400;
  int max_iter = 30;
  double tol = 1e-10;
  int quad_order = 8;
  bool fast_apply = false;

  /// Throws PreconditionViolation unless n >= 8, max_iter >= 1, tol > 0 and
  /// the quadrature order is supported.
  void validate() const;
};

inline constexpr std::size_t kMinTruncation = 8;

/// Ball radius and constants the computed solution is checked against.
namespace bounds {
inline constexpr double kDeltaNorm = 0.13;
inline constexpr double kBallRadius = 0.042;
inline constexpr double kBwNorm = 0.088;
inline constexpr double kContraction = 0.73;
inline constexpr double kContractionSlack = 0.02;
}  // namespace bounds

/// Estimate of the l2 norm of the dropped tail (entries n > N) assuming
/// |v_n| <= c/n, with c = max n|v_n| over the window N/4 < n <= N/2.
/// Entries near the cut are skipped since truncation distorts them.
double l2_tail_estimate(const CoeffSequence& v);

/// The map delta -> A_N^{-1}(w - Q delta) on the N x N truncation. A_N is
/// inverted by GMRES preconditioned with the explicit inverse B.
class FixedPointMap {
 public:
  explicit FixedPointMap(const SolverConfig& cfg);

  std::size_t size() const noexcept { return op_.size(); }
  const RhsVector& w() const noexcept { return w_; }
  const CoeffSequence& bw() const noexcept { return bw_; }
  const HilbertOperator& op() const noexcept { return op_; }
  const QuadratureRule& rule() const noexcept { return rule_; }

  CoeffSequence operator()(const CoeffSequence& delta) const;
  /// Solves A_N y = rhs.
  CoeffSequence solve_A(const CoeffSequence& rhs) const;
  /// ||A delta + Q delta - w|| over rows 1..N.
  double residual(const CoeffSequence& delta) const;

  int linear_iterations() const noexcept { return linear_iterations_; }

 private:
  QuadratureRule rule_;
  RhsVector w_;
  HilbertOperator op_;
  CoeffSequence bw_;
  mutable int linear_iterations_ = 0;
};

struct SolveReport {
  SolverConfig config;
  CoeffSequence delta;
  CoeffSequence bw;
  int iterations = 0;
  bool converged = false;
  std::vector<double> step_norms;
  /// step_norms[m] / step_norms[m-1] for m >= 1.
  std::vector<double> contraction_ratios;
  double norm_delta = 0.0;
  double norm_x = 0.0;  // ||delta - Bw||
  double norm_Bw = 0.0;
  double residual = 0.0;
  double tail_delta = 0.0;
  double tail_x = 0.0;
  double tail_Bw = 0.0;
  int linear_iterations = 0;
};

/// Runs the iteration without throwing on non-convergence. Starts at Bw
/// (the centre of the ball) unless `initial` is given.
SolveReport fixed_point_iterate(const SolverConfig& cfg,
                                const std::optional<CoeffSequence>& initial = std::nullopt);

/// As fixed_point_iterate, but throws NoConvergence if the step norm is
/// still >= tol after max_iter iterations.
SolveReport fixed_point_solve(const SolverConfig& cfg,
                              const std::optional<CoeffSequence>& initial = std::nullopt);

struct Certificate {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double slack = 0.0;
  bool pass = false;
};

struct CertificateResult {
  std::vector<Certificate> items;
  bool all_pass() const noexcept;
  const Certificate& at(const std::string& name) const;
};

/// Contraction ratios whose previous step is below this are rounding noise.
inline constexpr double kRatioNoiseFloor = 1e-12;

/// Largest contraction ratio from the third step on, ignoring ratios whose
/// previous step is below kRatioNoiseFloor. 0 when there are none.
double observed_contraction(const SolveReport& report);

/// Checks ||delta|| + tail <= 0.13, ||delta - Bw|| + tail <= 0.042,
/// ||Bw|| <= 0.088 + tail and the observed contraction <= 0.73 + 0.02.
/// Throws PreconditionViolation on an unconverged report.
CertificateResult certify_ball(const SolveReport& report);

struct ConvergenceRow {
  std::size_t n = 0;
  int iterations = 0;
  double norm_delta = 0.0;
  double tau1 = 0.0;
  /// ||delta^(N) - delta^(previous N)|| on the previous level's indices;
  /// absent for the first level.
  std::optional<double> prefix_diff;
};

struct ConvergenceTable {
  std::vector<ConvergenceRow> rows;
  bool prefix_diffs_decrease() const noexcept;
};

/// Solves at N, 2N, ..., 2^(levels-1) N. Throws PreconditionViolation if levels < 2.
ConvergenceTable truncation_study(const SolverConfig& base, int levels);

}  // namespace hbz
