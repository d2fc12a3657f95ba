#include "hbz/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hbz/errors.hpp"
#include "hbz/linear_solve.hpp"

namespace hbz {

void SolverConfig::validate() const {
  if (n < kMinTruncation) {
    throw PreconditionViolation("SolverConfig: truncation " + std::to_string(n) + " below minimum " +
                                std::to_string(kMinTruncation));
  }
  if (max_iter < 1) throw PreconditionViolation("SolverConfig: max_iter must be at least 1");
  if (!(tol > 0.0)) throw PreconditionViolation("SolverConfig: tol must be positive");
  if (quad_order < 1 || quad_order > kMaxGaussLegendreOrder) {
    throw PreconditionViolation("SolverConfig: quadrature order " + std::to_string(quad_order) +
                                " unsupported");
  }
}

double l2_tail_estimate(const CoeffSequence& v) {
  const std::size_t n = v.size();
  if (n == 0) return 0.0;
  const std::size_t lo = n / 4 + 1;
  const std::size_t hi = std::max(lo, n / 2);
  double c = 0.0;
  for (std::size_t i = lo; i <= hi && i <= n; ++i) c = std::max(c, static_cast<double>(i) * std::abs(v(i)));
  // sum_{i > n} c^2 / i^2 < c^2 / n
  return c / std::sqrt(static_cast<double>(n));
}

FixedPointMap::FixedPointMap(const SolverConfig& cfg)
    : rule_(gauss_legendre(cfg.quad_order)),
      w_(compute_w(cfg.n, rule_)),
      op_(OperatorTruncation{cfg.n, cfg.fast_apply}),
      bw_(op_.apply_B(w_.w)) {}

CoeffSequence FixedPointMap::solve_A(const CoeffSequence& rhs) const {
  const GmresResult r = gmres([this](const CoeffSequence& x) { return op_.apply_A(x); },
                              [this](const CoeffSequence& x) { return op_.apply_B(x); }, rhs);
  linear_iterations_ += r.iterations;
  if (!r.converged) {
    throw NoConvergence("linear solve with A stalled at residual " + std::to_string(r.residual_norm));
  }
  return r.x;
}

CoeffSequence FixedPointMap::operator()(const CoeffSequence& delta) const {
  return solve_A(w_.w - apply_Q(delta, size(), rule_));
}

double FixedPointMap::residual(const CoeffSequence& delta) const {
  return l2_norm(op_.apply_A(delta) + apply_Q(delta, size(), rule_) - w_.w);
}

SolveReport fixed_point_iterate(const SolverConfig& cfg, const std::optional<CoeffSequence>& initial) {
  cfg.validate();
  const FixedPointMap map(cfg);

  SolveReport report;
  report.config = cfg;
  report.bw = map.bw();
  if (initial && initial->size() > cfg.n) {
    throw DimensionMismatch("fixed_point_iterate: initial iterate longer than truncation");
  }
  CoeffSequence delta = initial ? initial->resized(cfg.n) : map.bw();

  for (int it = 0; it < cfg.max_iter; ++it) {
    CoeffSequence next = map(delta);
    const double step = l2_norm(next - delta);
    if (!report.step_norms.empty()) report.contraction_ratios.push_back(step / report.step_norms.back());
    report.step_norms.push_back(step);
    report.iterations = it + 1;
    delta = std::move(next);
    if (step < cfg.tol) {
      report.converged = true;
      break;
    }
  }

  report.norm_delta = l2_norm(delta);
  const CoeffSequence x = delta - map.bw();
  report.norm_x = l2_norm(x);
  report.norm_Bw = l2_norm(map.bw());
  report.tail_delta = l2_tail_estimate(delta);
  report.tail_x = l2_tail_estimate(x);
  report.tail_Bw = l2_tail_estimate(map.bw());
  report.residual = map.residual(delta);
  report.delta = std::move(delta);
  report.linear_iterations = map.linear_iterations();
  return report;
}

SolveReport fixed_point_solve(const SolverConfig& cfg, const std::optional<CoeffSequence>& initial) {
  SolveReport report = fixed_point_iterate(cfg, initial);
  if (!report.converged) {
    throw NoConvergence("fixed_point_solve: step norm " + std::to_string(report.step_norms.back()) +
                        " still above tol after " + std::to_string(report.iterations) + " iterations");
  }
  return report;
}

bool CertificateResult::all_pass() const noexcept {
  return std::all_of(items.begin(), items.end(), [](const Certificate& c) { return c.pass; });
}

const Certificate& CertificateResult::at(const std::string& name) const {
  for (const auto& c : items) {
    if (c.name == name) return c;
  }
  throw OutOfRange("CertificateResult: no certificate named " + name);
}

double observed_contraction(const SolveReport& report) {
  double worst = 0.0;
  // contraction_ratios[m - 1] = step[m] / step[m - 1]; skip the first two steps.
  for (std::size_t m = 2; m < report.step_norms.size(); ++m) {
    if (report.step_norms[m - 1] < kRatioNoiseFloor) continue;
    worst = std::max(worst, report.contraction_ratios[m - 1]);
  }
  return worst;
}

namespace {

Certificate make_certificate(std::string name, double value, double bound, double slack) {
  return Certificate{std::move(name), value, bound, slack, value <= bound + slack};
}

}  // namespace

CertificateResult certify_ball(const SolveReport& report) {
  if (!report.converged) throw PreconditionViolation("certify_ball: report is from an unconverged solve");
  CertificateResult out;
  out.items.push_back(make_certificate("norm_delta", report.norm_delta + report.tail_delta,
                                       bounds::kDeltaNorm, 0.0));
  out.items.push_back(make_certificate("norm_x", report.norm_x + report.tail_x, bounds::kBallRadius, 0.0));
  out.items.push_back(make_certificate("norm_Bw", report.norm_Bw, bounds::kBwNorm, report.tail_Bw));
  out.items.push_back(make_certificate("contraction", observed_contraction(report), bounds::kContraction,
                                       bounds::kContractionSlack));
  return out;
}

bool ConvergenceTable::prefix_diffs_decrease() const noexcept {
  std::optional<double> prev;
  for (const auto& row : rows) {
    if (!row.prefix_diff) continue;
    if (prev && !(*row.prefix_diff < *prev)) return false;
    prev = row.prefix_diff;
  }
  return true;
}

ConvergenceTable truncation_study(const SolverConfig& base, int levels) {
  if (levels < 2) throw PreconditionViolation("truncation_study: need at least two levels");
  ConvergenceTable table;
  std::optional<CoeffSequence> previous;
  SolverConfig cfg = base;
  for (int level = 0; level < levels; ++level) {
    const SolveReport report = fixed_point_solve(cfg);
    ConvergenceRow row;
    row.n = cfg.n;
    row.iterations = report.iterations;
    row.norm_delta = report.norm_delta;
    row.tau1 = 1.5 - report.delta(1);
    if (previous) row.prefix_diff = l2_norm(report.delta.resized(previous->size()) - *previous);
    table.rows.push_back(row);
    previous = report.delta;
    cfg.n *= 2;
  }
  return table;
}

}  // namespace hbz
