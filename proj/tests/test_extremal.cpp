#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hbz/errors.hpp"
#include "hbz/extremal.hpp"
#include "hbz/operators.hpp"
#include "hbz/solver.hpp"

using namespace hbz;
using std::numbers::pi;

namespace {

const ZeroTable& converged_zeros() {
  static const ZeroTable zeros = deltas_to_zeros(fixed_point_solve(SolverConfig{.fast_apply = true}).delta);
  return zeros;
}

ZeroTable grid_zeros(std::size_t n) { return deltas_to_zeros(CoeffSequence(n)); }

// ||cos(pi x)/(1 - 4x^2)||_1, computed once with 25-digit arithmetic by panel
// quadrature between half-integers up to 20000.5 plus the averaged tail.
constexpr double kGridL1 = 1.851937051982468;

}  // namespace

TEST_CASE("phi normalisation and evenness") {
  const PhiEvaluator ev(converged_zeros());
  CHECK(ev(0.0) == 1.0);
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(0.0, 350.0);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    CHECK(std::abs(ev(x) - ev(-x)) <= 1e-13 * std::max(1.0, std::abs(ev(x))));
  }
}

TEST_CASE("phi vanishes at the tabulated zeros") {
  const PhiEvaluator ev(converged_zeros());
  for (std::size_t n = 1; n <= 50; ++n) CHECK(std::abs(ev(converged_zeros()(n))) < 1e-10);
}

TEST_CASE("phi agrees with a brute-force partial product") {
  const ZeroTable& zeros = converged_zeros();
  const PhiEvaluator ev(zeros);
  const std::size_t explicit_factors = 100000;
  for (double x : {1.0, 2.5, 7.3}) {
    CAPTURE(x);
    double prod = 1.0;
    for (std::size_t n = 1; n <= explicit_factors; ++n) {
      const double t = n <= zeros.size() ? zeros(n) : static_cast<double>(n) + 0.5;
      prod *= 1.0 - x * x / (t * t);
    }
    // Remaining grid factors: log prod_{n>M} (1 - x^2/(n+1/2)^2) ~ -x^2 / (M + 1).
    prod *= std::exp(-x * x / (static_cast<double>(explicit_factors) + 1.0));
    CHECK(std::abs(ev(x) - prod) < 1e-8);
  }
}

TEST_CASE("phi is continuous through the removable grid points") {
  const PhiEvaluator ev(converged_zeros());
  for (double g : {0.5, 2.5, 10.5, 101.5}) {
    const double centre = ev(g);
    const double h = 1e-7;
    CHECK(std::abs(0.5 * (ev(g - h) + ev(g + h)) - centre) < 1e-9);
  }
  // On the exact grid phi(x) = cos(pi x)/(1 - 4x^2), whose value at 1/2 is pi/4.
  const PhiEvaluator grid(grid_zeros(50));
  CHECK(grid(0.5) == doctest::Approx(pi / 4.0).epsilon(1e-15));
  CHECK(grid(3.25) == doctest::Approx(std::cos(pi * 3.25) / (1.0 - 4.0 * 3.25 * 3.25)).epsilon(1e-13));
}

TEST_CASE("phi alternates sign between consecutive zeros") {
  const ZeroTable& zeros = converged_zeros();
  const PhiEvaluator ev(zeros);
  CHECK(ev(0.5 * zeros(1)) > 0.0);
  for (std::size_t n = 1; n <= 50; ++n) {
    const double mid = 0.5 * (zeros(n) + zeros(n + 1));
    CHECK((ev(mid) > 0.0) == (n % 2 == 0));
  }
}

TEST_CASE("phi range guard") {
  const PhiEvaluator ev(converged_zeros());
  CHECK_THROWS_AS(ev(1000.0), OutOfRange);
  CHECK_THROWS_AS(ev(-400.5), OutOfRange);
  CHECK_NOTHROW(ev(400.0));
  CHECK_THROWS_AS(PhiEvaluator(grid_zeros(10), 11), PreconditionViolation);
}

TEST_CASE("l1 norm on the exact grid matches the frozen oracle") {
  const PhiEvaluator ev(grid_zeros(400));
  const L1Norm l1 = l1_norm_phi(ev, 195, 1e-12);
  CHECK(std::abs(l1.value - kGridL1) < 1e-8);
  // 1/||cos(pi x)/(1-4x^2)||_1 is strictly below the extremal constant.
  CHECK(1.0 / l1.value < 0.5409288);
  CHECK(1.0 / kGridL1 < reference::kConstantLower);
}

TEST_CASE("l1 norm of the computed extremal function") {
  const PhiEvaluator ev(converged_zeros());
  const L1Norm l300 = l1_norm_phi(ev, 300, 1e-11);
  const L1Norm l150 = l1_norm_phi(ev, 150, 1e-11);
  const L1Norm l50 = l1_norm_phi(ev, 50, 1e-11);
  CHECK(std::abs(1.0 / l300.value - 0.54092882195) < 1e-5);
  CHECK(std::abs(l300.value - 1.848678) < 3e-5);
  CHECK(std::abs(l300.value - l150.value) < 2.0 * l150.tail);
  CHECK(l300.uncertainty < l50.uncertainty);
  CHECK_THROWS_AS(l1_norm_phi(ev, 396, 1e-11), PreconditionViolation);
  CHECK_THROWS_AS(l1_norm_phi(ev, 0, 1e-11), PreconditionViolation);
}

TEST_CASE("grid tail integral behaves like (2/pi)/(4x)") {
  for (double x0 : {50.0, 300.25, 1000.0}) {
    CHECK(grid_tail_integral(x0) == doctest::Approx(2.0 / (pi * 4.0 * x0)).epsilon(5e-3));
  }
}

TEST_CASE("residual_start on the grid equals the scaled right-hand side") {
  const ZeroTable grid = grid_zeros(100);
  const RhsVector w = compute_w(50, gauss_legendre(8));
  for (std::size_t k = 1; k <= 50; ++k) {
    const double sign = k % 2 == 1 ? 1.0 : -1.0;
    CHECK(std::abs(residual_start(grid, k) - sign * w.w(k) / pi) < 1e-12);
  }
}

TEST_CASE("residual_start vanishes at the computed zeros") {
  const ZeroTable& zeros = converged_zeros();
  for (std::size_t k = 1; k <= 50; ++k) CHECK(std::abs(residual_start(zeros, k)) < 1e-6);
  for (std::size_t k = 51; k <= zeros.size() / 2; ++k) CHECK(std::abs(residual_start(zeros, k)) < 1e-4);
  CHECK_THROWS_AS(residual_start(zeros, 0), PreconditionViolation);
  CHECK_THROWS_AS(residual_start(zeros, zeros.size() / 2 + 1), PreconditionViolation);
}

TEST_CASE("constant_bracket") {
  const ConstantBracket c = constant_bracket(PhiEvaluator(converged_zeros()));
  CHECK(c.n_zeros == 300);
  CHECK(c.lower == doctest::Approx(1.0 / c.phi_l1));
  CHECK(c.lower >= 0.540928 - 1e-5);
  CHECK(c.lower <= 0.540929 + 1e-5);
  CHECK(c.lower <= c.reference_upper + 1e-5);
  CHECK(c.lower_min <= c.lower);
  CHECK(c.lower <= c.lower_max);
  CHECK(ConstantBracket::kNote.find("not computed") != std::string_view::npos);
}
