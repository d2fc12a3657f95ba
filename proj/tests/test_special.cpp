#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "doctest.h"
#include "hbz/errors.hpp"
#include "hbz/special.hpp"

using namespace hbz;
using std::numbers::pi;

namespace {

// Independent oracle for Si: fixed 20-point Gauss-Legendre on unit-ish panels.
double si_oracle(double t) {
  static const QuadratureRule rule = gauss_legendre(20);
  const auto sinc = [](double u) { return u == 0.0 ? 1.0 : std::sin(u) / u; };
  const int panels = 4 * static_cast<int>(std::ceil(std::abs(t))) + 4;
  return integrate_composite(sinc, 0.0, t, panels, rule);
}

}  // namespace

TEST_CASE("gauss_legendre closed forms") {
  const QuadratureRule r1 = gauss_legendre(1);
  REQUIRE(r1.order() == 1);
  CHECK(r1.nodes[0] == 0.0);
  CHECK(r1.weights[0] == doctest::Approx(2.0).epsilon(1e-15));

  const QuadratureRule r2 = gauss_legendre(2);
  CHECK(r2.nodes[0] == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.nodes[1] == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-15));
  CHECK(r2.weights[0] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r2.weights[1] == doctest::Approx(1.0).epsilon(1e-15));

  const QuadratureRule r8 = gauss_legendre(8);
  const double i6 = integrate([](double x) { return std::pow(x, 6); }, -1.0, 1.0, r8);
  CHECK(std::abs(i6 - 2.0 / 7.0) < 1e-14);
}

TEST_CASE("gauss_legendre rule invariants for every supported order") {
  for (int m = 1; m <= kMaxGaussLegendreOrder; ++m) {
    CAPTURE(m);
    const QuadratureRule r = gauss_legendre(m);
    double wsum = 0.0;
    for (std::size_t i = 0; i < r.order(); ++i) {
      CHECK(r.weights[i] > 0.0);
      CHECK(r.nodes[i] > -1.0);
      CHECK(r.nodes[i] < 1.0);
      CHECK(r.nodes[i] == -r.nodes[r.order() - 1 - i]);
      wsum += r.weights[i];
    }
    CHECK(std::abs(wsum - 2.0) < 1e-14);
    for (int j = 0; j <= 2 * m - 1; ++j) {
      const auto mono = [j](double x) { return std::pow(x, j); };
      const double exact = j % 2 == 0 ? 2.0 / (j + 1) : 0.0;
      const double got = integrate(mono, -1.0, 1.0, r);
      // Relative to the exact value for even j, absolute (scaled by 2) for odd j.
      const double scale = j % 2 == 0 ? exact : 2.0;
      CHECK(std::abs(got - exact) < 1e-13 * scale);
    }
  }
}

TEST_CASE("gauss_legendre rejects unsupported orders") {
  CHECK_THROWS_AS(gauss_legendre(0), UnsupportedOrder);
  CHECK_THROWS_AS(gauss_legendre(65), UnsupportedOrder);
}

TEST_CASE("integrate: orientation, degenerate interval, exact antiderivative") {
  const QuadratureRule r = gauss_legendre(8);
  const auto c = [](double y) { return std::cos(pi * y); };
  CHECK(std::abs(integrate(c, 0.0, 0.5, r) - 1.0 / pi) < 1e-12);
  CHECK(integrate(c, 0.3, 0.3, r) == 0.0);
  CHECK(integrate(c, 0.5, 0.0, r) == -integrate(c, 0.0, 0.5, r));
}

TEST_CASE("integrate agrees with a ten-times finer subdivision") {
  const QuadratureRule r = gauss_legendre(8);
  const auto f = [](double y) { return std::cos(pi * y) / (2.5 - y); };
  const double coarse = integrate(f, 0.0, 0.05, r);
  const double fine = integrate_composite(f, 0.0, 0.05, 10, r);
  CHECK(std::abs(coarse - fine) < 1e-15);
  const auto adaptive = integrate_adaptive(f, 0.0, 0.05, 1e-16, r);
  CHECK(std::abs(coarse - adaptive.value) < 1e-15);
}

TEST_CASE("integrate is linear and additive") {
  const QuadratureRule r = gauss_legendre(8);
  const auto f = [](double x) { return std::exp(x) * std::sin(3 * x); };
  const auto g = [](double x) { return 1.0 / (1.0 + x * x); };
  const double a = 0.2;
  const double b = 0.9;
  const double lin = integrate([&](double x) { return 2.0 * f(x) - 3.0 * g(x); }, a, b, r);
  CHECK(std::abs(lin - (2.0 * integrate(f, a, b, r) - 3.0 * integrate(g, a, b, r))) < 1e-12);
  const double whole = integrate_composite(f, a, b, 4, r);
  const double split = integrate_composite(f, a, 0.5, 2, r) + integrate_composite(f, 0.5, b, 2, r);
  CHECK(std::abs(whole - split) < 1e-12);
}

TEST_CASE("integrate reports non-finite integrands") {
  const QuadratureRule r = gauss_legendre(4);
  CHECK_THROWS_AS(integrate([](double) { return std::numeric_limits<double>::quiet_NaN(); }, 0.0, 1.0, r),
                  NonFiniteIntegrand);
  CHECK_THROWS_AS(integrate([](double x) { return 1.0 / (x - x); }, 0.0, 1.0, r), NonFiniteIntegrand);
}

TEST_CASE("integrate_adaptive handles a kink") {
  const QuadratureRule r = gauss_legendre(8);
  const auto res = integrate_adaptive([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, 1e-12, r);
  CHECK(std::abs(res.value - (0.045 + 0.245)) < 1e-11);
  CHECK_FALSE(res.reached_max_depth);
}

TEST_CASE("sine_integral special values") {
  CHECK(sine_integral(0.0) == 0.0);
  CHECK(std::abs(sine_integral(pi / 2) - si_oracle(pi / 2)) < 1e-13);
  CHECK(std::abs(sine_integral(pi / 2) - 1.37076216815) < 1e-10);
  CHECK(std::abs(sine_integral(1e6) - pi / 2) < 2e-6);
}

TEST_CASE("sine_integral is odd") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-200.0, 200.0);
  for (int i = 0; i < 200; ++i) {
    const double t = u(rng);
    CHECK(sine_integral(-t) == -sine_integral(t));
  }
}

TEST_CASE("sine_integral matches the quadrature oracle on [-50, 50]") {
  double worst = 0.0;
  for (int i = -2000; i <= 2000; ++i) {
    const double t = 0.025 * i;
    worst = std::max(worst, std::abs(sine_integral(t) - si_oracle(t)));
  }
  // Both sides of the series / continued-fraction switch at |t| = 4.
  for (double t : {3.999999, 4.0, 4.000001}) worst = std::max(worst, std::abs(sine_integral(t) - si_oracle(t)));
  CHECK(worst < 1e-10);
}
