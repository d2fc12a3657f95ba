#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "hbz/errors.hpp"
#include "hbz/seqspace.hpp"

using namespace hbz;

TEST_CASE("l2_norm basic values") {
  CHECK(l2_norm(CoeffSequence(10)) == 0.0);
  CHECK(l2_norm(CoeffSequence::unit(5, 1)) == 1.0);
  CHECK(l2_norm(CoeffSequence({3.0, 4.0})) == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("l2_norm does not overflow or underflow") {
  CHECK(l2_norm(CoeffSequence({3e200, 4e200})) == doctest::Approx(5e200));
  CHECK(l2_norm(CoeffSequence({3e-200, 4e-200})) == doctest::Approx(5e-200));
}

TEST_CASE("l2_norm is a norm on random inputs") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> len(1, 200);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = static_cast<std::size_t>(len(rng));
    CoeffSequence x(n);
    CoeffSequence y(n);
    for (std::size_t i = 1; i <= n; ++i) {
      x(i) = normal(rng);
      y(i) = normal(rng);
    }
    const double s = normal(rng);
    CHECK(l2_norm(x + y) <= l2_norm(x) + l2_norm(y) + 1e-14);
    CHECK(l2_norm(s * x) == doctest::Approx(std::abs(s) * l2_norm(x)).epsilon(1e-14));
    CHECK(l2_norm(x) > 0.0);
  }
}

TEST_CASE("CoeffSequence rejects non-finite entries") {
  CHECK_THROWS_AS(CoeffSequence({1.0, std::numeric_limits<double>::quiet_NaN()}), InvariantViolation);
  CHECK_THROWS_AS(CoeffSequence({std::numeric_limits<double>::infinity()}), InvariantViolation);
}

TEST_CASE("CoeffSequence is 1-based with an implicit zero tail") {
  CoeffSequence x({1.0, 2.0, 3.0});
  CHECK(x(1) == 1.0);
  CHECK(x(3) == 3.0);
  CHECK(x.at_or_zero(4) == 0.0);
  CHECK(x.at_or_zero(0) == 0.0);
  CHECK(x.resized(5).at_or_zero(5) == 0.0);
  CHECK(l2_norm(x.resized(5)) == l2_norm(x));
}

TEST_CASE("deltas_to_zeros") {
  SUBCASE("zero deltas give the half-integer grid") {
    const ZeroTable z = deltas_to_zeros(CoeffSequence(4));
    CHECK(z(1) == 1.5);
    CHECK(z(2) == 2.5);
    CHECK(z(3) == 3.5);
    CHECK(z(4) == 4.5);
  }
  SUBCASE("delta_1 = 0.6 leaves the cell") {
    CHECK_THROWS_AS(deltas_to_zeros(CoeffSequence({0.6, 0.0})), InvariantViolation);
  }
  SUBCASE("zeros close to a cell boundary are still accepted") {
    const ZeroTable z = deltas_to_zeros(CoeffSequence({-0.4, 0.45}));
    CHECK(z(1) < z(2));
    CHECK_THROWS_AS(ZeroTable({1.6, 1.6}), InvariantViolation);
  }
  SUBCASE("tau_1 >= 1/2 is part of the table contract") {
    CHECK_THROWS_AS(ZeroTable({0.4}), InvariantViolation);
  }
}

TEST_CASE("delta <-> tau round trip") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> small(-0.2, 0.2);
  for (int trial = 0; trial < 50; ++trial) {
    CoeffSequence d(300);
    for (std::size_t n = 1; n <= d.size(); ++n) d(n) = small(rng);
    const ZeroTable z = deltas_to_zeros(d);
    const CoeffSequence back = zeros_to_deltas(z);
    // tau -> delta -> tau is exact; delta -> tau -> delta is exact up to one ulp of tau.
    const ZeroTable again = deltas_to_zeros(back);
    for (std::size_t n = 1; n <= d.size(); ++n) {
      CHECK(again(n) == z(n));
      const double ulp = std::nextafter(z(n), 1e300) - z(n);
      CHECK(std::abs(back(n) - d(n)) <= ulp);
    }
  }
}
