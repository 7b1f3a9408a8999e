#include <doctest.h>

#include "multising/rational.hpp"

using multising::Rational;

TEST_CASE("construction normalizes sign and gcd") {
  CHECK(Rational(6, 4) == Rational(3, 2));
  CHECK(Rational(-6, 4) == Rational(-3, 2));
  CHECK(Rational(6, -4) == Rational(-3, 2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(5, 1).str() == "5");
  CHECK(Rational(77, 16).str() == "77/16");
}

TEST_CASE("arithmetic") {
  Rational a(1, 2), b(1, 3);
  CHECK(a + b == Rational(5, 6));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 6));
  CHECK(a / b == Rational(3, 2));
  CHECK((Rational(1) - Rational(1, 6)) == Rational(5, 6));
  CHECK(Rational(2, 3).inverse() == Rational(3, 2));
  CHECK(Rational(5, 6).to_double() == doctest::Approx(5.0 / 6.0).epsilon(1e-15));
}

TEST_CASE("comparisons") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(1, 3));
  CHECK(Rational(2, 4) <= Rational(1, 2));
}

TEST_CASE("overflow is detected, not wrapped") {
  Rational big(INT64_MAX / 2, 1);
  CHECK_THROWS_AS(big * Rational(8), multising::Error);
  CHECK_THROWS_AS(Rational(1, 0), multising::Error);
  CHECK_THROWS_AS(Rational(0).inverse(), multising::Error);
}

TEST_CASE("wide intermediates reduce before the range check") {
  // (2^40/3) * (3/2^40) exceeds int64 in cross products but reduces to 1
  Rational a(1099511627776LL, 3);
  Rational b(3, 1099511627776LL);
  CHECK(a * b == Rational(1));
}
