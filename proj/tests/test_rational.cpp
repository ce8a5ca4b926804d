#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "dcr/errors.hpp"
#include "dcr/rational.hpp"

using dcr::Rational;

TEST_CASE("parse_decimal handles plain literals") {
  CHECK(dcr::parse_decimal("3") == Rational(3));
  CHECK(dcr::parse_decimal("-0.85") == Rational(-85, 100));
  CHECK(dcr::parse_decimal("12.5") == Rational(25, 2));
  CHECK(dcr::parse_decimal("0") == Rational(0));
  CHECK(dcr::parse_decimal("0.0000000001") == Rational(1, 10000000000LL));
}

TEST_CASE("parse_decimal rejects junk") {
  CHECK_THROWS_AS(dcr::parse_decimal(""), dcr::error);
  CHECK_THROWS_AS(dcr::parse_decimal("1.2.3"), dcr::error);
  CHECK_THROWS_AS(dcr::parse_decimal("1e5"), dcr::error);
  CHECK_THROWS_AS(dcr::parse_decimal("abc"), dcr::error);
  CHECK_THROWS_AS(dcr::parse_decimal("--1"), dcr::error);
}

TEST_CASE("render_decimal trims and rounds half-even") {
  CHECK(dcr::render_decimal(Rational(3)) == "3");
  CHECK(dcr::render_decimal(Rational(25, 2)) == "12.5");
  CHECK(dcr::render_decimal(Rational(-85, 100)) == "-0.85");
  // Half-even at 2 places: 0.125 -> 0.12, 0.135 -> 0.14.
  CHECK(dcr::render_decimal(Rational(125, 1000), 2) == "0.12");
  CHECK(dcr::render_decimal(Rational(135, 1000), 2) == "0.14");
  // Thirds truncate at the place limit.
  CHECK(dcr::render_decimal(Rational(1, 3), 4) == "0.3333");
  CHECK(dcr::render_decimal(Rational(2, 3), 4) == "0.6667");
}

TEST_CASE("is_integer") {
  CHECK(dcr::is_integer(Rational(7)));
  CHECK(dcr::is_integer(Rational(-7)));
  CHECK(dcr::is_integer(Rational(14, 2)));
  CHECK_FALSE(dcr::is_integer(Rational(1, 2)));
}

TEST_CASE("parse-render round trip on random fixed-point values") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 500; ++i) {
    std::int64_t units = static_cast<std::int64_t>(rng() % 2000000) - 1000000;
    int exponent = static_cast<int>(rng() % 10);
    Rational denominator = 1;
    for (int d = 0; d < exponent; ++d) denominator *= 10;
    Rational value = Rational(units) / denominator;
    CHECK(dcr::parse_decimal(dcr::render_decimal(value)) == value);
  }
}
