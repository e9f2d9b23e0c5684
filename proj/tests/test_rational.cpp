#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "ldic/rational.hpp"

using ldic::Rational;

TEST_CASE("construction normalizes") {
  CHECK(Rational(6, 8) == Rational(3, 4));
  CHECK(Rational(-6, 8) == Rational(-3, 4));
  // den is always positive after normalization
  CHECK(Rational(1, -2) == Rational(-1, 2));
  CHECK(Rational(1, -2).den() == 2);
  CHECK(Rational(-4, -2) == Rational(2));
  CHECK(Rational(0, 7) == Rational(0));
  CHECK(Rational(0, 7).den() == 1);
  CHECK_THROWS_AS(Rational(1, 0), std::exception);
}

TEST_CASE("parse accepts integers, fractions, exact decimals") {
  CHECK(Rational::parse("3") == Rational(3));
  CHECK(Rational::parse("-3") == Rational(-3));
  CHECK(Rational::parse("3/4") == Rational(3, 4));
  CHECK(Rational::parse("-3/4") == Rational(-3, 4));
  CHECK(Rational::parse("6/8") == Rational(3, 4));
  CHECK(Rational::parse("0.25") == Rational(1, 4));
  CHECK(Rational::parse("2.50") == Rational(5, 2));
  // exact decimal semantics: 0.1 is one tenth, not the nearest double
  CHECK(Rational::parse("0.1") == Rational(1, 10));
  CHECK(Rational::parse("0.1") * Rational(10) == Rational(1));
  CHECK(Rational::parse("0") == Rational(0));
}

TEST_CASE("parse rejects junk") {
  CHECK_THROWS_AS(Rational::parse(""), std::exception);
  CHECK_THROWS_AS(Rational::parse("abc"), std::exception);
  CHECK_THROWS_AS(Rational::parse("1/0"), std::exception);
  CHECK_THROWS_AS(Rational::parse("1/2/3"), std::exception);
  CHECK_THROWS_AS(Rational::parse("1.2.3"), std::exception);
}

TEST_CASE("arithmetic") {
  CHECK(Rational(1, 6) + Rational(1, 3) == Rational(1, 2));
  CHECK(Rational(1, 2) - Rational(3, 4) == Rational(-1, 4));
  CHECK(Rational(3, 4) * Rational(2, 3) == Rational(1, 2));
  CHECK(Rational(1, 2) / Rational(1, 4) == Rational(2));
  CHECK(-Rational(1, 2) == Rational(-1, 2));
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::exception);

  Rational acc(0);
  for (int i = 0; i < 10; ++i) acc += Rational(1, 10);
  CHECK(acc == Rational(1));
}

TEST_CASE("overflow throws instead of wrapping") {
  Rational big(INT64_MAX);
  CHECK_THROWS_AS(big + Rational(1), std::overflow_error);
  Rational large(std::int64_t(1) << 40);
  CHECK_THROWS_AS(large * large, std::overflow_error);
}

TEST_CASE("ordering and helpers") {
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(1, 2) < Rational(2, 3));
  CHECK(Rational(-1, 2) < Rational(0));
  CHECK(Rational(1, 2) <= Rational(1, 2));
  CHECK(Rational(2, 3) >= Rational(1, 2));
  CHECK(ldic::min(Rational(1, 3), Rational(1, 2)) == Rational(1, 3));
  CHECK(ldic::max(Rational(1, 3), Rational(1, 2)) == Rational(1, 2));
  CHECK(ldic::pos(Rational(-5, 2)) == Rational(0));
  CHECK(ldic::pos(Rational(5, 2)) == Rational(5, 2));
  CHECK(Rational(-3, 4).abs() == Rational(3, 4));
  CHECK(Rational(3, 4).sign() == 1);
  CHECK(Rational(0).sign() == 0);
  CHECK(Rational(-1, 4).sign() == -1);
}

TEST_CASE("rendering") {
  CHECK(Rational(5).str() == "5");
  CHECK(Rational(-5).str() == "-5");
  CHECK(Rational(3, 4).str() == "3/4");
  CHECK(Rational(-3, 4).str() == "-3/4");
  CHECK(Rational(1, 2).to_double() == doctest::Approx(0.5));
  std::ostringstream os;
  os << Rational(7, 3);
  CHECK(os.str() == "7/3");
  // str round-trips through parse
  CHECK(Rational::parse(Rational(22, 7).str()) == Rational(22, 7));
}

TEST_CASE("hash agrees on equal values") {
  std::hash<Rational> h;
  CHECK(h(Rational(1, 2)) == h(Rational(2, 4)));
  CHECK(h(Rational(0)) == h(Rational(0, 5)));
}
