#include "cupgame/numeric.hpp"
#include "cupgame/rng.hpp"
#include "cupgame/game.hpp"

#include <doctest.h>

#include <set>

using namespace cupgame;

TEST_CASE("rationals parse from fractions, integers and decimals") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-6/8") == Rational(-3, 4));
  CHECK(parse_rational("5") == Rational(5));
  CHECK(parse_rational("0.25") == Rational(1, 4));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), ConfigError);
  CHECK_THROWS_AS(parse_rational("abc"), ConfigError);
  CHECK_THROWS_AS(parse_rational(""), ConfigError);
}

TEST_CASE("rationals always print as num/den") {
  CHECK(format_rational(Rational(3)) == "3/1");
  CHECK(format_rational(Rational(0)) == "0/1");
  CHECK(format_rational(make_rational(-10, 4)) == "-5/2");
  for (const char* text : {"7/3", "-1/9", "123456789/1000"}) {
    CHECK(parse_rational(format_rational(parse_rational(text))) == parse_rational(text));
  }
}

TEST_CASE("anchor split sizes") {
  CHECK(anchor_size(16, Rational(1, 2)) == 8);
  CHECK(anchor_size(5, Rational(1, 2)) == 3);
  CHECK(non_anchor_size(5, Rational(1, 2)) == 2);
  CHECK(anchor_size(64, Rational(1, 4)) == 16);
  CHECK(anchor_size(10, Rational(1, 3)) == 4);
  CHECK(anchor_size(1, Rational(1, 256)) == 1);
}

TEST_CASE("harmonic gain and flatness targets") {
  CHECK(harmonic_gain(0) == 0);
  CHECK(harmonic_gain(1) == 0);
  CHECK(harmonic_gain(2) == Rational(1, 2));
  CHECK(harmonic_gain(4) == Rational(13, 12));
  CHECK(flat_range(Rational(0)) == 4);
  CHECK(flat_range(Rational(1, 2)) == 5);
  CHECK(flat_range(Rational(1)) == 6);
}

TEST_CASE("ceil and floor") {
  CHECK(ceil_div(Rational(7, 2)) == 4);
  CHECK(ceil_div(Rational(4)) == 4);
  CHECK(ceil_div(Rational(-7, 2)) == -3);
  CHECK(floor_of(Rational(-7, 2)) == -4);
  CHECK(pow(Rational(3, 2), 3) == Rational(27, 8));
}

TEST_CASE("rng streams are replayable and independent") {
  Rng a(42, 3, Stream::filler), b(42, 3, Stream::filler);
  for (int i = 0; i < 100; ++i) CHECK(a() == b());

  Rng f(42, 3, Stream::filler), e(42, 3, Stream::emptier), t(42, 4, Stream::filler);
  int same_e = 0, same_t = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = f(), y = e(), z = t();
    same_e += x == y;
    same_t += x == z;
  }
  CHECK(same_e == 0);
  CHECK(same_t == 0);
}

TEST_CASE("rng draws a stream independent of how many draws other streams made") {
  Rng lone(9, 0, Stream::filler);
  const auto first = lone();
  Rng busy_other(9, 0, Stream::emptier);
  for (int i = 0; i < 1000; ++i) busy_other();
  Rng again(9, 0, Stream::filler);
  CHECK(again() == first);
}

TEST_CASE("bounded draws stay in range and cover it") {
  Rng r(1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const auto v = r.below(7);
    CHECK(v < 7);
    seen.insert(v);
    const auto w = r.between(3, 5);
    CHECK(w >= 3);
    CHECK(w <= 5);
  }
  CHECK(seen.size() == 7);
  CHECK(r.draws() > 0);
}

TEST_CASE("bernoulli respects its edge probabilities and rough frequency") {
  Rng r(5);
  int hits = 0;
  for (int i = 0; i < 1000; ++i) {
    CHECK_FALSE(r.bernoulli(Rational(0)));
    CHECK(r.bernoulli(Rational(1)));
    hits += r.bernoulli(Rational(1, 4));
  }
  CHECK(hits > 180);
  CHECK(hits < 320);
}
