#include <doctest.h>

#include <random>

#include "fizzle/errors.hpp"
#include "fizzle/numeric.hpp"

using namespace fizzle;

namespace {

Rat rat(long long n, long long d = 1) { return Rat(BigInt(n), BigInt(d)); }

std::mt19937_64 rng(20240811);

Rat random_rat(long long span = 20) {
  long long num = static_cast<long long>(rng() % (2 * span + 1)) - span;
  long long den = static_cast<long long>(rng() % static_cast<unsigned long long>(span)) + 1;
  return rat(num, den);
}

}  // namespace

TEST_CASE("rationals are canonical and exact") {
  CHECK(rat(2, 4) == rat(1, 2));
  CHECK(rat(-2, -4) == rat(1, 2));
  CHECK(rat(2, -4) == rat(-1, 2));
  CHECK(rat(0, 7) == rat(0));
  CHECK(rat(2, 4).num() == 1);
  CHECK(rat(2, 4).den() == 2);

  CHECK(rat(1, 3) + rat(1, 6) == rat(1, 2));
  CHECK(rat(1, 3) - rat(1, 2) == rat(-1, 6));
  CHECK(rat(2, 3) * rat(9, 4) == rat(3, 2));
  CHECK(rat(1, 3) / rat(2, 9) == rat(3, 2));
  CHECK(rat(-3, 7).abs() == rat(3, 7));
  CHECK(rat(2, 3).pow(3) == rat(8, 27));
  CHECK(rat(1, 10) < rat(1, 9));
  CHECK_THROWS_AS(rat(1) / rat(0), MathError);
  CHECK_THROWS_AS(Rat(BigInt(1), BigInt(0)), MathError);
}

TEST_CASE("rational parse/print round trip") {
  CHECK(rat(3, 5).str() == "3/5");
  CHECK(rat(-3, 5).str() == "-3/5");
  CHECK(rat(7).str() == "7");
  CHECK(Rat::parse("3/5") == rat(3, 5));
  CHECK(Rat::parse("-22") == rat(-22));
  CHECK(Rat::parse("0") == rat(0));
  CHECK(!Rat::parse("1/0").has_value());
  CHECK(!Rat::parse("a/2").has_value());
  CHECK(!Rat::parse("").has_value());
  CHECK(Rat::pow10(-2) == rat(1, 100));
  CHECK(Rat::pow10(2) == rat(100));

  for (int i = 0; i < 200; ++i) {
    Rat r = random_rat(1000);
    CHECK(Rat::parse(r.str()) == r);
  }
}

TEST_CASE("root lower bound: exact cases") {
  CHECK(root_lower_bound(rat(9, 4), 2, 32) == rat(3, 2));
  CHECK(root_lower_bound(rat(0), 5, 32) == rat(0));
  CHECK(root_lower_bound(rat(7, 3), 1, 8) == rat(7, 3));
}

TEST_CASE("root lower bound brackets the true root") {
  // Independent oracle: replay the defining inequalities exactly.
  Rat r = root_lower_bound(rat(2), 2, 20);
  Rat step = rat(1, 1 << 20);
  CHECK(r.pow(2) <= rat(2));
  CHECK((r + step).pow(2) > rat(2));

  for (int i = 0; i < 200; ++i) {
    Rat q = random_rat(50).abs();
    unsigned j = 1 + rng() % 4;
    unsigned bits = 4 + rng() % 40;
    Rat rr = root_lower_bound(q, j, bits);
    Rat grid = Rat(BigInt(1), BigInt(1) << bits);
    CHECK(rr.sign() >= 0);
    CHECK(rr.pow(j) <= q);
    CHECK((rr + grid).pow(j) > q);
  }
}

TEST_CASE("root lower bound monotonicity") {
  for (int i = 0; i < 100; ++i) {
    Rat q1 = random_rat(30).abs();
    Rat q2 = q1 + random_rat(10).abs();
    unsigned j = 2 + rng() % 3;
    CHECK(root_lower_bound(q1, j, 24) <= root_lower_bound(q2, j, 24));
    CHECK(root_lower_bound(q1, j, 12) <= root_lower_bound(q1, j, 24));
  }
}

TEST_CASE("interval operations satisfy containment") {
  auto random_interval = [&] {
    Rat a = random_rat();
    Rat b = random_rat();
    return Interval(min(a, b), max(a, b));
  };
  auto pick_inside = [&](const Interval& iv) {
    Rat u = rat(static_cast<long long>(rng() % 1025), 1024);
    return iv.lo + (iv.hi - iv.lo) * u;
  };

  int divisions = 0;
  for (int i = 0; i < 10000; ++i) {
    Interval a = random_interval();
    Interval b = random_interval();
    Rat x = pick_inside(a);
    Rat y = pick_inside(b);
    CHECK((a + b).contains(x + y));
    CHECK((a - b).contains(x - y));
    CHECK((a * b).contains(x * y));
    CHECK((-a).contains(-x));
    CHECK(abs(a).contains(x.abs()));
    if (b.lo.sign() > 0 || b.hi.sign() < 0) {
      CHECK((a / b).contains(x / y));
      ++divisions;
    } else {
      CHECK_THROWS_AS(a / b, MathError);
    }
  }
  CHECK(divisions > 1000);
  CHECK_THROWS_AS(Interval(rat(1), rat(0)), MathError);
}

TEST_CASE("sin enclosure matches the alternating partial sums") {
  Interval zero = sin_enclosure(rat(0), 13);
  CHECK(zero.lo == rat(0));
  CHECK(zero.hi == rat(0));

  // Hand oracle for t = 1, degree 9: S4 and S5 from explicit literals.
  Rat s4 = rat(1) - rat(1, 6) + rat(1, 120) - rat(1, 5040) + rat(1, 362880);
  Rat s5 = s4 - rat(1, 39916800);
  Interval e = sin_enclosure(rat(1), 9);
  CHECK(e.lo == s5);
  CHECK(e.hi == s4);
  CHECK(e.width() < Rat::pow10(-5));
}

TEST_CASE("sin enclosure is odd and nested") {
  for (int i = 0; i < 60; ++i) {
    Rat t = rat(static_cast<long long>(rng() % 4001) - 2000, 1000);  // |t| <= 2
    unsigned d = 1 + 2 * (rng() % 6);
    Interval a = sin_enclosure(t, d);
    Interval b = sin_enclosure(-t, d);
    CHECK(a.lo == -b.hi);
    CHECK(a.hi == -b.lo);
    CHECK(a.contains(sin_enclosure(t, d + 2)));
  }
  CHECK_THROWS_AS(sin_enclosure(rat(21, 10), 9), EnclosureRangeError);
  CHECK_THROWS_AS(sin_enclosure(rat(1), 8), MathError);
}
