#pragma once

#include "fizzle/rat.hpp"

namespace fizzle {

// Closed rational interval [lo, hi]. Operations satisfy containment:
// x in A and y in B imply x op y in A op B.
struct Interval {
  Rat lo;
  Rat hi;

  Interval() = default;
  explicit Interval(const Rat& point) : lo(point), hi(point) {}
  Interval(Rat lo_, Rat hi_);  // throws MathError when lo > hi

  bool contains(const Rat& x) const { return lo <= x && x <= hi; }
  bool contains(const Interval& o) const { return lo <= o.lo && o.hi <= hi; }
  Rat width() const { return hi - lo; }
  bool is_point() const { return lo == hi; }
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval operator-(const Interval& a);
Interval abs(const Interval& a);
// Throws MathError when the divisor contains 0.
Interval operator/(const Interval& a, const Interval& b);
Interval pow(const Interval& a, unsigned k);

// Largest grid rational r = m * 2^-precision_bits with r^j <= q.
// Guarantees r^j <= q < (r + 2^-precision_bits)^j, is monotone
// nondecreasing in q and in precision_bits, and returns q exactly for
// j = 1. Rounds down only: an underestimated root keeps every delta
// built from it valid.
Rat root_lower_bound(const Rat& q, unsigned j, unsigned precision_bits);

// Rigorous enclosure of sin(t) for |t| <= 2, from consecutive alternating
// Taylor partial sums (their magnitudes strictly decrease on this domain,
// so the two sums bracket sin(t)). degree is the odd truncation degree of
// the lower-order sum; the width is |t|^(degree+2)/(degree+2)!.
// Throws EnclosureRangeError when |t| > 2.
Interval sin_enclosure(const Rat& t, unsigned degree);

}  // namespace fizzle
