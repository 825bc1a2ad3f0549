#include "fizzle/numeric.hpp"

#include <algorithm>

namespace fizzle {

Interval::Interval(Rat lo_, Rat hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
  if (hi < lo) throw MathError("interval with lo > hi");
}

Interval operator+(const Interval& a, const Interval& b) {
  return Interval(a.lo + b.lo, a.hi + b.hi);
}

Interval operator-(const Interval& a, const Interval& b) {
  return Interval(a.lo - b.hi, a.hi - b.lo);
}

Interval operator-(const Interval& a) { return Interval(-a.hi, -a.lo); }

Interval operator*(const Interval& a, const Interval& b) {
  Rat p1 = a.lo * b.lo;
  Rat p2 = a.lo * b.hi;
  Rat p3 = a.hi * b.lo;
  Rat p4 = a.hi * b.hi;
  Rat lo = min(min(p1, p2), min(p3, p4));
  Rat hi = max(max(p1, p2), max(p3, p4));
  return Interval(std::move(lo), std::move(hi));
}

Interval abs(const Interval& a) {
  if (a.lo.sign() >= 0) return a;
  if (a.hi.sign() <= 0) return -a;
  return Interval(Rat(0), max(-a.lo, a.hi));
}

Interval operator/(const Interval& a, const Interval& b) {
  if (b.lo.sign() <= 0 && b.hi.sign() >= 0)
    throw MathError("interval division by an interval containing zero");
  return a * Interval(b.hi.reciprocal(), b.lo.reciprocal());
}

Interval pow(const Interval& a, unsigned k) {
  Interval result{Rat(1)};
  for (unsigned i = 0; i < k; ++i) result = result * a;
  return result;
}

Rat root_lower_bound(const Rat& q, unsigned j, unsigned precision_bits) {
  if (q.sign() < 0) throw MathError("root of a negative rational");
  if (j == 0) throw MathError("zeroth root");
  if (precision_bits == 0) throw MathError("root with zero precision bits");
  if (j == 1) return q;
  if (q.is_zero()) return Rat(0);

  // Largest m with m^j * den <= num * 2^(bits*j); the grid rational is
  // m / 2^bits. Maximality delivers (r + 2^-bits)^j > q, and refining the
  // grid can only move r upward.
  const BigInt target = q.num() << (static_cast<std::size_t>(precision_bits) * j);
  const BigInt& den = q.den();
  auto fits = [&](const BigInt& m) {
    return boost::multiprecision::pow(m, j) * den <= target;
  };

  BigInt hi = 1;
  while (fits(hi)) hi <<= 1;
  BigInt lo = hi >> 1;  // fits(lo) holds (or lo == 0)
  while (hi - lo > 1) {
    BigInt mid = (lo + hi) >> 1;
    if (fits(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return Rat(lo, BigInt(1) << precision_bits);
}

Interval sin_enclosure(const Rat& t, unsigned degree) {
  if (t.abs() > Rat(2)) throw EnclosureRangeError("sin enclosure needs |t| <= 2");
  if (degree % 2 == 0 || degree < 1) throw MathError("sin enclosure degree must be odd and >= 1");

  // Partial sums up to degree and degree+2; sin(t) lies between them.
  const unsigned m = (degree - 1) / 2;
  Rat term = t;           // (-1)^i t^(2i+1) / (2i+1)!  at i = 0
  const Rat t2 = t * t;
  Rat sum = term;
  for (unsigned i = 1; i <= m + 1; ++i) {
    term *= t2;
    term = -term / Rat(BigInt(2 * i) * BigInt(2 * i + 1));
    if (i == m + 1) break;
    sum += term;
  }
  Rat next = sum + term;  // term now holds the (m+1)-th summand
  return Interval(min(sum, next), max(sum, next));
}

}  // namespace fizzle
