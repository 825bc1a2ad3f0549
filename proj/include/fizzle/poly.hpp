#pragma once

#include <utility>
#include <vector>

#include "fizzle/rat.hpp"

namespace fizzle {

// Dense polynomial with exact rational coefficients; index j holds the
// coefficient of x^j. Normal form: empty (the zero polynomial) or a
// nonzero final entry.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Rat> coeffs);

  static Poly constant(const Rat& c);
  static Poly variable();  // x

  bool is_zero() const { return c_.empty(); }
  bool is_constant() const { return c_.size() <= 1; }
  // Degree of the zero polynomial is reported as -1.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  Rat coeff(std::size_t j) const { return j < c_.size() ? c_[j] : Rat(0); }
  const std::vector<Rat>& coeffs() const { return c_; }

  Rat eval(const Rat& x) const;  // Horner
  Poly derivative() const;
  Poly scaled(const Rat& k) const;
  Poly shifted_up(unsigned k) const;  // multiply by x^k

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a);
  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

 private:
  void trim();
  std::vector<Rat> c_;
};

// Coefficients b with p(c + t) = sum_j b_j t^j identically:
// b_j = sum_{k>=j} a_k C(k,j) c^(k-j), binomials by Pascal recurrence.
// b_0 = p(c) and the degree is preserved.
Poly taylor_shift(const Poly& p, const Rat& c);

// (b, B) with b = taylor_shift(p, c) and B = sum_{j>=1} |b_j|.
// Throws MathError for constant p (B would be 0; no scaling exists
// or is needed there).
std::pair<Poly, Rat> centered_tail_bound(const Poly& p, const Rat& c);

// Quotient of two polynomials. The denominator is never the zero
// polynomial; no silent cancellation happens (values are stored exactly
// as constructed).
struct RatFunc {
  Poly num;
  Poly den;

  RatFunc() : num(), den(Poly::constant(Rat(1))) {}
  RatFunc(Poly n, Poly d);  // throws MathError when d is the zero polynomial

  Rat eval(const Rat& x) const;  // throws PoleError when den(x) = 0
  bool defined_at(const Rat& x) const { return !den.eval(x).is_zero(); }

  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num == b.num && a.den == b.den;
  }
};

// g(t) = f(c + t) - L as an exact, unsimplified quotient in t. The
// numerator and denominator come from taylor_shift; when L = f(c) the
// numerator's constant term is 0. Throws PoleError when den(c) = 0.
RatFunc centered_difference(const RatFunc& f, const Rat& c, const Rat& L);

// g(t) = f(1/t): reverse both coefficient sequences and clear the common
// power of t. g agrees with f(1/t) at every t != 0 where both are defined.
RatFunc infinity_substitute(const RatFunc& f);

}  // namespace fizzle
