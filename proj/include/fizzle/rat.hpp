#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "fizzle/errors.hpp"

namespace fizzle {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational number. Canonical form is enforced on construction:
// denominator > 0 and gcd(|numerator|, denominator) = 1, so equality is
// structural. Every operation is exact; nothing here ever rounds.
class Rat {
 public:
  Rat() : num_(0), den_(1) {}
  Rat(long long n) : num_(n), den_(1) {}
  Rat(const BigInt& n) : num_(n), den_(1) {}
  Rat(BigInt num, BigInt den);  // throws MathError when den == 0

  const BigInt& num() const { return num_; }
  const BigInt& den() const { return den_; }

  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return den_ == 1; }
  int sign() const { return num_ == 0 ? 0 : (num_ > 0 ? 1 : -1); }

  Rat abs() const;
  Rat reciprocal() const;  // throws MathError on zero
  Rat pow(unsigned k) const;

  // Renders as "p/q", or "p" when q = 1. parse accepts the same grammar.
  std::string str() const;
  static std::optional<Rat> parse(std::string_view s);

  // 10^k for any integer k (exact; negative k gives 1/10^|k|).
  static Rat pow10(int k);

  friend Rat operator+(const Rat& a, const Rat& b);
  friend Rat operator-(const Rat& a, const Rat& b);
  friend Rat operator*(const Rat& a, const Rat& b);
  friend Rat operator/(const Rat& a, const Rat& b);  // throws MathError on /0
  friend Rat operator-(const Rat& a);

  Rat& operator+=(const Rat& o) { return *this = *this + o; }
  Rat& operator-=(const Rat& o) { return *this = *this - o; }
  Rat& operator*=(const Rat& o) { return *this = *this * o; }
  Rat& operator/=(const Rat& o) { return *this = *this / o; }

  friend bool operator==(const Rat& a, const Rat& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rat& a, const Rat& b) { return !(a == b); }
  friend bool operator<(const Rat& a, const Rat& b) {
    return a.num_ * b.den_ < b.num_ * a.den_;
  }
  friend bool operator>(const Rat& a, const Rat& b) { return b < a; }
  friend bool operator<=(const Rat& a, const Rat& b) { return !(b < a); }
  friend bool operator>=(const Rat& a, const Rat& b) { return !(a < b); }

 private:
  void normalize();

  BigInt num_;
  BigInt den_;  // > 0
};

inline Rat min(const Rat& a, const Rat& b) { return a <= b ? a : b; }
inline Rat max(const Rat& a, const Rat& b) { return a >= b ? a : b; }

std::ostream& operator<<(std::ostream& os, const Rat& r);

}  // namespace fizzle
