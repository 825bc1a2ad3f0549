#include "fizzle/rat.hpp"

#include <cctype>

namespace fizzle {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  }
  return true;
}

}  // namespace

Rat::Rat(BigInt num, BigInt den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_ == 0) throw MathError("rational with zero denominator");
  normalize();
}

void Rat::normalize() {
  if (den_ < 0) {
    num_ = -num_;
    den_ = -den_;
  }
  if (num_ == 0) {
    den_ = 1;
    return;
  }
  BigInt g = boost::multiprecision::gcd(boost::multiprecision::abs(num_), den_);
  if (g > 1) {
    num_ /= g;
    den_ /= g;
  }
}

Rat Rat::abs() const { return num_ >= 0 ? *this : -*this; }

Rat Rat::reciprocal() const {
  if (num_ == 0) throw MathError("reciprocal of zero");
  return Rat(den_, num_);
}

Rat Rat::pow(unsigned k) const {
  Rat base = *this;
  Rat result(1);
  while (k > 0) {
    if (k & 1u) result *= base;
    base *= base;
    k >>= 1u;
  }
  return result;
}

std::string Rat::str() const {
  std::string s = num_.str();
  if (den_ != 1) {
    s += "/";
    s += den_.str();
  }
  return s;
}

std::optional<Rat> Rat::parse(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string_view num_part = s;
  std::string_view den_part;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    num_part = s.substr(0, slash);
    den_part = s.substr(slash + 1);
    if (!all_digits(den_part)) return std::nullopt;
  }
  if (!all_digits(num_part)) return std::nullopt;
  BigInt num{std::string(num_part)};
  BigInt den = den_part.empty() ? BigInt(1) : BigInt{std::string(den_part)};
  if (den == 0) return std::nullopt;
  if (negative) num = -num;
  return Rat(num, den);
}

Rat Rat::pow10(int k) {
  BigInt p = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(k < 0 ? -k : k));
  return k >= 0 ? Rat(p) : Rat(BigInt(1), p);
}

Rat operator+(const Rat& a, const Rat& b) {
  return Rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rat operator-(const Rat& a, const Rat& b) {
  return Rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rat operator*(const Rat& a, const Rat& b) {
  return Rat(a.num_ * b.num_, a.den_ * b.den_);
}

Rat operator/(const Rat& a, const Rat& b) {
  if (b.num_ == 0) throw MathError("division by zero");
  return Rat(a.num_ * b.den_, a.den_ * b.num_);
}

Rat operator-(const Rat& a) { return Rat(-a.num_, a.den_); }

std::ostream& operator<<(std::ostream& os, const Rat& r) {
  return os << r.str();
}

}  // namespace fizzle
