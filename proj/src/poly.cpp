#include "fizzle/poly.hpp"

#include <algorithm>

#include "fizzle/errors.hpp"

namespace fizzle {

Poly::Poly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

void Poly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

Poly Poly::constant(const Rat& c) {
  return c.is_zero() ? Poly() : Poly({c});
}

Poly Poly::variable() { return Poly({Rat(0), Rat(1)}); }

Rat Poly::eval(const Rat& x) const {
  Rat acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Poly Poly::derivative() const {
  if (c_.size() <= 1) return Poly();
  std::vector<Rat> d(c_.size() - 1);
  for (std::size_t j = 1; j < c_.size(); ++j) d[j - 1] = Rat(BigInt(j)) * c_[j];
  return Poly(std::move(d));
}

Poly Poly::scaled(const Rat& k) const {
  if (k.is_zero()) return Poly();
  std::vector<Rat> s(c_);
  for (auto& coeff : s) coeff *= k;
  return Poly(std::move(s));
}

Poly Poly::shifted_up(unsigned k) const {
  if (is_zero() || k == 0) return *this;
  std::vector<Rat> s(c_.size() + k, Rat(0));
  std::copy(c_.begin(), c_.end(), s.begin() + k);
  return Poly(std::move(s));
}

Poly operator+(const Poly& a, const Poly& b) {
  std::vector<Rat> s(std::max(a.c_.size(), b.c_.size()), Rat(0));
  for (std::size_t j = 0; j < s.size(); ++j) s[j] = a.coeff(j) + b.coeff(j);
  return Poly(std::move(s));
}

Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

Poly operator-(const Poly& a) { return a.scaled(Rat(-1)); }

Poly operator*(const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Rat> s(a.c_.size() + b.c_.size() - 1, Rat(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) s[i + j] += a.c_[i] * b.c_[j];
  return Poly(std::move(s));
}

Poly taylor_shift(const Poly& p, const Rat& c) {
  if (p.is_zero()) return p;
  const auto n = static_cast<std::size_t>(p.degree());

  // Pascal triangle of C(k, j) as exact integers, row by row.
  std::vector<std::vector<BigInt>> choose(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    choose[k].assign(k + 1, BigInt(1));
    for (std::size_t j = 1; j < k; ++j)
      choose[k][j] = choose[k - 1][j - 1] + choose[k - 1][j];
  }

  std::vector<Rat> cpow(n + 1, Rat(1));  // c^i
  for (std::size_t i = 1; i <= n; ++i) cpow[i] = cpow[i - 1] * c;

  std::vector<Rat> b(n + 1, Rat(0));
  for (std::size_t j = 0; j <= n; ++j)
    for (std::size_t k = j; k <= n; ++k)
      b[j] += p.coeff(k) * Rat(choose[k][j]) * cpow[k - j];
  return Poly(std::move(b));
}

std::pair<Poly, Rat> centered_tail_bound(const Poly& p, const Rat& c) {
  if (p.is_constant())
    throw MathError("centered tail bound of a constant polynomial");
  Poly b = taylor_shift(p, c);
  Rat total(0);
  for (int j = 1; j <= b.degree(); ++j) total += b.coeff(j).abs();
  return {std::move(b), std::move(total)};
}

RatFunc::RatFunc(Poly n, Poly d) : num(std::move(n)), den(std::move(d)) {
  if (den.is_zero()) throw MathError("rational function with zero denominator polynomial");
}

Rat RatFunc::eval(const Rat& x) const {
  Rat d = den.eval(x);
  if (d.is_zero()) throw PoleError("pole at " + x.str());
  return num.eval(x) / d;
}

RatFunc centered_difference(const RatFunc& f, const Rat& c, const Rat& L) {
  Poly dnum = taylor_shift(f.den, c);
  if (dnum.coeff(0).is_zero())
    throw PoleError("denominator vanishes at the center " + c.str());
  Poly nnum = taylor_shift(f.num, c) - dnum.scaled(L);
  return RatFunc(std::move(nnum), std::move(dnum));
}

RatFunc infinity_substitute(const RatFunc& f) {
  auto reversed = [](const Poly& p) {
    std::vector<Rat> r(p.coeffs().rbegin(), p.coeffs().rend());
    return Poly(std::move(r));
  };
  if (f.num.is_zero()) return RatFunc(Poly(), Poly::constant(Rat(1)));
  const int dp = f.num.degree();
  const int dq = f.den.degree();
  Poly rp = reversed(f.num);
  Poly rq = reversed(f.den);
  if (dq >= dp) return RatFunc(rp.shifted_up(static_cast<unsigned>(dq - dp)), std::move(rq));
  return RatFunc(std::move(rp), rq.shifted_up(static_cast<unsigned>(dp - dq)));
}

}  // namespace fizzle
