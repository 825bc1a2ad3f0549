#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "fizzle/numeric.hpp"
#include "fizzle/poly.hpp"

namespace fizzle {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

// Abstract syntax tree over: the variable, rational constants, + - * /,
// nonnegative integer powers, and sin application.
struct Expr {
  enum class Kind { Var, Const, Add, Sub, Mul, Div, Pow, Sin };

  Kind kind = Kind::Var;
  Rat value;       // Const
  ExprPtr a, b;    // operands (Sin and Pow use a only)
  unsigned exponent = 0;

  static ExprPtr var();
  static ExprPtr constant(Rat v);
  static ExprPtr add(ExprPtr l, ExprPtr r);
  static ExprPtr sub(ExprPtr l, ExprPtr r);
  static ExprPtr mul(ExprPtr l, ExprPtr r);
  static ExprPtr div(ExprPtr l, ExprPtr r);
  static ExprPtr pow(ExprPtr base, unsigned n);
  static ExprPtr sin(ExprPtr arg);
};

bool expr_equal(const ExprPtr& a, const ExprPtr& b);
bool contains_sin(const ExprPtr& e);

// Canonical, reparseable rendering: parse_expression(print_expr(e)) is
// structurally equal to e.
std::string print_expr(const ExprPtr& e);

// Grammar:
//   expr   := term (("+"|"-") term)*
//   term   := factor (("*"|"/") factor)*
//   factor := atom ("^" nonneg-integer)?
//   atom   := "x" | rational | "sin" "(" expr ")" | "(" expr ")"
//   rational := integer ("/" positive-integer)?
// Whitespace is insignificant; "^" binds tighter than "*", which binds
// tighter than "+". Throws SyntaxError (with byte offset) or
// UnsupportedError for function names other than sin.
ExprPtr parse_expression(std::string_view src);

// Replace every occurrence of the variable by the given expression.
ExprPtr substitute_var(const ExprPtr& e, const ExprPtr& replacement);

// Exact evaluation; throws PoleError on division by zero and
// UnsupportedError if a sin node is present.
Rat eval_expr_exact(const ExprPtr& e, const Rat& x);

// Rigorous interval evaluation; sin nodes go through sin_enclosure at the
// given degree. Throws PoleError on an exact pole, IndeterminateError when
// a divisor interval straddles zero, EnclosureRangeError outside |t| <= 2.
Interval eval_expr_interval(const ExprPtr& e, const Rat& x, unsigned sin_degree);

// Interval evaluation could not decide; retry at higher degree.
struct IndeterminateError : Error {
  using Error::Error;
};

enum class LoweredKind { Polynomial, Rational, SinPattern };

struct Lowered {
  LoweredKind kind;
  Poly poly;    // Polynomial
  RatFunc rf;   // Rational
};

// Lower a sin-free expression to an exact rational function (products
// expanded); nullopt when the expression contains sin.
std::optional<RatFunc> lower_rational(const ExprPtr& e);

// Classify as Polynomial, Rational, or sin pattern (a +/-/*//^ tree whose
// leaves are rational functions and sin applications with sin-free
// arguments, divisors sin-free). Anything else throws UnsupportedError.
Lowered lower_expr(const ExprPtr& e);

ExprPtr poly_to_expr(const Poly& p);
ExprPtr ratfunc_to_expr(const RatFunc& f);

}  // namespace fizzle
