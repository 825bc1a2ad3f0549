#include "fizzle/expr.hpp"

#include <cctype>

#include "fizzle/errors.hpp"

namespace fizzle {

namespace {

ExprPtr make(Expr e) { return std::make_shared<const Expr>(std::move(e)); }

}  // namespace

ExprPtr Expr::var() {
  static const ExprPtr x = make(Expr{Kind::Var, Rat(0), nullptr, nullptr, 0});
  return x;
}

ExprPtr Expr::constant(Rat v) {
  return make(Expr{Kind::Const, std::move(v), nullptr, nullptr, 0});
}

ExprPtr Expr::add(ExprPtr l, ExprPtr r) {
  return make(Expr{Kind::Add, Rat(0), std::move(l), std::move(r), 0});
}

ExprPtr Expr::sub(ExprPtr l, ExprPtr r) {
  return make(Expr{Kind::Sub, Rat(0), std::move(l), std::move(r), 0});
}

ExprPtr Expr::mul(ExprPtr l, ExprPtr r) {
  return make(Expr{Kind::Mul, Rat(0), std::move(l), std::move(r), 0});
}

ExprPtr Expr::div(ExprPtr l, ExprPtr r) {
  return make(Expr{Kind::Div, Rat(0), std::move(l), std::move(r), 0});
}

ExprPtr Expr::pow(ExprPtr base, unsigned n) {
  return make(Expr{Kind::Pow, Rat(0), std::move(base), nullptr, n});
}

ExprPtr Expr::sin(ExprPtr arg) {
  return make(Expr{Kind::Sin, Rat(0), std::move(arg), nullptr, 0});
}

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Expr::Kind::Var:
      return true;
    case Expr::Kind::Const:
      return a->value == b->value;
    case Expr::Kind::Pow:
      return a->exponent == b->exponent && expr_equal(a->a, b->a);
    case Expr::Kind::Sin:
      return expr_equal(a->a, b->a);
    default:
      return expr_equal(a->a, b->a) && expr_equal(a->b, b->b);
  }
}

bool contains_sin(const ExprPtr& e) {
  if (!e) return false;
  if (e->kind == Expr::Kind::Sin) return true;
  return contains_sin(e->a) || contains_sin(e->b);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Pow:
      return 3;
    default:
      return 4;
  }
}

void print_rec(const ExprPtr& e, int ctx, bool right_side, std::string& out) {
  const int prec = precedence(*e);
  // Parsing is left-associative, so right-nested operands at equal
  // precedence must keep their parentheses to round-trip structurally.
  const bool parens = prec < ctx || (prec == ctx && right_side);
  if (parens) out += "(";
  switch (e->kind) {
    case Expr::Kind::Var:
      out += "x";
      break;
    case Expr::Kind::Const:
      out += e->value.str();
      break;
    case Expr::Kind::Add:
      print_rec(e->a, 1, false, out);
      out += " + ";
      print_rec(e->b, 1, true, out);
      break;
    case Expr::Kind::Sub:
      print_rec(e->a, 1, false, out);
      out += " - ";
      print_rec(e->b, 1, true, out);
      break;
    case Expr::Kind::Mul:
      print_rec(e->a, 2, false, out);
      out += "*";
      print_rec(e->b, 2, true, out);
      break;
    case Expr::Kind::Div: {
      print_rec(e->a, 2, false, out);
      // A numerator ending in a digit followed by "/<positive constant>"
      // would re-tokenize as a single rational literal; parenthesize the
      // denominator exactly there.
      const bool hazard = !out.empty() &&
                          std::isdigit(static_cast<unsigned char>(out.back())) &&
                          e->b->kind == Expr::Kind::Const && e->b->value.sign() > 0;
      out += "/";
      if (hazard) {
        out += "(";
        out += e->b->value.str();
        out += ")";
      } else {
        print_rec(e->b, 2, true, out);
      }
      break;
    }
    case Expr::Kind::Pow: {
      const Expr& base = *e->a;
      bool base_parens = precedence(base) < 4 ||
                         (base.kind == Expr::Kind::Const &&
                          (!base.value.is_integer() || base.value.sign() < 0));
      if (base_parens) out += "(";
      print_rec(e->a, 0, false, out);
      if (base_parens) out += ")";
      out += "^" + std::to_string(e->exponent);
      break;
    }
    case Expr::Kind::Sin:
      out += "sin(";
      print_rec(e->a, 0, false, out);
      out += ")";
      break;
  }
  if (parens) out += ")";
}

}  // namespace

std::string print_expr(const ExprPtr& e) {
  std::string out;
  print_rec(e, 0, false, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  ExprPtr run() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError("unexpected trailing input", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprPtr expr() {
    ExprPtr node = term();
    for (;;) {
      char c = peek();
      if (c == '+') {
        ++pos_;
        node = Expr::add(node, term());
      } else if (c == '-') {
        ++pos_;
        node = Expr::sub(node, term());
      } else {
        return node;
      }
    }
  }

  ExprPtr term() {
    ExprPtr node = factor();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        node = Expr::mul(node, factor());
      } else if (c == '/') {
        ++pos_;
        node = Expr::div(node, factor());
      } else {
        return node;
      }
    }
  }

  ExprPtr factor() {
    ExprPtr base = atom();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      if (pos_ < src_.size() && src_[pos_] == '-')
        throw SyntaxError("negative exponent", pos_);
      return Expr::pow(base, read_unsigned("exponent"));
    }
    return base;
  }

  ExprPtr atom() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      ExprPtr e = expr();
      if (!consume(')')) throw SyntaxError("expected ')'", pos_);
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    if (c == '-' || std::isdigit(static_cast<unsigned char>(c))) return rational();
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
  }

  ExprPtr name() {
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isalnum(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    std::string_view word = src_.substr(start, pos_ - start);
    if (word == "x") return Expr::var();
    if (word == "sin") {
      if (!consume('(')) throw SyntaxError("expected '(' after sin", pos_);
      ExprPtr arg = expr();
      if (!consume(')')) throw SyntaxError("expected ')'", pos_);
      return Expr::sin(arg);
    }
    throw UnsupportedError("unsupported function '" + std::string(word) +
                           "' (at byte " + std::to_string(start) + ")");
  }

  // rational := integer ("/" positive-integer)?; the "/q" part is consumed
  // greedily unless the following integer carries an exponent, in which
  // case "/" is left for the term level so "^" keeps its tighter binding.
  ExprPtr rational() {
    bool negative = false;
    if (src_[pos_] == '-') {
      ++pos_;
      skip_ws();
      if (pos_ >= src_.size() || !std::isdigit(static_cast<unsigned char>(src_[pos_])))
        throw SyntaxError("expected digits after '-'", pos_);
      negative = true;
    }
    BigInt num(read_digits("integer"));
    std::size_t save = pos_;
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '/') {
      ++pos_;
      skip_ws();
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        BigInt den(read_digits("denominator"));
        skip_ws();
        // A zero denominator is not a rational literal, and an exponent on
        // the denominator belongs to the term level ("^" binds tighter).
        if (den != 0 && peek_char() != '^')
          return Expr::constant(Rat(negative ? -num : num, den));
      }
    }
    pos_ = save;
    return Expr::constant(Rat(negative ? -num : num));
  }

  char peek_char() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }

  std::string read_digits(const char* what) {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) throw SyntaxError(std::string("expected ") + what, pos_);
    return std::string(src_.substr(start, pos_ - start));
  }

  unsigned read_unsigned(const char* what) {
    std::size_t at = pos_;
    std::string digits = read_digits(what);
    if (digits.size() > 4) throw SyntaxError("exponent too large", at);
    return static_cast<unsigned>(std::stoul(digits));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

ExprPtr parse_expression(std::string_view src) { return Parser(src).run(); }

ExprPtr substitute_var(const ExprPtr& e, const ExprPtr& replacement) {
  switch (e->kind) {
    case Expr::Kind::Var:
      return replacement;
    case Expr::Kind::Const:
      return e;
    case Expr::Kind::Add:
      return Expr::add(substitute_var(e->a, replacement), substitute_var(e->b, replacement));
    case Expr::Kind::Sub:
      return Expr::sub(substitute_var(e->a, replacement), substitute_var(e->b, replacement));
    case Expr::Kind::Mul:
      return Expr::mul(substitute_var(e->a, replacement), substitute_var(e->b, replacement));
    case Expr::Kind::Div:
      return Expr::div(substitute_var(e->a, replacement), substitute_var(e->b, replacement));
    case Expr::Kind::Pow:
      return Expr::pow(substitute_var(e->a, replacement), e->exponent);
    case Expr::Kind::Sin:
      return Expr::sin(substitute_var(e->a, replacement));
  }
  throw Error("unreachable expression kind");
}

// ---------------------------------------------------------------------------
// Evaluation

Rat eval_expr_exact(const ExprPtr& e, const Rat& x) {
  switch (e->kind) {
    case Expr::Kind::Var:
      return x;
    case Expr::Kind::Const:
      return e->value;
    case Expr::Kind::Add:
      return eval_expr_exact(e->a, x) + eval_expr_exact(e->b, x);
    case Expr::Kind::Sub:
      return eval_expr_exact(e->a, x) - eval_expr_exact(e->b, x);
    case Expr::Kind::Mul:
      return eval_expr_exact(e->a, x) * eval_expr_exact(e->b, x);
    case Expr::Kind::Div: {
      Rat d = eval_expr_exact(e->b, x);
      if (d.is_zero()) throw PoleError("pole at " + x.str());
      return eval_expr_exact(e->a, x) / d;
    }
    case Expr::Kind::Pow:
      return eval_expr_exact(e->a, x).pow(e->exponent);
    case Expr::Kind::Sin:
      throw UnsupportedError("exact evaluation of sin");
  }
  throw Error("unreachable expression kind");
}

Interval eval_expr_interval(const ExprPtr& e, const Rat& x, unsigned sin_degree) {
  switch (e->kind) {
    case Expr::Kind::Var:
      return Interval(x);
    case Expr::Kind::Const:
      return Interval(e->value);
    case Expr::Kind::Add:
      return eval_expr_interval(e->a, x, sin_degree) + eval_expr_interval(e->b, x, sin_degree);
    case Expr::Kind::Sub:
      return eval_expr_interval(e->a, x, sin_degree) - eval_expr_interval(e->b, x, sin_degree);
    case Expr::Kind::Mul:
      return eval_expr_interval(e->a, x, sin_degree) * eval_expr_interval(e->b, x, sin_degree);
    case Expr::Kind::Div: {
      Interval d = eval_expr_interval(e->b, x, sin_degree);
      if (d.is_point() && d.lo.is_zero()) throw PoleError("pole at " + x.str());
      if (d.lo.sign() <= 0 && d.hi.sign() >= 0)
        throw IndeterminateError("divisor interval straddles zero");
      return eval_expr_interval(e->a, x, sin_degree) / d;
    }
    case Expr::Kind::Pow:
      return pow(eval_expr_interval(e->a, x, sin_degree), e->exponent);
    case Expr::Kind::Sin: {
      Interval arg = eval_expr_interval(e->a, x, sin_degree);
      if (arg.is_point()) return sin_enclosure(arg.lo, sin_degree);
      // |sin(u) - sin(m)| <= |u - m|, so widen the midpoint enclosure by
      // half the argument width.
      Rat mid = (arg.lo + arg.hi) / Rat(2);
      Rat half = arg.width() / Rat(2);
      Interval at_mid = sin_enclosure(mid, sin_degree);
      return Interval(at_mid.lo - half, at_mid.hi + half);
    }
  }
  throw Error("unreachable expression kind");
}

// ---------------------------------------------------------------------------
// Lowering

std::optional<RatFunc> lower_rational(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Var:
      return RatFunc(Poly::variable(), Poly::constant(Rat(1)));
    case Expr::Kind::Const:
      return RatFunc(Poly::constant(e->value), Poly::constant(Rat(1)));
    case Expr::Kind::Sin:
      return std::nullopt;
    case Expr::Kind::Pow: {
      auto base = lower_rational(e->a);
      if (!base) return std::nullopt;
      Poly n = Poly::constant(Rat(1));
      Poly d = Poly::constant(Rat(1));
      for (unsigned i = 0; i < e->exponent; ++i) {
        n = n * base->num;
        d = d * base->den;
      }
      return RatFunc(std::move(n), std::move(d));
    }
    default:
      break;
  }
  auto l = lower_rational(e->a);
  auto r = lower_rational(e->b);
  if (!l || !r) return std::nullopt;
  switch (e->kind) {
    case Expr::Kind::Add:
      return RatFunc(l->num * r->den + r->num * l->den, l->den * r->den);
    case Expr::Kind::Sub:
      return RatFunc(l->num * r->den - r->num * l->den, l->den * r->den);
    case Expr::Kind::Mul:
      return RatFunc(l->num * r->num, l->den * r->den);
    case Expr::Kind::Div:
      if (r->num.is_zero()) throw MathError("division by the zero function");
      return RatFunc(l->num * r->den, l->den * r->num);
    default:
      throw Error("unreachable expression kind");
  }
}

namespace {

bool valid_sin_pattern(const ExprPtr& e) {
  switch (e->kind) {
    case Expr::Kind::Var:
    case Expr::Kind::Const:
      return true;
    case Expr::Kind::Sin:
      return !contains_sin(e->a);
    case Expr::Kind::Pow:
      return valid_sin_pattern(e->a);
    case Expr::Kind::Div:
      return valid_sin_pattern(e->a) && !contains_sin(e->b);
    default:
      return valid_sin_pattern(e->a) && valid_sin_pattern(e->b);
  }
}

}  // namespace

Lowered lower_expr(const ExprPtr& e) {
  if (auto rf = lower_rational(e)) {
    if (rf->den.is_constant()) {
      Rat d = rf->den.coeff(0);
      return Lowered{LoweredKind::Polynomial, rf->num.scaled(d.reciprocal()), RatFunc()};
    }
    return Lowered{LoweredKind::Rational, Poly(), std::move(*rf)};
  }
  if (!valid_sin_pattern(e))
    throw UnsupportedError(
        "expression outside the supported fragment (sin arguments and "
        "divisors must be sin-free)");
  return Lowered{LoweredKind::SinPattern, Poly(), RatFunc()};
}

ExprPtr poly_to_expr(const Poly& p) {
  if (p.is_zero()) return Expr::constant(Rat(0));

  auto term = [](const Rat& coeff, int j) -> ExprPtr {
    if (j == 0) return Expr::constant(coeff);
    ExprPtr base = j == 1 ? Expr::var() : Expr::pow(Expr::var(), static_cast<unsigned>(j));
    if (coeff == Rat(1)) return base;
    return Expr::mul(Expr::constant(coeff), base);
  };

  ExprPtr node;
  for (int j = p.degree(); j >= 0; --j) {
    Rat c = p.coeff(static_cast<std::size_t>(j));
    if (c.is_zero()) continue;
    if (!node) {
      node = term(c, j);
    } else if (c.sign() > 0) {
      node = Expr::add(node, term(c, j));
    } else {
      node = Expr::sub(node, term(-c, j));
    }
  }
  return node;
}

ExprPtr ratfunc_to_expr(const RatFunc& f) {
  if (f.den.is_constant() && f.den.coeff(0) == Rat(1)) return poly_to_expr(f.num);
  return Expr::div(poly_to_expr(f.num), poly_to_expr(f.den));
}

}  // namespace fizzle
