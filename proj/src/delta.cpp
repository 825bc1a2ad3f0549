#include "fizzle/delta.hpp"

#include <cctype>

#include "fizzle/errors.hpp"
#include "fizzle/numeric.hpp"

namespace fizzle {

namespace {

DeltaPtr make(DeltaExpr e) { return std::make_shared<const DeltaExpr>(std::move(e)); }

}  // namespace

DeltaPtr DeltaExpr::eps() {
  static const DeltaPtr e = make(DeltaExpr{Kind::Eps, Rat(0), nullptr, 0, {}});
  return e;
}

DeltaPtr DeltaExpr::constant(const Rat& q) {
  if (q.sign() <= 0) throw MathError("delta constants must be positive");
  return make(DeltaExpr{Kind::Const, q, nullptr, 0, {}});
}

DeltaPtr DeltaExpr::scale(const Rat& q, DeltaPtr c) {
  if (q.sign() <= 0) throw MathError("delta scale factors must be positive");
  if (q == Rat(1)) return c;
  if (c->kind == Kind::Const) return constant(q * c->value);
  if (c->kind == Kind::Scale) return scale(q * c->value, c->child);
  return make(DeltaExpr{Kind::Scale, q, std::move(c), 0, {}});
}

DeltaPtr DeltaExpr::root(DeltaPtr c, unsigned j) {
  if (j == 0) throw MathError("zeroth root in delta expression");
  if (j == 1) return c;
  return make(DeltaExpr{Kind::Root, Rat(0), std::move(c), j, {}});
}

DeltaPtr DeltaExpr::min_of(std::vector<DeltaPtr> cs) {
  std::vector<DeltaPtr> flat;
  for (auto& c : cs) {
    if (c->kind == Kind::Min) {
      for (const auto& sub : c->children) flat.push_back(sub);
    } else {
      flat.push_back(std::move(c));
    }
  }
  std::vector<DeltaPtr> unique;
  for (auto& c : flat) {
    bool seen = false;
    for (const auto& u : unique)
      if (delta_equal(u, c)) {
        seen = true;
        break;
      }
    if (!seen) unique.push_back(std::move(c));
  }
  if (unique.empty()) throw MathError("min of nothing");
  if (unique.size() == 1) return unique.front();
  return make(DeltaExpr{Kind::Min, Rat(0), nullptr, 0, std::move(unique)});
}

bool delta_equal(const DeltaPtr& a, const DeltaPtr& b) {
  if (a == b) return true;
  if (!a || !b || a->kind != b->kind) return false;
  switch (a->kind) {
    case DeltaExpr::Kind::Eps:
      return true;
    case DeltaExpr::Kind::Const:
      return a->value == b->value;
    case DeltaExpr::Kind::Scale:
      return a->value == b->value && delta_equal(a->child, b->child);
    case DeltaExpr::Kind::Root:
      return a->root_degree == b->root_degree && delta_equal(a->child, b->child);
    case DeltaExpr::Kind::Min: {
      if (a->children.size() != b->children.size()) return false;
      for (std::size_t i = 0; i < a->children.size(); ++i)
        if (!delta_equal(a->children[i], b->children[i])) return false;
      return true;
    }
  }
  return false;
}

DeltaPtr delta_subst_eps(const DeltaPtr& d, const DeltaPtr& replacement) {
  switch (d->kind) {
    case DeltaExpr::Kind::Eps:
      return replacement;
    case DeltaExpr::Kind::Const:
      return d;
    case DeltaExpr::Kind::Scale:
      return DeltaExpr::scale(d->value, delta_subst_eps(d->child, replacement));
    case DeltaExpr::Kind::Root:
      return DeltaExpr::root(delta_subst_eps(d->child, replacement), d->root_degree);
    case DeltaExpr::Kind::Min: {
      std::vector<DeltaPtr> cs;
      cs.reserve(d->children.size());
      for (const auto& c : d->children) cs.push_back(delta_subst_eps(c, replacement));
      return DeltaExpr::min_of(std::move(cs));
    }
  }
  throw Error("unreachable delta kind");
}

Rat delta_eval(const DeltaPtr& d, const Rat& eps, unsigned root_precision_bits) {
  switch (d->kind) {
    case DeltaExpr::Kind::Eps:
      return eps;
    case DeltaExpr::Kind::Const:
      return d->value;
    case DeltaExpr::Kind::Scale:
      return d->value * delta_eval(d->child, eps, root_precision_bits);
    case DeltaExpr::Kind::Root:
      return root_lower_bound(delta_eval(d->child, eps, root_precision_bits),
                              d->root_degree, root_precision_bits);
    case DeltaExpr::Kind::Min: {
      Rat best = delta_eval(d->children.front(), eps, root_precision_bits);
      for (std::size_t i = 1; i < d->children.size(); ++i)
        best = min(best, delta_eval(d->children[i], eps, root_precision_bits));
      return best;
    }
  }
  throw Error("unreachable delta kind");
}

bool delta_exceeds(const DeltaPtr& d, const Rat& eps, const Rat& t_abs) {
  switch (d->kind) {
    case DeltaExpr::Kind::Eps:
      return t_abs < eps;
    case DeltaExpr::Kind::Const:
      return t_abs < d->value;
    case DeltaExpr::Kind::Scale:
      return delta_exceeds(d->child, eps, t_abs / d->value);
    case DeltaExpr::Kind::Root:
      return delta_exceeds(d->child, eps, t_abs.pow(d->root_degree));
    case DeltaExpr::Kind::Min: {
      for (const auto& c : d->children)
        if (!delta_exceeds(c, eps, t_abs)) return false;
      return true;
    }
  }
  throw Error("unreachable delta kind");
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_rec(const DeltaPtr& d, std::string& out) {
  switch (d->kind) {
    case DeltaExpr::Kind::Eps:
      out += "eps";
      return;
    case DeltaExpr::Kind::Const:
      out += d->value.str();
      return;
    case DeltaExpr::Kind::Scale: {
      const Rat& q = d->value;
      if (d->child->kind == DeltaExpr::Kind::Eps) {
        if (q.num() == 1) {
          out += "eps/" + q.den().str();
        } else if (q.is_integer()) {
          out += q.num().str() + "*eps";
        } else {
          out += q.num().str() + "*eps/" + q.den().str();
        }
        return;
      }
      if (q.is_integer()) {
        out += q.num().str();
      } else {
        out += "(" + q.str() + ")";
      }
      out += "*";
      print_rec(d->child, out);  // Min and Root are self-delimiting
      return;
    }
    case DeltaExpr::Kind::Root:
      out += "(";
      print_rec(d->child, out);
      out += ")^(1/" + std::to_string(d->root_degree) + ")";
      return;
    case DeltaExpr::Kind::Min: {
      out += "min{";
      bool first = true;
      for (const auto& c : d->children) {
        if (!first) out += ", ";
        first = false;
        print_rec(c, out);
      }
      out += "}";
      return;
    }
  }
}

}  // namespace

std::string print_delta(const DeltaPtr& d) {
  std::string out;
  print_rec(d, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

class DeltaParser {
 public:
  explicit DeltaParser(std::string_view src) : src_(src) {}

  DeltaPtr run() {
    DeltaPtr d = product();
    skip_ws();
    if (pos_ != src_.size()) throw SyntaxError("unexpected trailing input", pos_);
    return d;
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

  // product := factor (("*" factor) | ("/" positive-integer))*
  DeltaPtr product() {
    DeltaPtr node = factor();
    for (;;) {
      char c = peek();
      if (c == '*') {
        ++pos_;
        node = combine_mul(node, factor());
      } else if (c == '/') {
        ++pos_;
        Rat k = read_number();
        if (k.sign() <= 0) throw MathError("nonpositive divisor in delta expression");
        node = node->kind == DeltaExpr::Kind::Const
                   ? DeltaExpr::constant(node->value / k)
                   : DeltaExpr::scale(k.reciprocal(), node);
      } else {
        return node;
      }
    }
  }

  DeltaPtr combine_mul(const DeltaPtr& a, const DeltaPtr& b) {
    if (a->kind == DeltaExpr::Kind::Const && b->kind == DeltaExpr::Kind::Const)
      return DeltaExpr::constant(a->value * b->value);
    if (a->kind == DeltaExpr::Kind::Const) return DeltaExpr::scale(a->value, b);
    if (b->kind == DeltaExpr::Kind::Const) return DeltaExpr::scale(b->value, a);
    throw SyntaxError("only rational scaling is allowed in delta expressions", pos_);
  }

  DeltaPtr factor() {
    skip_ws();
    if (pos_ >= src_.size()) throw SyntaxError("unexpected end of input", pos_);
    char c = src_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() && std::isalpha(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      std::string_view word = src_.substr(start, pos_ - start);
      if (word == "eps") return DeltaExpr::eps();
      if (word == "min") return min_body();
      throw SyntaxError("unknown name '" + std::string(word) + "'", start);
    }
    if (c == '(') {
      ++pos_;
      DeltaPtr inner = product();
      if (!consume(')')) throw SyntaxError("expected ')'", pos_);
      return maybe_root(inner);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      Rat q = read_number();
      if (q.sign() <= 0) throw MathError("delta constants must be positive");
      return DeltaExpr::constant(q);
    }
    throw SyntaxError(std::string("unexpected character '") + c + "'", pos_);
  }

  DeltaPtr min_body() {
    if (!consume('{')) throw SyntaxError("expected '{' after min", pos_);
    std::vector<DeltaPtr> children;
    children.push_back(product());
    while (consume(',')) children.push_back(product());
    if (!consume('}')) throw SyntaxError("expected '}'", pos_);
    if (children.size() < 2) throw SyntaxError("min needs at least two branches", pos_);
    return DeltaExpr::min_of(std::move(children));
  }

  DeltaPtr maybe_root(DeltaPtr inner) {
    std::size_t save = pos_;
    if (consume('^')) {
      if (!consume('(')) throw SyntaxError("expected '(' after '^'", pos_);
      if (!consume('1')) throw SyntaxError("expected root of the form (1/j)", pos_);
      if (!consume('/')) throw SyntaxError("expected root of the form (1/j)", pos_);
      unsigned j = read_small_unsigned();
      if (!consume(')')) throw SyntaxError("expected ')'", pos_);
      if (j < 2) throw SyntaxError("root degree must be at least 2", save);
      return DeltaExpr::root(std::move(inner), j);
    }
    return inner;
  }

  // Plain digits only; "p/q" literals form through the product loop.
  Rat read_number() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) throw SyntaxError("expected a number", pos_);
    return Rat(BigInt(std::string(src_.substr(start, pos_ - start))));
  }

  unsigned read_small_unsigned() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    if (start == pos_) throw SyntaxError("expected an integer", pos_);
    std::string digits(src_.substr(start, pos_ - start));
    if (digits.size() > 3) throw SyntaxError("root degree too large", start);
    return static_cast<unsigned>(std::stoul(digits));
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

DeltaPtr parse_delta(std::string_view src) { return DeltaParser(src).run(); }

}  // namespace fizzle
