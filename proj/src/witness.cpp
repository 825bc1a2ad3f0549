#include "fizzle/witness.hpp"

#include <algorithm>

#include "fizzle/errors.hpp"

namespace fizzle {

namespace {

DerivPtr make_node(Derivation d) { return std::make_shared<const Derivation>(std::move(d)); }

// Proof text renders recentered claims in the variable t. Only the
// variable token prints as 'x', so a character substitution is exact.
std::string with_var_t(std::string s) {
  std::replace(s.begin(), s.end(), 'x', 't');
  return s;
}

// "c + t" with the zero center collapsed to plain "t".
std::string shift_arg(const Rat& c) {
  return c.is_zero() ? "t" : c.str() + " + t";
}

// "1/r" with non-integer radii parenthesized: "1/(5/2)".
std::string recip_str(const Rat& r) {
  return r.is_integer() ? "1/" + r.str() : "1/(" + r.str() + ")";
}

// A rational coefficient in running text, parenthesized unless integral.
std::string coeff_str(const Rat& q) {
  return q.is_integer() ? q.str() : "(" + q.str() + ")";
}

std::vector<std::string> merge_assumptions(const Witness& a, const Witness& b) {
  std::vector<std::string> out = a.assumptions;
  for (const auto& s : b.assumptions)
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  return out;
}

void require_fizzle(const Witness& w, const char* rule) {
  if (w.claim.center.infinite || !w.claim.center.value.is_zero() || !w.claim.limit.is_zero())
    throw MathError(std::string(rule) + ": mismatched claims (needs center 0 and limit 0)");
}

void require_same_side(const Witness& a, const Witness& b, const char* rule) {
  if (a.claim.side != b.claim.side)
    throw MathError(std::string(rule) + ": mismatched claims (one-sided and two-sided mixed)");
}

DeltaPtr half_eps() { return DeltaExpr::scale(Rat(1, 2), DeltaExpr::eps()); }
DeltaPtr root_eps() { return DeltaExpr::root(DeltaExpr::eps(), 2); }

// Pretty polynomial for proof text: descending powers, "t^2 + 5t" style.
std::string poly_pretty(const Poly& p, const std::string& var) {
  if (p.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (int j = p.degree(); j >= 0; --j) {
    Rat c = p.coeff(static_cast<std::size_t>(j));
    if (c.is_zero()) continue;
    std::string term;
    if (j == 0) {
      term = c.abs().str();
    } else {
      Rat m = c.abs();
      std::string coeff;
      if (m != Rat(1)) coeff = m.is_integer() ? m.str() : "(" + m.str() + ")";
      term = coeff + var;
      if (j >= 2) term += "^" + std::to_string(j);
    }
    if (first) {
      out = (c.sign() < 0 ? "-" : "") + term;
      first = false;
    } else {
      out += (c.sign() < 0 ? " - " : " + ") + term;
    }
  }
  return out;
}

// Triangle-inequality view of a zero-constant tail: "|t|^2 + 5|t|".
std::string abs_terms_pretty(const Poly& tail) {
  std::string out;
  bool first = true;
  for (int j = tail.degree(); j >= 1; --j) {
    Rat m = tail.coeff(static_cast<std::size_t>(j)).abs();
    if (m.is_zero()) continue;
    std::string term;
    if (m != Rat(1)) term = (m.is_integer() ? m.str() : "(" + m.str() + ")") + "*";
    term += "|t|";
    if (j >= 2) term += "^" + std::to_string(j);
    out += first ? term : " + " + term;
    first = false;
  }
  return out.empty() ? "0" : out;
}

// Sampling probes for hypotheses the combinators cannot prove: exact
// comparison for rational functions, enclosure-overlap for sin patterns.
// A disagreement at any probe is a hard error.
void probe_equal(const ExprPtr& lhs_in_t, const ExprPtr& rhs_in_t, Side side,
                 const char* what) {
  static const Rat magnitudes[] = {Rat(1, 8), Rat(1, 64), Rat(1, 1024)};
  const bool exact = !contains_sin(lhs_in_t) && !contains_sin(rhs_in_t);
  for (const Rat& m : magnitudes) {
    for (int sgn : {+1, -1}) {
      if (sgn < 0 && side == Side::RightOnly) continue;
      Rat t = sgn < 0 ? -m : m;
      try {
        if (exact) {
          if (eval_expr_exact(lhs_in_t, t) != eval_expr_exact(rhs_in_t, t))
            throw MathError(std::string(what) + ": sampling mismatch at t = " + t.str());
        } else {
          Interval a = eval_expr_interval(lhs_in_t, t, 15);
          Interval b = eval_expr_interval(rhs_in_t, t, 15);
          if (a.hi < b.lo || b.hi < a.lo)
            throw MathError(std::string(what) + ": sampling mismatch at t = " + t.str());
        }
      } catch (const PoleError&) {
      } catch (const IndeterminateError&) {
      } catch (const EnclosureRangeError&) {
      }
    }
  }
}

Poly tail_of(const Poly& shifted) {
  std::vector<Rat> tc = shifted.coeffs();
  if (!tc.empty()) tc[0] = Rat(0);
  return Poly(std::move(tc));
}

// Fizzle witness for the shifted tail of a nonconstant polynomial:
// lim_{t -> 0} sum_{j>=1} b_j t^j = 0 with the strategy's delta recipe.
Witness poly_fizzle(const Poly& p, const Rat& c, PolyStrategy strategy) {
  auto [shifted, tail_sum] = centered_tail_bound(p, c);
  Poly tail = tail_of(shifted);
  const int n = p.degree();

  DeltaPtr delta;
  std::vector<std::string> lines;
  std::string strategy_name;
  const std::string tail_str = poly_pretty(tail, "t");

  if (strategy == PolyStrategy::UnitTailSum) {
    strategy_name = "unit-tail-sum";
    delta = DeltaExpr::min_of({DeltaExpr::constant(Rat(1)),
                               DeltaExpr::scale(tail_sum.reciprocal(), DeltaExpr::eps())});
    const std::string b = tail_sum.str();
    const std::string threshold =
        print_delta(DeltaExpr::scale(tail_sum.reciprocal(), DeltaExpr::eps()));
    lines.push_back("|" + tail_str + "| <= " + abs_terms_pretty(tail) + ",");
    lines.push_back("and for 0 < |t| < delta <= 1 every power |t|^j is at most |t|, so the");
    lines.push_back("sum is at most " + b + "*|t|; with |t| < " + threshold +
                    " it stays below eps.");
  } else {
    strategy_name = "per-term-roots";
    std::vector<DeltaPtr> terms;
    lines.push_back("Each nonzero term is held below eps/" + std::to_string(n) + ":");
    for (int j = 1; j <= n; ++j) {
      Rat bj = shifted.coeff(static_cast<std::size_t>(j));
      if (bj.is_zero()) continue;
      Rat factor = (Rat(n) * bj.abs()).reciprocal();
      DeltaPtr term = DeltaExpr::scale(factor, DeltaExpr::eps());
      if (j >= 2) term = DeltaExpr::root(term, static_cast<unsigned>(j));
      lines.push_back("  |" + bj.abs().str() + "|*|t|^" + std::to_string(j) + " < eps/" +
                      std::to_string(n) + " for |t| < " + print_delta(term) + ",");
      terms.push_back(std::move(term));
    }
    lines.push_back("and summing at most " + std::to_string(n) + " such terms gives |" +
                    tail_str + "| < eps.");
    delta = DeltaExpr::min_of(std::move(terms));
  }

  Claim claim{poly_to_expr(tail), Center::at(Rat(0)), Rat(0), Side::TwoSided};
  Derivation node;
  node.rule = "PolyDirect";
  node.params = {{"statement", claim_statement(claim)},
                 {"delta", print_delta(delta)},
                 {"strategy", strategy_name},
                 {"tail", tail_str},
                 {"tail_sum", tail_sum.str()}};
  node.lines = std::move(lines);
  if (strategy == PolyStrategy::PerTermRoots) node.errata.push_back("poly-strategy-i");
  return Witness{std::move(claim), std::move(delta), make_node(std::move(node)), {}};
}

Witness constant_poly_witness(const Poly& p, const Rat& c, const ExprPtr& claim_func) {
  Rat value = p.eval(c);
  Claim claim{claim_func ? claim_func : poly_to_expr(p), Center::at(c), value,
              Side::TwoSided};
  Derivation node;
  node.rule = "PolyDirect";
  node.params = {{"statement", claim_statement(claim)},
                 {"delta", "1"},
                 {"strategy", "constant"}};
  node.lines = {"The function is constant, so the output error is 0 < eps for every t;",
                "any positive input threshold works. Take delta = 1."};
  return Witness{std::move(claim), DeltaExpr::constant(Rat(1)), make_node(std::move(node)), {}};
}

}  // namespace

std::string claim_statement(const Claim& c) {
  const bool fizzle = !c.center.infinite && c.center.value.is_zero() && c.limit.is_zero();
  std::string func = print_expr(c.func);
  if (fizzle) {
    const char* arrow = c.side == Side::RightOnly ? "t -> 0+" : "t -> 0";
    return "lim_{" + std::string(arrow) + "} (" + with_var_t(std::move(func)) + ") = 0";
  }
  if (c.center.infinite) return "lim_{x -> inf} (" + func + ") = " + c.limit.str();
  return "lim_{x -> " + c.center.value.str() + "} (" + func + ") = " + c.limit.str();
}

// ---------------------------------------------------------------------------
// Centered combinators

Witness identity_witness() {
  Claim claim{Expr::var(), Center::at(Rat(0)), Rat(0), Side::TwoSided};
  Derivation node;
  node.rule = "Identity";
  node.params = {{"statement", claim_statement(claim)}, {"delta", "eps"}};
  node.lines = {"Choose delta = eps. Then 0 < |t| < delta gives |t| < eps."};
  return Witness{std::move(claim), DeltaExpr::eps(), make_node(std::move(node)), {}};
}

Witness sum_witness(const Witness& w1, const Witness& w2) {
  require_fizzle(w1, "sum");
  require_fizzle(w2, "sum");
  require_same_side(w1, w2, "sum");
  DeltaPtr delta = DeltaExpr::min_of({delta_subst_eps(w1.delta, half_eps()),
                                      delta_subst_eps(w2.delta, half_eps())});
  Claim claim{Expr::add(w1.claim.func, w2.claim.func), Center::at(Rat(0)), Rat(0),
              w1.claim.side};
  Derivation node;
  node.rule = "Sum";
  node.params = {{"statement", claim_statement(claim)}, {"delta", print_delta(delta)}};
  node.lines = {"|f(t) + g(t)| <= |f(t)| + |g(t)| < eps/2 + eps/2 = eps,",
                "using each branch at output threshold eps/2."};
  node.children = {w1.derivation, w2.derivation};
  return Witness{std::move(claim), std::move(delta), make_node(std::move(node)),
                 merge_assumptions(w1, w2)};
}

Witness scale_witness(const Rat& k, const Witness& w) {
  require_fizzle(w, "scalar");
  if (k.is_zero()) {
    Claim claim{Expr::constant(Rat(0)), Center::at(Rat(0)), Rat(0), w.claim.side};
    Derivation node;
    node.rule = "Scalar";
    node.params = {{"statement", claim_statement(claim)}, {"delta", "1"}, {"k", "0"}};
    node.lines = {"k = 0 leaves the zero function, which satisfies every output",
                  "threshold; take delta = 1."};
    node.children = {w.derivation};
    return Witness{std::move(claim), DeltaExpr::constant(Rat(1)), make_node(std::move(node)),
                   w.assumptions};
  }
  DeltaPtr delta = delta_subst_eps(w.delta, DeltaExpr::scale(k.abs().reciprocal(),
                                                             DeltaExpr::eps()));
  Claim claim{Expr::mul(Expr::constant(k), w.claim.func), Center::at(Rat(0)), Rat(0),
              w.claim.side};
  Derivation node;
  node.rule = "Scalar";
  node.params = {{"statement", claim_statement(claim)},
                 {"delta", print_delta(delta)},
                 {"k", k.str()}};
  node.lines = {"|" + k.str() + "*f(t)| = " + k.abs().str() + "*|f(t)| < " + k.abs().str() +
                    "*(eps/" + k.abs().str() + ") = eps,",
                "using the branch at output threshold eps/" + k.abs().str() + "."};
  node.children = {w.derivation};
  return Witness{std::move(claim), std::move(delta), make_node(std::move(node)), w.assumptions};
}

Witness product_witness(const Witness& w1, const Witness& w2) {
  require_fizzle(w1, "product");
  require_fizzle(w2, "product");
  require_same_side(w1, w2, "product");
  DeltaPtr delta = DeltaExpr::min_of({delta_subst_eps(w1.delta, root_eps()),
                                      delta_subst_eps(w2.delta, root_eps())});
  Claim claim{Expr::mul(w1.claim.func, w2.claim.func), Center::at(Rat(0)), Rat(0),
              w1.claim.side};
  Derivation node;
  node.rule = "Product";
  node.params = {{"statement", claim_statement(claim)}, {"delta", print_delta(delta)}};
  node.lines = {"|f(t)*g(t)| = |f(t)|*|g(t)| < (eps)^(1/2)*(eps)^(1/2) = eps,",
                "using each branch at output threshold (eps)^(1/2)."};
  node.children = {w1.derivation, w2.derivation};
  return Witness{std::move(claim), std::move(delta), make_node(std::move(node)),
                 merge_assumptions(w1, w2)};
}

Witness reciprocal_witness(const Witness& w) {
  require_fizzle(w, "reciprocal");
  ExprPtr f = Expr::add(w.claim.func, Expr::constant(Rat(1)));
  DeltaPtr delta = DeltaExpr::min_of(
      {delta_subst_eps(w.delta, DeltaExpr::constant(Rat(1, 2))),
       delta_subst_eps(w.delta, half_eps())});
  Claim claim{Expr::sub(Expr::div(Expr::constant(Rat(1)), f), Expr::constant(Rat(1))),
              Center::at(Rat(0)), Rat(0), w.claim.side};
  Derivation node;
  node.rule = "Reciprocal";
  node.params = {{"statement", claim_statement(claim)}, {"delta", print_delta(delta)}};
  node.lines = {"Where |f(t) - 1| < 1/2 we get f(t) > 1/2, hence 1/|f(t)| < 2, so",
                "|1/f(t) - 1| = |f(t) - 1|/|f(t)| < 2*|f(t) - 1| < 2*(eps/2) = eps,",
                "using the branch at the constant threshold 1/2 and at eps/2."};
  node.errata = {"reciprocal-threshold"};
  node.children = {w.derivation};
  return Witness{std::move(claim), std::move(delta), make_node(std::move(node)), w.assumptions};
}

Witness squeeze_witness(const Witness& lower, const Witness& upper, const Rat& locality,
                        const ExprPtr& g) {
  require_fizzle(lower, "squeeze");
  require_fizzle(upper, "squeeze");
  require_same_side(lower, upper, "squeeze");
  if (locality.sign() <= 0) throw MathError("squeeze: locality radius must be positive");

  // The ordering hypothesis cannot be proven here; sample it and record
  // the assumption. Only a proven inversion (disjoint enclosures for sin
  // patterns, exact comparison otherwise) is an error.
  const bool exact = !contains_sin(lower.claim.func) && !contains_sin(g) &&
                     !contains_sin(upper.claim.func);
  std::vector<Rat> mags;
  for (int i = 1; i <= 6; ++i)
    mags.push_back(locality * (Rat(1) - Rat(BigInt(1), BigInt(1) << i)));
  mags.push_back(locality / Rat(2));
  mags.push_back(locality / Rat(1024));
  for (const Rat& m : mags) {
    for (int sgn : {+1, -1}) {
      if (sgn < 0 && lower.claim.side == Side::RightOnly) continue;
      Rat t = sgn < 0 ? -m : m;
      try {
        if (exact) {
          Rat lo = eval_expr_exact(lower.claim.func, t);
          Rat mid = eval_expr_exact(g, t);
          Rat hi = eval_expr_exact(upper.claim.func, t);
          if (lo > mid || mid > hi)
            throw MathError("squeeze: ordering violation at t = " + t.str());
        } else {
          Interval lo = eval_expr_interval(lower.claim.func, t, 15);
          Interval mid = eval_expr_interval(g, t, 15);
          Interval hi = eval_expr_interval(upper.claim.func, t, 15);
          if (lo.lo > mid.hi || mid.lo > hi.hi)
            throw MathError("squeeze: ordering violation at t = " + t.str());
        }
      } catch (const PoleError&) {
      } catch (const IndeterminateError&) {
      } catch (const EnclosureRangeError&) {
      }
    }
  }

  DeltaPtr delta = DeltaExpr::min_of(
      {DeltaExpr::constant(locality), lower.delta, upper.delta});
  Claim claim{g, Center::at(Rat(0)), Rat(0), lower.claim.side};
  Derivation node;
  node.rule = "Squeeze";
  node.params = {{"statement", claim_statement(claim)},
                 {"delta", print_delta(delta)},
                 {"locality", locality.str()}};
  node.lines = {"For 0 < |t| < " + locality.str() + " the ordering f(t) <= g(t) <= h(t) holds",
                "(sampled, not proven), so -eps < f(t) <= g(t) <= h(t) < eps using both",
                "branches at output threshold eps."};
  node.children = {lower.derivation, upper.derivation};
  Witness out{std::move(claim), std::move(delta), make_node(std::move(node)),
              merge_assumptions(lower, upper)};
  std::string note = "squeeze ordering f <= g <= h on 0 < |t| < " + locality.str() +
                     " was sampled, not proven; the guarantee is conditional on it";
  if (std::find(out.assumptions.begin(), out.assumptions.end(), note) == out.assumptions.end())
    out.assumptions.push_back(note);
  return out;
}

// ---------------------------------------------------------------------------
// Recentering

Witness recenter_witness(const Witness& w, const Rat& c, const Rat& L, const ExprPtr& f,
                         std::vector<std::string> algebra_lines) {
  require_fizzle(w, "recenter");
  ExprPtr shifted = substitute_var(f, Expr::add(Expr::constant(c), Expr::var()));
  ExprPtr difference = Expr::sub(shifted, Expr::constant(L));
  probe_equal(w.claim.func, difference, w.claim.side, "recenter");

  Claim claim{f, Center::at(c), L, w.claim.side};
  Derivation node;
  node.rule = "Recenter";
  node.params = {{"statement", claim_statement(claim)},
                 {"delta", print_delta(w.delta)},
                 {"center", c.str()},
                 {"limit", L.str()}};
  node.lines = std::move(algebra_lines);
  if (node.lines.empty()) {
    if (c.is_zero()) {
      node.lines = {"At center 0 the recentered claim is the original one up to the",
                    "relabeling x = t; the threshold carries over unchanged."};
    } else {
      node.lines = {"The substitution x = " + c.str() + " + t identifies 0 < |x - " + c.str() +
                    "| < delta with 0 < |t| < delta and keeps the output error unchanged."};
    }
  }
  node.children = {w.derivation};
  return Witness{std::move(claim), w.delta, make_node(std::move(node)), w.assumptions};
}

// ---------------------------------------------------------------------------
// Direct constructors

Witness poly_witness(const Poly& p, const Rat& c, PolyStrategy strategy) {
  return poly_witness(p, c, strategy, nullptr);
}

Witness poly_witness(const Poly& p, const Rat& c, PolyStrategy strategy,
                     const ExprPtr& claim_func) {
  if (p.is_constant()) return constant_poly_witness(p, c, claim_func);
  Witness fizzle = poly_fizzle(p, c, strategy);
  ExprPtr func = claim_func ? claim_func : poly_to_expr(p);
  Rat L = p.eval(c);
  std::string tail_str;
  for (const auto& kv : fizzle.derivation->params)
    if (kv.first == "tail") tail_str = kv.second;
  std::vector<std::string> algebra = {
      "With f(x) = " + print_expr(func) + ": by expanding,",
      "f(" + shift_arg(c) + ") - " + L.str() + " = " + tail_str + "."};
  return recenter_witness(fizzle, c, L, func, std::move(algebra));
}

PositivityGuard positivity_guard(const Poly& q, const Rat& c) {
  Rat qc = q.eval(c);
  if (qc.is_zero()) throw MathError("positivity radius needs q(" + c.str() + ") != 0");
  Rat r = qc.abs() / Rat(2);
  Rat guard(1);
  if (!q.is_constant()) {
    auto [shifted, tail_sum] = centered_tail_bound(q, c);
    (void)shifted;
    guard = min(Rat(1), r / tail_sum);
  }
  Derivation node;
  node.rule = "Positivity";
  node.params = {{"q", poly_pretty(q, "x")},
                 {"center", c.str()},
                 {"radius", r.str()},
                 {"guard", guard.str()}};
  node.lines = {"q(" + c.str() + ") = " + qc.str() + ", so r = |q(" + c.str() + ")|/2 = " +
                    r.str() + ", and for 0 < |t| < " + guard.str() + ":",
                "|q(" + shift_arg(c) + ") - q(" + c.str() + ")| < r, hence |q(" + shift_arg(c) +
                    ")| > " + r.str() + "."};
  node.errata = {"positivity-direction"};
  return PositivityGuard{std::move(r), std::move(guard), make_node(std::move(node))};
}

Witness ratfunc_witness(const Poly& p, const Poly& q, const Rat& c) {
  return ratfunc_witness(p, q, c, nullptr);
}

Witness ratfunc_witness(const Poly& p, const Poly& q, const Rat& c,
                        const ExprPtr& claim_func) {
  Rat qc = q.eval(c);
  if (qc.is_zero()) throw MathError("pole at the center: q(" + c.str() + ") = 0");
  Rat pc = p.eval(c);
  Rat L = pc / qc;

  PositivityGuard guard = positivity_guard(q, c);
  const Rat& r = guard.radius;

  std::vector<DeltaPtr> branches;
  std::vector<DerivPtr> children = {guard.derivation};
  branches.push_back(DeltaExpr::constant(guard.guard));

  std::vector<std::string> lines;
  Witness wp = p.is_constant() ? constant_poly_witness(p, c, nullptr)
                               : poly_fizzle(p, c, PolyStrategy::UnitTailSum);
  Witness wq = q.is_constant() ? constant_poly_witness(q, c, nullptr)
                               : poly_fizzle(q, c, PolyStrategy::UnitTailSum);

  if (!pc.is_zero()) {
    Rat p_threshold = r / Rat(2);
    Rat q_threshold = (r * qc.abs()) / (Rat(2) * pc.abs());
    branches.push_back(delta_subst_eps(
        wp.delta, DeltaExpr::scale(p_threshold, DeltaExpr::eps())));
    branches.push_back(delta_subst_eps(
        wq.delta, DeltaExpr::scale(q_threshold, DeltaExpr::eps())));
    lines = {"|p(x)/q(x) - " + L.str() + "| <= (1/|q(x)|)*(|p(x) - p(" + c.str() +
                 ")| + (|p(" + c.str() + ")|/|q(" + c.str() + ")|)*|q(x) - q(" + c.str() +
                 ")|) at x = " + shift_arg(c) + ",",
             "and on the guard region 1/|q(x)| < " + recip_str(r) + ". Holding the numerator",
             "shift below (" + p_threshold.str() + ")*eps and the denominator shift below (" +
                 q_threshold.str() + ")*eps gives",
             "|p(x)/q(x) - " + L.str() + "| < (" + recip_str(r) + ")*((" + p_threshold.str() +
                 ")*eps + (" + (pc.abs() / qc.abs()).str() + ")*(" + q_threshold.str() +
                 ")*eps) = eps."};
    children.push_back(wp.derivation);
    children.push_back(wq.derivation);
  } else {
    branches.push_back(delta_subst_eps(wp.delta, DeltaExpr::scale(r, DeltaExpr::eps())));
    lines = {"p(" + c.str() + ") = 0, so |p(x)/q(x)| <= |p(x)|/|q(x)| at x = " +
                 shift_arg(c) + ", and on the guard",
             "region 1/|q(x)| < " + recip_str(r) + ". Holding the numerator shift below (" +
                 r.str() + ")*eps gives",
             "|p(x)/q(x)| < (" + recip_str(r) + ")*(" + r.str() + ")*eps = eps."};
    children.push_back(wp.derivation);
  }

  DeltaPtr delta = DeltaExpr::min_of(std::move(branches));
  RatFunc f(p, q);
  RatFunc diff = centered_difference(f, c, L);
  ExprPtr func = claim_func ? claim_func : ratfunc_to_expr(f);

  Claim fizzle_claim{ratfunc_to_expr(diff), Center::at(Rat(0)), Rat(0), Side::TwoSided};
  Derivation node;
  node.rule = "RationalDirect";
  node.params = {{"statement", claim_statement(fizzle_claim)},
                 {"delta", print_delta(delta)},
                 {"radius", r.str()},
                 {"guard", guard.guard.str()}};
  node.lines = std::move(lines);
  node.children = std::move(children);
  Witness fizzle{std::move(fizzle_claim), std::move(delta), make_node(std::move(node)), {}};

  std::vector<std::string> algebra = {
      "With f(x) = " + print_expr(func) + ": by exact expansion,",
      "f(" + shift_arg(c) + ") - " + L.str() + " = (" + poly_pretty(diff.num, "t") + ") / (" +
          poly_pretty(diff.den, "t") + ")."};
  return recenter_witness(fizzle, c, L, func, std::move(algebra));
}

Witness infinity_witness(const RatFunc& f) { return infinity_witness(f, nullptr); }

Witness infinity_witness(const RatFunc& f, const ExprPtr& claim_func) {
  RatFunc g = infinity_substitute(f);
  if (g.den.eval(Rat(0)).is_zero())
    throw MathError("no finite limit at infinity: f(1/t) has a pole at t = 0");
  Rat L = g.eval(Rat(0));

  Witness core = ratfunc_witness(g.num, g.den, Rat(0));
  Claim claim{claim_func ? claim_func : ratfunc_to_expr(f), Center::inf(), L,
              Side::RightOnly};
  Derivation node;
  node.rule = "InfinityTransform";
  node.params = {{"statement", claim_statement(claim)},
                 {"delta", print_delta(core.delta)},
                 {"substituted", print_expr(ratfunc_to_expr(g))}};
  node.lines = {"Substituting x = 1/t turns x > M into 0 < t < delta with delta = 1/M, so it",
                "suffices to treat g(t) = f(1/t) = " +
                    with_var_t(print_expr(ratfunc_to_expr(g))) + " right-sided at t = 0."};
  node.children = {core.derivation};
  return Witness{std::move(claim), core.delta, make_node(std::move(node)), core.assumptions};
}

Witness derivative_witness(const Poly& p, const Rat& c) {
  Poly shifted = taylor_shift(p, c);
  Rat slope = shifted.coeff(1);

  // (p(c+t) - p(c) - p'(c) t)/t = sum_{j>=2} b_j t^(j-1), a polynomial tail
  // with zero constant term.
  std::vector<Rat> tail_coeffs;
  if (shifted.degree() >= 2) {
    tail_coeffs.assign(static_cast<std::size_t>(shifted.degree()), Rat(0));
    for (int j = 2; j <= shifted.degree(); ++j)
      tail_coeffs[static_cast<std::size_t>(j - 1)] = shifted.coeff(static_cast<std::size_t>(j));
  }
  Poly tail(std::move(tail_coeffs));

  Witness wt = tail.is_zero()
                   ? constant_poly_witness(Poly(), Rat(0), nullptr)
                   : poly_fizzle(tail, Rat(0), PolyStrategy::UnitTailSum);

  // Difference quotient as stored: (p(c+t) - p(c))/t over the variable t.
  Poly numerator = tail_of(shifted);
  ExprPtr func = Expr::div(poly_to_expr(numerator), Expr::var());
  Claim claim{std::move(func), Center::at(Rat(0)), slope, Side::TwoSided};

  std::string b_list;
  for (int j = 0; j <= shifted.degree(); ++j) {
    if (j) b_list += ", ";
    b_list += shifted.coeff(static_cast<std::size_t>(j)).str();
  }
  Derivation node;
  node.rule = "Derivative";
  node.params = {{"statement", claim_statement(claim)},
                 {"delta", print_delta(wt.delta)},
                 {"center", c.str()},
                 {"derivative", slope.str()}};
  node.lines = {"p(" + shift_arg(c) + ") expands with coefficients (" + b_list +
                    "), so p'(" + c.str() + ") = " + slope.str() + ",",
                "and (p(" + shift_arg(c) + ") - p(" + c.str() + "))/t - " + slope.str() +
                    " = " + poly_pretty(tail, "t") + ", handled as a polynomial tail."};
  node.children = {wt.derivation};
  return Witness{std::move(claim), wt.delta, make_node(std::move(node)), {}};
}

Witness sin0_witness() {
  Claim claim{Expr::sin(Expr::var()), Center::at(Rat(0)), Rat(0), Side::TwoSided};
  DeltaPtr delta = DeltaExpr::min_of({DeltaExpr::constant(Rat(1)), DeltaExpr::eps()});
  Derivation node;
  node.rule = "Sin0";
  node.params = {{"statement", claim_statement(claim)}, {"delta", print_delta(delta)}};
  node.lines = {"|sin(t)| < |t| for every t != 0, so 0 < |t| < min{1, eps} forces",
                "|sin(t)| < eps (the guard 1 keeps every admissible point well inside",
                "the enclosure domain)."};
  return Witness{std::move(claim), std::move(delta), make_node(std::move(node)), {}};
}

Witness arg_scale_witness(const Rat& a, const Witness& w) {
  if (a.is_zero()) throw MathError("argument scaling by 0");
  require_fizzle(w, "argument scaling");
  if (a == Rat(1)) return w;
  if (a.sign() < 0 && w.claim.side == Side::RightOnly)
    throw MathError("argument scaling: negative factor on a right-sided claim");

  ExprPtr func = substitute_var(w.claim.func, Expr::mul(Expr::constant(a), Expr::var()));
  DeltaPtr delta = DeltaExpr::scale(a.abs().reciprocal(), w.delta);
  Claim claim{std::move(func), Center::at(Rat(0)), Rat(0), w.claim.side};
  Derivation node;
  node.rule = "ArgScale";
  node.params = {{"statement", claim_statement(claim)},
                 {"delta", print_delta(delta)},
                 {"a", a.str()}};
  node.lines = {"|" + coeff_str(a) + "*t| = " + coeff_str(a.abs()) +
                    "*|t| stays below the inner threshold whenever",
                "|t| < " + coeff_str(a.abs().reciprocal()) + "*delta_inner(eps)."};
  node.children = {w.derivation};
  return Witness{std::move(claim), std::move(delta), make_node(std::move(node)), w.assumptions};
}

Witness sin_at_witness(const Rat& c) {
  const Rat half(1, 2);
  Witness squared = product_witness(arg_scale_witness(half, sin0_witness()),
                                    arg_scale_witness(half, sin0_witness()));
  Witness doubled = scale_witness(Rat(2), squared);
  Witness core = sum_witness(doubled, sin0_witness());

  Claim claim{Expr::sub(Expr::sin(Expr::var()), Expr::sin(Expr::constant(c))),
              Center::at(c), Rat(0), Side::TwoSided};
  Derivation node;
  node.rule = "SinAt";
  node.params = {{"statement", claim_statement(claim)},
                 {"delta", print_delta(core.delta)},
                 {"center", c.str()}};
  node.lines = {"sin(" + shift_arg(c) + ") - sin(" + c.str() + ") = -sin(" + c.str() +
                    ")*2*sin(t/2)^2 + cos(" + c.str() + ")*sin(t), and with",
                "|sin(" + c.str() + ")| <= 1, |cos(" + c.str() + ")| <= 1:",
                "|sin(" + shift_arg(c) + ") - sin(" + c.str() +
                    ")| <= 2*sin(t/2)^2 + |sin(t)| < eps/2 + eps/2 = eps."};
  node.children = {core.derivation};
  return Witness{std::move(claim), core.delta, make_node(std::move(node)), core.assumptions};
}

// ---------------------------------------------------------------------------
// General (nonzero-limit) combinators

namespace {

void require_general_pair(const Witness& a, const Witness& b, const char* rule) {
  if (!(a.claim.center == b.claim.center))
    throw MathError(std::string(rule) + ": mismatched claims (different centers)");
  require_same_side(a, b, rule);
}

}  // namespace

Witness general_sum_witness(const Witness& w1, const Witness& w2) {
  require_general_pair(w1, w2, "general sum");
  DeltaPtr delta = DeltaExpr::min_of({delta_subst_eps(w1.delta, half_eps()),
                                      delta_subst_eps(w2.delta, half_eps())});
  Rat L = w1.claim.limit + w2.claim.limit;
  Claim claim{Expr::add(w1.claim.func, w2.claim.func), w1.claim.center, L, w1.claim.side};
  Derivation node;
  node.rule = "GeneralSum";
  node.params = {{"statement", claim_statement(claim)},
                 {"delta", print_delta(delta)},
                 {"L", w1.claim.limit.str()},
                 {"M", w2.claim.limit.str()}};
  node.lines = {"(f + g) - (" + L.str() + ") = (f - " + w1.claim.limit.str() + ") + (g - " +
                    w2.claim.limit.str() + "), each summand below eps/2."};
  node.children = {w1.derivation, w2.derivation};
  return Witness{std::move(claim), std::move(delta), make_node(std::move(node)),
                 merge_assumptions(w1, w2)};
}

Witness general_scalar_witness(const Rat& k, const Witness& w) {
  if (k.is_zero()) {
    Claim claim{Expr::constant(Rat(0)), w.claim.center, Rat(0), w.claim.side};
    Derivation node;
    node.rule = "GeneralScalar";
    node.params = {{"statement", claim_statement(claim)}, {"delta", "1"}, {"k", "0"}};
    node.lines = {"k = 0 leaves the zero function; take delta = 1."};
    node.children = {w.derivation};
    return Witness{std::move(claim), DeltaExpr::constant(Rat(1)), make_node(std::move(node)),
                   w.assumptions};
  }
  DeltaPtr delta = delta_subst_eps(w.delta,
                                   DeltaExpr::scale(k.abs().reciprocal(), DeltaExpr::eps()));
  Rat L = k * w.claim.limit;
  Claim claim{Expr::mul(Expr::constant(k), w.claim.func), w.claim.center, L, w.claim.side};
  Derivation node;
  node.rule = "GeneralScalar";
  node.params = {{"statement", claim_statement(claim)},
                 {"delta", print_delta(delta)},
                 {"k", k.str()}};
  node.lines = {"|" + k.str() + "*f - (" + L.str() + ")| = " + k.abs().str() + "*|f - (" +
                w.claim.limit.str() + ")| < eps using the branch at eps/" + k.abs().str() + "."};
  node.children = {w.derivation};
  return Witness{std::move(claim), std::move(delta), make_node(std::move(node)), w.assumptions};
}

Witness general_difference_witness(const Witness& w1, const Witness& w2) {
  require_general_pair(w1, w2, "general difference");
  DeltaPtr delta = DeltaExpr::min_of({delta_subst_eps(w1.delta, half_eps()),
                                      delta_subst_eps(w2.delta, half_eps())});
  Rat L = w1.claim.limit - w2.claim.limit;
  Claim claim{Expr::sub(w1.claim.func, w2.claim.func), w1.claim.center, L, w1.claim.side};
  Derivation node;
  node.rule = "GeneralDifference";
  node.params = {{"statement", claim_statement(claim)},
                 {"delta", print_delta(delta)},
                 {"L", w1.claim.limit.str()},
                 {"M", w2.claim.limit.str()}};
  node.lines = {"f - g = f + (-1)*g: (f - g) - (" + L.str() + ") = (f - " +
                    w1.claim.limit.str() + ") + (-1)*(g - " + w2.claim.limit.str() +
                    "), each summand below eps/2."};
  node.children = {w1.derivation, w2.derivation};
  return Witness{std::move(claim), std::move(delta), make_node(std::move(node)),
                 merge_assumptions(w1, w2)};
}

namespace {

// fg - LM = (f - L)(g - M) + M(f - L) + L(g - M); the three summands are
// held below eps/4, eps/4 and eps/2 (degenerating when L or M is 0).
DeltaPtr general_product_delta(const DeltaPtr& d1, const Rat& L, const DeltaPtr& d2,
                               const Rat& M) {
  DeltaPtr quarter = DeltaExpr::scale(Rat(1, 4), DeltaExpr::eps());
  DeltaPtr cross = DeltaExpr::min_of({delta_subst_eps(d1, root_eps()),
                                      delta_subst_eps(d2, root_eps())});
  std::vector<DeltaPtr> branches{delta_subst_eps(cross, quarter)};
  if (!M.is_zero())
    branches.push_back(delta_subst_eps(
        d1, DeltaExpr::scale(M.abs().reciprocal(), quarter)));
  if (!L.is_zero())
    branches.push_back(delta_subst_eps(
        d2, DeltaExpr::scale(L.abs().reciprocal(), half_eps())));
  return DeltaExpr::min_of(std::move(branches));
}

}  // namespace

Witness general_product_witness(const Witness& w1, const Witness& w2) {
  require_general_pair(w1, w2, "general product");
  const Rat& L = w1.claim.limit;
  const Rat& M = w2.claim.limit;
  DeltaPtr delta = general_product_delta(w1.delta, L, w2.delta, M);
  Rat LM = L * M;
  Claim claim{Expr::mul(w1.claim.func, w2.claim.func), w1.claim.center, LM, w1.claim.side};
  Derivation node;
  node.rule = "GeneralProduct";
  node.params = {{"statement", claim_statement(claim)},
                 {"delta", print_delta(delta)},
                 {"L", L.str()},
                 {"M", M.str()}};
  node.lines = {"f*g - (" + LM.str() + ") = (f - " + L.str() + ")*(g - " + M.str() + ") + (" +
                    M.str() + ")*(f - " + L.str() + ") + (" + L.str() + ")*(g - " + M.str() +
                    "),",
                "held below eps/4 + eps/4 + eps/2 = eps (absent summands contribute 0)."};
  node.children = {w1.derivation, w2.derivation};
  return Witness{std::move(claim), std::move(delta), make_node(std::move(node)),
                 merge_assumptions(w1, w2)};
}

Witness general_quotient_witness(const Witness& wf, const Witness& wg) {
  require_general_pair(wf, wg, "general quotient");
  const Rat& L = wf.claim.limit;
  const Rat& M = wg.claim.limit;
  if (M.is_zero()) throw MathError("general quotient: denominator limit is 0");

  // Chain: g/M -> 1, reciprocal gives M/g -> 1 (guard 1/2, threshold
  // eps/2), scaling by 1/M gives 1/g -> 1/M, and the product with f gives
  // f/g -> L/M.
  DeltaPtr d_gm = delta_subst_eps(wg.delta, DeltaExpr::scale(M.abs(), DeltaExpr::eps()));
  DeltaPtr d_rec = DeltaExpr::min_of(
      {delta_subst_eps(d_gm, DeltaExpr::constant(Rat(1, 2))),
       delta_subst_eps(d_gm, half_eps())});
  DeltaPtr d_inv = delta_subst_eps(d_rec, DeltaExpr::scale(M.abs(), DeltaExpr::eps()));
  DeltaPtr delta = general_product_delta(wf.delta, L, d_inv, M.reciprocal());

  Rat LM = L / M;
  Claim claim{Expr::div(wf.claim.func, wg.claim.func), wf.claim.center, LM, wf.claim.side};
  Derivation node;
  node.rule = "GeneralQuotient";
  node.params = {{"statement", claim_statement(claim)},
                 {"delta", print_delta(delta)},
                 {"L", L.str()},
                 {"M", M.str()}};
  node.lines = {"g/(" + M.str() + ") -> 1, and where |g/(" + M.str() + ") - 1| < 1/2 we get |(" +
                    M.str() + ")/g| < 2, so (" + M.str() + ")/g -> 1 with threshold eps/2;",
                "then 1/g = (1/(" + M.str() + "))*((" + M.str() + ")/g) -> 1/(" + M.str() +
                    "), and f*(1/g) -> (" + L.str() + ")*(1/(" + M.str() + ")) = " + LM.str() +
                    "."};
  node.errata = {"reciprocal-threshold"};
  node.children = {wf.derivation, wg.derivation};
  return Witness{std::move(claim), std::move(delta), make_node(std::move(node)),
                 merge_assumptions(wf, wg)};
}

// ---------------------------------------------------------------------------
// Dispatcher

namespace {

// u = a*x + b when the lowered form is affine with a constant denominator.
std::optional<std::pair<Rat, Rat>> as_affine(const RatFunc& u) {
  if (!u.den.is_constant() || u.num.degree() > 1) return std::nullopt;
  Rat d = u.den.coeff(0);
  return std::make_pair(u.num.coeff(1) / d, u.num.coeff(0) / d);
}

// Witness for sin(arg) at a finite center where arg is affine and
// vanishes there, so the limit is the rational 0.
Witness sin_leaf_witness(const ExprPtr& sin_expr, const Rat& a, const Rat& c) {
  Witness scaled = a == Rat(1) ? sin0_witness() : arg_scale_witness(a, sin0_witness());
  return recenter_witness(scaled, c, Rat(0), sin_expr);
}

Witness build_at(const ExprPtr& e, const Rat& c, PolyStrategy strategy, bool top);

Witness build_sin_node(const ExprPtr& e, const Rat& c, bool top) {
  auto arg_rf = lower_rational(e->a);
  if (!arg_rf) throw UnsupportedError("nested sin applications are not supported");
  auto affine = as_affine(*arg_rf);
  if (!affine)
    throw UnsupportedError("sin argument must be affine in x for witness construction");
  const Rat& a = affine->first;
  Rat at_center = a * c + affine->second;

  if (a.is_zero()) {
    if (!at_center.is_zero())
      throw UnsupportedError("constant sin(" + at_center.str() + ") has an irrational value");
    return poly_witness(Poly(), c, PolyStrategy::UnitTailSum, e);
  }
  if (at_center.is_zero()) return sin_leaf_witness(e, a, c);
  if (!top)
    throw UnsupportedError(
        "sin with an irrational limit at the center is only supported standalone");

  // Standalone sin(u(x)) with u(c) = d != 0: prove sin(u(x)) - sin(d) -> 0.
  Witness base = sin_at_witness(at_center);
  if (a == Rat(1) && e->a->kind == Expr::Kind::Var) return base;
  ExprPtr func = Expr::sub(e, Expr::sin(Expr::constant(at_center)));
  DeltaPtr delta = DeltaExpr::scale(a.abs().reciprocal(), base.delta);
  Claim claim{std::move(func), Center::at(c), Rat(0), Side::TwoSided};
  Derivation node;
  node.rule = "ArgScale";
  node.params = {{"statement", claim_statement(claim)},
                 {"delta", print_delta(delta)},
                 {"a", a.str()}};
  node.lines = {"The argument " + print_expr(e->a) + " moves by " + coeff_str(a) +
                    "*t around " + at_center.str() + ", so the inner threshold is met",
                "whenever |t| < " + coeff_str(a.abs().reciprocal()) + "*delta_inner(eps)."};
  node.children = {base.derivation};
  return Witness{std::move(claim), std::move(delta), make_node(std::move(node)),
                 base.assumptions};
}

Witness build_at(const ExprPtr& e, const Rat& c, PolyStrategy strategy, bool top) {
  if (auto rf = lower_rational(e)) {
    if (rf->den.is_constant()) {
      Poly p = rf->num.scaled(rf->den.coeff(0).reciprocal());
      return poly_witness(p, c, strategy, e);
    }
    return ratfunc_witness(rf->num, rf->den, c, e);
  }
  switch (e->kind) {
    case Expr::Kind::Sin:
      return build_sin_node(e, c, top);
    case Expr::Kind::Add:
      return general_sum_witness(build_at(e->a, c, strategy, false),
                                 build_at(e->b, c, strategy, false));
    case Expr::Kind::Sub:
      return general_difference_witness(build_at(e->a, c, strategy, false),
                                        build_at(e->b, c, strategy, false));
    case Expr::Kind::Mul: {
      auto scalar_of = [](const ExprPtr& side) -> std::optional<Rat> {
        auto rf = lower_rational(side);
        if (rf && rf->den.is_constant() && rf->num.is_constant())
          return rf->num.coeff(0) / rf->den.coeff(0);
        return std::nullopt;
      };
      if (auto k = scalar_of(e->a))
        return general_scalar_witness(*k, build_at(e->b, c, strategy, false));
      if (auto k = scalar_of(e->b))
        return general_scalar_witness(*k, build_at(e->a, c, strategy, false));
      return general_product_witness(build_at(e->a, c, strategy, false),
                                     build_at(e->b, c, strategy, false));
    }
    case Expr::Kind::Div:
      return general_quotient_witness(build_at(e->a, c, strategy, false),
                                      build_at(e->b, c, strategy, false));
    case Expr::Kind::Pow: {
      if (e->exponent == 0) return poly_witness(Poly::constant(Rat(1)), c, strategy, e);
      Witness acc = build_at(e->a, c, strategy, false);
      for (unsigned i = 1; i < e->exponent; ++i)
        acc = general_product_witness(acc, build_at(e->a, c, strategy, false));
      return acc;
    }
    default:
      throw UnsupportedError("expression outside the supported fragment");
  }
}

}  // namespace

Witness auto_witness(const ExprPtr& e, const Center& center,
                     const std::optional<Rat>& stated_limit, PolyStrategy strategy) {
  Lowered lowered = lower_expr(e);
  Witness w;
  if (center.infinite) {
    if (lowered.kind == LoweredKind::SinPattern)
      throw UnsupportedError("sin claims at infinity are not supported");
    RatFunc rf = lowered.kind == LoweredKind::Polynomial
                     ? RatFunc(lowered.poly, Poly::constant(Rat(1)))
                     : lowered.rf;
    w = infinity_witness(rf, e);
  } else {
    w = build_at(e, center.value, strategy, true);
    const bool subtracted_form = w.claim.func->kind == Expr::Kind::Sub &&
                                 expr_equal(w.claim.func->a, e);
    if (subtracted_form) {
      // Keep the sin(u(x)) - sin(u(c)) form produced for irrational limits.
    } else if (!expr_equal(w.claim.func, e)) {
      // Composite assemblies (powers, scalar splits) can rebuild the
      // function in an equivalent shape; restate the original.
      probe_equal(substitute_var(w.claim.func, Expr::add(Expr::constant(center.value),
                                                         Expr::var())),
                  substitute_var(e, Expr::add(Expr::constant(center.value), Expr::var())),
                  w.claim.side, "auto");
      Claim claim = w.claim;
      claim.func = e;
      w.claim = std::move(claim);
    }
  }
  if (stated_limit && *stated_limit != w.claim.limit) {
    if (contains_sin(w.claim.func) && w.claim.limit.is_zero() &&
        !expr_equal(w.claim.func, e))
      throw MathError(
          "the limit here is irrational; it is proved in subtracted form with limit 0 "
          "(use the automatic limit)");
    throw MathError("stated limit " + stated_limit->str() +
                    " differs from the computed limit " + w.claim.limit.str() +
                    "; the claim is false");
  }
  return w;
}

}  // namespace fizzle
