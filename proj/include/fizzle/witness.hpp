#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fizzle/delta.hpp"
#include "fizzle/expr.hpp"
#include "fizzle/poly.hpp"

namespace fizzle {

enum class Side { TwoSided, RightOnly };

// Finite rational center or +infinity.
struct Center {
  bool infinite = false;
  Rat value;

  static Center at(Rat c) { return Center{false, std::move(c)}; }
  static Center inf() { return Center{true, Rat(0)}; }

  friend bool operator==(const Center& a, const Center& b) {
    return a.infinite == b.infinite && (a.infinite || a.value == b.value);
  }
  std::string str() const { return infinite ? "inf" : value.str(); }
};

// A limit claim: lim_{x -> center} func(x) = limit (right-sided when
// side = RightOnly; center = inf forces the right-sided reading of the
// substituted variable t = 1/x).
struct Claim {
  ExprPtr func;
  Center center;
  Rat limit;
  Side side = Side::TwoSided;
};

struct Derivation;
using DerivPtr = std::shared_ptr<const Derivation>;

// Tree of rule applications, one node per constructor call. Each node
// carries the pre-rendered statement, delta, and bound-chain lines that
// the proof renderer replays verbatim; rendering never re-derives.
struct Derivation {
  std::string rule;
  std::vector<std::pair<std::string, std::string>> params;
  std::vector<std::string> lines;
  std::vector<std::string> errata;  // footnote keys
  std::vector<DerivPtr> children;
};

// The central contract: for every eps > 0 and every t with
// 0 < |t| < value(delta, eps) (t > 0 when right-sided),
// |f(c + t) - L| < eps, reading f(1/t) for claims at infinity.
// Any smaller positive delta inherits the guarantee, which is what makes
// conservative (rounded-down) delta evaluation sound.
struct Witness {
  Claim claim;
  DeltaPtr delta;
  DerivPtr derivation;
  std::vector<std::string> assumptions;  // e.g. sampled squeeze ordering
};

// Two ways to pick delta for a polynomial tail sum b_1 t + ... + b_n t^n:
//   PerTermRoots -- every nonzero term held below eps/n via
//                   |t| <= (eps/(n|b_j|))^(1/j)  (no root at j = 1);
//   UnitTailSum  -- min{1, eps/B} with B = sum |b_j|.
enum class PolyStrategy { PerTermRoots, UnitTailSum };

std::string claim_statement(const Claim& c);

// --- Centered combinators (claims at 0 with limit 0) ----------------------

Witness identity_witness();                                   // t -> 0, delta = eps
Witness sum_witness(const Witness& w1, const Witness& w2);    // eps/2 each
Witness scale_witness(const Rat& k, const Witness& w);        // eps/|k|; k = 0 trivial
Witness product_witness(const Witness& w1, const Witness& w2);// sqrt(eps) each
// Child encodes f - 1 -> 0; result covers 1/f -> 1. Thresholds are the
// guard 1/2 and eps/2 (the inverted-bound pairing 1/2 with 2*eps fails).
Witness reciprocal_witness(const Witness& w);
// lower <= g <= upper on 0 < |t| < locality is sampled, not proven; the
// witness carries that as a recorded assumption.
Witness squeeze_witness(const Witness& lower, const Witness& upper,
                        const Rat& locality, const ExprPtr& g);

// --- Recentering -----------------------------------------------------------

// Claim becomes lim_{x -> c} f = L; delta passes through untouched. The
// hypothesis that w's function equals f(c + .) - L is checked by sampling
// at probe points (exactly for rational functions, by enclosure overlap
// for sin patterns).
Witness recenter_witness(const Witness& w, const Rat& c, const Rat& L,
                         const ExprPtr& f,
                         std::vector<std::string> algebra_lines = {});

// --- Direct constructors ---------------------------------------------------

Witness poly_witness(const Poly& p, const Rat& c, PolyStrategy strategy);
Witness poly_witness(const Poly& p, const Rat& c, PolyStrategy strategy,
                     const ExprPtr& claim_func);

// Positivity radius: r = |q(c)|/2 and a concrete rational guard with
// |q(c + t)| > r for 0 < |t| < guard. Throws MathError when q(c) = 0.
struct PositivityGuard {
  Rat radius;
  Rat guard;
  DerivPtr derivation;
};
PositivityGuard positivity_guard(const Poly& q, const Rat& c);

Witness ratfunc_witness(const Poly& p, const Poly& q, const Rat& c);
Witness ratfunc_witness(const Poly& p, const Poly& q, const Rat& c,
                        const ExprPtr& claim_func);

// lim_{x -> inf} f(x) via the substitution x = 1/t (right-sided fizzle
// claim; delta = 1/M). Throws MathError when f(1/t) has a pole at 0.
Witness infinity_witness(const RatFunc& f);
Witness infinity_witness(const RatFunc& f, const ExprPtr& claim_func);

// lim_{t -> 0} (p(c + t) - p(c))/t = p'(c), by bounding the polynomial
// tail sum_{j>=2} b_j t^(j-1).
Witness derivative_witness(const Poly& p, const Rat& c);

Witness sin0_witness();  // lim_{t -> 0} sin(t) = 0, delta = min{1, eps}
// t -> f(a t); delta scales by 1/|a|. a must be nonzero, and positive for
// right-sided children.
Witness arg_scale_witness(const Rat& a, const Witness& w);
// lim_{x -> c} sin(x) = sin(c), carried as sin(x) - sin(c) -> 0 so the
// stated limit stays rational. sin(c), cos(c) coefficients are replaced
// by their absolute bound 1 to keep every scalar rational.
Witness sin_at_witness(const Rat& c);

// --- General (nonzero-limit) combinators -----------------------------------

Witness general_sum_witness(const Witness& w1, const Witness& w2);
Witness general_scalar_witness(const Rat& k, const Witness& w);
Witness general_difference_witness(const Witness& w1, const Witness& w2);
Witness general_product_witness(const Witness& w1, const Witness& w2);
Witness general_quotient_witness(const Witness& wf, const Witness& wg);

// --- Dispatcher --------------------------------------------------------------

// Builds the witness for an arbitrary supported expression: polynomials,
// rational functions (finite centers and infinity), and sin patterns.
// A supplied limit that disagrees with the computed one raises MathError.
Witness auto_witness(const ExprPtr& e, const Center& center,
                     const std::optional<Rat>& stated_limit,
                     PolyStrategy strategy = PolyStrategy::UnitTailSum);

}  // namespace fizzle
