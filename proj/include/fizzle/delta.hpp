#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fizzle/rat.hpp"

namespace fizzle {

struct DeltaExpr;
using DeltaPtr = std::shared_ptr<const DeltaExpr>;

// Symbolic delta(eps) built from eps by positive rational scaling, j-th
// roots, positive constants, and min. Every such expression is positive
// and monotone nondecreasing in eps. Evaluation at a rational eps yields
// a rational LOWER bound of the exact value (roots round down), and
// lowering the root precision never raises the result; any smaller
// positive delta is still valid, so conservative evaluation is safe.
struct DeltaExpr {
  enum class Kind { Const, Eps, Scale, Root, Min };

  Kind kind = Kind::Eps;
  Rat value;                      // Const amount or Scale factor (> 0)
  DeltaPtr child;                 // Scale / Root
  unsigned root_degree = 0;       // Root (>= 2)
  std::vector<DeltaPtr> children; // Min (>= 2 entries)

  // Smart constructors canonicalize: nested scales collapse, scale of a
  // constant folds, unit scales and first roots vanish, nested mins
  // flatten and structurally equal branches deduplicate.
  static DeltaPtr eps();
  static DeltaPtr constant(const Rat& q);        // throws MathError unless q > 0
  static DeltaPtr scale(const Rat& q, DeltaPtr c);
  static DeltaPtr root(DeltaPtr c, unsigned j);
  static DeltaPtr min_of(std::vector<DeltaPtr> cs);
};

bool delta_equal(const DeltaPtr& a, const DeltaPtr& b);

// Replace every eps leaf (used by the combinators to retarget thresholds,
// e.g. eps -> eps/2 or eps -> sqrt(eps)).
DeltaPtr delta_subst_eps(const DeltaPtr& d, const DeltaPtr& replacement);

// Conservative evaluation: rational lower bound of the exact value, exact
// when no roots are present. May return 0 at very coarse precision.
Rat delta_eval(const DeltaPtr& d, const Rat& eps, unsigned root_precision_bits);

// Exact admissibility test: decides t_abs < value(d, eps) with no rounding
// by pushing the comparison through scales (divide) and roots (raise to
// the j-th power). Requires t_abs >= 0.
bool delta_exceeds(const DeltaPtr& d, const Rat& eps, const Rat& t_abs);

// Canonical printer: Min -> "min{...}", Scale(q, Eps) -> "eps/k" when
// q = 1/k (else "p*eps" / "p*eps/q"), Root(e, j) -> "(e)^(1/j)".
std::string print_delta(const DeltaPtr& d);

// Inverse of print_delta; accepts the same grammar. Throws SyntaxError or
// MathError (nonpositive constant).
DeltaPtr parse_delta(std::string_view src);

}  // namespace fizzle
