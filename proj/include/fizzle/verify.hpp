#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fizzle/witness.hpp"

namespace fizzle {

std::vector<Rat> default_eps_grid();  // {10^k : k = -6..2}

struct VerifyConfig {
  std::vector<Rat> eps_grid = default_eps_grid();
  unsigned samples_per_eps = 64;  // >= 8
  std::uint64_t seed = 1;
  unsigned root_precision_bits = 64;
  unsigned sin_degree = 13;  // odd; escalation goes up to 2x this
};

// An explicit violation of the guarantee, re-checkable exactly from its
// fields alone: 0 < |t| < delta(eps) (side-respecting) and the output
// error at t is at least error_lower_bound >= eps. pole marks an
// admissible point where the claimed function is not even defined.
struct Counterexample {
  Rat eps;
  Rat t;
  Rat error_lower_bound;
  bool pole = false;
};

struct IndeterminatePoint {
  Rat eps;
  Rat t;
};

struct VerificationReport {
  std::size_t eps_checked = 0;
  std::size_t points_checked = 0;
  std::vector<Counterexample> violations;
  std::vector<IndeterminatePoint> indeterminate;
  std::vector<std::string> assumptions;
  VerifyConfig config;

  std::string status() const {
    if (!violations.empty()) return "violations";
    if (!indeterminate.empty()) return "indeterminate";
    return "corroborated";
  }
};

// Deterministic blend of magnitudes in (0, delta): boundary-hugging
// points delta*(1 - 2^-i) for i = 1..min(8, n), the midpoint delta/2, a
// tiny point delta*2^-20, and seeded pseudo-random rationals delta*m/2^30
// until n distinct magnitudes exist. Two-sided claims get each magnitude
// with both signs. Never emits 0 or |t| >= delta. Ordered by |t|
// ascending, positive sign first.
std::vector<Rat> sample_points(const Rat& delta_value, unsigned n, std::uint64_t seed,
                               Side side);

// Exact-rational audit of a witness over the (eps, t) grid. Output errors
// are computed exactly for rational claims and as enclosures for
// sin-containing claims; an enclosure that straddles eps escalates the
// sin degree up to 2x the configured one and is recorded as indeterminate
// if still undecided -- never as a violation.
VerificationReport verify_witness(const Witness& w, const VerifyConfig& cfg);

struct FalsifyResult {
  std::optional<Counterexample> counterexample;
  std::size_t points_checked = 0;

  std::string status() const {
    return counterexample ? "counterexample" : "no counterexample at budget";
  }
};

// Search for a violation of an externally claimed delta formula, scanning
// output thresholds from the largest grid entry down and stopping at the
// first eps that produces one; the returned point is the smallest |t|
// violation found there, shrunk by halving toward 0 while the violation
// persists. Absence of a counterexample is not a soundness proof.
FalsifyResult falsify(const Claim& claim, const DeltaPtr& delta, std::size_t budget,
                      const VerifyConfig& cfg);

// Exact limit of a rational function at a finite center (p(c)/q(c)) or at
// infinity (value of the substituted function at 0). Throws MathError on
// a pole.
Rat check_limit_value(const RatFunc& f, const Center& center);

// Replays a counterexample from its fields alone with one exact
// evaluation (enclosure lower bound for sin claims).
bool recheck_counterexample(const Claim& claim, const DeltaPtr& delta,
                            const Counterexample& ce, const VerifyConfig& cfg);

}  // namespace fizzle
