#include "fizzle/verify.hpp"

#include <algorithm>
#include <set>

#include "fizzle/errors.hpp"

namespace fizzle {

namespace {

struct SplitMix64 {
  std::uint64_t state;
  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }
};

void validate_config(const VerifyConfig& cfg) {
  if (cfg.samples_per_eps < 8) throw Error("samples_per_eps must be at least 8");
  if (cfg.sin_degree % 2 == 0 || cfg.sin_degree < 1)
    throw Error("sin_degree must be odd and positive");
  if (cfg.root_precision_bits == 0) throw Error("root_precision_bits must be positive");
  if (cfg.eps_grid.empty()) throw Error("eps grid must not be empty");
  for (const Rat& e : cfg.eps_grid)
    if (e.sign() <= 0) throw Error("eps grid entries must be positive");
}

// Recentered error machinery for a claim: |f(c + t) - L| computed exactly
// (rational claims) or as an enclosure (sin-containing claims); claims at
// infinity run through the 1/t substitution first.
struct ErrorEval {
  bool exact = true;
  RatFunc rf;          // exact path: the output error is |rf(t)|
  ExprPtr recentered;  // enclosure path: expression in t for f(c+t) - L
};

ErrorEval make_error_eval(const Claim& claim) {
  if (claim.center.infinite) {
    auto rf = lower_rational(claim.func);
    if (!rf) throw UnsupportedError("sin claims at infinity are not supported");
    RatFunc g = infinity_substitute(*rf);
    Poly num = g.num - g.den.scaled(claim.limit);
    return ErrorEval{true, RatFunc(std::move(num), g.den), nullptr};
  }
  if (auto rf = lower_rational(claim.func)) {
    // Recentered error as an exact quotient. Unlike centered_difference
    // this does not require den(c) != 0: difference quotients legitimately
    // vanish at the center, and sampled points are never 0 anyway.
    Poly dden = taylor_shift(rf->den, claim.center.value);
    Poly dnum = taylor_shift(rf->num, claim.center.value) - dden.scaled(claim.limit);
    return ErrorEval{true, RatFunc(std::move(dnum), std::move(dden)), nullptr};
  }
  ExprPtr shifted = substitute_var(
      claim.func, Expr::add(Expr::constant(claim.center.value), Expr::var()));
  return ErrorEval{false, RatFunc(),
                   Expr::sub(std::move(shifted), Expr::constant(claim.limit))};
}

enum class PointOutcome { Pass, Violation, Pole, Indeterminate };

struct PointResult {
  PointOutcome outcome;
  Rat error_lower_bound;
};

PointResult check_point(const ErrorEval& eval, const Rat& t, const Rat& eps,
                        const VerifyConfig& cfg) {
  if (eval.exact) {
    try {
      Rat err = eval.rf.eval(t).abs();
      if (err >= eps) return {PointOutcome::Violation, std::move(err)};
      return {PointOutcome::Pass, Rat(0)};
    } catch (const PoleError&) {
      return {PointOutcome::Pole, Rat(0)};
    }
  }
  for (unsigned degree = cfg.sin_degree; degree <= 2 * cfg.sin_degree; degree += 2) {
    try {
      Interval err = abs(eval_expr_interval(eval.recentered, t, degree));
      if (err.lo >= eps) return {PointOutcome::Violation, err.lo};
      if (err.hi < eps) return {PointOutcome::Pass, Rat(0)};
    } catch (const PoleError&) {
      return {PointOutcome::Pole, Rat(0)};
    } catch (const IndeterminateError&) {
    } catch (const EnclosureRangeError&) {
      break;
    }
  }
  return {PointOutcome::Indeterminate, Rat(0)};
}

Side effective_side(const Claim& claim) {
  return claim.center.infinite ? Side::RightOnly : claim.side;
}

void sort_canonically(std::vector<Counterexample>& v) {
  std::sort(v.begin(), v.end(), [](const Counterexample& a, const Counterexample& b) {
    if (a.eps != b.eps) return a.eps < b.eps;
    Rat aa = a.t.abs(), bb = b.t.abs();
    if (aa != bb) return aa < bb;
    return a.t.sign() > b.t.sign();
  });
}

}  // namespace

std::vector<Rat> default_eps_grid() {
  std::vector<Rat> grid;
  for (int k = -6; k <= 2; ++k) grid.push_back(Rat::pow10(k));
  return grid;
}

std::vector<Rat> sample_points(const Rat& delta_value, unsigned n, std::uint64_t seed,
                               Side side) {
  if (delta_value.sign() <= 0) return {};
  if (n == 0) n = 1;

  std::set<Rat> magnitudes;
  for (unsigned i = 1; i <= std::min(8u, n); ++i) {
    Rat frac = Rat(1) - Rat(BigInt(1), BigInt(1) << i);
    magnitudes.insert(delta_value * frac);
  }
  magnitudes.insert(delta_value / Rat(2));
  magnitudes.insert(delta_value * Rat(BigInt(1), BigInt(1) << 20));

  SplitMix64 rng{seed};
  const std::uint64_t mask = (1ULL << 30) - 1;
  while (magnitudes.size() < n) {
    std::uint64_t m = rng.next() & mask;
    if (m == 0) continue;
    magnitudes.insert(delta_value * Rat(BigInt(m), BigInt(1) << 30));
  }

  std::vector<Rat> out;
  out.reserve(magnitudes.size() * (side == Side::TwoSided ? 2 : 1));
  for (const Rat& m : magnitudes) {
    out.push_back(m);
    if (side == Side::TwoSided) out.push_back(-m);
  }
  return out;
}

VerificationReport verify_witness(const Witness& w, const VerifyConfig& cfg) {
  validate_config(cfg);
  VerificationReport report;
  report.config = cfg;
  report.assumptions = w.assumptions;

  ErrorEval eval = make_error_eval(w.claim);
  const Side side = effective_side(w.claim);

  for (std::size_t idx = 0; idx < cfg.eps_grid.size(); ++idx) {
    const Rat& eps = cfg.eps_grid[idx];
    ++report.eps_checked;
    Rat delta_value = delta_eval(w.delta, eps, cfg.root_precision_bits);
    if (delta_value.sign() <= 0) continue;  // conservative rounding left nothing to test
    for (const Rat& t :
         sample_points(delta_value, cfg.samples_per_eps, cfg.seed + idx, side)) {
      ++report.points_checked;
      PointResult res = check_point(eval, t, eps, cfg);
      switch (res.outcome) {
        case PointOutcome::Pass:
          break;
        case PointOutcome::Violation:
          report.violations.push_back({eps, t, res.error_lower_bound, false});
          break;
        case PointOutcome::Pole:
          report.violations.push_back({eps, t, eps, true});
          break;
        case PointOutcome::Indeterminate:
          report.indeterminate.push_back({eps, t});
          break;
      }
    }
  }

  sort_canonically(report.violations);
  std::sort(report.indeterminate.begin(), report.indeterminate.end(),
            [](const IndeterminatePoint& a, const IndeterminatePoint& b) {
              if (a.eps != b.eps) return a.eps < b.eps;
              Rat aa = a.t.abs(), bb = b.t.abs();
              if (aa != bb) return aa < bb;
              return a.t.sign() > b.t.sign();
            });
  return report;
}

FalsifyResult falsify(const Claim& claim, const DeltaPtr& delta, std::size_t budget,
                      const VerifyConfig& cfg) {
  validate_config(cfg);
  FalsifyResult result;

  ErrorEval eval = make_error_eval(claim);
  const Side side = effective_side(claim);

  // Largest output thresholds first: gross violations surface at the scale
  // where the claimed formula is loosest.
  std::vector<Rat> grid = cfg.eps_grid;
  std::sort(grid.begin(), grid.end(), [](const Rat& a, const Rat& b) { return b < a; });

  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const Rat& eps = grid[idx];
    Rat delta_value = delta_eval(delta, eps, cfg.root_precision_bits);
    if (delta_value.sign() <= 0) continue;

    std::vector<Counterexample> found;
    for (const Rat& t : sample_points(delta_value, cfg.samples_per_eps, cfg.seed + idx, side)) {
      if (result.points_checked >= budget) break;
      ++result.points_checked;
      PointResult res = check_point(eval, t, eps, cfg);
      if (res.outcome == PointOutcome::Violation)
        found.push_back({eps, t, res.error_lower_bound, false});
      else if (res.outcome == PointOutcome::Pole)
        found.push_back({eps, t, eps, true});
    }

    if (!found.empty()) {
      sort_canonically(found);
      Counterexample best = found.front();
      // Shrink toward 0 while the violation persists; smaller |t| means a
      // starker counterexample (every smaller threshold admits it too).
      for (int step = 0; step < 64 && !best.pole; ++step) {
        Rat t2 = best.t / Rat(2);
        PointResult res = check_point(eval, t2, eps, cfg);
        if (res.outcome != PointOutcome::Violation) break;
        best = {eps, t2, res.error_lower_bound, false};
      }
      result.counterexample = best;
      return result;
    }
    if (result.points_checked >= budget) break;
  }
  return result;
}

Rat check_limit_value(const RatFunc& f, const Center& center) {
  if (center.infinite) {
    RatFunc g = infinity_substitute(f);
    if (g.den.eval(Rat(0)).is_zero())
      throw MathError("no finite limit at infinity: f(1/t) has a pole at t = 0");
    return g.eval(Rat(0));
  }
  return f.eval(center.value);  // PoleError (a MathError) on q(c) = 0
}

bool recheck_counterexample(const Claim& claim, const DeltaPtr& delta,
                            const Counterexample& ce, const VerifyConfig& cfg) {
  if (ce.t.is_zero()) return false;
  if (effective_side(claim) == Side::RightOnly && ce.t.sign() <= 0) return false;
  if (!delta_exceeds(delta, ce.eps, ce.t.abs())) return false;
  if (!ce.pole && ce.error_lower_bound < ce.eps) return false;

  ErrorEval eval = make_error_eval(claim);
  PointResult res = check_point(eval, ce.t, ce.eps, cfg);
  if (ce.pole) return res.outcome == PointOutcome::Pole;
  return res.outcome == PointOutcome::Violation &&
         res.error_lower_bound >= ce.error_lower_bound;
}

}  // namespace fizzle
