#include <doctest.h>

#include "fizzle/emit.hpp"
#include "fizzle/errors.hpp"
#include "fizzle/verify.hpp"

using namespace fizzle;

namespace {

Rat rat(long long n, long long d = 1) { return Rat(BigInt(n), BigInt(d)); }

Poly poly(std::initializer_list<long long> coeffs) {
  std::vector<Rat> c;
  for (long long v : coeffs) c.push_back(rat(v));
  return Poly(std::move(c));
}

}  // namespace

TEST_CASE("sample points: deterministic blend inside (0, delta)") {
  std::vector<Rat> pts = sample_points(rat(1), 3, 42, Side::RightOnly);
  bool has_half = false, has_tiny = false;
  for (const Rat& t : pts) {
    CHECK(t.sign() > 0);
    CHECK(t < rat(1));
    if (t == rat(1, 2)) has_half = true;
    if (t == Rat(BigInt(1), BigInt(1) << 20)) has_tiny = true;
  }
  CHECK(has_half);
  CHECK(has_tiny);

  // delta*(1 - 2^-1) and the midpoint deduplicate.
  int halves = 0;
  for (const Rat& t : pts)
    if (t == rat(1, 2)) ++halves;
  CHECK(halves == 1);

  CHECK(sample_points(rat(1), 3, 42, Side::RightOnly) == pts);  // determinism

  std::vector<Rat> two = sample_points(rat(3, 7), 64, 7, Side::TwoSided);
  CHECK(two.size() == 128);
  for (std::size_t i = 0; i + 1 < two.size(); i += 2) {
    CHECK(two[i].sign() > 0);
    CHECK(two[i + 1] == -two[i]);
    CHECK(two[i] < rat(3, 7));
  }
}

TEST_CASE("verify corroborates the worked polynomial witness") {
  Witness w = poly_witness(poly({0, 3, 1}), rat(1), PolyStrategy::UnitTailSum);
  VerificationReport report = verify_witness(w, VerifyConfig{});
  CHECK(report.status() == "corroborated");
  CHECK(report.violations.empty());
  CHECK(report.eps_checked == 9);
  CHECK(report.points_checked == 9 * 128);
}

TEST_CASE("verify accepts the identically zero claim at any config") {
  Witness w = scale_witness(rat(0), identity_witness());
  VerifyConfig cfg;
  cfg.samples_per_eps = 16;
  cfg.seed = 99;
  VerificationReport report = verify_witness(w, cfg);
  CHECK(report.status() == "corroborated");
}

TEST_CASE("a corrupted (doubled) delta is caught") {
  Witness w = poly_witness(poly({0, 5, 1}), rat(0), PolyStrategy::UnitTailSum);
  Witness corrupted = w;
  corrupted.delta = DeltaExpr::scale(rat(2), w.delta);  // min{2, eps/3}

  VerificationReport report = verify_witness(corrupted, VerifyConfig{});
  CHECK(report.status() == "violations");
  bool at_one = false;
  for (const auto& v : report.violations)
    if (v.eps == rat(1)) at_one = true;
  CHECK(at_one);

  // The documented fixture re-checks exactly: eps = 1, t = 33/100,
  // |t^2 + 5t| = 17589/10000 >= 1.
  Counterexample fixture{rat(1), rat(33, 100), rat(17589, 10000), false};
  CHECK(recheck_counterexample(corrupted.claim, corrupted.delta, fixture, VerifyConfig{}));
  // The uncorrupted witness does not admit that point.
  CHECK(!recheck_counterexample(w.claim, w.delta, fixture, VerifyConfig{}));
}

TEST_CASE("every reported counterexample re-checks from its fields") {
  Witness w = poly_witness(poly({0, 5, 1}), rat(0), PolyStrategy::UnitTailSum);
  Witness corrupted = w;
  corrupted.delta = DeltaExpr::scale(rat(3), w.delta);
  VerificationReport report = verify_witness(corrupted, VerifyConfig{});
  CHECK(!report.violations.empty());
  for (const auto& v : report.violations)
    CHECK(recheck_counterexample(corrupted.claim, corrupted.delta, v, VerifyConfig{}));
}

TEST_CASE("falsifier finds the unsound per-term-roots variant") {
  // Claimed delta min{(eps/2)^(1/2), (eps/10)^(1/2)} for x^2+3x -> 4 at 1.
  Claim claim{parse_expression("x^2+3*x"), Center::at(rat(1)), rat(4), Side::TwoSided};
  DeltaPtr delta = parse_delta("min{(eps/2)^(1/2), (eps/10)^(1/2)}");
  FalsifyResult result = falsify(claim, delta, 10000, VerifyConfig{});
  REQUIRE(result.counterexample.has_value());
  CHECK(result.status() == "counterexample");
  CHECK(result.counterexample->eps == rat(1));
  CHECK(result.counterexample->t.abs() <= rat(1, 3));
  CHECK(result.counterexample->error_lower_bound >= rat(1));
  CHECK(recheck_counterexample(claim, delta, *result.counterexample, VerifyConfig{}));

  // The documented fixture is accepted by the re-checker.
  Counterexample fixture{rat(1), rat(3, 10), rat(159, 100), false};
  CHECK(recheck_counterexample(claim, delta, fixture, VerifyConfig{}));
}

TEST_CASE("falsifier finds the inverted reciprocal threshold") {
  Claim claim{parse_expression("1/(1+x)"), Center::at(rat(0)), rat(1), Side::TwoSided};
  DeltaPtr bad = parse_delta("min{1/2, 2*eps}");
  FalsifyResult result = falsify(claim, bad, 10000, VerifyConfig{});
  REQUIRE(result.counterexample.has_value());
  CHECK(recheck_counterexample(claim, bad, *result.counterexample, VerifyConfig{}));

  // The corrected constants verify clean on the same grid.
  Witness fixed = reciprocal_witness(identity_witness());
  CHECK(verify_witness(fixed, VerifyConfig{}).status() == "corroborated");
}

TEST_CASE("falsifier corroborates the sound worked deltas") {
  Claim inf_claim{parse_expression("(2*x+1)/(3*x-4)"), Center::inf(), rat(2, 3),
                  Side::RightOnly};
  FalsifyResult inf = falsify(inf_claim, parse_delta("min{3/8, 9*eps/14}"), 10000,
                              VerifyConfig{});
  CHECK(!inf.counterexample.has_value());
  CHECK(inf.status() == "no counterexample at budget");

  Claim rational_claim{parse_expression("(x+1)/((x-1)*(x^2+1))"), Center::at(rat(2)),
                       rat(3, 5), Side::TwoSided};
  FalsifyResult rat_result =
      falsify(rational_claim, parse_delta("min{1/2, eps/4}"), 10000, VerifyConfig{});
  CHECK(!rat_result.counterexample.has_value());
}

TEST_CASE("exact limit values") {
  RatFunc f(poly({1, 1}), poly({-1, 1}) * poly({1, 0, 1}));
  CHECK(check_limit_value(f, Center::at(rat(2))) == rat(3, 5));
  CHECK_THROWS_AS(check_limit_value(f, Center::at(rat(1))), MathError);
  CHECK(check_limit_value(RatFunc(poly({1, 2}), poly({-4, 3})), Center::inf()) == rat(2, 3));
  CHECK(check_limit_value(RatFunc(poly({1, 1}), poly({1, 1})), Center::at(rat(0))) == rat(1));
  CHECK_THROWS_AS(check_limit_value(RatFunc(poly({0, 0, 1}), poly({1, 1})), Center::inf()),
                  MathError);
}

TEST_CASE("reports are deterministic") {
  Witness w = ratfunc_witness(poly({1, 1}), poly({-1, 1}) * poly({1, 0, 1}), rat(2));
  VerifyConfig cfg;
  cfg.seed = 2024;
  std::string a = report_to_json(verify_witness(w, cfg)).dump(2);
  std::string b = report_to_json(verify_witness(w, cfg)).dump(2);
  CHECK(a == b);
}

TEST_CASE("conservative evaluation never flips corroboration") {
  Witness w = product_witness(identity_witness(), identity_witness());
  VerifyConfig coarse;
  coarse.root_precision_bits = 16;
  CHECK(verify_witness(w, coarse).status() == "corroborated");
  VerifyConfig fine;
  fine.root_precision_bits = 64;
  CHECK(verify_witness(w, fine).status() == "corroborated");
}

TEST_CASE("downward closure: halving a sound delta stays sound") {
  Witness w = ratfunc_witness(poly({1, 1}), poly({-1, 1}) * poly({1, 0, 1}), rat(2));
  Witness halved = w;
  halved.delta = DeltaExpr::scale(rat(1, 2), w.delta);
  CHECK(verify_witness(halved, VerifyConfig{}).status() == "corroborated");
}

TEST_CASE("sin-containing squeeze verifies through enclosures") {
  // -t^2 <= sin(t)^2 <= t^2 near 0, with the ordering sampled.
  Witness lo = poly_witness(poly({0, 0, -1}), rat(0), PolyStrategy::UnitTailSum);
  Witness hi = poly_witness(poly({0, 0, 1}), rat(0), PolyStrategy::UnitTailSum);
  Witness w = squeeze_witness(lo, hi, rat(1), parse_expression("sin(x)^2"));
  VerificationReport report = verify_witness(w, VerifyConfig{});
  CHECK(report.violations.empty());
}

TEST_CASE("squeeze assumptions surface in the report") {
  Witness lo = poly_witness(poly({0, 0, -1}), rat(0), PolyStrategy::UnitTailSum);
  Witness hi = poly_witness(poly({0, 0, 1}), rat(0), PolyStrategy::UnitTailSum);
  Witness w = squeeze_witness(lo, hi, rat(1), parse_expression("x^2/(1+x^2)"));
  VerificationReport report = verify_witness(w, VerifyConfig{});
  CHECK(report.status() == "corroborated");
  REQUIRE(report.assumptions.size() == 1);
  CHECK(report.assumptions[0].find("sampled") != std::string::npos);
}

TEST_CASE("generated witnesses survive awkward off-grid thresholds") {
  // The guarantee quantifies over every eps > 0, not just the default
  // powers of ten; probe thresholds chosen to be inconvenient.
  VerifyConfig cfg;
  cfg.eps_grid = {rat(7, 12), rat(1, 3), rat(2, 7), rat(3, 2), rat(5),
                  rat(99, 100), rat(1, 97), rat(123, 7)};
  cfg.seed = 31;

  Poly cubic_den = poly({-1, 1}) * poly({1, 0, 1});
  std::vector<Witness> ws = {
      poly_witness(poly({0, 3, 1}), rat(1), PolyStrategy::UnitTailSum),
      poly_witness(poly({0, 3, 1}), rat(1), PolyStrategy::PerTermRoots),
      poly_witness(poly({-7, 0, 2, 0, 1}), rat(-3, 2), PolyStrategy::PerTermRoots),
      ratfunc_witness(poly({1, 1}), cubic_den, rat(2)),
      infinity_witness(RatFunc(poly({1, 2}), poly({-4, 3}))),
      reciprocal_witness(identity_witness()),
      derivative_witness(poly({0, 0, 0, 1}), rat(2)),
      general_quotient_witness(
          poly_witness(poly({1, 1}), rat(2), PolyStrategy::UnitTailSum),
          poly_witness(cubic_den, rat(2), PolyStrategy::UnitTailSum)),
      sin_at_witness(rat(1)),
  };
  for (const Witness& w : ws) {
    VerificationReport report = verify_witness(w, cfg);
    CHECK(report.violations.empty());
  }
}

TEST_CASE("falsify decides sin claims by enclosure lower bounds") {
  // delta = 2*eps is unsound for sin(t) -> 0: points just below 2*eps have
  // |sin(t)| close to 2*eps >= eps. Only a proven lower bound counts.
  Claim claim{parse_expression("sin(x)"), Center::at(rat(0)), rat(0), Side::TwoSided};
  DeltaPtr bad = parse_delta("2*eps");
  FalsifyResult result = falsify(claim, bad, 10000, VerifyConfig{});
  REQUIRE(result.counterexample.has_value());
  CHECK(recheck_counterexample(claim, bad, *result.counterexample, VerifyConfig{}));

  // The sound delta = min{1, eps} survives the same search.
  FalsifyResult sound = falsify(claim, parse_delta("min{1, eps}"), 10000, VerifyConfig{});
  CHECK(!sound.counterexample.has_value());
}

TEST_CASE("straddling enclosures escalate and end as labeled indeterminates") {
  // |sin(t)| < 1 holds at every rational t, but near t ~ 1.57 the margin is
  // tiny; with degree-3 enclosures and the whole interval (0, 2) admissible
  // some points stay undecided after escalating to degree 6 -- they must be
  // labeled, never counted as violations.
  Claim claim{parse_expression("sin(x)"), Center::at(rat(0)), rat(0), Side::TwoSided};
  Witness w{claim, DeltaExpr::constant(rat(2)), identity_witness().derivation, {}};
  VerifyConfig cfg;
  cfg.sin_degree = 3;
  cfg.eps_grid = {rat(1)};
  VerificationReport report = verify_witness(w, cfg);
  CHECK(report.violations.empty());
  CHECK(!report.indeterminate.empty());
  CHECK(report.status() == "indeterminate");

  // At the default degree 13 the same points are decidable.
  VerifyConfig fine;
  fine.eps_grid = {rat(1)};
  VerificationReport sharp = verify_witness(w, fine);
  CHECK(sharp.status() == "corroborated");
}

TEST_CASE("config validation") {
  VerifyConfig bad;
  bad.samples_per_eps = 4;
  Witness w = identity_witness();
  CHECK_THROWS_AS(verify_witness(w, bad), Error);
  VerifyConfig even;
  even.sin_degree = 12;
  CHECK_THROWS_AS(verify_witness(w, even), Error);
}
