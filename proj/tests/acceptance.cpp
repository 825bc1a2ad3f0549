// Acceptance suite: one pass/fail line per criterion. Exit code is the
// number of failed criteria.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

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

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(FIZZLE_BIN) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buffer{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {-1, ""};
  std::size_t n;
  while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) out.append(buffer.data(), n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Checker {
  bool ok = true;
  std::string detail;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

// --- criteria ---------------------------------------------------------------

void criterion_1(Checker& c) {
  // The worked delta min{1, eps/6} must come out structurally, via the CLI and the library.
  RunResult r = run_cli("prove \"x^2+3*x\" --at 1 --limit auto");
  c.expect(r.exit_code == 0, "CLI exit code");
  c.expect(r.out.find("min{1, eps/6}") != std::string::npos, "delta in proof");
  c.expect(r.out.find("= 4") != std::string::npos, "limit in proof");

  Witness w = auto_witness(parse_expression("x^2+3*x"), Center::at(rat(1)), std::nullopt);
  c.expect(w.claim.limit == rat(4), "computed limit");
  c.expect(delta_equal(w.delta, parse_delta("min{1, eps/6}")), "structural delta equality");
  VerificationReport report = verify_witness(w, VerifyConfig{});
  c.expect(report.violations.empty(), "zero violations");
  c.expect(report.eps_checked == 9, "grid width");
  c.expect(report.points_checked == 9 * 128, "two-sided 64 samples per eps");
}

void criterion_2(Checker& c) {
  Claim claim{parse_expression("x^2+3*x"), Center::at(rat(1)), rat(4), Side::TwoSided};
  DeltaPtr delta = parse_delta("min{(eps/2)^(1/2), (eps/10)^(1/2)}");
  FalsifyResult result = falsify(claim, delta, 10000, VerifyConfig{});
  c.expect(result.counterexample.has_value(), "counterexample found");
  if (result.counterexample) {
    c.expect(result.counterexample->eps == rat(1), "counterexample at eps = 1");
    c.expect(result.counterexample->t.abs() <= rat(1, 3), "|t| <= 1/3");
    c.expect(result.counterexample->error_lower_bound >= rat(1), "error >= 1");
    c.expect(recheck_counterexample(claim, delta, *result.counterexample, VerifyConfig{}),
             "found counterexample re-checks");
  }
  Counterexample fixture{rat(1), rat(3, 10), rat(159, 100), false};
  c.expect(recheck_counterexample(claim, delta, fixture, VerifyConfig{}),
           "fixture t = 3/10 accepted by the re-checker");
}

void criterion_3(Checker& c) {
  Claim claim{parse_expression("1/(1+x)"), Center::at(rat(0)), rat(1), Side::TwoSided};
  DeltaPtr literal = parse_delta("min{1/2, 2*eps}");
  FalsifyResult result = falsify(claim, literal, 10000, VerifyConfig{});
  c.expect(result.counterexample.has_value(), "literal 2*eps threshold falsified");
  if (result.counterexample)
    c.expect(recheck_counterexample(claim, literal, *result.counterexample, VerifyConfig{}),
             "counterexample re-checks");

  Witness corrected = reciprocal_witness(identity_witness());
  VerificationReport report = verify_witness(corrected, VerifyConfig{});
  c.expect(report.violations.empty(), "corrected reciprocal verifies clean");
}

void criterion_4(Checker& c) {
  Claim claim{parse_expression("(2*x+1)/(3*x-4)"), Center::inf(), rat(2, 3),
              Side::RightOnly};
  FalsifyResult result = falsify(claim, parse_delta("min{3/8, 9*eps/14}"), 10000,
                                 VerifyConfig{});
  c.expect(!result.counterexample.has_value(), "no counterexample");
  c.expect(result.status() == "no counterexample at budget", "status string");
}

void criterion_5(Checker& c) {
  Claim claim{parse_expression("(x+1)/((x-1)*(x^2+1))"), Center::at(rat(2)), rat(3, 5),
              Side::TwoSided};
  FalsifyResult result = falsify(claim, parse_delta("min{1/2, eps/4}"), 10000,
                                 VerifyConfig{});
  c.expect(!result.counterexample.has_value(), "no counterexample");
  c.expect(result.status() == "no counterexample at budget", "status string");
}

void criterion_6(Checker& c) {
  std::mt19937_64 rng(60006);
  auto random_rat = [&](long long span) {
    long long num = static_cast<long long>(rng() % (2 * span + 1)) - span;
    return rat(num);
  };
  for (int i = 0; i < 200; ++i) {
    int deg = static_cast<int>(rng() % 7);
    std::vector<Rat> coeffs;
    for (int j = 0; j <= deg; ++j) coeffs.push_back(random_rat(9));
    Poly p(std::move(coeffs));
    Rat center = random_rat(9);

    Poly expected;  // brute-force expansion by repeated multiplication
    Poly linear({center, rat(1)});
    for (int k = 0; k <= p.degree(); ++k) {
      Poly power = Poly::constant(rat(1));
      for (int m = 0; m < k; ++m) power = power * linear;
      expected = expected + power.scaled(p.coeff(static_cast<std::size_t>(k)));
    }
    if (!(taylor_shift(p, center) == expected)) {
      c.expect(false, "mismatch at sample " + std::to_string(i));
      return;
    }
  }
}

void criterion_7(Checker& c) {
  std::vector<std::pair<std::string, Witness>> matrix;
  auto tail51 = poly_witness(poly({0, 5, 1}), rat(0), PolyStrategy::UnitTailSum);
  Poly cubic_den = poly({-1, 1}) * poly({1, 0, 1});

  matrix.emplace_back("identity", identity_witness());
  matrix.emplace_back("sum", sum_witness(identity_witness(), identity_witness()));
  matrix.emplace_back("sum-mixed", sum_witness(tail51, identity_witness()));
  matrix.emplace_back("scale-1", scale_witness(rat(1), identity_witness()));
  matrix.emplace_back("scale-0", scale_witness(rat(0), identity_witness()));
  matrix.emplace_back("scale-neg", scale_witness(rat(-5), identity_witness()));
  matrix.emplace_back("product", product_witness(identity_witness(), identity_witness()));
  matrix.emplace_back("product-mixed",
                      product_witness(identity_witness(),
                                      scale_witness(rat(5), identity_witness())));
  matrix.emplace_back("reciprocal", reciprocal_witness(identity_witness()));
  matrix.emplace_back(
      "squeeze",
      squeeze_witness(poly_witness(poly({0, 0, -1}), rat(0), PolyStrategy::UnitTailSum),
                      poly_witness(poly({0, 0, 1}), rat(0), PolyStrategy::UnitTailSum),
                      rat(1), parse_expression("x^2/(1+x^2)")));
  matrix.emplace_back("recenter",
                      recenter_witness(tail51, rat(1), rat(4), parse_expression("x^2+3*x")));
  matrix.emplace_back("poly-ii", poly_witness(poly({0, 3, 1}), rat(1),
                                              PolyStrategy::UnitTailSum));
  matrix.emplace_back("poly-i", poly_witness(poly({0, 3, 1}), rat(1),
                                             PolyStrategy::PerTermRoots));
  matrix.emplace_back("poly-x", poly_witness(poly({0, 1}), rat(7, 2),
                                             PolyStrategy::UnitTailSum));
  matrix.emplace_back("poly-cube-i", poly_witness(poly({0, 0, 0, 1}), rat(2),
                                                  PolyStrategy::PerTermRoots));
  matrix.emplace_back("poly-cube-ii", poly_witness(poly({0, 0, 0, 1}), rat(2),
                                                   PolyStrategy::UnitTailSum));
  matrix.emplace_back("ratfunc", ratfunc_witness(poly({1, 1}), cubic_den, rat(2)));
  matrix.emplace_back("ratfunc-equal", ratfunc_witness(poly({1, 1}), poly({1, 1}), rat(0)));
  matrix.emplace_back("ratfunc-zero-num",
                      ratfunc_witness(poly({-1, 1}), poly({0, 1}), rat(1)));
  matrix.emplace_back("infinity", infinity_witness(RatFunc(poly({1, 2}), poly({-4, 3}))));
  matrix.emplace_back("infinity-const", infinity_witness(RatFunc(poly({5}), poly({2}))));
  matrix.emplace_back("infinity-vanishing",
                      infinity_witness(RatFunc(poly({0, 1}), poly({1, 0, 1}))));
  matrix.emplace_back("derivative", derivative_witness(poly({0, 0, 0, 1}), rat(2)));
  matrix.emplace_back("derivative-linear", derivative_witness(poly({3, 5}), rat(1)));
  matrix.emplace_back("derivative-square", derivative_witness(poly({0, 0, 1}), rat(0)));
  matrix.emplace_back("sin0", sin0_witness());
  matrix.emplace_back("argscale-half", arg_scale_witness(rat(1, 2), sin0_witness()));
  matrix.emplace_back("argscale-neg", arg_scale_witness(rat(-3), sin0_witness()));
  matrix.emplace_back("sin-at-0", sin_at_witness(rat(0)));
  matrix.emplace_back("sin-at-1", sin_at_witness(rat(1)));
  {
    Witness x1 = poly_witness(poly({0, 1}), rat(1), PolyStrategy::UnitTailSum);
    Witness sq1 = poly_witness(poly({0, 0, 1}), rat(1), PolyStrategy::UnitTailSum);
    matrix.emplace_back("general-sum", general_sum_witness(x1, sq1));
    matrix.emplace_back("general-scalar", general_scalar_witness(rat(3), x1));
    matrix.emplace_back("general-difference", general_difference_witness(x1, x1));
    matrix.emplace_back("general-product", general_product_witness(x1, x1));
    matrix.emplace_back(
        "general-quotient",
        general_quotient_witness(poly_witness(poly({1, 1}), rat(2),
                                              PolyStrategy::UnitTailSum),
                                 poly_witness(cubic_den, rat(2),
                                              PolyStrategy::UnitTailSum)));
    Witness wneg = poly_witness(poly({0, -1}), rat(1), PolyStrategy::UnitTailSum);
    matrix.emplace_back("general-quotient-neg", general_quotient_witness(x1, wneg));
  }
  matrix.emplace_back("auto-poly", auto_witness(parse_expression("x^2+3*x"),
                                                Center::at(rat(1)), std::nullopt));
  matrix.emplace_back("auto-rational",
                      auto_witness(parse_expression("(x+1)/((x-1)*(x^2+1))"),
                                   Center::at(rat(2)), std::nullopt));
  matrix.emplace_back("auto-infinity", auto_witness(parse_expression("(2*x+1)/(3*x-4)"),
                                                    Center::inf(), std::nullopt));
  matrix.emplace_back("auto-sin", auto_witness(parse_expression("sin(x)"),
                                               Center::at(rat(0)), std::nullopt));
  matrix.emplace_back("auto-sin-product", auto_witness(parse_expression("x*sin(2*x)"),
                                                       Center::at(rat(0)), std::nullopt));

  // 100 randomized polynomial composites over the centered combinators.
  std::mt19937_64 rng(70007);
  auto random_tail = [&] {
    std::vector<Rat> coeffs{rat(0)};
    int deg = 1 + static_cast<int>(rng() % 4);
    for (int j = 1; j <= deg; ++j)
      coeffs.push_back(rat(static_cast<long long>(rng() % 11) - 5));
    Poly p(std::move(coeffs));
    if (p.is_constant()) p = poly({0, 1});
    return poly_witness(p, rat(0), PolyStrategy::UnitTailSum);
  };
  for (int i = 0; i < 100; ++i) {
    Witness w = random_tail();
    int ops = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < ops; ++k) {
      switch (rng() % 3) {
        case 0:
          w = sum_witness(w, random_tail());
          break;
        case 1:
          w = product_witness(w, random_tail());
          break;
        default:
          w = scale_witness(rat(static_cast<long long>(rng() % 11) - 5), w);
          break;
      }
    }
    matrix.emplace_back("composite-" + std::to_string(i), std::move(w));
  }

  for (const auto& [name, w] : matrix) {
    VerificationReport report = verify_witness(w, VerifyConfig{});
    if (!report.violations.empty()) {
      c.expect(false, "violations in " + name);
      return;
    }
  }
}

void criterion_8(Checker& c) {
  c.expect(taylor_shift(poly({0, 0, 0, 1}), rat(2)) == poly({8, 12, 6, 1}),
           "shift oracle (8,12,6,1)");
  Witness w = derivative_witness(poly({0, 0, 0, 1}), rat(2));
  c.expect(w.claim.limit == rat(12), "claimed limit 12");
  c.expect(delta_equal(w.delta, parse_delta("min{1, eps/7}")), "delta min{1, eps/7}");
  VerificationReport report = verify_witness(w, VerifyConfig{});
  c.expect(report.violations.empty(), "verified clean");
}

void criterion_9(Checker& c) {
  Witness w = sin_at_witness(rat(1));
  VerifyConfig cfg;  // sin_degree 13, default grid
  VerificationReport report = verify_witness(w, cfg);
  c.expect(report.violations.empty(), "zero violations");
  for (const auto& p : report.indeterminate)
    c.expect(p.eps == Rat::pow10(-6), "indeterminates only at eps = 1e-6");
  if (!report.indeterminate.empty())
    c.expect(report.status() == "indeterminate", "report labels indeterminates");
}

void criterion_10(Checker& c) {
  auto snapshot = [] {
    std::string acc;
    VerifyConfig cfg;
    cfg.seed = 424242;
    std::vector<std::pair<std::string, Witness>> ws;
    ws.emplace_back("polynomial", auto_witness(parse_expression("x^2+3*x"),
                                               Center::at(rat(1)), std::nullopt));
    ws.emplace_back("rational", auto_witness(parse_expression("(x+1)/((x-1)*(x^2+1))"),
                                             Center::at(rat(2)), std::nullopt));
    ws.emplace_back("infinity", auto_witness(parse_expression("(2*x+1)/(3*x-4)"),
                                             Center::inf(), std::nullopt));
    for (const auto& [name, w] : ws) {
      acc += "== " + name + " ==\n";
      acc += render_proof(w, ProofFormat::Text).body;
      acc += report_to_json(verify_witness(w, cfg)).dump(2);
      acc += "\n";
    }
    return acc;
  };
  std::string first = snapshot();
  std::string second = snapshot();
  c.expect(first == second, "byte-identical across runs");

  const std::string golden_dir = FIZZLE_GOLDEN_DIR;
  auto check_golden = [&](const std::string& name, const Witness& w) {
    std::string rendered = render_proof(w, ProofFormat::Text).body;
    std::string golden = read_file(golden_dir + "/" + name + ".txt");
    c.expect(!golden.empty(), "golden file " + name + " present");
    c.expect(rendered == golden, "golden proof " + name + " byte-identical");
  };
  check_golden("polynomial", auto_witness(parse_expression("x^2+3*x"), Center::at(rat(1)),
                                          std::nullopt));
  check_golden("rational", auto_witness(parse_expression("(x+1)/((x-1)*(x^2+1))"),
                                        Center::at(rat(2)), std::nullopt));
  check_golden("infinity", auto_witness(parse_expression("(2*x+1)/(3*x-4)"), Center::inf(),
                                        std::nullopt));
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    std::string name;
    double budget_seconds;
    std::function<void(Checker&)> fn;
  };
  std::vector<Criterion> criteria = {
      {1, "worked delta reproduction (prove x^2+3x at 1)", 1.0, criterion_1},
      {2, "erratum detection: per-term-roots worked variant", 1.0, criterion_2},
      {3, "erratum detection: reciprocal 2*eps threshold", 60.0, criterion_3},
      {4, "corroboration: infinity delta min{3/8, 9*eps/14}", 60.0, criterion_4},
      {5, "corroboration: rational delta min{1/2, eps/4}", 60.0, criterion_5},
      {6, "taylor shift vs product-expansion oracle (200 samples)", 60.0, criterion_6},
      {7, "constructor soundness matrix + 100 composites", 60.0, criterion_7},
      {8, "derivative witness for x^3 at 2", 60.0, criterion_8},
      {9, "sin chain at 1 under degree-13 enclosures", 60.0, criterion_9},
      {10, "determinism and golden proofs", 60.0, criterion_10},
  };

  int failures = 0;
  for (auto& criterion : criteria) {
    Checker checker;
    auto start = std::chrono::steady_clock::now();
    try {
      criterion.fn(checker);
    } catch (const std::exception& e) {
      checker.expect(false, std::string("exception: ") + e.what());
    }
    double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criterion.budget_seconds)
      checker.expect(false, "runtime " + std::to_string(elapsed) + "s over budget");
    const char* verdict = checker.ok ? "PASS" : "FAIL";
    std::printf("%s  criterion %2d  %-55s  (%.2fs)%s%s\n", verdict, criterion.number,
                criterion.name.c_str(), elapsed, checker.ok ? "" : "  -- ",
                checker.ok ? "" : checker.detail.c_str());
    if (!checker.ok) ++failures;
  }
  return failures;
}
