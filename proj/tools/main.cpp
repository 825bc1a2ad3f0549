#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "fizzle/emit.hpp"
#include "fizzle/errors.hpp"
#include "fizzle/verify.hpp"
#include "fizzle/witness.hpp"

namespace {

using namespace fizzle;

// Exit codes: 0 success/corroborated, 1 violations or counterexample
// found, 2 usage/syntax error, 3 mathematical precondition failure,
// 4 indeterminate (sin enclosures exhausted).
constexpr int kOk = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;
constexpr int kMath = 3;
constexpr int kIndeterminate = 4;

struct CommonFlags {
  std::string eps_grid;
  unsigned samples = 64;
  std::uint64_t seed = 1;
  unsigned root_bits = 64;
  unsigned sin_degree = 13;
};

void add_verify_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--eps-grid", flags.eps_grid,
                  "Comma-separated positive rationals for the eps grid");
  cmd->add_option("--samples", flags.samples, "Sample magnitudes per eps (default 64)");
  cmd->add_option("--seed", flags.seed, "Seed for the pseudo-random sample points");
  cmd->add_option("--root-bits", flags.root_bits,
                  "Precision bits for conservative root evaluation (default 64)");
  cmd->add_option("--sin-degree", flags.sin_degree,
                  "Odd truncation degree for sin enclosures (default 13)");
}

VerifyConfig config_from(const CommonFlags& flags) {
  VerifyConfig cfg;
  if (!flags.eps_grid.empty()) {
    cfg.eps_grid.clear();
    std::stringstream ss(flags.eps_grid);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto r = Rat::parse(item);
      if (!r || r->sign() <= 0)
        throw SyntaxError("malformed eps grid entry '" + item + "'", 0);
      cfg.eps_grid.push_back(*r);
    }
    if (cfg.eps_grid.empty()) throw SyntaxError("empty eps grid", 0);
  }
  cfg.samples_per_eps = flags.samples;
  cfg.seed = flags.seed;
  cfg.root_precision_bits = flags.root_bits;
  cfg.sin_degree = flags.sin_degree;
  return cfg;
}

Center parse_center(const std::string& s) {
  if (s == "inf") return Center::inf();
  auto r = Rat::parse(s);
  if (!r) throw SyntaxError("malformed center '" + s + "' (rational or 'inf')", 0);
  return Center::at(*r);
}

std::optional<Rat> parse_limit(const std::string& s) {
  if (s == "auto") return std::nullopt;
  auto r = Rat::parse(s);
  if (!r) throw SyntaxError("malformed limit '" + s + "' (rational or 'auto')", 0);
  return r;
}

PolyStrategy parse_strategy(const std::string& s) {
  if (s == "i") return PolyStrategy::PerTermRoots;
  if (s == "ii") return PolyStrategy::UnitTailSum;
  throw SyntaxError("unknown strategy '" + s + "' (expected i or ii)", 0);
}

int report_exit(const VerificationReport& report) {
  if (!report.violations.empty()) return kViolation;
  if (!report.indeterminate.empty()) return kIndeterminate;
  return kOk;
}

int run_prove(const std::string& expr_text, const std::string& at, const std::string& limit,
              const std::string& strategy, const std::string& format, bool no_errata,
              const CommonFlags& flags) {
  if (format != "text" && format != "latex" && format != "json")
    throw SyntaxError("unknown format '" + format + "' (expected text, latex or json)", 0);
  ExprPtr e = parse_expression(expr_text);
  Witness w = auto_witness(e, parse_center(at), parse_limit(limit), parse_strategy(strategy));
  VerifyConfig cfg = config_from(flags);
  VerificationReport report = verify_witness(w, cfg);

  if (format == "json") {
    Json out;
    out["witness"] = serialize_witness(w);
    out["report"] = report_to_json(report);
    std::cout << out.dump(2) << "\n";
  } else {
    EmitOptions opts;
    opts.errata_footnotes = !no_errata;
    ProofFormat pf = format == "latex" ? ProofFormat::LaTeX : ProofFormat::Text;
    std::cout << render_proof(w, pf, opts).body;
    std::cerr << "verification: " << report.status() << " (" << report.eps_checked
              << " eps values, " << report.points_checked << " points)\n";
  }
  return report_exit(report);
}

int run_check(const std::string& witness_path, const std::string& format,
              const CommonFlags& flags) {
  if (format != "json" && format != "text")
    throw SyntaxError("unknown format '" + format + "' (expected json or text)", 0);
  std::ifstream in(witness_path);
  if (!in) throw Error("cannot open witness file: " + witness_path);
  Json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed witness document: ") + e.what());
  }
  Witness w = deserialize_witness(doc);
  VerifyConfig cfg = config_from(flags);
  VerificationReport report = verify_witness(w, cfg);
  if (format == "text") {
    std::cout << "claim: " << claim_statement(w.claim) << "\n"
              << "delta: " << print_delta(w.delta) << "\n"
              << "status: " << report.status() << " (" << report.eps_checked
              << " eps values, " << report.points_checked << " points)\n";
  } else {
    std::cout << report_to_json(report).dump(2) << "\n";
  }
  return report_exit(report);
}

int run_falsify(const std::string& expr_text, const std::string& at,
                const std::string& limit, const std::string& delta_text,
                std::size_t budget, const CommonFlags& flags) {
  ExprPtr e = parse_expression(expr_text);
  Center center = parse_center(at);
  std::optional<Rat> stated = parse_limit(limit);

  Rat L;
  if (stated) {
    L = *stated;
  } else {
    auto rf = lower_rational(e);
    if (!rf)
      throw MathError("--limit auto needs a rational-function claim; state the limit");
    L = check_limit_value(*rf, center);
  }
  Claim claim{e, center, L, center.infinite ? Side::RightOnly : Side::TwoSided};
  DeltaPtr delta = parse_delta(delta_text);
  VerifyConfig cfg = config_from(flags);
  FalsifyResult result = falsify(claim, delta, budget, cfg);

  Json out;
  out["status"] = result.status();
  out["points_checked"] = result.points_checked;
  out["note"] = "absence of a counterexample is not a soundness proof";
  if (result.counterexample)
    out["counterexample"] = counterexample_to_json(*result.counterexample);
  std::cout << out.dump(2) << "\n";
  return result.counterexample ? kViolation : kOk;
}

int run_eval(const std::string& expr_text, const std::string& at) {
  ExprPtr e = parse_expression(expr_text);
  auto rf = lower_rational(e);
  if (!rf) throw UnsupportedError("eval handles rational-function expressions only");
  std::cout << check_limit_value(*rf, parse_center(at)).str() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fizzle: constructive eps-delta limit witnesses over exact rationals"};
  app.require_subcommand(1);

  std::string expr_text, at, limit = "auto", strategy = "ii", format = "text";
  std::string witness_path, delta_text, check_format = "json";
  bool no_errata = false;
  std::size_t budget = 10000;
  CommonFlags flags;

  CLI::App* prove = app.add_subcommand("prove", "Construct, verify and print a witness proof");
  prove->add_option("expression", expr_text, "Expression in x")->required();
  prove->add_option("--at", at, "Center: rational or 'inf'")->required();
  prove->add_option("--limit", limit, "Stated limit: rational or 'auto' (default auto)");
  prove->add_option("--strategy", strategy, "Polynomial delta strategy: i or ii (default ii)");
  prove->add_option("--format", format, "Output: text, latex or json (default text)");
  prove->add_flag("--no-errata", no_errata, "Suppress corrected-constant footnotes");
  add_verify_flags(prove, flags);

  CLI::App* check = app.add_subcommand("check", "Verify a serialized witness file");
  check->add_option("--witness", witness_path, "Path to a fizzle-witness/1 JSON file")
      ->required();
  check->add_option("--format", check_format, "Output: json or text (default json)");
  add_verify_flags(check, flags);

  CLI::App* falsify_cmd =
      app.add_subcommand("falsify", "Search for a counterexample to a claimed delta");
  falsify_cmd->add_option("expression", expr_text, "Expression in x")->required();
  falsify_cmd->add_option("--at", at, "Center: rational or 'inf'")->required();
  falsify_cmd->add_option("--limit", limit, "Claimed limit: rational or 'auto'");
  falsify_cmd->add_option("--delta", delta_text, "Claimed delta formula")->required();
  falsify_cmd->add_option("--budget", budget, "Maximum points to evaluate (default 10000)");
  add_verify_flags(falsify_cmd, flags);

  CLI::App* eval_cmd = app.add_subcommand("eval", "Print the exact limit value");
  eval_cmd->add_option("expression", expr_text, "Expression in x")->required();
  eval_cmd->add_option("--at", at, "Center: rational or 'inf'")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (prove->parsed())
      return run_prove(expr_text, at, limit, strategy, format, no_errata, flags);
    if (check->parsed()) return run_check(witness_path, check_format, flags);
    if (falsify_cmd->parsed())
      return run_falsify(expr_text, at, limit, delta_text, budget, flags);
    if (eval_cmd->parsed()) return run_eval(expr_text, at);
    return kUsage;
  } catch (const SyntaxError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UnsupportedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const SchemaError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const MathError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kMath;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
