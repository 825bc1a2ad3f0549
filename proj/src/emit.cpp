#include "fizzle/emit.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "fizzle/errors.hpp"

namespace fizzle {

namespace {

const std::map<std::string, std::string>& rule_titles() {
  static const std::map<std::string, std::string> titles = {
      {"Identity", "Identity threshold"},
      {"Sum", "Sum of limits"},
      {"Scalar", "Scalar multiple"},
      {"Product", "Product of limits"},
      {"Reciprocal", "Reciprocal"},
      {"Squeeze", "Squeeze"},
      {"Recenter", "Recentering"},
      {"PolyDirect", "Polynomial tail bound"},
      {"Positivity", "Denominator positivity radius"},
      {"RationalDirect", "Rational function bound"},
      {"InfinityTransform", "Substitution x = 1/t"},
      {"Derivative", "Difference quotient"},
      {"Sin0", "sin at 0"},
      {"SinAt", "sin at a general center"},
      {"ArgScale", "Argument scaling"},
      {"GeneralSum", "Sum with general limits"},
      {"GeneralScalar", "Scalar multiple with general limit"},
      {"GeneralDifference", "Difference of limits"},
      {"GeneralProduct", "Product with general limits"},
      {"GeneralQuotient", "Quotient of limits"},
  };
  return titles;
}

const std::map<std::string, std::string>& erratum_texts() {
  static const std::map<std::string, std::string> texts = {
      {"poly-strategy-i",
       "Per-term root thresholds take the plain scaling eps/(n*|b_1|) at j = 1; "
       "taking a square root there as well admits points with |t| far above the "
       "linear threshold and is unsound (the falsifier exhibits explicit "
       "counterexamples for that variant)."},
      {"reciprocal-threshold",
       "Where |f - 1| < 1/2 one gets f > 1/2 and hence 1/|f| < 2, not < 1/2. The "
       "sound companion threshold is eps/2; pairing the 1/2 guard with a 2*eps "
       "threshold rests on the inverted bound and is refuted by exact sampling."},
      {"positivity-direction",
       "From |q(c + t) - q(c)| < r = |q(c)|/2 the surviving bound is "
       "|q(c + t)| > r, i.e. 1/|q(c + t)| < 1/r; the bound chain here uses that "
       "corrected direction."},
  };
  return texts;
}

std::string title_for(const std::string& rule) {
  auto it = rule_titles().find(rule);
  if (it == rule_titles().end()) throw Error("unknown derivation rule: " + rule);
  return it->second;
}

std::string param_of(const Derivation& node, const std::string& key) {
  for (const auto& kv : node.params)
    if (kv.first == key) return kv.second;
  return {};
}

void collect_errata(const DerivPtr& node, std::vector<std::string>& keys) {
  for (const auto& key : node->errata)
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  for (const auto& child : node->children) collect_errata(child, keys);
}

void walk_post_order(const DerivPtr& node, std::vector<DerivPtr>& out) {
  for (const auto& child : node->children) walk_post_order(child, out);
  out.push_back(node);
}

// --- LaTeX translation of the constrained math/prose line language ---------

bool is_math_word(const std::string& w) {
  static const std::set<std::string> words = {"eps", "delta", "min",  "sin", "cos",
                                              "lim", "inf",   "t",    "x",   "f",
                                              "g",   "h",     "p",    "q",   "r",
                                              "j",   "n",     "M",    "QED"};
  return words.count(w) > 0;
}

std::string translate_math_word(const std::string& w) {
  if (w == "eps") return "\\epsilon";
  if (w == "delta") return "\\delta";
  if (w == "min") return "\\min";
  if (w == "sin") return "\\sin";
  if (w == "cos") return "\\cos";
  if (w == "lim") return "\\lim";
  if (w == "inf") return "\\infty";
  if (w == "QED") return "\\square";
  return w;
}

// Translate one line into LaTeX math. Prose words wrap in \text{...};
// min-braces become set braces, lim-braces stay grouping braces, ^(...)
// and multi-digit exponents become ^{...}.
std::string tex_line(const std::string& line) {
  std::string out;
  std::vector<char> brace_stack;  // 'm' set brace, 'l' group brace
  std::size_t i = 0;
  bool in_text = false;
  auto close_text = [&] {
    if (in_text) {
      out += "}";
      in_text = false;
    }
  };
  auto open_text = [&] {
    if (!in_text) {
      out += "\\text{";
      in_text = true;
    }
  };

  while (i < line.size()) {
    char c = line[i];
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < line.size() && std::isalpha(static_cast<unsigned char>(line[i]))) ++i;
      std::string word = line.substr(start, i - start);
      if (is_math_word(word)) {
        std::string t = translate_math_word(word);
        if (word == "min" && i < line.size() && line[i] == '{') {
          close_text();
          out += t + "\\{";
          brace_stack.push_back('m');
          ++i;
        } else if (word == "lim" && i + 1 < line.size() && line[i] == '_' &&
                   line[i + 1] == '{') {
          close_text();
          out += t + "_{";
          brace_stack.push_back('l');
          i += 2;
        } else {
          close_text();
          out += t;
          if (t.size() > 1 && t[0] == '\\') out += " ";
        }
      } else {
        open_text();
        out += word;
      }
      continue;
    }
    if (c == ' ') {
      if (in_text) {
        out += " ";
      } else {
        out += "\\ ";
      }
      ++i;
      continue;
    }
    close_text();
    if (c == '}') {
      if (!brace_stack.empty() && brace_stack.back() == 'm') {
        out += "\\}";
      } else {
        out += "}";
      }
      if (!brace_stack.empty()) brace_stack.pop_back();
      ++i;
      continue;
    }
    if (c == '{') {  // stray group brace
      out += "\\{";
      brace_stack.push_back('m');
      ++i;
      continue;
    }
    if (c == '^') {
      ++i;
      if (i < line.size() && line[i] == '(') {
        // ^(...) -> ^{...}
        int depth = 1;
        std::size_t j = i + 1;
        std::string inner;
        while (j < line.size() && depth > 0) {
          if (line[j] == '(') ++depth;
          if (line[j] == ')') {
            --depth;
            if (depth == 0) break;
          }
          inner += line[j];
          ++j;
        }
        out += "^{" + inner + "}";
        i = j + 1;
      } else if (i < line.size() && std::isalpha(static_cast<unsigned char>(line[i]))) {
        out += std::string("^{") + line[i] + "}";
        ++i;
      } else {
        std::string digits;
        while (i < line.size() && std::isdigit(static_cast<unsigned char>(line[i])))
          digits += line[i++];
        out += "^{" + digits + "}";
      }
      continue;
    }
    if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out += "\\to ";
      i += 2;
      continue;
    }
    if (c == '<' && i + 1 < line.size() && line[i + 1] == '=') {
      out += "\\le ";
      i += 2;
      continue;
    }
    if (c == '>' && i + 1 < line.size() && line[i + 1] == '=') {
      out += "\\ge ";
      i += 2;
      continue;
    }
    if (c == '!' && i + 1 < line.size() && line[i + 1] == '=') {
      out += "\\ne ";
      i += 2;
      continue;
    }
    if (c == '*') {
      out += " \\cdot ";
      ++i;
      continue;
    }
    out += c;
    ++i;
  }
  close_text();
  while (!brace_stack.empty()) {  // close anything left open
    out += brace_stack.back() == 'm' ? "\\}" : "}";
    brace_stack.pop_back();
  }
  return out;
}

std::string render_text(const Witness& w, const std::vector<std::string>& footnotes) {
  std::vector<DerivPtr> steps;
  walk_post_order(w.derivation, steps);

  std::string out;
  out += "Claim. " + claim_statement(w.claim) + ".\n\n";
  out += "Proof.\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Derivation& node = *steps[i];
    out += "[" + std::to_string(i + 1) + "] " + title_for(node.rule);
    std::string statement = param_of(node, "statement");
    if (!statement.empty()) out += ": " + statement;
    out += "\n";
    std::string delta = param_of(node, "delta");
    if (!delta.empty()) out += "    threshold: delta = " + delta + "\n";
    for (const auto& line : node.lines) out += "    " + line + "\n";
  }
  out += "\n";
  out += "Fix eps > 0. Choose delta = " + print_delta(w.delta) + ".\n";
  std::string guarded = w.claim.side == Side::RightOnly || w.claim.center.infinite
                            ? "0 < t < delta"
                            : "0 < |t| < delta";
  out += "Then every admissible input error " + guarded +
         " keeps the output error below eps,\n";
  out += "establishing " + claim_statement(w.claim) + ". QED\n";

  if (!w.assumptions.empty()) {
    out += "\nConditional assumptions:\n";
    for (const auto& a : w.assumptions) out += "  - " + a + "\n";
  }
  if (!footnotes.empty()) {
    out += "\nNotes on corrected constants:\n";
    for (std::size_t i = 0; i < footnotes.size(); ++i)
      out += "  [" + std::to_string(i + 1) + "] " + footnotes[i] + "\n";
  }
  return out;
}

std::string render_latex(const Witness& w, const std::vector<std::string>& footnotes) {
  std::vector<DerivPtr> steps;
  walk_post_order(w.derivation, steps);

  std::string out;
  out += "\\documentclass{article}\n\\usepackage{amsmath}\n\\begin{document}\n";
  out += "\\section*{Limit certificate}\n";
  out += "\\noindent Claim: $" + tex_line(claim_statement(w.claim)) + "$.\n\n";
  out += "\\subsection*{Proof}\n";
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Derivation& node = *steps[i];
    out += "\\paragraph{Step " + std::to_string(i + 1) + ": " + title_for(node.rule) + ".}\n";
    std::string statement = param_of(node, "statement");
    if (!statement.empty()) out += "$" + tex_line(statement) + "$\n\n";
    std::string delta = param_of(node, "delta");
    if (!delta.empty()) out += "$\\delta = " + tex_line(delta) + "$\n\n";
    for (const auto& line : node.lines) out += "$" + tex_line(line) + "$\n\n";
  }
  out += "\\paragraph{Conclusion.}\n";
  out += "$\\text{Fix } \\epsilon > 0 \\text{ and choose } \\delta = " +
         tex_line(print_delta(w.delta)) + ".$\n\n";
  out += "$" + tex_line(claim_statement(w.claim)) + "$\n\n";
  if (!w.assumptions.empty()) {
    out += "\\subsection*{Conditional assumptions}\n\\begin{itemize}\n";
    for (const auto& a : w.assumptions) out += "\\item $" + tex_line(a) + "$\n";
    out += "\\end{itemize}\n";
  }
  if (!footnotes.empty()) {
    out += "\\subsection*{Notes on corrected constants}\n\\begin{itemize}\n";
    for (const auto& f : footnotes) out += "\\item $" + tex_line(f) + "$\n";
    out += "\\end{itemize}\n";
  }
  out += "\\end{document}\n";
  return out;
}

}  // namespace

ProofDocument render_proof(const Witness& w, ProofFormat format, const EmitOptions& options) {
  std::vector<std::string> keys;
  collect_errata(w.derivation, keys);
  std::vector<std::string> footnotes;
  if (options.errata_footnotes) {
    for (const auto& key : keys) {
      auto it = erratum_texts().find(key);
      if (it == erratum_texts().end()) throw Error("unknown erratum key: " + key);
      footnotes.push_back(it->second);
    }
  }
  ProofDocument doc;
  doc.format = format;
  doc.erratum_footnotes = footnotes;
  doc.body = format == ProofFormat::Text ? render_text(w, footnotes)
                                         : render_latex(w, footnotes);
  return doc;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

Json delta_to_json(const DeltaPtr& d) {
  Json j;
  switch (d->kind) {
    case DeltaExpr::Kind::Const:
      j["node"] = "const";
      j["value"] = d->value.str();
      return j;
    case DeltaExpr::Kind::Eps:
      j["node"] = "eps";
      return j;
    case DeltaExpr::Kind::Scale:
      j["node"] = "scale";
      j["factor"] = d->value.str();
      j["child"] = delta_to_json(d->child);
      return j;
    case DeltaExpr::Kind::Root:
      j["node"] = "root";
      j["degree"] = d->root_degree;
      j["child"] = delta_to_json(d->child);
      return j;
    case DeltaExpr::Kind::Min: {
      j["node"] = "min";
      Json children = Json::array();
      for (const auto& c : d->children) children.push_back(delta_to_json(c));
      j["children"] = std::move(children);
      return j;
    }
  }
  throw Error("unreachable delta kind");
}

Rat rat_from_json(const Json& j, const char* what) {
  if (!j.is_string()) throw SchemaError(std::string(what) + " must be a string");
  auto r = Rat::parse(j.get<std::string>());
  if (!r) throw SchemaError(std::string("malformed rational in ") + what);
  return *r;
}

DeltaPtr delta_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("node")) throw SchemaError("malformed delta node");
  std::string node = j.at("node").get<std::string>();
  if (node == "const") return DeltaExpr::constant(rat_from_json(j.at("value"), "delta const"));
  if (node == "eps") return DeltaExpr::eps();
  if (node == "scale")
    return DeltaExpr::scale(rat_from_json(j.at("factor"), "delta scale"),
                            delta_from_json(j.at("child")));
  if (node == "root")
    return DeltaExpr::root(delta_from_json(j.at("child")), j.at("degree").get<unsigned>());
  if (node == "min") {
    std::vector<DeltaPtr> children;
    for (const auto& c : j.at("children")) children.push_back(delta_from_json(c));
    return DeltaExpr::min_of(std::move(children));
  }
  throw SchemaError("unknown delta node tag: " + node);
}

Json derivation_to_json(const DerivPtr& d) {
  Json j;
  j["rule"] = d->rule;
  Json params = Json::array();
  for (const auto& kv : d->params) params.push_back(Json::array({kv.first, kv.second}));
  j["params"] = std::move(params);
  j["lines"] = d->lines;
  j["errata"] = d->errata;
  Json children = Json::array();
  for (const auto& c : d->children) children.push_back(derivation_to_json(c));
  j["children"] = std::move(children);
  return j;
}

DerivPtr derivation_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("rule")) throw SchemaError("malformed derivation node");
  Derivation d;
  d.rule = j.at("rule").get<std::string>();
  for (const auto& kv : j.at("params")) {
    if (!kv.is_array() || kv.size() != 2) throw SchemaError("malformed derivation param");
    d.params.emplace_back(kv[0].get<std::string>(), kv[1].get<std::string>());
  }
  d.lines = j.at("lines").get<std::vector<std::string>>();
  d.errata = j.at("errata").get<std::vector<std::string>>();
  for (const auto& c : j.at("children")) d.children.push_back(derivation_from_json(c));
  return std::make_shared<const Derivation>(std::move(d));
}

}  // namespace

Json serialize_witness(const Witness& w) {
  Json j;
  j["schema"] = "fizzle-witness/1";
  Json claim;
  claim["function"] = print_expr(w.claim.func);
  claim["center"] = w.claim.center.str();
  claim["limit"] = w.claim.limit.str();
  claim["side"] = w.claim.side == Side::RightOnly ? "right-only" : "two-sided";
  j["claim"] = std::move(claim);
  j["delta"] = delta_to_json(w.delta);
  j["derivation"] = derivation_to_json(w.derivation);
  j["assumptions"] = w.assumptions;
  return j;
}

Witness deserialize_witness(const Json& j) {
  try {
    if (!j.is_object() || !j.contains("schema"))
      throw SchemaError("missing schema field");
    std::string schema = j.at("schema").get<std::string>();
    if (schema != "fizzle-witness/1")
      throw SchemaError("unsupported schema version: " + schema);

    const Json& claim_j = j.at("claim");
    Claim claim;
    claim.func = parse_expression(claim_j.at("function").get<std::string>());
    std::string center = claim_j.at("center").get<std::string>();
    if (center == "inf") {
      claim.center = Center::inf();
    } else {
      auto c = Rat::parse(center);
      if (!c) throw SchemaError("malformed center");
      claim.center = Center::at(*c);
    }
    claim.limit = rat_from_json(claim_j.at("limit"), "limit");
    std::string side = claim_j.at("side").get<std::string>();
    if (side == "right-only") {
      claim.side = Side::RightOnly;
    } else if (side == "two-sided") {
      claim.side = Side::TwoSided;
    } else {
      throw SchemaError("unknown side: " + side);
    }

    Witness w;
    w.claim = std::move(claim);
    w.delta = delta_from_json(j.at("delta"));
    w.derivation = derivation_from_json(j.at("derivation"));
    w.assumptions = j.at("assumptions").get<std::vector<std::string>>();
    return w;
  } catch (const SchemaError&) {
    throw;
  } catch (const SyntaxError& e) {
    throw SchemaError(std::string("malformed function text: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed witness document: ") + e.what());
  }
}

Json config_to_json(const VerifyConfig& cfg) {
  Json j;
  Json grid = Json::array();
  for (const Rat& e : cfg.eps_grid) grid.push_back(e.str());
  j["eps_grid"] = std::move(grid);
  j["samples_per_eps"] = cfg.samples_per_eps;
  j["seed"] = cfg.seed;
  j["root_precision_bits"] = cfg.root_precision_bits;
  j["sin_degree"] = cfg.sin_degree;
  return j;
}

Json counterexample_to_json(const Counterexample& ce) {
  Json j;
  j["eps"] = ce.eps.str();
  j["t"] = ce.t.str();
  j["error_lower_bound"] = ce.error_lower_bound.str();
  j["pole"] = ce.pole;
  return j;
}

Json report_to_json(const VerificationReport& report) {
  Json j;
  j["status"] = report.status();
  j["eps_checked"] = report.eps_checked;
  j["points_checked"] = report.points_checked;
  Json violations = Json::array();
  for (const auto& v : report.violations) violations.push_back(counterexample_to_json(v));
  j["violations"] = std::move(violations);
  Json indet = Json::array();
  for (const auto& p : report.indeterminate)
    indet.push_back(Json{{"eps", p.eps.str()}, {"t", p.t.str()}});
  j["indeterminate"] = std::move(indet);
  j["assumptions"] = report.assumptions;
  j["config"] = config_to_json(report.config);
  return j;
}

}  // namespace fizzle
