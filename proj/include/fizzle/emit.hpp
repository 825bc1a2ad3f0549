#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fizzle/verify.hpp"
#include "fizzle/witness.hpp"

namespace fizzle {

enum class ProofFormat { Text, LaTeX };

struct EmitOptions {
  bool errata_footnotes = true;  // opt-out via --no-errata
};

// Rendered proof: claim, one step per derivation rule (children first),
// the delta choice, conclusion, and footnotes for every corrected
// constant the derivation touches. Rendering replays the stored
// derivation; it never re-derives anything.
struct ProofDocument {
  ProofFormat format;
  std::string body;
  std::vector<std::string> erratum_footnotes;
};

ProofDocument render_proof(const Witness& w, ProofFormat format,
                           const EmitOptions& options = {});

using Json = nlohmann::ordered_json;

// Schema "fizzle-witness/1". deserialize(serialize(w)) is structurally
// equal to w; schema or shape mismatches raise SchemaError.
Json serialize_witness(const Witness& w);
Witness deserialize_witness(const Json& j);

Json report_to_json(const VerificationReport& report);
Json counterexample_to_json(const Counterexample& ce);
Json config_to_json(const VerifyConfig& cfg);

}  // namespace fizzle
