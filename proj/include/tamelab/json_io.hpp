#pragma once

// Source-spec JSON loading (schema documented in docs/source_spec_schema.md)
// and artifact serialization. All artifacts are ASCII, newline-terminated,
// with keys sorted; fixed-point values travel as lowercase hex mantissa
// strings plus a bits field, the bit-exact interchange form.

#include <cstdint>
#include <string>

#include <json.hpp>

#include "tamelab/classify.hpp"
#include "tamelab/entropy.hpp"
#include "tamelab/indep.hpp"
#include "tamelab/lang.hpp"
#include "tamelab/sources.hpp"
#include "tamelab/torus.hpp"
#include "tamelab/wapset.hpp"

namespace tamelab::json_io {

using nlohmann::json;

// Constants: lowercase hex mantissa string, or {"kind": "golden"},
// {"kind": "rational", "p":, "q":}, {"kind": "sqrt_rational", "p":, "q":}.
torus::FixedPointFrac parse_constant(const json& value, unsigned bits,
                                     const std::string& path);

sources::SymbolicSource parse_source(const json& spec);
json serialize_source(const sources::SymbolicSource& source);

struct LoadedSource {
    sources::SymbolicSource source;
    std::string digest;          // fnv1a64 of the raw bytes
    json raw;
};

// Throws MalformedSpec with a line/column diagnostic on parse errors.
LoadedSource load_source_file(const std::string& path);

sources::IntegerSetSpec parse_integer_set(const json& value, const std::string& path);
json serialize_integer_set(const sources::IntegerSetSpec& spec);

std::string fnv1a64_hex(const std::string& bytes);

inline constexpr const char* kToolName = "tamelab";
inline constexpr const char* kToolVersion = "0.1.0";

// Deterministic run manifest: tool version, source digest, command line with
// --threads stripped, budget profile, taint summary. Wall time is reported on
// stderr, never embedded, so identical runs produce identical bytes.
json make_manifest(const std::string& command, const std::string& source_digest,
                   const json& budgets, bool tainted);

// result + manifest, serialized sorted-keys, newline-terminated
std::string render_artifact(const json& manifest, const json& result);

json to_json(const lang::PatternStore& store);
json to_json(const lang::ComplexityTable& table);
json to_json(const indep::FreeSetCertificate& cert);
json to_json(const indep::MissingPatterns& missing);
json to_json(const indep::SearchReport& report);
json to_json(const std::vector<indep::DensityPoint>& profile);
json to_json(const entropy::EntropyEstimate& est);
json to_json(const wapset::RuppertVerdict& verdict);
json to_json(const classify::Report& report);

indep::FreeSetCertificate certificate_from_json(const json& j);

} // namespace tamelab::json_io
