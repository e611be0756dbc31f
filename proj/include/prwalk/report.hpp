#pragma once

#include <string>

#include "json.hpp"
#include "prwalk/diagnostics.hpp"
#include "prwalk/pipeline.hpp"

namespace prwalk {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Compact dump with sorted keys; doubles use the shortest round-trip form.
std::string canonical_dump(const json& j);

// SHA-1 of the git blob "blob <len>\0<canonical json>", lowercase hex.
std::string config_hash(const json& config);

json envelope(const std::string& command, std::uint64_t seed, const json& config, json result);

json to_json(const PipelineReport& r);
json to_json(const PipelineExact& r);
json to_json(const Estimate& e);
json to_json(const RateConstants& c);
json to_json(const RepresentationResiduals& r);
json to_json(const ConnectivityReport& r);
json to_json(const EntropyDecayReport& r);

}  // namespace prwalk
