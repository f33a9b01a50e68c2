#pragma once

#include <optional>
#include <string>

#include "json.hpp"

#include "tangle_forge/builder.hpp"
#include "tangle_forge/forbidden.hpp"
#include "tangle_forge/sepsys.hpp"
#include "tangle_forge/tree.hpp"

namespace tangle_forge {

using Json = nlohmann::ordered_json;

/// Pretty-printed with a trailing newline; the only formatting used for output files.
std::string dump(const Json& j);
Json parse_json(const std::string& text);

// sepsys/v1
Json system_to_json(const SeparationSystem& system);
SystemData system_data_from_json(const Json& j);
LoadOptions load_options_from_json(const Json& j);
SystemPtr system_from_json(const Json& j);

/// FNV-1a over the canonical sepsys/v1 text, as 16 hex digits.
std::string fingerprint(const SeparationSystem& system);

// family/v1
Json family_to_json(const ForbiddenFamily& family);
ForbiddenFamily family_from_json(const Json& j, SystemPtr system);
/// "blocks:3", "cluster:2", "profile", "strong_profile", "graph_tangle", "empty".
ForbiddenFamily family_from_spec(const std::string& spec, SystemPtr system);

// tree/v1. Labels are written as oriented ids of `reference`; a tree over
// reference.restrict_below(k) records k and is rebuilt over that subsystem.
Json tree_to_json(const StructureTree& tree, const SeparationSystem& reference, std::optional<double> k = std::nullopt);
StructureTree tree_from_json(const Json& j, const SystemPtr& reference);

Json witness_to_json(const Witness& witness, const ForbiddenFamily& family, const SeparationSystem& reference);
Json orientation_to_json(const PartialOrientation& set, const SeparationSystem& system, const SeparationSystem& reference);

// report/v1
Json report_to_json(const Report& report);

Json k_to_json(double k);
double k_from_json(const Json& j);

}  // namespace tangle_forge
