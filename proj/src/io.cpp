#include "tangle_forge/io.hpp"

#include <bit>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "tangle_forge/ground.hpp"

namespace tangle_forge {

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

namespace {

Json vertex_list(std::uint64_t mask) {
  Json out = Json::array();
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

std::uint64_t vertex_mask(const Json& list) {
  std::uint64_t mask = 0;
  for (const auto& v : list) {
    const auto i = v.get<unsigned>();
    if (i >= 64) throw Error(ErrorCode::ParseError, "vertex index " + std::to_string(i) + " too large");
    mask |= 1ull << i;
  }
  return mask;
}

// Oriented id in `reference` of an element of `system`, which is either the
// reference itself or restricted from it.
std::uint32_t reference_id(OrientedSep a, const SeparationSystem& system, const SeparationSystem& reference) {
  if (&system == &reference) return a.id();
  return 2 * system.origin()[a.sep().value].value + (a.is_forward() ? 0u : 1u);
}

template <typename Fn>
auto guarded(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": " + e.what());
  }
}

void expect_schema(const Json& j, const char* schema) {
  if (!j.is_object() || !j.contains("schema") || j["schema"] != schema) {
    throw Error(ErrorCode::ParseError, std::string("expected a ") + schema + " document");
  }
}

}  // namespace

Json k_to_json(double k) {
  if (std::isinf(k)) return k > 0 ? Json("inf") : Json("-inf");
  return k;
}

double k_from_json(const Json& j) {
  if (j.is_string()) {
    if (j == "inf") return std::numeric_limits<double>::infinity();
    if (j == "-inf") return -std::numeric_limits<double>::infinity();
    throw Error(ErrorCode::ParseError, "threshold must be a number or \"inf\"");
  }
  return guarded("threshold", [&] { return j.get<double>(); });
}

// ---------------------------------------------------------------------------
// sepsys/v1

Json system_to_json(const SeparationSystem& system) {
  const SystemData data = system.to_data();
  Json j;
  j["schema"] = "sepsys/v1";
  j["count"] = data.count;
  j["orders"] = data.orders;
  if (!data.ground) {
    Json leq = Json::array();
    for (auto [a, b] : data.leq) leq.push_back({a, b});
    j["leq"] = leq;
  }
  if (!data.degenerate.empty()) j["degenerate"] = data.degenerate;
  if (data.tables) {
    j["universe"] = {{"join", data.tables->join}, {"meet", data.tables->meet}};
    j["distributive"] = data.distributive;
  }
  if (data.ground) {
    Json g;
    g["kind"] = data.ground->kind == GroundKind::Graph ? "graph" : "bipartition";
    g["points"] = data.ground->point_count;
    if (data.ground->kind == GroundKind::Graph) {
      Json edges = Json::array();
      for (auto [u, v] : data.ground->edges) edges.push_back({u, v});
      g["edges"] = edges;
    }
    Json sides = Json::array();
    for (const auto& e : data.sides) sides.push_back({vertex_list(e.a), vertex_list(e.b)});
    g["sides"] = sides;
    j["ground"] = g;
  }
  return j;
}

SystemData system_data_from_json(const Json& j) {
  expect_schema(j, "sepsys/v1");
  return guarded("sepsys/v1", [&] {
    SystemData data;
    data.count = j.at("count").get<std::size_t>();
    data.orders = j.at("orders").get<std::vector<double>>();
    if (j.contains("leq")) {
      for (const auto& pair : j["leq"]) {
        if (!pair.is_array() || pair.size() != 2) throw Error(ErrorCode::ParseError, "leq entries are [a, b] pairs");
        data.leq.emplace_back(pair[0].get<std::uint32_t>(), pair[1].get<std::uint32_t>());
      }
    }
    if (j.contains("degenerate")) data.degenerate = j["degenerate"].get<std::vector<std::uint32_t>>();
    if (j.contains("universe")) {
      LatticeTables t;
      t.join = j["universe"].at("join").get<std::vector<std::vector<std::uint32_t>>>();
      t.meet = j["universe"].at("meet").get<std::vector<std::vector<std::uint32_t>>>();
      data.tables = std::move(t);
      data.distributive = j.value("distributive", false);
    }
    if (j.contains("ground")) {
      const auto& g = j["ground"];
      Ground ground;
      const auto kind = g.at("kind").get<std::string>();
      if (kind == "graph") {
        ground.kind = GroundKind::Graph;
      } else if (kind == "bipartition") {
        ground.kind = GroundKind::Bipartition;
      } else {
        throw Error(ErrorCode::ParseError, "unknown ground kind '" + kind + "'");
      }
      ground.point_count = g.at("points").get<unsigned>();
      if (g.contains("edges")) {
        for (const auto& e : g["edges"]) ground.edges.emplace_back(e.at(0).get<unsigned>(), e.at(1).get<unsigned>());
      }
      for (const auto& s : g.at("sides")) {
        if (!s.is_array() || s.size() != 2) throw Error(ErrorCode::ParseError, "sides are [A, B] vertex lists");
        data.sides.push_back({vertex_mask(s[0]), vertex_mask(s[1])});
      }
      data.ground = std::move(ground);
    }
    return data;
  });
}

LoadOptions load_options_from_json(const Json& j) {
  LoadOptions options;
  options.close_transitively = j.value("close_transitively", false);
  options.allow_degenerate = j.value("allow_degenerate", false);
  return options;
}

SystemPtr system_from_json(const Json& j) {
  return SeparationSystem::create(system_data_from_json(j), load_options_from_json(j));
}

std::string fingerprint(const SeparationSystem& system) {
  const std::string text = system_to_json(system).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ---------------------------------------------------------------------------
// family/v1

namespace {

std::string kind_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Empty: return "empty";
    case FamilyKind::Explicit: return "explicit";
    case FamilyKind::Blocks: return "blocks";
    case FamilyKind::Profile: return "profile";
    case FamilyKind::StrongProfile: return "strong_profile";
    case FamilyKind::Cluster: return "cluster";
    case FamilyKind::GraphTangle: return "graph_tangle";
  }
  return "unknown";
}

ForbiddenFamily make_family(const std::string& kind, std::optional<unsigned> param, SystemPtr system) {
  auto need = [&](const char* what) {
    if (!param) throw Error(ErrorCode::ParseError, "family '" + kind + "' needs a parameter " + what);
    return *param;
  };
  if (kind == "empty") return ForbiddenFamily::empty(std::move(system));
  if (kind == "blocks") return ForbiddenFamily::blocks(std::move(system), need("k"));
  if (kind == "cluster") return ForbiddenFamily::cluster(std::move(system), need("n"));
  if (kind == "profile") return ForbiddenFamily::profile(std::move(system));
  if (kind == "strong_profile" || kind == "ps") return ForbiddenFamily::strong_profile(std::move(system));
  if (kind == "graph_tangle" || kind == "tangle") return ForbiddenFamily::graph_tangle(std::move(system));
  throw Error(ErrorCode::ParseError, "unknown family kind '" + kind + "'");
}

}  // namespace

Json family_to_json(const ForbiddenFamily& family) {
  Json j;
  j["schema"] = "family/v1";
  j["kind"] = kind_name(family.kind());
  if (family.kind() == FamilyKind::Blocks) j["k"] = family.parameter();
  if (family.kind() == FamilyKind::Cluster) j["n"] = family.parameter();
  if (family.kind() == FamilyKind::Explicit) {
    Json members = Json::array();
    for (const auto& m : family.listed_members()) {
      Json ids = Json::array();
      m.for_each([&](OrientedSep a) { ids.push_back(a.id()); });
      members.push_back(ids);
    }
    j["explicit_members"] = members;
  }
  if (auto sub = family.submodular()) j["submodular"] = *sub;
  return j;
}

ForbiddenFamily family_from_json(const Json& j, SystemPtr system) {
  expect_schema(j, "family/v1");
  return guarded("family/v1", [&] {
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "explicit") {
      std::vector<PartialOrientation> members;
      for (const auto& list : j.at("explicit_members")) {
        PartialOrientation m = system->empty_set();
        for (const auto& id : list) {
          const auto i = id.get<std::uint32_t>();
          if (i >= system->oriented_size()) throw Error(ErrorCode::ParseError, "oriented id " + std::to_string(i) + " out of range");
          m.insert(OrientedSep(i));
        }
        members.push_back(std::move(m));
      }
      return ForbiddenFamily::explicit_members(system, std::move(members));
    }
    std::optional<unsigned> param;
    if (j.contains("k")) param = j["k"].get<unsigned>();
    if (j.contains("n")) param = j["n"].get<unsigned>();
    return make_family(kind, param, system);
  });
}

ForbiddenFamily family_from_spec(const std::string& spec, SystemPtr system) {
  const auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  for (auto& c : kind) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  std::optional<unsigned> param;
  if (colon != std::string::npos) {
    const std::string text = spec.substr(colon + 1);
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
      throw Error(ErrorCode::ParseError, "family parameter '" + text + "' is not a nonnegative integer");
    }
    param = static_cast<unsigned>(std::stoul(text));
  }
  return make_family(kind, param, std::move(system));
}

// ---------------------------------------------------------------------------
// tree/v1

Json tree_to_json(const StructureTree& tree, const SeparationSystem& reference, std::optional<double> k) {
  Json j;
  j["schema"] = "tree/v1";
  j["system_ref"] = fingerprint(reference);
  if (k) j["k"] = k_to_json(*k);
  j["root"] = tree.root();
  Json nodes = Json::array();
  for (auto v : tree.nodes()) {
    const auto& n = tree.node(v);
    Json node;
    node["id"] = v;
    node["parent"] = n.parent ? Json(*n.parent) : Json(nullptr);
    node["edge_label"] = n.label ? Json(reference_id(*n.label, tree.system(), reference)) : Json(nullptr);
    nodes.push_back(node);
  }
  j["nodes"] = nodes;
  return j;
}

StructureTree tree_from_json(const Json& j, const SystemPtr& reference) {
  expect_schema(j, "tree/v1");
  return guarded("tree/v1", [&] {
    if (j.at("system_ref").get<std::string>() != fingerprint(*reference)) {
      throw Error(ErrorCode::GroundMismatch, "tree was written for a different separation system");
    }
    SystemPtr system = reference;
    std::map<std::uint32_t, std::uint32_t> local;
    if (j.contains("k")) {
      system = reference->restrict_below(k_from_json(j["k"]));
      for (std::uint32_t s = 0; s < system->size(); ++s) local[system->origin()[s].value] = s;
    } else {
      for (std::uint32_t s = 0; s < system->size(); ++s) local[s] = s;
    }
    std::size_t count = 0;
    for (const auto& n : j.at("nodes")) count = std::max<std::size_t>(count, n.at("id").get<NodeId>() + 1);
    if (count > (std::size_t{1} << 26)) throw Error(ErrorCode::MalformedTree, "node ids are implausibly large");
    std::vector<TreeNode> nodes(count);
    for (auto& n : nodes) n.alive = false;
    for (const auto& n : j["nodes"]) {
      const NodeId id = n["id"].get<NodeId>();
      auto& node = nodes[id];
      if (node.alive) throw Error(ErrorCode::MalformedTree, "node " + std::to_string(id) + " listed twice");
      node.alive = true;
      if (!n.at("parent").is_null()) node.parent = n["parent"].get<NodeId>();
      if (!n.at("edge_label").is_null()) {
        const auto ref = n["edge_label"].get<std::uint32_t>();
        auto it = local.find(ref >> 1);
        if (it == local.end()) throw Error(ErrorCode::MalformedTree, "label " + std::to_string(ref) + " outside the system");
        node.label = OrientedSep(2 * it->second + (ref & 1u));
      }
    }
    // children in id order, matching how build and restrict lay them out
    for (NodeId v = 0; v < nodes.size(); ++v) {
      if (nodes[v].alive && nodes[v].parent) {
        const NodeId p = *nodes[v].parent;
        if (p >= nodes.size() || !nodes[p].alive) throw Error(ErrorCode::MalformedTree, "dangling parent of " + std::to_string(v));
        nodes[p].children.push_back(v);
      }
    }
    return StructureTree::from_parts(system, std::move(nodes), j.at("root").get<NodeId>());
  });
}

// ---------------------------------------------------------------------------
// witnesses and reports

Json orientation_to_json(const PartialOrientation& set, const SeparationSystem& system, const SeparationSystem& reference) {
  Json ids = Json::array();
  set.for_each([&](OrientedSep a) { ids.push_back(reference_id(a, system, reference)); });
  return ids;
}

Json witness_to_json(const Witness& witness, const ForbiddenFamily& family, const SeparationSystem& reference) {
  const auto& sys = family.system();
  Json j;
  j["members"] = orientation_to_json(witness.members, sys, reference);
  Json described = Json::array();
  witness.members.for_each([&](OrientedSep a) { described.push_back(sys.describe(a)); });
  j["described"] = described;
  switch (family.kind()) {
    case FamilyKind::Blocks:
    case FamilyKind::Cluster: j["intersection"] = vertex_list(witness.intersection); break;
    case FamilyKind::Profile:
    case FamilyKind::StrongProfile:
    case FamilyKind::GraphTangle: {
      Json roles = Json::array();
      for (auto r : witness.roles) roles.push_back(reference_id(r, sys, reference));
      j["roles"] = roles;
      break;
    }
    case FamilyKind::Explicit: j["member_index"] = witness.member_index; break;
    case FamilyKind::Empty: break;
  }
  return j;
}

Json report_to_json(const Report& report) {
  const auto& ref = report.family.system();
  Json j;
  j["schema"] = "report/v1";
  j["family"] = family_to_json(report.family);
  j["tree_full"] = tree_to_json(report.tree_full, ref);
  j["tree_reduced"] = tree_to_json(report.tree_reduced, ref);
  Json steps = Json::array();
  for (auto [v, w] : report.trace.steps) steps.push_back({v, w});
  j["reduction_steps"] = steps;
  Json levels = Json::array();
  for (const auto& level : report.per_k) {
    const auto& sys = level.family.system();
    Json l;
    l["k"] = k_to_json(level.k);
    l["separations"] = sys.size();
    l["tree"] = tree_to_json(level.tree, ref, level.k);
    Json tangles = Json::array();
    Json blocks = Json::array();
    for (const auto& t : level.tangles) {
      tangles.push_back(orientation_to_json(sys.minimal_elements(t), sys, ref));
      if (report.family.kind() == FamilyKind::Blocks) blocks.push_back(vertex_list(block_of_tangle(sys, t)));
    }
    l["tangles"] = tangles;
    if (report.family.kind() == FamilyKind::Blocks) l["blocks"] = blocks;
    l["f_tree"] = level.f_tree;
    Json certs = Json::array();
    for (const auto& w : level.certificates) certs.push_back(witness_to_json(w, level.family, ref));
    l["certificates"] = certs;
    levels.push_back(l);
  }
  j["per_k"] = levels;
  return j;
}

}  // namespace tangle_forge
