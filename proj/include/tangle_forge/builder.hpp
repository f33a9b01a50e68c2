#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "tangle_forge/forbidden.hpp"
#include "tangle_forge/tree.hpp"

namespace tangle_forge {

enum class Tiebreak { LeastId, GreatestId };
enum class ChildOrder { ForwardFirst, BackwardFirst };

struct BuildConfig {
  Tiebreak tiebreak = Tiebreak::LeastId;
  ChildOrder child_order = ChildOrder::ForwardFirst;
  std::size_t max_nodes = std::size_t{1} << 22;
};

/// Grows a thoroughly ordered tree breadth-first, splitting every unresolved
/// leaf on a minimum-order separation its closure leaves unoriented. A leaf
/// whose closure already orients everything but is neither a tangle leaf nor
/// forbidden stays unresolved (F is not rich); the caller checks the result.
StructureTree build(const ForbiddenFamily& family, const BuildConfig& config = {});

/// T_{w->v} as a new tree.
StructureTree contract(const StructureTree& tree, NodeId v, NodeId w);

bool necessary_for_leaf(OrientedSep a, NodeId leaf, const StructureTree& tree, const ForbiddenFamily& family);
bool necessary_node(NodeId v, const StructureTree& tree, const ForbiddenFamily& family);

struct ReductionTrace {
  std::vector<std::pair<NodeId, NodeId>> steps;  // (v, w) per contraction
  std::vector<StructureTree> trees;              // only with keep_trees
};

/// Contracts unnecessary nodes until every node is necessary. Always takes
/// the first unnecessary node in post-order and its least-id child whose
/// label no leaf below needs.
StructureTree reduce(const StructureTree& tree, const ForbiddenFamily& family, ReductionTrace* trace = nullptr,
                     bool keep_trees = false);

struct LevelReport {
  double k = 0;  // +inf for the whole system
  ForbiddenFamily family;
  StructureTree tree;  // reduced T|_k, over family.system()
  std::vector<PartialOrientation> tangles;
  bool f_tree = false;
  std::vector<Witness> certificates;
};

struct Report {
  ForbiddenFamily family;
  StructureTree tree_full;
  StructureTree tree_reduced;
  ReductionTrace trace;
  std::vector<LevelReport> per_k;
};

/// Order thresholds at which S_k changes, ending with +inf.
std::vector<double> default_levels(const SeparationSystem& system);

/// Build, reduce, and analyse T|_k (taken from the unreduced tree) for each
/// level. An empty `levels` means default_levels().
Report pipeline(const ForbiddenFamily& family, std::vector<double> levels = {}, const BuildConfig& config = {});

}  // namespace tangle_forge
