#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tangle_forge/forbidden.hpp"
#include "tangle_forge/sepsys.hpp"

namespace tangle_forge {

using NodeId = std::uint32_t;

struct TreeNode {
  std::optional<NodeId> parent;
  std::vector<NodeId> children;
  std::optional<OrientedSep> label;  // label of the edge from the parent
  bool alive = true;
};

/// Rooted tree whose edges carry oriented separations. Node ids are stable:
/// contraction marks removed nodes dead instead of renumbering.
class StructureTree {
 public:
  /// Single root, no edges.
  explicit StructureTree(SystemPtr system);

  /// Reassembles a tree from stored parts; throws MalformedTree when the links
  /// do not describe a rooted tree.
  static StructureTree from_parts(SystemPtr system, std::vector<TreeNode> nodes, NodeId root);

  const SystemPtr& system_ptr() const { return system_; }
  const SeparationSystem& system() const { return *system_; }

  NodeId root() const { return root_; }
  std::size_t capacity() const { return nodes_.size(); }
  std::size_t size() const;
  const TreeNode& node(NodeId v) const;
  bool contains(NodeId v) const { return v < nodes_.size() && nodes_[v].alive; }
  bool is_leaf(NodeId v) const { return node(v).children.empty(); }

  /// Live nodes in id order.
  std::vector<NodeId> nodes() const;
  std::vector<NodeId> leaves() const;
  std::vector<NodeId> leaves_below(NodeId v) const;
  std::vector<NodeId> post_order() const;
  /// Root first, down to v.
  std::vector<NodeId> path_to(NodeId v) const;
  /// u <=_r v
  bool is_ancestor(NodeId u, NodeId v) const;
  std::size_t depth(NodeId v) const { return beta(v).size(); }

  const PartialOrientation& beta(NodeId v) const;
  /// The separation whose orientations label v's child edges.
  SepId s_of(NodeId v) const;

  NodeId add_child(NodeId v, OrientedSep label);

  /// In-place T_{w->v}: w takes v's place, v's other children go away.
  void contract_in_place(NodeId v, NodeId w);

  friend bool operator==(const StructureTree& a, const StructureTree& b);

 private:
  void refresh_beta(NodeId v);

  SystemPtr system_;
  std::vector<TreeNode> nodes_;
  std::vector<PartialOrientation> beta_;
  NodeId root_ = 0;
};

enum class LeafKind { Tangle, Forbidden, Unresolved };

struct LeafClass {
  LeafKind kind = LeafKind::Unresolved;
  std::optional<PartialOrientation> tangle;
  std::optional<Witness> witness;
};

std::string_view to_string(LeafKind kind);

LeafClass classify_leaf(const StructureTree& tree, NodeId leaf, const ForbiddenFamily& family);

/// The unique leaf with beta ⊆ tau; throws MalformedTree if there is none.
NodeId leaf_for_orientation(const StructureTree& tree, const PartialOrientation& tau);

struct Check {
  bool holds = true;
  std::string violation;
  explicit operator bool() const { return holds; }
  static Check fail(std::string why) { return {false, std::move(why)}; }
};

Check is_separation_tree(const StructureTree& tree);
Check is_consistent_tree(const StructureTree& tree);
Check is_ordered(const StructureTree& tree);
Check is_thoroughly_ordered(const StructureTree& tree);
Check is_efficient(const StructureTree& tree);
Check is_structure_tree(const StructureTree& tree, const ForbiddenFamily& family);
Check is_f_tree(const StructureTree& tree, const ForbiddenFamily& family);

/// Closures of the tangle leaves, sorted and deduplicated. Throws
/// NotAStructureTree unless the tree is an F-tangle structure tree.
std::vector<PartialOrientation> tangles(const StructureTree& tree, const ForbiddenFamily& family);

/// T|_k over system().restrict_below(k). Throws NotOrdered.
StructureTree restrict(const StructureTree& tree, double k);

}  // namespace tangle_forge
