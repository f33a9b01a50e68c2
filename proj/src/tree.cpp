#include "tangle_forge/tree.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>

#include "tangle_forge/oracle.hpp"

namespace tangle_forge {

StructureTree::StructureTree(SystemPtr system) : system_(std::move(system)) {
  nodes_.emplace_back();
  beta_.push_back(system_->empty_set());
}

StructureTree StructureTree::from_parts(SystemPtr system, std::vector<TreeNode> nodes, NodeId root) {
  auto bad = [](const std::string& why) { return Error(ErrorCode::MalformedTree, why); };
  if (root >= nodes.size() || !nodes[root].alive) throw bad("root " + std::to_string(root) + " is not a node");
  if (nodes[root].parent || nodes[root].label) throw bad("root has a parent edge");
  const std::size_t m = system->oriented_size();
  for (NodeId v = 0; v < nodes.size(); ++v) {
    const auto& n = nodes[v];
    if (!n.alive) continue;
    if (v != root) {
      if (!n.parent || *n.parent >= nodes.size() || !nodes[*n.parent].alive) {
        throw bad("node " + std::to_string(v) + " has no live parent");
      }
      const auto& siblings = nodes[*n.parent].children;
      if (std::find(siblings.begin(), siblings.end(), v) == siblings.end()) {
        throw bad("node " + std::to_string(v) + " is missing from its parent's children");
      }
      if (!n.label || n.label->id() >= m) throw bad("edge into node " + std::to_string(v) + " has no valid label");
    }
    for (auto c : n.children) {
      if (c >= nodes.size() || !nodes[c].alive || nodes[c].parent != v) {
        throw bad("node " + std::to_string(v) + " lists " + std::to_string(c) + " as a child");
      }
    }
  }

  StructureTree tree(system);
  tree.nodes_ = std::move(nodes);
  tree.root_ = root;
  tree.beta_.assign(tree.nodes_.size(), system->empty_set());
  std::vector<bool> seen(tree.nodes_.size(), false);
  std::deque<NodeId> queue{root};
  std::size_t reached = 0;
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    if (seen[v]) throw bad("node " + std::to_string(v) + " is reachable twice");
    seen[v] = true;
    ++reached;
    const auto& n = tree.nodes_[v];
    if (n.parent) tree.beta_[v] = tree.beta_[*n.parent].with(*n.label);
    for (auto c : n.children) queue.push_back(c);
  }
  if (reached != tree.size()) throw bad("some nodes are not reachable from the root");
  return tree;
}

std::size_t StructureTree::size() const {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.alive; }));
}

const TreeNode& StructureTree::node(NodeId v) const {
  if (!contains(v)) throw Error(ErrorCode::MalformedTree, "no node " + std::to_string(v));
  return nodes_[v];
}

std::vector<NodeId> StructureTree::nodes() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < nodes_.size(); ++v) {
    if (nodes_[v].alive) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> StructureTree::leaves() const {
  std::vector<NodeId> out;
  for (NodeId v = 0; v < nodes_.size(); ++v) {
    if (nodes_[v].alive && nodes_[v].children.empty()) out.push_back(v);
  }
  return out;
}

std::vector<NodeId> StructureTree::leaves_below(NodeId v) const {
  std::vector<NodeId> out;
  std::vector<NodeId> stack{v};
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    const auto& n = node(u);
    if (n.children.empty()) out.push_back(u);
    for (auto it = n.children.rbegin(); it != n.children.rend(); ++it) stack.push_back(*it);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> StructureTree::post_order() const {
  std::vector<NodeId> out;
  auto rec = [&](auto&& self, NodeId v) -> void {
    for (auto c : nodes_[v].children) self(self, c);
    out.push_back(v);
  };
  rec(rec, root_);
  return out;
}

std::vector<NodeId> StructureTree::path_to(NodeId v) const {
  std::vector<NodeId> out;
  for (std::optional<NodeId> u = v; u; u = node(*u).parent) out.push_back(*u);
  std::reverse(out.begin(), out.end());
  return out;
}

bool StructureTree::is_ancestor(NodeId u, NodeId v) const {
  for (std::optional<NodeId> x = v; x; x = node(*x).parent) {
    if (*x == u) return true;
  }
  return false;
}

const PartialOrientation& StructureTree::beta(NodeId v) const {
  node(v);
  return beta_[v];
}

SepId StructureTree::s_of(NodeId v) const {
  const auto& n = node(v);
  if (n.children.empty()) throw Error(ErrorCode::LeafHasNoSep, "node " + std::to_string(v) + " is a leaf");
  return nodes_[n.children.front()].label->sep();
}

NodeId StructureTree::add_child(NodeId v, OrientedSep label) {
  node(v);
  if (label.id() >= system_->oriented_size()) throw Error(ErrorCode::MalformedTree, "label outside the system");
  const auto id = static_cast<NodeId>(nodes_.size());
  TreeNode child;
  child.parent = v;
  child.label = label;
  nodes_.push_back(child);
  nodes_[v].children.push_back(id);
  beta_.push_back(beta_[v].with(label));
  return id;
}

void StructureTree::contract_in_place(NodeId v, NodeId w) {
  if (!contains(v) || !contains(w) || nodes_[w].parent != v) {
    throw Error(ErrorCode::NotParentChild,
                "node " + std::to_string(w) + " is not a child of node " + std::to_string(v));
  }
  for (auto c : nodes_[v].children) {
    if (c == w) continue;
    std::vector<NodeId> stack{c};
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (auto x : nodes_[u].children) stack.push_back(x);
      nodes_[u] = TreeNode{};
      nodes_[u].alive = false;
    }
  }
  const auto parent = nodes_[v].parent;
  if (parent) {
    auto& siblings = nodes_[*parent].children;
    *std::find(siblings.begin(), siblings.end(), v) = w;
    nodes_[w].label = nodes_[v].label;
  } else {
    root_ = w;
    nodes_[w].label.reset();
  }
  nodes_[w].parent = parent;
  nodes_[v] = TreeNode{};
  nodes_[v].alive = false;
  refresh_beta(w);
}

void StructureTree::refresh_beta(NodeId v) {
  std::vector<NodeId> stack{v};
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    const auto& n = nodes_[u];
    beta_[u] = n.parent ? beta_[*n.parent].with(*n.label) : system_->empty_set();
    for (auto c : n.children) stack.push_back(c);
  }
}

bool operator==(const StructureTree& a, const StructureTree& b) {
  // dead slots do not count, so trees reloaded from JSON compare equal
  if (a.root_ != b.root_) return false;
  const std::size_t n = std::max(a.nodes_.size(), b.nodes_.size());
  for (std::size_t v = 0; v < n; ++v) {
    const bool x_alive = a.contains(static_cast<NodeId>(v));
    if (x_alive != b.contains(static_cast<NodeId>(v))) return false;
    if (!x_alive) continue;
    const auto& x = a.nodes_[v];
    const auto& y = b.nodes_[v];
    if (x.parent != y.parent || x.children != y.children || x.label != y.label) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

std::string_view to_string(LeafKind kind) {
  switch (kind) {
    case LeafKind::Tangle: return "tangle";
    case LeafKind::Forbidden: return "forbidden";
    case LeafKind::Unresolved: return "unresolved";
  }
  return "unknown";
}

LeafClass classify_leaf(const StructureTree& tree, NodeId leaf, const ForbiddenFamily& family) {
  const auto& sys = tree.system();
  const auto& beta = tree.beta(leaf);
  LeafClass out;
  if (auto w = family.forbidden_subset(beta)) {
    out.kind = LeafKind::Forbidden;
    out.witness = std::move(w);
    return out;
  }
  if (!sys.is_consistent(beta)) return out;
  auto closure = sys.closure_unchecked(beta);
  if (sys.is_full_orientation(closure) && sys.is_consistent(closure) && !family.has_forbidden_subset(closure)) {
    out.kind = LeafKind::Tangle;
    out.tangle = std::move(closure);
  }
  return out;
}

NodeId leaf_for_orientation(const StructureTree& tree, const PartialOrientation& tau) {
  NodeId v = tree.root();
  while (!tree.is_leaf(v)) {
    std::optional<NodeId> next;
    for (auto c : tree.node(v).children) {
      if (tau.contains(*tree.node(c).label)) {
        if (next) throw Error(ErrorCode::MalformedTree, "orientation follows two edges below node " + std::to_string(v));
        next = c;
      }
    }
    if (!next) throw Error(ErrorCode::MalformedTree, "orientation follows no edge below node " + std::to_string(v));
    v = *next;
  }
  return v;
}

namespace {

std::string at(NodeId v) { return "node " + std::to_string(v) + ": "; }

}  // namespace

Check is_separation_tree(const StructureTree& tree) {
  const auto& sys = tree.system();
  for (auto v : tree.nodes()) {
    const auto& n = tree.node(v);
    if (n.children.empty()) continue;
    if (n.children.size() > 2) return Check::fail(at(v) + "more than two children");
    const SepId s = tree.node(n.children.front()).label->sep();
    std::vector<OrientedSep> labels;
    for (auto c : n.children) {
      const auto label = *tree.node(c).label;
      if (label.sep() != s) return Check::fail(at(v) + "child edges carry different separations");
      labels.push_back(label);
    }
    if (sys.is_degenerate(s)) {
      if (labels.size() != 1) return Check::fail(at(v) + "a degenerate separation needs exactly one child");
    } else if (labels.size() != 2 || labels[0] == labels[1]) {
      return Check::fail(at(v) + "child edges do not carry both orientations of s" + std::to_string(s.value));
    }
    if (sys.orients(tree.beta(v), s)) {
      return Check::fail(at(v) + "s" + std::to_string(s.value) + " already splits an ancestor");
    }
  }
  return {};
}

Check is_consistent_tree(const StructureTree& tree) {
  for (auto v : tree.nodes()) {
    if (!tree.system().is_consistent(tree.beta(v))) return Check::fail(at(v) + "beta is inconsistent");
  }
  return {};
}

Check is_ordered(const StructureTree& tree) {
  const auto& sys = tree.system();
  for (auto w : tree.nodes()) {
    const auto& n = tree.node(w);
    if (n.children.empty() || !n.parent) continue;
    const auto v = *n.parent;
    if (sys.order(tree.s_of(v)) > sys.order(tree.s_of(w))) {
      return Check::fail(at(w) + "order drops below that of its parent's separation");
    }
  }
  return {};
}

Check is_thoroughly_ordered(const StructureTree& tree) {
  const auto& sys = tree.system();
  for (auto v : tree.nodes()) {
    if (tree.is_leaf(v)) continue;
    const auto closure = sys.closure_unchecked(tree.beta(v));
    const SepId s = tree.s_of(v);
    if (sys.orients(closure, s)) return Check::fail(at(v) + "closure of beta already orients s_v");
    double least = std::numeric_limits<double>::infinity();
    for (std::uint32_t t = 0; t < sys.size(); ++t) {
      if (!sys.orients(closure, SepId{t})) least = std::min(least, sys.order(SepId{t}));
    }
    if (sys.order(s) != least) return Check::fail(at(v) + "s_v is not of minimum order among unoriented separations");
  }
  return {};
}

Check is_efficient(const StructureTree& tree) {
  const auto& sys = tree.system();
  for (auto l : tree.leaves()) {
    const auto& beta = tree.beta(l);
    if (!is_efficient_in(sys, beta, sys.closure_unchecked(beta))) {
      return Check::fail(at(l) + "beta has an element eclipsed within its closure");
    }
  }
  return {};
}

Check is_structure_tree(const StructureTree& tree, const ForbiddenFamily& family) {
  if (&family.system() != &tree.system()) return Check::fail("family is bound to another system");
  if (auto c = is_separation_tree(tree); !c) return c;
  if (auto c = is_consistent_tree(tree); !c) return c;
  for (auto v : tree.nodes()) {
    if (tree.is_leaf(v)) {
      if (classify_leaf(tree, v, family).kind == LeafKind::Unresolved) {
        return Check::fail(at(v) + "leaf is neither a tangle leaf nor forbidden");
      }
    } else if (family.has_forbidden_subset(tree.beta(v))) {
      return Check::fail(at(v) + "non-leaf beta has a forbidden subset");
    }
  }
  return {};
}

Check is_f_tree(const StructureTree& tree, const ForbiddenFamily& family) {
  if (auto c = is_structure_tree(tree, family); !c) return c;
  for (auto l : tree.leaves()) {
    if (!family.has_forbidden_subset(tree.beta(l))) return Check::fail(at(l) + "leaf is not forbidden");
  }
  return {};
}

std::vector<PartialOrientation> tangles(const StructureTree& tree, const ForbiddenFamily& family) {
  if (auto c = is_structure_tree(tree, family); !c) throw Error(ErrorCode::NotAStructureTree, c.violation);
  std::vector<PartialOrientation> out;
  for (auto l : tree.leaves()) {
    auto cls = classify_leaf(tree, l, family);
    if (cls.kind == LeafKind::Tangle) out.push_back(std::move(*cls.tangle));
  }
  std::sort(out.begin(), out.end(), LexLess{});
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

StructureTree restrict(const StructureTree& tree, double k) {
  if (auto c = is_ordered(tree); !c) throw Error(ErrorCode::NotOrdered, c.violation);
  const auto& sys = tree.system();
  auto sub = sys.restrict_below(k);
  std::map<std::uint32_t, std::uint32_t> local;
  for (std::uint32_t s = 0; s < sub->size(); ++s) local[sub->origin()[s].value] = s;

  std::vector<TreeNode> nodes(tree.capacity());
  for (auto& n : nodes) n.alive = false;
  std::vector<NodeId> stack{tree.root()};
  nodes[tree.root()].alive = true;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    for (auto c : tree.node(v).children) {
      const auto label = *tree.node(c).label;
      if (!(sys.order(label) < k)) continue;
      auto& child = nodes[c];
      child.alive = true;
      child.parent = v;
      child.label = OrientedSep(2 * local.at(label.sep().value) + (label.is_forward() ? 0u : 1u));
      nodes[v].children.push_back(c);
      stack.push_back(c);
    }
  }
  return StructureTree::from_parts(std::move(sub), std::move(nodes), tree.root());
}

}  // namespace tangle_forge
