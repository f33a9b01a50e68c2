#include "tangle_forge/builder.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>

namespace tangle_forge {

StructureTree build(const ForbiddenFamily& family, const BuildConfig& config) {
  const auto& sys = family.system();
  StructureTree tree(family.system_ptr());
  std::size_t cap = config.max_nodes;
  if (sys.size() < 62) cap = std::min(cap, (std::size_t{1} << (sys.size() + 1)) - 1);

  std::deque<NodeId> queue{tree.root()};
  while (!queue.empty()) {
    const NodeId v = queue.front();
    queue.pop_front();
    if (classify_leaf(tree, v, family).kind != LeafKind::Unresolved) continue;
    const auto& beta = tree.beta(v);
    const auto closure = sys.closure_unchecked(beta);

    std::optional<SepId> pick;
    for (std::uint32_t t = 0; t < sys.size(); ++t) {
      const SepId s{t};
      if (sys.orients(closure, s)) continue;
      if (!pick || sys.order(s) < sys.order(*pick) ||
          (config.tiebreak == Tiebreak::GreatestId && sys.order(s) == sys.order(*pick))) {
        pick = s;
      }
    }
    if (!pick) {
      bool cotrivial = false;
      beta.for_each([&](OrientedSep a) { cotrivial = cotrivial || sys.is_cotrivial(a); });
      if (cotrivial) {
        throw Error(ErrorCode::NonStandardFamily,
                    "node " + std::to_string(v) + " holds a co-trivial separation whose inverse singleton is not forbidden");
      }
      continue;  // not rich: left unresolved
    }

    std::vector<OrientedSep> labels{OrientedSep::forward(*pick), OrientedSep::backward(*pick)};
    if (config.child_order == ChildOrder::BackwardFirst) std::swap(labels[0], labels[1]);
    if (sys.is_degenerate(*pick)) labels.resize(1);
    if (tree.size() + labels.size() > cap) {
      throw Error(ErrorCode::NodeCapExceeded, "tree would exceed " + std::to_string(cap) + " nodes");
    }
    for (auto label : labels) queue.push_back(tree.add_child(v, label));
  }
  return tree;
}

StructureTree contract(const StructureTree& tree, NodeId v, NodeId w) {
  StructureTree out = tree;
  out.contract_in_place(v, w);
  return out;
}

namespace {

bool necessary_given(OrientedSep a, const PartialOrientation& beta, const LeafClass& cls, const StructureTree& tree,
                     const ForbiddenFamily& family) {
  if (!beta.contains(a)) return false;
  if (cls.kind == LeafKind::Tangle) {
    bool minimal = true;
    beta.for_each([&](OrientedSep y) { minimal = minimal && !tree.system().less(y, a); });
    return minimal;
  }
  return !family.has_forbidden_subset(beta.without(a));
}

class LeafCache {
 public:
  LeafCache(const StructureTree& tree, const ForbiddenFamily& family) : tree_(tree), family_(family) {}

  const LeafClass& get(NodeId leaf) {
    auto it = cache_.find(leaf);
    if (it == cache_.end()) {
      auto cls = classify_leaf(tree_, leaf, family_);
      if (cls.kind == LeafKind::Unresolved) {
        throw Error(ErrorCode::UnresolvedLeaf, "leaf " + std::to_string(leaf) + " is neither a tangle leaf nor forbidden");
      }
      it = cache_.emplace(leaf, std::move(cls)).first;
    }
    return it->second;
  }
  void forget(const std::vector<NodeId>& leaves) {
    for (auto l : leaves) cache_.erase(l);
  }

 private:
  const StructureTree& tree_;
  const ForbiddenFamily& family_;
  std::map<NodeId, LeafClass> cache_;
};

std::optional<NodeId> removable_child(NodeId v, const StructureTree& tree, const ForbiddenFamily& family,
                                      LeafCache& cache) {
  std::vector<NodeId> children = tree.node(v).children;
  std::sort(children.begin(), children.end());
  for (auto w : children) {
    const auto a = *tree.node(w).label;
    bool needed = false;
    for (auto l : tree.leaves_below(w)) {
      if (necessary_given(a, tree.beta(l), cache.get(l), tree, family)) {
        needed = true;
        break;
      }
    }
    if (!needed) return w;
  }
  return std::nullopt;
}

}  // namespace

bool necessary_for_leaf(OrientedSep a, NodeId leaf, const StructureTree& tree, const ForbiddenFamily& family) {
  if (!tree.is_leaf(leaf)) throw Error(ErrorCode::MalformedTree, "node " + std::to_string(leaf) + " is not a leaf");
  const auto cls = classify_leaf(tree, leaf, family);
  if (cls.kind == LeafKind::Unresolved) {
    throw Error(ErrorCode::UnresolvedLeaf, "leaf " + std::to_string(leaf) + " is neither a tangle leaf nor forbidden");
  }
  return necessary_given(a, tree.beta(leaf), cls, tree, family);
}

bool necessary_node(NodeId v, const StructureTree& tree, const ForbiddenFamily& family) {
  LeafCache cache(tree, family);
  return !removable_child(v, tree, family, cache);
}

StructureTree reduce(const StructureTree& tree, const ForbiddenFamily& family, ReductionTrace* trace, bool keep_trees) {
  if (auto c = is_structure_tree(tree, family); !c) throw Error(ErrorCode::NotAStructureTree, c.violation);
  StructureTree current = tree;
  LeafCache cache(current, family);
  if (trace && keep_trees) trace->trees.push_back(current);
  for (;;) {
    std::optional<std::pair<NodeId, NodeId>> step;
    for (auto v : current.post_order()) {
      if (current.is_leaf(v)) continue;
      if (auto w = removable_child(v, current, family, cache)) {
        step.emplace(v, *w);
        break;
      }
    }
    if (!step) break;
    cache.forget(current.leaves_below(step->first));
    current.contract_in_place(step->first, step->second);
    if (trace) {
      trace->steps.push_back(*step);
      if (keep_trees) trace->trees.push_back(current);
    }
  }
  return current;
}

std::vector<double> default_levels(const SeparationSystem& system) {
  std::set<double> distinct(system.orders().begin(), system.orders().end());
  std::vector<double> levels;
  for (auto it = distinct.begin(); it != distinct.end(); ++it) {
    if (it != distinct.begin()) levels.push_back(*it);
  }
  levels.push_back(std::numeric_limits<double>::infinity());
  return levels;
}

Report pipeline(const ForbiddenFamily& family, std::vector<double> levels, const BuildConfig& config) {
  StructureTree full = build(family, config);
  if (auto c = is_structure_tree(full, family); !c) throw Error(ErrorCode::UnresolvedLeaf, c.violation);
  if (levels.empty()) levels = default_levels(family.system());
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  ReductionTrace trace;
  StructureTree reduced = reduce(full, family, &trace);
  Report report{family, full, reduced, std::move(trace), {}};

  for (double k : levels) {
    StructureTree restricted = restrict(full, k);
    ForbiddenFamily local = family.rebind(restricted.system_ptr());
    if (auto c = is_structure_tree(restricted, local); !c) {
      throw Error(ErrorCode::UnresolvedLeaf, "restriction below " + std::to_string(k) + ": " + c.violation);
    }
    StructureTree level_tree = reduce(restricted, local);
    LevelReport level{k, local, level_tree, tangles(level_tree, local), false, {}};
    bool all_forbidden = true;
    for (auto l : level_tree.leaves()) {
      auto cls = classify_leaf(level_tree, l, local);
      if (cls.kind == LeafKind::Forbidden) {
        level.certificates.push_back(std::move(*cls.witness));
      } else {
        all_forbidden = false;
      }
    }
    level.f_tree = all_forbidden;
    // witnesses only certify something when every leaf has one
    if (!all_forbidden) level.certificates.clear();
    report.per_k.push_back(std::move(level));
  }
  return report;
}

}  // namespace tangle_forge
