#include "support.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace tf_test {

tf::OracleBudget wide_budget() {
  tf::OracleBudget b;
  b.max_separations = 4096;
  b.max_visits = std::size_t{1} << 26;
  return b;
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::string describe_set(const PartialOrientation& set) {
  std::string out = "{";
  set.for_each([&](OrientedSep a) {
    if (out.size() > 1) out += ",";
    out += std::to_string(a.id());
  });
  return out + "}";
}

tf::SystemPtr random_poset(Rng& rng, std::size_t n, bool injective_orders, bool allow_trivial) {
  const tf::LoadOptions options{true, false};
  for (int attempt = 0; attempt < 100000; ++attempt) {
    tf::SystemData d;
    d.count = n;
    if (injective_orders) {
      d.orders.resize(n);
      std::iota(d.orders.begin(), d.orders.end(), 1.0);
      std::shuffle(d.orders.begin(), d.orders.end(), rng);
    } else {
      for (std::size_t s = 0; s < n; ++s) d.orders.push_back(uniform(rng, 1, 3));
    }
    const int relations = n < 2 ? 0 : uniform(rng, 0, static_cast<int>(2 * n));
    for (int i = 0; i < relations; ++i) {
      const auto a = static_cast<std::uint32_t>(uniform(rng, 0, static_cast<int>(2 * n - 1)));
      const auto b = static_cast<std::uint32_t>(uniform(rng, 0, static_cast<int>(2 * n - 1)));
      if ((a >> 1) == (b >> 1)) continue;
      d.leq.emplace_back(a, b);
      d.leq.emplace_back(b ^ 1u, a ^ 1u);
    }
    if (!tf::validate(d, options).ok()) continue;
    auto sys = tf::SeparationSystem::create(d, options);
    if (!allow_trivial) {
      bool trivial = false;
      for (std::uint32_t a = 0; a < sys->oriented_size(); ++a) trivial = trivial || sys->is_trivial(OrientedSep(a));
      if (trivial) continue;
    }
    return sys;
  }
  throw std::runtime_error("no random poset found");
}

namespace {

std::vector<PartialOrientation> standard_singletons(const tf::SeparationSystem& sys) {
  std::vector<PartialOrientation> out;
  for (std::uint32_t a = 0; a < sys.oriented_size(); ++a) {
    if (sys.is_trivial(OrientedSep(a))) out.push_back(sys.make_set({OrientedSep(a).inverse()}));
  }
  return out;
}

PartialOrientation random_set(Rng& rng, const tf::SeparationSystem& sys, int max_size) {
  PartialOrientation set = sys.empty_set();
  const int size = uniform(rng, 1, max_size);
  for (int i = 0; i < size; ++i) set.insert(OrientedSep(uniform(rng, 0, static_cast<int>(sys.oriented_size()) - 1)));
  return set;
}

}  // namespace

tf::ForbiddenFamily min_closed_explicit(Rng& rng, const tf::SystemPtr& system) {
  const auto& sys = *system;
  std::set<PartialOrientation, tf::LexLess> members;
  for (auto& m : standard_singletons(sys)) members.insert(m);
  const int seeds = uniform(rng, 0, 2);
  for (int i = 0; i < seeds; ++i) members.insert(random_set(rng, sys, 3));
  std::vector<PartialOrientation> todo(members.begin(), members.end());
  while (!todo.empty()) {
    const auto m = todo.back();
    todo.pop_back();
    m.for_each([&](OrientedSep x) {
      for (std::uint32_t y = 0; y < sys.oriented_size(); ++y) {
        if (!sys.less(OrientedSep(y), x)) continue;
        auto lowered = m.without(x).with(OrientedSep(y));
        if (members.insert(lowered).second) todo.push_back(lowered);
      }
    });
  }
  return tf::ForbiddenFamily::explicit_members(system, {members.begin(), members.end()});
}

tf::ForbiddenFamily random_explicit(Rng& rng, const tf::SystemPtr& system) {
  auto members = standard_singletons(*system);
  const int extra = uniform(rng, 1, 3);
  for (int i = 0; i < extra; ++i) members.push_back(random_set(rng, *system, 3));
  return tf::ForbiddenFamily::explicit_members(system, members);
}

std::vector<tf::Graph> graphs_up_to_isomorphism(unsigned n) {
  std::vector<std::pair<unsigned, unsigned>> pairs;
  for (unsigned u = 0; u < n; ++u) {
    for (unsigned v = u + 1; v < n; ++v) pairs.emplace_back(u, v);
  }
  std::map<std::pair<unsigned, unsigned>, unsigned> index;
  for (unsigned i = 0; i < pairs.size(); ++i) index[pairs[i]] = i;
  std::vector<std::vector<unsigned>> perms;
  std::vector<unsigned> p(n);
  std::iota(p.begin(), p.end(), 0u);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));

  std::set<std::uint32_t> seen;
  std::vector<tf::Graph> out;
  for (std::uint32_t mask = 0; mask < (1u << pairs.size()); ++mask) {
    std::uint32_t canon = ~0u;
    for (const auto& q : perms) {
      std::uint32_t image = 0;
      for (unsigned i = 0; i < pairs.size(); ++i) {
        if (!((mask >> i) & 1u)) continue;
        auto u = q[pairs[i].first], v = q[pairs[i].second];
        if (u > v) std::swap(u, v);
        image |= 1u << index[{u, v}];
      }
      canon = std::min(canon, image);
    }
    if (!seen.insert(canon).second) continue;
    std::vector<std::pair<unsigned, unsigned>> edges;
    for (unsigned i = 0; i < pairs.size(); ++i) {
      if ((canon >> i) & 1u) edges.push_back(pairs[i]);
    }
    out.push_back(tf::Graph::from_edges(n, edges));
  }
  return out;
}

std::vector<std::uint64_t> random_sides(Rng& rng, unsigned points, std::size_t max_seps, bool keep_empty) {
  const std::uint64_t all = (1ull << points) - 1;
  std::vector<std::uint64_t> reps;
  for (std::uint64_t x = 1; x <= all; ++x) {
    if (x < (all & ~x)) reps.push_back(x);
  }
  std::shuffle(reps.begin(), reps.end(), rng);
  const std::size_t cap = std::min(max_seps - (keep_empty ? 1 : 0), reps.size());
  const std::size_t take = cap == 0 ? 0 : static_cast<std::size_t>(uniform(rng, 1, static_cast<int>(cap)));
  reps.resize(take);
  if (keep_empty) reps.push_back(0);
  std::vector<std::uint64_t> sides;
  for (auto x : reps) {
    sides.push_back(x);
    sides.push_back(all & ~x);
  }
  return sides;
}

std::vector<std::vector<double>> random_similarity(Rng& rng, unsigned points) {
  std::vector<std::vector<double>> sim(points, std::vector<double>(points, 0.0));
  for (unsigned u = 0; u < points; ++u) {
    for (unsigned v = u + 1; v < points; ++v) sim[u][v] = sim[v][u] = uniform(rng, 0, 4);
  }
  return sim;
}

namespace {

tf::OrderRule random_injective_rule(Rng& rng, unsigned points) {
  const std::uint64_t all = (1ull << points) - 1;
  std::vector<double> values((1u << (points - 1)) + 1);
  std::iota(values.begin(), values.end(), 1.0);
  std::shuffle(values.begin(), values.end(), rng);
  std::map<std::uint64_t, double> table;
  std::size_t next = 0;
  for (std::uint64_t x = 0; x <= all; ++x) {
    const auto key = std::min(x, all & ~x);
    if (!table.count(key)) table[key] = values[next++];
  }
  return [table, all](std::uint64_t x) { return table.at(std::min(x, all & ~x)); };
}

}  // namespace

std::vector<Instance> master_instances() {
  std::vector<Instance> out;
  Rng rng(20261016);
  for (int i = 0; i < 70; ++i) {
    const std::size_t n = 1 + i % 5;
    const bool injective = (i / 5) % 2 == 0;
    auto plain = random_poset(rng, n, injective, false);
    out.push_back({"poset " + std::to_string(i) + " empty", tf::ForbiddenFamily::empty(plain)});
    auto with_trivial = random_poset(rng, n, injective, true);
    out.push_back({"poset " + std::to_string(i) + " explicit", min_closed_explicit(rng, with_trivial)});
  }
  for (unsigned n = 1; n <= 5; ++n) {
    const auto graphs = graphs_up_to_isomorphism(n);
    for (std::size_t g = 0; g < graphs.size(); ++g) {
      for (unsigned k = 1; k <= 3; ++k) {
        auto sys = tf::graph_system(graphs[g], k);
        const std::string tag = "graph n" + std::to_string(n) + " #" + std::to_string(g) + " k" + std::to_string(k);
        out.push_back({tag + " blocks", tf::ForbiddenFamily::blocks(sys, k)});
        out.push_back({tag + " strong_profile", tf::ForbiddenFamily::strong_profile(sys)});
      }
    }
  }
  for (int i = 0; i < 40; ++i) {
    const unsigned points = 2 + i % 5;
    const bool injective = i % 2 == 0;
    auto rule = [&] { return injective ? random_injective_rule(rng, points) : tf::cut_weight(random_similarity(rng, points)); };
    const std::string tag = "bipartition " + std::to_string(i) + " p" + std::to_string(points);
    auto sys = tf::bipartition_system({points, random_sides(rng, points, 10, true), rule()});
    const unsigned agreement = 1 + i % 3;
    out.push_back({tag + " cluster" + std::to_string(agreement), tf::ForbiddenFamily::cluster(sys, agreement)});
    out.push_back({tag + " strong_profile", tf::ForbiddenFamily::strong_profile(sys)});
    auto bare = tf::bipartition_system({points, random_sides(rng, points, 10, false), rule()});
    out.push_back({tag + " empty", tf::ForbiddenFamily::empty(bare)});
  }
  return out;
}

std::string ladder_violation(const tf::StructureTree& tree, const tf::ForbiddenFamily& family) {
  if (auto c = tf::is_separation_tree(tree); !c) return "separation tree: " + c.violation;
  if (auto c = tf::is_consistent_tree(tree); !c) return "consistent: " + c.violation;
  if (auto c = tf::is_thoroughly_ordered(tree); !c) return "thoroughly ordered: " + c.violation;
  if (auto c = tf::is_ordered(tree); !c) return "ordered: " + c.violation;
  if (auto c = tf::is_efficient(tree); !c) return "efficient: " + c.violation;
  if (auto c = tf::is_structure_tree(tree, family); !c) return "structure tree: " + c.violation;
  const auto n = tree.system().size();
  if (n < 40 && tree.size() >= (std::size_t{1} << (n + 1))) {
    return "tree has " + std::to_string(tree.size()) + " nodes for " + std::to_string(n) + " separations";
  }
  return {};
}

namespace {

PartialOrientation closure_by_definition(const tf::SeparationSystem& sys, const PartialOrientation& sigma) {
  PartialOrientation out = sigma;
  for (std::uint32_t x = 0; x < sys.oriented_size(); ++x) {
    sigma.for_each([&](OrientedSep r) {
      if (r.sep() != OrientedSep(x).sep() && sys.less(r, OrientedSep(x))) out.insert(OrientedSep(x));
    });
  }
  return out;
}

bool efficient_by_definition(const tf::SeparationSystem& sys, const PartialOrientation& sigma,
                             const PartialOrientation& tau) {
  bool ok = true;
  sigma.for_each([&](OrientedSep s) {
    tau.for_each([&](OrientedSep r) {
      if (ok && sys.less(r, s) && sys.order(r) < sys.order(s)) ok = false;
    });
  });
  return ok;
}

bool consistent_by_definition(const tf::SeparationSystem& sys, const PartialOrientation& sigma) {
  bool ok = true;
  sigma.for_each([&](OrientedSep a) {
    sigma.for_each([&](OrientedSep b) {
      if (ok && a.sep() != b.sep() && sys.leq(a, b.inverse())) ok = false;
    });
  });
  return ok;
}

std::optional<PartialOrientation> random_consistent_orientation(const tf::SeparationSystem& sys, Rng& rng) {
  std::vector<std::uint32_t> order(sys.size());
  std::iota(order.begin(), order.end(), 0u);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> first(sys.size());
  for (auto& f : first) f = uniform(rng, 0, 1);
  PartialOrientation current = sys.empty_set();
  std::size_t steps = 0;
  std::function<bool(std::size_t)> go = [&](std::size_t i) {
    if (i == order.size()) return true;
    if (++steps > 20000) return false;
    for (int t = 0; t < 2; ++t) {
      const OrientedSep a(2 * order[i] + ((first[i] + t) & 1));
      bool ok = true;
      current.for_each([&](OrientedSep b) { ok = ok && !sys.leq(a, b.inverse()) && !sys.leq(b, a.inverse()); });
      if (!ok) continue;
      current.insert(a);
      if (go(i + 1)) return true;
      current.erase(a);
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  return current;
}

}  // namespace

std::vector<PartialOrientation> test_orientations(const tf::SeparationSystem& sys, Rng& rng) {
  std::vector<PartialOrientation> out;
  const auto n = sys.size();
  if (n <= 12) {
    for (std::uint32_t bits = 0; bits < (1u << n); ++bits) {
      PartialOrientation tau = sys.empty_set();
      for (std::uint32_t s = 0; s < n; ++s) tau.insert(OrientedSep(2 * s + ((bits >> s) & 1u)));
      out.push_back(std::move(tau));
    }
    return out;
  }
  for (int i = 0; i < 128; ++i) {
    PartialOrientation tau = sys.empty_set();
    for (std::uint32_t s = 0; s < n; ++s) tau.insert(OrientedSep(2 * s + uniform(rng, 0, 1)));
    out.push_back(std::move(tau));
  }
  for (int i = 0; i < 48; ++i) {
    if (auto tau = random_consistent_orientation(sys, rng)) out.push_back(std::move(*tau));
  }
  return out;
}

std::vector<PartialOrientation> forbidden_subsets_of(const tf::ForbiddenFamily& family, const PartialOrientation& sigma) {
  const auto elems = sigma.elements();
  const std::size_t cap = std::min(family.witness_arity(), elems.size());
  std::vector<PartialOrientation> out;
  std::vector<std::size_t> pick;
  const auto& sys = family.system();
  std::function<void(std::size_t)> rec = [&](std::size_t from) {
    PartialOrientation set = sys.empty_set();
    for (auto i : pick) set.insert(elems[i]);
    if (family.is_member(set)) out.push_back(set);
    if (pick.size() == cap) return;
    for (std::size_t i = from; i < elems.size(); ++i) {
      pick.push_back(i);
      rec(i + 1);
      pick.pop_back();
    }
  };
  rec(0);
  return out;
}

bool necessary_by_definition(OrientedSep a, tf::NodeId leaf, const tf::StructureTree& tree,
                             const tf::ForbiddenFamily& family) {
  const auto& beta = tree.beta(leaf);
  const auto subsets = forbidden_subsets_of(family, beta);
  if (!subsets.empty()) {
    return std::all_of(subsets.begin(), subsets.end(), [&](const PartialOrientation& s) { return s.contains(a); });
  }
  if (!beta.contains(a)) return false;
  bool minimal = true;
  beta.for_each([&](OrientedSep y) { minimal = minimal && !tree.system().less(y, a); });
  return minimal;
}

bool node_necessary_by_definition(tf::NodeId v, const tf::StructureTree& tree, const tf::ForbiddenFamily& family) {
  for (auto w : tree.node(v).children) {
    const auto label = *tree.node(w).label;
    bool found = false;
    for (auto l : tree.leaves_below(w)) {
      if (necessary_by_definition(label, l, tree, family)) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::string leaf_property_violation(const tf::StructureTree& tree, const tf::ForbiddenFamily& family,
                                    const std::vector<PartialOrientation>& oracle_tangles, Rng& rng) {
  const auto& sys = tree.system();
  const std::set<PartialOrientation, tf::LexLess> tangle_set(oracle_tangles.begin(), oracle_tangles.end());
  const auto leaves = tree.leaves();
  auto at = [](tf::NodeId v) { return "node " + std::to_string(v) + ": "; };

  // (i)
  std::set<PartialOrientation, tf::LexLess> displayed;
  for (auto l : leaves) {
    const auto& beta = tree.beta(l);
    if (!consistent_by_definition(sys, beta)) return "(i) " + at(l) + "beta inconsistent";
    if (forbidden_subsets_of(family, beta).empty()) {
      const auto closure = closure_by_definition(sys, beta);
      if (!tangle_set.count(closure)) return "(i) " + at(l) + "closure " + describe_set(closure) + " is not a tangle";
      displayed.insert(closure);
    }
  }
  if (displayed != tangle_set) return "(i) leaves display " + std::to_string(displayed.size()) + " of " +
                                     std::to_string(tangle_set.size()) + " tangles";

  // (ii)
  for (auto v : tree.nodes()) {
    if (tree.is_leaf(v)) continue;
    const auto& beta = tree.beta(v);
    if (!forbidden_subsets_of(family, beta).empty()) return "(ii) " + at(v) + "beta has a subset in F";
    const SepId s = tree.s_of(v);
    if (sys.orients(closure_by_definition(sys, beta), s)) return "(ii) " + at(v) + "closure orients s_v";
    for (auto a : {OrientedSep::forward(s), OrientedSep::backward(s)}) {
      bool minimal = true;
      beta.for_each([&](OrientedSep y) { minimal = minimal && !sys.less(y, a); });
      if (!minimal) return "(ii) " + at(v) + "an orientation of s_v is not minimal";
    }
    for (auto u : tree.path_to(v)) {
      if (sys.order(tree.s_of(u)) > sys.order(s)) return "(ii) " + at(v) + "|s_v| not maximal on its path";
    }
  }

  // (iii), (v)
  auto leaf_of = [&](const PartialOrientation& tau, tf::NodeId& found) {
    int count = 0;
    for (auto l : leaves) {
      if (tree.beta(l).is_subset_of(tau)) {
        ++count;
        found = l;
      }
    }
    return count;
  };
  for (const auto& tau : test_orientations(sys, rng)) {
    tf::NodeId l = 0;
    if (leaf_of(tau, l) != 1) return "(iii) orientation " + describe_set(tau) + " lies above no unique leaf";
    if (!consistent_by_definition(sys, tau)) continue;
    const auto& beta = tree.beta(l);
    if (!closure_by_definition(sys, beta).is_subset_of(tau)) return "(iii) " + at(l) + "closure not inside tau";
    if (!efficient_by_definition(sys, beta, tau)) return "(iii) " + at(l) + "beta not efficient in tau";
    if (tangle_set.count(tau)) continue;
    const auto subsets = forbidden_subsets_of(family, beta);
    if (subsets.empty()) return "(v) " + at(l) + "non-tangle " + describe_set(tau) + " has no certificate";
    for (const auto& sigma : subsets) {
      if (!efficient_by_definition(sys, sigma, tau)) return "(v) " + at(l) + "certificate not efficient";
    }
  }

  // (iv)
  for (const auto& tau : tangle_set) {
    tf::NodeId l = 0;
    if (leaf_of(tau, l) != 1) return "(iv) tangle " + describe_set(tau) + " lies above no unique leaf";
    if (closure_by_definition(sys, tree.beta(l)) != tau) return "(iv) " + at(l) + "closure differs from its tangle";
    if (!efficient_by_definition(sys, tree.beta(l), tau)) return "(iv) " + at(l) + "beta not efficient";
  }
  return {};
}

std::string reduction_violation(const tf::StructureTree& full, const tf::StructureTree& reduced,
                                const tf::ForbiddenFamily& family) {
  if (auto c = tf::is_structure_tree(reduced, family); !c) return "not a structure tree: " + c.violation;
  if (tf::tangles(full, family) != tf::tangles(reduced, family)) return "tangle sets differ";
  for (auto l : reduced.leaves()) {
    if (!full.contains(l) || !full.is_leaf(l)) return "leaf " + std::to_string(l) + " is new";
    if (full.node(l).parent != reduced.node(l).parent || full.node(l).label != reduced.node(l).label) {
      return "edge into leaf " + std::to_string(l) + " changed";
    }
    const bool was = !forbidden_subsets_of(family, full.beta(l)).empty();
    const bool is = !forbidden_subsets_of(family, reduced.beta(l)).empty();
    if (was != is) return "leaf " + std::to_string(l) + " changed forbidden status";
  }
  const auto nodes = reduced.nodes();
  for (auto u : nodes) {
    for (auto v : nodes) {
      if (full.is_ancestor(u, v) != reduced.is_ancestor(u, v)) {
        return "tree order between " + std::to_string(u) + " and " + std::to_string(v) + " changed";
      }
    }
  }
  if (auto c = tf::is_ordered(reduced); !c) return "not ordered: " + c.violation;
  if (auto c = tf::is_efficient(reduced); !c) return "not efficient: " + c.violation;
  for (auto v : nodes) {
    if (!reduced.is_leaf(v) && !node_necessary_by_definition(v, reduced, family)) {
      return "node " + std::to_string(v) + " is unnecessary";
    }
  }
  return {};
}

std::string contraction_violation(const tf::StructureTree& tree, const tf::ForbiddenFamily& family,
                                  std::size_t* checked) {
  for (auto v : tree.nodes()) {
    if (tree.is_leaf(v)) continue;
    bool some_child = false;
    for (auto w : tree.node(v).children) {
      if (tf::is_structure_tree(tf::contract(tree, v, w), family)) some_child = true;
    }
    const bool necessary = node_necessary_by_definition(v, tree, family);
    if (some_child == necessary) {
      return "node " + std::to_string(v) + (necessary ? " is necessary yet contractible" : " is unnecessary yet stuck");
    }
    if (tf::necessary_node(v, tree, family) != necessary) return "necessary_node disagrees at " + std::to_string(v);
    if (checked) ++*checked;
  }
  return {};
}

}  // namespace tf_test
