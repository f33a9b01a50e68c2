#include "tangle_forge/forbidden.hpp"

#include <algorithm>
#include <bit>
#include <limits>
#include <map>

#include "tangle_forge/oracle.hpp"

namespace tangle_forge {

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Empty: return "Empty";
    case FamilyKind::Explicit: return "Explicit";
    case FamilyKind::Blocks: return "Blocks";
    case FamilyKind::Profile: return "Profile";
    case FamilyKind::StrongProfile: return "StrongProfile";
    case FamilyKind::Cluster: return "Cluster";
    case FamilyKind::GraphTangle: return "GraphTangle";
  }
  return "Unknown";
}

namespace {

std::uint64_t full_mask(unsigned points) { return points >= 64 ? ~0ull : ((1ull << points) - 1); }

void require_ground(const SeparationSystem& system, GroundKind kind, const char* family) {
  if (!system.ground() || system.ground()->kind != kind) {
    throw Error(ErrorCode::MissingCapability,
                std::string(family) + " needs a " + (kind == GroundKind::Graph ? "graph" : "bipartition") + " ground set");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// factories

ForbiddenFamily ForbiddenFamily::empty(SystemPtr system) { return ForbiddenFamily(FamilyKind::Empty, std::move(system), 0); }

ForbiddenFamily ForbiddenFamily::explicit_members(SystemPtr system, std::vector<PartialOrientation> members) {
  for (const auto& m : members) {
    if (m.universe_size() != system->oriented_size()) {
      throw Error(ErrorCode::GroundMismatch, "explicit member is drawn from a different separation system");
    }
  }
  ForbiddenFamily f(FamilyKind::Explicit, std::move(system), 0);
  f.members_ = std::move(members);
  return f;
}

ForbiddenFamily ForbiddenFamily::blocks(SystemPtr system, unsigned k) {
  require_ground(*system, GroundKind::Graph, "Blocks");
  return ForbiddenFamily(FamilyKind::Blocks, std::move(system), k);
}

ForbiddenFamily ForbiddenFamily::cluster(SystemPtr system, unsigned n) {
  require_ground(*system, GroundKind::Bipartition, "Cluster");
  return ForbiddenFamily(FamilyKind::Cluster, std::move(system), n);
}

ForbiddenFamily ForbiddenFamily::profile(SystemPtr system) {
  if (!system->has_universe()) throw Error(ErrorCode::MissingCapability, "Profile needs a universe of separations");
  ForbiddenFamily f(FamilyKind::Profile, std::move(system), 0);
  f.submodular_ = f.system_->is_submodular();
  return f;
}

ForbiddenFamily ForbiddenFamily::strong_profile(SystemPtr system) {
  if (!system->has_universe()) throw Error(ErrorCode::MissingCapability, "StrongProfile needs a universe of separations");
  ForbiddenFamily f(FamilyKind::StrongProfile, std::move(system), 0);
  f.submodular_ = f.system_->is_submodular();
  return f;
}

ForbiddenFamily ForbiddenFamily::graph_tangle(SystemPtr system) {
  require_ground(*system, GroundKind::Graph, "GraphTangle");
  return ForbiddenFamily(FamilyKind::GraphTangle, std::move(system), 0);
}

// ---------------------------------------------------------------------------
// membership

std::size_t ForbiddenFamily::witness_arity() const {
  switch (kind_) {
    case FamilyKind::Empty: return 0;
    case FamilyKind::Explicit: {
      std::size_t arity = 0;
      for (const auto& m : members_) arity = std::max(arity, m.size());
      return arity;
    }
    // each element of a minimal member is alone in excluding some vertex
    case FamilyKind::Blocks: return system_->ground()->point_count;
    default: return 3;
  }
}

void ForbiddenFamily::check_ground(const PartialOrientation& set) const {
  if (set.universe_size() != system_->oriented_size()) {
    throw Error(ErrorCode::GroundMismatch, "set is drawn from a different separation system");
  }
}

std::uint64_t ForbiddenFamily::big_side_intersection(const std::vector<OrientedSep>& members) const {
  std::uint64_t common = full_mask(system_->ground()->point_count);
  for (auto a : members) common &= system_->element(a).b;
  return common;
}

bool ForbiddenFamily::triple_condition(OrientedSep r, OrientedSep s, OrientedSep t) const {
  const auto& sys = *system_;
  switch (kind_) {
    case FamilyKind::Profile:
    case FamilyKind::StrongProfile: {
      const auto& u = sys.universe();
      const auto j = u.join(u.inverse(sys.element(r)), u.inverse(sys.element(s)));
      return kind_ == FamilyKind::Profile ? sys.element(t) == j : u.leq(sys.element(t), j);
    }
    case FamilyKind::GraphTangle: {
      const auto& g = *sys.ground();
      const std::uint64_t a1 = sys.element(r).a, a2 = sys.element(s).a, a3 = sys.element(t).a;
      if ((a1 | a2 | a3) != full_mask(g.point_count)) return false;
      for (auto [u, v] : g.edges) {
        const std::uint64_t e = (1ull << u) | (1ull << v);
        if ((a1 & e) != e && (a2 & e) != e && (a3 & e) != e) return false;
      }
      return true;
    }
    default: return false;
  }
}

std::optional<std::vector<OrientedSep>> ForbiddenFamily::role_assignment(const std::vector<OrientedSep>& members) const {
  if (members.empty() || members.size() > 3) return std::nullopt;
  for (auto x : members) {
    for (auto y : members) {
      for (auto z : members) {
        bool covered = true;
        for (auto w : members) covered = covered && (w == x || w == y || w == z);
        if (covered && triple_condition(x, y, z)) return std::vector<OrientedSep>{x, y, z};
      }
    }
  }
  return std::nullopt;
}

bool ForbiddenFamily::is_member(const PartialOrientation& set) const {
  check_ground(set);
  switch (kind_) {
    case FamilyKind::Empty: return false;
    case FamilyKind::Explicit:
      return std::any_of(members_.begin(), members_.end(), [&](const auto& m) { return m == set; });
    case FamilyKind::Blocks:
      return static_cast<unsigned>(std::popcount(big_side_intersection(set.elements()))) < parameter_;
    case FamilyKind::Cluster:
      return !set.empty() && set.size() <= 3 &&
             static_cast<unsigned>(std::popcount(big_side_intersection(set.elements()))) < parameter_;
    case FamilyKind::Profile:
    case FamilyKind::StrongProfile:
    case FamilyKind::GraphTangle: return role_assignment(set.elements()).has_value();
  }
  return false;
}

bool ForbiddenFamily::scan_triples(const PartialOrientation& sigma, std::optional<OrientedSep> anchor) const {
  const auto& sys = *system_;
  const auto elems = sigma.elements();
  switch (kind_) {
    case FamilyKind::Profile: {
      const auto& u = sys.universe();
      for (std::size_t i = 0; i < elems.size(); ++i) {
        for (std::size_t j = i; j < elems.size(); ++j) {
          const auto x = elems[i], y = elems[j];
          auto z = sys.locate(u.join(u.inverse(sys.element(x)), u.inverse(sys.element(y))));
          if (!z || !sigma.contains(*z)) continue;
          if (!anchor || *anchor == x || *anchor == y || *anchor == *z) return true;
        }
      }
      return false;
    }
    case FamilyKind::StrongProfile: {
      const auto& u = sys.universe();
      for (std::size_t i = 0; i < elems.size(); ++i) {
        for (std::size_t j = i; j < elems.size(); ++j) {
          const auto x = elems[i], y = elems[j];
          const auto join = u.join(u.inverse(sys.element(x)), u.inverse(sys.element(y)));
          if (anchor && *anchor != x && *anchor != y) {
            if (u.leq(sys.element(*anchor), join)) return true;
            continue;
          }
          for (auto w : elems) {
            if (u.leq(sys.element(w), join)) return true;
          }
        }
      }
      return false;
    }
    case FamilyKind::Cluster: {
      const unsigned n = parameter_;
      const std::uint64_t all = full_mask(sys.ground()->point_count);
      auto small = [&](std::uint64_t m) { return static_cast<unsigned>(std::popcount(m)) < n; };
      if (anchor) {
        const std::uint64_t a = sys.element(*anchor).b & all;
        if (small(a)) return true;
        for (std::size_t i = 0; i < elems.size(); ++i) {
          const std::uint64_t ab = a & sys.element(elems[i]).b;
          if (small(ab)) return true;
          for (std::size_t j = i + 1; j < elems.size(); ++j) {
            if (small(ab & sys.element(elems[j]).b)) return true;
          }
        }
        return false;
      }
      for (std::size_t i = 0; i < elems.size(); ++i) {
        const std::uint64_t a = sys.element(elems[i]).b & all;
        if (small(a)) return true;
        for (std::size_t j = i + 1; j < elems.size(); ++j) {
          const std::uint64_t ab = a & sys.element(elems[j]).b;
          if (small(ab)) return true;
          for (std::size_t l = j + 1; l < elems.size(); ++l) {
            if (small(ab & sys.element(elems[l]).b)) return true;
          }
        }
      }
      return false;
    }
    case FamilyKind::GraphTangle: {
      std::vector<OrientedSep> firsts = anchor ? std::vector<OrientedSep>{*anchor} : elems;
      for (auto x : firsts) {
        for (std::size_t j = 0; j < elems.size(); ++j) {
          for (std::size_t l = j; l < elems.size(); ++l) {
            if (triple_condition(x, elems[j], elems[l])) return true;
          }
        }
      }
      return false;
    }
    default: return false;
  }
}

bool ForbiddenFamily::has_forbidden_subset(const PartialOrientation& sigma) const {
  check_ground(sigma);
  switch (kind_) {
    case FamilyKind::Empty: return false;
    case FamilyKind::Explicit:
      return std::any_of(members_.begin(), members_.end(), [&](const auto& m) { return m.is_subset_of(sigma); });
    case FamilyKind::Blocks: return is_member(sigma);
    default: return scan_triples(sigma, std::nullopt);
  }
}

bool ForbiddenFamily::has_forbidden_subset_with(const PartialOrientation& sigma, OrientedSep a) const {
  check_ground(sigma);
  switch (kind_) {
    case FamilyKind::Empty: return false;
    case FamilyKind::Explicit:
      return std::any_of(members_.begin(), members_.end(),
                         [&](const auto& m) { return m.contains(a) && m.is_subset_of(sigma); });
    case FamilyKind::Blocks: return is_member(sigma);
    default: return scan_triples(sigma, a);
  }
}

Witness ForbiddenFamily::make_witness(PartialOrientation members) const {
  Witness w;
  const auto elems = members.elements();
  switch (kind_) {
    case FamilyKind::Blocks:
    case FamilyKind::Cluster: w.intersection = big_side_intersection(elems); break;
    case FamilyKind::Profile:
    case FamilyKind::StrongProfile:
    case FamilyKind::GraphTangle: w.roles = *role_assignment(elems); break;
    case FamilyKind::Explicit:
      w.member_index = static_cast<std::size_t>(
          std::find(members_.begin(), members_.end(), members) - members_.begin());
      break;
    case FamilyKind::Empty: break;
  }
  w.members = std::move(members);
  return w;
}

std::optional<Witness> ForbiddenFamily::forbidden_subset(const PartialOrientation& sigma) const {
  if (!has_forbidden_subset(sigma)) return std::nullopt;
  switch (kind_) {
    case FamilyKind::Empty: return std::nullopt;
    case FamilyKind::Explicit: {
      const PartialOrientation* best = nullptr;
      for (const auto& m : members_) {
        if (m.is_subset_of(sigma) && (!best || lex_less(m, *best))) best = &m;
      }
      return make_witness(*best);
    }
    case FamilyKind::Blocks: {
      // F is closed upwards inside sigma, so the least member is a prefix.
      PartialOrientation prefix = system_->empty_set();
      if (is_member(prefix)) return make_witness(prefix);
      for (auto a : sigma.elements()) {
        prefix.insert(a);
        if (is_member(prefix)) return make_witness(prefix);
      }
      return std::nullopt;
    }
    default: {
      // every member has at most three elements; walk subsets in lex order
      const auto elems = sigma.elements();
      const std::size_t n = elems.size();
      for (std::size_t i = 0; i < n; ++i) {
        PartialOrientation w1 = system_->empty_set().with(elems[i]);
        if (is_member(w1)) return make_witness(w1);
        for (std::size_t j = i + 1; j < n; ++j) {
          PartialOrientation w2 = w1.with(elems[j]);
          if (is_member(w2)) return make_witness(w2);
          for (std::size_t l = j + 1; l < n; ++l) {
            PartialOrientation w3 = w2.with(elems[l]);
            if (is_member(w3)) return make_witness(w3);
          }
        }
      }
      return std::nullopt;
    }
  }
}

bool ForbiddenFamily::verify(const Witness& witness) const {
  const auto& sys = *system_;
  if (witness.members.universe_size() != sys.oriented_size()) return false;
  const auto elems = witness.members.elements();
  switch (kind_) {
    case FamilyKind::Empty: return false;
    case FamilyKind::Explicit:
      return witness.member_index < members_.size() && members_[witness.member_index] == witness.members;
    case FamilyKind::Blocks:
    case FamilyKind::Cluster: {
      if (kind_ == FamilyKind::Cluster && (elems.empty() || elems.size() > 3)) return false;
      // count vertex by vertex rather than with masks
      std::uint64_t common = 0;
      unsigned count = 0;
      for (unsigned v = 0; v < sys.ground()->point_count; ++v) {
        bool everywhere = true;
        for (auto a : elems) everywhere = everywhere && ((sys.element(a).b >> v) & 1u);
        if (everywhere) {
          common |= 1ull << v;
          ++count;
        }
      }
      return common == witness.intersection && count < parameter_;
    }
    case FamilyKind::Profile:
    case FamilyKind::StrongProfile:
    case FamilyKind::GraphTangle: {
      if (witness.roles.size() != 3) return false;
      PartialOrientation covered = sys.empty_set();
      for (auto r : witness.roles) {
        if (r.id() >= sys.oriented_size()) return false;
        covered.insert(r);
      }
      if (!(covered == witness.members)) return false;
      const auto r = witness.roles[0], s = witness.roles[1], t = witness.roles[2];
      if (kind_ == FamilyKind::GraphTangle) {
        const auto& g = *sys.ground();
        for (unsigned v = 0; v < g.point_count; ++v) {
          bool in_some = false;
          for (auto x : witness.roles) in_some = in_some || ((sys.element(x).a >> v) & 1u);
          if (!in_some) return false;
        }
        for (auto [p, q] : g.edges) {
          bool inside = false;
          for (auto x : witness.roles) {
            const auto a = sys.element(x).a;
            inside = inside || (((a >> p) & 1u) && ((a >> q) & 1u));
          }
          if (!inside) return false;
        }
        return true;
      }
      const auto& u = sys.universe();
      const auto rs = u.inverse(sys.element(r)), ss = u.inverse(sys.element(s));
      const auto join = u.join(rs, ss);
      return kind_ == FamilyKind::Profile ? sys.element(t) == join : u.leq(sys.element(t), join);
    }
  }
  return false;
}

ForbiddenFamily ForbiddenFamily::rebind(SystemPtr subsystem) const {
  switch (kind_) {
    case FamilyKind::Empty: return empty(std::move(subsystem));
    case FamilyKind::Blocks: return blocks(std::move(subsystem), parameter_);
    case FamilyKind::Cluster: return cluster(std::move(subsystem), parameter_);
    case FamilyKind::Profile: return profile(std::move(subsystem));
    case FamilyKind::StrongProfile: return strong_profile(std::move(subsystem));
    case FamilyKind::GraphTangle: return graph_tangle(std::move(subsystem));
    case FamilyKind::Explicit: {
      std::map<std::uint32_t, std::uint32_t> local;
      const auto& origin = subsystem->origin();
      for (std::uint32_t s = 0; s < origin.size(); ++s) {
        if (origin[s].value >= system_->size()) {
          throw Error(ErrorCode::GroundMismatch, "subsystem was not restricted from this family's system");
        }
        local[origin[s].value] = s;
      }
      std::vector<PartialOrientation> kept;
      for (const auto& m : members_) {
        PartialOrientation mapped = subsystem->empty_set();
        bool inside = true;
        m.for_each([&](OrientedSep a) {
          auto it = local.find(a.sep().value);
          if (it == local.end()) {
            inside = false;
            return;
          }
          mapped.insert(OrientedSep(2 * it->second + (a.is_forward() ? 0u : 1u)));
        });
        if (inside) kept.push_back(std::move(mapped));
      }
      return explicit_members(std::move(subsystem), std::move(kept));
    }
  }
  throw Error(ErrorCode::MissingCapability, "unknown family kind");
}

std::string ForbiddenFamily::describe() const {
  std::string out(to_string(kind_));
  if (kind_ == FamilyKind::Blocks || kind_ == FamilyKind::Cluster) out += "(" + std::to_string(parameter_) + ")";
  if (kind_ == FamilyKind::Explicit) out += "[" + std::to_string(members_.size()) + "]";
  return out;
}

// ---------------------------------------------------------------------------
// certifiers

StandardReport is_standard(const ForbiddenFamily& family) {
  const auto& sys = family.system();
  StandardReport report;
  for (std::uint32_t id = 0; id < sys.oriented_size(); ++id) {
    const OrientedSep a(id);
    if (!sys.is_trivial(a)) continue;
    if (!family.is_member(sys.empty_set().with(a.inverse()))) {
      report.standard = false;
      report.counterexamples.push_back(a);
    }
  }
  return report;
}

namespace {

// Calls fn on every subset of {0..m-1} of size 1..arity in lex order; fn
// returns false to stop.
template <typename Fn>
bool walk_subsets(const SeparationSystem& sys, std::size_t arity, std::size_t max_sets, Fn&& fn) {
  const std::uint32_t m = static_cast<std::uint32_t>(sys.oriented_size());
  std::size_t visited = 0;
  PartialOrientation current = sys.empty_set();
  auto rec = [&](auto&& self, std::uint32_t from, std::size_t depth) -> bool {
    for (std::uint32_t id = from; id < m; ++id) {
      if (++visited > max_sets) throw Error(ErrorCode::BudgetExceeded, "too many candidate sets for an exhaustive check");
      current.insert(OrientedSep(id));
      bool go_on = fn(current);
      if (go_on && depth + 1 < arity) go_on = self(self, id + 1, depth + 1);
      current.erase(OrientedSep(id));
      if (!go_on) return false;
    }
    return true;
  };
  if (arity == 0) return true;
  return rec(rec, 0, 0);
}

}  // namespace

MinimizationReport is_closed_under_minimization(const ForbiddenFamily& family, std::size_t max_sets) {
  const auto& sys = family.system();
  MinimizationReport report;
  auto check_member = [&](const PartialOrientation& member) {
    bool ok = true;
    member.for_each([&](OrientedSep x) {
      if (!ok) return;
      sys.down_set(x).for_each([&](OrientedSep y) {
        if (!ok || !sys.less(y, x)) return;
        PartialOrientation lowered = member.without(x).with(y);
        if (!family.is_member(lowered)) {
          ok = false;
          report.closed = false;
          report.member = member;
          report.lowered = lowered;
        }
      });
    });
    return ok;
  };
  if (family.kind() == FamilyKind::Explicit) {
    for (const auto& m : family.listed_members()) {
      if (!check_member(m)) break;
    }
    return report;
  }
  if (family.kind() == FamilyKind::Blocks && family.is_member(sys.empty_set())) {
    if (!check_member(sys.empty_set())) return report;
  }
  walk_subsets(sys, family.witness_arity(), max_sets, [&](const PartialOrientation& set) {
    return !family.is_member(set) || check_member(set);
  });
  return report;
}

RichReport is_rich(const ForbiddenFamily& family, std::size_t max_visits) {
  const auto& sys = family.system();
  RichReport report;
  OracleBudget budget;
  budget.max_separations = std::numeric_limits<std::size_t>::max();
  budget.max_visits = max_visits;
  for_each_consistent_orientation(
      sys, nullptr,
      [&](const PartialOrientation& tau) {
        if (!report.rich || !family.has_forbidden_subset(tau)) return;
        if (!family.has_forbidden_subset(strongly_efficient_part(sys, tau))) {
          report.rich = false;
          report.counterexample = tau;
        }
      },
      budget);
  return report;
}

}  // namespace tangle_forge
