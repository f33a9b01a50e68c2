#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tangle_forge/sepsys.hpp"

namespace tangle_forge {

enum class FamilyKind { Empty, Explicit, Blocks, Profile, StrongProfile, Cluster, GraphTangle };

std::string_view to_string(FamilyKind kind);

/// A member of a forbidden family found inside some set, with the data that
/// proves membership.
struct Witness {
  PartialOrientation members;
  /// Blocks and Cluster: intersection of the big sides of `members`.
  std::uint64_t intersection = 0;
  /// Profile, StrongProfile, GraphTangle: the (r, s, t) roles covering `members`.
  std::vector<OrientedSep> roles;
  /// Explicit: index of the listed member.
  std::size_t member_index = 0;
};

/// Forbidden-set family F, represented by its membership test rather than by
/// listing its members. Bound to one separation system.
class ForbiddenFamily {
 public:
  static ForbiddenFamily empty(SystemPtr system);
  static ForbiddenFamily explicit_members(SystemPtr system, std::vector<PartialOrientation> members);
  /// B_k: sets whose big sides meet in fewer than k vertices. Graph grounds only.
  static ForbiddenFamily blocks(SystemPtr system, unsigned k);
  /// C_n: sets of at most three sides meeting in fewer than n points. Bipartition grounds only.
  static ForbiddenFamily cluster(SystemPtr system, unsigned n);
  /// P: {r, s, r* ∨ s*} with the join taken in the universe.
  static ForbiddenFamily profile(SystemPtr system);
  /// P_s: {r, s, t*} with t* <= r* ∨ s*.
  static ForbiddenFamily strong_profile(SystemPtr system);
  /// T: at most three separations (A_i, B_i) whose small sides cover the graph.
  static ForbiddenFamily graph_tangle(SystemPtr system);

  FamilyKind kind() const { return kind_; }
  unsigned parameter() const { return parameter_; }
  const SystemPtr& system_ptr() const { return system_; }
  const SeparationSystem& system() const { return *system_; }
  const std::vector<PartialOrientation>& listed_members() const { return members_; }
  /// Set for Profile / StrongProfile.
  std::optional<bool> submodular() const { return submodular_; }

  /// Largest size a minimal member can have.
  std::size_t witness_arity() const;

  bool is_member(const PartialOrientation& set) const;
  bool has_forbidden_subset(const PartialOrientation& sigma) const;
  /// Whether some member of F inside sigma contains `a` (which must lie in sigma).
  /// Incremental form used by searches that grow sigma one element at a time.
  bool has_forbidden_subset_with(const PartialOrientation& sigma, OrientedSep a) const;
  /// Lexicographically least member of F contained in sigma, if any.
  std::optional<Witness> forbidden_subset(const PartialOrientation& sigma) const;
  /// Re-checks a witness by recomputing its evidence.
  bool verify(const Witness& witness) const;

  /// The same family over a subsystem produced by system().restrict_below().
  ForbiddenFamily rebind(SystemPtr subsystem) const;

  std::string describe() const;

 private:
  ForbiddenFamily(FamilyKind kind, SystemPtr system, unsigned parameter)
      : kind_(kind), system_(std::move(system)), parameter_(parameter) {}

  void check_ground(const PartialOrientation& set) const;
  std::uint64_t big_side_intersection(const std::vector<OrientedSep>& members) const;
  std::optional<std::vector<OrientedSep>> role_assignment(const std::vector<OrientedSep>& members) const;
  bool triple_condition(OrientedSep r, OrientedSep s, OrientedSep t) const;
  Witness make_witness(PartialOrientation members) const;
  bool scan_triples(const PartialOrientation& sigma, std::optional<OrientedSep> anchor) const;

  FamilyKind kind_;
  SystemPtr system_;
  unsigned parameter_ = 0;
  std::vector<PartialOrientation> members_;
  std::optional<bool> submodular_;
};

struct StandardReport {
  bool standard = true;
  /// Trivial elements s whose inverse singleton is not forbidden.
  std::vector<OrientedSep> counterexamples;
};

struct MinimizationReport {
  bool closed = true;
  std::optional<PartialOrientation> member;
  std::optional<PartialOrientation> lowered;  // obtained from member, not in F
};

struct RichReport {
  bool rich = true;
  /// Consistent orientation with an F-subset but no strongly efficient one.
  std::optional<PartialOrientation> counterexample;
};

StandardReport is_standard(const ForbiddenFamily& family);

/// Exhaustive over all members of size <= witness_arity(); desk scale only.
/// Checks every single-element lowering, which generates all pointwise
/// lowerings. Throws BudgetExceeded past `max_sets` candidate sets.
MinimizationReport is_closed_under_minimization(const ForbiddenFamily& family, std::size_t max_sets = 1u << 22);

/// Exhaustive over consistent orientations; desk scale only.
RichReport is_rich(const ForbiddenFamily& family, std::size_t max_visits = 1u << 22);

}  // namespace tangle_forge
