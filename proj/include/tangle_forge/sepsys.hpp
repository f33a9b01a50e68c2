#pragma once

#include <boost/dynamic_bitset.hpp>

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "tangle_forge/error.hpp"

namespace tangle_forge {

/// Index of an unoriented separation, dense in 0..|S|-1.
struct SepId {
  std::uint32_t value = 0;
  auto operator<=>(const SepId&) const = default;
};

/// One of the two orientations of a separation. The id encoding is 2s for the
/// forward orientation and 2s+1 for its inverse, so inverse() flips the low bit.
class OrientedSep {
 public:
  constexpr OrientedSep() = default;
  constexpr explicit OrientedSep(std::uint32_t id) : id_(id) {}

  static constexpr OrientedSep forward(SepId s) { return OrientedSep(2 * s.value); }
  static constexpr OrientedSep backward(SepId s) { return OrientedSep(2 * s.value + 1); }

  constexpr std::uint32_t id() const { return id_; }
  constexpr SepId sep() const { return SepId{id_ >> 1}; }
  constexpr bool is_forward() const { return (id_ & 1u) == 0; }
  constexpr OrientedSep inverse() const { return OrientedSep(id_ ^ 1u); }

  auto operator<=>(const OrientedSep&) const = default;

 private:
  std::uint32_t id_ = 0;
};

/// A set of oriented separations of one system, stored as a bitset over the
/// 2|S| oriented ids. Orientations of subsets of S, consistent sets, tangles
/// and witnesses all use this type.
class PartialOrientation {
 public:
  using Bits = boost::dynamic_bitset<std::uint64_t>;

  PartialOrientation() = default;
  explicit PartialOrientation(std::size_t oriented_count) : bits_(oriented_count) {}
  PartialOrientation(std::size_t oriented_count, std::initializer_list<OrientedSep> members);
  PartialOrientation(std::size_t oriented_count, const std::vector<OrientedSep>& members);
  explicit PartialOrientation(Bits bits) : bits_(std::move(bits)) {}

  std::size_t universe_size() const { return bits_.size(); }
  std::size_t size() const { return bits_.count(); }
  bool empty() const { return bits_.none(); }

  bool contains(OrientedSep a) const { return a.id() < bits_.size() && bits_.test(a.id()); }
  void insert(OrientedSep a) { bits_.set(a.id()); }
  void erase(OrientedSep a) { bits_.reset(a.id()); }

  bool is_subset_of(const PartialOrientation& other) const { return bits_.is_subset_of(other.bits_); }
  bool intersects(const PartialOrientation& other) const { return bits_.intersects(other.bits_); }

  PartialOrientation& operator|=(const PartialOrientation& other) {
    bits_ |= other.bits_;
    return *this;
  }
  PartialOrientation& operator&=(const PartialOrientation& other) {
    bits_ &= other.bits_;
    return *this;
  }
  PartialOrientation& operator-=(const PartialOrientation& other) {
    bits_ -= other.bits_;
    return *this;
  }
  PartialOrientation without(OrientedSep a) const {
    PartialOrientation copy = *this;
    copy.erase(a);
    return copy;
  }
  PartialOrientation with(OrientedSep a) const {
    PartialOrientation copy = *this;
    copy.insert(a);
    return copy;
  }

  /// Members in increasing id order.
  std::vector<OrientedSep> elements() const;

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (auto i = bits_.find_first(); i != Bits::npos; i = bits_.find_next(i)) {
      fn(OrientedSep(static_cast<std::uint32_t>(i)));
    }
  }

  const Bits& bits() const { return bits_; }

  friend bool operator==(const PartialOrientation& a, const PartialOrientation& b) {
    return a.bits_ == b.bits_;
  }

  /// Lexicographic comparison of the sorted id sequences.
  friend bool lex_less(const PartialOrientation& a, const PartialOrientation& b);

 private:
  Bits bits_;
};

struct LexLess {
  bool operator()(const PartialOrientation& a, const PartialOrientation& b) const { return lex_less(a, b); }
};

/// Element of an ambient universe of separations. For set-based universes
/// (graph separations, subsets of a dataset) `a` and `b` are the two vertex
/// sides of (A,B); table universes use `a` as an element index.
struct UniverseElement {
  std::uint64_t a = 0;
  std::uint64_t b = 0;
  friend bool operator==(const UniverseElement&, const UniverseElement&) = default;
};

struct UniverseElementHash {
  std::size_t operator()(const UniverseElement& e) const noexcept {
    return std::hash<std::uint64_t>{}(e.a * 0x9E3779B97F4A7C15ull ^ e.b);
  }
};

/// A lattice of separations containing a system as a subset.
class Universe {
 public:
  virtual ~Universe() = default;
  virtual bool leq(const UniverseElement& x, const UniverseElement& y) const = 0;
  virtual UniverseElement join(const UniverseElement& x, const UniverseElement& y) const = 0;
  virtual UniverseElement meet(const UniverseElement& x, const UniverseElement& y) const = 0;
  virtual UniverseElement inverse(const UniverseElement& x) const = 0;
  virtual bool distributive() const = 0;
};

/// Universe of separations (A,B) of a finite set: (A,B) <= (C,D) iff A ⊇ C and
/// B ⊆ D, with inverse (B,A). Covers graph separations and, through the
/// embedding X -> (V∖X, X), the subset lattice of a dataset.
class SetPairUniverse final : public Universe {
 public:
  bool leq(const UniverseElement& x, const UniverseElement& y) const override {
    return (y.a & ~x.a) == 0 && (x.b & ~y.b) == 0;
  }
  UniverseElement join(const UniverseElement& x, const UniverseElement& y) const override {
    return {x.a & y.a, x.b | y.b};
  }
  UniverseElement meet(const UniverseElement& x, const UniverseElement& y) const override {
    return {x.a | y.a, x.b & y.b};
  }
  UniverseElement inverse(const UniverseElement& x) const override { return {x.b, x.a}; }
  bool distributive() const override { return true; }
};

/// Join/meet tables over the oriented ids of a system that is itself a lattice.
struct LatticeTables {
  std::vector<std::vector<std::uint32_t>> join;
  std::vector<std::vector<std::uint32_t>> meet;
};

enum class GroundKind { Graph, Bipartition };

/// Concrete ground set behind a system. Each oriented separation is embedded
/// as a pair of vertex masks in the SetPairUniverse.
struct Ground {
  GroundKind kind = GroundKind::Graph;
  unsigned point_count = 0;
  std::vector<std::pair<unsigned, unsigned>> edges;  // graphs only
};

/// Raw description of a separation system prior to validation.
struct SystemData {
  std::size_t count = 0;
  std::vector<double> orders;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> leq;
  std::vector<std::uint32_t> degenerate;
  std::optional<LatticeTables> tables;
  bool distributive = false;
  std::optional<Ground> ground;
  std::vector<UniverseElement> sides;  // per oriented id, when ground is set
};

struct LoadOptions {
  bool close_transitively = false;
  bool allow_degenerate = false;
};

struct Violation {
  std::string axiom;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string summary() const;
};

/// Checks every separation-system axiom on raw data. An empty report means
/// SeparationSystem::create will accept the data with the same options.
ValidationReport validate(const SystemData& data, const LoadOptions& options = {});

/// Immutable, validated separation system with its partial order, involution
/// and order function, plus an optional ambient universe.
class SeparationSystem {
 public:
  static std::shared_ptr<const SeparationSystem> create(SystemData data, const LoadOptions& options = {});

  std::size_t size() const { return count_; }
  std::size_t oriented_size() const { return 2 * count_; }

  double order(SepId s) const { return orders_[s.value]; }
  double order(OrientedSep a) const { return orders_[a.sep().value]; }
  const std::vector<double>& orders() const { return orders_; }
  bool has_injective_orders() const;

  bool leq(OrientedSep a, OrientedSep b) const { return up_[a.id()].test(b.id()); }
  bool less(OrientedSep a, OrientedSep b) const { return a != b && leq(a, b) && !identified(a, b); }

  bool is_degenerate(SepId s) const { return degenerate_[s.value]; }
  bool is_small(OrientedSep a) const { return leq(a, a.inverse()); }
  bool is_trivial(OrientedSep a) const;
  bool is_cotrivial(OrientedSep a) const { return is_trivial(a.inverse()); }

  bool is_consistent(const PartialOrientation& sigma) const;
  /// Closure of a consistent set; throws InconsistentInput otherwise.
  PartialOrientation closure(const PartialOrientation& sigma) const;
  /// The closure formula applied without the consistency precondition.
  PartialOrientation closure_unchecked(const PartialOrientation& sigma) const;
  bool is_star(const PartialOrientation& sigma) const;
  bool points_towards(OrientedSep r, SepId s) const;
  bool is_nested(SepId r, SepId s) const;

  bool orients(const PartialOrientation& sigma, SepId s) const {
    return sigma.contains(OrientedSep::forward(s)) || sigma.contains(OrientedSep::backward(s));
  }
  /// True when sigma holds exactly one orientation of every separation.
  bool is_full_orientation(const PartialOrientation& sigma) const;
  /// Elements of sigma with nothing of sigma strictly below them.
  PartialOrientation minimal_elements(const PartialOrientation& sigma) const;

  PartialOrientation empty_set() const { return PartialOrientation(oriented_size()); }
  PartialOrientation make_set(const std::vector<OrientedSep>& members) const {
    return PartialOrientation(oriented_size(), members);
  }
  PartialOrientation all_elements() const;

  /// {x : a < x, sep(x) != sep(a)}; the elements a single member requires.
  const PartialOrientation& required_by(OrientedSep a) const { return required_[a.id()]; }
  const PartialOrientation& down_set(OrientedSep a) const { return down_[a.id()]; }

  /// Subsystem of separations with order < k. origin() of the result maps its
  /// SepIds back to this system's.
  std::shared_ptr<const SeparationSystem> restrict_below(double k) const;
  const std::vector<SepId>& origin() const { return origin_; }

  bool has_universe() const { return universe_ != nullptr; }
  const Universe& universe() const;
  UniverseElement element(OrientedSep a) const { return elements_[a.id()]; }
  std::optional<OrientedSep> locate(const UniverseElement& e) const;
  /// Every pair of elements has its join or meet (in the universe) inside the system.
  bool is_submodular() const;

  const std::optional<Ground>& ground() const { return ground_; }

  /// Human-readable name: sides for ground-based systems, else s<i> / s<i>*.
  std::string describe(OrientedSep a) const;

  SystemData to_data() const;

 private:
  SeparationSystem() = default;
  bool identified(OrientedSep a, OrientedSep b) const {
    return a.sep() == b.sep() && degenerate_[a.sep().value];
  }
  void precompute();

  std::size_t count_ = 0;
  std::vector<double> orders_;
  std::vector<bool> degenerate_;
  std::vector<PartialOrientation::Bits> up_;
  std::vector<PartialOrientation> down_;
  std::vector<PartialOrientation> required_;
  std::vector<SepId> origin_;

  std::shared_ptr<const Universe> universe_;
  std::optional<LatticeTables> tables_;
  bool distributive_ = false;
  std::vector<UniverseElement> elements_;
  std::unordered_map<UniverseElement, OrientedSep, UniverseElementHash> locate_;
  std::optional<Ground> ground_;
};

using SystemPtr = std::shared_ptr<const SeparationSystem>;

}  // namespace tangle_forge
