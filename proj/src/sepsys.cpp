#include "tangle_forge/sepsys.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <sstream>

namespace tangle_forge {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidSystem: return "InvalidSystem";
    case ErrorCode::InconsistentInput: return "InconsistentInput";
    case ErrorCode::GroundMismatch: return "GroundMismatch";
    case ErrorCode::MissingCapability: return "MissingCapability";
    case ErrorCode::LeafHasNoSep: return "LeafHasNoSep";
    case ErrorCode::MalformedTree: return "MalformedTree";
    case ErrorCode::NotAStructureTree: return "NotAStructureTree";
    case ErrorCode::NotOrdered: return "NotOrdered";
    case ErrorCode::NodeCapExceeded: return "NodeCapExceeded";
    case ErrorCode::NonStandardFamily: return "NonStandardFamily";
    case ErrorCode::NotParentChild: return "NotParentChild";
    case ErrorCode::UnresolvedLeaf: return "UnresolvedLeaf";
    case ErrorCode::NotComplementClosed: return "NotComplementClosed";
    case ErrorCode::NotATangle: return "NotATangle";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

// ---------------------------------------------------------------------------
// PartialOrientation

PartialOrientation::PartialOrientation(std::size_t oriented_count, std::initializer_list<OrientedSep> members)
    : bits_(oriented_count) {
  for (auto a : members) bits_.set(a.id());
}

PartialOrientation::PartialOrientation(std::size_t oriented_count, const std::vector<OrientedSep>& members)
    : bits_(oriented_count) {
  for (auto a : members) bits_.set(a.id());
}

std::vector<OrientedSep> PartialOrientation::elements() const {
  std::vector<OrientedSep> out;
  out.reserve(bits_.count());
  for_each([&](OrientedSep a) { out.push_back(a); });
  return out;
}

bool lex_less(const PartialOrientation& a, const PartialOrientation& b) {
  const auto diff = a.bits_ ^ b.bits_;
  const auto d = diff.find_first();
  if (d == PartialOrientation::Bits::npos) return false;
  // Below d both sequences agree. Whoever holds d continues with d; the other
  // continues with something larger or has ended (and is then a prefix).
  if (a.bits_.test(d)) return b.bits_.find_next(d) != PartialOrientation::Bits::npos;
  return a.bits_.find_next(d) == PartialOrientation::Bits::npos;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

using Matrix = std::vector<PartialOrientation::Bits>;

class TableUniverse final : public Universe {
 public:
  TableUniverse(Matrix leq, LatticeTables tables, bool distributive)
      : leq_(std::move(leq)), tables_(std::move(tables)), distributive_(distributive) {}

  bool leq(const UniverseElement& x, const UniverseElement& y) const override { return leq_[x.a].test(y.a); }
  UniverseElement join(const UniverseElement& x, const UniverseElement& y) const override {
    return {tables_.join[x.a][y.a], 0};
  }
  UniverseElement meet(const UniverseElement& x, const UniverseElement& y) const override {
    return {tables_.meet[x.a][y.a], 0};
  }
  UniverseElement inverse(const UniverseElement& x) const override { return {x.a ^ 1u, 0}; }
  bool distributive() const override { return distributive_; }

 private:
  Matrix leq_;
  LatticeTables tables_;
  bool distributive_;
};

constexpr std::size_t kMaxViolations = 64;

struct Reporter {
  ValidationReport report;
  void add(std::string axiom, std::string detail) {
    if (report.violations.size() < kMaxViolations) report.violations.push_back({std::move(axiom), std::move(detail)});
  }
};

std::string pair_text(std::size_t a, std::size_t b) {
  std::ostringstream os;
  os << "(" << a << "," << b << ")";
  return os.str();
}

// Ground systems may leave leq empty; the order then comes from the sides.
bool order_from_sides(const SystemData& data) {
  return data.ground && data.leq.empty() && data.sides.size() == 2 * data.count;
}

bool same_degenerate(const std::vector<bool>& degenerate, std::size_t a, std::size_t b) {
  return (a >> 1) == (b >> 1) && degenerate[a >> 1];
}

Matrix build_matrix(const SystemData& data, const std::vector<bool>& degenerate, Reporter* reporter) {
  const std::size_t m = 2 * data.count;
  Matrix leq(m, PartialOrientation::Bits(m));
  for (std::size_t a = 0; a < m; ++a) leq[a].set(a);
  for (auto [a, b] : data.leq) {
    if (a >= m || b >= m) {
      if (reporter) reporter->add("range", "leq pair " + pair_text(a, b) + " outside 0.." + std::to_string(m));
      continue;
    }
    leq[a].set(b);
  }
  for (std::size_t s = 0; s < data.count; ++s) {
    if (degenerate[s]) {
      leq[2 * s].set(2 * s + 1);
      leq[2 * s + 1].set(2 * s);
    }
  }
  if (order_from_sides(data)) {
    SetPairUniverse u;
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t b = 0; b < m; ++b) {
        if (u.leq(data.sides[a], data.sides[b])) leq[a].set(b);
      }
    }
  }
  return leq;
}

void close_transitively(Matrix& leq) {
  const std::size_t m = leq.size();
  for (std::size_t k = 0; k < m; ++k) {
    for (std::size_t i = 0; i < m; ++i) {
      if (leq[i].test(k)) leq[i] |= leq[k];
    }
  }
}

void check_tables(const SystemData& data, const Matrix& leq, Reporter& r) {
  const auto& t = *data.tables;
  const std::size_t m = 2 * data.count;
  auto shape_ok = [&](const std::vector<std::vector<std::uint32_t>>& table, const char* name) {
    if (table.size() != m) {
      r.add("lattice-shape", std::string(name) + " table has " + std::to_string(table.size()) + " rows");
      return false;
    }
    for (const auto& row : table) {
      if (row.size() != m) {
        r.add("lattice-shape", std::string(name) + " table row has wrong length");
        return false;
      }
      for (auto v : row) {
        if (v >= m) {
          r.add("lattice-shape", std::string(name) + " entry out of range");
          return false;
        }
      }
    }
    return true;
  };
  if (!shape_ok(t.join, "join") || !shape_ok(t.meet, "meet")) return;

  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      const auto j = t.join[a][b];
      const auto mt = t.meet[a][b];
      if (j != t.join[b][a]) r.add("lattice-commutative", "join" + pair_text(a, b));
      if (mt != t.meet[b][a]) r.add("lattice-commutative", "meet" + pair_text(a, b));
      if (!leq[a].test(j) || !leq[b].test(j)) r.add("lattice-bound", "join" + pair_text(a, b) + " is not an upper bound");
      if (!leq[mt].test(a) || !leq[mt].test(b)) r.add("lattice-bound", "meet" + pair_text(a, b) + " is not a lower bound");
      if (leq[a].test(b) != (j == b)) r.add("lattice-order", "join" + pair_text(a, b) + " disagrees with leq");
      if (leq[a].test(b) != (mt == a)) r.add("lattice-order", "meet" + pair_text(a, b) + " disagrees with leq");
      if (t.join[a][mt] != a) r.add("lattice-absorptive", "a ∨ (a ∧ b) != a for " + pair_text(a, b));
      if (t.meet[a][j] != a) r.add("lattice-absorptive", "a ∧ (a ∨ b) != a for " + pair_text(a, b));
      if ((j ^ 1u) != t.meet[a ^ 1u][b ^ 1u]) r.add("involution-lattice", "(a ∨ b)* != a* ∧ b* for " + pair_text(a, b));
      for (std::size_t c = 0; c < m; ++c) {
        if (t.join[j][c] != t.join[a][t.join[b][c]]) r.add("lattice-associative", "join" + pair_text(a, b));
        if (t.meet[mt][c] != t.meet[a][t.meet[b][c]]) r.add("lattice-associative", "meet" + pair_text(a, b));
        if (data.distributive && t.meet[a][t.join[b][c]] != t.join[mt][t.meet[a][c]]) {
          r.add("lattice-distributive", "a ∧ (b ∨ c) for a=" + std::to_string(a));
        }
      }
    }
  }
}

void check_ground(const SystemData& data, const Matrix& leq, Reporter& r) {
  const auto& g = *data.ground;
  const std::size_t m = 2 * data.count;
  if (data.sides.size() != m) {
    r.add("ground", "sides list has " + std::to_string(data.sides.size()) + " entries, expected " + std::to_string(m));
    return;
  }
  if (g.point_count > 64) {
    r.add("ground", "ground sets are limited to 64 points");
    return;
  }
  const std::uint64_t all = g.point_count == 64 ? ~0ull : ((1ull << g.point_count) - 1);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& e = data.sides[i];
    const auto& inv = data.sides[i ^ 1u];
    if ((e.a | e.b) != all || (e.a & ~all) || (e.b & ~all)) r.add("ground", "sides of " + std::to_string(i) + " do not cover the ground set");
    if (inv.a != e.b || inv.b != e.a) r.add("ground", "inverse of " + std::to_string(i) + " is not the swapped separation");
    if (g.kind == GroundKind::Bipartition && (e.a & e.b)) r.add("ground", "sides of " + std::to_string(i) + " overlap in a bipartition");
    if (g.kind == GroundKind::Graph) {
      const auto only_a = e.a & ~e.b, only_b = e.b & ~e.a;
      for (auto [u, v] : g.edges) {
        const auto mu = 1ull << u, mv = 1ull << v;
        if (((only_a & mu) && (only_b & mv)) || ((only_a & mv) && (only_b & mu))) {
          r.add("ground", "edge " + pair_text(u, v) + " crosses separation " + std::to_string(i));
        }
      }
    }
  }
  if (order_from_sides(data)) {
    std::unordered_map<UniverseElement, std::size_t, UniverseElementHash> seen;
    for (std::size_t i = 0; i < m; ++i) {
      auto [it, fresh] = seen.emplace(data.sides[i], i);
      if (!fresh) r.add("ground", "oriented separations " + std::to_string(it->second) + " and " + std::to_string(i) + " have the same sides");
    }
    return;
  }
  SetPairUniverse u;
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (u.leq(data.sides[a], data.sides[b]) != leq[a].test(b)) {
        r.add("ground-order", "leq" + pair_text(a, b) + " disagrees with side containment");
      }
    }
  }
}

}  // namespace

std::string ValidationReport::summary() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << violations[i].axiom << ": " << violations[i].detail;
  }
  return os.str();
}

ValidationReport validate(const SystemData& data, const LoadOptions& options) {
  Reporter r;
  if (data.orders.size() != data.count) {
    r.add("orders", "expected " + std::to_string(data.count) + " order values, got " + std::to_string(data.orders.size()));
  }
  for (std::size_t s = 0; s < data.orders.size(); ++s) {
    if (!std::isfinite(data.orders[s])) r.add("orders", "order of separation " + std::to_string(s) + " is not finite");
  }
  std::vector<bool> degenerate(data.count, false);
  for (auto s : data.degenerate) {
    if (s >= data.count) {
      r.add("range", "degenerate separation " + std::to_string(s) + " out of range");
      continue;
    }
    degenerate[s] = true;
    if (!options.allow_degenerate) r.add("degenerate", "separation " + std::to_string(s) + " is degenerate");
  }

  Matrix leq = build_matrix(data, degenerate, &r);
  const std::size_t m = leq.size();
  // containment of sides is already a partial order reversed by the swap
  const bool derived = order_from_sides(data);
  if (!derived && options.close_transitively) {
    close_transitively(leq);
  } else if (!derived) {
    for (std::size_t a = 0; a < m; ++a) {
      for (auto b = leq[a].find_first(); b != PartialOrientation::Bits::npos; b = leq[a].find_next(b)) {
        if (!leq[b].is_subset_of(leq[a])) {
          auto missing = leq[b] - leq[a];
          r.add("transitivity", pair_text(a, b) + " and " + pair_text(b, missing.find_first()) + " without " +
                                    pair_text(a, missing.find_first()));
        }
      }
    }
  }
  for (std::size_t a = 0; a < m && !derived; ++a) {
    for (auto b = leq[a].find_first(); b != PartialOrientation::Bits::npos; b = leq[a].find_next(b)) {
      if (b != a && leq[b].test(a) && !same_degenerate(degenerate, a, b)) {
        if (a < b) r.add("antisymmetry", pair_text(a, b) + " and " + pair_text(b, a));
      }
      if (!leq[b ^ 1u].test(a ^ 1u)) {
        r.add("involution", pair_text(a, b) + " holds but " + pair_text(b ^ 1u, a ^ 1u) + " does not");
      }
    }
  }
  if (data.tables && data.ground) r.add("universe", "a system cannot carry both lattice tables and a ground set");
  if (data.tables) check_tables(data, leq, r);
  if (data.ground) check_ground(data, leq, r);
  return r.report;
}

// ---------------------------------------------------------------------------
// SeparationSystem

std::shared_ptr<const SeparationSystem> SeparationSystem::create(SystemData data, const LoadOptions& options) {
  auto report = validate(data, options);
  if (!report.ok()) throw Error(ErrorCode::InvalidSystem, report.summary());

  auto sys = std::shared_ptr<SeparationSystem>(new SeparationSystem());
  sys->count_ = data.count;
  sys->orders_ = data.orders;
  sys->degenerate_.assign(data.count, false);
  for (auto s : data.degenerate) sys->degenerate_[s] = true;
  Matrix leq = build_matrix(data, sys->degenerate_, nullptr);
  if (options.close_transitively) close_transitively(leq);
  sys->up_ = std::move(leq);
  sys->origin_.resize(data.count);
  for (std::uint32_t s = 0; s < data.count; ++s) sys->origin_[s] = SepId{s};

  if (data.ground) {
    static const auto shared_universe = std::make_shared<const SetPairUniverse>();
    sys->ground_ = data.ground;
    sys->universe_ = shared_universe;
    sys->distributive_ = true;
    sys->elements_ = data.sides;
  } else if (data.tables) {
    sys->tables_ = data.tables;
    sys->distributive_ = data.distributive;
    sys->universe_ = std::make_shared<const TableUniverse>(sys->up_, *data.tables, data.distributive);
    sys->elements_.resize(2 * data.count);
    for (std::uint32_t i = 0; i < 2 * data.count; ++i) sys->elements_[i] = {i, 0};
  }
  sys->precompute();
  return sys;
}

void SeparationSystem::precompute() {
  const std::size_t m = oriented_size();
  down_.assign(m, PartialOrientation(m));
  required_.assign(m, PartialOrientation(m));
  for (std::size_t a = 0; a < m; ++a) {
    for (auto b = up_[a].find_first(); b != PartialOrientation::Bits::npos; b = up_[a].find_next(b)) {
      down_[b].insert(OrientedSep(static_cast<std::uint32_t>(a)));
      if ((b >> 1) != (a >> 1)) required_[a].insert(OrientedSep(static_cast<std::uint32_t>(b)));
    }
  }
  locate_.clear();
  for (std::uint32_t i = 0; i < elements_.size(); ++i) locate_.emplace(elements_[i], OrientedSep(i));
}

bool SeparationSystem::has_injective_orders() const {
  std::set<double> seen(orders_.begin(), orders_.end());
  return seen.size() == orders_.size();
}

bool SeparationSystem::is_trivial(OrientedSep a) const {
  bool trivial = false;
  down_[a.id()].for_each([&](OrientedSep x) {
    if (trivial || x.sep() == a.sep()) return;
    if (leq(x.inverse(), a)) trivial = true;
  });
  return trivial;
}

bool SeparationSystem::is_consistent(const PartialOrientation& sigma) const {
  // r, s point away from each other iff r <= s* (for r != s).
  bool ok = true;
  sigma.for_each([&](OrientedSep r) {
    if (!ok) return;
    const auto& up = up_[r.id()];
    sigma.for_each([&](OrientedSep s) {
      if (ok && s.sep() != r.sep() && up.test(s.inverse().id())) ok = false;
    });
  });
  return ok;
}

PartialOrientation SeparationSystem::closure_unchecked(const PartialOrientation& sigma) const {
  PartialOrientation out = sigma;
  sigma.for_each([&](OrientedSep r) { out |= required_[r.id()]; });
  return out;
}

PartialOrientation SeparationSystem::closure(const PartialOrientation& sigma) const {
  if (!is_consistent(sigma)) throw Error(ErrorCode::InconsistentInput, "closure of an inconsistent set");
  return closure_unchecked(sigma);
}

bool SeparationSystem::is_star(const PartialOrientation& sigma) const {
  bool ok = true;
  sigma.for_each([&](OrientedSep r) {
    if (!ok) return;
    if (degenerate_[r.sep().value]) {
      ok = false;
      return;
    }
    sigma.for_each([&](OrientedSep s) {
      if (ok && s != r && !leq(s.inverse(), r)) ok = false;
    });
  });
  return ok;
}

bool SeparationSystem::points_towards(OrientedSep r, SepId s) const {
  return leq(OrientedSep::forward(s), r) || leq(OrientedSep::backward(s), r);
}

bool SeparationSystem::is_nested(SepId r, SepId s) const {
  const auto rf = OrientedSep::forward(r), sf = OrientedSep::forward(s), sb = OrientedSep::backward(s);
  return leq(rf, sf) || leq(sf, rf) || leq(rf, sb) || leq(sb, rf);
}

bool SeparationSystem::is_full_orientation(const PartialOrientation& sigma) const {
  if (sigma.universe_size() != oriented_size()) return false;
  for (std::uint32_t s = 0; s < count_; ++s) {
    if (sigma.contains(OrientedSep::forward(SepId{s})) == sigma.contains(OrientedSep::backward(SepId{s}))) return false;
  }
  return true;
}

PartialOrientation SeparationSystem::minimal_elements(const PartialOrientation& sigma) const {
  PartialOrientation out(oriented_size());
  sigma.for_each([&](OrientedSep x) {
    bool minimal = true;
    sigma.for_each([&](OrientedSep y) {
      if (minimal && less(y, x)) minimal = false;
    });
    if (minimal) out.insert(x);
  });
  return out;
}

PartialOrientation SeparationSystem::all_elements() const {
  PartialOrientation::Bits bits(oriented_size());
  bits.set();
  return PartialOrientation(std::move(bits));
}

std::shared_ptr<const SeparationSystem> SeparationSystem::restrict_below(double k) const {
  auto sub = std::shared_ptr<SeparationSystem>(new SeparationSystem());
  std::vector<std::uint32_t> kept;
  for (std::uint32_t s = 0; s < count_; ++s) {
    if (orders_[s] < k) kept.push_back(s);
  }
  const std::size_t n = kept.size(), m = 2 * n;
  sub->count_ = n;
  sub->up_.assign(m, PartialOrientation::Bits(m));
  for (std::size_t i = 0; i < n; ++i) {
    sub->orders_.push_back(orders_[kept[i]]);
    sub->degenerate_.push_back(degenerate_[kept[i]]);
    sub->origin_.push_back(SepId{kept[i]});
  }
  for (std::size_t a = 0; a < m; ++a) {
    const std::size_t pa = 2 * kept[a >> 1] + (a & 1u);
    for (std::size_t b = 0; b < m; ++b) {
      const std::size_t pb = 2 * kept[b >> 1] + (b & 1u);
      if (up_[pa].test(pb)) sub->up_[a].set(b);
    }
  }
  sub->universe_ = universe_;
  sub->distributive_ = distributive_;
  sub->ground_ = ground_;
  if (!elements_.empty()) {
    for (std::size_t a = 0; a < m; ++a) sub->elements_.push_back(elements_[2 * kept[a >> 1] + (a & 1u)]);
  }
  sub->precompute();
  return sub;
}

const Universe& SeparationSystem::universe() const {
  if (!universe_) throw Error(ErrorCode::MissingCapability, "separation system has no universe");
  return *universe_;
}

std::optional<OrientedSep> SeparationSystem::locate(const UniverseElement& e) const {
  auto it = locate_.find(e);
  if (it == locate_.end()) return std::nullopt;
  return it->second;
}

bool SeparationSystem::is_submodular() const {
  const auto& u = universe();
  const std::size_t m = oriented_size();
  for (std::uint32_t a = 0; a < m; ++a) {
    for (std::uint32_t b = a + 1; b < m; ++b) {
      const auto x = elements_[a], y = elements_[b];
      if (!locate(u.join(x, y)) && !locate(u.meet(x, y))) return false;
    }
  }
  return true;
}

namespace {
std::string mask_text(std::uint64_t mask) {
  std::string out = "{";
  bool first = true;
  while (mask) {
    const int v = std::countr_zero(mask);
    mask &= mask - 1;
    if (!first) out += ",";
    out += std::to_string(v);
    first = false;
  }
  return out + "}";
}
}  // namespace

std::string SeparationSystem::describe(OrientedSep a) const {
  if (ground_ && a.id() < elements_.size()) {
    const auto& e = elements_[a.id()];
    if (ground_->kind == GroundKind::Bipartition) return mask_text(e.b);
    return "(" + mask_text(e.a) + "," + mask_text(e.b) + ")";
  }
  return "s" + std::to_string(a.sep().value) + (a.is_forward() ? "" : "*");
}

SystemData SeparationSystem::to_data() const {
  SystemData data;
  data.count = count_;
  data.orders = orders_;
  const std::size_t m = oriented_size();
  for (std::uint32_t a = 0; a < m; ++a) {
    for (auto b = up_[a].find_first(); b != PartialOrientation::Bits::npos; b = up_[a].find_next(b)) {
      if (b != a) data.leq.emplace_back(a, static_cast<std::uint32_t>(b));
    }
  }
  for (std::uint32_t s = 0; s < count_; ++s) {
    if (degenerate_[s]) data.degenerate.push_back(s);
  }
  data.tables = tables_;
  data.distributive = distributive_ && tables_.has_value();
  data.ground = ground_;
  if (ground_) data.sides = elements_;
  return data;
}

}  // namespace tangle_forge
