#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tangle_forge/builder.hpp"
#include "tangle_forge/forbidden.hpp"
#include "tangle_forge/ground.hpp"
#include "tangle_forge/oracle.hpp"
#include "tangle_forge/sepsys.hpp"
#include "tangle_forge/tree.hpp"

namespace tf_test {

namespace tf = tangle_forge;
using tf::OrientedSep;
using tf::PartialOrientation;
using tf::SepId;

using Rng = std::mt19937_64;

/// Big enough for every generated system; the default stays at 16.
tf::OracleBudget wide_budget();

int uniform(Rng& rng, int lo, int hi);

/// Random poset on n separations with an order-reversing involution.
tf::SystemPtr random_poset(Rng& rng, std::size_t n, bool injective_orders, bool allow_trivial);

/// Random explicit family, closed under lowering single elements, that
/// contains {t*} for every trivial t.
tf::ForbiddenFamily min_closed_explicit(Rng& rng, const tf::SystemPtr& system);

/// Random explicit family containing {t*} for trivial t; not closed in general.
tf::ForbiddenFamily random_explicit(Rng& rng, const tf::SystemPtr& system);

/// One representative per isomorphism class of graphs on exactly n vertices.
std::vector<tf::Graph> graphs_up_to_isomorphism(unsigned n);

/// Complement-closed side set on `points` points with at most `max_seps`
/// separations. Without `keep_empty` the pair {∅, V} is left out.
std::vector<std::uint64_t> random_sides(Rng& rng, unsigned points, std::size_t max_seps, bool keep_empty);

/// Random symmetric similarity matrix with entries 0..4.
std::vector<std::vector<double>> random_similarity(Rng& rng, unsigned points);

struct Instance {
  std::string name;
  tf::ForbiddenFamily family;
};

/// The fixed corpus for tree construction: posets, graphs and bipartition systems.
std::vector<Instance> master_instances();

/// Empty string when all hold; otherwise the first violation.
std::string ladder_violation(const tf::StructureTree& tree, const tf::ForbiddenFamily& family);

/// Every orientation when |S| <= 12, else a fixed-seed sample of random
/// orientations together with random consistent ones.
std::vector<PartialOrientation> test_orientations(const tf::SeparationSystem& system, Rng& rng);

/// The five leaf/node properties of efficient ordered structure trees, checked
/// against the oracle's tangle set. Empty string when all hold.
std::string leaf_property_violation(const tf::StructureTree& tree, const tf::ForbiddenFamily& family,
                                    const std::vector<PartialOrientation>& oracle_tangles, Rng& rng);

/// Members of F inside sigma, by brute force over subsets of size <= arity.
std::vector<PartialOrientation> forbidden_subsets_of(const tf::ForbiddenFamily& family, const PartialOrientation& sigma);

/// Necessity from the definition, via forbidden_subsets_of.
bool necessary_by_definition(OrientedSep a, tf::NodeId leaf, const tf::StructureTree& tree,
                             const tf::ForbiddenFamily& family);
bool node_necessary_by_definition(tf::NodeId v, const tf::StructureTree& tree, const tf::ForbiddenFamily& family);

/// Checks a reduction against the tree it came from.
std::string reduction_violation(const tf::StructureTree& full, const tf::StructureTree& reduced,
                                const tf::ForbiddenFamily& family);

/// For each non-leaf v: some child contraction gives a structure tree iff v is
/// not necessary. Returns the number of nodes checked, or the violation.
std::string contraction_violation(const tf::StructureTree& tree, const tf::ForbiddenFamily& family,
                                  std::size_t* checked = nullptr);

std::string describe_set(const PartialOrientation& set);

}  // namespace tf_test
