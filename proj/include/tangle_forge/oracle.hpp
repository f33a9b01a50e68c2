#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "tangle_forge/forbidden.hpp"
#include "tangle_forge/sepsys.hpp"

namespace tangle_forge {

// Brute-force ground truth. Everything here is plain enumeration over SepIds
// in increasing order, with pruning only by consistency and F-avoidance.

struct OracleBudget {
  std::size_t max_separations = 16;
  std::size_t max_visits = std::size_t{1} << 24;

  /// Default budget, with max_separations taken from TANGLE_FORGE_BUDGET when set.
  static OracleBudget from_env();
};

/// Calls `visit` for each consistent orientation of S, in lexicographic order.
/// A non-null family additionally prunes to F-avoiding orientations.
void for_each_consistent_orientation(const SeparationSystem& system, const ForbiddenFamily* family,
                                     const std::function<void(const PartialOrientation&)>& visit,
                                     const OracleBudget& budget = {});

std::vector<PartialOrientation> all_consistent_orientations(const SeparationSystem& system,
                                                            const OracleBudget& budget = {});

std::vector<PartialOrientation> all_tangles(const ForbiddenFamily& family, const OracleBudget& budget = {});

/// r eclipses s: r < s and |r| < |s|. Weakly: |r| <= |s|.
bool eclipses(const SeparationSystem& system, OrientedSep r, OrientedSep s);
bool weakly_eclipses(const SeparationSystem& system, OrientedSep r, OrientedSep s);

bool is_efficient_in(const SeparationSystem& system, const PartialOrientation& sigma, const PartialOrientation& tau);
bool is_strongly_efficient_in(const SeparationSystem& system, const PartialOrientation& sigma,
                              const PartialOrientation& tau);

/// Elements of tau not weakly eclipsed by another element of tau: the largest
/// strongly efficient subset of tau.
PartialOrientation strongly_efficient_part(const SeparationSystem& system, const PartialOrientation& tau);

}  // namespace tangle_forge
