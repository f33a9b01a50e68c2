#pragma once

#include <string>

#include "tangle_forge/forbidden.hpp"
#include "tangle_forge/tree.hpp"

namespace tangle_forge {

/// Graphviz digraph of a tree. `family` must be bound to tree.system(); it
/// decides the leaf colours and annotations (tangle minimal elements or the
/// members of the forbidden witness).
std::string tree_to_dot(const StructureTree& tree, const ForbiddenFamily& family, const std::string& title = "T");

/// Shortest decimal that reads back to the same double; "inf" for infinity.
std::string format_number(double x);

}  // namespace tangle_forge
