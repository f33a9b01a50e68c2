#pragma once

#include <cstdint>
#include <functional>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tangle_forge/sepsys.hpp"

namespace tangle_forge {

/// Simple undirected graph on vertices 0..n-1.
struct Graph {
  unsigned n = 0;
  std::vector<std::pair<unsigned, unsigned>> edges;  // u < v, sorted, no repeats

  /// Normalises the edge list; throws ParseError on loops or out-of-range ends.
  static Graph from_edges(unsigned n, std::vector<std::pair<unsigned, unsigned>> edges);
};

/// All separations (A,B) of g with order |A∩B| < k, except (V,V). The
/// forward orientation has the larger B side.
SystemPtr graph_system(const Graph& g, double k);

/// Order of {X, V∖X} from the mask X.
using OrderRule = std::function<double(std::uint64_t)>;

/// Sum of similarity(u,v) over u in X, v outside X.
OrderRule cut_weight(std::vector<std::vector<double>> similarity);

struct BipartitionGround {
  unsigned points = 0;
  /// Subsets of the points; must contain the complement of each of its members.
  std::vector<std::uint64_t> sides;
  OrderRule order;
};

/// One separation per pair {X, V∖X}. The forward orientation is the smaller
/// mask, and separations come in increasing order of that mask.
SystemPtr bipartition_system(const BipartitionGround& ground);

/// Every subset of a set of `points` elements (at most 12 points).
std::vector<std::uint64_t> all_subsets(unsigned points);

struct Questionnaire {
  SystemPtr system;
  /// For each separation, the question (column) it came from.
  std::vector<std::size_t> question;
  std::vector<std::string> warnings;
};

/// One separation per distinct question: forward is the set answering 1.
/// Questions splitting the persons the same way as an earlier one are
/// dropped with a warning. Default order: cut weight with unit similarity.
Questionnaire questionnaire_system(const std::vector<std::vector<int>>& answers, OrderRule order = {});

/// Intersection of the big sides of a tangle of a graph system.
std::uint64_t block_of_tangle(const SeparationSystem& system, const PartialOrientation& tau);

Graph read_edge_list(std::istream& in);
std::vector<std::vector<double>> read_similarity_csv(std::istream& in);
std::vector<std::vector<int>> read_answers_csv(std::istream& in);

}  // namespace tangle_forge
