#include "tangle_forge/ground.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace tangle_forge {

namespace {

constexpr unsigned kMaxGraphVertices = 12;
constexpr unsigned kMaxSubsetPoints = 12;

std::uint64_t full_mask(unsigned points) { return points >= 64 ? ~0ull : ((1ull << points) - 1); }

}  // namespace

Graph Graph::from_edges(unsigned n, std::vector<std::pair<unsigned, unsigned>> edges) {
  for (auto& [u, v] : edges) {
    if (u == v) throw Error(ErrorCode::ParseError, "loop at vertex " + std::to_string(u));
    if (u >= n || v >= n) throw Error(ErrorCode::ParseError, "edge endpoint outside 0.." + std::to_string(n - 1));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph{n, std::move(edges)};
}

SystemPtr graph_system(const Graph& g, double k) {
  if (g.n > kMaxGraphVertices) {
    throw Error(ErrorCode::InvalidSystem, "graph separations are enumerated for at most " +
                                              std::to_string(kMaxGraphVertices) + " vertices");
  }
  const std::uint64_t all = full_mask(g.n);
  struct Found {
    double order;
    std::uint64_t a, b;
  };
  std::vector<Found> found;
  // each vertex goes to A only, B only, or both
  std::vector<int> place(g.n, 0);
  for (;;) {
    std::uint64_t a = 0, b = 0;
    for (unsigned v = 0; v < g.n; ++v) {
      if (place[v] != 1) a |= 1ull << v;
      if (place[v] != 0) b |= 1ull << v;
    }
    const std::uint64_t only_a = a & ~b, only_b = b & ~a;
    bool crossing = false;
    for (auto [u, v] : g.edges) {
      const std::uint64_t mu = 1ull << u, mv = 1ull << v;
      if (((only_a & mu) && (only_b & mv)) || ((only_a & mv) && (only_b & mu))) {
        crossing = true;
        break;
      }
    }
    const double order = std::popcount(a & b);
    const bool forward = std::popcount(b) > std::popcount(a) || (std::popcount(b) == std::popcount(a) && a < b);
    if (!crossing && order < k && !(a == all && b == all) && forward) found.push_back({order, a, b});

    unsigned v = 0;
    while (v < g.n && place[v] == 2) place[v++] = 0;
    if (v == g.n) break;
    ++place[v];
  }
  std::sort(found.begin(), found.end(),
            [](const Found& x, const Found& y) { return std::tie(x.order, x.a, x.b) < std::tie(y.order, y.a, y.b); });

  SystemData data;
  data.count = found.size();
  data.ground = Ground{GroundKind::Graph, g.n, g.edges};
  for (const auto& f : found) {
    data.orders.push_back(f.order);
    data.sides.push_back({f.a, f.b});
    data.sides.push_back({f.b, f.a});
  }
  return SeparationSystem::create(std::move(data));
}

OrderRule cut_weight(std::vector<std::vector<double>> similarity) {
  return [sim = std::move(similarity)](std::uint64_t x) {
    double total = 0;
    for (std::size_t u = 0; u < sim.size(); ++u) {
      if (!((x >> u) & 1u)) continue;
      for (std::size_t v = 0; v < sim.size(); ++v) {
        if (!((x >> v) & 1u)) total += sim[u][v];
      }
    }
    return total;
  };
}

SystemPtr bipartition_system(const BipartitionGround& ground) {
  if (ground.points == 0 || ground.points > 64) {
    throw Error(ErrorCode::InvalidSystem, "a bipartition ground needs between 1 and 64 points");
  }
  const std::uint64_t all = full_mask(ground.points);
  std::set<std::uint64_t> sides;
  for (auto x : ground.sides) {
    if (x & ~all) throw Error(ErrorCode::InvalidSystem, "side mask has points outside the ground set");
    sides.insert(x);
  }
  std::vector<std::uint64_t> reps;
  for (auto x : sides) {
    const std::uint64_t co = all & ~x;
    if (!sides.count(co)) {
      throw Error(ErrorCode::NotComplementClosed, "the complement of side " + std::to_string(x) + " is missing");
    }
    if (x < co) reps.push_back(x);
  }
  OrderRule order = ground.order;
  if (!order) order = cut_weight(std::vector<std::vector<double>>(ground.points, std::vector<double>(ground.points, 1.0)));

  SystemData data;
  data.count = reps.size();
  data.ground = Ground{GroundKind::Bipartition, ground.points, {}};
  for (auto x : reps) {
    data.orders.push_back(order(x));
    data.sides.push_back({all & ~x, x});
    data.sides.push_back({x, all & ~x});
  }
  return SeparationSystem::create(std::move(data));
}

std::vector<std::uint64_t> all_subsets(unsigned points) {
  if (points > kMaxSubsetPoints) {
    throw Error(ErrorCode::InvalidSystem,
                "all bipartitions are generated for at most " + std::to_string(kMaxSubsetPoints) + " points");
  }
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = 0; x <= full_mask(points); ++x) out.push_back(x);
  return out;
}

Questionnaire questionnaire_system(const std::vector<std::vector<int>>& answers, OrderRule order) {
  const std::size_t persons = answers.size();
  if (persons == 0 || persons > 64) throw Error(ErrorCode::InvalidSystem, "a questionnaire needs between 1 and 64 persons");
  const std::size_t questions = answers.front().size();
  const std::uint64_t all = full_mask(static_cast<unsigned>(persons));
  if (!order) order = cut_weight(std::vector<std::vector<double>>(persons, std::vector<double>(persons, 1.0)));

  Questionnaire out;
  std::map<std::uint64_t, std::size_t> seen;  // smaller side -> first question
  SystemData data;
  data.ground = Ground{GroundKind::Bipartition, static_cast<unsigned>(persons), {}};
  for (std::size_t q = 0; q < questions; ++q) {
    std::uint64_t yes = 0;
    for (std::size_t p = 0; p < persons; ++p) {
      if (answers[p].size() != questions) throw Error(ErrorCode::ParseError, "ragged answer matrix");
      if (answers[p][q]) yes |= 1ull << p;
    }
    const std::uint64_t key = std::min(yes, all & ~yes);
    if (auto it = seen.find(key); it != seen.end()) {
      out.warnings.push_back("question " + std::to_string(q) + " splits the persons like question " +
                             std::to_string(it->second) + "; dropped");
      continue;
    }
    seen.emplace(key, q);
    out.question.push_back(q);
    data.orders.push_back(order(yes));
    data.sides.push_back({all & ~yes, yes});
    data.sides.push_back({yes, all & ~yes});
  }
  data.count = out.question.size();
  out.system = SeparationSystem::create(std::move(data));
  return out;
}

std::uint64_t block_of_tangle(const SeparationSystem& system, const PartialOrientation& tau) {
  if (!system.ground() || system.ground()->kind != GroundKind::Graph) {
    throw Error(ErrorCode::MissingCapability, "blocks live in graph systems");
  }
  if (!system.is_full_orientation(tau) || !system.is_consistent(tau)) {
    throw Error(ErrorCode::NotATangle, "not a consistent orientation of the whole system");
  }
  std::uint64_t common = full_mask(system.ground()->point_count);
  tau.for_each([&](OrientedSep a) { common &= system.element(a).b; });
  return common;
}

// ---------------------------------------------------------------------------
// loaders

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T, typename Parse>
std::vector<std::vector<T>> read_csv(std::istream& in, Parse parse) {
  std::vector<std::vector<T>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<T> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      cell = trim(cell);
      try {
        std::size_t used = 0;
        row.push_back(parse(cell, used));
        if (used != cell.size()) throw std::invalid_argument(cell);
      } catch (const std::exception&) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad value '" + cell + "'");
      }
    }
    if (!line.empty() && line.back() == ',') {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": trailing comma");
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": ragged row (" + std::to_string(row.size()) +
                                             " values, expected " + std::to_string(rows.front().size()) + ")");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

Graph read_edge_list(std::istream& in) {
  std::vector<std::pair<unsigned, unsigned>> edges;
  unsigned n = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::vector<std::string> tokens;
    for (std::string t; ss >> t;) tokens.push_back(t);
    if (tokens.size() != 2) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 'u v', got " +
                                             std::to_string(tokens.size()) + " fields");
    }
    unsigned ends[2];
    for (int i = 0; i < 2; ++i) {
      const auto& t = tokens[i];
      if (t.empty() || !std::all_of(t.begin(), t.end(), [](char c) { return c >= '0' && c <= '9'; })) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad vertex '" + t + "'");
      }
      ends[i] = static_cast<unsigned>(std::stoul(t));
    }
    n = std::max({n, ends[0] + 1, ends[1] + 1});
    edges.emplace_back(ends[0], ends[1]);
  }
  return Graph::from_edges(n, std::move(edges));
}

std::vector<std::vector<double>> read_similarity_csv(std::istream& in) {
  auto rows = read_csv<double>(in, [](const std::string& s, std::size_t& used) { return std::stod(s, &used); });
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) throw Error(ErrorCode::ParseError, "similarity matrix is not square");
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (!(rows[i][j] >= 0) || !std::isfinite(rows[i][j])) {
        throw Error(ErrorCode::ParseError, "similarity must be finite and nonnegative");
      }
    }
  }
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (rows[i][j] != rows[j][i]) {
        throw Error(ErrorCode::ParseError, "similarity is not symmetric at (" + std::to_string(i) + "," + std::to_string(j) + ")");
      }
    }
  }
  return rows;
}

std::vector<std::vector<int>> read_answers_csv(std::istream& in) {
  auto rows = read_csv<int>(in, [](const std::string& s, std::size_t& used) {
    if (s != "0" && s != "1") throw std::invalid_argument(s);
    used = 1;
    return s == "1" ? 1 : 0;
  });
  return rows;
}

}  // namespace tangle_forge
