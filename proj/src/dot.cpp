#include "tangle_forge/dot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace tangle_forge {

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

std::string joined(const PartialOrientation& set, const SeparationSystem& sys) {
  std::string out;
  set.for_each([&](OrientedSep a) {
    if (!out.empty()) out += "\\n";
    out += escape(sys.describe(a));
  });
  return out.empty() ? "{}" : out;
}

}  // namespace

std::string tree_to_dot(const StructureTree& tree, const ForbiddenFamily& family, const std::string& title) {
  if (&family.system() != &tree.system()) {
    throw Error(ErrorCode::GroundMismatch, "family and tree live over different systems");
  }
  const auto& sys = tree.system();
  std::ostringstream out;
  out << "digraph \"" << escape(title) << "\" {\n";
  out << "  node [shape=box, fontname=\"monospace\"];\n";
  for (auto v : tree.nodes()) {
    out << "  n" << v << " [";
    if (!tree.is_leaf(v)) {
      const SepId s = tree.s_of(v);
      out << "label=\"" << v << ": s" << s.value << "\\n|s|=" << format_number(sys.order(s)) << "\"";
    } else {
      const auto cls = classify_leaf(tree, v, family);
      switch (cls.kind) {
        case LeafKind::Tangle:
          out << "label=\"" << v << ": tangle\\n" << joined(sys.minimal_elements(*cls.tangle), sys)
              << "\", style=filled, fillcolor=palegreen";
          break;
        case LeafKind::Forbidden:
          out << "label=\"" << v << ": forbidden\\n" << joined(cls.witness->members, sys)
              << "\", style=filled, fillcolor=salmon";
          break;
        case LeafKind::Unresolved:
          out << "label=\"" << v << ": unresolved\", style=filled, fillcolor=gray80";
          break;
      }
    }
    out << "];\n";
  }
  for (auto v : tree.nodes()) {
    auto children = tree.node(v).children;  // id order, so reloaded trees print the same
    std::sort(children.begin(), children.end());
    for (auto w : children) {
      out << "  n" << v << " -> n" << w << " [label=\"" << escape(sys.describe(*tree.node(w).label)) << "\"];\n";
    }
  }
  out << "}\n";
  return out.str();
}

}  // namespace tangle_forge
