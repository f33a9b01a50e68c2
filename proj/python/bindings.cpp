#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tangle_forge/builder.hpp"
#include "tangle_forge/dot.hpp"
#include "tangle_forge/ground.hpp"
#include "tangle_forge/io.hpp"
#include "tangle_forge/oracle.hpp"

namespace py = pybind11;
namespace tf = tangle_forge;

namespace {

// pybind11 holders cannot hold pointers to const, so systems travel in a box.
struct System {
  tf::SystemPtr ptr;
};

std::vector<std::vector<std::uint32_t>> id_lists(const std::vector<tf::PartialOrientation>& sets) {
  std::vector<std::vector<std::uint32_t>> out;
  for (const auto& s : sets) {
    auto& ids = out.emplace_back();
    s.for_each([&](tf::OrientedSep a) { ids.push_back(a.id()); });
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Tangles of abstract separation systems via structure trees";

  static py::exception<tf::Error> error(m, "TangleForgeError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const tf::Error& e) {
      py::set_error(error, e.what());
    }
  });

  py::class_<System>(m, "System")
      .def("__len__", [](const System& s) { return s.ptr->size(); })
      .def_property_readonly("orders", [](const System& s) { return s.ptr->orders(); })
      .def("describe", [](const System& s, std::uint32_t id) { return s.ptr->describe(tf::OrientedSep(id)); })
      .def("to_json", [](const System& s) { return tf::dump(tf::system_to_json(*s.ptr)); })
      .def("restrict_below", [](const System& s, double k) { return System{s.ptr->restrict_below(k)}; });

  m.def("system_from_json", [](const std::string& text) { return System{tf::system_from_json(tf::parse_json(text))}; });
  m.def(
      "graph_system",
      [](unsigned n, std::vector<std::pair<unsigned, unsigned>> edges, double k) {
        return System{tf::graph_system(tf::Graph::from_edges(n, std::move(edges)), k)};
      },
      py::arg("n"), py::arg("edges"), py::arg("k"));
  m.def("similarity_system", [](std::vector<std::vector<double>> sim) {
    const auto n = static_cast<unsigned>(sim.size());
    return System{tf::bipartition_system({n, tf::all_subsets(n), tf::cut_weight(std::move(sim))})};
  });
  m.def("questionnaire_system",
        [](const std::vector<std::vector<int>>& answers) { return System{tf::questionnaire_system(answers).system}; });

  py::class_<tf::ForbiddenFamily>(m, "Family")
      .def("describe", &tf::ForbiddenFamily::describe)
      .def_property_readonly("system", [](const tf::ForbiddenFamily& f) { return System{f.system_ptr()}; })
      .def("to_json", [](const tf::ForbiddenFamily& f) { return tf::dump(tf::family_to_json(f)); })
      .def("rebind", [](const tf::ForbiddenFamily& f, const System& s) { return f.rebind(s.ptr); });
  m.def("family", [](const System& s, const std::string& spec) { return tf::family_from_spec(spec, s.ptr); });
  m.def("is_rich", [](const tf::ForbiddenFamily& f) { return tf::is_rich(f).rich; });
  m.def("is_closed_under_minimization",
        [](const tf::ForbiddenFamily& f) { return tf::is_closed_under_minimization(f).closed; });

  py::class_<tf::StructureTree>(m, "Tree")
      .def("__len__", &tf::StructureTree::size)
      .def_property_readonly("root", &tf::StructureTree::root)
      .def("leaves", &tf::StructureTree::leaves)
      .def_property_readonly("system", [](const tf::StructureTree& t) { return System{t.system_ptr()}; })
      .def("to_json", [](const tf::StructureTree& t) { return tf::dump(tf::tree_to_json(t, t.system())); });

  m.def("build", [](const tf::ForbiddenFamily& f) { return tf::build(f); });
  m.def("reduce", [](const tf::StructureTree& t, const tf::ForbiddenFamily& f) { return tf::reduce(t, f); });
  m.def("restrict", &tf::restrict);
  m.def("tangles", [](const tf::StructureTree& t, const tf::ForbiddenFamily& f) { return id_lists(tf::tangles(t, f)); });
  m.def("is_structure_tree",
        [](const tf::StructureTree& t, const tf::ForbiddenFamily& f) { return tf::is_structure_tree(t, f).holds; });
  m.def("is_f_tree", [](const tf::StructureTree& t, const tf::ForbiddenFamily& f) { return tf::is_f_tree(t, f).holds; });
  m.def(
      "all_tangles",
      [](const tf::ForbiddenFamily& f, std::size_t max_separations) {
        tf::OracleBudget b;
        b.max_separations = max_separations;
        return id_lists(tf::all_tangles(f, b));
      },
      py::arg("family"), py::arg("max_separations") = 16);
  m.def(
      "report",
      [](const tf::ForbiddenFamily& f, std::vector<double> levels) {
        return tf::dump(tf::report_to_json(tf::pipeline(f, std::move(levels))));
      },
      py::arg("family"), py::arg("levels") = std::vector<double>{});
  m.def("to_dot", [](const tf::StructureTree& t, const tf::ForbiddenFamily& f) { return tf::tree_to_dot(t, f); });
}
