#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "tangle_forge/builder.hpp"
#include "tangle_forge/dot.hpp"
#include "tangle_forge/ground.hpp"
#include "tangle_forge/io.hpp"
#include "tangle_forge/oracle.hpp"

namespace tf = tangle_forge;

namespace {

enum Exit { kTangle = 0, kCertificate = 1, kInvalid = 2, kBudget = 3 };

struct Options {
  std::string graph, similarity, answers, system;
  std::string family = "empty";
  std::vector<double> k;
  std::string out;
  std::string format = "json";
  std::optional<std::size_t> budget;
  std::string tree;  // reduce / restrict / export-dot
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw tf::Error(tf::ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw tf::Error(tf::ErrorCode::ParseError, "cannot open " + path);
  return in;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw tf::Error(tf::ErrorCode::ParseError, "cannot write " + o.out);
  f << text;
}

// Graph systems hold the separations of order below this bound: the k of
// blocks:k, else the largest finite --k, else every separation.
double graph_bound(const Options& o, unsigned n) {
  const auto colon = o.family.find(':');
  if (o.family.rfind("blocks", 0) == 0 && colon != std::string::npos) {
    try {
      return std::stod(o.family.substr(colon + 1));
    } catch (const std::exception&) {
      // family_from_spec reports the bad parameter
    }
  }
  double bound = -1;
  for (double k : o.k) {
    if (std::isfinite(k)) bound = std::max(bound, k);
  }
  return bound >= 0 ? bound : n + 1.0;
}

// A family is a KIND[:PARAM] spec or the path of a family/v1 document.
tf::ForbiddenFamily load_family(const Options& o, const tf::SystemPtr& system) {
  if (o.family.ends_with(".json")) return tf::family_from_json(tf::parse_json(read_file(o.family)), system);
  return tf::family_from_spec(o.family, system);
}

tf::SystemPtr load_system(const Options& o) {
  const int given = !o.graph.empty() + !o.similarity.empty() + !o.answers.empty() + !o.system.empty();
  if (given != 1) {
    throw tf::Error(tf::ErrorCode::ParseError, "give exactly one of --graph, --similarity, --answers, --system");
  }
  if (!o.graph.empty()) {
    auto in = open(o.graph);
    const auto g = tf::read_edge_list(in);
    return tf::graph_system(g, graph_bound(o, g.n));
  }
  if (!o.similarity.empty()) {
    auto in = open(o.similarity);
    auto sim = tf::read_similarity_csv(in);
    const auto n = static_cast<unsigned>(sim.size());
    return tf::bipartition_system({n, tf::all_subsets(n), tf::cut_weight(std::move(sim))});
  }
  if (!o.answers.empty()) {
    auto in = open(o.answers);
    auto q = tf::questionnaire_system(tf::read_answers_csv(in));
    for (const auto& w : q.warnings) std::cerr << "warning: " << w << "\n";
    return q.system;
  }
  return tf::system_from_json(tf::parse_json(read_file(o.system)));
}

tf::OracleBudget budget(const Options& o) {
  auto b = tf::OracleBudget::from_env();
  if (o.budget) b.max_separations = *o.budget;
  return b;
}

void check_format(const Options& o) {
  if (o.format != "json" && o.format != "dot") throw tf::Error(tf::ErrorCode::ParseError, "--format is json or dot");
}

tf::Json tangle_list(const std::vector<tf::PartialOrientation>& tangles, const tf::ForbiddenFamily& local,
                     const tf::SeparationSystem& ref) {
  const auto& sys = local.system();
  tf::Json list = tf::Json::array();
  for (const auto& t : tangles) {
    tf::Json item;
    item["minimal"] = tf::orientation_to_json(sys.minimal_elements(t), sys, ref);
    item["orientation"] = tf::orientation_to_json(t, sys, ref);
    if (local.kind() == tf::FamilyKind::Blocks) {
      tf::Json block = tf::Json::array();
      const auto mask = tf::block_of_tangle(sys, t);
      for (unsigned v = 0; v < 64; ++v) {
        if ((mask >> v) & 1u) block.push_back(v);
      }
      item["block"] = block;
    }
    list.push_back(item);
  }
  return list;
}

// A stored tree: tree/v1 directly, or the reduced tree of a report/v1.
tf::StructureTree load_tree(const Options& o, const tf::SystemPtr& system) {
  auto j = tf::parse_json(read_file(o.tree));
  if (j.is_object() && j.value("schema", "") == "report/v1") j = j.at("tree_full");
  return tf::tree_from_json(j, system);
}

int cmd_validate(const Options& o) {
  const int given = !o.graph.empty() + !o.similarity.empty() + !o.answers.empty() + !o.system.empty();
  tf::Json out;
  out["schema"] = "validation/v1";
  if (given == 1 && !o.system.empty()) {
    const auto j = tf::parse_json(read_file(o.system));
    const auto report = tf::validate(tf::system_data_from_json(j), tf::load_options_from_json(j));
    tf::Json violations = tf::Json::array();
    for (const auto& v : report.violations) violations.push_back({{"axiom", v.axiom}, {"detail", v.detail}});
    out["valid"] = report.ok();
    out["violations"] = violations;
    if (!report.ok()) {
      emit(o, tf::dump(out));
      std::cerr << "invalid separation system: " << report.violations.front().axiom << ": "
                << report.violations.front().detail << "\n";
      return kInvalid;
    }
  }
  const auto system = load_system(o);
  const auto family = load_family(o, system);
  out["valid"] = true;
  out["separations"] = system->size();
  out["family"] = family.describe();
  if (!out.contains("violations")) out["violations"] = tf::Json::array();
  emit(o, tf::dump(out));
  return kTangle;
}

int cmd_build(const Options& o) {
  check_format(o);
  const auto system = load_system(o);
  const auto family = load_family(o, system);
  const auto report = tf::pipeline(family, o.k);
  if (o.format == "dot") {
    emit(o, tf::tree_to_dot(report.tree_reduced, family, "build"));
  } else {
    emit(o, tf::dump(tf::report_to_json(report)));
  }
  return kTangle;
}

int cmd_reduce(const Options& o) {
  check_format(o);
  const auto system = load_system(o);
  const auto tree = load_tree(o, system);
  const auto family = load_family(o, system).rebind(tree.system_ptr());
  tf::ReductionTrace trace;
  const auto reduced = tf::reduce(tree, family, &trace);
  if (o.format == "dot") {
    emit(o, tf::tree_to_dot(reduced, family, "reduced"));
    return kTangle;
  }
  std::optional<double> k;
  if (tree.system_ptr() != system) k = tf::k_from_json(tf::parse_json(read_file(o.tree)).value("k", tf::Json("inf")));
  auto j = tf::tree_to_json(reduced, *system, k);
  tf::Json steps = tf::Json::array();
  for (auto [v, w] : trace.steps) steps.push_back({v, w});
  j["reduction_steps"] = steps;
  emit(o, tf::dump(j));
  return kTangle;
}

int cmd_restrict(const Options& o) {
  check_format(o);
  if (o.k.size() != 1) throw tf::Error(tf::ErrorCode::ParseError, "restrict takes exactly one --k");
  const auto system = load_system(o);
  const auto tree = load_tree(o, system);
  if (tree.system_ptr() != system) throw tf::Error(tf::ErrorCode::ParseError, "restrict expects an unrestricted tree");
  const auto restricted = tf::restrict(tree, o.k.front());
  if (o.format == "dot") {
    const auto family = load_family(o, system).rebind(restricted.system_ptr());
    emit(o, tf::tree_to_dot(restricted, family, "restricted"));
  } else {
    emit(o, tf::dump(tf::tree_to_json(restricted, *system, o.k.front())));
  }
  return kTangle;
}

int cmd_tangles(const Options& o) {
  const auto system = load_system(o);
  const auto family = load_family(o, system);
  const auto report = tf::pipeline(family, o.k);
  tf::Json out;
  out["schema"] = "tangles/v1";
  out["family"] = family.describe();
  tf::Json levels = tf::Json::array();
  for (const auto& level : report.per_k) {
    levels.push_back({{"k", tf::k_to_json(level.k)}, {"tangles", tangle_list(level.tangles, level.family, *system)}});
  }
  out["levels"] = levels;
  emit(o, tf::dump(out));
  return kTangle;
}

int cmd_certify(const Options& o) {
  check_format(o);
  if (o.k.size() > 1) throw tf::Error(tf::ErrorCode::ParseError, "certify takes at most one --k");
  const double k = o.k.empty() ? std::numeric_limits<double>::infinity() : o.k.front();
  const auto system = load_system(o);
  const auto family = load_family(o, system);
  const auto report = tf::pipeline(family, {k});
  const auto& level = report.per_k.front();
  if (!level.tangles.empty()) {
    tf::Json out;
    out["schema"] = "certify/v1";
    out["k"] = tf::k_to_json(k);
    out["outcome"] = "tangle";
    out["tangles"] = tangle_list(level.tangles, level.family, *system);
    emit(o, tf::dump(out));
    return kTangle;
  }
  if (!level.f_tree) throw tf::Error(tf::ErrorCode::NotAStructureTree, "neither a tangle nor an F-tree at this level");
  if (o.format == "dot") {
    emit(o, tf::tree_to_dot(level.tree, level.family, "F-tree"));
  } else {
    tf::Json out;
    out["schema"] = "certify/v1";
    out["k"] = tf::k_to_json(k);
    out["outcome"] = "f_tree";
    out["tree"] = tf::tree_to_json(level.tree, *system, k);
    tf::Json certs = tf::Json::array();
    for (const auto& w : level.certificates) certs.push_back(tf::witness_to_json(w, level.family, *system));
    out["certificates"] = certs;
    emit(o, tf::dump(out));
  }
  return kCertificate;
}

int cmd_oracle(const Options& o) {
  const auto system = load_system(o);
  const auto family = load_family(o, system);
  std::vector<double> levels = o.k.empty() ? std::vector<double>{std::numeric_limits<double>::infinity()} : o.k;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  tf::Json out;
  out["schema"] = "oracle/v1";
  out["family"] = family.describe();
  tf::Json list = tf::Json::array();
  for (double k : levels) {
    const auto local = family.rebind(system->restrict_below(k));
    const auto found = tf::all_tangles(local, budget(o));
    list.push_back({{"k", tf::k_to_json(k)}, {"tangles", tangle_list(found, local, *system)}});
  }
  out["levels"] = list;
  emit(o, tf::dump(out));
  return kTangle;
}

int cmd_export_dot(const Options& o) {
  const auto system = load_system(o);
  const auto tree = load_tree(o, system);
  const auto family = load_family(o, system).rebind(tree.system_ptr());
  emit(o, tf::tree_to_dot(tree, family, "T"));
  return kTangle;
}

int exit_for(tf::ErrorCode code) {
  return code == tf::ErrorCode::BudgetExceeded || code == tf::ErrorCode::NodeCapExceeded ? kBudget : kInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tangles of abstract separation systems via structure trees"};
  app.require_subcommand(1);
  Options o;

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Options&);
    bool takes_tree;
  };
  const Sub subs[] = {
      {"validate", "check the separation-system axioms and the family", cmd_validate, false},
      {"build", "build, reduce and analyse per level; writes report/v1", cmd_build, false},
      {"reduce", "reduce a stored tree", cmd_reduce, true},
      {"restrict", "restrict a stored tree below --k", cmd_restrict, true},
      {"tangles", "list the tangles found through the structure tree", cmd_tangles, false},
      {"certify", "exit 0 with the tangles, or exit 1 with an F-tree", cmd_certify, false},
      {"oracle", "brute-force tangle enumeration", cmd_oracle, false},
      {"export-dot", "Graphviz rendering of a stored tree", cmd_export_dot, true},
  };
  std::vector<std::pair<CLI::App*, const Sub*>> registered;
  for (const auto& s : subs) {
    auto* sub = app.add_subcommand(s.name, s.help);
    sub->add_option("--graph", o.graph, "edge list, one 'u v' per line");
    sub->add_option("--similarity", o.similarity, "square CSV similarity matrix");
    sub->add_option("--answers", o.answers, "CSV of 0/1 answers, one row per person");
    sub->add_option("--system", o.system, "sepsys/v1 JSON");
    sub->add_option("--family", o.family, "KIND[:PARAM]: empty, blocks:k, cluster:n, profile, strong_profile, graph_tangle");
    sub->add_option("--k", o.k, "order threshold (repeatable)")->allow_extra_args(false);
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--format", o.format, "json or dot");
    sub->add_option("--budget", o.budget, "oracle limit on the number of separations");
    if (s.takes_tree) sub->add_option("tree", o.tree, "tree/v1 or report/v1 JSON")->required();
    registered.emplace_back(sub, &s);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kInvalid;
  }
  try {
    for (auto [sub, s] : registered) {
      if (sub->parsed()) return s->run(o);
    }
  } catch (const tf::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
