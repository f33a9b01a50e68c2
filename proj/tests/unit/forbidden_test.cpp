#include "doctest.h"

#include "support.hpp"
#include "tangle_forge/io.hpp"

#include <bit>
#include <fstream>
#include <sstream>

using namespace tf_test;

namespace {

tf::SystemPtr k4_system(double k) {
  return tf::graph_system(tf::Graph::from_edges(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}), k);
}

tf::SystemPtr load_system(const std::string& name) {
  std::ifstream in(std::string(TF_FIXTURES) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return tf::system_from_json(tf::parse_json(ss.str()));
}

tf::ForbiddenFamily load_family(const std::string& name, tf::SystemPtr sys) {
  std::ifstream in(std::string(TF_FIXTURES) + "/" + name);
  std::stringstream ss;
  ss << in.rdbuf();
  return tf::family_from_json(tf::parse_json(ss.str()), std::move(sys));
}

PartialOrientation random_set(Rng& rng, const tf::SeparationSystem& sys, int max_size) {
  auto set = sys.empty_set();
  const int n = uniform(rng, 1, max_size);
  for (int i = 0; i < n; ++i) set.insert(OrientedSep(static_cast<std::uint32_t>(uniform(rng, 0, int(sys.oriented_size()) - 1))));
  return set;
}

}  // namespace

TEST_CASE("blocks membership is the size of the common big side") {
  const auto sys = k4_system(3);
  const auto f = tf::ForbiddenFamily::blocks(sys, 3);
  Rng rng(3);
  for (int i = 0; i < 500; ++i) {
    const auto set = random_set(rng, *sys, 4);
    std::uint64_t common = 0xF;
    set.for_each([&](OrientedSep a) { common &= sys->element(a).b; });
    CHECK(f.is_member(set) == (std::popcount(common) < 3));
  }
}

TEST_CASE("cluster membership only counts sets of at most three") {
  const auto sys = tf::bipartition_system({4, tf::all_subsets(4), [](std::uint64_t x) { return double(std::popcount(x)); }});
  const auto f = tf::ForbiddenFamily::cluster(sys, 2);
  Rng rng(5);
  for (int i = 0; i < 500; ++i) {
    const auto set = random_set(rng, *sys, 5);
    std::uint64_t common = 0xF;
    set.for_each([&](OrientedSep a) { common &= sys->element(a).b; });
    CHECK(f.is_member(set) == (set.size() <= 3 && std::popcount(common) < 2));
  }
}

TEST_CASE("profile membership is {r, s, r* v s*}") {
  const auto sys = tf::bipartition_system({3, tf::all_subsets(3), [](std::uint64_t) { return 1.0; }});
  const auto f = tf::ForbiddenFamily::profile(sys);
  const auto& u = sys->universe();
  for (std::uint32_t mask = 1; mask < (1u << sys->oriented_size()); ++mask) {
    if (std::popcount(mask) > 3) continue;
    auto set = sys->empty_set();
    for (std::uint32_t i = 0; i < sys->oriented_size(); ++i) {
      if ((mask >> i) & 1u) set.insert(OrientedSep(i));
    }
    bool expected = false;
    for (auto r : set.elements()) {
      for (auto s : set.elements()) {
        const auto z = sys->locate(u.join(u.inverse(sys->element(r)), u.inverse(sys->element(s))));
        if (z && set == sys->make_set({r, s, *z})) expected = true;
      }
    }
    CHECK(f.is_member(set) == expected);
  }
}

TEST_CASE("subset search agrees with brute force and yields verifiable witnesses") {
  Rng rng(7);
  std::size_t with_witness = 0;
  for (const auto& inst : master_instances()) {
    const auto& f = inst.family;
    const auto& sys = f.system();
    if (sys.size() > 12 || sys.size() == 0) continue;
    for (int i = 0; i < 6; ++i) {
      const auto sigma = random_set(rng, sys, int(std::min<std::size_t>(sys.oriented_size(), 6)));
      const bool brute = !forbidden_subsets_of(f, sigma).empty();
      CHECK_MESSAGE(f.has_forbidden_subset(sigma) == brute, inst.name);
      const auto w = f.forbidden_subset(sigma);
      CHECK(w.has_value() == brute);
      if (w) {
        ++with_witness;
        CHECK(w->members.is_subset_of(sigma));
        CHECK(f.is_member(w->members));
        CHECK(f.verify(*w));
      }
    }
  }
  CHECK(with_witness > 100);
}

TEST_CASE("verify rejects a witness whose evidence was altered") {
  const auto sys = k4_system(3);
  const auto f = tf::ForbiddenFamily::blocks(sys, 3);
  const auto w = f.forbidden_subset(sys->all_elements());
  REQUIRE(w.has_value());
  auto bad = *w;
  bad.intersection ^= 0x1;
  CHECK_FALSE(f.verify(bad));
  auto not_member = *w;
  not_member.members = sys->empty_set();
  CHECK_FALSE(f.verify(not_member));
}

TEST_CASE("standard families") {
  CHECK(tf::is_standard(tf::ForbiddenFamily::blocks(k4_system(3), 3)).standard);
  const auto bip = tf::bipartition_system({3, tf::all_subsets(3), [](std::uint64_t) { return 1.0; }});
  CHECK(tf::is_standard(tf::ForbiddenFamily::cluster(bip, 2)).standard);
  CHECK(tf::is_standard(tf::ForbiddenFamily::strong_profile(bip)).standard);
  const auto empty = tf::is_standard(tf::ForbiddenFamily::empty(bip));
  CHECK_FALSE(empty.standard);
  CHECK_FALSE(empty.counterexamples.empty());
}

TEST_CASE("closure under minimization") {
  tf::SystemData d;
  d.count = 2;
  d.orders = {1, 2};
  d.leq = {{0, 2}, {3, 1}};
  const auto sys = tf::SeparationSystem::create(d);
  const auto open = tf::ForbiddenFamily::explicit_members(sys, {sys->make_set({OrientedSep(2)})});
  const auto r = tf::is_closed_under_minimization(open);
  CHECK_FALSE(r.closed);
  REQUIRE(r.lowered.has_value());
  CHECK(*r.lowered == sys->make_set({OrientedSep(0)}));
  const auto closed = tf::ForbiddenFamily::explicit_members(sys, {sys->make_set({OrientedSep(2)}), sys->make_set({OrientedSep(0)})});
  CHECK(tf::is_closed_under_minimization(closed).closed);

  Rng rng(13);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_poset(rng, 4, true, true);
    CHECK(tf::is_closed_under_minimization(min_closed_explicit(rng, p)).closed);
  }
  CHECK(tf::is_closed_under_minimization(tf::ForbiddenFamily::blocks(k4_system(3), 2)).closed);
}

TEST_CASE("richness") {
  const auto sys = load_system("nonrich_system.json");
  const auto f = load_family("nonrich_family.json", sys);
  const auto r = tf::is_rich(f);
  CHECK_FALSE(r.rich);
  REQUIRE(r.counterexample.has_value());
  CHECK(f.has_forbidden_subset(*r.counterexample));
  CHECK(tf::is_rich(tf::ForbiddenFamily::blocks(k4_system(3), 3)).rich);
}

TEST_CASE("families refuse the wrong ground") {
  tf::SystemData d;
  d.count = 1;
  d.orders = {1};
  const auto plain = tf::SeparationSystem::create(d);
  CHECK_THROWS_AS(tf::ForbiddenFamily::blocks(plain, 2), tf::Error);
  CHECK_THROWS_AS(tf::ForbiddenFamily::cluster(k4_system(3), 2), tf::Error);
  const auto f = tf::ForbiddenFamily::blocks(k4_system(3), 3);
  CHECK_THROWS_AS(f.is_member(plain->empty_set()), tf::Error);
}

TEST_CASE("rebind carries the family to a subsystem") {
  const auto sys = k4_system(3);
  const auto f = tf::ForbiddenFamily::blocks(sys, 3);
  const auto sub = sys->restrict_below(2);
  const auto g = f.rebind(sub);
  CHECK(g.kind() == tf::FamilyKind::Blocks);
  CHECK(g.parameter() == 3);
  CHECK(&g.system() == sub.get());
  for (std::uint32_t i = 0; i < sub->oriented_size(); ++i) {
    const OrientedSep a(i);
    const OrientedSep parent(2 * sub->origin()[a.sep().value].value + (i & 1u));
    CHECK(g.is_member(sub->make_set({a})) == f.is_member(sys->make_set({parent})));
  }

  tf::SystemData d;
  d.count = 2;
  d.orders = {1, 2};
  d.leq = {{0, 2}, {3, 1}};
  const auto p = tf::SeparationSystem::create(d);
  const auto e = tf::ForbiddenFamily::explicit_members(p, {p->make_set({OrientedSep(0)}), p->make_set({OrientedSep(2)})});
  const auto low = e.rebind(p->restrict_below(2));
  CHECK(low.is_member(low.system().make_set({OrientedSep(0)})));
  CHECK(low.listed_members().size() == 1);
}
