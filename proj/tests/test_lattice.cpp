#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "oracles.hpp"
#include "pgroup/families.hpp"
#include "pgroup/lattice.hpp"
#include "pgroup/structure.hpp"
#include "pgroup/subgroup.hpp"

using namespace pgroup;

namespace {

  std::vector<oracle::ElemSet> element_sets(std::vector<Subgroup> const& subs) {
    std::vector<oracle::ElemSet> out;
    for (auto const& H : subs) {
      out.push_back(H.elements());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<std::pair<std::string, GroupPtr>> small_groups() {
    return {
        {"Q16", make_group(build_quotient("Q16", 2))},
        {"G1", make_group(build_named_group("G1", 2))},
        {"Q81", make_group(build_quotient("Q81", 3))},
        {"Q@3", make_group(build_quotient("Q", 3))},
        {"Qalpha@3", make_group(build_quotient("Qalpha", 3))},
        {"G4/Q1", make_group(build_named_group("G4/Q1", 3))},
        {"Q@3:(1,0,1,1)", make_group(build_candidate(make_q_params(3, 1, 0, 1, 1)))},
    };
  }

}  // namespace

TEST_CASE("Subgroup enumeration matches brute force", "[lattice]") {
  for (auto const& [name, G] : small_groups()) {
    INFO(name);
    auto const brute = oracle::all_subgroups(G);
    auto const subs = all_subgroups(G);
    CHECK(element_sets(subs) == brute);
    // layers are duplicate free and sorted
    for (auto const& layer : subgroup_layers(G)) {
      for (std::size_t t = 1; t < layer.size(); ++t) {
        CHECK(layer[t - 1].elements() < layer[t].elements());
        CHECK(layer[t].order() == layer[0].order());
      }
    }
  }
}

TEST_CASE("Subgroups of a given order", "[lattice]") {
  auto const G = make_group(build_quotient("Q", 3));
  auto const brute = oracle::all_subgroups(G);
  for (std::uint64_t ord : {1, 3, 9, 27, 81}) {
    std::size_t want = 0;
    for (auto const& H : brute) {
      want += H.size() == ord;
    }
    CHECK(subgroups_of_order(G, ord).size() == want);
  }
  CHECK_THROWS_AS(subgroups_of_order(G, 5), precondition_error);
}

TEST_CASE("Normal subgroups and cores match brute force", "[lattice]") {
  for (auto const& [name, G] : small_groups()) {
    INFO(name);
    std::vector<oracle::ElemSet> want;
    for (auto const& H : oracle::all_subgroups(G)) {
      if (oracle::is_normal(G, H)) {
        want.push_back(H);
      }
    }
    std::vector<oracle::ElemSet> got;
    auto const Z = oracle::center(G);
    for (auto const& ns : normal_subgroups(G)) {
      got.push_back(ns.subgroup.elements());
      bool central = true;
      for (Elem a : ns.subgroup.elements()) {
        central = central && oracle::contains(Z, a);
      }
      CHECK(ns.central == central);
    }
    std::sort(got.begin(), got.end());
    CHECK(got == want);
    for (auto const& H : all_subgroups(G)) {
      REQUIRE(core(H).elements() == oracle::core(G, H.elements()));
      REQUIRE(is_normal(H) == oracle::is_normal(G, H.elements()));
    }
  }
}

TEST_CASE("Subgroup operations", "[lattice]") {
  auto const G = make_group(build_candidate(make_q_params(5, 0, 0, 1, 1)));
  using namespace qbasis;
  SECTION("core of the centre is the centre") {
    auto const Z = center(G);
    CHECK(core(Z) == Z);
  }
  SECTION("the P5 witness pair meets in <y>") {
    int const k = 1;
    auto const A = closure(G, {G->gen(x), G->gen(y)});
    auto const B = closure(G, {G->mul(G->gen(u), G->pow(G->gen(n), k)), G->gen(y), G->gen(z)});
    auto const C = intersection(A, B);
    CHECK(C.order() == 5);
    CHECK(C == closure(G, {G->gen(y)}));
  }
  SECTION("join, normal closure and conjugates") {
    auto const Y = closure(G, {G->gen(y)});
    auto const Zg = closure(G, {G->gen(z)});
    auto const J = join(Y, Zg);
    CHECK(J.order() == oracle::closure(G, {G->gen(y), G->gen(z)}).size());
    auto const N = normal_closure(G, {G->gen(y)});
    CHECK(is_normal(N));
    CHECK(N.contains(G->gen(y)));
    for (Elem g = 0; g < G->order(); g += 37) {
      CHECK(conjugate(Y, g).elements() == oracle::conjugate(G, Y.elements(), g));
    }
  }
  SECTION("normal subgroups of order p lie in <x^p, n> when l != 0") {
    auto const Z = center(G);
    for (auto const& ns : normal_subgroups(G)) {
      if (ns.subgroup.order() == 5) {
        CHECK(intersection(ns.subgroup, Z) == ns.subgroup);
      }
    }
  }
}

TEST_CASE("Lattice cache round trip and stale rebuild", "[lattice]") {
  auto const dir = std::filesystem::temp_directory_path() / "pgroup_lattice_cache_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto const G = make_group(build_candidate(make_q_params(3, 1, 1, 1, 1)));
  LatticeOptions o;
  o.cache_dir = dir.string();
  auto const fresh = element_sets(all_subgroups(G));
  auto const first = element_sets(all_subgroups(G, o));
  CHECK(first == fresh);
  CHECK_FALSE(std::filesystem::is_empty(dir));
  auto const second = element_sets(all_subgroups(G, o));
  CHECK(second == fresh);
  for (auto const& f : std::filesystem::directory_iterator(dir)) {
    std::ofstream(f.path()) << "garbage\n";
  }
  auto const third = element_sets(all_subgroups(G, o));
  CHECK(third == fresh);
  std::filesystem::remove_all(dir);
}

TEST_CASE("Worker count does not change the lattice", "[lattice]") {
  auto const G = make_group(build_candidate(make_qzeta_params(5, 1, 1, 1, 0)));
  LatticeOptions one, four;
  four.workers = 4;
  auto const a = all_subgroups(G, one);
  auto const b = all_subgroups(G, four);
  REQUIRE(a.size() == b.size());
  for (std::size_t t = 0; t < a.size(); ++t) {
    REQUIRE(a[t].elements() == b[t].elements());
  }
}
