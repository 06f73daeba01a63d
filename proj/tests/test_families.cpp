#include <catch_amalgamated.hpp>

#include <random>

#include "pgroup/families.hpp"
#include "pgroup/isomorphism.hpp"
#include "pgroup/structure.hpp"

using namespace pgroup;

namespace {

  // E and F presentations written out relation by relation, for p > 3.
  PcPresentation printed_row(std::string const& name, int p) {
    int const alpha = static_cast<int>(least_nonresidue(p));
    int lambda = 0;
    std::string const head = name.substr(0, 2);
    if (head == "E6" || head == "F4" || head == "F5") {
      lambda = std::stoi(name.substr(name.rfind('(') + 1));
    }
    PcPresentation P(p, 5);
    if (name[0] == 'E') {
      using namespace qbasis;
      P.set_labels({"z", "y", "x", "u", "n"});
      P.set_power(x, P.word({{u, 1}}));
      int const row = name[1] - '0';
      int ypow = 0, zpow = 0, xz = 0, yz_n = 1;
      switch (row) {
        case 1:
          break;
        case 2:
          ypow = 1;
          break;
        case 3:
          xz = 1;
          break;
        case 4:
          zpow = 1, xz = 1;
          break;
        case 5:
          ypow = 1, xz = 1, yz_n = 0;
          break;
        case 6:
          ypow = 1, xz = lambda;
          break;
      }
      P.set_power(y, P.word({{n, ypow}}));
      P.set_power(z, P.word({{n, zpow}}));
      P.set_commutator(x, z, P.word({{n, xz}}));
      P.set_commutator(y, z, P.word({{u, 1}, {n, yz_n}}));
      return P;
    }
    using namespace zbasis;
    P.set_labels({"z", "x", "y", "u", "n"});
    int const zeta = name.find("alpha") != std::string::npos ? alpha : 1;
    int const row = name[1] - '0';
    int zn = 0, xy = 0, yz = 1;
    switch (row) {
      case 1:
        break;
      case 2:
        xy = -1, yz = zeta + 1;
        break;
      case 3:
        zn = 1;
        break;
      case 4:
        zn = 1, xy = -1, yz = zeta + lambda;
        break;
      case 5:
        zn = 1, xy = -alpha, yz = zeta == 1 ? alpha + lambda : alpha * (alpha + lambda);
        break;
    }
    P.set_power(x, P.word({{u, 1}}));
    P.set_power(z, P.word({{u, zeta}, {n, zn}}));
    P.set_commutator(x, z, P.word({{y, 1}}));
    P.set_commutator(y, z, P.word({{u, zeta}, {n, yz}}));
    // [y, x] = [x, y]^-1
    P.set_commutator(y, x, P.word({{n, -xy}}));
    return P;
  }

  std::vector<GeneratorMap> maps_for(Family f) {
    if (f == Family::Q) {
      return {{'A', 1}, {'B', 1}, {'C', 1}, {'D', 1}, {'E', 1}};
    }
    return {{'A', 1}, {'B', 1}};
  }

}  // namespace

TEST_CASE("Quotient constructors", "[families]") {
  CHECK(make_group(build_quotient("Q", 5))->order() == 625);
  CHECK(make_group(build_quotient("Q81", 3))->order() == 81);
  CHECK(make_group(build_quotient("Q16", 2))->order() == 16);
  CHECK_THROWS_AS(build_quotient("Q81", 5), precondition_error);
  CHECK_THROWS_AS(build_quotient("Q", 2), precondition_error);
  CHECK_THROWS_AS(build_quotient("nope", 5), precondition_error);
  CHECK_FALSE(are_isomorphic(make_group(build_quotient("Q1", 5)), make_group(build_quotient("Qalpha", 5))));
  CHECK(are_isomorphic(make_group(build_qzeta_quotient(7, 2)), make_group(build_quotient("Q1", 7))));
}

TEST_CASE("Candidates are central extensions of the family quotient", "[families]") {
  std::mt19937_64 rng(5);
  for (int p : {5, 7}) {
    std::uniform_int_distribution<int> c(0, p - 1);
    for (int t = 0; t < 6; ++t) {
      for (auto const& fp : {make_q_params(p, c(rng), c(rng), c(rng), c(rng)),
                             make_qzeta_params(p, t % 2 ? 1 : static_cast<int>(least_nonresidue(p)), c(rng), c(rng),
                                               c(rng))}) {
        auto const G = make_group(build_candidate(fp));
        REQUIRE(G->order() == static_cast<Elem>(p * p * p * p * p));
        Elem const n = G->gen(fp.family == Family::Q ? qbasis::n : zbasis::n);
        auto const N = closure(G, {n});
        CHECK(center(G).contains(n));
        auto const want = fp.family == Family::Q ? build_quotient("Q", p) : build_qzeta_quotient(p, fp.zeta);
        CHECK(are_isomorphic(Quotient(N).group(), make_group(want)));
      }
    }
  }
}

TEST_CASE("Generator maps carry relations to the mapped parameters", "[families]") {
  int const p = 5;
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> coord(0, p - 1);
  std::uniform_int_distribution<int> unit(1, p - 1);
  for (auto family : {Family::Q, Family::Qzeta}) {
    for (auto gm : maps_for(family)) {
      int done = 0;
      while (done < 50) {
        FamilyParams fp = family == Family::Q
                              ? make_q_params(p, coord(rng), coord(rng), coord(rng), coord(rng))
                              : make_qzeta_params(p, unit(rng), coord(rng), coord(rng), coord(rng));
        gm.lambda = unit(rng);
        try {
          check_map(fp, gm);
        } catch (precondition_error const&) {
          continue;
        }
        ++done;
        auto const G = make_group(build_candidate(fp));
        auto const H = make_group(build_candidate(apply_generator_map(fp, gm)));
        auto const img = generator_map_images(*G, fp, gm);
        INFO(family_name(family) << " " << gm.to_string() << " " << params_to_string(fp.params));
        REQUIRE(is_isomorphism(*H, *G, img));
      }
    }
  }
}

TEST_CASE("Canonical forms", "[families]") {
  SECTION("documented examples") {
    auto a = canonical_params(make_q_params(5, 0, 0, 2, 0));
    CHECK(a.label.to_string() == "P1");
    auto b = canonical_params(make_q_params(5, 2, 3, 1, 4));
    CHECK(b.label.to_string() == "P9(3)");
    CHECK(b.trail_string() == "C(2),A(3),D");
    auto c = canonical_params(make_qzeta_params(5, 1, 2, 3, 4));
    CHECK(c.label.to_string() == "P7(1)");
    CHECK(c.trail_string() == "A(3),B(4)");
  }
  SECTION("trail replay, orbit invariance and isomorphism on random tuples") {
    std::mt19937_64 rng(23);
    for (int p : {5, 7}) {
      std::uniform_int_distribution<int> coord(0, p - 1);
      std::uniform_int_distribution<int> unit(1, p - 1);
      for (int t = 0; t < 200; ++t) {
        FamilyParams fp = t % 2 ? make_q_params(p, coord(rng), coord(rng), coord(rng), coord(rng))
                                : make_qzeta_params(p, unit(rng), coord(rng), coord(rng), coord(rng));
        auto const cf = canonical_params(fp);
        FamilyParams replay = fp;
        for (auto const& gm : cf.trail) {
          replay = apply_generator_map(replay, gm);
        }
        REQUIRE(replay == cf.params);
        REQUIRE(label_of_params(cf.params) == cf.label);
        auto moved = fp;
        for (auto gm : maps_for(fp.family)) {
          gm.lambda = unit(rng);
          try {
            moved = apply_generator_map(moved, gm);
          } catch (precondition_error const&) {
          }
        }
        REQUIRE(canonical_params(moved).label == cf.label);
        if (t % 20 == 0) {
          CHECK(are_isomorphic(make_group(build_candidate(fp)), make_group(build_candidate(cf.params))));
        }
      }
    }
  }
}

TEST_CASE("Table label counts", "[families]") {
  for (int p : {5, 7, 11, 13}) {
    int const alpha = static_cast<int>(least_nonresidue(p));
    CHECK(static_cast<int>(table_labels(Family::Q, p).size()) == p + 9);
    CHECK(static_cast<int>(table_labels(Family::Qzeta, p).size()) == p + 7);
    int q = 0, one = 0, al = 0;
    for (auto const& lab : table_labels(Family::Q, p)) {
      q += predicted_exceptional(lab, p);
    }
    for (auto const& lab : table_labels(Family::Qzeta, p)) {
      one += predicted_exceptional(lab, p, 1);
      al += predicted_exceptional(lab, p, alpha);
    }
    CHECK(q == (p + 7) / 2);
    CHECK(one == (p + 5) / 2);
    CHECK(al == (p + 5) / 2);
  }
}

TEST_CASE("Printed E and F rows match the named groups", "[families]") {
  for (int p : {5, 7}) {
    for (auto const& name : named_groups(p)) {
      INFO(name << " at p=" << p);
      auto const printed = make_group(printed_row(name, p));
      REQUIRE(printed->check_consistency(5000).ok);
      CHECK(are_isomorphic(printed, make_group(build_named_group(name, p))));
    }
  }
}

TEST_CASE("p = 3 named groups", "[families]") {
  auto const names = named_groups(3);
  for (auto const& g : {"G3", "G4/Q81", "G4/Q1", "G5", "G6/Q1", "G6/Qalpha", "G7"}) {
    CHECK(std::find(names.begin(), names.end(), g) != names.end());
    auto const G = make_consistent_group(build_named_group(g, 3));
    CHECK(G->order() == 243);
  }
  CHECK(are_isomorphic(make_group(build_named_group("G4/Q81", 3)), make_group(build_named_group("G4/Q1", 3))));
  CHECK(are_isomorphic(make_group(build_named_group("G6/Q1", 3)), make_group(build_named_group("G6/Qalpha", 3))));
  CHECK_FALSE(are_isomorphic(make_group(build_named_group("G3", 3)), make_group(build_named_group("G5", 3))));
}

TEST_CASE("Group spec grammar", "[families]") {
  for (std::string s : {"Q@5", "Q1@7", "Qalpha@7", "Q81@3", "Q16@2", "Qzeta:2@7", "Qzeta:1@7:(1,1,0)",
                        "named:E5@5", "params:Q@5:(2,3,1,4)", "Q@5:(0,0,1,1)", "file:some/path.txt"}) {
    CHECK(parse_group_spec(s).to_string() == s);
  }
  auto const s = parse_group_spec("params:Q@5:(2,3,1,4)");
  CHECK(s.kind == GroupSpec::Kind::candidate);
  CHECK(s.family_params() == make_q_params(5, 2, 3, 1, 4));
  CHECK(make_group(parse_group_spec("named:E5@5").presentation())->order() == 3125);
  for (std::string bad : {"Q", "Q@4", "Q@5:(1,2)x", "Q81@x", "Foo@5", "params:Q@5", "named:E1", "Qzeta:5@5",
                          "Q1@5:(1,2,3)", "Q@5:(a,b,c,d)"}) {
    INFO(bad);
    CHECK_THROWS_AS(parse_group_spec(bad).presentation(), error);
  }
}
