#include <catch_amalgamated.hpp>

#include <random>

#include "pgroup/explicit.hpp"
#include "pgroup/families.hpp"
#include "pgroup/invariants.hpp"
#include "pgroup/isomorphism.hpp"

using namespace pgroup;

TEST_CASE("psi classes do not depend on the witness", "[invariants]") {
  int const p = 5;
  int const alpha = static_cast<int>(least_nonresidue(p));
  std::vector<FamilyParams> all;
  for (auto const& lab : table_labels(Family::Q, p)) {
    all.push_back(label_to_params(lab, p));
  }
  for (int zeta : {1, alpha}) {
    for (auto const& lab : table_labels(Family::Qzeta, p)) {
      all.push_back(label_to_params(lab, p, zeta));
    }
  }
  for (auto const& fp : all) {
    // psi needs i, l != 0 in family Q and j != 0 in family Qzeta
    bool const defined = fp.family == Family::Q ? fp.params[0] != 0 && fp.params[3] != 0 : fp.params[0] != 0;
    auto const G = make_group(build_candidate(fp));
    auto const ws = psi_witnesses(G, fp);
    if (!defined) {
      if (!ws.empty()) {
        CHECK_THROWS_AS(psi_map(G, fp, ws.front()), precondition_error);
      }
      continue;
    }
    INFO(family_name(fp.family) << " zeta=" << fp.zeta << " " << params_to_string(fp.params));
    REQUIRE_FALSE(ws.empty());
    auto const first = psi_map(G, fp, ws.front());
    for (Elem w : ws) {
      auto const m = psi_map(G, fp, w);
      REQUIRE(m.det_class() == first.det_class());
      REQUIRE(m.tr2_over_det() == first.tr2_over_det());
      if (fp.family == Family::Qzeta) {
        std::int64_t const want = -static_cast<std::int64_t>(m.t) * m.t * fp.zeta * fp.params[2];
        REQUIRE(m.det() == mod(want, p));
      }
    }
    CHECK(default_psi_witness(G, fp) == ws.front());
  }
}

TEST_CASE("Fingerprints are sound on isomorphic pairs", "[invariants]") {
  std::mt19937_64 rng(29);
  for (int p : {5, 7}) {
    std::uniform_int_distribution<int> coord(0, p - 1);
    std::uniform_int_distribution<int> unit(1, p - 1);
    for (int t = 0; t < 6; ++t) {
      auto const fp = t % 2 ? make_q_params(p, coord(rng), coord(rng), coord(rng), coord(rng))
                            : make_qzeta_params(p, unit(rng), coord(rng), coord(rng), coord(rng));
      auto const A = make_group(build_candidate(fp));
      auto const B = make_group(build_candidate(canonical_params(fp).params));
      IsoOptions o;
      o.fingerprint_prefilter = false;
      auto const r = find_isomorphism(A, B, o);
      REQUIRE(r.isomorphic);
      CHECK(is_isomorphism(*A, *B, r.images));
      CHECK(fingerprint(A) == fingerprint(B));
    }
  }
}

TEST_CASE("Fingerprints separate the canonical labels", "[invariants]") {
  for (int p : {5, 7}) {
    int const alpha = static_cast<int>(least_nonresidue(p));
    std::vector<std::pair<Family, int>> families{{Family::Q, 0}, {Family::Qzeta, 1}, {Family::Qzeta, alpha}};
    for (auto const& [fam, zeta] : families) {
      std::vector<std::pair<std::string, Fingerprint>> fps;
      for (auto const& lab : table_labels(fam, p)) {
        fps.emplace_back(lab.to_string(), fingerprint(make_group(build_candidate(label_to_params(lab, p, zeta)))));
      }
      for (std::size_t a = 0; a < fps.size(); ++a) {
        for (std::size_t b = a + 1; b < fps.size(); ++b) {
          INFO("p=" << p << " " << family_name(fam) << " zeta=" << zeta << " " << fps[a].first << " vs "
                    << fps[b].first);
          CHECK(fps[a].second != fps[b].second);
        }
      }
    }
  }
}

TEST_CASE("Isomorphism search", "[iso]") {
  auto const A = make_group(build_candidate(make_q_params(5, 2, 3, 1, 4)));
  auto const B = make_group(build_candidate(make_q_params(5, 1, 0, 1, 3)));
  SECTION("finds a verified map") {
    auto const r = find_isomorphism(A, B);
    REQUIRE(r.isomorphic);
    CHECK(is_isomorphism(*A, *B, r.images));
    CHECK_FALSE(r.by_fingerprint);
  }
  SECTION("worker count does not change the map") {
    IsoOptions one, four;
    four.workers = 4;
    CHECK(find_isomorphism(A, B, one).images == find_isomorphism(A, B, four).images);
  }
  SECTION("non-isomorphic pairs") {
    auto const C = make_group(build_candidate(make_q_params(5, 1, 0, 1, 1)));
    auto const r = find_isomorphism(A, C);
    CHECK_FALSE(r.isomorphic);
    CHECK(r.by_fingerprint);
    IsoOptions o;
    o.fingerprint_prefilter = false;
    CHECK_FALSE(find_isomorphism(A, C, o).isomorphic);
  }
  SECTION("budget") {
    IsoOptions o;
    o.budget = 1;
    o.fingerprint_prefilter = false;
    auto const C = make_group(build_candidate(make_q_params(5, 1, 0, 1, 1)));
    CHECK_THROWS_AS(find_isomorphism(A, C, o), budget_exceeded);
  }
  SECTION("different orders") {
    CHECK_FALSE(are_isomorphic(A, make_group(build_quotient("Q", 5))));
  }
  SECTION("identity map and a broken map") {
    std::vector<Elem> id;
    for (int i = 0; i < A->ngens(); ++i) {
      id.push_back(A->gen(i));
    }
    CHECK(is_isomorphism(*A, *A, id));
    auto bad = id;
    bad[qbasis::n] = 0;
    CHECK_FALSE(is_isomorphism(*A, *A, bad));
  }
}

TEST_CASE("Explicit isomorphisms over Qalpha", "[iso]") {
  for (int p : {5, 7, 11, 13}) {
    INFO("p=" << p);
    CHECK(verify_explicit_isomorphism(ExplicitCase::P2_alpha_to_Q1, p));
  }
  for (int p : {5, 7, 11}) {
    INFO("p=" << p);
    CHECK(verify_explicit_isomorphism(ExplicitCase::P4_alpha_to_Q1, p));
  }
  for (int p : {5, 7}) {
    INFO("p=" << p);
    CHECK(verify_explicit_isomorphism(ExplicitCase::j1_normal_form, p));
  }
  int const alpha = static_cast<int>(least_nonresidue(5));
  auto const p2 = explicit_p2(5);
  CHECK(p2.verified);
  CHECK(p2.target.params == std::vector<int>{0, 1, 0});
  auto const p4 = explicit_p4(5);
  CHECK(p4.verified);
  CHECK(p4.target.params == std::vector<int>{0, 1, alpha});
  CHECK(is_isomorphism(*make_group(build_candidate(p4.target)), *make_group(build_candidate(p4.source)), p4.images));
  CHECK_THROWS_AS(verify_explicit_isomorphism(ExplicitCase::P2_alpha_to_Q1, 3), precondition_error);
  CHECK(parse_explicit_case(explicit_case_name(ExplicitCase::j1_normal_form)) == ExplicitCase::j1_normal_form);
}

TEST_CASE("Central automorphisms", "[iso]") {
  for (auto const& G : {make_group(build_candidate(make_q_params(5, 0, 1, 1, 1))),
                        make_group(build_quotient("Q81", 3)), make_group(build_named_group("G1", 2))}) {
    auto const Z = center(G);
    auto const zs = detail::central_automorphisms(G, 200);
    CHECK_FALSE(zs.empty());
    for (auto const& zeta : zs) {
      std::vector<Elem> img;
      for (int i = 0; i < G->ngens(); ++i) {
        REQUIRE(Z.contains(zeta[static_cast<std::size_t>(i)]));
        img.push_back(G->mul(G->gen(i), zeta[static_cast<std::size_t>(i)]));
      }
      REQUIRE(is_isomorphism(*G, *G, img));
    }
  }
}

TEST_CASE("E4-type labels at p = 7 stay within the default budget", "[iso]") {
  auto const A = make_group(build_candidate(make_q_params(7, 0, 5, 6, 3)));
  auto const B = make_group(build_candidate(make_q_params(7, 0, 1, 1, 1)));
  auto const r = find_isomorphism(A, B);
  REQUIRE(r.isomorphic);
  CHECK(r.nodes < 5'000'000);
}
