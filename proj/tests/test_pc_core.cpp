#include <catch_amalgamated.hpp>

#include <array>
#include <random>

#include "oracles.hpp"
#include "pgroup/families.hpp"
#include "pgroup/group.hpp"
#include "pgroup/modular.hpp"
#include "pgroup/structure.hpp"

using namespace pgroup;

namespace {

  // Upper unitriangular 3x3 matrices mod p as (a, b, c):
  // (a,b,c)(a',b',c') = (a+a', b+b', c+c'+ab').
  struct Heis {
    int p;
    std::array<int, 3> mul(std::array<int, 3> s, std::array<int, 3> t) const {
      return {(s[0] + t[0]) % p, (s[1] + t[1]) % p, (s[2] + t[2] + s[0] * t[1]) % p};
    }
  };

  PcPresentation heisenberg_pc(int p) {
    PcPresentation P(p, 3);
    P.set_labels({"x", "y", "z"});
    P.set_commutator(1, 0, P.word({{2, -1}}));
    return P;
  }

  std::array<int, 3> heis_image(PcGroup const& G, Elem e) {
    auto const v = G.exponents(e);
    int const p = G.prime();
    return {v[0], v[1], (v[0] * v[1] + v[2]) % p};
  }

  PcPresentation cyclic_pc(int p, int n) {
    PcPresentation P(p, n);
    for (int i = 0; i + 1 < n; ++i) {
      P.set_power(i, P.word({{i + 1, 1}}));
    }
    return P;
  }

  // Quaternion units as integer 4-vectors with the Hamilton product.
  using Quat = std::array<int, 4>;
  Quat qmul(Quat a, Quat b) {
    return {a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3], a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
            a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1], a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0]};
  }

}  // namespace

TEST_CASE("Heisenberg multiplication matches matrices", "[pc]") {
  for (int p : {2, 3, 5, 7}) {
    auto const G = make_group(heisenberg_pc(p));
    Heis H{p};
    REQUIRE(G->order() == static_cast<Elem>(p * p * p));
    for (Elem a = 0; a < G->order(); ++a) {
      for (Elem b = 0; b < G->order(); ++b) {
        REQUIRE(heis_image(*G, G->mul(a, b)) == H.mul(heis_image(*G, a), heis_image(*G, b)));
      }
    }
  }
}

TEST_CASE("Cyclic group arithmetic matches integers", "[pc]") {
  for (int p : {2, 3, 5}) {
    auto const G = make_group(cyclic_pc(p, 3));
    int const n = p * p * p;
    auto val = [&](Elem e) {
      auto v = G->exponents(e);
      return v[0] + p * v[1] + p * p * v[2];
    };
    for (Elem a = 0; a < G->order(); ++a) {
      for (Elem b = 0; b < G->order(); ++b) {
        REQUIRE(val(G->mul(a, b)) == (val(a) + val(b)) % n);
      }
      REQUIRE(val(G->inv(a)) == (n - val(a)) % n);
    }
    REQUIRE(G->element_order(G->gen(0)) == static_cast<std::uint64_t>(n));
  }
}

TEST_CASE("Q8 pc presentation matches quaternion units", "[pc]") {
  PcPresentation P(2, 3);
  P.set_labels({"i", "j", "m"});
  P.set_power(0, P.word({{2, 1}}));
  P.set_power(1, P.word({{2, 1}}));
  P.set_commutator(1, 0, P.word({{2, 1}}));
  auto const G = make_consistent_group(P);
  Quat const one{1, 0, 0, 0}, qi{0, 1, 0, 0}, qj{0, 0, 1, 0}, mone{-1, 0, 0, 0};
  auto img = [&](Elem e) {
    auto v = G->exponents(e);
    Quat r = one;
    if (v[0]) {
      r = qmul(r, qi);
    }
    if (v[1]) {
      r = qmul(r, qj);
    }
    if (v[2]) {
      r = qmul(r, mone);
    }
    return r;
  };
  for (Elem a = 0; a < 8; ++a) {
    for (Elem b = 0; b < 8; ++b) {
      REQUIRE(img(G->mul(a, b)) == qmul(img(a), img(b)));
    }
  }
}

TEST_CASE("Inconsistent presentations are rejected", "[pc]") {
  // a^p = b forces [b, a] = 1
  PcPresentation P(3, 3);
  P.set_power(0, P.word({{1, 1}}));
  P.set_commutator(1, 0, P.word({{2, 1}}));
  auto const G = make_group(P);
  CHECK_FALSE(G->check_consistency(1000).ok);
  CHECK_THROWS_AS(make_consistent_group(P), structural_error);
}

TEST_CASE("Support condition is enforced", "[pc]") {
  PcPresentation P(5, 3);
  P.set_power(1, {1, 0, 0});
  CHECK_THROWS_AS(P.validate(), structural_error);
  CHECK_THROWS_AS(PcPresentation(4, 2), structural_error);
}

TEST_CASE("Presentation text round trip", "[pc]") {
  auto const P = build_candidate(make_q_params(5, 1, 0, 1, 2));
  auto const Q = PcPresentation::from_text(P.to_text());
  CHECK(Q == P);
  CHECK(content_hash(Q) == content_hash(P));
  CHECK_THROWS_AS(PcPresentation::from_text("prime 5\nngens 2\npow 0 : 0 7\n"), parse_error);
  CHECK_THROWS_AS(PcPresentation::from_text("pow 0 : 0 1\n"), parse_error);
  CHECK_THROWS_AS(PcPresentation::from_text("prime 5\nngens 2\nbogus\n"), parse_error);
}

TEST_CASE("Every family presentation is consistent", "[pc]") {
  for (int p : {3, 5, 7}) {
    for (auto const& name : std::vector<std::string>{"Q", "Q1", "Qalpha"}) {
      if (p == 3 && name != "Q") {
        continue;
      }
      CHECK(make_group(build_quotient(name, p))->check_consistency(5000).ok);
    }
    for (int code = 0; code < p * p * p * p; code += (p == 3 ? 1 : p == 5 ? 7 : 41)) {
      auto const fp = make_q_params(p, code % p, code / p % p, code / (p * p) % p, code / (p * p * p));
      CHECK(make_group(build_candidate(fp))->check_consistency(500).ok);
    }
  }
  CHECK(make_group(build_quotient("Q81", 3))->check_consistency().ok);
  CHECK(make_group(build_quotient("Q16", 2))->check_consistency().ok);
}

TEST_CASE("Element orders and powers", "[pc]") {
  auto const G = make_group(build_quotient("Q1", 5));
  using namespace zbasis;
  CHECK(G->element_order(G->gen(z)) == 25);
  CHECK(G->element_order(G->gen(y)) == 5);
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Elem> pick(0, G->order() - 1);
  for (int t = 0; t < 2000; ++t) {
    Elem const a = pick(rng);
    Elem r = 0;
    for (int k = 0; k < 5; ++k) {
      r = G->mul(r, a);
    }
    REQUIRE(G->pth_power(a) == r);
    REQUIRE(G->mul(a, G->inv(a)) == 0);
    REQUIRE(G->pow(a, -3) == G->inv(G->mul(a, G->mul(a, a))));
  }
}

TEST_CASE("p-th power map is an endomorphism for p > 3", "[pc]") {
  std::mt19937_64 rng(11);
  for (int p : {5, 7}) {
    for (auto const& fp : {make_q_params(p, 1, 1, 1, 1), make_qzeta_params(p, 1, 1, 1, 1),
                           make_qzeta_params(p, static_cast<int>(least_nonresidue(p)), 0, 1, 1)}) {
      auto const G = make_group(build_candidate(fp));
      std::uniform_int_distribution<Elem> pick(0, G->order() - 1);
      for (int t = 0; t < 20000; ++t) {
        Elem const a = pick(rng), b = pick(rng);
        REQUIRE(G->pth_power(G->mul(a, b)) == G->mul(G->pth_power(a), G->pth_power(b)));
      }
      CHECK(pth_power_image(G).is_power_set);
    }
  }
}

TEST_CASE("Centre matches brute force", "[pc]") {
  for (auto const& fp : {make_q_params(3, 1, 0, 1, 1), make_q_params(5, 0, 1, 0, 0), make_qzeta_params(5, 2, 1, 0, 1)}) {
    auto const G = make_group(build_candidate(fp));
    CHECK(center(G).elements() == oracle::center(G));
  }
  auto const H = make_group(heisenberg_pc(5));
  CHECK(center(H).order() == 5);
  CHECK(derived_subgroup(H).order() == 5);
}

TEST_CASE("Centre, derived subgroup and p-th powers of the families", "[pc]") {
  int const p = 5;
  using namespace qbasis;
  SECTION("l != 0 gives an elementary centre <x^p, n>") {
    auto const G = make_group(build_candidate(make_q_params(p, 1, 0, 1, 2)));
    auto const Z = center(G);
    CHECK(Z.order() == 25);
    CHECK(Z.contains(G->gen(u)));
    CHECK(Z.contains(G->gen(n)));
    CHECK(abelian_invariants(Z) == std::vector<int>{1, 1});
  }
  SECTION("l = 0 gives <x, n> = C_p^2 x C_p") {
    auto const G = make_group(build_candidate(make_q_params(p, 1, 1, 0, 0)));
    auto const Z = center(G);
    CHECK(Z.order() == 125);
    CHECK(Z.contains(G->gen(x)));
    CHECK(abelian_invariants(Z) == std::vector<int>{2, 1});
  }
  SECTION("derived subgroup of Q(p) is <x^p>") {
    auto const G = make_group(build_quotient("Q", p));
    auto const D = derived_subgroup(G);
    CHECK(D.order() == 5);
    CHECK(D.contains(G->gen(u)));
  }
  SECTION("p-th powers") {
    auto const A = make_group(build_candidate(make_q_params(p, 0, 0, 1, 1)));
    CHECK(pth_power_image(A).subgroup.order() == 5);
    auto const B = make_group(build_candidate(make_q_params(p, 0, 1, 1, 1)));
    CHECK(pth_power_image(B).subgroup.order() == 25);
  }
  SECTION("Qzeta with m = 0 has derived subgroup <y, x^(zeta p) n^k>") {
    auto const G = make_group(build_candidate(make_qzeta_params(p, 2, 1, 3, 0)));
    auto const D = derived_subgroup(G);
    CHECK(D.order() == 25);
    CHECK(D.contains(G->gen(zbasis::y)));
    CHECK(D.contains(G->mul(G->pow(G->gen(zbasis::u), 2), G->pow(G->gen(zbasis::n), 3))));
  }
}

TEST_CASE("Quotient projection is a homomorphism with the right kernel", "[pc]") {
  auto const G = make_group(build_candidate(make_qzeta_params(5, 1, 1, 1, 1)));
  for (auto const& N : {center(G), derived_subgroup(G), closure(G, {G->gen(zbasis::n)})}) {
    Quotient q(N);
    auto const& Q = q.group();
    CHECK(Q->order() * N.order() == G->order());
    CHECK(Q->check_consistency(2000).ok);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<Elem> pick(0, G->order() - 1);
    for (int t = 0; t < 3000; ++t) {
      Elem const a = pick(rng), b = pick(rng);
      REQUIRE(q.project(G->mul(a, b)) == Q->mul(q.project(a), q.project(b)));
    }
    for (Elem a = 0; a < G->order(); ++a) {
      REQUIRE((q.project(a) == 0) == N.contains(a));
    }
    for (Elem e = 0; e < Q->order(); ++e) {
      REQUIRE(q.project(q.lift(e)) == e);
    }
  }
}

TEST_CASE("Legendre symbol", "[modular]") {
  for (int p : {3, 5, 7, 11, 13, 17, 19}) {
    for (int a = 0; a < p; ++a) {
      std::int64_t e = 1;
      for (int k = 0; k < (p - 1) / 2; ++k) {
        e = e * a % p;
      }
      int const want = a == 0 ? 0 : (e == 1 ? 1 : -1);
      REQUIRE(legendre(a, p) == want);
      for (int b = 0; b < p; ++b) {
        REQUIRE(legendre(a * b, p) == legendre(a, p) * legendre(b, p));
      }
      if (a != 0) {
        REQUIRE(a * inv_mod(a, p) % p == 1);
      }
    }
    REQUIRE(legendre(least_nonresidue(p), p) == -1);
  }
  CHECK(least_nonresidue(5) == 2);
  CHECK(least_nonresidue(7) == 3);
}

TEST_CASE("Associativity: every triple at p = 3, sampled at p = 5", "[pc]") {
  auto const G = make_group(build_named_group("G5", 3));
  bool ok = true;
  for (Elem a = 0; a < G->order() && ok; ++a) {
    for (Elem b = 0; b < G->order() && ok; ++b) {
      Elem const ab = G->mul(a, b);
      for (Elem c = 0; c < G->order(); ++c) {
        if (G->mul(ab, c) != G->mul(a, G->mul(b, c))) {
          ok = false;
          break;
        }
      }
    }
  }
  CHECK(ok);
  auto const H = make_group(build_candidate(make_qzeta_params(5, 2, 1, 1, 1)));
  std::mt19937_64 rng(19);
  std::uniform_int_distribution<Elem> pick(0, H->order() - 1);
  for (int t = 0; t < 1'000'000 && ok; ++t) {
    Elem const a = pick(rng), b = pick(rng), c = pick(rng);
    ok = H->mul(H->mul(a, b), c) == H->mul(a, H->mul(b, c));
  }
  CHECK(ok);
}

TEST_CASE("Word normalization is idempotent on normal forms", "[pc]") {
  auto const G = make_group(build_candidate(make_q_params(5, 1, 1, 1, 1)));
  for (Elem a = 0; a < G->order(); ++a) {
    auto const v = G->exponents(a);
    std::vector<std::pair<int, std::int64_t>> word;
    for (int i = 0; i < G->ngens(); ++i) {
      word.emplace_back(i, v[static_cast<std::size_t>(i)]);
    }
    REQUIRE(G->normalize_word(word) == a);
    REQUIRE(G->from_exponents(v) == a);
  }
  CHECK(G->normalize_word({{qbasis::x, 5}}) == G->gen(qbasis::u));
}
