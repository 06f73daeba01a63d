#include <catch_amalgamated.hpp>

#include <json.hpp>
#include <set>
#include <sstream>

#include "pgroup/classifier.hpp"
#include "pgroup/isomorphism.hpp"
#include "pgroup/min_degree.hpp"

using namespace pgroup;

namespace {

  struct OracleGroup {
    GroupPtr G;
    std::set<std::string> types;
  };

  // Every consistent central C3-extension of Q81, Q1(3) and Qalpha(3) by a
  // fifth generator n, keeping the ones with a distinguished quotient.
  std::vector<OracleGroup> exceptional_p3_extensions() {
    std::vector<std::string> const qn{"Q81", "Q1", "Qalpha"};
    std::vector<GroupPtr> qs;
    for (auto const& nm : qn) {
      qs.push_back(make_group(build_quotient(nm, 3)));
    }
    std::vector<OracleGroup> out;
    for (auto const& base_name : qn) {
      auto const base = build_quotient(base_name, 3);
      auto lift = [](std::span<int const> v, int e) {
        std::vector<int> w(v.begin(), v.end());
        w.push_back(e);
        return w;
      };
      for (int code = 0; code < 2187; ++code) {
        int a[7];
        for (int t = 0, c = code; t < 7; ++t, c /= 3) {
          a[t] = c % 3;
        }
        using namespace zbasis;
        PcPresentation P(3, 5);
        for (int i = 0; i < 4; ++i) {
          P.set_power(i, lift(base.power(i), 0));
          for (int j = i + 1; j < 4; ++j) {
            P.set_commutator(j, i, lift(base.commutator(j, i), 0));
          }
        }
        P.set_power(z, lift(base.power(z), a[0]));
        P.set_power(y, lift(base.power(y), a[1]));
        P.set_power(u, lift(base.power(u), a[2]));
        P.set_commutator(x, z, lift(base.commutator(x, z), a[3]));
        P.set_commutator(y, z, lift(base.commutator(y, z), a[4]));
        P.set_commutator(y, x, lift(base.commutator(y, x), a[5]));
        P.set_commutator(u, z, lift(base.commutator(u, z), a[6]));
        auto const G = make_group(P);
        if (!G->check_consistency(2000).ok) {
          continue;
        }
        auto const d = distinguished_quotients(G);
        if (d.empty()) {
          continue;
        }
        OracleGroup og{G, {}};
        for (auto const& q : d) {
          auto const Q = Quotient(q.N).group();
          for (std::size_t t = 0; t < qs.size(); ++t) {
            if (are_isomorphic(Q, qs[t])) {
              og.types.insert(qn[t]);
            }
          }
        }
        out.push_back(std::move(og));
      }
    }
    return out;
  }

}  // namespace

TEST_CASE("Counts match the expected totals", "[classifier]") {
  for (int p : {2, 3, 5, 7, 11, 13}) {
    INFO("p=" << p);
    auto const r = classify(p);
    CHECK(r.ok());
    CHECK(r.totals.overall_count == expected_overall_count(p));
    if (p > 3) {
      CHECK(r.totals.q_family_count == (p + 7) / 2);
      CHECK(r.totals.qzeta_family_count == (p + 5) / 2);
      CHECK(r.pairings.size() == static_cast<std::size_t>((p + 5) / 2));
    }
  }
}

TEST_CASE("Invariant and mu verdicts agree at p = 5", "[classifier]") {
  auto const r = classify(5, ClassifyMode::both);
  CHECK(r.disagreements.empty());
  CHECK(r.ok());
  for (auto const& f : r.families) {
    for (auto const& e : f.entries) {
      CHECK(e.source == "both");
      REQUIRE(e.mu_g.has_value());
      CHECK(e.exceptional == (*e.mu_g < *e.mu_q));
    }
  }
}

TEST_CASE("p = 3 named groups match an exhaustive extension search", "[classifier]") {
  auto const oracle = exceptional_p3_extensions();
  std::vector<std::size_t> reps;
  for (std::size_t a = 0; a < oracle.size(); ++a) {
    bool fresh = true;
    for (auto b : reps) {
      fresh = fresh && !are_isomorphic(oracle[a].G, oracle[b].G);
    }
    if (fresh) {
      reps.push_back(a);
    }
  }
  REQUIRE(reps.size() == 5);
  auto const r = classify(3);
  REQUIRE(r.ok());
  std::vector<std::pair<ReportEntry, GroupPtr>> named;
  for (auto const* sec : {r.section("Q81"), r.section("Q1"), r.section("Qalpha")}) {
    REQUIRE(sec != nullptr);
    for (auto const& e : sec->entries) {
      CHECK(e.exceptional);
      named.emplace_back(e, make_group(build_named_group(e.label, 3)));
    }
  }
  std::set<std::size_t> covered;
  for (auto const& [e, G] : named) {
    INFO(e.label);
    int hits = 0;
    for (auto b : reps) {
      if (are_isomorphic(G, oracle[b].G)) {
        ++hits;
        covered.insert(b);
        CHECK(std::set<std::string>(e.quotient_types.begin(), e.quotient_types.end()) == oracle[b].types);
      }
    }
    CHECK(hits == 1);
  }
  CHECK(covered.size() == reps.size());
  // the two shared extensions carry two quotient types each
  int shared = 0;
  for (auto const& [e, G] : named) {
    shared += e.quotient_types.size() == 2;
  }
  CHECK(shared == 4);
  CHECK(r.pairings.size() == 2);
  CHECK(r.totals.q_family_count == 5);
}

TEST_CASE("p = 2 report", "[classifier]") {
  auto const r = classify(2);
  REQUIRE(r.ok());
  auto const* sec = r.section("Q16");
  REQUIRE(sec != nullptr);
  REQUIRE(sec->entries.size() == 2);
  for (auto const& e : sec->entries) {
    CHECK(e.exceptional);
    CHECK(e.mu_q == 16);
    REQUIRE(e.mu_g.has_value());
    CHECK(*e.mu_g < 16);
    CHECK(e.quotient_types == std::vector<std::string>{"Q16"});
  }
}

TEST_CASE("Report formats", "[classifier]") {
  auto const r = classify(5);
  SECTION("json") {
    auto const j = nlohmann::json::parse(report_to_json(r).dump());
    CHECK(j["prime"] == 5);
    CHECK(j["mode"] == "invariants");
    CHECK(j["totals"]["overall_count"] == 11);
    CHECK(j["totals"]["expected"]["overall"] == 11);
    CHECK(j["totals"]["q_family_count"] == 6);
    CHECK(j["totals"]["qzeta_family_count"] == 5);
    CHECK(j["families"].size() == 3);
    CHECK(j["disagreements"].empty());
    std::size_t n = 0;
    for (auto const& f : j["families"]) {
      for (auto const& e : f["entries"]) {
        CHECK(e.contains("label"));
        CHECK(e["exceptional"].is_boolean());
        CHECK(e["mu_g"].is_null());
        ++n;
      }
    }
    CHECK(n == 14 + 2 * 12);
    for (auto const& pr : j["pairings"]) {
      CHECK(pr["verified"] == true);
    }
  }
  SECTION("text") {
    auto const t = report_to_text(r);
    CHECK(t.rfind("prime 5\n", 0) == 0);
    CHECK(t.find("total overall 11 expected 11\n") != std::string::npos);
    CHECK(t.substr(t.size() - 10) == "status ok\n");
  }
  SECTION("csv") {
    std::istringstream is(report_to_csv(r));
    std::string line;
    std::getline(is, line);
    CHECK(line == "prime,family,label,table1_name,params,exceptional,source,mu_g,mu_q");
    int rows = 0;
    while (std::getline(is, line)) {
      ++rows;
      CHECK(line.rfind("5,", 0) == 0);
    }
    CHECK(rows == 14 + 2 * 12);
  }
  SECTION("csv quoting") {
    CHECK(csv_field("plain") == "plain");
    CHECK(csv_field("(1,2)") == "\"(1,2)\"");
    CHECK(csv_field("a\"b") == "\"a\"\"b\"");
  }
}

TEST_CASE("Flagged printed rows at p = 3", "[classifier]") {
  auto const r = classify(3);
  std::set<std::string> heads;
  for (auto const& f : r.flagged_rows) {
    heads.insert(f.substr(0, f.find(':')));
  }
  CHECK(heads == std::set<std::string>{"G4/Q1", "G5", "G6/Qalpha", "G7"});
}

TEST_CASE("Classifier preconditions", "[classifier]") {
  CHECK_THROWS_AS(classify(4), precondition_error);
  CHECK_THROWS_AS(classify(7, ClassifyMode::mu_oracle), precondition_error);
  CHECK_THROWS_AS(classify(7, ClassifyMode::both), precondition_error);
  CHECK_THROWS_AS(parse_mode("sometimes"), error);
  CHECK(parse_mode(mode_name(ClassifyMode::mu_oracle)) == ClassifyMode::mu_oracle);
  CHECK_THROWS_AS(cross_check(3), precondition_error);
}

TEST_CASE("Cross-family pairing at p = 5", "[classifier]") {
  auto const r = cross_check(5);
  CHECK(r.perfect);
  CHECK(r.f4_f5_swap);
  CHECK(r.failures.empty());
  CHECK(r.pairs.size() == 5);
  CHECK(r.alpha_count == 5);
  CHECK(r.one_count == 5);
  std::set<std::string> targets;
  for (auto const& cp : r.pairs) {
    CHECK(cp.iso.verified);
    CHECK(cp.search == true);
    targets.insert(cp.one_label.to_string());
  }
  CHECK(targets.size() == 5);
}
