#pragma once

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "classifier.hpp"
#include "errors.hpp"
#include "families.hpp"
#include "invariants.hpp"
#include "isomorphism.hpp"
#include "min_degree.hpp"
#include "structure.hpp"

namespace pgroup {

  struct AcceptanceOptions {
    MuOptions mu;
    IsoOptions iso;
  };

  struct CriterionResult {
    int id = 0;
    std::string name;
    // false when the requested prime is outside the criterion's range
    bool ran = false;
    bool passed = false;
    std::vector<int> primes;
    std::string detail;
    double seconds = 0;
  };

  namespace detail {

    // Collects failures; the first few are kept for the report.
    struct Checker {
      int failures = 0;
      int checks = 0;
      std::vector<std::string> notes;

      void expect(bool ok, std::string const& what) {
        ++checks;
        if (!ok) {
          ++failures;
          if (notes.size() < 5) {
            notes.push_back(what);
          }
        }
      }

      std::string summary() const {
        std::string s = std::to_string(checks - failures) + "/" + std::to_string(checks) + " checks";
        for (auto const& n : notes) {
          s += "; " + n;
        }
        return s;
      }
    };

    inline std::vector<int> select_primes(std::vector<int> const& range, std::optional<int> prime) {
      if (!prime) {
        return range;
      }
      for (int q : range) {
        if (q == *prime) {
          return {q};
        }
      }
      return {};
    }

    inline std::string join_ints(std::vector<int> const& v) {
      std::string s;
      for (std::size_t t = 0; t < v.size(); ++t) {
        s += (t ? "," : "") + std::to_string(v[t]);
      }
      return s;
    }

    // Every family candidate at p, as (description, params).
    inline std::vector<std::pair<std::string, FamilyParams>> all_candidates(int p) {
      std::vector<std::pair<std::string, FamilyParams>> out;
      for (auto const& lab : table_labels(Family::Q, p)) {
        out.emplace_back("Q " + lab.to_string(), label_to_params(lab, p));
      }
      if (p > 3) {
        int const alpha = static_cast<int>(least_nonresidue(p));
        for (int zeta : {1, alpha}) {
          for (auto const& lab : table_labels(Family::Qzeta, p)) {
            out.emplace_back("Qzeta:" + std::to_string(zeta) + " " + lab.to_string(),
                             label_to_params(lab, p, zeta));
          }
        }
      }
      return out;
    }

    inline std::vector<std::string> quotients_at(int p) {
      if (p == 2) {
        return {"Q16"};
      }
      if (p == 3) {
        return {"Q", "Q1", "Qalpha", "Q81"};
      }
      return {"Q", "Q1", "Qalpha"};
    }

    inline CriterionResult run_criterion(int id, std::string name, std::vector<int> range, std::optional<int> prime,
                                         std::function<void(std::vector<int> const&, Checker&)> const& body) {
      CriterionResult r;
      r.id = id;
      r.name = std::move(name);
      r.primes = select_primes(range, prime);
      if (r.primes.empty()) {
        r.detail = "not applicable at p = " + std::to_string(prime.value_or(0));
        return r;
      }
      r.ran = true;
      auto const t0 = std::chrono::steady_clock::now();
      Checker c;
      try {
        body(r.primes, c);
      } catch (error const& e) {
        c.expect(false, std::string("error: ") + e.what());
      }
      r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      r.passed = c.failures == 0 && c.checks > 0;
      r.detail = c.summary();
      return r;
    }

  }  // namespace detail

  // 1. Overall counts in invariants mode, under 10 s for the full list.
  inline CriterionResult criterion_counts(std::optional<int> prime = {}, AcceptanceOptions const& o = {}) {
    return detail::run_criterion(
        1, "overall counts", {2, 3, 5, 7, 11, 13, 17, 19}, prime, [&](auto const& primes, detail::Checker& c) {
          auto const t0 = std::chrono::steady_clock::now();
          for (int p : primes) {
            ClassifyOptions co;
            co.mode = ClassifyMode::invariants;
            co.mu = o.mu;
            co.iso = o.iso;
            auto const r = classify(p, co);
            c.expect(r.totals.overall_count == expected_overall_count(p),
                     "p=" + std::to_string(p) + " overall " + std::to_string(r.totals.overall_count));
            c.expect(r.ok(), "p=" + std::to_string(p) + " report not ok");
          }
          double const s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          c.expect(s < 10.0, "took " + std::to_string(s) + " s");
        });
  }

  // 2. Family counts (p+7)/2 and (p+5)/2, under 5 s.
  inline CriterionResult criterion_family_counts(std::optional<int> prime = {}, AcceptanceOptions const& o = {}) {
    return detail::run_criterion(
        2, "family counts", {5, 7, 11, 13}, prime, [&](auto const& primes, detail::Checker& c) {
          auto const t0 = std::chrono::steady_clock::now();
          for (int p : primes) {
            ClassifyOptions co;
            co.iso = o.iso;
            auto const r = classify(p, co);
            auto const* q = r.section("Q");
            auto const* q1 = r.section("Q1");
            auto const* qa = r.section("Qalpha");
            std::string const at = "p=" + std::to_string(p) + " ";
            c.expect(q && q->exceptional_count() == (p + 7) / 2, at + "family Q");
            c.expect(q1 && q1->exceptional_count() == (p + 5) / 2, at + "family Q1");
            c.expect(qa && qa->exceptional_count() == (p + 5) / 2, at + "family Qalpha");
          }
          double const s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
          c.expect(s < 5.0, "took " + std::to_string(s) + " s");
        });
  }

  // 3. mu of the quotients and of every candidate at p = 5.
  inline CriterionResult criterion_mu_ground_truth(std::optional<int> prime = {}, AcceptanceOptions const& o = {}) {
    return detail::run_criterion(3, "mu ground truth", {5}, prime, [&](auto const& primes, detail::Checker& c) {
      for (int p : primes) {
        std::uint64_t const p2 = static_cast<std::uint64_t>(p) * p;
        for (auto const& name : detail::quotients_at(p)) {
          auto const mu = minimal_degree(make_group(build_quotient(name, p)), o.mu).degree;
          c.expect(mu == p2 * p, name + " mu " + std::to_string(mu));
        }
        for (auto const& [what, fp] : detail::all_candidates(p)) {
          auto const mu = minimal_degree(make_group(build_candidate(fp)), o.mu).degree;
          if (predicted_exceptional(fp)) {
            c.expect(mu == 2 * p2, what + " mu " + std::to_string(mu));
          } else {
            c.expect(mu >= p2 * p, what + " mu " + std::to_string(mu));
          }
        }
      }
    });
  }

  // 4. No invariant/oracle disagreements at p = 5.
  inline CriterionResult criterion_oracle_agreement(std::optional<int> prime = {}, AcceptanceOptions const& o = {}) {
    return detail::run_criterion(4, "oracle agreement", {5}, prime, [&](auto const& primes, detail::Checker& c) {
      for (int p : primes) {
        ClassifyOptions co;
        co.mode = ClassifyMode::both;
        co.mu = o.mu;
        co.iso = o.iso;
        auto const r = classify(p, co);
        int labels = 0;
        for (auto const& f : r.families) {
          for (auto const& e : f.entries) {
            ++labels;
            c.expect(e.source == "both", f.name + " " + e.label + " source " + e.source);
          }
        }
        c.expect(labels == (p + 9) + 2 * (p + 7), "label count " + std::to_string(labels));
        c.expect(r.disagreements.empty(), std::to_string(r.disagreements.size()) + " disagreements");
        c.expect(r.ok(), "report not ok");
      }
    });
  }

  // 5. The p = 3 and p = 2 special cases.
  inline CriterionResult criterion_small_primes(std::optional<int> prime = {}, AcceptanceOptions const& o = {}) {
    return detail::run_criterion(5, "p = 2 and p = 3", {2, 3}, prime, [&](auto const& primes, detail::Checker& c) {
      for (int p : primes) {
        ClassifyOptions co;
        co.mu = o.mu;
        co.iso = o.iso;
        auto const r = classify(p, co);
        c.expect(r.ok(), "p=" + std::to_string(p) + " report not ok");
        c.expect(r.totals.overall_count == expected_overall_count(p),
                 "p=" + std::to_string(p) + " overall " + std::to_string(r.totals.overall_count));
        if (p == 3) {
          std::map<std::string, std::set<std::string>> types;
          for (auto const& f : r.families) {
            for (auto const& e : f.entries) {
              if (e.exceptional && e.table1_name) {
                types[*e.table1_name].insert(e.quotient_types.begin(), e.quotient_types.end());
              }
            }
          }
          c.expect(types["G4"] == std::set<std::string>{"Q1", "Q81"}, "G4 quotient types");
          c.expect(types["G6"] == std::set<std::string>{"Q1", "Qalpha"}, "G6 quotient types");
        } else {
          auto const mu16 = minimal_degree(make_group(build_quotient("Q16", 2)), o.mu).degree;
          c.expect(mu16 == 16, "mu(Q16) " + std::to_string(mu16));
          auto const* s = r.section("Q16");
          c.expect(s && s->entries.size() == 2, "Q16 section");
          if (s) {
            for (auto const& e : s->entries) {
              c.expect(e.exceptional && e.mu_g && *e.mu_g < 16, e.label + " mu");
            }
          }
          for (auto const& g : {"G1", "G2"}) {
            auto const mu = minimal_degree(make_group(build_named_group(g, 2)), o.mu).degree;
            c.expect(mu < 16, std::string(g) + " mu " + std::to_string(mu));
          }
        }
      }
    });
  }

  // 6. Perfect cross-family matchings with verified isomorphisms.
  inline CriterionResult criterion_pairing(std::optional<int> prime = {}, AcceptanceOptions const& o = {}) {
    return detail::run_criterion(6, "isomorphism pairing", {5, 7}, prime, [&](auto const& primes, detail::Checker& c) {
      for (int p : primes) {
        auto const r = cross_check(p, o.iso);
        std::size_t const want = p == 5 ? 5 : 6;
        std::string const at = "p=" + std::to_string(p) + " ";
        c.expect(r.perfect, at + "matching not perfect");
        c.expect(r.pairs.size() == want, at + std::to_string(r.pairs.size()) + " pairs");
        for (auto const& cp : r.pairs) {
          bool const ok = cp.iso.verified && cp.search.value_or(true) &&
                          is_isomorphism(*make_group(build_candidate(cp.iso.target)),
                                         *make_group(build_candidate(cp.iso.source)), cp.iso.images);
          c.expect(ok, at + cp.alpha_label.to_string() + " not certified");
        }
      }
    });
  }

  // 7. Exhaustive and johnson agree; johnson witnesses have rank(Z) orbits.
  inline CriterionResult criterion_strategies(std::optional<int> prime = {}, AcceptanceOptions const& o = {}) {
    return detail::run_criterion(7, "strategy equivalence", {3, 5}, prime, [&](auto const& primes, detail::Checker& c) {
      for (int p : primes) {
        std::vector<std::pair<std::string, GroupPtr>> groups;
        for (auto const& name : detail::quotients_at(p)) {
          groups.emplace_back(name, make_group(build_quotient(name, p)));
        }
        for (auto const& [what, fp] : detail::all_candidates(p)) {
          groups.emplace_back(what, make_group(build_candidate(fp)));
        }
        if (p == 3) {
          for (auto const& g : named_groups(3)) {
            groups.emplace_back(g, make_group(build_named_group(g, 3)));
          }
        }
        for (auto const& [what, G] : groups) {
          MuOptions ex = o.mu;
          ex.strategy = MuStrategy::exhaustive;
          MuOptions jo = o.mu;
          jo.strategy = MuStrategy::johnson;
          auto const a = minimal_degree(G, ex);
          auto const b = minimal_degree(G, jo);
          std::string const at = "p=" + std::to_string(p) + " " + what;
          c.expect(a.degree == b.degree, at + " " + std::to_string(a.degree) + " vs " + std::to_string(b.degree));
          c.expect(static_cast<int>(b.witness.stabilizers.size()) == center_rank(G), at + " orbit count");
        }
      }
    });
  }

  // 8. Quotients of order at most p^3 are never distinguished.
  inline CriterionResult criterion_small_quotients(std::optional<int> prime = {}, AcceptanceOptions const& o = {}) {
    return detail::run_criterion(8, "small quotients", {3, 5}, prime, [&](auto const& primes, detail::Checker& c) {
      for (int p : primes) {
        std::uint64_t const p3 = static_cast<std::uint64_t>(p) * p * p;
        for (auto const& name : named_groups(p)) {
          auto const G = make_group(build_named_group(name, p));
          auto const mu_g = minimal_degree(G, o.mu).degree;
          for (auto const& ns : normal_subgroups(G, o.mu.lattice)) {
            if (G->order() / ns.subgroup.order() > p3 || ns.subgroup.is_trivial()) {
              continue;
            }
            Quotient q(ns.subgroup);
            auto const mu_q = minimal_degree(q.group(), o.mu).degree;
            c.expect(mu_q <= mu_g, "p=" + std::to_string(p) + " " + name + " quotient by " + describe(ns.subgroup));
          }
        }
      }
    });
  }

  namespace detail {

    inline void structural_checks_at(int p, Checker& c) {
      std::mt19937_64 rng(0xacce97 + static_cast<std::uint64_t>(p));
      std::string const at = "p=" + std::to_string(p) + " ";
      auto const cands = all_candidates(p);

      // consistency of every constructed presentation
      for (auto const& name : quotients_at(p)) {
        auto const rep = make_group(build_quotient(name, p))->check_consistency(20000);
        c.expect(rep.ok, at + name + " " + rep.failure);
      }
      for (auto const& [what, fp] : cands) {
        auto const rep = make_group(build_candidate(fp))->check_consistency(20000);
        c.expect(rep.ok, at + what + " " + rep.failure);
      }
      for (auto const& g : named_groups(p)) {
        auto const rep = make_group(build_named_group(g, p))->check_consistency(20000);
        c.expect(rep.ok, at + g + " " + rep.failure);
      }

      // associativity sampling, 10^6 triples
      {
        auto const G = make_group(build_candidate(cands.back().second));
        std::uniform_int_distribution<Elem> pick(0, G->order() - 1);
        bool ok = true;
        for (int t = 0; t < 1'000'000 && ok; ++t) {
          Elem const a = pick(rng), b = pick(rng), d = pick(rng);
          ok = G->mul(G->mul(a, b), d) == G->mul(a, G->mul(b, d));
        }
        c.expect(ok, at + "associativity");
      }

      // g -> g^p is an endomorphism (p > 3)
      if (p > 3) {
        for (auto const& [what, fp] : cands) {
          auto const G = make_group(build_candidate(fp));
          std::uniform_int_distribution<Elem> pick(0, G->order() - 1);
          int const pairs = p == 5 ? 100'000 : 20'000;
          bool ok = true;
          for (int t = 0; t < pairs && ok; ++t) {
            Elem const a = pick(rng), b = pick(rng);
            ok = G->pth_power(G->mul(a, b)) == G->mul(G->pth_power(a), G->pth_power(b));
          }
          c.expect(ok, at + what + " p-power map");
          c.expect(pth_power_image(G).is_power_set, at + what + " power set");
        }
      }

      // centre, derived subgroup and p-th powers of the family Q candidates
      std::size_t const pp = static_cast<std::size_t>(p);
      for (auto const& lab : table_labels(Family::Q, p)) {
        auto const fp = label_to_params(lab, p);
        auto const G = make_group(build_candidate(fp));
        auto const& v = fp.params;
        Elem const xp = G->gen(qbasis::u), n = G->gen(qbasis::n), x = G->gen(qbasis::x);
        auto const Z = center(G);
        std::string const w = at + "Q " + lab.to_string();
        if (v[3] != 0) {
          c.expect(Z.order() == pp * pp && Z.contains(xp) && Z.contains(n) && abelian_invariants(Z) == std::vector<int>{1, 1}, w + " centre");
        } else {
          c.expect(Z.order() == pp * pp * pp && Z.contains(x) && Z.contains(n) &&
                       abelian_invariants(Z) == std::vector<int>{2, 1},
                   w + " centre");
        }
        auto const P = pth_power_image(G).subgroup;
        if (v[0] == 0 && v[1] == 0) {
          c.expect(P.order() == pp && P.contains(xp), w + " powers");
        } else {
          c.expect(P.order() == pp * pp && P.contains(xp) && P.contains(n), w + " powers");
        }
      }
      auto const DQ = derived_subgroup(make_group(build_quotient("Q", p)));
      c.expect(DQ.order() == pp, at + "derived subgroup of Q");
      if (p > 3) {
        for (int zeta : {1, static_cast<int>(least_nonresidue(p))}) {
          for (auto const& lab : table_labels(Family::Qzeta, p)) {
            auto const fp = label_to_params(lab, p, zeta);
            if (fp.params[2] != 0) {
              continue;
            }
            auto const G = make_group(build_candidate(fp));
            int const k = fp.params[1];
            Elem const y = G->gen(zbasis::y);
            Elem const t = G->mul(G->pow(G->gen(zbasis::u), zeta), G->pow(G->gen(zbasis::n), k));
            auto const D = derived_subgroup(G);
            c.expect(D.order() == pp * pp && D.contains(y) && D.contains(t),
                     at + "Qzeta:" + std::to_string(zeta) + " " + lab.to_string() + " derived");
          }
        }
      }

      // canonical labels are invariant under random generator maps
      if (p > 3) {
        std::uniform_int_distribution<int> coord(0, p - 1);
        std::uniform_int_distribution<int> unit(1, p - 1);
        int const alpha = static_cast<int>(least_nonresidue(p));
        int tuples = 0;
        bool ok = true;
        while (tuples < 200) {
          FamilyParams fp = tuples % 2 == 0 ? make_q_params(p, coord(rng), coord(rng), coord(rng), coord(rng))
                                            : make_qzeta_params(p, tuples % 4 == 1 ? 1 : alpha, coord(rng),
                                                                coord(rng), coord(rng));
          ++tuples;
          auto const base = canonical_params(fp).label;
          std::string const ids = fp.family == Family::Q ? "ABCDE" : "AB";
          for (int step = 0; step < 4; ++step) {
            GeneratorMap gm{ids[static_cast<std::size_t>(std::uniform_int_distribution<int>(
                                0, static_cast<int>(ids.size()) - 1)(rng))],
                            unit(rng)};
            try {
              check_map(fp, gm);
            } catch (precondition_error const&) {
              continue;
            }
            fp = apply_generator_map(fp, gm);
            ok = ok && canonical_params(fp).label == base;
          }
        }
        c.expect(ok, at + "label orbit invariance");
      }

      // fingerprints separate P8(1)/P8(alpha) and the P9(lambda)
      if (p > 3) {
        auto fp_of = [&](CanonicalLabel const& lab) {
          return fingerprint(make_group(build_candidate(label_to_params(lab, p))));
        };
        int const alpha = static_cast<int>(least_nonresidue(p));
        c.expect(fp_of({Family::Q, 8, 1}) != fp_of({Family::Q, 8, alpha}), at + "P8 fingerprints");
        std::vector<Fingerprint> p9;
        for (int l = 1; l < p; ++l) {
          p9.push_back(fp_of({Family::Q, 9, l}));
        }
        bool distinct = true;
        for (std::size_t a = 0; a < p9.size(); ++a) {
          for (std::size_t b = a + 1; b < p9.size(); ++b) {
            distinct = distinct && p9[a] != p9[b];
          }
        }
        c.expect(distinct, at + "P9 fingerprints");
      }
    }

  }  // namespace detail

  // 9. Structural property suite.
  inline CriterionResult criterion_structure(std::optional<int> prime = {}, AcceptanceOptions const& = {}) {
    return detail::run_criterion(9, "structural properties", {3, 5, 7}, prime,
                                 [&](auto const& primes, detail::Checker& c) {
                                   for (int p : primes) {
                                     detail::structural_checks_at(p, c);
                                   }
                                 });
  }

  // The whole suite, or the part of it that concerns one prime.
  inline std::vector<CriterionResult> run_acceptance(std::optional<int> prime = {}, AcceptanceOptions const& o = {}) {
    return {criterion_counts(prime, o),       criterion_family_counts(prime, o), criterion_mu_ground_truth(prime, o),
            criterion_oracle_agreement(prime, o), criterion_small_primes(prime, o), criterion_pairing(prime, o),
            criterion_strategies(prime, o),   criterion_small_quotients(prime, o), criterion_structure(prime, o)};
  }

  inline std::string criterion_line(CriterionResult const& r) {
    std::string s = "criterion " + std::to_string(r.id) + " ";
    s += !r.ran ? "SKIP" : r.passed ? "PASS" : "FAIL";
    s += " " + r.name;
    if (r.ran) {
      s += " [p=" + detail::join_ints(r.primes) + "]";
      char buf[32];
      std::snprintf(buf, sizeof buf, " %.2fs", r.seconds);
      s += buf;
    }
    return s + " " + r.detail;
  }

}  // namespace pgroup
