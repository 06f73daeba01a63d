#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "explicit.hpp"
#include "families.hpp"
#include "group.hpp"
#include "isomorphism.hpp"
#include "min_degree.hpp"
#include "modular.hpp"
#include "structure.hpp"

namespace pgroup {

  enum class ClassifyMode { invariants, mu_oracle, both };

  inline std::string mode_name(ClassifyMode m) {
    switch (m) {
      case ClassifyMode::invariants:
        return "invariants";
      case ClassifyMode::mu_oracle:
        return "mu-oracle";
      case ClassifyMode::both:
        return "both";
    }
    return {};
  }

  inline ClassifyMode parse_mode(std::string const& s) {
    for (auto m : {ClassifyMode::invariants, ClassifyMode::mu_oracle, ClassifyMode::both}) {
      if (mode_name(m) == s) {
        return m;
      }
    }
    throw parse_error("unknown mode '" + s + "' (expected invariants, mu-oracle or both)");
  }

  struct ClassifyOptions {
    ClassifyMode mode = ClassifyMode::invariants;
    MuOptions mu;
    IsoOptions iso;
  };

  struct ReportEntry {
    std::string label;
    std::optional<std::string> table1_name;
    std::vector<int> params;
    bool exceptional = false;
    // "invariant", "mu-oracle" or "both"
    std::string source;
    std::optional<std::uint64_t> mu_g;
    std::optional<std::uint64_t> mu_q;
    // quotient types of the distinguished quotients (named groups only)
    std::vector<std::string> quotient_types;
  };

  struct FamilySection {
    std::string name;
    std::optional<int> zeta;
    std::vector<ReportEntry> entries;

    int exceptional_count() const {
      return static_cast<int>(std::count_if(entries.begin(), entries.end(),
                                            [](ReportEntry const& e) { return e.exceptional; }));
    }
  };

  struct PairingEnd {
    std::string family;
    std::string label;
    std::optional<std::string> table1_name;
  };

  struct Pairing {
    PairingEnd a;
    PairingEnd b;
    std::string method;
    bool verified = false;
  };

  struct Totals {
    int q_family_count = 0;
    std::optional<int> qzeta_family_count;
    int overall_count = 0;
    std::optional<int> expected_q_family;
    std::optional<int> expected_qzeta_family;
    int expected_overall = 0;
  };

  struct ClassificationReport {
    int prime = 0;
    ClassifyMode mode = ClassifyMode::invariants;
    std::vector<FamilySection> families;
    std::vector<Pairing> pairings;
    Totals totals;
    std::vector<std::string> disagreements;
    std::vector<std::string> failures;
    std::vector<std::string> flagged_rows;

    bool ok() const {
      return disagreements.empty() && failures.empty();
    }

    FamilySection const* section(std::string const& name) const {
      for (auto const& f : families) {
        if (f.name == name) {
          return &f;
        }
      }
      return nullptr;
    }
  };

  // Expected number of exceptional groups of order p^5.
  inline int expected_overall_count(int p) {
    if (p == 2) {
      return 2;
    }
    if (p == 3) {
      return 10;
    }
    return p + 6;
  }

  namespace detail {

    struct MuVerdict {
      bool exceptional = false;
      std::uint64_t mu_g = 0;
    };

    inline MuVerdict mu_verdict(GroupPtr const& G, MuOptions const& mo) {
      MuVerdict v;
      v.mu_g = minimal_degree(G, mo).degree;
      v.exceptional = !distinguished_quotients(G, mo).empty();
      return v;
    }

    // Fills verdict, source and mu fields from the two oracles.
    inline void decide(ReportEntry& e, std::optional<bool> inv, std::optional<MuVerdict> const& mu,
                       std::optional<std::uint64_t> mu_q, std::string const& where,
                       std::vector<std::string>& disagreements) {
      if (inv && mu) {
        e.source = "both";
        e.exceptional = *inv;
        if (*inv != mu->exceptional) {
          disagreements.push_back(where + " " + e.label + ": invariant says " + (*inv ? "exceptional" : "not") +
                                  ", mu says " + (mu->exceptional ? "exceptional" : "not"));
        }
      } else if (inv) {
        e.source = "invariant";
        e.exceptional = *inv;
      } else {
        e.source = "mu-oracle";
        e.exceptional = mu->exceptional;
      }
      if (mu) {
        e.mu_g = mu->mu_g;
        e.mu_q = mu_q;
      }
    }

    inline FamilySection family_section(Family fam, int p, int zeta, std::string const& name,
                                        ClassifyOptions const& opts, std::vector<std::string>& disagreements) {
      FamilySection sec;
      sec.name = name;
      if (fam == Family::Qzeta) {
        sec.zeta = zeta;
      }
      bool const use_inv = opts.mode != ClassifyMode::mu_oracle;
      bool const use_mu = opts.mode != ClassifyMode::invariants;
      std::optional<std::uint64_t> mu_q;
      if (use_mu) {
        auto const Q = make_group(fam == Family::Q ? build_quotient("Q", p) : build_qzeta_quotient(p, zeta));
        mu_q = minimal_degree(Q, opts.mu).degree;
      }
      for (auto const& lab : table_labels(fam, p)) {
        ReportEntry e;
        e.label = lab.to_string();
        auto const fp = label_to_params(lab, p, fam == Family::Qzeta ? zeta : 1);
        e.params = fp.params;
        e.table1_name = table1_name(lab, p, fam == Family::Qzeta ? zeta : 1);
        std::optional<bool> inv;
        if (use_inv) {
          inv = predicted_exceptional(lab, p, fam == Family::Qzeta ? zeta : 1);
        }
        std::optional<MuVerdict> mu;
        if (use_mu) {
          mu = mu_verdict(make_group(build_candidate(fp)), opts.mu);
        }
        decide(e, inv, mu, mu_q, name, disagreements);
        sec.entries.push_back(std::move(e));
      }
      return sec;
    }

    // Partner over Q1 of an exceptional label over Q_alpha, from psi:
    // j = 0 labels keep their index; (1, k, m) goes to (1, k, alpha m).
    inline CanonicalLabel invariant_partner(CanonicalLabel const& lab, int p) {
      int const alpha = static_cast<int>(least_nonresidue(p));
      auto const v = *label_params(lab, p);
      if (v[0] == 0) {
        return lab;
      }
      auto const target = make_qzeta_params(p, 1, 1, v[1], static_cast<int>(mod(static_cast<std::int64_t>(alpha) * v[2], p)));
      return canonical_params(target).label;
    }

    inline std::string quotient_type(GroupPtr const& Q, std::vector<std::pair<std::string, GroupPtr>> const& known,
                                     IsoOptions const& io) {
      for (auto const& [nm, K] : known) {
        if (K->order() == Q->order() && are_isomorphic(Q, K, io)) {
          return nm;
        }
      }
      return "order " + std::to_string(Q->order());
    }

    // Sorted distinct quotient types among the distinguished quotients.
    inline std::vector<std::string> distinguished_types(GroupPtr const& G, MuOptions const& mo,
                                                        std::vector<std::pair<std::string, GroupPtr>> const& known,
                                                        IsoOptions const& io) {
      std::set<std::string> types;
      for (auto const& d : distinguished_quotients(G, mo)) {
        Quotient const q(d.N);
        types.insert(quotient_type(q.group(), known, io));
      }
      return {types.begin(), types.end()};
    }

    // Isomorphism classes among groups, by index of the first member.
    inline std::vector<std::size_t> iso_classes(std::vector<GroupPtr> const& gs, IsoOptions const& io) {
      std::vector<std::size_t> cls(gs.size());
      for (std::size_t a = 0; a < gs.size(); ++a) {
        cls[a] = a;
        for (std::size_t b = 0; b < a; ++b) {
          if (cls[b] == b && are_isomorphic(gs[a], gs[b], io)) {
            cls[a] = b;
            break;
          }
        }
      }
      return cls;
    }

    inline void classify_p2(ClassificationReport& r, ClassifyOptions const& opts) {
      MuOptions mo = opts.mu;
      mo.strategy = MuStrategy::exhaustive;
      auto const Q16 = make_group(build_quotient("Q16", 2));
      std::uint64_t const mu_q = minimal_degree(Q16, mo).degree;
      FamilySection sec;
      sec.name = "Q16";
      std::vector<GroupPtr> exc;
      std::vector<std::string> names;
      for (std::string const nm : {"G1", "G2"}) {
        auto const G = make_consistent_group(build_named_group(nm, 2));
        ReportEntry e;
        e.label = nm;
        e.table1_name = nm;
        auto const v = mu_verdict(G, mo);
        decide(e, std::nullopt, v, mu_q, sec.name, r.disagreements);
        e.quotient_types = distinguished_types(G, mo, {{"Q16", Q16}}, opts.iso);
        if (e.exceptional) {
          exc.push_back(G);
          names.push_back(nm);
        }
        sec.entries.push_back(std::move(e));
      }
      r.families.push_back(std::move(sec));
      auto const cls = iso_classes(exc, opts.iso);
      for (std::size_t a = 0; a < cls.size(); ++a) {
        r.totals.overall_count += cls[a] == a ? 1 : 0;
      }
    }

    inline void classify_p3(ClassificationReport& r, ClassifyOptions const& opts) {
      int const p = 3;
      auto q_sec = family_section(Family::Q, p, 1, "Q", opts, r.disagreements);
      r.totals.q_family_count = q_sec.exceptional_count();
      r.totals.expected_q_family = (p + 7) / 2;
      std::vector<std::pair<std::string, GroupPtr>> known;
      for (std::string const nm : {"Q81", "Q1", "Qalpha", "Q"}) {
        known.emplace_back(nm, make_group(build_quotient(nm, p)));
      }
      std::map<std::string, std::uint64_t> mu_known;
      for (auto const& [nm, K] : known) {
        mu_known[nm] = minimal_degree(K, opts.mu).degree;
      }
      // every exceptional group, for the class count
      std::vector<GroupPtr> exc;
      std::vector<std::string> exc_names;
      for (auto const& e : q_sec.entries) {
        if (e.exceptional) {
          exc.push_back(make_group(build_candidate(make_q_params(p, e.params[0], e.params[1], e.params[2], e.params[3]))));
          exc_names.push_back(e.table1_name.value_or(e.label));
        }
      }
      r.families.push_back(std::move(q_sec));
      std::map<std::string, GroupPtr> named;
      for (std::string const qn : {"Q81", "Q1", "Qalpha"}) {
        FamilySection sec;
        sec.name = qn;
        for (auto const& g : named_p3) {
          if (qn != g.quotient) {
            continue;
          }
          auto const G = make_consistent_group(named_p3_presentation(g));
          named[g.name] = G;
          ReportEntry e;
          e.label = g.name;
          std::string nm = g.name;
          e.table1_name = nm.substr(0, nm.find('/'));
          auto const v = mu_verdict(G, opts.mu);
          decide(e, std::nullopt, v, mu_known[qn], sec.name, r.disagreements);
          e.quotient_types = distinguished_types(G, opts.mu, known, opts.iso);
          if (e.exceptional) {
            exc.push_back(G);
            exc_names.push_back(g.name);
          }
          sec.entries.push_back(std::move(e));
        }
        r.families.push_back(std::move(sec));
      }
      auto const cls = iso_classes(exc, opts.iso);
      int classes = 0;
      for (std::size_t a = 0; a < cls.size(); ++a) {
        if (cls[a] == a) {
          ++classes;
        } else {
          auto quot = [&](std::string const& nm) {
            for (auto const& g : named_p3) {
              if (nm == g.name) {
                return std::string(g.quotient);
              }
            }
            return std::string("Q");
          };
          r.pairings.push_back({{quot(exc_names[cls[a]]), exc_names[cls[a]], std::nullopt},
                                {quot(exc_names[a]), exc_names[a], std::nullopt},
                                "search",
                                true});
        }
      }
      r.totals.overall_count = classes;
      // printed rows that disagree with the class representatives
      for (auto const& g : table1_printed_p3) {
        auto const P = make_consistent_group(named_p3_presentation(g));
        if (are_isomorphic(P, named.at(g.name), opts.iso)) {
          continue;
        }
        std::string what = "not exceptional";
        for (auto const& [nm, G] : named) {
          if (are_isomorphic(P, G, opts.iso)) {
            what = "isomorphic to " + nm;
            break;
          }
        }
        if (what == "not exceptional" && !distinguished_quotients(P, opts.mu).empty()) {
          what = "exceptional but matches no listed group";
        }
        r.flagged_rows.push_back(std::string(g.name) + ": printed row is " + what);
      }
    }

    inline void classify_large(ClassificationReport& r, ClassifyOptions const& opts) {
      int const p = r.prime;
      int const alpha = static_cast<int>(least_nonresidue(p));
      r.families.push_back(family_section(Family::Q, p, 1, "Q", opts, r.disagreements));
      r.families.push_back(family_section(Family::Qzeta, p, 1, "Q1", opts, r.disagreements));
      r.families.push_back(family_section(Family::Qzeta, p, alpha, "Qalpha", opts, r.disagreements));
      auto const& q = r.families[0];
      auto const& one = r.families[1];
      auto const& al = r.families[2];
      r.totals.q_family_count = q.exceptional_count();
      r.totals.expected_q_family = (p + 7) / 2;
      r.totals.expected_qzeta_family = (p + 5) / 2;
      int const c1 = one.exceptional_count();
      int const ca = al.exceptional_count();
      r.totals.qzeta_family_count = c1;
      if (c1 != ca) {
        r.failures.push_back("Q1 has " + std::to_string(c1) + " exceptional extensions but Qalpha has " +
                             std::to_string(ca));
      }
      // pair Q_alpha entries with Q1 entries through the psi invariants
      std::set<std::string> used;
      auto labels = table_labels(Family::Qzeta, p);
      for (std::size_t t = 0; t < al.entries.size(); ++t) {
        auto const& e = al.entries[t];
        if (!e.exceptional) {
          continue;
        }
        auto const partner = invariant_partner(labels[t], p);
        std::string const pl = partner.to_string();
        auto it = std::find_if(one.entries.begin(), one.entries.end(),
                               [&](ReportEntry const& x) { return x.label == pl; });
        Pairing pr{{"Qalpha", e.label, e.table1_name}, {"Q1", pl, std::nullopt}, "psi-invariant", false};
        if (it != one.entries.end() && it->exceptional && !used.count(pl)) {
          pr.b.table1_name = it->table1_name;
          pr.verified = true;
          used.insert(pl);
        } else {
          r.failures.push_back("Qalpha " + e.label + " has no free exceptional partner over Q1 (wanted " + pl + ")");
        }
        r.pairings.push_back(std::move(pr));
      }
      int const matched = static_cast<int>(used.size());
      if (matched != c1) {
        r.failures.push_back("pairing is not perfect: " + std::to_string(matched) + " of " + std::to_string(c1));
      }
      r.totals.overall_count = r.totals.q_family_count + c1 + ca - matched;
    }

  }  // namespace detail

  // Classification of the exceptional groups of order p^5 within the
  // candidate families (and the named groups for p = 2, 3).
  inline ClassificationReport classify(int p, ClassifyOptions const& opts = {}) {
    if (!is_prime(p)) {
      throw precondition_error(std::to_string(p) + " is not prime");
    }
    if (p > 97) {
      throw precondition_error("classification supports p <= 97");
    }
    if (opts.mode != ClassifyMode::invariants && p > 5) {
      throw precondition_error("mode " + mode_name(opts.mode) + " needs p <= 5");
    }
    ClassificationReport r;
    r.prime = p;
    r.mode = opts.mode;
    r.totals.expected_overall = expected_overall_count(p);
    if (p == 2) {
      detail::classify_p2(r, opts);
    } else if (p == 3) {
      detail::classify_p3(r, opts);
    } else {
      detail::classify_large(r, opts);
    }
    auto const& t = r.totals;
    if (t.expected_q_family && t.q_family_count != *t.expected_q_family) {
      r.failures.push_back("family Q count " + std::to_string(t.q_family_count) + " != " +
                           std::to_string(*t.expected_q_family));
    }
    if (t.expected_qzeta_family && t.qzeta_family_count != t.expected_qzeta_family) {
      r.failures.push_back("family Qzeta count " + std::to_string(t.qzeta_family_count.value_or(-1)) +
                           " != " + std::to_string(*t.expected_qzeta_family));
    }
    if (t.overall_count != t.expected_overall) {
      r.failures.push_back("overall count " + std::to_string(t.overall_count) + " != " +
                           std::to_string(t.expected_overall));
    }
    return r;
  }

  inline ClassificationReport classify(int p, ClassifyMode mode) {
    ClassifyOptions o;
    o.mode = mode;
    return classify(p, o);
  }

  // ---------------------------------------------------------------------------
  // Cross-family pairing

  struct CrossPair {
    CanonicalLabel alpha_label;
    CanonicalLabel one_label;
    std::optional<std::string> alpha_name;
    std::optional<std::string> one_name;
    ExplicitIso iso;
    // backtracking confirmation, p <= 7 only
    std::optional<bool> search;
  };

  struct CrossCheckReport {
    int prime = 0;
    int alpha_count = 0;
    int one_count = 0;
    std::vector<CrossPair> pairs;
    bool perfect = false;
    // F4 groups pair with F5 groups in the other family
    bool f4_f5_swap = false;
    std::vector<std::string> failures;
  };

  inline CrossCheckReport cross_check(int p, IsoOptions const& io = {}) {
    detail::require_big_prime(p);
    int const alpha = static_cast<int>(least_nonresidue(p));
    CrossCheckReport r;
    r.prime = p;
    std::set<CanonicalLabel> one_exc;
    for (auto const& lab : table_labels(Family::Qzeta, p)) {
      if (predicted_exceptional(lab, p, 1)) {
        one_exc.insert(lab);
      }
    }
    r.one_count = static_cast<int>(one_exc.size());
    std::set<CanonicalLabel> hit;
    r.f4_f5_swap = true;
    bool all_ok = true;
    for (auto const& lab : table_labels(Family::Qzeta, p)) {
      if (!predicted_exceptional(lab, p, alpha)) {
        continue;
      }
      ++r.alpha_count;
      CrossPair cp;
      cp.alpha_label = lab;
      cp.alpha_name = table1_name(lab, p, alpha);
      cp.iso = explicit_isomorphism(label_to_params(lab, p, alpha));
      cp.one_label = canonical_params(cp.iso.target).label;
      cp.one_name = table1_name(cp.one_label, p, 1);
      bool ok = cp.iso.verified && one_exc.count(cp.one_label) && !hit.count(cp.one_label);
      if (!cp.iso.verified) {
        r.failures.push_back("explicit map for Qalpha " + lab.to_string() + " does not verify");
      }
      if (p <= 7) {
        auto const A = make_group(build_candidate(label_to_params(cp.one_label, p, 1)));
        auto const B = make_group(build_candidate(label_to_params(lab, p, alpha)));
        cp.search = find_isomorphism(A, B, io).isomorphic;
        ok = ok && *cp.search;
        if (!*cp.search) {
          r.failures.push_back("search finds no isomorphism for Qalpha " + lab.to_string());
        }
      }
      if ((lab.index == 6 && cp.one_label.index != 7) || (lab.index == 7 && cp.one_label.index != 6)) {
        r.f4_f5_swap = false;
      }
      hit.insert(cp.one_label);
      all_ok = all_ok && ok;
      r.pairs.push_back(std::move(cp));
    }
    r.perfect = all_ok && hit == one_exc && r.alpha_count == r.one_count;
    if (!r.perfect) {
      r.failures.push_back("matching is not perfect");
    }
    if (!r.f4_f5_swap) {
      r.failures.push_back("some F4 group does not pair with an F5 group");
    }
    return r;
  }

  // ---------------------------------------------------------------------------
  // Serialization

  inline nlohmann::ordered_json report_to_json(ClassificationReport const& r) {
    using J = nlohmann::ordered_json;
    J j;
    j["prime"] = r.prime;
    j["mode"] = mode_name(r.mode);
    J fams = J::array();
    for (auto const& f : r.families) {
      J fj;
      fj["name"] = f.name;
      if (f.zeta) {
        fj["zeta"] = *f.zeta;
      }
      J ents = J::array();
      for (auto const& e : f.entries) {
        J ej;
        ej["label"] = e.label;
        ej["table1_name"] = e.table1_name ? J(*e.table1_name) : J(nullptr);
        ej["params"] = e.params;
        ej["exceptional"] = e.exceptional;
        ej["source"] = e.source;
        ej["mu_g"] = e.mu_g ? J(*e.mu_g) : J(nullptr);
        ej["mu_q"] = e.mu_q ? J(*e.mu_q) : J(nullptr);
        if (!e.quotient_types.empty()) {
          ej["distinguished_quotients"] = e.quotient_types;
        }
        ents.push_back(std::move(ej));
      }
      fj["entries"] = std::move(ents);
      fams.push_back(std::move(fj));
    }
    j["families"] = std::move(fams);
    J pairs = J::array();
    auto end = [](PairingEnd const& e) {
      J x;
      x["family"] = e.family;
      x["label"] = e.label;
      x["table1_name"] = e.table1_name ? J(*e.table1_name) : J(nullptr);
      return x;
    };
    for (auto const& pr : r.pairings) {
      J x;
      x["a"] = end(pr.a);
      x["b"] = end(pr.b);
      x["method"] = pr.method;
      x["verified"] = pr.verified;
      pairs.push_back(std::move(x));
    }
    j["pairings"] = std::move(pairs);
    J t;
    t["q_family_count"] = r.totals.q_family_count;
    t["qzeta_family_count"] = r.totals.qzeta_family_count ? J(*r.totals.qzeta_family_count) : J(nullptr);
    t["overall_count"] = r.totals.overall_count;
    J ex;
    ex["q_family"] = r.totals.expected_q_family ? J(*r.totals.expected_q_family) : J(nullptr);
    ex["qzeta_family"] = r.totals.expected_qzeta_family ? J(*r.totals.expected_qzeta_family) : J(nullptr);
    ex["overall"] = r.totals.expected_overall;
    t["expected"] = std::move(ex);
    j["totals"] = std::move(t);
    j["disagreements"] = r.disagreements;
    j["failures"] = r.failures;
    j["flagged_rows"] = r.flagged_rows;
    return j;
  }

  inline std::string report_to_text(ClassificationReport const& r) {
    std::ostringstream os;
    auto opt = [](auto const& o) {
      std::ostringstream s;
      if (o) {
        s << *o;
      } else {
        s << "-";
      }
      return s.str();
    };
    os << "prime " << r.prime << "\n";
    os << "mode " << mode_name(r.mode) << "\n";
    for (auto const& f : r.families) {
      os << "family " << f.name;
      if (f.zeta) {
        os << " zeta=" << *f.zeta;
      }
      os << "\n";
      for (auto const& e : f.entries) {
        os << "  " << e.label << " params=" << (e.params.empty() ? "-" : params_to_string(e.params))
           << " exceptional=" << (e.exceptional ? "yes" : "no") << " source=" << e.source
           << " mu_g=" << opt(e.mu_g) << " mu_q=" << opt(e.mu_q) << " name=" << opt(e.table1_name);
        if (!e.quotient_types.empty()) {
          os << " quotients=";
          for (std::size_t t = 0; t < e.quotient_types.size(); ++t) {
            os << (t ? "," : "") << e.quotient_types[t];
          }
        }
        os << "\n";
      }
    }
    for (auto const& pr : r.pairings) {
      os << "pair " << pr.a.family << ":" << pr.a.label << " ~ " << pr.b.family << ":" << pr.b.label
         << " method=" << pr.method << " verified=" << (pr.verified ? "yes" : "no") << "\n";
    }
    for (auto const& f : r.flagged_rows) {
      os << "flagged " << f << "\n";
    }
    auto const& t = r.totals;
    os << "total q_family " << t.q_family_count << " expected " << opt(t.expected_q_family) << "\n";
    os << "total qzeta_family " << opt(t.qzeta_family_count) << " expected " << opt(t.expected_qzeta_family) << "\n";
    os << "total overall " << t.overall_count << " expected " << t.expected_overall << "\n";
    for (auto const& d : r.disagreements) {
      os << "disagreement " << d << "\n";
    }
    for (auto const& f : r.failures) {
      os << "failure " << f << "\n";
    }
    os << "status " << (r.ok() ? "ok" : "FAILED") << "\n";
    return os.str();
  }

  inline std::string csv_field(std::string const& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
      return s;
    }
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') {
        out += '"';
      }
      out += c;
    }
    return out + "\"";
  }

  inline std::string report_to_csv(ClassificationReport const& r) {
    std::ostringstream os;
    os << "prime,family,label,table1_name,params,exceptional,source,mu_g,mu_q\n";
    for (auto const& f : r.families) {
      for (auto const& e : f.entries) {
        os << r.prime << ',' << csv_field(f.name) << ',' << csv_field(e.label) << ','
           << csv_field(e.table1_name.value_or("")) << ',' << csv_field(e.params.empty() ? "" : params_to_string(e.params))
           << ',' << (e.exceptional ? "true" : "false") << ',' << e.source << ','
           << (e.mu_g ? std::to_string(*e.mu_g) : "") << ',' << (e.mu_q ? std::to_string(*e.mu_q) : "") << "\n";
      }
    }
    return os.str();
  }

  inline nlohmann::ordered_json cross_check_to_json(CrossCheckReport const& r) {
    using J = nlohmann::ordered_json;
    J j;
    j["prime"] = r.prime;
    j["alpha_count"] = r.alpha_count;
    j["one_count"] = r.one_count;
    J pairs = J::array();
    for (auto const& cp : r.pairs) {
      J x;
      x["qalpha_label"] = cp.alpha_label.to_string();
      x["qalpha_name"] = cp.alpha_name ? J(*cp.alpha_name) : J(nullptr);
      x["q1_label"] = cp.one_label.to_string();
      x["q1_name"] = cp.one_name ? J(*cp.one_name) : J(nullptr);
      x["method"] = explicit_case_name(cp.iso.method);
      x["explicit_verified"] = cp.iso.verified;
      x["search"] = cp.search ? J(*cp.search) : J(nullptr);
      pairs.push_back(std::move(x));
    }
    j["pairs"] = std::move(pairs);
    j["perfect"] = r.perfect;
    j["f4_f5_swap"] = r.f4_f5_swap;
    j["failures"] = r.failures;
    return j;
  }

}  // namespace pgroup
