#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "acceptance.hpp"
#include "classifier.hpp"
#include "errors.hpp"
#include "families.hpp"
#include "isomorphism.hpp"
#include "lattice.hpp"
#include "min_degree.hpp"

namespace pgroup::cli {

  enum ExitCode : int { ok = 0, verification_failed = 1, usage = 2, over_budget = 3 };

  struct RunConfig {
    std::string command;
    int prime = 0;
    std::vector<std::string> specs;
    std::string mode = "invariants";
    std::string strategy = "johnson";
    std::string format = "text";
    std::string cache_dir;
    unsigned workers = 1;
    std::uint64_t budget = IsoOptions{}.budget;
  };

  namespace detail {

    using json = nlohmann::ordered_json;

    inline GroupPtr load(GroupSpec const& spec) {
      if (spec.kind == GroupSpec::Kind::file) {
        return make_consistent_group(spec.presentation());
      }
      return make_group(spec.presentation());
    }

    inline MuOptions mu_options(RunConfig const& c) {
      MuOptions o;
      o.strategy = parse_strategy(c.strategy);
      o.lattice.workers = c.workers;
      o.lattice.cache_dir = resolve_cache_dir(c.cache_dir);
      return o;
    }

    inline IsoOptions iso_options(RunConfig const& c) {
      IsoOptions o;
      o.workers = c.workers;
      o.budget = c.budget;
      return o;
    }

    inline json exponents_json(PcGroup const& G, Elem e) {
      return G.exponents(e);
    }

    inline int cmd_mu(RunConfig const& c, std::ostream& out) {
      auto const spec = parse_group_spec(c.specs.at(0));
      auto const G = load(spec);
      auto const r = minimal_degree(G, mu_options(c));
      if (c.format == "json") {
        json j;
        j["group"] = spec.to_string();
        j["order"] = G->order();
        j["strategy"] = c.strategy;
        j["degree"] = r.degree;
        j["orbits"] = json::array();
        for (auto const& H : r.witness.stabilizers) {
          json gens = json::array();
          for (Elem g : H.generators()) {
            gens.push_back(exponents_json(*G, g));
          }
          j["orbits"].push_back({{"index", index_of(H)}, {"stabilizer_order", H.order()}, {"generators", gens}});
        }
        out << j.dump(2) << "\n";
      } else if (c.format == "csv") {
        out << "group,order,strategy,degree,orbit_sizes\n";
        std::string sizes;
        for (auto const& H : r.witness.stabilizers) {
          sizes += (sizes.empty() ? "" : " ") + std::to_string(index_of(H));
        }
        out << csv_field(spec.to_string()) << ',' << G->order() << ',' << c.strategy << ',' << r.degree << ','
            << sizes << "\n";
      } else {
        out << "group " << spec.to_string() << "\n";
        out << "order " << G->order() << "\n";
        out << "strategy " << c.strategy << "\n";
        out << "degree " << r.degree << "\n";
        for (auto const& H : r.witness.stabilizers) {
          out << "orbit " << index_of(H) << " stabilizer " << describe(H) << "\n";
        }
      }
      return ok;
    }

    inline int cmd_classify(RunConfig const& c, std::ostream& out) {
      ClassifyOptions o;
      o.mode = parse_mode(c.mode);
      o.mu = mu_options(c);
      o.iso = iso_options(c);
      auto const r = classify(c.prime, o);
      if (c.format == "json") {
        out << report_to_json(r).dump(2) << "\n";
      } else if (c.format == "csv") {
        out << report_to_csv(r);
      } else {
        out << report_to_text(r);
      }
      return r.ok() ? ok : verification_failed;
    }

    inline int cmd_canon(RunConfig const& c, std::ostream& out) {
      auto const spec = parse_group_spec(c.specs.at(0));
      if (spec.kind != GroupSpec::Kind::candidate) {
        throw parse_error("canon expects a parameter spec such as params:Q@5:(2,3,1,4)");
      }
      auto const fp = spec.family_params();
      auto const cf = canonical_params(fp);
      auto const name = table1_name(cf.label, fp.prime, fp.family == Family::Qzeta ? fp.zeta : 1);
      bool const exc = predicted_exceptional(cf.params);
      if (c.format == "json") {
        json j;
        j["input"] = spec.to_string();
        j["label"] = cf.label.to_string();
        j["params"] = cf.params.params;
        j["trail"] = cf.trail_string();
        j["table1_name"] = name ? json(*name) : json(nullptr);
        j["exceptional"] = exc;
        out << j.dump(2) << "\n";
      } else if (c.format == "csv") {
        out << "input,label,params,trail,table1_name,exceptional\n";
        out << csv_field(spec.to_string()) << ',' << csv_field(cf.label.to_string()) << ','
            << csv_field(params_to_string(cf.params.params)) << ',' << csv_field(cf.trail_string()) << ','
            << name.value_or("") << ',' << (exc ? "yes" : "no") << "\n";
      } else {
        out << "input " << spec.to_string() << "\n";
        out << "label " << cf.label.to_string() << "\n";
        out << "params " << params_to_string(cf.params.params) << "\n";
        out << "trail " << (cf.trail.empty() ? "-" : cf.trail_string()) << "\n";
        out << "name " << name.value_or("-") << "\n";
        out << "exceptional " << (exc ? "yes" : "no") << "\n";
      }
      return ok;
    }

    inline int cmd_iso(RunConfig const& c, std::ostream& out) {
      auto const sa = parse_group_spec(c.specs.at(0));
      auto const sb = parse_group_spec(c.specs.at(1));
      auto const A = load(sa);
      auto const B = load(sb);
      auto const r = find_isomorphism(A, B, iso_options(c));
      std::string const method = r.by_fingerprint ? "fingerprint" : "search";
      if (c.format == "json") {
        json j;
        j["a"] = sa.to_string();
        j["b"] = sb.to_string();
        j["isomorphic"] = r.isomorphic;
        j["method"] = method;
        j["nodes"] = r.nodes;
        json imgs = json::array();
        for (std::size_t t = 0; t < r.images.size(); ++t) {
          imgs.push_back({{"generator", A->presentation().label(static_cast<int>(t))},
                          {"image", exponents_json(*B, r.images[t])}});
        }
        j["images"] = imgs;
        out << j.dump(2) << "\n";
      } else if (c.format == "csv") {
        out << "a,b,isomorphic,method,nodes\n";
        out << csv_field(sa.to_string()) << ',' << csv_field(sb.to_string()) << ','
            << (r.isomorphic ? "yes" : "no") << ',' << method << ',' << r.nodes << "\n";
      } else {
        out << "a " << sa.to_string() << "\n";
        out << "b " << sb.to_string() << "\n";
        out << "isomorphic " << (r.isomorphic ? "yes" : "no") << "\n";
        out << "method " << method << "\n";
        out << "nodes " << r.nodes << "\n";
        for (std::size_t t = 0; t < r.images.size(); ++t) {
          out << "image " << A->presentation().label(static_cast<int>(t)) << " -> " << B->to_string(r.images[t])
              << "\n";
        }
      }
      return ok;
    }

    inline int cmd_verify(RunConfig const& c, std::ostream& out) {
      AcceptanceOptions o;
      o.mu = mu_options(c);
      o.iso = iso_options(c);
      auto const results = run_acceptance(c.prime, o);
      bool all = true;
      if (c.format == "json") {
        json j = json::array();
        for (auto const& r : results) {
          j.push_back({{"criterion", r.id},
                       {"name", r.name},
                       {"status", !r.ran ? "skip" : r.passed ? "pass" : "fail"},
                       {"primes", r.primes},
                       {"detail", r.detail}});
        }
        out << j.dump(2) << "\n";
      } else if (c.format == "csv") {
        out << "criterion,name,status,detail\n";
        for (auto const& r : results) {
          out << r.id << ',' << csv_field(r.name) << ',' << (!r.ran ? "skip" : r.passed ? "pass" : "fail") << ','
              << csv_field(r.detail) << "\n";
        }
      } else {
        for (auto const& r : results) {
          out << criterion_line(r) << "\n";
        }
      }
      for (auto const& r : results) {
        all = all && (!r.ran || r.passed);
      }
      return all ? ok : verification_failed;
    }

    inline int cmd_cross_check(RunConfig const& c, std::ostream& out) {
      auto const r = cross_check(c.prime, iso_options(c));
      if (c.format == "json") {
        out << cross_check_to_json(r).dump(2) << "\n";
      } else if (c.format == "csv") {
        out << "qalpha_label,q1_label,qalpha_name,q1_name,explicit,search\n";
        for (auto const& cp : r.pairs) {
          out << csv_field(cp.alpha_label.to_string()) << ',' << csv_field(cp.one_label.to_string()) << ','
              << cp.alpha_name.value_or("") << ',' << cp.one_name.value_or("") << ','
              << (cp.iso.verified ? "yes" : "no") << ',' << (!cp.search ? "-" : *cp.search ? "yes" : "no")
              << "\n";
        }
      } else {
        out << "prime " << r.prime << "\n";
        for (auto const& cp : r.pairs) {
          out << "pair Qalpha:" << cp.alpha_label.to_string() << " ~ Q1:" << cp.one_label.to_string()
              << " names=" << cp.alpha_name.value_or("-") << "," << cp.one_name.value_or("-")
              << " method=" << explicit_case_name(cp.iso.method) << " verified=" << (cp.iso.verified ? "yes" : "no")
              << " search=" << (!cp.search ? "-" : *cp.search ? "yes" : "no") << "\n";
        }
        for (auto const& f : r.failures) {
          out << "failure " << f << "\n";
        }
        out << "perfect " << (r.perfect ? "yes" : "no") << "\n";
      }
      return r.perfect ? ok : verification_failed;
    }

  }  // namespace detail

  // Parses argv and runs one subcommand; returns the process exit status.
  inline int run(int argc, char const* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exceptional p-groups of order at most p^5", "pgroup"};
    app.require_subcommand(1);
    app.fallthrough();
    RunConfig c;
    app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_option("--workers", c.workers, "Worker threads")->check(CLI::Range(1u, 256u));
    app.add_option("--budget", c.budget, "Node limit for isomorphism search")
        ->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()));
    app.add_option("--cache-dir", c.cache_dir, "Subgroup lattice cache (default: $PGROUP_CACHE_DIR)");

    auto* mu = app.add_subcommand("mu", "Minimal faithful permutation degree with a witness");
    mu->add_option("spec", c.specs, "Group spec")->required()->expected(1);
    mu->add_option("--strategy", c.strategy, "exhaustive or johnson")
        ->check(CLI::IsMember({"exhaustive", "johnson"}));

    auto* cl = app.add_subcommand("classify", "Classification report for one prime");
    cl->add_option("--p", c.prime, "Prime")->required();
    cl->add_option("--mode", c.mode, "invariants, mu-oracle or both")
        ->check(CLI::IsMember({"invariants", "mu-oracle", "both"}));
    cl->add_option("--strategy", c.strategy, "mu strategy for the oracle")
        ->check(CLI::IsMember({"exhaustive", "johnson"}));

    auto* ca = app.add_subcommand("canon", "Canonical label and map trail of a parameter tuple");
    ca->add_option("spec", c.specs, "Parameter spec")->required()->expected(1);

    auto* is = app.add_subcommand("iso", "Isomorphism test between two groups");
    is->add_option("specs", c.specs, "Two group specs")->required()->expected(2);

    auto* ve = app.add_subcommand("verify", "Acceptance checks for one prime");
    ve->add_option("--p", c.prime, "Prime")->required();

    auto* cc = app.add_subcommand("cross-check", "Pairing of Q1 and Qalpha extensions");
    cc->add_option("--p", c.prime, "Prime")->required();

    try {
      app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
      int const code = app.exit(e, out, err);
      return code == 0 ? ok : usage;
    }

    c.command = app.get_subcommands().front()->get_name();
    try {
      if (c.command == "classify" || c.command == "verify" || c.command == "cross-check") {
        if (!is_prime(c.prime)) {
          throw precondition_error(std::to_string(c.prime) + " is not prime");
        }
      }
      if (c.command == "mu") {
        return detail::cmd_mu(c, out);
      }
      if (c.command == "classify") {
        return detail::cmd_classify(c, out);
      }
      if (c.command == "canon") {
        return detail::cmd_canon(c, out);
      }
      if (c.command == "iso") {
        return detail::cmd_iso(c, out);
      }
      if (c.command == "verify") {
        return detail::cmd_verify(c, out);
      }
      return detail::cmd_cross_check(c, out);
    } catch (budget_exceeded const& e) {
      err << "pgroup: " << e.what() << "\n";
      return over_budget;
    } catch (classification_error const& e) {
      err << "pgroup: " << e.what() << "\n";
      return verification_failed;
    } catch (error const& e) {
      err << "pgroup: " << e.what() << "\n";
      return usage;
    }
  }

}  // namespace pgroup::cli
