#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "families.hpp"
#include "group.hpp"
#include "lattice.hpp"
#include "structure.hpp"
#include "subgroup.hpp"

namespace pgroup {

  struct PermutationRep {
    std::vector<Subgroup> stabilizers;
    std::uint64_t degree = 0;
  };

  inline std::uint64_t index_of(Subgroup const& H) {
    return H.group()->order() / H.order();
  }

  inline PermutationRep make_rep(std::vector<Subgroup> stabilizers) {
    PermutationRep rep;
    for (auto const& H : stabilizers) {
      rep.degree += index_of(H);
    }
    rep.stabilizers = std::move(stabilizers);
    return rep;
  }

  // Faithful iff the cores intersect trivially; the cores are computed.
  inline bool is_faithful(GroupPtr const& G, PermutationRep const& rep) {
    auto K = whole_group(G);
    for (auto const& H : rep.stabilizers) {
      if (H.group() != G) {
        throw precondition_error("stabilizer belongs to a different group");
      }
      K = intersection(K, core(H));
      if (K.is_trivial()) {
        return true;
      }
    }
    return K.is_trivial();
  }

  enum class MuStrategy { exhaustive, johnson };

  inline std::string strategy_name(MuStrategy s) {
    return s == MuStrategy::exhaustive ? "exhaustive" : "johnson";
  }

  inline MuStrategy parse_strategy(std::string const& s) {
    if (s == "exhaustive") {
      return MuStrategy::exhaustive;
    }
    if (s == "johnson") {
      return MuStrategy::johnson;
    }
    throw parse_error("unknown strategy '" + s + "'");
  }

  struct MuOptions {
    MuStrategy strategy = MuStrategy::johnson;
    LatticeOptions lattice;
  };

  struct MuResult {
    std::uint64_t degree = 0;
    PermutationRep witness;
  };

  // Omega_1(Z(G)): every nontrivial normal subgroup meets it.
  inline Subgroup central_socle(GroupPtr const& G) {
    return omega1(center(G));
  }

  inline int rank_of_elementary(Subgroup const& V) {
    int r = 0;
    for (std::size_t o = V.order(); o > 1; o /= static_cast<std::size_t>(V.group()->prime())) {
      ++r;
    }
    return r;
  }

  inline int center_rank(GroupPtr const& G) {
    return rank_of_elementary(central_socle(G));
  }

  namespace detail {

    inline std::vector<std::uint64_t> socle_mask(Subgroup const& H, std::vector<Elem> const& soc) {
      std::vector<std::uint64_t> m((soc.size() + 63) / 64, 0);
      for (std::size_t t = 0; t < soc.size(); ++t) {
        if (H.contains(soc[t])) {
          m[t / 64] |= std::uint64_t{1} << (t % 64);
        }
      }
      return m;
    }

    inline std::vector<std::uint64_t> mask_and(std::vector<std::uint64_t> a, std::vector<std::uint64_t> const& b) {
      for (std::size_t w = 0; w < a.size(); ++w) {
        a[w] &= b[w];
      }
      return a;
    }

    inline int mask_count(std::vector<std::uint64_t> const& a) {
      int c = 0;
      for (auto w : a) {
        c += __builtin_popcountll(w);
      }
      return c;
    }

    struct Best {
      std::uint64_t degree = std::numeric_limits<std::uint64_t>::max();
      std::vector<std::size_t> picks;
    };

    // Depth-first search for the cheapest irredundant collection over
    // candidates sorted by increasing index. The running intersection is
    // opaque here; meet() refuses a pick that does not shrink it.
    template <class State, class Meet, class Done>
    struct Search {
      std::vector<std::uint64_t> const& index;
      Meet meet;   // (State const&, t) -> optional<State>, empty when t does not shrink it
      Done done;   // (State const&, depth) -> bool: a faithful stopping point
      int min_depth;
      int max_depth;
      std::atomic<std::uint64_t>* shared;
      Best local;
      std::vector<std::size_t> stack;

      void run(State const& st, std::size_t from, std::uint64_t partial) {
        int const depth = static_cast<int>(stack.size());
        if (depth >= min_depth && done(st, depth)) {
          if (partial < local.degree) {
            local.degree = partial;
            local.picks = stack;
            // publish the bound
            std::uint64_t cur = shared->load();
            while (partial < cur && !shared->compare_exchange_weak(cur, partial)) {
            }
          }
          return;
        }
        if (depth >= max_depth) {
          return;
        }
        for (std::size_t t = from; t < index.size(); ++t) {
          std::uint64_t const next = partial + index[t];
          if (next >= local.degree || next > shared->load()) {
            break;
          }
          auto nst = meet(st, t);
          if (!nst) {
            continue;
          }
          stack.push_back(t);
          run(*nst, t + 1, next);
          stack.pop_back();
        }
      }
    };

    // Runs the search split by first pick across workers and returns the
    // least (degree, picks) pair, which does not depend on the split.
    template <class State, class Meet, class Done>
    Best parallel_search(std::vector<std::uint64_t> const& index, State const& start, Meet meet, Done done,
                         int min_depth, int max_depth, unsigned workers, std::uint64_t initial_bound) {
      std::atomic<std::uint64_t> shared{initial_bound};
      Best result;
      std::mutex mu;
      auto work = [&](std::size_t begin, std::size_t step) {
        Search<State, Meet, Done> s{index, meet, done, min_depth, max_depth, &shared, {}, {}};
        for (std::size_t t = begin; t < index.size(); t += step) {
          if (index[t] >= s.local.degree || index[t] > shared.load()) {
            break;
          }
          auto nst = meet(start, t);
          if (!nst) {
            continue;
          }
          s.stack.assign(1, t);
          s.run(*nst, t + 1, index[t]);
        }
        std::lock_guard<std::mutex> lock(mu);
        if (s.local.degree < result.degree ||
            (s.local.degree == result.degree && s.local.picks < result.picks)) {
          result = s.local;
        }
      };
      workers = std::max(1U, workers);
      if (workers == 1) {
        work(0, 1);
      } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
          pool.emplace_back(work, w, workers);
        }
        for (auto& th : pool) {
          th.join();
        }
      }
      return result;
    }

    // Subgroups not containing the socle, sorted by increasing index
    // (decreasing order), ties in canonical subgroup order.
    inline std::vector<Subgroup> useful_subgroups(GroupPtr const& G, Subgroup const& soc, LatticeOptions const& opts) {
      ElementSet const sbits = soc.bits();
      auto layers = subgroup_layers(
          G, [&](ElementSet const& b) { return !sbits.subset_of(b); }, opts, "useful");
      std::vector<Subgroup> out;
      for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
        out.insert(out.end(), it->begin(), it->end());
      }
      return out;
    }

  }  // namespace detail

  // Exact minimal faithful degree with a witness.
  //
  // johnson: the best subgroup for each possible intersection with the
  // socle, combined d at a time (d = rank of the centre) for odd p, or
  // between ceil(d/2) and d at a time for p = 2.
  // exhaustive: every subgroup not containing the socle, every irredundant
  // collection of size at most d.
  inline MuResult minimal_degree(GroupPtr const& G, MuOptions const& opts = {}) {
    if (G->order() == 1) {
      return {0, {}};
    }
    auto const soc = central_socle(G);
    int const d = rank_of_elementary(soc);
    auto const useful = detail::useful_subgroups(G, soc, opts.lattice);
    std::vector<Elem> const soc_els = soc.elements();
    using Mask = std::vector<std::uint64_t>;
    Mask const full = detail::socle_mask(soc, soc_els);

    std::vector<Subgroup> pool;
    std::vector<Mask> masks;
    if (opts.strategy == MuStrategy::johnson) {
      // first subgroup seen for each socle class is the largest
      std::map<Mask, std::size_t> seen;
      for (auto const& H : useful) {
        auto m = detail::socle_mask(H, soc_els);
        if (seen.emplace(m, pool.size()).second) {
          pool.push_back(H);
          masks.push_back(std::move(m));
        }
      }
    } else {
      pool = useful;
      for (auto const& H : pool) {
        masks.push_back(detail::socle_mask(H, soc_els));
      }
    }
    std::vector<std::uint64_t> index;
    for (auto const& H : pool) {
      index.push_back(index_of(H));
    }

    detail::Best best;
    if (opts.strategy == MuStrategy::johnson) {
      // intersect socle classes; stop when only the identity remains
      auto meet = [&](Mask const& st, std::size_t t) -> std::optional<Mask> {
        auto m = detail::mask_and(st, masks[t]);
        if (detail::mask_count(m) == detail::mask_count(st)) {
          return std::nullopt;
        }
        return m;
      };
      auto done = [](Mask const& st, int) { return detail::mask_count(st) == 1; };
      int const lo = G->prime() == 2 ? (d + 1) / 2 : d;
      best = detail::parallel_search(index, full, meet, done, lo, d, opts.lattice.workers, G->order());
    } else {
      // intersect the actual cores
      std::vector<ElementSet> cores;
      for (auto const& H : pool) {
        cores.push_back(core(H).bits());
      }
      auto meet = [&](ElementSet const& st, std::size_t t) -> std::optional<ElementSet> {
        auto m = st & cores[t];
        if (m.count() == st.count()) {
          return std::nullopt;
        }
        return m;
      };
      auto done = [](ElementSet const& st, int) { return st.count() == 1; };
      best = detail::parallel_search(index, whole_group(G).bits(), meet, done, 1, d, opts.lattice.workers,
                                     G->order());
    }

    MuResult res;
    if (best.picks.empty()) {
      // the regular representation is always available
      res.witness = make_rep({trivial_subgroup(G)});
    } else {
      std::vector<Subgroup> st;
      for (auto t : best.picks) {
        st.push_back(pool[t]);
      }
      res.witness = make_rep(std::move(st));
    }
    res.degree = res.witness.degree;
    if (!is_faithful(G, res.witness)) {
      throw classification_error("minimal degree witness is not faithful");
    }
    return res;
  }

  inline MuResult minimal_degree(GroupPtr const& G, MuStrategy s) {
    MuOptions o;
    o.strategy = s;
    return minimal_degree(G, o);
  }

  struct DistinguishedQuotient {
    Subgroup N;
    std::uint64_t mu_g = 0;
    std::uint64_t mu_q = 0;
  };

  // Every normal N with mu(G/N) > mu(G).
  inline std::vector<DistinguishedQuotient> distinguished_quotients(GroupPtr const& G, MuOptions const& opts = {}) {
    std::vector<DistinguishedQuotient> out;
    std::uint64_t const mu_g = minimal_degree(G, opts).degree;
    for (auto& ns : normal_subgroups(G, opts.lattice)) {
      if (ns.subgroup.is_trivial()) {
        continue;
      }
      Quotient q(ns.subgroup);
      std::uint64_t const mu_q = minimal_degree(q.group(), opts).degree;
      if (mu_q > mu_g) {
        out.push_back({std::move(ns.subgroup), mu_g, mu_q});
      }
    }
    return out;
  }

  // Two subgroups of order p^3 meeting in a non-central subgroup of order p.
  inline std::optional<std::pair<Subgroup, Subgroup>> exceptional_pair_search(GroupPtr const& G) {
    auto const p = static_cast<std::size_t>(G->prime());
    if (G->order() != p * p * p * p * p) {
      throw precondition_error("exceptional pair search needs a group of order p^5");
    }
    auto const Z = center(G);
    auto const layer3 = subgroups_of_order(G, p * p * p);
    for (std::size_t a = 0; a < layer3.size(); ++a) {
      for (std::size_t b = a + 1; b < layer3.size(); ++b) {
        auto const Y = intersection(layer3[a], layer3[b]);
        if (Y.order() != p) {
          continue;
        }
        if (!Z.contains(Y.generators().front())) {
          return std::make_pair(layer3[a], layer3[b]);
        }
      }
    }
    return std::nullopt;
  }

  // Pair search on a family Q candidate, where the centre has rank 2 and a
  // pair exists exactly when mu(G) < p^3.
  inline std::optional<std::pair<Subgroup, Subgroup>> exceptional_pair_witness(FamilyParams const& fp) {
    validate(fp);
    if (fp.family != Family::Q) {
      throw precondition_error("exceptional pair witness applies to family Q candidates");
    }
    return exceptional_pair_search(make_group(build_candidate(fp)));
  }

}  // namespace pgroup
