#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "errors.hpp"
#include "families.hpp"
#include "group.hpp"
#include "invariants.hpp"
#include "lattice.hpp"
#include "structure.hpp"
#include "subgroup.hpp"

namespace pgroup {

  // Image of the normal word e_0,...,e_{n-1} under a generator assignment.
  inline Elem evaluate_vector(PcGroup const& B, std::vector<Elem> const& img, std::span<int const> v) {
    Elem r = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
      if (v[k] != 0) {
        r = B.mul(r, B.pow(img[k], v[k]));
      }
    }
    return r;
  }

  // True when the images satisfy every power and commutator relation of A's
  // pc presentation, so that g_i -> img[i] extends to a homomorphism.
  inline bool satisfies_relations(PcGroup const& A, PcGroup const& B, std::vector<Elem> const& img) {
    auto const& P = A.presentation();
    int const n = A.ngens();
    if (static_cast<int>(img.size()) != n || A.prime() != B.prime()) {
      return false;
    }
    for (int i = 0; i < n; ++i) {
      if (B.pth_power(img[static_cast<std::size_t>(i)]) != evaluate_vector(B, img, P.power(i))) {
        return false;
      }
      for (int j = i + 1; j < n; ++j) {
        if (B.comm(img[static_cast<std::size_t>(j)], img[static_cast<std::size_t>(i)]) !=
            evaluate_vector(B, img, P.commutator(j, i))) {
          return false;
        }
      }
    }
    return true;
  }

  // The assignment is an isomorphism A -> B.
  inline bool is_isomorphism(PcGroup const& A, PcGroup const& B, std::vector<Elem> const& img) {
    if (A.order() != B.order() || !satisfies_relations(A, B, img)) {
      return false;
    }
    return detail::closure_elements(B, img).size() == B.order();
  }

  struct IsoOptions {
    std::uint64_t budget = 50'000'000;
    unsigned workers = 1;
    bool fingerprint_prefilter = true;
  };

  struct IsoResult {
    bool isomorphic = false;
    // images of A's pc generators in B
    std::vector<Elem> images;
    std::uint64_t nodes = 0;
    // set when the verdict came from differing fingerprints
    bool by_fingerprint = false;
  };

  namespace detail {

    struct ElementData {
      // order, class size, order of the p-th power, membership in Z, G', Phi
      std::vector<std::uint64_t> signature;
      // least element of the conjugacy class
      std::vector<Elem> class_rep;
    };

    inline ElementData element_data(GroupPtr const& G) {
      auto const& g = *G;
      ElementData d;
      std::vector<std::uint64_t> cls(g.order(), 0);
      d.class_rep.assign(g.order(), 0);
      std::vector<Elem> orbit;
      for (Elem a = 0; a < g.order(); ++a) {
        if (cls[a] != 0) {
          continue;
        }
        orbit.assign(1, a);
        cls[a] = 1;
        for (std::size_t t = 0; t < orbit.size(); ++t) {
          for (int i = 0; i < g.ngens(); ++i) {
            Elem const c = g.conj(orbit[t], g.gen(i));
            if (cls[c] == 0) {
              cls[c] = 1;
              orbit.push_back(c);
            }
          }
        }
        for (Elem c : orbit) {
          cls[c] = orbit.size();
          d.class_rep[c] = a;
        }
      }
      auto const Z = center(G);
      auto const D = derived_subgroup(G);
      auto const F = frattini(G);
      d.signature.resize(g.order());
      for (Elem a = 0; a < g.order(); ++a) {
        std::uint64_t s = g.element_order(a);
        s = s * 1'000'003 + cls[a];
        s = s * 1'000'003 + g.element_order(g.pth_power(a));
        s = s * 8 + (Z.contains(a) ? 4 : 0) + (D.contains(a) ? 2 : 0) + (F.contains(a) ? 1 : 0);
        d.signature[a] = s;
      }
      return d;
    }

    struct IsoPlan {
      // elements of A whose images are chosen, spanning A / Phi(A)
      std::vector<Elem> free;
      // each pc generator of A as a word in free positions (right products)
      std::vector<std::vector<int>> word;
      // free depth after which the image of g_i is known
      std::vector<int> ready;
      // relations grouped by the depth at which they become checkable;
      // (j, i) with j == i stands for the power relation of g_i
      std::vector<std::vector<std::pair<int, int>>> checks;
    };


    // Free elements are picked greedily from the rarest signatures, so the
    // branching at each level is as small as possible.
    inline IsoPlan make_plan(GroupPtr const& A, ElementData const& da) {
      auto const& a = *A;
      int const n = a.ngens();
      IsoPlan plan;
      std::map<std::uint64_t, std::size_t> freq;
      for (auto s : da.signature) {
        ++freq[s];
      }
      std::vector<Elem> order(a.order());
      for (Elem e = 0; e < a.order(); ++e) {
        order[e] = e;
      }
      std::stable_sort(order.begin(), order.end(), [&](Elem x, Elem y) {
        return freq[da.signature[x]] < freq[da.signature[y]];
      });
      auto const Phi = frattini(A);
      std::vector<Elem> span = Phi.generators();
      std::size_t cur = Phi.order();
      for (Elem e : order) {
        if (cur == a.order()) {
          break;
        }
        auto next = span;
        next.push_back(e);
        std::size_t const o = closure_elements(a, next).size();
        if (o > cur) {
          plan.free.push_back(e);
          span = std::move(next);
          cur = o;
        }
      }
      // breadth-first words in the free elements
      std::vector<int> parent(a.order(), -2), via(a.order(), -1);
      std::vector<Elem> queue{0};
      parent[0] = -1;
      for (std::size_t t = 0; t < queue.size(); ++t) {
        Elem const e = queue[t];
        for (std::size_t k = 0; k < plan.free.size(); ++k) {
          Elem const f = a.mul(e, plan.free[k]);
          if (parent[f] == -2) {
            parent[f] = static_cast<int>(e);
            via[f] = static_cast<int>(k);
            queue.push_back(f);
          }
        }
      }
      plan.word.resize(static_cast<std::size_t>(n));
      plan.ready.assign(static_cast<std::size_t>(n), 0);
      for (int i = 0; i < n; ++i) {
        std::vector<int> w;
        for (Elem e = a.gen(i); parent[e] != -1; e = static_cast<Elem>(parent[e])) {
          w.push_back(via[e]);
        }
        std::reverse(w.begin(), w.end());
        int r = 0;
        for (int k : w) {
          r = std::max(r, k);
        }
        plan.ready[static_cast<std::size_t>(i)] = r;
        plan.word[static_cast<std::size_t>(i)] = std::move(w);
      }
      auto const& P = a.presentation();
      auto need = [&](std::span<int const> v, int base) {
        for (std::size_t k = 0; k < v.size(); ++k) {
          if (v[k] != 0) {
            base = std::max(base, plan.ready[k]);
          }
        }
        return base;
      };
      plan.checks.resize(plan.free.size());
      for (int i = 0; i < n; ++i) {
        int const d = need(P.power(i), plan.ready[static_cast<std::size_t>(i)]);
        plan.checks[static_cast<std::size_t>(d)].emplace_back(i, i);
        for (int j = i + 1; j < n; ++j) {
          int const dj = need(P.commutator(j, i), std::max(plan.ready[static_cast<std::size_t>(i)],
                                                           plan.ready[static_cast<std::size_t>(j)]));
          plan.checks[static_cast<std::size_t>(dj)].emplace_back(j, i);
        }
      }
      return plan;
    }

    // Orbit representatives (least elements) of `cand` under conjugation by
    // the centralizer of b.
    inline std::vector<Elem> centralizer_orbit_reps(PcGroup const& B, Elem b, std::vector<Elem> const& cand) {
      std::vector<Elem> cgens;
      std::vector<bool> in_c(B.order(), false);
      for (Elem g = 0; g < B.order(); ++g) {
        if (B.mul(g, b) == B.mul(b, g)) {
          in_c[g] = true;
        }
      }
      // a generating set of the centralizer
      std::vector<Elem> cel;
      for (Elem g = 0; g < B.order(); ++g) {
        if (in_c[g]) {
          cel.push_back(g);
        }
      }
      std::vector<Elem> got{0};
      std::vector<bool> have(B.order(), false);
      have[0] = true;
      for (Elem g : cel) {
        if (have[g]) {
          continue;
        }
        cgens.push_back(g);
        auto els = closure_elements(B, cgens);
        for (Elem e : els) {
          have[e] = true;
        }
        if (els.size() == cel.size()) {
          break;
        }
      }
      std::vector<bool> in_cand(B.order(), false), seen(B.order(), false);
      for (Elem c : cand) {
        in_cand[c] = true;
      }
      std::vector<Elem> reps, orbit;
      for (Elem c : cand) {
        if (seen[c]) {
          continue;
        }
        reps.push_back(c);
        orbit.assign(1, c);
        seen[c] = true;
        for (std::size_t t = 0; t < orbit.size(); ++t) {
          for (Elem g : cgens) {
            Elem const d = B.conj(orbit[t], g);
            if (!seen[d]) {
              seen[d] = true;
              orbit.push_back(d);
            }
          }
        }
      }
      return reps;
    }

    // Homomorphisms zeta: B -> Z(B), given by the images of the pc
    // generators, for which x -> x zeta(x) is bijective; these are central
    // automorphisms. Enumeration stops after `cap` of them.
    inline std::vector<std::vector<Elem>> central_automorphisms(GroupPtr const& B, std::size_t cap) {
      auto const& g = *B;
      auto const& P = g.presentation();
      int const n = g.ngens();
      auto const Zs = center(B);
      auto const& Z = Zs.elements();
      std::vector<std::vector<Elem>> out;
      std::vector<Elem> val(static_cast<std::size_t>(n), 0);
      auto bijective = [&] {
        for (Elem x : Z) {
          if (x != 0 && g.mul(x, evaluate_vector(g, val, g.exponents(x))) == 0) {
            return false;
          }
        }
        return true;
      };
      // pc relations of g_i only involve generators after i
      auto rec = [&](auto&& self, int i) -> void {
        if (out.size() >= cap) {
          return;
        }
        if (i < 0) {
          if (bijective() && std::any_of(val.begin(), val.end(), [](Elem e) { return e != 0; })) {
            out.push_back(val);
          }
          return;
        }
        for (Elem c : Z) {
          val[static_cast<std::size_t>(i)] = c;
          bool ok = g.pth_power(c) == evaluate_vector(g, val, P.power(i));
          for (int j = i + 1; ok && j < n; ++j) {
            ok = evaluate_vector(g, val, P.commutator(j, i)) == 0;
          }
          if (ok) {
            self(self, i - 1);
          }
        }
        val[static_cast<std::size_t>(i)] = 0;
      };
      rec(rec, n - 1);
      return out;
    }

    inline Elem apply_central(PcGroup const& g, std::vector<Elem> const& zeta, Elem x) {
      return evaluate_vector(g, zeta, g.exponents(x));
    }

    class IsoSearch {
     public:
      IsoSearch(GroupPtr A, GroupPtr B, IsoPlan const& plan, ElementData const& da, ElementData const& db,
                std::vector<std::vector<Elem>> const& cand, Quotient const& qB,
                std::vector<std::vector<Elem>> const& central, std::atomic<std::uint64_t>& nodes,
                std::uint64_t budget)
          : A_(std::move(A)), B_(std::move(B)), plan_(plan), da_(da), db_(db), cand_(cand), qB_(qB),
            central_(central), nodes_(nodes), budget_(budget), img_(static_cast<std::size_t>(A_->ngens()), 0),
            chosen_(plan.free.size(), 0) {}

      // Extends a fixed first image; true on success with images() filled.
      bool run_from(Elem first) {
        std::vector<Elem> span{0};
        std::vector<std::uint32_t> live(central_.size());
        for (std::uint32_t t = 0; t < live.size(); ++t) {
          live[t] = t;
        }
        return assign(0, first, span, live);
      }

      std::vector<Elem> const& images() const noexcept {
        return img_;
      }

     private:
      bool assign(std::size_t depth, Elem b, std::vector<Elem> const& span, std::vector<std::uint32_t> const& live) {
        if (nodes_.fetch_add(1) >= budget_) {
          throw budget_exceeded("isomorphism search exceeded " + std::to_string(budget_) + " nodes");
        }
        auto const& Bg = *B_;
        // b must be independent of earlier images modulo Phi(B)
        Elem const vb = qB_.project(b);
        if (std::binary_search(span.begin(), span.end(), vb)) {
          return false;
        }
        chosen_[depth] = b;
        int const n = A_->ngens();
        for (int i = 0; i < n; ++i) {
          if (plan_.ready[static_cast<std::size_t>(i)] != static_cast<int>(depth)) {
            continue;
          }
          Elem e = 0;
          for (int k : plan_.word[static_cast<std::size_t>(i)]) {
            e = Bg.mul(e, chosen_[static_cast<std::size_t>(k)]);
          }
          if (db_.signature[e] != da_.signature[A_->gen(i)]) {
            return false;
          }
          img_[static_cast<std::size_t>(i)] = e;
        }
        auto const& P = A_->presentation();
        for (auto const& [j, i] : plan_.checks[depth]) {
          if (j == i) {
            if (Bg.pth_power(img_[static_cast<std::size_t>(i)]) != evaluate_vector(Bg, img_, P.power(i))) {
              return false;
            }
          } else if (Bg.comm(img_[static_cast<std::size_t>(j)], img_[static_cast<std::size_t>(i)]) !=
                     evaluate_vector(Bg, img_, P.commutator(j, i))) {
            return false;
          }
        }
        if (depth + 1 == plan_.free.size()) {
          return true;
        }
        auto const& V = *qB_.group();
        std::vector<Elem> nspan;
        nspan.reserve(span.size() * static_cast<std::size_t>(Bg.prime()));
        Elem step = 0;
        for (int t = 0; t < Bg.prime(); ++t) {
          for (Elem s : span) {
            nspan.push_back(V.mul(s, step));
          }
          step = V.mul(step, vb);
        }
        std::sort(nspan.begin(), nspan.end());
        // inner automorphisms fixing the first image act on the second
        std::vector<Elem> reps;
        if (depth == 0) {
          reps = centralizer_orbit_reps(Bg, b, cand_[1]);
        }
        // central automorphisms fixing the images so far
        std::vector<std::uint32_t> nlive;
        for (auto t : live) {
          if (apply_central(Bg, central_[t], b) == 0) {
            nlive.push_back(t);
          }
        }
        std::vector<char> same;
        if (!nlive.empty()) {
          same.assign(Bg.order(), 0);
        }
        for (Elem c : depth == 0 ? reps : cand_[depth + 1]) {
          if (!same.empty() && same[c]) {
            continue;
          }
          if (assign(depth + 1, c, nspan, nlive)) {
            return true;
          }
          for (auto t : nlive) {
            same[Bg.mul(c, apply_central(Bg, central_[t], c))] = 1;
          }
        }
        return false;
      }

      GroupPtr A_, B_;
      IsoPlan const& plan_;
      ElementData const& da_;
      ElementData const& db_;
      std::vector<std::vector<Elem>> const& cand_;
      Quotient const& qB_;
      std::vector<std::vector<Elem>> const& central_;
      std::atomic<std::uint64_t>& nodes_;
      std::uint64_t budget_;
      std::vector<Elem> img_;
      std::vector<Elem> chosen_;
    };

  }  // namespace detail

  // Backtracking over images of a small generating set of A; the images of
  // the pc generators follow from fixed words and are checked against A's
  // relations as soon as they are known. Candidates share the element
  // signature of their preimage. Up to inner automorphisms of B the first
  // image is a class representative and the second a representative under
  // the centralizer of the first. Central automorphisms x -> x zeta(x)
  // fixing the images chosen so far merge further candidates at each level.
  // Candidates are tried in increasing order, so the map found does not
  // depend on the worker count.
  inline IsoResult find_isomorphism(GroupPtr const& A, GroupPtr const& B, IsoOptions const& opts = {}) {
    IsoResult res;
    if (A->order() != B->order() || A->prime() != B->prime()) {
      return res;
    }
    if (A->order() == 1) {
      res.isomorphic = true;
      return res;
    }
    if (opts.fingerprint_prefilter && !(fingerprint(A) == fingerprint(B))) {
      res.by_fingerprint = true;
      return res;
    }
    auto const da = detail::element_data(A);
    auto const db = detail::element_data(B);
    auto const plan = detail::make_plan(A, da);
    Quotient const qB(frattini(B));
    if (static_cast<int>(plan.free.size()) != qB.group()->ngens()) {
      return res;
    }
    std::vector<std::vector<Elem>> cand(plan.free.size());
    for (std::size_t k = 0; k < plan.free.size(); ++k) {
      std::uint64_t const s = da.signature[plan.free[k]];
      for (Elem b = 0; b < B->order(); ++b) {
        if (db.signature[b] == s && (k > 0 || db.class_rep[b] == b)) {
          cand[k].push_back(b);
        }
      }
    }
    // first images up to central automorphisms followed by conjugation
    auto const central = detail::central_automorphisms(B, std::size_t{1} << 14);
    {
      std::vector<char> same(B->order(), 0);
      std::vector<Elem> reps;
      for (Elem b : cand[0]) {
        if (same[b]) {
          continue;
        }
        reps.push_back(b);
        for (auto const& zeta : central) {
          same[db.class_rep[B->mul(b, detail::apply_central(*B, zeta, b))]] = 1;
        }
      }
      cand[0] = std::move(reps);
    }
    std::atomic<std::uint64_t> nodes{0};
    // position in cand[0] of the least successful first image
    std::atomic<std::size_t> found{cand[0].size()};
    std::vector<Elem> best;
    std::mutex mu;
    std::exception_ptr failure;
    auto work = [&](std::size_t begin, std::size_t step) {
      try {
        detail::IsoSearch s(A, B, plan, da, db, cand, qB, central, nodes, opts.budget);
        for (std::size_t t = begin; t < cand[0].size() && t < found.load(); t += step) {
          if (s.run_from(cand[0][t])) {
            std::lock_guard<std::mutex> lock(mu);
            if (t < found.load()) {
              found = t;
              best = s.images();
            }
            return;
          }
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!failure) {
          failure = std::current_exception();
        }
        found = 0;
      }
    };
    unsigned const workers = std::max(1U, opts.workers);
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
    if (failure) {
      std::rethrow_exception(failure);
    }
    res.nodes = nodes.load();
    if (!best.empty()) {
      if (!is_isomorphism(*A, *B, best)) {
        throw classification_error("isomorphism search produced an invalid map");
      }
      res.isomorphic = true;
      res.images = std::move(best);
    }
    return res;
  }

  inline bool are_isomorphic(GroupPtr const& A, GroupPtr const& B, IsoOptions const& opts = {}) {
    return find_isomorphism(A, B, opts).isomorphic;
  }

  // Q is isomorphic to a subgroup of G.
  inline bool is_subgroup_of(GroupPtr const& Q, GroupPtr const& G, IsoOptions const& opts = {}) {
    if (G->order() % Q->order() != 0 || Q->prime() != G->prime()) {
      return false;
    }
    auto const fq = fingerprint(Q);
    for (auto const& H : subgroups_of_order(G, Q->order())) {
      auto const K = make_group(subgroup_presentation(H));
      if (!(fingerprint(K) == fq)) {
        continue;
      }
      IsoOptions o = opts;
      o.fingerprint_prefilter = false;
      if (are_isomorphic(Q, K, o)) {
        return true;
      }
    }
    return false;
  }

}  // namespace pgroup
