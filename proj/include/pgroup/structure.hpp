#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"
#include "modular.hpp"
#include "presentation.hpp"
#include "subgroup.hpp"

namespace pgroup {

  inline std::vector<Elem> pc_generators(PcGroup const& G) {
    std::vector<Elem> gens;
    for (int i = 0; i < G.ngens(); ++i) {
      gens.push_back(G.gen(i));
    }
    return gens;
  }

  inline bool commutes_with_all(PcGroup const& G, Elem a, std::vector<Elem> const& gens) {
    for (Elem g : gens) {
      if (G.mul(a, g) != G.mul(g, a)) {
        return false;
      }
    }
    return true;
  }

  // Centralizer of H in G.
  inline Subgroup centralizer(GroupPtr const& G, std::vector<Elem> const& gens) {
    std::vector<Elem> els;
    for (Elem a = 0; a < G->order(); ++a) {
      if (commutes_with_all(*G, a, gens)) {
        els.push_back(a);
      }
    }
    return from_elements(G, std::move(els));
  }

  inline Subgroup center(GroupPtr const& G) {
    return centralizer(G, pc_generators(*G));
  }

  inline bool is_abelian(Subgroup const& H) {
    auto const& G = *H.group();
    auto const& gens = H.generators();
    for (std::size_t a = 0; a < gens.size(); ++a) {
      for (std::size_t b = a + 1; b < gens.size(); ++b) {
        if (G.mul(gens[a], gens[b]) != G.mul(gens[b], gens[a])) {
          return false;
        }
      }
    }
    return true;
  }

  // [H, K] for subgroups H, K of G, as the normal closure in <H, K> of the
  // generator commutators. Only used with K normal, where [H, K] is normal in
  // G and the normal closure in G agrees.
  inline Subgroup commutator_subgroup(Subgroup const& H, Subgroup const& K) {
    require_same_group(H, K);
    auto const& G = H.group();
    std::vector<Elem> gens;
    for (Elem a : H.generators()) {
      for (Elem b : K.generators()) {
        Elem const c = G->comm(a, b);
        if (c != 0) {
          gens.push_back(c);
        }
      }
    }
    return normal_closure(G, gens);
  }

  inline Subgroup derived_subgroup(GroupPtr const& G) {
    std::vector<Elem> gens;
    for (int j = 0; j < G->ngens(); ++j) {
      for (int i = 0; i < j; ++i) {
        Elem const c = G->comm(G->gen(j), G->gen(i));
        if (c != 0) {
          gens.push_back(c);
        }
      }
    }
    return normal_closure(G, gens);
  }

  struct PowerImage {
    Subgroup subgroup;
    // true when {g^p} is itself a subgroup; otherwise subgroup is the group
    // it generates
    bool is_power_set = true;
  };

  inline PowerImage pth_power_image(Subgroup const& H) {
    auto const& G = *H.group();
    std::vector<Elem> pw;
    pw.reserve(H.order());
    for (Elem h : H.elements()) {
      pw.push_back(G.pth_power(h));
    }
    std::sort(pw.begin(), pw.end());
    pw.erase(std::unique(pw.begin(), pw.end()), pw.end());
    auto sub = closure(H.group(), pw);
    bool const exact = sub.order() == pw.size();
    return {std::move(sub), exact};
  }

  inline PowerImage pth_power_image(GroupPtr const& G) {
    return pth_power_image(whole_group(G));
  }

  // Phi(H) = H^p [H, H]
  inline Subgroup frattini(Subgroup const& H) {
    auto const& G = *H.group();
    std::vector<Elem> gens;
    for (Elem h : H.elements()) {
      Elem const q = G.pth_power(h);
      if (q != 0) {
        gens.push_back(q);
      }
    }
    auto const& hg = H.generators();
    for (std::size_t a = 0; a < hg.size(); ++a) {
      for (std::size_t b = 0; b < a; ++b) {
        Elem const c = G.comm(hg[a], hg[b]);
        if (c != 0) {
          gens.push_back(c);
        }
      }
    }
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    // close under conjugation by H so that the result is normal in H
    auto F = closure(H.group(), gens);
    for (;;) {
      std::vector<Elem> extra;
      for (Elem f : F.generators()) {
        for (Elem h : hg) {
          Elem const c = G.conj(f, h);
          if (!F.contains(c)) {
            extra.push_back(c);
          }
        }
      }
      if (extra.empty()) {
        return F;
      }
      auto all = F.generators();
      all.insert(all.end(), extra.begin(), extra.end());
      F = closure(H.group(), all);
    }
  }

  inline Subgroup frattini(GroupPtr const& G) {
    return frattini(whole_group(G));
  }

  // Elements of H of order dividing p^k.
  inline std::vector<Elem> omega_elements(Subgroup const& H, int k) {
    auto const& G = *H.group();
    std::vector<Elem> out;
    for (Elem h : H.elements()) {
      Elem a = h;
      for (int t = 0; t < k; ++t) {
        a = G.pth_power(a);
      }
      if (a == 0) {
        out.push_back(h);
      }
    }
    return out;
  }

  // Omega_1 of an abelian subgroup.
  inline Subgroup omega1(Subgroup const& H) {
    return from_elements(H.group(), omega_elements(H, 1));
  }

  inline std::uint64_t exponent_of(Subgroup const& H) {
    std::uint64_t e = 1;
    for (Elem h : H.elements()) {
      e = std::max(e, H.group()->element_order(h));
    }
    return e;
  }

  // Abelian invariants of an abelian subgroup as exponents, largest first:
  // {2, 1} stands for C_{p^2} x C_p.
  inline std::vector<int> abelian_invariants(Subgroup const& H) {
    if (!is_abelian(H)) {
      throw precondition_error("abelian_invariants needs an abelian subgroup");
    }
    auto const p = static_cast<std::size_t>(H.group()->prime());
    // number of cyclic factors of order >= p^k is log_p(|Omega_k| / |Omega_{k-1}|)
    std::vector<int> at_least;
    std::size_t prev = 1;
    for (int k = 1;; ++k) {
      std::size_t const cur = omega_elements(H, k).size();
      if (cur == prev) {
        break;
      }
      int r = 0;
      for (std::size_t q = cur / prev; q > 1; q /= p) {
        ++r;
      }
      at_least.push_back(r);
      prev = cur;
      if (cur == H.order()) {
        break;
      }
    }
    std::vector<int> inv;
    for (std::size_t k = at_least.size(); k-- > 0;) {
      int const next = k + 1 < at_least.size() ? at_least[k + 1] : 0;
      for (int t = 0; t < at_least[k] - next; ++t) {
        inv.push_back(static_cast<int>(k) + 1);
      }
    }
    return inv;
  }

  inline std::string invariants_to_string(std::vector<int> const& inv, int p) {
    if (inv.empty()) {
      return "1";
    }
    std::string s;
    for (std::size_t t = 0; t < inv.size(); ++t) {
      if (t) {
        s += " x ";
      }
      std::uint64_t q = 1;
      for (int e = 0; e < inv[t]; ++e) {
        q *= static_cast<std::uint64_t>(p);
      }
      s += "C" + std::to_string(q);
    }
    return s;
  }

  // ---------------------------------------------------------------------------

  // Induced pc sequence of a subgroup: one element per leading index that
  // occurs, with leading exponent 1. Every element of H is uniquely a product
  // of powers of the sequence in order.
  inline std::vector<Elem> induced_sequence(Subgroup const& H) {
    auto const& G = *H.group();
    std::vector<Elem> seq(static_cast<std::size_t>(G.ngens()), 0);
    std::vector<bool> have(static_cast<std::size_t>(G.ngens()), false);
    for (Elem h : H.elements()) {
      int const L = G.leading_index(h);
      if (L < G.ngens() && !have[static_cast<std::size_t>(L)]) {
        int const e = G.exponent(h, L);
        // h^{e^{-1} mod p} has leading exponent 1
        seq[static_cast<std::size_t>(L)] = G.pow(h, inv_mod(e, G.prime()));
        have[static_cast<std::size_t>(L)] = true;
      }
    }
    std::vector<Elem> out;
    for (int L = 0; L < G.ngens(); ++L) {
      if (have[static_cast<std::size_t>(L)]) {
        out.push_back(seq[static_cast<std::size_t>(L)]);
      }
    }
    return out;
  }

  namespace detail {

    // Exponents of a in the induced sequence, assuming a lies in the subgroup.
    inline std::vector<int> sift(PcGroup const& G, std::vector<Elem> const& seq, Elem a) {
      std::vector<int> ex(seq.size(), 0);
      for (std::size_t t = 0; t < seq.size(); ++t) {
        int const L = G.leading_index(seq[t]);
        int const e = G.exponent(a, L);
        ex[t] = e;
        if (e != 0) {
          a = G.mul(G.pow(seq[t], -e), a);
        }
      }
      if (a != 0) {
        throw precondition_error("element is not in the subgroup");
      }
      return ex;
    }

  }  // namespace detail

  // Pc presentation of H on its induced sequence, labelled h0, h1, ...
  inline PcPresentation subgroup_presentation(Subgroup const& H) {
    auto const& G = *H.group();
    auto const seq = induced_sequence(H);
    int const r = static_cast<int>(seq.size());
    PcPresentation P(G.prime(), r);
    for (int i = 0; i < r; ++i) {
      P.set_label(i, "h" + std::to_string(i));
      P.set_power(i, detail::sift(G, seq, G.pth_power(seq[static_cast<std::size_t>(i)])));
      for (int j = i + 1; j < r; ++j) {
        P.set_commutator(j, i, detail::sift(G, seq, G.comm(seq[static_cast<std::size_t>(j)],
                                                                 seq[static_cast<std::size_t>(i)])));
      }
    }
    return P;
  }

  // ---------------------------------------------------------------------------

  // G/N with a pc presentation on the images of the generators g_i that are
  // not in G_{i+1}N.
  class Quotient {
   public:
    Quotient(Subgroup N) : N_(std::move(N)) {
      if (!is_normal(N_)) {
        throw precondition_error("quotient by a subgroup that is not normal");
      }
      G_ = N_.group();
      auto const& G = *G_;
      int const n = G.ngens();
      reducer_.assign(static_cast<std::size_t>(n), 0);
      kept_index_.assign(static_cast<std::size_t>(n), -1);
      // an element of N with leading index i and leading exponent 1, if any
      for (Elem e : induced_sequence(N_)) {
        int const L = G.leading_index(e);
        reducer_[static_cast<std::size_t>(L)] = e;
      }
      for (int i = 0; i < n; ++i) {
        if (reducer_[static_cast<std::size_t>(i)] == 0) {
          kept_index_[static_cast<std::size_t>(i)] = static_cast<int>(kept_.size());
          kept_.push_back(i);
        }
      }
      int const r = static_cast<int>(kept_.size());
      PcPresentation P(G.prime(), r);
      for (int a = 0; a < r; ++a) {
        Elem const ga = G.gen(kept_[static_cast<std::size_t>(a)]);
        P.set_label(a, G.presentation().label(kept_[static_cast<std::size_t>(a)]));
        P.set_power(a, project_vector(G.pth_power(ga)));
        for (int b = a + 1; b < r; ++b) {
          Elem const gb = G.gen(kept_[static_cast<std::size_t>(b)]);
          P.set_commutator(b, a, project_vector(G.comm(gb, ga)));
        }
      }
      Q_ = make_group(std::move(P));
    }

    GroupPtr const& parent() const noexcept {
      return G_;
    }

    GroupPtr const& group() const noexcept {
      return Q_;
    }

    Subgroup const& kernel() const noexcept {
      return N_;
    }

    // Indices in the parent of the generators kept in the quotient.
    std::vector<int> const& kept_generators() const noexcept {
      return kept_;
    }

    Elem project(Elem a) const {
      return Q_->from_exponents(project_vector(a));
    }

    // The product of kept generators with the quotient exponents of q.
    Elem lift(Elem q) const {
      auto const ex = Q_->exponents(q);
      Elem a = 0;
      for (std::size_t t = 0; t < ex.size(); ++t) {
        a = G_->mul(a, G_->pow(G_->gen(kept_[t]), ex[t]));
      }
      return a;
    }

    // Image of a subgroup of the parent.
    Subgroup image(Subgroup const& H) const {
      std::vector<Elem> gens;
      for (Elem h : H.generators()) {
        gens.push_back(project(h));
      }
      return closure(Q_, gens);
    }

    // Full preimage of a subgroup of the quotient.
    Subgroup preimage(Subgroup const& K) const {
      std::vector<Elem> gens = N_.generators();
      for (Elem k : K.generators()) {
        gens.push_back(lift(k));
      }
      return closure(G_, gens);
    }

   private:
    std::vector<int> project_vector(Elem a) const {
      auto const& G = *G_;
      std::vector<int> out(kept_.size(), 0);
      for (int i = 0; i < G.ngens(); ++i) {
        int const e = G.exponent(a, i);
        if (e == 0) {
          continue;
        }
        int const k = kept_index_[static_cast<std::size_t>(i)];
        if (k >= 0) {
          out[static_cast<std::size_t>(k)] = e;
          a = G.mul(G.pow(G.gen(i), -e), a);
        } else {
          a = G.mul(a, G.pow(reducer_[static_cast<std::size_t>(i)], -e));
        }
      }
      return out;
    }

    Subgroup N_;
    GroupPtr G_;
    GroupPtr Q_;
    std::vector<int> kept_;
    std::vector<int> kept_index_;
    std::vector<Elem> reducer_;
  };

}  // namespace pgroup
