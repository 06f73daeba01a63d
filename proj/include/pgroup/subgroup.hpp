#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

#include "errors.hpp"
#include "group.hpp"

namespace pgroup {

  // Fixed-size bitset over the elements of a group.
  class ElementSet {
   public:
    ElementSet() = default;

    explicit ElementSet(Elem universe) : size_(universe), words_((universe + 63) / 64, 0) {}

    Elem universe() const noexcept {
      return size_;
    }

    bool test(Elem a) const noexcept {
      return (words_[a >> 6] >> (a & 63)) & 1U;
    }

    void set(Elem a) noexcept {
      words_[a >> 6] |= std::uint64_t{1} << (a & 63);
    }

    void reset(Elem a) noexcept {
      words_[a >> 6] &= ~(std::uint64_t{1} << (a & 63));
    }

    std::size_t count() const noexcept {
      std::size_t c = 0;
      for (auto w : words_) {
        c += static_cast<std::size_t>(std::popcount(w));
      }
      return c;
    }

    ElementSet& operator&=(ElementSet const& o) noexcept {
      for (std::size_t t = 0; t < words_.size(); ++t) {
        words_[t] &= o.words_[t];
      }
      return *this;
    }

    friend ElementSet operator&(ElementSet a, ElementSet const& b) noexcept {
      a &= b;
      return a;
    }

    bool subset_of(ElementSet const& o) const noexcept {
      for (std::size_t t = 0; t < words_.size(); ++t) {
        if (words_[t] & ~o.words_[t]) {
          return false;
        }
      }
      return true;
    }

    std::vector<Elem> to_vector() const {
      std::vector<Elem> out;
      for (std::size_t t = 0; t < words_.size(); ++t) {
        std::uint64_t w = words_[t];
        while (w) {
          out.push_back(static_cast<Elem>(t * 64 + static_cast<std::size_t>(std::countr_zero(w))));
          w &= w - 1;
        }
      }
      return out;
    }

    friend bool operator==(ElementSet const&, ElementSet const&) = default;

   private:
    Elem size_ = 0;
    std::vector<std::uint64_t> words_;
  };

  // 64-bit hash of a sorted element list.
  inline std::uint64_t hash_elements(std::vector<Elem> const& els) {
    std::uint64_t h = 1469598103934665603ULL ^ els.size();
    for (Elem e : els) {
      h ^= e + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 1099511628211ULL;
    }
    return h;
  }

  // A subgroup of a fixed group, stored as its sorted element list plus a
  // membership bitset and a generating set.
  class Subgroup {
   public:
    Subgroup() = default;

    // elements must be a sorted list forming a subgroup; this is not checked
    // here (from_elements does check).
    Subgroup(GroupPtr group, std::vector<Elem> elements, std::vector<Elem> generators)
        : group_(std::move(group)), elements_(std::move(elements)), gens_(std::move(generators)) {
      bits_ = ElementSet(group_->order());
      for (Elem e : elements_) {
        bits_.set(e);
      }
      hash_ = hash_elements(elements_);
    }

    GroupPtr const& group() const noexcept {
      return group_;
    }

    std::size_t order() const noexcept {
      return elements_.size();
    }

    std::vector<Elem> const& elements() const noexcept {
      return elements_;
    }

    std::vector<Elem> const& generators() const noexcept {
      return gens_;
    }

    ElementSet const& bits() const noexcept {
      return bits_;
    }

    std::uint64_t hash() const noexcept {
      return hash_;
    }

    bool contains(Elem a) const noexcept {
      return a < bits_.universe() && bits_.test(a);
    }

    bool is_trivial() const noexcept {
      return elements_.size() == 1;
    }

    bool subgroup_of(Subgroup const& o) const noexcept {
      return order() <= o.order() && bits_.subset_of(o.bits_);
    }

    friend bool operator==(Subgroup const& a, Subgroup const& b) {
      return a.group_ == b.group_ && a.hash_ == b.hash_ && a.elements_ == b.elements_;
    }

    // Canonical order: by order, then lexicographically by elements.
    friend bool operator<(Subgroup const& a, Subgroup const& b) {
      if (a.order() != b.order()) {
        return a.order() < b.order();
      }
      return a.elements_ < b.elements_;
    }

   private:
    GroupPtr group_;
    std::vector<Elem> elements_;
    std::vector<Elem> gens_;
    ElementSet bits_;
    std::uint64_t hash_ = 0;
  };

  namespace detail {

    // Extends `out` (with membership `in`) to its closure under right
    // multiplication by gens.
    inline void grow_closure(PcGroup const& G, std::vector<Elem> const& gens, ElementSet& in,
                             std::vector<Elem>& out) {
      std::size_t head = 0;
      while (head < out.size()) {
        Elem const a = out[head++];
        for (Elem g : gens) {
          Elem const b = G.mul(a, g);
          if (!in.test(b)) {
            in.set(b);
            out.push_back(b);
          }
        }
      }
    }

    inline std::vector<Elem> closure_elements(PcGroup const& G, std::vector<Elem> const& gens) {
      ElementSet in(G.order());
      std::vector<Elem> out{0};
      in.set(0);
      grow_closure(G, gens, in, out);
      std::sort(out.begin(), out.end());
      return out;
    }

    // An irredundant subset of `candidates` generating the same subgroup as
    // `candidates`. In a p-group every irredundant generating set has
    // minimal size.
    inline std::vector<Elem> irredundant_generators(PcGroup const& G, std::vector<Elem> const& candidates,
                                                    std::size_t target_order) {
      std::vector<Elem> gens;
      ElementSet in(G.order());
      std::vector<Elem> cur{0};
      in.set(0);
      for (Elem c : candidates) {
        if (cur.size() == target_order) {
          break;
        }
        if (in.test(c)) {
          continue;
        }
        gens.push_back(c);
        // new elements are products of old ones with c; rerun the BFS
        in.set(c);
        cur.push_back(c);
        std::size_t head = 0;
        while (head < cur.size()) {
          Elem const a = cur[head++];
          for (Elem g : gens) {
            Elem const b = G.mul(a, g);
            if (!in.test(b)) {
              in.set(b);
              cur.push_back(b);
            }
          }
        }
      }
      // drop generators made redundant by later ones
      for (std::size_t t = gens.size(); t-- > 0;) {
        if (gens.size() <= 1) {
          break;
        }
        std::vector<Elem> rest;
        for (std::size_t s = 0; s < gens.size(); ++s) {
          if (s != t) {
            rest.push_back(gens[s]);
          }
        }
        if (closure_elements(G, rest).size() == target_order) {
          gens = std::move(rest);
        }
      }
      return gens;
    }

  }  // namespace detail

  inline Subgroup trivial_subgroup(GroupPtr const& G) {
    return Subgroup(G, {0}, {});
  }

  inline Subgroup whole_group(GroupPtr const& G) {
    std::vector<Elem> els(G->order());
    for (Elem a = 0; a < G->order(); ++a) {
      els[a] = a;
    }
    std::vector<Elem> gens;
    for (int i = 0; i < G->ngens(); ++i) {
      gens.push_back(G->gen(i));
    }
    gens = detail::irredundant_generators(*G, gens, G->order());
    return Subgroup(G, std::move(els), std::move(gens));
  }

  // Smallest subgroup containing gens.
  inline Subgroup closure(GroupPtr const& G, std::vector<Elem> const& gens) {
    auto els = detail::closure_elements(*G, gens);
    auto const n = els.size();
    return Subgroup(G, std::move(els), detail::irredundant_generators(*G, gens, n));
  }

  // Subgroup with a known element set; generators are chosen from the
  // elements. Throws precondition_error when the set is not a subgroup.
  inline Subgroup from_elements(GroupPtr const& G, std::vector<Elem> els) {
    std::sort(els.begin(), els.end());
    els.erase(std::unique(els.begin(), els.end()), els.end());
    ElementSet in(G->order());
    for (Elem e : els) {
      in.set(e);
    }
    if (els.empty() || els.front() != 0) {
      throw precondition_error("element set does not contain the identity");
    }
    // Candidate generators in order of leading index give short sets.
    std::vector<Elem> cands;
    std::vector<bool> seen_lead(static_cast<std::size_t>(G->ngens()) + 1, false);
    for (Elem e : els) {
      int const L = G->leading_index(e);
      if (!seen_lead[static_cast<std::size_t>(L)]) {
        seen_lead[static_cast<std::size_t>(L)] = true;
        cands.push_back(e);
      }
    }
    auto gens = detail::irredundant_generators(*G, cands, els.size());
    if (detail::closure_elements(*G, gens) != els) {
      throw precondition_error("element set is not a subgroup");
    }
    return Subgroup(G, std::move(els), std::move(gens));
  }

  inline void require_same_group(Subgroup const& a, Subgroup const& b) {
    if (a.group() != b.group()) {
      throw precondition_error("subgroups belong to different groups");
    }
  }

  inline Subgroup intersection(Subgroup const& a, Subgroup const& b) {
    require_same_group(a, b);
    auto els = (a.bits() & b.bits()).to_vector();
    return from_elements(a.group(), std::move(els));
  }

  // H^g = g^{-1} H g
  inline Subgroup conjugate(Subgroup const& H, Elem g) {
    auto const& G = *H.group();
    std::vector<Elem> els;
    els.reserve(H.order());
    Elem const gi = G.inv(g);
    for (Elem h : H.elements()) {
      els.push_back(G.mul(gi, G.mul(h, g)));
    }
    std::sort(els.begin(), els.end());
    std::vector<Elem> gens;
    for (Elem h : H.generators()) {
      gens.push_back(G.mul(gi, G.mul(h, g)));
    }
    return Subgroup(H.group(), std::move(els), std::move(gens));
  }

  // Representatives of the right cosets Ht, the least code in each.
  inline std::vector<Elem> right_transversal(Subgroup const& H) {
    auto const& G = *H.group();
    ElementSet covered(G.order());
    std::vector<Elem> reps;
    for (Elem t = 0; t < G.order(); ++t) {
      if (covered.test(t)) {
        continue;
      }
      reps.push_back(t);
      for (Elem h : H.elements()) {
        covered.set(G.mul(h, t));
      }
    }
    return reps;
  }

  inline bool is_normal(Subgroup const& H) {
    auto const& G = *H.group();
    for (int i = 0; i < G.ngens(); ++i) {
      Elem const g = G.gen(i);
      for (Elem h : H.generators()) {
        if (!H.contains(G.conj(h, g))) {
          return false;
        }
      }
    }
    return true;
  }

  // Largest normal subgroup inside H: the elements h with t h t^{-1} in H for
  // every coset representative t.
  inline Subgroup core(Subgroup const& H) {
    if (is_normal(H)) {
      return H;
    }
    auto const& G = *H.group();
    std::vector<Elem> keep = H.elements();
    for (Elem t : right_transversal(H)) {
      if (t == 0) {
        continue;
      }
      Elem const ti = G.inv(t);
      std::vector<Elem> next;
      for (Elem h : keep) {
        if (H.contains(G.mul(t, G.mul(h, ti)))) {
          next.push_back(h);
        }
      }
      keep = std::move(next);
      if (keep.size() == 1) {
        break;
      }
    }
    return from_elements(H.group(), std::move(keep));
  }

  inline Subgroup normal_closure(GroupPtr const& G, std::vector<Elem> const& gens) {
    auto H = closure(G, gens);
    for (;;) {
      std::vector<Elem> extra;
      for (int i = 0; i < G->ngens(); ++i) {
        for (Elem h : H.generators()) {
          Elem const c = G->conj(h, G->gen(i));
          if (!H.contains(c)) {
            extra.push_back(c);
          }
        }
      }
      if (extra.empty()) {
        return H;
      }
      auto all = H.generators();
      all.insert(all.end(), extra.begin(), extra.end());
      H = closure(G, all);
    }
  }

  // Subgroup generated by H and K.
  inline Subgroup join(Subgroup const& H, Subgroup const& K) {
    require_same_group(H, K);
    auto gens = H.generators();
    gens.insert(gens.end(), K.generators().begin(), K.generators().end());
    return closure(H.group(), gens);
  }

  // Exponent vectors of the generators, for display and serialization.
  inline std::vector<std::vector<int>> generator_vectors(Subgroup const& H) {
    std::vector<std::vector<int>> out;
    for (Elem g : H.generators()) {
      out.push_back(H.group()->exponents(g));
    }
    return out;
  }

  inline std::string describe(Subgroup const& H) {
    std::string s = "<";
    auto const& G = *H.group();
    for (std::size_t t = 0; t < H.generators().size(); ++t) {
      if (t > 0) {
        s += ", ";
      }
      s += G.to_string(H.generators()[t]);
    }
    return s + "> of order " + std::to_string(H.order());
  }

}  // namespace pgroup
