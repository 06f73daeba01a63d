#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "families.hpp"
#include "group.hpp"
#include "modular.hpp"
#include "structure.hpp"
#include "subgroup.hpp"

namespace pgroup {

  // Linear map on a rank-2 elementary abelian central subgroup V, given by
  // v = h^p |-> a commutator of h with a fixed witness w.
  struct PsiMap {
    int prime = 0;
    // column c holds the coordinates of the image of basis[c]
    std::array<std::array<int, 2>, 2> matrix{};
    std::array<Elem, 2> basis{};
    Elem witness = 0;
    // scalar attached to the witness (the z- or y-exponent of w)
    int t = 0;
    // true for h^p |-> [w,h], false for h^p |-> [h,w]
    bool witness_first = true;

    int det() const {
      return static_cast<int>(mod(static_cast<std::int64_t>(matrix[0][0]) * matrix[1][1] -
                                      static_cast<std::int64_t>(matrix[0][1]) * matrix[1][0],
                                  prime));
    }

    int trace() const {
      return static_cast<int>(mod(matrix[0][0] + matrix[1][1], prime));
    }

    bool is_scalar() const {
      return matrix[0][1] == 0 && matrix[1][0] == 0 && matrix[0][0] == matrix[1][1];
    }

    int det_class() const {
      return legendre(det(), prime);
    }

    // (tr)^2 / det, or nullopt when det = 0
    std::optional<int> tr2_over_det() const {
      int const d = det();
      if (d == 0) {
        return std::nullopt;
      }
      std::int64_t const tr = trace();
      return static_cast<int>(mod(tr * tr % prime * inv_mod(d, prime), prime));
    }

    // eigenvalues in F_p, increasing
    std::vector<int> eigenvalues() const {
      std::vector<int> ev;
      for (int e = 0; e < prime; ++e) {
        std::int64_t const a = matrix[0][0] - e, d = matrix[1][1] - e;
        if (mod(a * d - static_cast<std::int64_t>(matrix[0][1]) * matrix[1][0], prime) == 0) {
          ev.push_back(e);
        }
      }
      return ev;
    }

    std::string to_string() const {
      std::ostringstream os;
      os << "[[" << matrix[0][0] << "," << matrix[0][1] << "],[" << matrix[1][0] << "," << matrix[1][1] << "]]";
      return os.str();
    }
  };

  namespace detail {

    // Coordinates of v in <b0, b1>, or nullopt when v is outside.
    inline std::optional<std::array<int, 2>> coords(PcGroup const& G, std::array<Elem, 2> const& b, Elem v) {
      int const p = G.prime();
      Elem r0 = 0;
      for (int a = 0; a < p; ++a) {
        Elem r = r0;
        for (int c = 0; c < p; ++c) {
          if (r == v) {
            return std::array<int, 2>{a, c};
          }
          r = G.mul(r, b[1]);
        }
        r0 = G.mul(r0, b[0]);
      }
      return std::nullopt;
    }

    inline std::optional<PsiMap> psi_from_roots(PcGroup const& G, std::array<Elem, 2> const& basis,
                                                std::array<Elem, 2> const& roots, Elem w, bool witness_first) {
      PsiMap m;
      m.prime = G.prime();
      m.basis = basis;
      m.witness = w;
      m.witness_first = witness_first;
      for (int c = 0; c < 2; ++c) {
        Elem const img = witness_first ? G.comm(w, roots[static_cast<std::size_t>(c)])
                                       : G.comm(roots[static_cast<std::size_t>(c)], w);
        auto const xy = coords(G, basis, img);
        if (!xy) {
          return std::nullopt;
        }
        m.matrix[0][static_cast<std::size_t>(c)] = (*xy)[0];
        m.matrix[1][static_cast<std::size_t>(c)] = (*xy)[1];
      }
      return m;
    }

    // Least element of `pool` whose p-th power is v.
    inline std::optional<Elem> least_root(PcGroup const& G, std::vector<Elem> const& pool, Elem v) {
      for (Elem h : pool) {
        if (G.pth_power(h) == v) {
          return h;
        }
      }
      return std::nullopt;
    }

    inline std::vector<Elem> all_elements(PcGroup const& G) {
      std::vector<Elem> v(G.order());
      for (Elem a = 0; a < G.order(); ++a) {
        v[a] = a;
      }
      return v;
    }

  }  // namespace detail

  // Witnesses for psi on a family candidate, in increasing order. Family Q:
  // elements outside H = <y, x, u, n>. Family Qzeta: non-central elements of
  // the derived subgroup.
  inline std::vector<Elem> psi_witnesses(GroupPtr const& G, FamilyParams const& fp) {
    std::vector<Elem> out;
    if (fp.family == Family::Q) {
      for (Elem a = 0; a < G->order(); ++a) {
        if (G->exponent(a, qbasis::z) != 0) {
          out.push_back(a);
        }
      }
      return out;
    }
    auto const D = derived_subgroup(G);
    auto const Z = center(G);
    for (Elem a : D.elements()) {
      if (!Z.contains(a)) {
        out.push_back(a);
      }
    }
    return out;
  }

  // psi_w on a family candidate, in the basis (x^p, n).
  //   family Q (needs i, l != 0):  psi(h^p) = [h, w] for h in <y, x, u, n>
  //   family Qzeta (needs j != 0): psi(h^p) = [w, h] for h in G
  inline PsiMap psi_map(GroupPtr const& G, FamilyParams const& fp, Elem w) {
    validate(fp);
    auto const& g = *G;
    std::array<Elem, 2> const basis{g.gen(3), g.gen(4)};
    std::optional<PsiMap> m;
    if (fp.family == Family::Q) {
      if (fp.params[0] == 0 || fp.params[3] == 0) {
        throw precondition_error("psi is defined on family Q only when i and l are non-zero");
      }
      if (g.exponent(w, qbasis::z) == 0) {
        throw precondition_error("witness lies in the abelian subgroup");
      }
      std::vector<Elem> pool;
      for (Elem a = 0; a < g.order(); ++a) {
        if (g.exponent(a, qbasis::z) == 0) {
          pool.push_back(a);
        }
      }
      auto r0 = detail::least_root(g, pool, basis[0]);
      auto r1 = detail::least_root(g, pool, basis[1]);
      if (!r0 || !r1) {
        throw precondition_error("basis element without a p-th root in the abelian subgroup");
      }
      m = detail::psi_from_roots(g, basis, {*r0, *r1}, w, false);
      if (m) {
        m->t = g.exponent(w, qbasis::z);
      }
    } else {
      if (fp.params[0] == 0) {
        throw precondition_error("psi is defined on family Qzeta only when j is non-zero");
      }
      auto const ws = psi_witnesses(G, fp);
      if (!std::binary_search(ws.begin(), ws.end(), w)) {
        throw precondition_error("witness must be a non-central element of the derived subgroup");
      }
      auto const pool = detail::all_elements(g);
      auto r0 = detail::least_root(g, pool, basis[0]);
      auto r1 = detail::least_root(g, pool, basis[1]);
      if (!r0 || !r1) {
        throw precondition_error("basis element without a p-th root");
      }
      m = detail::psi_from_roots(g, basis, {*r0, *r1}, w, true);
      if (m) {
        m->t = g.exponent(w, zbasis::y);
      }
    }
    if (!m) {
      throw precondition_error("psi image leaves <x^p, n>");
    }
    return *m;
  }

  inline Elem default_psi_witness(GroupPtr const& G, FamilyParams const& fp) {
    auto const ws = psi_witnesses(G, fp);
    if (ws.empty()) {
      throw precondition_error("no psi witness");
    }
    return ws.front();
  }

  // ---------------------------------------------------------------------------
  // Small structural predicates

  inline bool is_cyclic(GroupPtr const& G) {
    for (Elem a = 0; a < G->order(); ++a) {
      if (G->element_order(a) == G->order()) {
        return true;
      }
    }
    return G->order() == 1;
  }

  inline bool is_elementary_abelian(GroupPtr const& G) {
    auto const W = whole_group(G);
    if (!is_abelian(W)) {
      return false;
    }
    for (int i = 0; i < G->ngens(); ++i) {
      if (G->pth_power(G->gen(i)) != 0) {
        return false;
      }
    }
    return true;
  }

  // A cyclic subgroup of index at most p.
  inline bool has_maximal_cyclic_subgroup(GroupPtr const& G) {
    std::uint64_t const target = G->order() / static_cast<std::uint64_t>(G->prime());
    for (Elem a = 0; a < G->order(); ++a) {
      if (G->element_order(a) >= target) {
        return true;
      }
    }
    return G->order() == 1;
  }

  // ---------------------------------------------------------------------------
  // Fingerprint

  // Class of a psi matrix up to scalars: (legendre(det), tr^2/det or -1,
  // trace is zero).
  using PsiClass = std::tuple<int, int, bool>;

  inline PsiClass psi_class(PsiMap const& m) {
    auto const q = m.tr2_over_det();
    return {m.det_class(), q ? *q : -1, m.trace() == 0};
  }

  struct MaximalAbelianData {
    std::vector<int> invariants;
    std::size_t commutator_order = 0;  // |[G, Omega_1(M)]|
    std::size_t commutator_cap_powers = 0;  // |[G, Omega_1(M)] cap M^p|

    friend auto operator<=>(MaximalAbelianData const&, MaximalAbelianData const&) = default;
  };

  struct Fingerprint {
    std::uint64_t order = 0;
    std::uint64_t exponent = 0;
    std::vector<int> center;
    std::size_t derived_order = 0;
    bool derived_abelian = true;
    std::vector<int> derived;
    std::size_t power_order = 0;
    bool power_is_set = true;
    std::size_t frattini_order = 0;
    std::size_t derived_cap_center = 0;
    std::size_t power_cap_derived = 0;
    // (element order, class size) -> number of elements
    std::vector<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> class_profile;
    std::vector<MaximalAbelianData> abelian_maximals;
    // psi classes over all witnesses, for psi built on the unique abelian
    // maximal subgroup and for psi built on the centre
    std::vector<PsiClass> psi_abelian;
    std::vector<PsiClass> psi_center;
    // exponents of {g : [w,g] in <G^p>} over non-central w in G' with [w,G] central
    std::vector<std::uint64_t> kernel_exponents;

    friend bool operator==(Fingerprint const&, Fingerprint const&) = default;

    std::string to_string() const;
  };

  namespace detail {

    inline std::string ivec(std::vector<int> const& v) {
      std::string s = "[";
      for (std::size_t t = 0; t < v.size(); ++t) {
        s += (t ? "," : "") + std::to_string(v[t]);
      }
      return s + "]";
    }

    inline std::vector<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> class_profile(PcGroup const& G) {
      std::vector<bool> seen(G.order(), false);
      std::map<std::pair<std::uint64_t, std::uint64_t>, std::uint64_t> counts;
      std::vector<Elem> orbit;
      for (Elem a = 0; a < G.order(); ++a) {
        if (seen[a]) {
          continue;
        }
        orbit.assign(1, a);
        seen[a] = true;
        for (std::size_t t = 0; t < orbit.size(); ++t) {
          for (int i = 0; i < G.ngens(); ++i) {
            Elem const c = G.conj(orbit[t], G.gen(i));
            if (!seen[c]) {
              seen[c] = true;
              orbit.push_back(c);
            }
          }
        }
        counts[{G.element_order(a), orbit.size()}] += orbit.size();
      }
      std::vector<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>> out;
      for (auto const& [k, v] : counts) {
        out.emplace_back(k.first, k.second, v);
      }
      return out;
    }

    // Maximal subgroups as preimages of hyperplanes of G / Phi(G).
    inline std::vector<Subgroup> maximal_subgroups(GroupPtr const& G, Subgroup const& Phi) {
      Quotient q(Phi);
      auto const& V = q.group();
      std::vector<Subgroup> out;
      // hyperplanes of V: kernels of nonzero functionals up to scalars
      int const r = V->ngens();
      int const p = V->prime();
      std::vector<int> f(static_cast<std::size_t>(r), 0);
      std::uint64_t total = 1;
      for (int t = 0; t < r; ++t) {
        total *= static_cast<std::uint64_t>(p);
      }
      for (std::uint64_t code = 1; code < total; ++code) {
        std::uint64_t c = code;
        for (int t = r - 1; t >= 0; --t) {
          f[static_cast<std::size_t>(t)] = static_cast<int>(c % static_cast<std::uint64_t>(p));
          c /= static_cast<std::uint64_t>(p);
        }
        // normalized: first nonzero entry equal to 1
        int lead = 0;
        while (f[static_cast<std::size_t>(lead)] == 0) {
          ++lead;
        }
        if (f[static_cast<std::size_t>(lead)] != 1) {
          continue;
        }
        std::vector<Elem> gens = Phi.generators();
        for (Elem v = 0; v < V->order(); ++v) {
          auto const ex = V->exponents(v);
          std::int64_t s = 0;
          for (int t = 0; t < r; ++t) {
            s += static_cast<std::int64_t>(f[static_cast<std::size_t>(t)]) * ex[static_cast<std::size_t>(t)];
          }
          if (mod(s, p) == 0) {
            gens.push_back(q.lift(v));
          }
        }
        out.push_back(closure(G, gens));
      }
      return out;
    }

    inline std::vector<PsiClass> psi_abelian_classes(GroupPtr const& G, std::vector<Subgroup> const& abelian_max,
                                                     Subgroup const& Z) {
      auto const& g = *G;
      if (abelian_max.size() != 1) {
        return {};
      }
      auto const& H = abelian_max.front();
      auto const V = pth_power_image(H).subgroup;
      if (V.order() != static_cast<std::size_t>(g.prime() * g.prime()) || !V.subgroup_of(Z) ||
          omega_elements(V, 1).size() != V.order()) {
        return {};
      }
      for (Elem h : omega_elements(H, 1)) {
        if (!Z.contains(h)) {
          return {};
        }
      }
      auto const seq = induced_sequence(V);
      std::array<Elem, 2> const basis{seq[0], seq[1]};
      auto r0 = least_root(g, H.elements(), basis[0]);
      auto r1 = least_root(g, H.elements(), basis[1]);
      std::vector<PsiClass> out;
      for (Elem w = 0; w < g.order(); ++w) {
        if (H.contains(w)) {
          continue;
        }
        bool ok = true;
        for (Elem h : H.generators()) {
          ok = ok && V.contains(g.comm(h, w));
        }
        if (!ok) {
          continue;
        }
        if (auto m = psi_from_roots(g, basis, {*r0, *r1}, w, false)) {
          out.push_back(psi_class(*m));
        }
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }

    inline std::vector<PsiClass> psi_center_classes(GroupPtr const& G, Subgroup const& Z, Subgroup const& D) {
      auto const& g = *G;
      int const p = g.prime();
      if (Z.order() != static_cast<std::size_t>(p * p) || omega_elements(Z, 1).size() != Z.order()) {
        return {};
      }
      // the p-power map must be a homomorphism onto Z
      for (int i = 0; i < g.ngens(); ++i) {
        Elem const a = g.gen(i);
        Elem const ap = g.pth_power(a);
        for (Elem b = 0; b < g.order(); ++b) {
          if (g.pth_power(g.mul(a, b)) != g.mul(ap, g.pth_power(b))) {
            return {};
          }
        }
      }
      std::vector<Elem> kernel;
      std::vector<bool> hit(g.order(), false);
      for (Elem a = 0; a < g.order(); ++a) {
        Elem const q = g.pth_power(a);
        hit[q] = true;
        if (q == 0) {
          kernel.push_back(a);
        }
      }
      for (Elem z : Z.elements()) {
        if (!hit[z]) {
          return {};
        }
      }
      auto const K = closure(G, kernel);
      auto const seq = induced_sequence(Z);
      std::array<Elem, 2> const basis{seq[0], seq[1]};
      auto const pool = all_elements(g);
      auto r0 = least_root(g, pool, basis[0]);
      auto r1 = least_root(g, pool, basis[1]);
      std::vector<PsiClass> out;
      for (Elem w : D.elements()) {
        if (Z.contains(w)) {
          continue;
        }
        bool ok = true;
        for (int i = 0; i < g.ngens() && ok; ++i) {
          ok = Z.contains(g.comm(w, g.gen(i)));
        }
        for (Elem k : K.generators()) {
          ok = ok && g.comm(w, k) == 0;
        }
        if (!ok) {
          continue;
        }
        if (auto m = psi_from_roots(g, basis, {*r0, *r1}, w, true)) {
          out.push_back(psi_class(*m));
        }
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }

    inline std::vector<std::uint64_t> kernel_exponents(GroupPtr const& G, Subgroup const& Z, Subgroup const& D,
                                                       Subgroup const& J) {
      auto const& g = *G;
      std::vector<std::uint64_t> out;
      if (!J.subgroup_of(Z)) {
        return out;
      }
      std::vector<std::uint64_t> orders(g.order());
      for (Elem a = 0; a < g.order(); ++a) {
        orders[a] = g.element_order(a);
      }
      for (Elem w : D.elements()) {
        if (Z.contains(w)) {
          continue;
        }
        bool central = true;
        for (int i = 0; i < g.ngens() && central; ++i) {
          central = Z.contains(g.comm(w, g.gen(i)));
        }
        if (!central) {
          continue;
        }
        std::uint64_t e = 1;
        for (Elem a = 0; a < g.order(); ++a) {
          if (orders[a] > e && J.contains(g.comm(w, a))) {
            e = orders[a];
          }
        }
        out.push_back(e);
      }
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }

  }  // namespace detail

  inline Fingerprint fingerprint(GroupPtr const& G) {
    Fingerprint fp;
    auto const W = whole_group(G);
    fp.order = G->order();
    fp.exponent = exponent_of(W);
    auto const Z = center(G);
    fp.center = abelian_invariants(Z);
    auto const D = derived_subgroup(G);
    fp.derived_order = D.order();
    fp.derived_abelian = is_abelian(D);
    if (fp.derived_abelian) {
      fp.derived = abelian_invariants(D);
    }
    auto const P = pth_power_image(G);
    fp.power_order = P.subgroup.order();
    fp.power_is_set = P.is_power_set;
    auto const Phi = frattini(G);
    fp.frattini_order = Phi.order();
    fp.derived_cap_center = intersection(D, Z).order();
    fp.power_cap_derived = intersection(P.subgroup, D).order();
    fp.class_profile = detail::class_profile(*G);

    std::vector<Subgroup> abelian_max;
    if (G->order() > 1) {
      for (auto& M : detail::maximal_subgroups(G, Phi)) {
        if (!is_abelian(M)) {
          continue;
        }
        MaximalAbelianData d;
        d.invariants = abelian_invariants(M);
        auto const O = omega1(M);
        auto const C = commutator_subgroup(W, O);
        d.commutator_order = C.order();
        d.commutator_cap_powers = intersection(C, pth_power_image(M).subgroup).order();
        fp.abelian_maximals.push_back(std::move(d));
        abelian_max.push_back(std::move(M));
      }
    }
    std::sort(fp.abelian_maximals.begin(), fp.abelian_maximals.end());
    fp.psi_abelian = detail::psi_abelian_classes(G, abelian_max, Z);
    fp.psi_center = detail::psi_center_classes(G, Z, D);
    fp.kernel_exponents = detail::kernel_exponents(G, Z, D, P.subgroup);
    return fp;
  }

  inline std::string Fingerprint::to_string() const {
    std::ostringstream os;
    os << "order " << order << "\nexponent " << exponent << "\ncenter " << detail::ivec(center) << "\nderived "
       << derived_order << (derived_abelian ? " " + detail::ivec(derived) : std::string(" nonabelian")) << "\npowers "
       << power_order << (power_is_set ? "" : " (generated)") << "\nfrattini " << frattini_order
       << "\nderived_cap_center " << derived_cap_center << "\npower_cap_derived " << power_cap_derived
       << "\nclass_profile";
    for (auto const& [o, s, c] : class_profile) {
      os << " " << o << ":" << s << "x" << c;
    }
    os << "\nabelian_maximals";
    for (auto const& m : abelian_maximals) {
      os << " " << detail::ivec(m.invariants) << "/" << m.commutator_order << "/" << m.commutator_cap_powers;
    }
    auto psi = [&](char const* name, std::vector<PsiClass> const& v) {
      os << "\n" << name;
      for (auto const& [dc, q, tz] : v) {
        os << " (" << dc << "," << q << "," << (tz ? 1 : 0) << ")";
      }
    };
    psi("psi_abelian", psi_abelian);
    psi("psi_center", psi_center);
    os << "\nkernel_exponents";
    for (auto e : kernel_exponents) {
      os << " " << e;
    }
    os << "\n";
    return os.str();
  }

}  // namespace pgroup
