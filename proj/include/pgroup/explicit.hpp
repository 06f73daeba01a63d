#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "families.hpp"
#include "group.hpp"
#include "invariants.hpp"
#include "isomorphism.hpp"
#include "modular.hpp"
#include "structure.hpp"

namespace pgroup {

  // Hand-built isomorphisms from exceptional extensions of Q_alpha to
  // extensions of Q_1.
  enum class ExplicitCase { P2_alpha_to_Q1, P4_alpha_to_Q1, j1_normal_form };

  inline std::string explicit_case_name(ExplicitCase c) {
    switch (c) {
      case ExplicitCase::P2_alpha_to_Q1:
        return "P2_alpha_to_Q1";
      case ExplicitCase::P4_alpha_to_Q1:
        return "P4_alpha_to_Q1";
      case ExplicitCase::j1_normal_form:
        return "j1_normal_form";
    }
    return {};
  }

  inline ExplicitCase parse_explicit_case(std::string const& s) {
    for (auto c : {ExplicitCase::P2_alpha_to_Q1, ExplicitCase::P4_alpha_to_Q1, ExplicitCase::j1_normal_form}) {
      if (explicit_case_name(c) == s) {
        return c;
      }
    }
    throw parse_error("unknown explicit case '" + s + "'");
  }

  struct ExplicitIso {
    ExplicitCase method = ExplicitCase::P2_alpha_to_Q1;
    FamilyParams source;  // extension of Q_alpha
    FamilyParams target;  // extension of Q_1
    // images of the target's pc generators in the source group
    std::vector<Elem> images;
    // (gamma, delta) of the normal form, j = 1 only
    std::optional<std::pair<int, int>> eigenvalues;
    bool verified = false;
  };

  namespace detail {

    inline void require_big_prime(int p) {
      if (!is_prime(p) || p <= 3) {
        throw precondition_error("explicit isomorphisms need a prime p > 3");
      }
    }

    // Normal form on (s, t, w, s^p, t^p):
    //   [s,t] = w, [w,s] = s^{p gamma}, [w,t] = t^{p delta}.
    inline PcPresentation j1_normal_form_presentation(int p, int gamma, int delta) {
      PcPresentation P(p, 5);
      P.set_labels({"s", "t", "w", "sp", "tp"});
      P.set_power(0, P.word({{3, 1}}));
      P.set_power(1, P.word({{4, 1}}));
      P.set_commutator(1, 0, P.word({{2, p - 1}}));
      P.set_commutator(2, 0, P.word({{3, mod(gamma, p)}}));
      P.set_commutator(2, 1, P.word({{4, mod(delta, p)}}));
      return P;
    }

    struct NormalFormData {
      int gamma = 0;
      int delta = 0;
      std::vector<Elem> images;  // s, t, w, s^p, t^p
    };

    // Elements realizing the normal form inside a j = 1 candidate, from the
    // witness w (non-central, of order p, in the derived subgroup).
    inline std::optional<NormalFormData> normal_form_from_witness(GroupPtr const& G, FamilyParams const& fp, Elem w,
                                                                  Subgroup const& Z) {
      auto const& g = *G;
      int const p = g.prime();
      auto const psi = psi_map(G, fp, w);
      auto const ev = psi.eigenvalues();
      if (ev.size() != 2) {
        return std::nullopt;
      }
      auto eigenvector = [&](int e) -> Elem {
        for (int a = 0; a < p; ++a) {
          for (int b = 0; b < p; ++b) {
            if (a == 0 && b == 0) {
              continue;
            }
            std::int64_t const r0 = static_cast<std::int64_t>(psi.matrix[0][0]) * a + psi.matrix[0][1] * b - e * a;
            std::int64_t const r1 = static_cast<std::int64_t>(psi.matrix[1][0]) * a + psi.matrix[1][1] * b - e * b;
            if (mod(r0, p) == 0 && mod(r1, p) == 0) {
              return g.mul(g.pow(psi.basis[0], a), g.pow(psi.basis[1], b));
            }
          }
        }
        return 0;
      };
      auto const pool = all_elements(g);
      auto s = least_root(g, pool, eigenvector(ev[0]));
      auto const t = least_root(g, pool, eigenvector(ev[1]));
      if (!s || !t) {
        return std::nullopt;
      }
      // [s,t] lies in w^i Z; rescale s so that it lies in wZ
      Elem const c = g.comm(*s, *t);
      int found = 0;
      for (int i = 1; i < p && found == 0; ++i) {
        if (Z.contains(g.mul(g.inv(g.pow(w, i)), c))) {
          found = i;
        }
      }
      if (found == 0) {
        return std::nullopt;
      }
      s = g.pow(*s, inv_mod(found, p));
      Elem const w2 = g.comm(*s, *t);
      return NormalFormData{ev[0], ev[1], {*s, *t, w2, g.pth_power(*s), g.pth_power(*t)}};
    }

    // Maps B's pc generators into C given isomorphisms N -> B and N -> C.
    inline std::vector<Elem> compose_through(PcGroup const& N, PcGroup const& B, std::vector<Elem> const& toB,
                                             PcGroup const& C, std::vector<Elem> const& toC) {
      std::vector<Elem> out(static_cast<std::size_t>(B.ngens()), 0);
      std::vector<bool> done(out.size(), false);
      std::size_t left = out.size();
      for (Elem a = 0; a < N.order() && left > 0; ++a) {
        auto const v = N.exponents(a);
        Elem const b = evaluate_vector(B, toB, v);
        for (int i = 0; i < B.ngens(); ++i) {
          if (!done[static_cast<std::size_t>(i)] && B.gen(i) == b) {
            out[static_cast<std::size_t>(i)] = evaluate_vector(C, toC, v);
            done[static_cast<std::size_t>(i)] = true;
            --left;
          }
        }
      }
      return out;
    }

  }  // namespace detail

  // P2 over Q_alpha: z~ = x^{1-alpha} z, n~ = x^{(alpha-1)p} n.
  inline ExplicitIso explicit_p2(int p) {
    detail::require_big_prime(p);
    int const alpha = static_cast<int>(least_nonresidue(p));
    ExplicitIso r;
    r.method = ExplicitCase::P2_alpha_to_Q1;
    r.source = make_qzeta_params(p, alpha, 0, 1, 0);
    r.target = make_qzeta_params(p, 1, 0, 1, 0);
    auto const G = make_group(build_candidate(r.source));
    auto const T = make_group(build_candidate(r.target));
    using namespace zbasis;
    auto const& g = *G;
    Elem const X = g.gen(x);
    Elem const Zt = g.mul(g.pow(X, 1 - alpha), g.gen(z));
    Elem const Nt = g.mul(g.pow(X, static_cast<std::int64_t>(alpha - 1) * p), g.gen(n));
    r.images = {Zt, X, g.gen(y), g.pth_power(X), Nt};
    r.verified = is_isomorphism(*T, g, r.images);
    return r;
  }

  // P4 over Q_alpha. With t^2 - b^2 = 4 alpha:
  //   a = (t - (2alpha+1)b)/2, c = -(alpha+1)b, d = (t + (2alpha+1)b)/(2alpha),
  //   x~ = x^a z^b, z~ = x^c z^d, y~ = [x~,z~], n~ = x^{pb} n^{d-b}.
  inline ExplicitIso explicit_p4(int p) {
    detail::require_big_prime(p);
    std::int64_t const alpha = least_nonresidue(p);
    ExplicitIso r;
    r.method = ExplicitCase::P4_alpha_to_Q1;
    r.source = make_qzeta_params(p, static_cast<int>(alpha), 0, 1, 1);
    r.target = make_qzeta_params(p, 1, 0, 1, static_cast<int>(alpha));
    std::optional<std::pair<std::int64_t, std::int64_t>> tb;
    for (std::int64_t t = 0; t < p && !tb; ++t) {
      for (std::int64_t b = 0; b < p && !tb; ++b) {
        if (mod(t * t - b * b - 4 * alpha, p) == 0) {
          tb = std::make_pair(t, b);
        }
      }
    }
    if (!tb) {
      throw classification_error("no solution of t^2 - b^2 = 4 alpha modulo " + std::to_string(p));
    }
    auto const [t, b] = *tb;
    std::int64_t const a = mod((t - (2 * alpha + 1) * b) * inv_mod(2, p), p);
    std::int64_t const c = mod(-(alpha + 1) * b, p);
    std::int64_t const d = mod((t + (2 * alpha + 1) * b) * inv_mod(2 * alpha, p), p);
    if (mod(a * d - b * c, p) != 1) {
      throw classification_error("P4 scalars fail ad - bc = 1");
    }
    auto const G = make_group(build_candidate(r.source));
    auto const T = make_group(build_candidate(r.target));
    using namespace zbasis;
    auto const& g = *G;
    Elem const X = g.gen(x), Zg = g.gen(z);
    Elem const Xt = g.mul(g.pow(X, a), g.pow(Zg, b));
    Elem const Zt = g.mul(g.pow(X, c), g.pow(Zg, d));
    Elem const Yt = g.comm(Xt, Zt);
    Elem const Nt = g.mul(g.pow(X, static_cast<std::int64_t>(p) * b), g.pow(g.gen(n), d - b));
    r.images = {Zt, Xt, Yt, g.pth_power(Xt), Nt};
    r.verified = is_isomorphism(*T, g, r.images);
    return r;
  }

  // j = 1 extension of Q_alpha with parameters (1, k, m) against the
  // extension of Q_1 with parameters (1, k, alpha m): both are matched to
  // the same normal form and the two maps are composed.
  inline ExplicitIso explicit_j1(FamilyParams const& source) {
    validate(source);
    int const p = source.prime;
    detail::require_big_prime(p);
    int const alpha = static_cast<int>(least_nonresidue(p));
    if (source.family != Family::Qzeta || legendre(source.zeta, p) != -1 || source.params[0] != 1) {
      throw precondition_error("normal form needs a j = 1 extension of Q_alpha");
    }
    ExplicitIso r;
    r.method = ExplicitCase::j1_normal_form;
    r.source = source;
    r.target = make_qzeta_params(p, 1, 1, source.params[1],
                                 static_cast<int>(mod(static_cast<std::int64_t>(alpha) * source.params[2], p)));
    auto const G = make_group(build_candidate(r.source));
    auto const E = make_group(build_candidate(r.target));
    auto const ZG = center(G);
    auto const ZE = center(E);
    auto first = [&](GroupPtr const& H, FamilyParams const& fp, Subgroup const& Z,
                     std::optional<std::pair<int, int>> want) -> std::optional<detail::NormalFormData> {
      for (Elem w : psi_witnesses(H, fp)) {
        if (H->pth_power(w) != 0) {
          continue;
        }
        auto nf = detail::normal_form_from_witness(H, fp, w, Z);
        if (nf && (!want || (nf->gamma == want->first && nf->delta == want->second))) {
          return nf;
        }
      }
      return std::nullopt;
    };
    auto const nfG = first(G, r.source, ZG, std::nullopt);
    if (!nfG) {
      return r;
    }
    r.eigenvalues = std::make_pair(nfG->gamma, nfG->delta);
    auto const nfE = first(E, r.target, ZE, r.eigenvalues);
    if (!nfE) {
      return r;
    }
    auto const N = make_group(detail::j1_normal_form_presentation(p, nfG->gamma, nfG->delta));
    if (!is_isomorphism(*N, *G, nfG->images) || !is_isomorphism(*N, *E, nfE->images)) {
      return r;
    }
    r.images = detail::compose_through(*N, *E, nfE->images, *G, nfG->images);
    r.verified = is_isomorphism(*E, *G, r.images);
    return r;
  }

  // Explicit isomorphism for an exceptional extension of Q_alpha, chosen by
  // its canonical label.
  inline ExplicitIso explicit_isomorphism(FamilyParams const& source) {
    auto const cf = canonical_params(source);
    if (source.family != Family::Qzeta || legendre(source.zeta, source.prime) != -1) {
      throw precondition_error("explicit isomorphisms start from an extension of Q_alpha");
    }
    if (!predicted_exceptional(cf.label, source.prime, source.zeta)) {
      throw precondition_error("explicit isomorphisms cover exceptional extensions only");
    }
    if (cf.label.index == 2) {
      return explicit_p2(source.prime);
    }
    if (cf.label.index == 4) {
      return explicit_p4(source.prime);
    }
    return explicit_j1(cf.params);
  }

  // Every exceptional j = 1 extension of Q_alpha at p.
  inline std::vector<ExplicitIso> explicit_j1_all(int p) {
    detail::require_big_prime(p);
    int const alpha = static_cast<int>(least_nonresidue(p));
    std::vector<ExplicitIso> out;
    for (auto const& lab : table_labels(Family::Qzeta, p)) {
      auto const fp = label_to_params(lab, p, alpha);
      if (fp.params[0] == 1 && predicted_exceptional(lab, p, alpha)) {
        out.push_back(explicit_j1(fp));
      }
    }
    return out;
  }

  inline bool verify_explicit_isomorphism(ExplicitCase c, int p) {
    switch (c) {
      case ExplicitCase::P2_alpha_to_Q1:
        return explicit_p2(p).verified;
      case ExplicitCase::P4_alpha_to_Q1:
        return explicit_p4(p).verified;
      case ExplicitCase::j1_normal_form: {
        auto const all = explicit_j1_all(p);
        for (auto const& r : all) {
          if (!r.verified) {
            return false;
          }
        }
        return !all.empty();
      }
    }
    return false;
  }

}  // namespace pgroup
