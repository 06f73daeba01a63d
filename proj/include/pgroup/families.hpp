#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "errors.hpp"
#include "group.hpp"
#include "modular.hpp"
#include "presentation.hpp"

namespace pgroup {

  // Generator indices of the two pc bases.
  //   Q family:     (z, y, x, u, n)
  //   Qzeta family: (z, x, y, u, n)
  // In both, u = x^p and n is the central generator of the extension.
  namespace qbasis {
    inline constexpr int z = 0, y = 1, x = 2, u = 3, n = 4;
  }
  namespace zbasis {
    inline constexpr int z = 0, x = 1, y = 2, u = 3, n = 4;
  }

  enum class Family { Q, Qzeta };

  inline std::string family_name(Family f) {
    return f == Family::Q ? "Q" : "Qzeta";
  }

  // Parameters (i,j,k,l) for family Q or (j,k,m) for family Qzeta, reduced
  // modulo p. zeta is only meaningful for Qzeta.
  struct FamilyParams {
    Family family = Family::Q;
    int prime = 5;
    int zeta = 0;
    std::vector<int> params;

    friend bool operator==(FamilyParams const&, FamilyParams const&) = default;
  };

  inline void validate(FamilyParams const& fp) {
    if (!is_prime(fp.prime)) {
      throw precondition_error(std::to_string(fp.prime) + " is not prime");
    }
    if (fp.family == Family::Q) {
      if (fp.prime == 2) {
        throw precondition_error("family Q needs an odd prime");
      }
      if (fp.params.size() != 4) {
        throw precondition_error("family Q takes four parameters (i,j,k,l)");
      }
    } else {
      if (fp.prime <= 3) {
        throw precondition_error("family Qzeta needs p > 3");
      }
      if (fp.params.size() != 3) {
        throw precondition_error("family Qzeta takes three parameters (j,k,m)");
      }
      if (mod(fp.zeta, fp.prime) == 0) {
        throw precondition_error("zeta must be a unit modulo p");
      }
    }
  }

  inline FamilyParams make_q_params(int p, int i, int j, int k, int l) {
    FamilyParams fp{Family::Q, p, 0, {}};
    for (int v : {i, j, k, l}) {
      fp.params.push_back(static_cast<int>(mod(v, p)));
    }
    validate(fp);
    return fp;
  }

  inline FamilyParams make_qzeta_params(int p, int zeta, int j, int k, int m) {
    FamilyParams fp{Family::Qzeta, p, static_cast<int>(mod(zeta, p)), {}};
    for (int v : {j, k, m}) {
      fp.params.push_back(static_cast<int>(mod(v, p)));
    }
    validate(fp);
    return fp;
  }

  inline std::string params_to_string(std::vector<int> const& v) {
    std::string s = "(";
    for (std::size_t t = 0; t < v.size(); ++t) {
      if (t > 0) {
        s += ',';
      }
      s += std::to_string(v[t]);
    }
    return s + ")";
  }

  // ---------------------------------------------------------------------------
  // Presentations

  namespace detail {

    inline PcPresentation q_shape(int p, bool with_n) {
      PcPresentation P(p, with_n ? 5 : 4);
      if (with_n) {
        P.set_labels({"z", "y", "x", "u", "n"});
      } else {
        P.set_labels({"z", "y", "x", "u"});
      }
      P.set_power(qbasis::x, P.word({{qbasis::u, 1}}));
      return P;
    }

    inline PcPresentation zeta_shape(int p, bool with_n) {
      PcPresentation P(p, with_n ? 5 : 4);
      if (with_n) {
        P.set_labels({"z", "x", "y", "u", "n"});
      } else {
        P.set_labels({"z", "x", "y", "u"});
      }
      P.set_power(zbasis::x, P.word({{zbasis::u, 1}}));
      P.set_commutator(zbasis::x, zbasis::z, P.word({{zbasis::y, 1}}));
      return P;
    }

    inline void require_odd(int p, char const* what) {
      if (!is_prime(p) || p == 2) {
        throw precondition_error(std::string(what) + " needs an odd prime, got " + std::to_string(p));
      }
    }

  }  // namespace detail

  // Q_zeta(p) = <x,y,z | x^{p^2}=y^p=[x,y]=1, z^p=x^{zeta p}, [x,z]=y, [y,z]=x^{zeta p}>
  inline PcPresentation build_qzeta_quotient(int p, int zeta) {
    detail::require_odd(p, "Q_zeta");
    if (mod(zeta, p) == 0) {
      throw precondition_error("zeta must be a unit modulo p");
    }
    auto P = detail::zeta_shape(p, false);
    P.set_power(zbasis::z, P.word({{zbasis::u, zeta}}));
    P.set_commutator(zbasis::y, zbasis::z, P.word({{zbasis::u, zeta}}));
    return P;
  }

  // The order-p^4 quotients: Q, Q1, Qalpha (odd p), Q81 (p = 3), Q16 (p = 2).
  inline PcPresentation build_quotient(std::string const& name, int p) {
    if (name == "Q") {
      detail::require_odd(p, "Q");
      auto P = detail::q_shape(p, false);
      P.set_commutator(qbasis::y, qbasis::z, P.word({{qbasis::u, 1}}));
      return P;
    }
    if (name == "Q1") {
      return build_qzeta_quotient(p, 1);
    }
    if (name == "Qalpha") {
      detail::require_odd(p, "Qalpha");
      return build_qzeta_quotient(p, static_cast<int>(least_nonresidue(p)));
    }
    if (name == "Q81") {
      if (p != 3) {
        throw precondition_error("Q81 needs p = 3");
      }
      auto P = detail::zeta_shape(3, false);
      P.set_commutator(zbasis::y, zbasis::z, P.word({{zbasis::u, -1}}));
      return P;
    }
    if (name == "Q16") {
      if (p != 2) {
        throw precondition_error("Q16 needs p = 2");
      }
      // pc basis (y, x, x2, x4) with x2 = x^2 and x4 = x^4
      PcPresentation P(2, 4);
      P.set_labels({"y", "x", "x2", "x4"});
      P.set_power(0, P.word({{3, 1}}));
      P.set_power(1, P.word({{2, 1}}));
      P.set_power(2, P.word({{3, 1}}));
      P.set_commutator(1, 0, P.word({{2, 1}, {3, 1}}));
      P.set_commutator(2, 0, P.word({{3, 1}}));
      return P;
    }
    throw precondition_error("unknown quotient '" + name + "'");
  }

  inline std::vector<std::string> quotient_names() {
    return {"Q", "Q1", "Qalpha", "Q81", "Q16"};
  }

  inline PcPresentation build_candidate(FamilyParams const& fp) {
    validate(fp);
    int const p = fp.prime;
    auto const& v = fp.params;
    if (fp.family == Family::Q) {
      using namespace qbasis;
      int const i = v[0], j = v[1], k = v[2], l = v[3];
      auto P = detail::q_shape(p, true);
      P.set_power(z, P.word({{n, j}}));
      P.set_power(y, P.word({{n, i}}));
      P.set_commutator(y, z, P.word({{u, 1}, {n, k}}));
      P.set_commutator(x, z, P.word({{n, l}}));
      return P;
    }
    using namespace zbasis;
    int const zeta = fp.zeta;
    int const j = v[0], k = v[1], m = v[2];
    auto P = detail::zeta_shape(p, true);
    P.set_power(z, P.word({{u, zeta}, {n, j}}));
    P.set_commutator(y, z, P.word({{u, zeta}, {n, static_cast<std::int64_t>(zeta) * m + k}}));
    // [x,y] = n^{-m}, so [y,x] = n^m
    P.set_commutator(y, x, P.word({{n, m}}));
    return P;
  }

  // ---------------------------------------------------------------------------
  // Generator maps

  struct GeneratorMap {
    char id = 'A';
    int lambda = 1;

    bool has_lambda() const noexcept {
      return id == 'A' || id == 'B' || id == 'C';
    }

    std::string to_string() const {
      return has_lambda() ? std::string(1, id) + "(" + std::to_string(lambda) + ")" : std::string(1, id);
    }

    friend bool operator==(GeneratorMap const&, GeneratorMap const&) = default;
  };

  inline void check_map(FamilyParams const& fp, GeneratorMap const& gm) {
    validate(fp);
    int const p = fp.prime;
    if (fp.family == Family::Q) {
      if (gm.id < 'A' || gm.id > 'E') {
        throw precondition_error("family Q maps are A..E");
      }
      if (gm.id == 'D' && fp.params[0] == 0) {
        throw precondition_error("map D needs i != 0");
      }
      if (gm.id == 'E' && fp.params[3] != 0) {
        throw precondition_error("map E needs l = 0");
      }
    } else if (gm.id != 'A' && gm.id != 'B') {
      throw precondition_error("family Qzeta maps are A and B");
    }
    if (gm.has_lambda() && mod(gm.lambda, p) == 0) {
      throw precondition_error("map " + std::string(1, gm.id) + " needs lambda != 0");
    }
  }

  inline FamilyParams apply_generator_map(FamilyParams const& fp, GeneratorMap const& gm) {
    check_map(fp, gm);
    std::int64_t const p = fp.prime;
    std::int64_t const L = mod(gm.lambda, p);
    FamilyParams out = fp;
    auto& r = out.params;
    auto set = [&](std::size_t t, std::int64_t val) {
      r[t] = static_cast<int>(mod(val, p));
    };
    if (fp.family == Family::Q) {
      std::int64_t const i = fp.params[0], j = fp.params[1], k = fp.params[2], l = fp.params[3];
      switch (gm.id) {
        case 'A':
          set(0, L * i), set(1, L * j), set(2, L * k), set(3, L * l);
          break;
        case 'B':
          set(0, L * i), set(2, L * k), set(3, L * l);
          break;
        case 'C':
          set(1, L * j), set(2, L * k), set(3, L * L % p * l);
          break;
        case 'D':
          set(1, 0);
          break;
        case 'E':
          set(0, j), set(1, -i), set(3, 0);
          break;
      }
      return out;
    }
    std::int64_t const j = fp.params[0], k = fp.params[1], m = fp.params[2];
    if (gm.id == 'A') {
      set(0, L * j), set(1, L * k), set(2, L * m);
    } else {
      set(1, L * k), set(2, L * L % p * m);
    }
    return out;
  }

  // Images of the new pc generators, in the family's pc order, inside the
  // group of build_candidate(fp). They satisfy the relations of
  // build_candidate(apply_generator_map(fp, gm)).
  inline std::vector<Elem> generator_map_images(PcGroup const& G, FamilyParams const& fp, GeneratorMap const& gm) {
    check_map(fp, gm);
    std::int64_t const p = fp.prime;
    std::int64_t const L = mod(gm.lambda, p);
    if (fp.family == Family::Q) {
      using namespace qbasis;
      Elem X = G.gen(x), Y = G.gen(y), Z = G.gen(z), N = G.gen(n);
      std::int64_t const i = fp.params[0], j = fp.params[1];
      switch (gm.id) {
        case 'A':
          N = G.pow(N, inv_mod(L, p));
          break;
        case 'B':
          X = G.pow(X, L), Y = G.pow(Y, L);
          break;
        case 'C':
          X = G.pow(X, L), Z = G.pow(Z, L);
          break;
        case 'D':
          Z = G.mul(G.pow(Y, mod(-j * inv_mod(i, p), p)), Z);
          break;
        case 'E': {
          Elem const Y0 = Y;
          Y = Z;
          Z = G.inv(Y0);
          break;
        }
      }
      return {Z, Y, X, G.pth_power(X), N};
    }
    using namespace zbasis;
    Elem X = G.gen(x), Y = G.gen(y), Z = G.gen(z), N = G.gen(n);
    std::int64_t const m = fp.params[2];
    std::int64_t const zeta = fp.zeta;
    if (gm.id == 'A') {
      N = G.pow(N, inv_mod(L, p));
    } else {
      Elem const X0 = X;
      X = G.pow(X0, L);
      Y = G.mul(G.pow(Y, L), G.pow(N, m * (L * (L - 1) / 2)));
      Z = G.mul(G.pow(X0, zeta * (L - 1)), Z);
    }
    return {Z, X, Y, G.pth_power(X), N};
  }

  // ---------------------------------------------------------------------------
  // Canonical labels

  // P0..P9 for family Q, P0..P7 for family Qzeta. lambda is set for the
  // parametrized labels P8, P9 (family Q) and P6, P7 (family Qzeta).
  struct CanonicalLabel {
    Family family = Family::Q;
    int index = 0;
    std::optional<int> lambda;

    std::string to_string() const {
      std::string s = "P" + std::to_string(index);
      if (lambda) {
        s += "(" + std::to_string(*lambda) + ")";
      }
      return s;
    }

    friend bool operator==(CanonicalLabel const&, CanonicalLabel const&) = default;
    friend auto operator<=>(CanonicalLabel const& a, CanonicalLabel const& b) {
      return std::tie(a.family, a.index, a.lambda) <=> std::tie(b.family, b.index, b.lambda);
    }
  };

  struct CanonicalForm {
    CanonicalLabel label;
    FamilyParams params;
    std::vector<GeneratorMap> trail;

    std::string trail_string() const {
      std::string s;
      for (std::size_t t = 0; t < trail.size(); ++t) {
        if (t > 0) {
          s += ',';
        }
        s += trail[t].to_string();
      }
      return s;
    }
  };

  // Parameter tuple of a table label, or nullopt when the label is not in the
  // table for this prime.
  inline std::optional<std::vector<int>> label_params(CanonicalLabel const& lab, int p) {
    int const alpha = static_cast<int>(least_nonresidue(p));
    auto in_range = [&](int lo, int hi) {
      return lab.lambda && *lab.lambda >= lo && *lab.lambda <= hi;
    };
    if (lab.family == Family::Q) {
      static int const fixed[8][4] = {{0, 0, 0, 0}, {0, 0, 1, 0}, {1, 0, 1, 0}, {1, 0, 0, 0},
                                      {0, 0, 0, 1}, {0, 0, 1, 1}, {0, 1, 0, 1}, {0, 1, 1, 1}};
      if (lab.index >= 0 && lab.index < 8 && !lab.lambda) {
        auto const& f = fixed[lab.index];
        return std::vector<int>{f[0], f[1], f[2], f[3]};
      }
      if (lab.index == 8 && lab.lambda && (*lab.lambda == 1 || *lab.lambda == alpha)) {
        return std::vector<int>{1, 0, 0, *lab.lambda};
      }
      if (lab.index == 9 && in_range(1, p - 1)) {
        return std::vector<int>{1, 0, 1, *lab.lambda};
      }
      return std::nullopt;
    }
    static int const fixed[6][3] = {{0, 0, 0}, {0, 0, 1}, {0, 1, 0}, {1, 0, 0}, {0, 1, 1}, {1, 1, 0}};
    if (lab.index >= 0 && lab.index < 6 && !lab.lambda) {
      auto const& f = fixed[lab.index];
      return std::vector<int>{f[0], f[1], f[2]};
    }
    if ((lab.index == 6 || lab.index == 7) && in_range(0, (p - 1) / 2)) {
      return std::vector<int>{1, *lab.lambda, lab.index == 6 ? 1 : alpha};
    }
    return std::nullopt;
  }

  // Every table label for the family at p, in table order.
  inline std::vector<CanonicalLabel> table_labels(Family family, int p) {
    std::vector<CanonicalLabel> out;
    if (family == Family::Q) {
      for (int t = 0; t < 8; ++t) {
        out.push_back({family, t, std::nullopt});
      }
      out.push_back({family, 8, 1});
      out.push_back({family, 8, static_cast<int>(least_nonresidue(p))});
      for (int l = 1; l < p; ++l) {
        out.push_back({family, 9, l});
      }
      return out;
    }
    for (int t = 0; t < 6; ++t) {
      out.push_back({family, t, std::nullopt});
    }
    for (int idx : {6, 7}) {
      for (int l = 0; l <= (p - 1) / 2; ++l) {
        out.push_back({family, idx, l});
      }
    }
    return out;
  }

  inline std::optional<CanonicalLabel> label_of_params(FamilyParams const& fp) {
    std::optional<CanonicalLabel> found;
    for (auto const& lab : table_labels(fp.family, fp.prime)) {
      if (label_params(lab, fp.prime) == fp.params) {
        if (found) {
          throw classification_error("parameters " + params_to_string(fp.params) + " match two table labels");
        }
        found = lab;
      }
    }
    return found;
  }

  inline FamilyParams label_to_params(CanonicalLabel const& lab, int p, int zeta = 1) {
    auto v = label_params(lab, p);
    if (!v) {
      throw precondition_error("label " + lab.to_string() + " is not in the table for p = " + std::to_string(p));
    }
    if (lab.family == Family::Q) {
      return make_q_params(p, (*v)[0], (*v)[1], (*v)[2], (*v)[3]);
    }
    return make_qzeta_params(p, zeta, (*v)[0], (*v)[1], (*v)[2]);
  }

  // Reduces fp to a table label with the generator maps. The trail is replayed
  // and the result is checked to be exactly one table entry.
  inline CanonicalForm canonical_params(FamilyParams const& fp) {
    validate(fp);
    std::int64_t const p = fp.prime;
    std::int64_t const alpha = least_nonresidue(p);
    FamilyParams cur = fp;
    std::vector<GeneratorMap> trail;
    auto apply = [&](char id, std::int64_t lam = 1) {
      GeneratorMap gm{id, static_cast<int>(mod(lam, p))};
      if (gm.has_lambda() && gm.lambda == 1) {
        return;
      }
      if (id == 'D' && cur.params[1] == 0) {
        return;
      }
      cur = apply_generator_map(cur, gm);
      trail.push_back(gm);
    };
    auto inv = [&](std::int64_t a) {
      return inv_mod(a, p);
    };
    auto const& v = cur.params;

    if (fp.family == Family::Q) {
      if (v[3] == 0) {
        if (v[0] == 0 && v[1] == 0) {
          if (v[2] != 0) {
            apply('A', inv(v[2]));
          }
        } else {
          if (v[0] == 0) {
            apply('E');
          } else {
            apply('D');
          }
          if (v[2] == 0) {
            apply('B', inv(v[0]));
          } else {
            apply('C', v[0] * inv(v[2]));
            apply('A', inv(v[0]));
          }
        }
      } else if (v[0] == 0) {
        std::int64_t const j = v[1], k = v[2], l = v[3];
        if (j == 0 && k == 0) {
          apply('A', inv(l));
        } else if (j == 0) {
          apply('C', k * inv(l));
          apply('B', l * inv(k * k % p));
        } else if (k == 0) {
          apply('C', j * inv(l));
          apply('A', l * inv(j * j % p));
        } else {
          apply('C', k * inv(l));
          apply('B', j * inv(k));
          apply('A', l * inv(j * k % p));
        }
      } else if (v[2] == 0) {
        std::int64_t const i = v[0], l = v[3];
        std::int64_t lam = 1;
        while (lam < p) {
          std::int64_t const t = lam * lam % p * l % p;
          if (t == i || t == alpha * i % p) {
            break;
          }
          ++lam;
        }
        apply('C', lam);
        apply('A', inv(cur.params[0]));
        apply('D');
      } else {
        std::int64_t const i = v[0], k = v[2];
        apply('C', i * inv(k));
        apply('A', inv(cur.params[0]));
        apply('D');
      }
    } else {
      if (v[0] == 0) {
        std::int64_t const k = v[1], m = v[2];
        if (k == 0 && m != 0) {
          apply('A', inv(m));
        } else if (k != 0 && m == 0) {
          apply('A', inv(k));
        } else if (k != 0) {
          apply('B', k * inv(m));
          apply('A', m * inv(k * k % p));
        }
      } else {
        apply('A', inv(v[0]));
        if (v[2] == 0) {
          if (v[1] != 0) {
            apply('B', inv(v[1]));
          }
        } else {
          std::int64_t const m = v[2];
          std::int64_t lam = 1;
          while (lam < p) {
            std::int64_t const t = lam * lam % p * m % p;
            if (t == 1 || t == alpha) {
              break;
            }
            ++lam;
          }
          apply('B', lam);
          if (cur.params[1] > (p - 1) / 2) {
            apply('B', -1);
          }
        }
      }
    }

    // Replay the trail from the input and make sure it lands on one label.
    FamilyParams replay = fp;
    for (auto const& gm : trail) {
      replay = apply_generator_map(replay, gm);
    }
    if (!(replay == cur)) {
      throw classification_error("canonicalization trail does not replay");
    }
    auto lab = label_of_params(cur);
    if (!lab) {
      throw classification_error("parameters " + params_to_string(fp.params) + " reduced to "
                                 + params_to_string(cur.params) + " which is not a table label");
    }
    return {*lab, cur, trail};
  }

  // ---------------------------------------------------------------------------
  // Exceptionality by closed form and Table-1 names

  inline bool predicted_exceptional(CanonicalLabel const& lab, int p, int zeta = 1) {
    if (lab.family == Family::Q) {
      switch (lab.index) {
        case 1:
        case 2:
        case 5:
        case 7:
          return true;
        case 8:
          return lab.lambda == 1;
        case 9:
          return legendre(1 + 4 * static_cast<std::int64_t>(*lab.lambda), p) == 1;
        default:
          return false;
      }
    }
    auto const v = *label_params(lab, p);
    if (v[0] == 0) {
      return v[1] != 0;
    }
    std::int64_t const k = v[1], m = v[2];
    return legendre(k * k + 4 * static_cast<std::int64_t>(zeta) * m, p) == 1;
  }

  inline bool predicted_exceptional(FamilyParams const& fp) {
    auto const cf = canonical_params(fp);
    return predicted_exceptional(cf.label, fp.prime, fp.zeta);
  }

  // Name of the group in the table of exceptional groups, for an exceptional
  // label. zeta_class is "1" or "alpha" for family Qzeta.
  inline std::optional<std::string> table1_name(CanonicalLabel const& lab, int p, int zeta = 1) {
    if (!predicted_exceptional(lab, p, zeta)) {
      return std::nullopt;
    }
    if (lab.family == Family::Q) {
      switch (lab.index) {
        case 1:
          return "E1";
        case 2:
          return "E2";
        case 5:
          return "E3";
        case 7:
          return "E4";
        case 8:
          return "E5";
        case 9:
          return "E6(" + std::to_string(symmetric_rep(*lab.lambda, p)) + ")";
        default:
          return std::nullopt;
      }
    }
    bool const one = legendre(zeta, p) == 1;
    std::string const sup = one ? "^(1)" : "^(alpha)";
    switch (lab.index) {
      case 2:
        return "F1" + sup;
      case 4:
        return "F2" + sup;
      case 5:
        return "F3" + sup;
      case 6:
        return "F4" + sup + "(" + std::to_string(*lab.lambda) + ")";
      case 7: {
        if (one) {
          return "F5" + sup + "(" + std::to_string(*lab.lambda) + ")";
        }
        // the table writes this group with k = alpha * lambda
        std::int64_t const alpha = least_nonresidue(p);
        std::int64_t lam = symmetric_rep(*lab.lambda * inv_mod(alpha, p), p);
        return "F5" + sup + "(" + std::to_string(lam < 0 ? -lam : lam) + ")";
      }
      default:
        return std::nullopt;
    }
  }

  // ---------------------------------------------------------------------------
  // Named groups

  namespace detail {

    // p = 3 groups on the basis (z, x, y, u, n).
    struct NamedP3 {
      char const* name;
      char const* quotient;
      int z_u, z_n;    // z^3 = u^a n^b
      int yz_u, yz_n;  // [y,z] = u^a n^b
      int yx_n;        // [y,x] = n^b, that is [x,y] = n^{-b}
    };

    // Representatives of the five exceptional classes over Q81, Q1(3) and
    // Qalpha(3), fixed by enumerating every central extension by C3. Three
    // printed rows do not fit: see table1_printed_p3.
    inline constexpr NamedP3 named_p3[] = {
        {"G3", "Q81", 0, 0, 2, 1, 2},        {"G4/Q81", "Q81", 0, 0, 2, 1, 0},
        {"G4/Q1", "Q1", 1, 1, 1, 2, 0},      {"G5", "Q1", 1, 1, 1, 1, 2},
        {"G6/Q1", "Q1", 1, 0, 1, 1, 0},      {"G6/Qalpha", "Qalpha", 2, 0, 2, 1, 0},
        {"G7", "Qalpha", 2, 0, 2, 0, 2},
    };

    // The rows as printed. G5 leaves [x,y] blank; it is read as 1 here.
    inline constexpr NamedP3 table1_printed_p3[] = {
        {"G3", "Q81", 0, 0, 2, 1, 2},        {"G4/Q81", "Q81", 0, 0, 2, 1, 0},
        {"G4/Q1", "Q1", 1, 1, 1, 1, 2},      {"G5", "Q1", 1, 1, 1, 2, 0},
        {"G6/Q1", "Q1", 1, 0, 1, 1, 0},      {"G6/Qalpha", "Qalpha", 2, 1, 2, 0, 0},
        {"G7", "Qalpha", 2, 0, 2, 1, 0},
    };

    inline PcPresentation named_p3_presentation(NamedP3 const& g) {
      using namespace zbasis;
      auto P = zeta_shape(3, true);
      P.set_power(z, P.word({{u, g.z_u}, {n, g.z_n}}));
      P.set_commutator(y, z, P.word({{u, g.yz_u}, {n, g.yz_n}}));
      P.set_commutator(y, x, P.word({{n, g.yx_n}}));
      return P;
    }

    inline std::string strip_alias(std::string const& name) {
      if (name == "G4") {
        return "G4/Q81";
      }
      if (name == "G6") {
        return "G6/Q1";
      }
      return name;
    }

    // Parses "E6(-2)" into ("E6", -2) and "F4^(alpha)(1)" into ("F4^(alpha)", 1).
    inline std::pair<std::string, std::optional<std::int64_t>> split_lambda(std::string const& name) {
      if (name.empty() || name.back() != ')') {
        return {name, std::nullopt};
      }
      auto const open = name.rfind('(');
      std::string const inner = name.substr(open + 1, name.size() - open - 2);
      if (inner == "1" && open >= 1 && name[open - 1] == '^') {
        return {name, std::nullopt};
      }
      if (inner == "alpha") {
        return {name, std::nullopt};
      }
      try {
        std::size_t used = 0;
        long long const v = std::stoll(inner, &used);
        if (used != inner.size()) {
          throw parse_error("bad parameter in '" + name + "'");
        }
        return {name.substr(0, open), v};
      } catch (std::invalid_argument const&) {
        throw parse_error("bad parameter in '" + name + "'");
      } catch (std::out_of_range const&) {
        throw parse_error("bad parameter in '" + name + "'");
      }
    }

  }  // namespace detail

  // Quotient a named group sits over, as in the table of exceptional groups.
  inline std::string named_group_quotient(std::string const& name) {
    auto const base = detail::strip_alias(name);
    if (base == "G1" || base == "G2") {
      return "Q16";
    }
    for (auto const& g : detail::named_p3) {
      if (base == g.name) {
        return g.quotient;
      }
    }
    auto const [stem, lam] = detail::split_lambda(base);
    if (!stem.empty() && stem[0] == 'E') {
      return "Q";
    }
    if (stem.find("^(alpha)") != std::string::npos) {
      return "Qalpha";
    }
    if (stem.find("^(1)") != std::string::npos) {
      return "Q1";
    }
    throw precondition_error("unknown group name '" + name + "'");
  }

  // Family parameters behind an E or F name.
  inline FamilyParams named_group_params(std::string const& name, int p) {
    auto const [stem, lam] = detail::split_lambda(name);
    auto need_lambda = [&, lam = lam] {
      if (!lam) {
        throw precondition_error(name + " needs a parameter");
      }
      return *lam;
    };
    auto no_lambda = [&, lam = lam] {
      if (lam) {
        throw precondition_error(name + " takes no parameter");
      }
    };
    if (!stem.empty() && stem[0] == 'E') {
      detail::require_odd(p, "E groups");
      CanonicalLabel lab{Family::Q, -1, std::nullopt};
      if (stem == "E1") {
        lab.index = 1;
      } else if (stem == "E2") {
        lab.index = 2;
      } else if (stem == "E3") {
        lab.index = 5;
      } else if (stem == "E4") {
        lab.index = 7;
      } else if (stem == "E5") {
        lab.index = 8;
        lab.lambda = 1;
      } else if (stem == "E6") {
        lab.index = 9;
        lab.lambda = static_cast<int>(mod(need_lambda(), p));
        if (*lab.lambda == 0 || legendre(1 + 4 * static_cast<std::int64_t>(*lab.lambda), p) != 1) {
          throw precondition_error("E6(lambda) needs lambda != 0 and 1+4*lambda a nonzero square");
        }
      } else {
        throw precondition_error("unknown group name '" + name + "'");
      }
      if (stem != "E6") {
        no_lambda();
      }
      return label_to_params(lab, p);
    }
    if (stem.size() >= 2 && stem[0] == 'F') {
      if (p <= 3) {
        throw precondition_error("F groups need p > 3");
      }
      bool const one = stem.find("^(1)") != std::string::npos;
      bool const al = stem.find("^(alpha)") != std::string::npos;
      if (!one && !al) {
        throw precondition_error("F names carry ^(1) or ^(alpha)");
      }
      int const alpha = static_cast<int>(least_nonresidue(p));
      int const zeta = one ? 1 : alpha;
      char const idx = stem[1];
      CanonicalLabel lab{Family::Qzeta, -1, std::nullopt};
      if (idx == '1' || idx == '2' || idx == '3') {
        no_lambda();
        lab.index = idx == '1' ? 2 : idx == '2' ? 4 : 5;
      } else if (idx == '4' || idx == '5') {
        std::int64_t l = need_lambda();
        if (l < 0 || l > (p - 1) / 2) {
          throw precondition_error(name + ": lambda must lie in [0, (p-1)/2]");
        }
        lab.index = idx == '4' ? 6 : 7;
        if (idx == '5' && !one) {
          l = mod(static_cast<std::int64_t>(alpha) * l, p);
          if (l > (p - 1) / 2) {
            l = p - l;
          }
        }
        lab.lambda = static_cast<int>(l);
      } else {
        throw precondition_error("unknown group name '" + name + "'");
      }
      auto fp = label_to_params(lab, p, zeta);
      if (!predicted_exceptional(lab, p, zeta)) {
        throw precondition_error(name + " does not satisfy the table condition at p = " + std::to_string(p));
      }
      return fp;
    }
    throw precondition_error("unknown group name '" + name + "'");
  }

  // Presentation of a group named in the table of exceptional groups.
  // E and F names go through the canonical parameters; G names use the
  // explicit presentations.
  inline PcPresentation build_named_group(std::string const& name, int p) {
    auto const base = detail::strip_alias(name);
    if (base == "G1" || base == "G2") {
      if (p != 2) {
        throw precondition_error(name + " needs p = 2");
      }
      PcPresentation P(2, 5);
      P.set_labels({"y", "x", "x2", "x4", "n"});
      P.set_power(0, P.word({{3, 1}, {4, base == "G1" ? 1 : 0}}));
      P.set_power(1, P.word({{2, 1}}));
      P.set_power(2, P.word({{3, 1}}));
      P.set_commutator(1, 0, P.word({{2, 1}, {3, 1}, {4, base == "G2" ? 1 : 0}}));
      P.set_commutator(2, 0, P.word({{3, 1}}));
      return P;
    }
    for (auto const& g : detail::named_p3) {
      if (base == g.name) {
        if (p != 3) {
          throw precondition_error(name + " needs p = 3");
        }
        return detail::named_p3_presentation(g);
      }
    }
    return build_candidate(named_group_params(base, p));
  }

  // Table names available at p, one per isomorphism class for E and F names
  // and every listed presentation for the p = 2, 3 groups.
  inline std::vector<std::string> named_groups(int p) {
    std::vector<std::string> out;
    if (p == 2) {
      return {"G1", "G2"};
    }
    for (auto const& lab : table_labels(Family::Q, p)) {
      if (auto nm = table1_name(lab, p)) {
        out.push_back(*nm);
      }
    }
    if (p == 3) {
      for (auto const& g : detail::named_p3) {
        out.emplace_back(g.name);
      }
      return out;
    }
    int const alpha = static_cast<int>(least_nonresidue(p));
    for (int zeta : {1, alpha}) {
      for (auto const& lab : table_labels(Family::Qzeta, p)) {
        if (auto nm = table1_name(lab, p, zeta)) {
          out.push_back(*nm);
        }
      }
    }
    return out;
  }

  // ---------------------------------------------------------------------------
  // Group specs
  //
  //   Q@5  Q1@7  Qalpha@7  Q81@3  Q16@2      order-p^4 quotients
  //   Qzeta:2@7                              Q_zeta with zeta = 2
  //   Q@5:(2,3,1,4)  Qzeta:1@7:(1,1,0)       family candidates
  //   params:Q@5:(2,3,1,4)                   same, explicit prefix
  //   named:E6(2)@5  named:G4/Q1@3           table names
  //   file:path/to/presentation.txt          presentation text file

  struct GroupSpec {
    enum class Kind { quotient, candidate, named, file };
    Kind kind = Kind::quotient;
    std::string name;  // quotient name, family name or table name
    int prime = 0;
    int zeta = 0;
    std::vector<int> params;
    std::string path;
    bool params_prefix = false;

    friend bool operator==(GroupSpec const&, GroupSpec const&) = default;

    std::string to_string() const {
      switch (kind) {
        case Kind::file:
          return "file:" + path;
        case Kind::named:
          return "named:" + name + "@" + std::to_string(prime);
        case Kind::quotient:
          if (name == "Qzeta") {
            return "Qzeta:" + std::to_string(zeta) + "@" + std::to_string(prime);
          }
          return name + "@" + std::to_string(prime);
        case Kind::candidate: {
          std::string s = params_prefix ? "params:" : "";
          s += name;
          if (name == "Qzeta") {
            s += ":" + std::to_string(zeta);
          }
          return s + "@" + std::to_string(prime) + ":" + params_to_string(params);
        }
      }
      return {};
    }

    FamilyParams family_params() const {
      if (kind != Kind::candidate) {
        throw precondition_error("spec '" + to_string() + "' is not a parameter spec");
      }
      if (name == "Q") {
        if (params.size() != 4) {
          throw precondition_error("family Q takes four parameters");
        }
        return make_q_params(prime, params[0], params[1], params[2], params[3]);
      }
      if (params.size() != 3) {
        throw precondition_error("family Qzeta takes three parameters");
      }
      return make_qzeta_params(prime, zeta, params[0], params[1], params[2]);
    }

    PcPresentation presentation() const {
      switch (kind) {
        case Kind::file: {
          std::ifstream in(path);
          if (!in) {
            throw parse_error("cannot read '" + path + "'");
          }
          std::stringstream ss;
          ss << in.rdbuf();
          return PcPresentation::from_text(ss.str());
        }
        case Kind::named:
          return build_named_group(name, prime);
        case Kind::quotient:
          if (name == "Qzeta") {
            return build_qzeta_quotient(prime, zeta);
          }
          return build_quotient(name, prime);
        case Kind::candidate:
          return build_candidate(family_params());
      }
      return {};
    }
  };

  namespace detail {

    inline int parse_int(std::string const& s, std::string const& spec) {
      try {
        std::size_t used = 0;
        int const v = std::stoi(s, &used);
        if (used != s.size()) {
          throw parse_error("bad integer '" + s + "' in spec '" + spec + "'");
        }
        return v;
      } catch (std::logic_error const&) {
        throw parse_error("bad integer '" + s + "' in spec '" + spec + "'");
      }
    }

    inline std::vector<int> parse_tuple(std::string const& s, std::string const& spec) {
      if (s.size() < 2 || s.front() != '(' || s.back() != ')') {
        throw parse_error("expected a parenthesized tuple in spec '" + spec + "'");
      }
      std::vector<int> out;
      std::stringstream ss(s.substr(1, s.size() - 2));
      std::string item;
      while (std::getline(ss, item, ',')) {
        out.push_back(parse_int(item, spec));
      }
      return out;
    }

  }  // namespace detail

  inline GroupSpec parse_group_spec(std::string const& text) {
    GroupSpec spec;
    auto fail = [&](std::string const& why) -> GroupSpec {
      throw parse_error("group spec '" + text + "': " + why);
    };
    if (text.rfind("file:", 0) == 0) {
      spec.kind = GroupSpec::Kind::file;
      spec.path = text.substr(5);
      if (spec.path.empty()) {
        return fail("empty path");
      }
      return spec;
    }
    if (text.rfind("named:", 0) == 0) {
      auto const at = text.rfind('@');
      if (at == std::string::npos || at <= 6) {
        return fail("expected named:NAME@p");
      }
      spec.kind = GroupSpec::Kind::named;
      spec.name = text.substr(6, at - 6);
      spec.prime = detail::parse_int(text.substr(at + 1), text);
      if (!is_prime(spec.prime)) {
        return fail("not a prime");
      }
      return spec;
    }
    std::string rest = text;
    if (rest.rfind("params:", 0) == 0) {
      spec.params_prefix = true;
      rest = rest.substr(7);
    }
    auto const at = rest.find('@');
    if (at == std::string::npos) {
      return fail("missing '@p'");
    }
    std::string head = rest.substr(0, at);
    std::string tail = rest.substr(at + 1);
    if (head.rfind("Qzeta:", 0) == 0) {
      spec.zeta = detail::parse_int(head.substr(6), text);
      head = "Qzeta";
    }
    std::string prime_part = tail;
    std::string tuple_part;
    if (auto const colon = tail.find(':'); colon != std::string::npos) {
      prime_part = tail.substr(0, colon);
      tuple_part = tail.substr(colon + 1);
    }
    spec.prime = detail::parse_int(prime_part, text);
    if (!is_prime(spec.prime)) {
      return fail("not a prime");
    }
    spec.name = head;
    if (!tuple_part.empty()) {
      if (head != "Q" && head != "Qzeta") {
        return fail("parameters are only accepted for families Q and Qzeta");
      }
      spec.kind = GroupSpec::Kind::candidate;
      spec.params = detail::parse_tuple(tuple_part, text);
      return spec;
    }
    if (spec.params_prefix) {
      return fail("'params:' needs a parameter tuple");
    }
    if (head == "Qzeta") {
      if (mod(spec.zeta, spec.prime) == 0) {
        return fail("zeta must be a unit");
      }
      spec.kind = GroupSpec::Kind::quotient;
      return spec;
    }
    auto const names = quotient_names();
    if (std::find(names.begin(), names.end(), head) == names.end()) {
      return fail("unknown group '" + head + "'");
    }
    spec.kind = GroupSpec::Kind::quotient;
    return spec;
  }

}  // namespace pgroup
