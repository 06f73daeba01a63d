#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "presentation.hpp"

namespace pgroup {

  // An element is its normal form g_0^{e_0} ... g_{n-1}^{e_{n-1}} packed as
  // the integer sum e_i * p^{n-1-i}. With this packing the subgroup
  // G_k = <g_k, ..., g_{n-1}> is exactly the set of codes below p^{n-k}, and
  // the identity is 0.
  using Elem = std::uint32_t;

  struct ConsistencyReport {
    bool ok = true;
    std::string failure;
  };

  // Multiplication in the group defined by a pc presentation.
  //
  // For each level k we precompute conjugation of G_{k+1} by powers of g_k.
  // A product in G_k then splits as
  //   (g_k^a A)(g_k^b B) = g_k^{a+b} (A^{g_k^b}) B
  // with a carry through g_k^p when a+b >= p, recursing into G_{k+1}. Small
  // levels also get a full multiplication table.
  class PcGroup {
   public:
    static constexpr std::uint64_t max_order = std::uint64_t{1} << 31;
    static constexpr std::uint64_t table_limit = std::uint64_t{1} << 24;

    explicit PcGroup(PcPresentation pres) : pres_(std::move(pres)) {
      pres_.validate();
      p_ = static_cast<Elem>(pres_.prime());
      n_ = pres_.ngens();
      std::uint64_t order = 1;
      for (int i = 0; i < n_; ++i) {
        order *= p_;
        if (order > max_order) {
          throw precondition_error("PcGroup: group order exceeds supported range");
        }
      }
      order_ = static_cast<Elem>(order);
      block_.assign(static_cast<std::size_t>(n_) + 1, 1);
      for (int k = n_ - 1; k >= 0; --k) {
        block_[static_cast<std::size_t>(k)] = block_[static_cast<std::size_t>(k) + 1] * p_;
      }
      // block_[k] = p^{n-k}; the block size at level k is block_[k+1].
      powers_.resize(static_cast<std::size_t>(n_));
      for (int k = 0; k < n_; ++k) {
        powers_[static_cast<std::size_t>(k)] = encode(pres_.power(k));
      }
      conj_.resize(static_cast<std::size_t>(n_));
      table_.resize(static_cast<std::size_t>(n_) + 1);
      for (int k = n_ - 1; k >= 0; --k) {
        build_level(k);
      }
      if (order_ <= (Elem{1} << 20)) {
        inverse_.resize(order_);
        pth_.resize(order_);
        for (Elem a = 0; a < order_; ++a) {
          inverse_[a] = inv_level(0, a);
        }
        for (Elem a = 0; a < order_; ++a) {
          pth_[a] = pow_slow(a, p_);
        }
      }
    }

    PcPresentation const& presentation() const noexcept {
      return pres_;
    }

    int prime() const noexcept {
      return static_cast<int>(p_);
    }

    int ngens() const noexcept {
      return n_;
    }

    Elem order() const noexcept {
      return order_;
    }

    static constexpr Elem identity() noexcept {
      return 0;
    }

    // Code of the pc generator g_i.
    Elem gen(int i) const {
      check_index(i);
      return block_[static_cast<std::size_t>(i) + 1];
    }

    // Elements of G_k = <g_k, ..., g_{n-1}> are the codes below this bound.
    Elem tail_order(int k) const {
      return block_[static_cast<std::size_t>(k)];
    }

    Elem mul(Elem a, Elem b) const {
      return mul_level(0, a, b);
    }

    Elem inv(Elem a) const {
      if (!inverse_.empty()) {
        return inverse_[a];
      }
      return inv_level(0, a);
    }

    Elem pow(Elem a, std::int64_t e) const {
      e %= static_cast<std::int64_t>(order_);
      if (e < 0) {
        e += order_;
      }
      if (e == static_cast<std::int64_t>(p_) && !pth_.empty()) {
        return pth_[a];
      }
      return pow_slow(a, static_cast<std::uint64_t>(e));
    }

    Elem pth_power(Elem a) const {
      return pth_.empty() ? pow_slow(a, p_) : pth_[a];
    }

    // b^{-1} a b
    Elem conj(Elem a, Elem b) const {
      return mul(inv(b), mul(a, b));
    }

    // a^{-1} b^{-1} a b
    Elem comm(Elem a, Elem b) const {
      return mul(inv(mul(b, a)), mul(a, b));
    }

    std::uint64_t element_order(Elem a) const {
      std::uint64_t ord = 1;
      while (a != 0) {
        a = pth_power(a);
        ord *= p_;
      }
      return ord;
    }

    // Exponent of g_i in the normal form of a.
    int exponent(Elem a, int i) const {
      check_index(i);
      return static_cast<int>((a / block_[static_cast<std::size_t>(i) + 1]) % p_);
    }

    std::vector<int> exponents(Elem a) const {
      std::vector<int> v(static_cast<std::size_t>(n_));
      for (int i = n_ - 1; i >= 0; --i) {
        v[static_cast<std::size_t>(i)] = static_cast<int>(a % p_);
        a /= p_;
      }
      return v;
    }

    Elem from_exponents(std::span<int const> v) const {
      if (v.size() != static_cast<std::size_t>(n_)) {
        throw structural_error("exponent vector has length " + std::to_string(v.size()) + ", expected "
                               + std::to_string(n_));
      }
      return encode(v);
    }

    Elem from_exponents(std::vector<int> const& v) const {
      return from_exponents(std::span<int const>(v));
    }

    // Index of the first generator with a nonzero exponent, or ngens() for
    // the identity.
    int leading_index(Elem a) const noexcept {
      if (a == 0) {
        return n_;
      }
      int k = n_ - 1;
      while (a >= block_[static_cast<std::size_t>(k)]) {
        --k;
      }
      return k;
    }

    // Product of g_i^e over the word, in order. Exponents may be any integers.
    Elem normalize_word(std::vector<std::pair<int, std::int64_t>> const& word) const {
      Elem r = 0;
      for (auto const& [i, e] : word) {
        r = mul(r, pow(gen(i), e));
      }
      return r;
    }

    // Display form such as "x^2*u"; the identity prints as "1".
    std::string to_string(Elem a) const {
      if (a == 0) {
        return "1";
      }
      std::string s;
      auto const ex = exponents(a);
      for (int i = 0; i < n_; ++i) {
        int const e = ex[static_cast<std::size_t>(i)];
        if (e == 0) {
          continue;
        }
        if (!s.empty()) {
          s += '*';
        }
        s += pres_.label(i);
        if (e != 1) {
          s += '^' + std::to_string(e);
        }
      }
      return s;
    }

    // Overlap tests for the pc relations followed by random associativity
    // sampling with a fixed seed.
    ConsistencyReport check_consistency(std::size_t random_triples = 100000,
                                        std::uint64_t seed = 0x5eed) const {
      auto fail = [](std::string msg) {
        return ConsistencyReport{false, std::move(msg)};
      };
      auto g = [this](int i) {
        return gen(i);
      };
      auto const& L = pres_.labels();
      for (int k = 0; k < n_; ++k) {
        for (int j = 0; j < k; ++j) {
          for (int i = 0; i < j; ++i) {
            if (mul(mul(g(k), g(j)), g(i)) != mul(g(k), mul(g(j), g(i)))) {
              return fail("overlap (" + L[k] + " " + L[j] + ") " + L[i]);
            }
          }
        }
      }
      for (int j = 0; j < n_; ++j) {
        Elem const gj_pm1 = pow_slow(g(j), p_ - 1);
        if (mul(g(j), powers_[static_cast<std::size_t>(j)])
            != mul(powers_[static_cast<std::size_t>(j)], g(j))) {
          return fail("power overlap " + L[j] + "^p " + L[j]);
        }
        if (pow_slow(g(j), p_) != powers_[static_cast<std::size_t>(j)]) {
          return fail("power relation " + L[j] + "^p");
        }
        for (int i = 0; i < j; ++i) {
          if (mul(powers_[static_cast<std::size_t>(j)], g(i)) != mul(gj_pm1, mul(g(j), g(i)))) {
            return fail("power overlap " + L[j] + "^p " + L[i]);
          }
          Elem const gi_pm1 = pow_slow(g(i), p_ - 1);
          if (mul(g(j), powers_[static_cast<std::size_t>(i)]) != mul(mul(g(j), g(i)), gi_pm1)) {
            return fail("power overlap " + L[j] + " " + L[i] + "^p");
          }
        }
      }
      // The stored relations must be reproduced by the arithmetic.
      for (int j = 0; j < n_; ++j) {
        for (int i = 0; i < j; ++i) {
          if (comm(g(j), g(i)) != encode(pres_.commutator(j, i))) {
            return fail("commutator relation [" + L[j] + "," + L[i] + "]");
          }
        }
      }
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<Elem> pick(0, order_ - 1);
      for (std::size_t t = 0; t < random_triples; ++t) {
        Elem const a = pick(rng);
        Elem const b = pick(rng);
        Elem const c = pick(rng);
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) {
          return fail("random triple (" + to_string(a) + ", " + to_string(b) + ", " + to_string(c) + ")");
        }
      }
      return {};
    }

   private:
    void check_index(int i) const {
      if (i < 0 || i >= n_) {
        throw structural_error("generator index " + std::to_string(i) + " out of range");
      }
    }

    Elem encode(std::span<int const> v) const {
      Elem code = 0;
      for (int e : v) {
        code = code * p_ + static_cast<Elem>(mod(e, p_));
      }
      return code;
    }

    Elem blk(int k) const noexcept {
      return block_[static_cast<std::size_t>(k) + 1];
    }

    Elem mul_level(int k, Elem a, Elem b) const {
      if (k >= n_) {
        return 0;
      }
      auto const& tab = table_[static_cast<std::size_t>(k)];
      if (!tab.empty()) {
        return tab[static_cast<std::size_t>(a) * block_[static_cast<std::size_t>(k)] + b];
      }
      return mul_direct(k, a, b);
    }

    Elem mul_direct(int k, Elem a, Elem b) const {
      Elem const B = blk(k);
      Elem const ak = a / B;
      Elem const A = a % B;
      Elem const bk = b / B;
      Elem const Bb = b % B;
      Elem X = bk != 0 ? conj_[static_cast<std::size_t>(k)][bk * B + A] : A;
      Elem c = ak + bk;
      if (c >= p_) {
        c -= p_;
        X = mul_level(k + 1, powers_[static_cast<std::size_t>(k)], X);
      }
      return c * B + mul_level(k + 1, X, Bb);
    }

    Elem inv_level(int k, Elem a) const {
      if (k >= n_ || a == 0) {
        return 0;
      }
      Elem const B = blk(k);
      Elem const ak = a / B;
      Elem const A = a % B;
      if (ak == 0) {
        return inv_level(k + 1, A);
      }
      // (g_k^a A)^{-1} = A^{-1} g_k^{p-a} (g_k^p)^{-1}
      Elem const Ainv = inv_level(k + 1, A);
      Elem const Pinv = inv_level(k + 1, powers_[static_cast<std::size_t>(k)]);
      return mul_level(k, mul_level(k, Ainv, (p_ - ak) * B), Pinv);
    }

    Elem pow_slow(Elem a, std::uint64_t e) const {
      Elem r = 0;
      while (e > 0) {
        if (e & 1) {
          r = mul(r, a);
        }
        e >>= 1;
        if (e > 0) {
          a = mul(a, a);
        }
      }
      return r;
    }

    void build_level(int k) {
      Elem const B = blk(k);
      auto& cj = conj_[static_cast<std::size_t>(k)];
      cj.assign(static_cast<std::size_t>(p_) * B, 0);
      for (Elem a = 0; a < B; ++a) {
        cj[a] = a;
      }
      if (B > 1) {
        // img[j][e] = (g_j^{g_k})^e for j > k
        std::vector<std::vector<Elem>> img(static_cast<std::size_t>(n_));
        for (int j = k + 1; j < n_; ++j) {
          Elem const base = blk(j) + encode(pres_.commutator(j, k));
          auto& row = img[static_cast<std::size_t>(j)];
          row.assign(p_, 0);
          for (Elem e = 1; e < p_; ++e) {
            row[e] = mul_level(k + 1, row[e - 1], base);
          }
        }
        Elem* c1 = cj.data() + B;
        c1[0] = 0;
        for (Elem a = 1; a < B; ++a) {
          int const j = leading_index(a);
          Elem const bj = blk(j);
          Elem const e = a / bj;
          Elem const rest = a % bj;
          c1[a] = mul_level(k + 1, img[static_cast<std::size_t>(j)][e], c1[rest]);
        }
        for (Elem c = 2; c < p_; ++c) {
          Elem* prev = cj.data() + (c - 1) * B;
          Elem* cur = cj.data() + c * B;
          for (Elem a = 0; a < B; ++a) {
            cur[a] = c1[prev[a]];
          }
        }
      } else {
        for (Elem c = 1; c < p_; ++c) {
          cj[c] = 0;
        }
      }
      std::uint64_t const size = block_[static_cast<std::size_t>(k)];
      if (size * size <= table_limit) {
        std::vector<Elem> tab(static_cast<std::size_t>(size * size));
        for (Elem a = 0; a < size; ++a) {
          for (Elem b = 0; b < size; ++b) {
            tab[static_cast<std::size_t>(a) * size + b] = mul_direct(k, a, b);
          }
        }
        table_[static_cast<std::size_t>(k)] = std::move(tab);
      }
    }

    PcPresentation pres_;
    Elem p_ = 2;
    int n_ = 0;
    Elem order_ = 1;
    std::vector<Elem> block_;
    std::vector<Elem> powers_;
    std::vector<std::vector<Elem>> conj_;
    std::vector<std::vector<Elem>> table_;
    std::vector<Elem> inverse_;
    std::vector<Elem> pth_;
  };

  using GroupPtr = std::shared_ptr<PcGroup const>;

  inline GroupPtr make_group(PcPresentation pres) {
    return std::make_shared<PcGroup const>(std::move(pres));
  }

  // Builds the group and throws structural_error when the presentation is
  // inconsistent.
  inline GroupPtr make_consistent_group(PcPresentation pres, std::size_t random_triples = 100000) {
    auto g = make_group(std::move(pres));
    auto const report = g->check_consistency(random_triples);
    if (!report.ok) {
      throw structural_error("inconsistent presentation: " + report.failure);
    }
    return g;
  }

}  // namespace pgroup
