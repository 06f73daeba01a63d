#pragma once

#include <cstdint>
#include <string>

#include "errors.hpp"

namespace pgroup {

  // Residue of a in [0, m).
  constexpr std::int64_t mod(std::int64_t a, std::int64_t m) noexcept {
    a %= m;
    return a < 0 ? a + m : a;
  }

  constexpr std::int64_t pow_mod(std::int64_t base, std::int64_t e, std::int64_t m) noexcept {
    std::int64_t result = 1 % m;
    base = mod(base, m);
    while (e > 0) {
      if (e & 1) {
        result = result * base % m;
      }
      base = base * base % m;
      e >>= 1;
    }
    return result;
  }

  constexpr bool is_prime(std::int64_t n) noexcept {
    if (n < 2) {
      return false;
    }
    for (std::int64_t d = 2; d * d <= n; ++d) {
      if (n % d == 0) {
        return false;
      }
    }
    return true;
  }

  // Inverse of a modulo the prime p.
  inline std::int64_t inv_mod(std::int64_t a, std::int64_t p) {
    a = mod(a, p);
    if (a == 0) {
      throw precondition_error("inv_mod: 0 has no inverse modulo " + std::to_string(p));
    }
    return pow_mod(a, p - 2, p);
  }

  // Legendre symbol (a/p) for an odd prime p: 0 when p divides a, 1 for a
  // nonzero square and -1 otherwise.
  inline int legendre(std::int64_t a, std::int64_t p) {
    if (p == 2 || !is_prime(p)) {
      throw precondition_error("legendre: " + std::to_string(p) + " is not an odd prime");
    }
    a = mod(a, p);
    if (a == 0) {
      return 0;
    }
    return pow_mod(a, (p - 1) / 2, p) == 1 ? 1 : -1;
  }

  inline bool is_nonzero_square(std::int64_t a, std::int64_t p) {
    return legendre(a, p) == 1;
  }

  // The fixed quadratic non-residue used throughout: the least positive one.
  inline std::int64_t least_nonresidue(std::int64_t p) {
    for (std::int64_t a = 2; a < p; ++a) {
      if (legendre(a, p) == -1) {
        return a;
      }
    }
    throw precondition_error("least_nonresidue: no non-residue modulo " + std::to_string(p));
  }

  // Smallest r in [1, p) with r^2 = a (mod p), or 0 when none exists.
  inline std::int64_t sqrt_mod(std::int64_t a, std::int64_t p) noexcept {
    a = mod(a, p);
    for (std::int64_t r = 1; r < p; ++r) {
      if (r * r % p == a) {
        return r;
      }
    }
    return 0;
  }

  // Representative of a in [-(p-1)/2, (p-1)/2].
  constexpr std::int64_t symmetric_rep(std::int64_t a, std::int64_t p) noexcept {
    a = mod(a, p);
    return a > p / 2 ? a - p : a;
  }

}  // namespace pgroup
