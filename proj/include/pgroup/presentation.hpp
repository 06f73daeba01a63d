#pragma once

#include <cstdint>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "modular.hpp"

namespace pgroup {

  // Power-commutator presentation of a finite p-group on generators
  // g_0, ..., g_{n-1}, every relative order equal to p.
  //
  //   g_i^p       = power(i)          (a normal-form word in g_{i+1}, ...)
  //   [g_j, g_i]  = commutator(j, i)  (j > i, a normal-form word in g_{j+1}, ...)
  //
  // Relations are stored as exponent vectors of length n with entries in
  // [0, p). Setters reduce entries modulo p; the support condition is checked
  // by validate(), which every group constructor calls.
  class PcPresentation {
   public:
    PcPresentation() = default;

    PcPresentation(int prime, int ngens) : prime_(prime), ngens_(ngens) {
      if (!is_prime(prime)) {
        throw structural_error("PcPresentation: " + std::to_string(prime) + " is not prime");
      }
      if (ngens < 0) {
        throw structural_error("PcPresentation: negative generator count");
      }
      auto const n = static_cast<std::size_t>(ngens);
      labels_.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        labels_[i] = "g" + std::to_string(i);
      }
      powers_.assign(n * n, 0);
      comms_.assign(n * n * n, 0);
    }

    int prime() const noexcept {
      return prime_;
    }

    int ngens() const noexcept {
      return ngens_;
    }

    std::string const& label(int i) const {
      check_index(i);
      return labels_[static_cast<std::size_t>(i)];
    }

    std::vector<std::string> const& labels() const noexcept {
      return labels_;
    }

    PcPresentation& set_label(int i, std::string name) {
      check_index(i);
      if (name.empty() || name.find_first_of(" \t\n") != std::string::npos) {
        throw structural_error("PcPresentation: bad label '" + name + "'");
      }
      labels_[static_cast<std::size_t>(i)] = std::move(name);
      return *this;
    }

    PcPresentation& set_labels(std::vector<std::string> const& names) {
      if (names.size() != labels_.size()) {
        throw structural_error("PcPresentation: label count mismatch");
      }
      for (std::size_t i = 0; i < names.size(); ++i) {
        set_label(static_cast<int>(i), names[i]);
      }
      return *this;
    }

    std::span<int const> power(int i) const {
      check_index(i);
      return {powers_.data() + offset(i), static_cast<std::size_t>(ngens_)};
    }

    std::span<int const> commutator(int j, int i) const {
      check_pair(j, i);
      return {comms_.data() + offset(j, i), static_cast<std::size_t>(ngens_)};
    }

    PcPresentation& set_power(int i, std::vector<int> const& exps) {
      check_index(i);
      copy_into(powers_.data() + offset(i), exps);
      return *this;
    }

    PcPresentation& set_commutator(int j, int i, std::vector<int> const& exps) {
      check_pair(j, i);
      copy_into(comms_.data() + offset(j, i), exps);
      return *this;
    }

    // Unit exponent vector helpers for building relations.
    std::vector<int> word(std::initializer_list<std::pair<int, std::int64_t>> terms) const {
      std::vector<int> v(static_cast<std::size_t>(ngens_), 0);
      for (auto const& [g, e] : terms) {
        check_index(g);
        auto& slot = v[static_cast<std::size_t>(g)];
        slot = static_cast<int>(mod(slot + e, prime_));
      }
      return v;
    }

    bool power_trivial(int i) const {
      for (int e : power(i)) {
        if (e != 0) {
          return false;
        }
      }
      return true;
    }

    bool commutator_trivial(int j, int i) const {
      for (int e : commutator(j, i)) {
        if (e != 0) {
          return false;
        }
      }
      return true;
    }

    // Throws structural_error when a relation is supported on a generator that
    // is not strictly later than the relation's left-hand side.
    void validate() const {
      if (!is_prime(prime_)) {
        throw structural_error("presentation prime " + std::to_string(prime_) + " is not prime");
      }
      for (int i = 0; i < ngens_; ++i) {
        auto const pw = power(i);
        for (int k = 0; k <= i; ++k) {
          if (pw[static_cast<std::size_t>(k)] != 0) {
            throw structural_error("power relation of " + label(i) + " involves generator "
                                   + label(k) + " which is not later");
          }
        }
        for (int j = i + 1; j < ngens_; ++j) {
          auto const c = commutator(j, i);
          for (int k = 0; k <= j; ++k) {
            if (c[static_cast<std::size_t>(k)] != 0) {
              throw structural_error("commutator [" + label(j) + "," + label(i)
                                     + "] involves generator " + label(k) + " which is not later");
            }
          }
        }
      }
    }

    // Line-based text form; omitted relations are trivial.
    std::string to_text() const {
      std::ostringstream out;
      out << "prime " << prime_ << '\n' << "ngens " << ngens_ << '\n';
      for (int i = 0; i < ngens_; ++i) {
        out << "label " << i << ' ' << label(i) << '\n';
      }
      for (int i = 0; i < ngens_; ++i) {
        if (!power_trivial(i)) {
          out << "pow " << i << " :";
          for (int e : power(i)) {
            out << ' ' << e;
          }
          out << '\n';
        }
      }
      for (int j = 1; j < ngens_; ++j) {
        for (int i = 0; i < j; ++i) {
          if (!commutator_trivial(j, i)) {
            out << "comm " << j << ' ' << i << " :";
            for (int e : commutator(j, i)) {
              out << ' ' << e;
            }
            out << '\n';
          }
        }
      }
      return out.str();
    }

    static PcPresentation from_text(std::string_view text) {
      std::istringstream in{std::string(text)};
      std::string line;
      int prime = -1;
      int ngens = -1;
      PcPresentation pres;
      bool built = false;
      std::size_t lineno = 0;
      auto fail = [&](std::string const& why) {
        throw parse_error("presentation line " + std::to_string(lineno) + ": " + why);
      };
      auto ensure_built = [&] {
        if (built) {
          return;
        }
        if (prime < 0 || ngens < 0) {
          fail("'prime' and 'ngens' must precede relations");
        }
        try {
          pres = PcPresentation(prime, ngens);
        } catch (structural_error const& e) {
          fail(e.what());
        }
        built = true;
      };
      auto read_vector = [&](std::istringstream& ls) {
        std::string colon;
        if (!(ls >> colon) || colon != ":") {
          fail("expected ':'");
        }
        std::vector<int> v;
        long long e = 0;
        while (ls >> e) {
          if (e < 0 || e >= prime) {
            fail("exponent " + std::to_string(e) + " outside [0, p)");
          }
          v.push_back(static_cast<int>(e));
        }
        if (!ls.eof()) {
          fail("non-numeric exponent");
        }
        if (v.size() != static_cast<std::size_t>(ngens)) {
          fail("expected " + std::to_string(ngens) + " exponents");
        }
        return v;
      };
      while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') {
          continue;
        }
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "prime") {
          if (!(ls >> prime) || built) {
            fail("bad 'prime' line");
          }
        } else if (key == "ngens") {
          if (!(ls >> ngens) || built) {
            fail("bad 'ngens' line");
          }
        } else if (key == "label") {
          ensure_built();
          int i = -1;
          std::string name;
          if (!(ls >> i >> name) || i < 0 || i >= ngens) {
            fail("bad 'label' line");
          }
          pres.set_label(i, name);
        } else if (key == "pow") {
          ensure_built();
          int i = -1;
          if (!(ls >> i) || i < 0 || i >= ngens) {
            fail("bad generator index");
          }
          pres.set_power(i, read_vector(ls));
        } else if (key == "comm") {
          ensure_built();
          int j = -1;
          int i = -1;
          if (!(ls >> j >> i) || i < 0 || j <= i || j >= ngens) {
            fail("bad commutator indices (need j > i)");
          }
          pres.set_commutator(j, i, read_vector(ls));
        } else {
          fail("unknown keyword '" + key + "'");
        }
      }
      ensure_built();
      return pres;
    }

    friend bool operator==(PcPresentation const&, PcPresentation const&) = default;

   private:
    void check_index(int i) const {
      if (i < 0 || i >= ngens_) {
        throw structural_error("generator index " + std::to_string(i) + " out of range");
      }
    }

    void check_pair(int j, int i) const {
      check_index(j);
      check_index(i);
      if (j <= i) {
        throw structural_error("commutator relation needs j > i");
      }
    }

    std::size_t offset(int i) const noexcept {
      return static_cast<std::size_t>(i) * static_cast<std::size_t>(ngens_);
    }

    std::size_t offset(int j, int i) const noexcept {
      auto const n = static_cast<std::size_t>(ngens_);
      return (static_cast<std::size_t>(j) * n + static_cast<std::size_t>(i)) * n;
    }

    void copy_into(int* dst, std::vector<int> const& exps) const {
      if (exps.size() != static_cast<std::size_t>(ngens_)) {
        throw structural_error("relation vector has length " + std::to_string(exps.size())
                               + ", expected " + std::to_string(ngens_));
      }
      for (std::size_t k = 0; k < exps.size(); ++k) {
        dst[k] = static_cast<int>(mod(exps[k], prime_));
      }
    }

    int prime_ = 2;
    int ngens_ = 0;
    std::vector<std::string> labels_;
    std::vector<int> powers_;
    std::vector<int> comms_;
  };

  // 64-bit FNV-1a of the canonical text form; stable across runs and
  // platforms, used to key on-disk caches.
  inline std::uint64_t content_hash(PcPresentation const& pres) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : pres.to_text()) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    return h;
  }

}  // namespace pgroup
