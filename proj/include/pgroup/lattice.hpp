#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "errors.hpp"
#include "group.hpp"
#include "subgroup.hpp"

namespace pgroup {

  // Downward-closed predicate on subgroups, given by membership bitset. Only
  // subgroups passing it are enumerated (and extended).
  using SubgroupFilter = std::function<bool(ElementSet const&)>;

  struct LatticeOptions {
    unsigned workers = 1;
    // Directory for the lattice cache; empty disables caching.
    std::string cache_dir;
  };

  // Explicit directory, else the PGROUP_CACHE_DIR environment variable, else
  // no cache.
  inline std::string resolve_cache_dir(std::string const& explicit_dir) {
    if (!explicit_dir.empty()) {
      return explicit_dir;
    }
    if (char const* env = std::getenv("PGROUP_CACHE_DIR")) {
      return env;
    }
    return {};
  }

  namespace detail {

    struct Extension {
      std::vector<Elem> elements;
      std::vector<Elem> gens;  // g first, then the generators of H
    };

    inline bool normalizes(PcGroup const& G, Elem g, Subgroup const& H) {
      for (Elem h : H.generators()) {
        if (!H.contains(G.conj(h, g))) {
          return false;
        }
      }
      return true;
    }

    // All <H, g> with g^p in H and g normalizing H (or, for normal layers,
    // [g, G] inside H), one per distinct extension.
    inline std::vector<Extension> extend_one(PcGroup const& G, Subgroup const& H, bool normal_only,
                                             SubgroupFilter const& filter) {
      std::vector<Extension> out;
      ElementSet covered = H.bits();
      Elem const p = static_cast<Elem>(G.prime());
      for (Elem g = 1; g < G.order(); ++g) {
        if (covered.test(g) || !H.contains(G.pth_power(g))) {
          continue;
        }
        if (normal_only) {
          bool central = true;
          for (int i = 0; i < G.ngens() && central; ++i) {
            central = H.contains(G.comm(g, G.gen(i)));
          }
          if (!central) {
            continue;
          }
        } else if (!normalizes(G, g, H)) {
          continue;
        }
        Extension ext;
        ext.elements.reserve(H.order() * p);
        Elem gi = 0;
        for (Elem i = 0; i < p; ++i) {
          for (Elem h : H.elements()) {
            ext.elements.push_back(G.mul(h, gi));
          }
          gi = G.mul(gi, g);
        }
        for (Elem e : ext.elements) {
          covered.set(e);
        }
        std::sort(ext.elements.begin(), ext.elements.end());
        if (filter) {
          ElementSet bits(G.order());
          for (Elem e : ext.elements) {
            bits.set(e);
          }
          if (!filter(bits)) {
            continue;
          }
        }
        ext.gens.push_back(g);
        ext.gens.insert(ext.gens.end(), H.generators().begin(), H.generators().end());
        out.push_back(std::move(ext));
      }
      return out;
    }

    // Next layer from the current one; work on the current layer is split
    // across workers and merged in layer order.
    inline std::vector<Subgroup> next_layer(GroupPtr const& G, std::vector<Subgroup> const& layer, bool normal_only,
                                            SubgroupFilter const& filter, unsigned workers) {
      std::vector<std::vector<Extension>> per(layer.size());
      auto work = [&](std::size_t begin, std::size_t step) {
        for (std::size_t t = begin; t < layer.size(); t += step) {
          per[t] = extend_one(*G, layer[t], normal_only, filter);
        }
      };
      workers = std::max(1U, std::min<unsigned>(workers, static_cast<unsigned>(layer.size())));
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
      std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
      std::vector<Extension> unique;
      for (auto& exts : per) {
        for (auto& ext : exts) {
          auto const h = hash_elements(ext.elements);
          auto& bucket = seen[h];
          bool dup = false;
          for (std::size_t idx : bucket) {
            if (unique[idx].elements == ext.elements) {
              dup = true;
              break;
            }
          }
          if (!dup) {
            bucket.push_back(unique.size());
            unique.push_back(std::move(ext));
          }
        }
      }
      std::vector<Subgroup> out;
      out.reserve(unique.size());
      for (auto& ext : unique) {
        auto gens = irredundant_generators(*G, ext.gens, ext.elements.size());
        out.emplace_back(G, std::move(ext.elements), std::move(gens));
      }
      std::sort(out.begin(), out.end());
      return out;
    }

    inline std::string hex64(std::uint64_t h) {
      std::ostringstream os;
      os << std::hex << std::setw(16) << std::setfill('0') << h;
      return os.str();
    }

    inline std::filesystem::path cache_path(std::string const& dir, PcGroup const& G, std::string const& tag) {
      return std::filesystem::path(dir) / ("lattice-" + hex64(content_hash(G.presentation())) + "-" + tag + ".txt");
    }

    inline void write_cache(std::string const& dir, PcGroup const& G, std::string const& tag,
                            std::vector<std::vector<Subgroup>> const& layers) {
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      auto const path = cache_path(dir, G, tag);
      auto const tmp = path.string() + ".tmp";
      {
        std::ofstream out(tmp);
        if (!out) {
          return;
        }
        out << "pgroup-lattice 1\n";
        out << "hash " << hex64(content_hash(G.presentation())) << "\n";
        out << "tag " << tag << "\n";
        for (auto const& layer : layers) {
          for (auto const& H : layer) {
            out << H.order() << " :";
            for (Elem g : H.generators()) {
              out << ' ';
              auto const v = G.exponents(g);
              for (std::size_t t = 0; t < v.size(); ++t) {
                out << (t ? "," : "") << v[t];
              }
            }
            out << '\n';
          }
        }
      }
      std::filesystem::rename(tmp, path, ec);
    }

    // Cached layers, each subgroup rebuilt by closure and checked against the
    // recorded order. Any mismatch discards the cache.
    inline std::optional<std::vector<std::vector<Subgroup>>> read_cache(std::string const& dir, GroupPtr const& G,
                                                                        std::string const& tag) {
      std::ifstream in(cache_path(dir, *G, tag));
      if (!in) {
        return std::nullopt;
      }
      std::string line;
      if (!std::getline(in, line) || line != "pgroup-lattice 1") {
        return std::nullopt;
      }
      if (!std::getline(in, line) || line != "hash " + hex64(content_hash(G->presentation()))) {
        return std::nullopt;
      }
      if (!std::getline(in, line) || line != "tag " + tag) {
        return std::nullopt;
      }
      std::vector<std::vector<Subgroup>> layers(static_cast<std::size_t>(G->ngens()) + 1);
      try {
        while (std::getline(in, line)) {
          std::istringstream ls(line);
          std::size_t order = 0;
          std::string colon;
          if (!(ls >> order >> colon) || colon != ":") {
            return std::nullopt;
          }
          std::vector<Elem> gens;
          std::string tok;
          while (ls >> tok) {
            std::vector<int> v;
            std::stringstream ts(tok);
            std::string num;
            while (std::getline(ts, num, ',')) {
              v.push_back(std::stoi(num));
            }
            gens.push_back(G->from_exponents(v));
          }
          auto els = closure_elements(*G, gens);
          if (els.size() != order) {
            return std::nullopt;
          }
          std::size_t k = 0;
          for (std::size_t o = order; o > 1; o /= static_cast<std::size_t>(G->prime())) {
            ++k;
          }
          if (k >= layers.size()) {
            return std::nullopt;
          }
          layers[k].emplace_back(G, std::move(els), std::move(gens));
        }
      } catch (std::exception const&) {
        return std::nullopt;
      }
      while (!layers.empty() && layers.back().empty()) {
        layers.pop_back();
      }
      for (auto& layer : layers) {
        std::sort(layer.begin(), layer.end());
        for (std::size_t t = 1; t < layer.size(); ++t) {
          if (layer[t] == layer[t - 1]) {
            return std::nullopt;
          }
        }
      }
      if (layers.empty() || layers[0].size() != 1) {
        return std::nullopt;
      }
      return layers;
    }

  }  // namespace detail

  // Subgroups layer by layer: entry k holds every subgroup of order p^k that
  // passes the filter, sorted canonically. Enumeration is by cyclic
  // extension, since every subgroup of order p^{k+1} contains a normal
  // subgroup of index p.
  //
  // tag names the filter for the cache; pass an empty tag to bypass it.
  inline std::vector<std::vector<Subgroup>> subgroup_layers(GroupPtr const& G, SubgroupFilter const& filter = {},
                                                            LatticeOptions const& opts = {},
                                                            std::string const& tag = "all") {
    std::string const dir = tag.empty() ? std::string{} : resolve_cache_dir(opts.cache_dir);
    if (!dir.empty()) {
      if (auto cached = detail::read_cache(dir, G, tag)) {
        return *cached;
      }
    }
    std::vector<std::vector<Subgroup>> layers;
    layers.push_back({trivial_subgroup(G)});
    while (!layers.back().empty() && layers.back().front().order() < G->order()) {
      auto next = detail::next_layer(G, layers.back(), false, filter, opts.workers);
      if (next.empty()) {
        break;
      }
      layers.push_back(std::move(next));
    }
    if (!dir.empty()) {
      detail::write_cache(dir, *G, tag, layers);
    }
    return layers;
  }

  inline std::vector<Subgroup> all_subgroups(GroupPtr const& G, LatticeOptions const& opts = {}) {
    std::vector<Subgroup> out;
    for (auto& layer : subgroup_layers(G, {}, opts)) {
      out.insert(out.end(), layer.begin(), layer.end());
    }
    return out;
  }

  // Every subgroup of the given order, duplicate-free and canonically sorted.
  inline std::vector<Subgroup> subgroups_of_order(GroupPtr const& G, std::uint64_t target_order,
                                                  LatticeOptions const& opts = {}) {
    std::uint64_t o = target_order;
    std::size_t k = 0;
    while (o > 1 && o % static_cast<std::uint64_t>(G->prime()) == 0) {
      o /= static_cast<std::uint64_t>(G->prime());
      ++k;
    }
    if (o != 1 || target_order == 0 || G->order() % target_order != 0) {
      throw precondition_error("subgroup order " + std::to_string(target_order) + " does not divide the group order");
    }
    if (k == 0) {
      return {trivial_subgroup(G)};
    }
    // only layers up to k are needed
    std::vector<Subgroup> layer{trivial_subgroup(G)};
    for (std::size_t t = 0; t < k; ++t) {
      layer = detail::next_layer(G, layer, false, {}, opts.workers);
    }
    return layer;
  }

  struct NormalSubgroup {
    Subgroup subgroup;
    bool central = false;
  };

  // All normal subgroups by increasing order, each flagged when central.
  inline std::vector<NormalSubgroup> normal_subgroups(GroupPtr const& G, LatticeOptions const& opts = {}) {
    std::vector<std::vector<Subgroup>> layers{{trivial_subgroup(G)}};
    while (layers.back().front().order() < G->order()) {
      layers.push_back(detail::next_layer(G, layers.back(), true, {}, opts.workers));
    }
    std::vector<NormalSubgroup> out;
    for (auto& layer : layers) {
      for (auto& N : layer) {
        bool central = true;
        for (Elem n : N.generators()) {
          for (int i = 0; i < G->ngens() && central; ++i) {
            central = G->comm(n, G->gen(i)) == 0;
          }
        }
        out.push_back({std::move(N), central});
      }
    }
    return out;
  }

}  // namespace pgroup
