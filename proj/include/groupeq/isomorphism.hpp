#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "groupeq/error.hpp"
#include "groupeq/finite_group.hpp"
#include "groupeq/structure.hpp"
#include "groupeq/subgroup.hpp"

namespace groupeq {

inline constexpr std::size_t kDefaultIsomorphismCap = 128;

/// Isomorphism invariants compared before any search.
struct Fingerprint {
  std::size_t order = 0;
  std::vector<std::pair<std::size_t, std::size_t>> element_classes;  // sorted (order, |centralizer|)
  std::size_t center_order = 0;
  std::vector<std::size_t> derived_orders;

  friend bool operator==(const Fingerprint&, const Fingerprint&) = default;
};

namespace detail {

inline std::vector<std::size_t> centralizer_orders(const FiniteGroup& g) {
  std::vector<std::size_t> out(g.order(), 0);
  for (Element x = 0; x < g.order(); ++x)
    for (Element y = 0; y < g.order(); ++y)
      if (g.mul(x, y) == g.mul(y, x)) ++out[x];
  return out;
}

}  // namespace detail

inline Fingerprint fingerprint(const FiniteGroup& g) {
  Fingerprint f;
  f.order = g.order();
  auto cz = detail::centralizer_orders(g);
  for (Element x = 0; x < g.order(); ++x) f.element_classes.emplace_back(g.element_order(x), cz[x]);
  std::sort(f.element_classes.begin(), f.element_classes.end());
  f.center_order = center(g).order();
  for (const auto& s : derived_series(g)) f.derived_orders.push_back(s.order());
  return f;
}

/// Decides whether g and h are isomorphic; returns an explicit isomorphism g -> h if so.
///
/// Generators of g (the greedy set) are mapped in turn to candidates of h with the same
/// order and centralizer size; each partial assignment is extended along the Cayley graph
/// and rejected on the first inconsistent or non-injective edge.
inline std::optional<Homomorphism> isomorphic(const FiniteGroup& g, const FiniteGroup& h,
                                              std::size_t cap = kDefaultIsomorphismCap) {
  if (g.order() > cap || h.order() > cap)
    throw CapExceeded("isomorphism test: order exceeds cap " + std::to_string(cap));
  if (g.order() != h.order()) return std::nullopt;
  if (!(fingerprint(g) == fingerprint(h))) return std::nullopt;

  const std::size_t n = g.order();
  const auto& gens = g.generators();
  auto cz_g = detail::centralizer_orders(g);
  auto cz_h = detail::centralizer_orders(h);
  std::vector<std::vector<Element>> candidates(gens.size());
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (Element y = 0; y < n; ++y)
      if (h.element_order(y) == g.element_order(gens[k]) && cz_h[y] == cz_g[gens[k]])
        candidates[k].push_back(y);

  constexpr Element unset = ~Element{0};
  std::vector<Element> images(gens.size());
  std::vector<Element> phi(n);
  std::vector<bool> used(n);

  // Extends the map on <gens[0..k]> from the current images; false on any conflict.
  auto extend = [&](std::size_t k) {
    std::fill(phi.begin(), phi.end(), unset);
    std::fill(used.begin(), used.end(), false);
    phi[0] = 0;
    used[0] = true;
    std::vector<Element> queue{0};
    for (std::size_t head = 0; head < queue.size(); ++head) {
      Element x = queue[head];
      for (std::size_t i = 0; i <= k; ++i) {
        Element y = g.mul(x, gens[i]);
        Element v = h.mul(phi[x], images[i]);
        if (phi[y] == unset) {
          if (used[v]) return false;
          phi[y] = v;
          used[v] = true;
          queue.push_back(y);
        } else if (phi[y] != v) {
          return false;
        }
      }
    }
    return true;
  };

  std::optional<Homomorphism> result;
  auto search = [&](auto&& self, std::size_t k) -> bool {
    if (k == gens.size()) {
      result = Homomorphism{phi};
      return true;
    }
    for (Element cand : candidates[k]) {
      images[k] = cand;
      if (extend(k) && self(self, k + 1)) return true;
    }
    return false;
  };
  if (gens.empty()) return identity_map(g);
  search(search, 0);
  return result;
}

}  // namespace groupeq
