#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "groupeq/error.hpp"
#include "groupeq/finite_group.hpp"
#include "groupeq/integer.hpp"
#include "groupeq/subgroup.hpp"

namespace groupeq {

/// Default order cap for exhaustive subgroup enumeration.
inline constexpr std::size_t kDefaultSubgroupCap = 512;

inline bool is_abelian(const FiniteGroup& g) {
  const auto& gens = g.generators();
  for (Element a : gens)
    for (Element b : gens)
      if (g.mul(a, b) != g.mul(b, a)) return false;
  return true;
}

/// Subgroup generated by all commutators [a, b] with a in `a_set`, b in `b_set`.
inline Subgroup commutator_of(const FiniteGroup& g, const Subgroup& a_set, const Subgroup& b_set) {
  std::vector<bool> seen(g.order(), false);
  std::vector<Element> gens;
  for (Element a : a_set.elements)
    for (Element b : b_set.elements) {
      Element c = g.commutator(a, b);
      if (!seen[c]) {
        seen[c] = true;
        gens.push_back(c);
      }
    }
  return closure(g, gens);
}

inline Subgroup commutator_subgroup(const FiniteGroup& g) {
  auto all = whole_group(g);
  return commutator_of(g, all, all);
}

/// [G, G', G'', ...] ending at the first repeated term (the trivial group for solvable G).
inline std::vector<Subgroup> derived_series(const FiniteGroup& g) {
  std::vector<Subgroup> series{whole_group(g)};
  while (true) {
    auto next = commutator_of(g, series.back(), series.back());
    if (next == series.back()) break;
    series.push_back(std::move(next));
  }
  return series;
}

/// [G, [G,G], [[G,G],G], ...] ending at the first repeated term.
inline std::vector<Subgroup> lower_central_series(const FiniteGroup& g) {
  auto all = whole_group(g);
  std::vector<Subgroup> series{all};
  while (true) {
    auto next = commutator_of(g, series.back(), all);
    if (next == series.back()) break;
    series.push_back(std::move(next));
  }
  return series;
}

inline bool is_solvable(const FiniteGroup& g) { return derived_series(g).back().order() == 1; }

/// Derived length of a solvable group (0 for the trivial group); throws if not solvable.
inline std::size_t derived_length(const FiniteGroup& g) {
  auto s = derived_series(g);
  if (s.back().order() != 1) throw PreconditionError("group is not solvable");
  return s.size() - 1;
}

/// G'' = 1.
inline bool is_metabelian(const FiniteGroup& g) {
  auto s = derived_series(g);
  return s.back().order() == 1 && s.size() <= 3;
}

inline bool is_nilpotent(const FiniteGroup& g) { return lower_central_series(g).back().order() == 1; }

inline Subgroup centralizer(const FiniteGroup& g, const Subgroup& s) {
  Subgroup c;
  for (Element x = 0; x < g.order(); ++x) {
    bool ok = true;
    for (Element a : s.elements)
      if (g.mul(a, x) != g.mul(x, a)) {
        ok = false;
        break;
      }
    if (ok) c.elements.push_back(x);
  }
  return c;
}

inline Subgroup center(const FiniteGroup& g) {
  Subgroup c;
  for (Element x = 0; x < g.order(); ++x) {
    bool ok = true;
    for (Element s : g.generators())
      if (g.mul(s, x) != g.mul(x, s)) {
        ok = false;
        break;
      }
    if (ok) c.elements.push_back(x);
  }
  return c;
}

inline Subgroup normalizer(const FiniteGroup& g, const Subgroup& h) {
  Subgroup n;
  for (Element x = 0; x < g.order(); ++x) {
    bool ok = true;
    for (Element a : h.elements)
      if (!h.contains(g.conj(a, x))) {
        ok = false;
        break;
      }
    if (ok) n.elements.push_back(x);
  }
  return n;
}

/// A Sylow p-subgroup, grown one factor p at a time inside normalizers; the smallest
/// admissible element is added at each step, so the result is deterministic.
inline Subgroup sylow_subgroup(const FiniteGroup& g, std::uint64_t p) {
  require_prime(p);
  std::size_t target = 1, rest = g.order();
  while (rest % p == 0) {
    rest /= p;
    target *= p;
  }
  if (target == 1) throw PreconditionError(std::to_string(p) + " does not divide the group order");
  Subgroup s = trivial_subgroup();
  while (s.order() < target) {
    auto n = normalizer(g, s);
    bool grown = false;
    for (Element x : n.elements) {
      if (s.contains(x)) continue;
      if (s.contains(g.pow(x, static_cast<long long>(p)))) {
        std::vector<Element> gens = s.elements;
        gens.push_back(x);
        s = closure(g, gens);
        grown = true;
        break;
      }
    }
    if (!grown) throw Error("Sylow construction failed (internal error)");
  }
  return s;
}

namespace detail {

struct Bits {
  std::vector<std::uint64_t> words;
  explicit Bits(std::size_t n) : words((n + 63) / 64, 0) {}
  void set(std::size_t i) { words[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words[i / 64] >> (i % 64)) & 1U; }
  friend auto operator<=>(const Bits&, const Bits&) = default;
};

inline Bits to_bits(const Subgroup& s, std::size_t n) {
  Bits b(n);
  for (Element x : s.elements) b.set(x);
  return b;
}

}  // namespace detail

/// Every subgroup of g, duplicate-free, in canonical order (size, then element list).
inline std::vector<Subgroup> all_subgroups(const FiniteGroup& g, std::size_t cap = kDefaultSubgroupCap) {
  if (g.order() > cap)
    throw CapExceeded("subgroup enumeration: order " + std::to_string(g.order()) + " exceeds cap " +
                      std::to_string(cap));
  const std::size_t n = g.order();
  struct Entry {
    Subgroup sub;
    std::vector<Element> gens;
  };
  std::set<detail::Bits> seen;
  std::vector<Entry> found;
  std::vector<Element> cyclic_gens;  // one generator per distinct cyclic subgroup
  for (Element x = 0; x < n; ++x) {
    auto c = closure(g, {x});
    if (seen.insert(detail::to_bits(c, n)).second) {
      cyclic_gens.push_back(x);
      found.push_back({std::move(c), {x}});
    }
  }
  for (std::size_t head = 0; head < found.size(); ++head) {
    for (Element c : cyclic_gens) {
      if (found[head].sub.contains(c)) continue;
      auto gens = found[head].gens;
      gens.push_back(c);
      auto k = closure(g, gens);
      if (seen.insert(detail::to_bits(k, n)).second) found.push_back({std::move(k), std::move(gens)});
    }
  }
  std::vector<Subgroup> out;
  out.reserve(found.size());
  for (auto& e : found) out.push_back(std::move(e.sub));
  std::sort(out.begin(), out.end(), canonical_less);
  return out;
}

inline std::vector<Subgroup> normal_subgroups(const FiniteGroup& g, std::size_t cap = kDefaultSubgroupCap) {
  auto all = all_subgroups(g, cap);
  std::vector<Subgroup> out;
  for (auto& s : all)
    if (is_normal(g, s)) out.push_back(std::move(s));
  return out;
}

struct Quotient {
  FiniteGroup group;
  Homomorphism projection;
};

/// G/N on cosets labeled by their least element (so the identity coset is index 0).
/// Coset names are "[rep]" for the least element rep, "1" for N itself.
inline Quotient quotient(const FiniteGroup& g, const Subgroup& n) {
  if (!is_subgroup(g, n)) throw PreconditionError("quotient: not a subgroup");
  if (!is_normal(g, n)) throw PreconditionError("quotient: subgroup is not normal");
  constexpr Element unset = ~Element{0};
  std::vector<Element> coset(g.order(), unset);
  std::vector<Element> reps;
  for (Element x = 0; x < g.order(); ++x) {
    if (coset[x] != unset) continue;
    auto id = static_cast<Element>(reps.size());
    reps.push_back(x);
    for (Element a : n.elements) coset[g.mul(x, a)] = id;
  }
  std::vector<std::string> names(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i)
    names[i] = i == 0 ? "1" : "[" + g.element_name(reps[i]) + "]";
  auto q = FiniteGroup::from_product(
      reps.size(), [&](Element a, Element b) { return coset[g.mul(reps[a], reps[b])]; }, std::move(names),
      g.name().empty() ? std::string{} : g.name() + "/N");
  return {std::move(q), Homomorphism{std::move(coset)}};
}

}  // namespace groupeq
