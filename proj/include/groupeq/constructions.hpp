#pragma once

#include <map>
#include <string>
#include <vector>

#include "groupeq/error.hpp"
#include "groupeq/finite_group.hpp"
#include "groupeq/integer.hpp"
#include "groupeq/permutation.hpp"
#include "groupeq/subgroup.hpp"

namespace groupeq {

/// Default cap on the number of permutations enumerated by `from_generators`.
inline constexpr std::size_t kDefaultClosureCap = 1'000'000;

/// An automorphism of a group, as the image of every element.
using Automorphism = std::vector<Element>;

/// C_n with element k = g^k. Names: "1", "g", "g^2", ...
inline FiniteGroup cyclic(std::size_t n) {
  if (n == 0) throw PreconditionError("cyclic group of order 0");
  std::vector<std::string> names(n);
  names[0] = "1";
  if (n > 1) names[1] = "g";
  for (std::size_t k = 2; k < n; ++k) names[k] = "g^" + std::to_string(k);
  return FiniteGroup::from_product(
      n, [n](Element a, Element b) { return static_cast<Element>((a + b) % n); }, std::move(names),
      "C" + std::to_string(n), std::max(kDefaultTableCap, n));
}

/// Pair names as "(a,b)" with the identity pair named "1".
inline std::vector<std::string> pair_names(const FiniteGroup& a, const FiniteGroup& b) {
  std::vector<std::string> names(a.order() * b.order());
  for (Element j = 0; j < b.order(); ++j)
    for (Element i = 0; i < a.order(); ++i)
      names[i + a.order() * j] =
          (i == 0 && j == 0) ? "1" : "(" + a.element_name(i) + "," + b.element_name(j) + ")";
  return names;
}

/// G x H, element (g, h) stored at g + |G| h.
inline FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h,
                                  std::size_t table_cap = kDefaultTableCap) {
  const std::size_t n = g.order();
  return FiniteGroup::from_product(
      n * h.order(),
      [&](Element x, Element y) {
        return static_cast<Element>(g.mul(x % n, y % n) + n * h.mul(x / n, y / n));
      },
      pair_names(g, h), "(" + g.name() + "x" + h.name() + ")", table_cap);
}

inline bool is_automorphism(const FiniteGroup& a, const Automorphism& phi) {
  Homomorphism h{phi};
  return is_homomorphism(a, a, h) && is_injective(h, a.order());
}

/// Extends generator images to an automorphism; throws if they do not define one.
inline Automorphism automorphism_from_images(const FiniteGroup& a, const std::vector<Element>& gens,
                                             const std::vector<Element>& images) {
  if (gens.size() != images.size()) throw PreconditionError("generator/image count mismatch");
  std::vector<Element> img(a.order(), 0);
  std::vector<bool> set(a.order(), false);
  set[0] = true;
  std::vector<Element> queue{0};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    Element x = queue[head];
    for (std::size_t k = 0; k < gens.size(); ++k) {
      Element y = a.mul(x, gens[k]);
      Element v = a.mul(img[x], images[k]);
      if (!set[y]) {
        set[y] = true;
        img[y] = v;
        queue.push_back(y);
      } else if (img[y] != v) {
        throw PreconditionError("generator images do not define a homomorphism");
      }
    }
  }
  if (queue.size() != a.order()) throw PreconditionError("elements given do not generate the group");
  if (!is_automorphism(a, img)) throw PreconditionError("generator images do not define an automorphism");
  return img;
}

inline Automorphism compose(const Automorphism& first, const Automorphism& second) {
  Automorphism out(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) out[i] = second[first[i]];
  return out;
}

/// A x| B with b a b^-1 = action[b](a). `action` has one automorphism per element of B
/// and must be a homomorphism B -> Aut(A).
inline FiniteGroup semidirect_product(const FiniteGroup& a, const FiniteGroup& b,
                                      const std::vector<Automorphism>& action,
                                      std::size_t table_cap = kDefaultTableCap) {
  if (action.size() != b.order()) throw PreconditionError("need one automorphism per element of B");
  for (Element x = 0; x < b.order(); ++x)
    if (action[x].size() != a.order() || !is_automorphism(a, action[x]))
      throw PreconditionError("invalid action: image of " + b.element_name(x) +
                              " is not an automorphism");
  for (Element x = 0; x < b.order(); ++x)
    for (Element y = 0; y < b.order(); ++y)
      if (compose(action[y], action[x]) != action[b.mul(x, y)])
        throw PreconditionError("invalid action: not a homomorphism into Aut(A)");
  const std::size_t n = a.order();
  return FiniteGroup::from_product(
      n * b.order(),
      [&](Element x, Element y) {
        Element a1 = x % n, b1 = x / n, a2 = y % n, b2 = y / n;
        return static_cast<Element>(a.mul(a1, action[b1][a2]) + n * b.mul(b1, b2));
      },
      pair_names(a, b), "(" + a.name() + ":" + b.name() + ")", table_cap);
}

/// Action of a cyclic group B = cyclic(k) on A in which the generator g acts by phi.
inline std::vector<Automorphism> cyclic_action(const FiniteGroup& a, std::size_t k, const Automorphism& phi) {
  std::vector<Automorphism> act(k);
  act[0] = identity_map(a).image;
  for (std::size_t i = 1; i < k; ++i) act[i] = compose(act[i - 1], phi);
  return act;
}

/// The group generated by A and t with t^k = a0 and t a t^-1 = phi(a). Elements are
/// (a, i) ~ a t^i stored at a + |A| i. Requires phi(a0) = a0 and phi^k = conjugation by a0.
inline FiniteGroup cyclic_extension(const FiniteGroup& a, std::size_t k, const Automorphism& phi, Element a0,
                                    std::string group_name = {}) {
  if (!is_automorphism(a, phi)) throw PreconditionError("phi is not an automorphism");
  if (phi[a0] != a0) throw PreconditionError("phi must fix a0");
  std::vector<Automorphism> powers(k + 1);
  powers[0] = identity_map(a).image;
  for (std::size_t i = 1; i <= k; ++i) powers[i] = compose(powers[i - 1], phi);
  for (Element x = 0; x < a.order(); ++x)
    if (powers[k][x] != a.mul(a.mul(a0, x), a.inv(a0)))
      throw PreconditionError("phi^k must equal conjugation by a0");
  const std::size_t n = a.order();
  std::vector<std::string> names(n * k);
  for (std::size_t i = 0; i < k; ++i)
    for (Element x = 0; x < n; ++x) {
      std::string t = i == 0 ? "" : (i == 1 ? "t" : "t^" + std::to_string(i));
      names[x + n * i] = (x == 0 && i == 0) ? "1" : (x == 0 ? t : (i == 0 ? a.element_name(x) : a.element_name(x) + "*" + t));
    }
  return FiniteGroup::from_product(
      n * k,
      [&](Element x, Element y) {
        Element a1 = x % n, a2 = y % n;
        std::size_t i = x / n, j = y / n;
        Element v = a.mul(a1, powers[i][a2]);
        if (i + j >= k) v = a.mul(v, a0);
        return static_cast<Element>(v + n * ((i + j) % k));
      },
      std::move(names), std::move(group_name));
}

/// The closure of a list of permutations under composition (apply left factor first).
/// Element 0 is the identity permutation; elements are named in cycle notation.
inline FiniteGroup from_generators(std::vector<Permutation> gens, std::string group_name = {},
                                   std::size_t closure_cap = kDefaultClosureCap,
                                   std::size_t table_cap = kDefaultTableCap) {
  std::size_t degree = 0;
  for (const auto& p : gens) degree = std::max(degree, p.degree());
  for (auto& p : gens) p = p.extended(degree);
  std::vector<Permutation> elems{Permutation(degree)};
  std::map<Permutation, Element> index{{elems[0], 0}};
  for (std::size_t head = 0; head < elems.size(); ++head)
    for (const auto& s : gens) {
      Permutation q = compose(elems[head], s);
      if (index.find(q) == index.end()) {
        if (elems.size() >= closure_cap)
          throw CapExceeded("permutation closure exceeds the cap of " + std::to_string(closure_cap));
        index.emplace(q, static_cast<Element>(elems.size()));
        elems.push_back(std::move(q));
      }
    }
  if (elems.size() > table_cap)
    throw CapExceeded("group of order " + std::to_string(elems.size()) + " exceeds the table cap " +
                      std::to_string(table_cap));
  std::vector<std::string> names(elems.size());
  names[0] = "1";
  for (std::size_t i = 1; i < elems.size(); ++i) names[i] = to_cycle_string(elems[i]);
  return FiniteGroup::from_product(
      elems.size(), [&](Element x, Element y) { return index.at(compose(elems[x], elems[y])); },
      std::move(names), std::move(group_name), table_cap);
}

/// Maps x -> a x + b over the p-element field, composed left to right.
/// Element (a, b) is named "ax+b"; the identity is "1".
inline FiniteGroup affine_group_over_prime_field(std::uint64_t p) {
  require_prime(p);
  // index = (a - 1) * p + b, so (1, 0) is index 0
  const std::size_t n = static_cast<std::size_t>(p * (p - 1));
  auto decode = [p](Element x) { return std::pair<std::uint64_t, std::uint64_t>{x / p + 1, x % p}; };
  std::vector<std::string> names(n);
  for (Element x = 0; x < n; ++x) {
    auto [a, b] = decode(x);
    names[x] = x == 0 ? "1" : std::to_string(a) + "x+" + std::to_string(b);
  }
  return FiniteGroup::from_product(
      n,
      [&](Element x, Element y) {
        // first x then y: a2 (a1 t + b1) + b2
        auto [a1, b1] = decode(x);
        auto [a2, b2] = decode(y);
        std::uint64_t a = (a2 * a1) % p, b = (a2 * b1 + b2) % p;
        return static_cast<Element>((a - 1) * p + b);
      },
      std::move(names), "AGL(1," + std::to_string(p) + ")");
}

/// Dihedral group of order 2n: rotations r^k then reflections r^k s.
inline FiniteGroup dihedral(std::size_t n) {
  auto rot = cyclic(n);
  Automorphism inv(n);
  for (Element k = 0; k < n; ++k) inv[k] = rot.inv(k);
  auto g = semidirect_product(rot, cyclic(2), cyclic_action(rot, 2, inv));
  g.set_name("D" + std::to_string(2 * n));
  return g;
}

/// Generalized quaternion / dicyclic group of order 4n: <a, t | a^2n, t^2 = a^n, t a t^-1 = a^-1>.
inline FiniteGroup dicyclic(std::size_t n) {
  auto c = cyclic(2 * n);
  Automorphism inv(2 * n);
  for (Element k = 0; k < 2 * n; ++k) inv[k] = c.inv(k);
  return cyclic_extension(c, 2, inv, static_cast<Element>(n), "Dic" + std::to_string(n));
}

inline FiniteGroup symmetric_group(std::size_t n) {
  if (n <= 1) return FiniteGroup::trivial();
  std::vector<std::uint32_t> cycle(n);
  for (std::size_t i = 0; i < n; ++i) cycle[i] = static_cast<std::uint32_t>((i + 1) % n);
  Permutation swap(n);
  std::swap(swap.image[0], swap.image[1]);
  return from_generators({swap, Permutation(cycle)}, "S" + std::to_string(n));
}

inline FiniteGroup alternating_group(std::size_t n) {
  if (n <= 2) return FiniteGroup::trivial();
  std::vector<Permutation> gens;
  for (std::size_t k = 2; k < n; ++k) {
    Permutation p(n);
    p.image[0] = 1;
    p.image[1] = static_cast<std::uint32_t>(k);
    p.image[k] = 0;
    gens.push_back(p);
  }
  return from_generators(gens, "A" + std::to_string(n));
}

}  // namespace groupeq
