#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "groupeq/error.hpp"
#include "groupeq/finite_group.hpp"

namespace groupeq {

/// A subgroup, stored as the sorted list of its element indices in the parent group.
/// The parent is not owned; callers pass it alongside.
struct Subgroup {
  std::vector<Element> elements;

  std::size_t order() const noexcept { return elements.size(); }
  bool contains(Element x) const { return std::binary_search(elements.begin(), elements.end(), x); }

  friend bool operator==(const Subgroup&, const Subgroup&) = default;
};

/// Canonical subgroup order: by size, then lexicographically by element list.
inline bool canonical_less(const Subgroup& a, const Subgroup& b) {
  if (a.order() != b.order()) return a.order() < b.order();
  return a.elements < b.elements;
}

/// A map between two finite groups given by the image of every source element.
struct Homomorphism {
  std::vector<Element> image;

  Element operator()(Element x) const { return image[x]; }
  friend bool operator==(const Homomorphism&, const Homomorphism&) = default;
};

inline Homomorphism identity_map(const FiniteGroup& g) {
  Homomorphism h;
  h.image.resize(g.order());
  for (Element x = 0; x < g.order(); ++x) h.image[x] = x;
  return h;
}

/// Checks image(xy) = image(x) image(y) for all pairs.
inline bool is_homomorphism(const FiniteGroup& source, const FiniteGroup& target, const Homomorphism& h) {
  if (h.image.size() != source.order()) return false;
  for (Element v : h.image)
    if (v >= target.order()) return false;
  if (h.image[0] != 0) return false;
  for (Element x = 0; x < source.order(); ++x)
    for (Element y = 0; y < source.order(); ++y)
      if (h.image[source.mul(x, y)] != target.mul(h.image[x], h.image[y])) return false;
  return true;
}

inline void require_homomorphism(const FiniteGroup& source, const FiniteGroup& target,
                                 const Homomorphism& h) {
  if (!is_homomorphism(source, target, h)) throw AxiomError("map is not a homomorphism");
}

inline bool is_injective(const Homomorphism& h, std::size_t target_order) {
  std::vector<bool> seen(target_order, false);
  for (Element v : h.image) {
    if (seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

inline Subgroup kernel(const Homomorphism& h) {
  Subgroup k;
  for (Element x = 0; x < h.image.size(); ++x)
    if (h.image[x] == 0) k.elements.push_back(x);
  return k;
}

inline Subgroup image_of(const Homomorphism& h) {
  Subgroup s;
  s.elements = h.image;
  std::sort(s.elements.begin(), s.elements.end());
  s.elements.erase(std::unique(s.elements.begin(), s.elements.end()), s.elements.end());
  return s;
}

inline Subgroup whole_group(const FiniteGroup& g) {
  Subgroup s;
  s.elements.resize(g.order());
  for (Element x = 0; x < g.order(); ++x) s.elements[x] = x;
  return s;
}

inline Subgroup trivial_subgroup() { return Subgroup{{0}}; }

/// Subgroup generated by `gens`.
inline Subgroup closure(const FiniteGroup& g, const std::vector<Element>& gens) {
  std::vector<bool> in(g.order(), false);
  std::vector<Element> queue{0};
  in[0] = true;
  for (std::size_t head = 0; head < queue.size(); ++head)
    for (Element s : gens) {
      Element y = g.mul(queue[head], s);
      if (!in[y]) {
        in[y] = true;
        queue.push_back(y);
      }
    }
  std::sort(queue.begin(), queue.end());
  return Subgroup{std::move(queue)};
}

inline bool is_subgroup(const FiniteGroup& g, const Subgroup& h) {
  if (h.elements.empty() || !h.contains(0)) return false;
  if (!std::is_sorted(h.elements.begin(), h.elements.end())) return false;
  for (Element a : h.elements) {
    if (!h.contains(g.inv(a))) return false;
    for (Element b : h.elements)
      if (!h.contains(g.mul(a, b))) return false;
  }
  return true;
}

inline bool is_normal(const FiniteGroup& g, const Subgroup& n) {
  for (Element x : g.generators())
    for (Element a : n.elements)
      if (!n.contains(g.conj(a, x))) return false;
  return true;
}

inline bool is_abelian(const FiniteGroup& g, const Subgroup& h) {
  for (Element a : h.elements)
    for (Element b : h.elements)
      if (g.mul(a, b) != g.mul(b, a)) return false;
  return true;
}

/// The subgroup realized as a group of its own, plus the inclusion map.
struct SubgroupGroup {
  FiniteGroup group;
  Homomorphism inclusion;  // subgroup index -> parent index
};

inline SubgroupGroup as_group(const FiniteGroup& g, const Subgroup& h, std::string name = {}) {
  const auto& el = h.elements;  // sorted, el[0] == 0
  std::vector<Element> local(g.order(), 0);
  for (Element i = 0; i < el.size(); ++i) local[el[i]] = i;
  std::vector<std::string> names;
  names.reserve(el.size());
  for (Element x : el) names.push_back(g.element_name(x));
  auto sub = FiniteGroup::from_product(
      el.size(), [&](Element a, Element b) { return local[g.mul(el[a], el[b])]; }, std::move(names),
      std::move(name), std::max<std::size_t>(kDefaultTableCap, el.size()));
  return {std::move(sub), Homomorphism{el}};
}

}  // namespace groupeq
