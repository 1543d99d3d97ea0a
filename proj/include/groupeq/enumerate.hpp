#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "groupeq/constructions.hpp"
#include "groupeq/error.hpp"
#include "groupeq/finite_group.hpp"
#include "groupeq/integer.hpp"
#include "groupeq/isomorphism.hpp"
#include "groupeq/verifiers.hpp"

namespace groupeq {

inline constexpr std::size_t kDefaultEnumerationCap = 12;

/// Number of isomorphism classes of groups of order n for n <= 12.
inline std::optional<std::size_t> known_group_count(std::size_t n) {
  static const std::size_t counts[] = {0, 1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5};
  if (n == 0 || n > 12) return std::nullopt;
  return counts[n];
}

/// Every automorphism of `a`, found by mapping the greedy generators to all tuples of
/// elements of matching orders.
inline std::vector<Automorphism> all_automorphisms(const FiniteGroup& a) {
  const auto& gens = a.generators();
  std::vector<std::vector<Element>> cand(gens.size());
  for (std::size_t k = 0; k < gens.size(); ++k)
    for (Element y = 0; y < a.order(); ++y)
      if (a.element_order(y) == a.element_order(gens[k])) cand[k].push_back(y);
  std::vector<Automorphism> out;
  std::vector<Element> images(gens.size());
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == gens.size()) {
      try {
        out.push_back(automorphism_from_images(a, gens, images));
      } catch (const PreconditionError&) {
      }
      return;
    }
    for (Element y : cand[k]) {
      images[k] = y;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

namespace detail {

struct Candidate {
  FiniteGroup group;
  Fingerprint print;
};

// Stable sort key for the output: abelian groups first, then by derived series, center and
// the element-order profile.
inline auto group_sort_key(const Fingerprint& f) {
  return std::make_tuple(f.derived_orders.size(), f.derived_orders, std::size_t(0) - f.center_order, f.element_classes);
}

}  // namespace detail

/// All groups of order n up to isomorphism, for orders whose groups are all solvable
/// (every n < 60). A solvable group has a normal subgroup N of prime index p, so it is
/// generated by N and some t with t^p = a0 in N and t a t^-1 = phi(a); every such
/// cyclic extension of every group of order n/p is built and the results are reduced up to
/// isomorphism. Groups are named "G<n>_<k>" in output order.
inline std::vector<FiniteGroup> enumerate_groups(std::size_t n, std::size_t cap = kDefaultEnumerationCap,
                                                 unsigned jobs = 1) {
  if (n == 0) throw PreconditionError("order must be positive");
  if (n > cap) throw CapExceeded("enumeration order " + std::to_string(n) + " exceeds the cap " + std::to_string(cap));
  if (n >= 60) throw PreconditionError("enumeration relies on solvability and is limited to orders below 60");

  std::map<std::size_t, std::vector<FiniteGroup>> memo;
  auto rec = [&](auto&& self, std::size_t order) -> const std::vector<FiniteGroup>& {
    if (auto it = memo.find(order); it != memo.end()) return it->second;
    std::vector<FiniteGroup> found;
    if (order == 1) {
      found.push_back(FiniteGroup::trivial());
    } else if (is_prime(order)) {
      found.push_back(cyclic(order));
    } else {
      std::vector<std::pair<FiniteGroup, std::size_t>> tasks;  // (N, p)
      for (std::uint64_t p : prime_divisors(static_cast<std::uint64_t>(order)))
        for (const auto& sub : self(self, order / p))
          tasks.emplace_back(FiniteGroup::from_product(
                                 sub.order(), [&](Element x, Element y) { return sub.mul(x, y); }, {}),
                             p);

      std::vector<std::vector<detail::Candidate>> per_task(tasks.size());
      parallel_for(tasks.size(), jobs, [&](std::size_t t) {
        const auto& [a, p] = tasks[t];
        for (const auto& phi : all_automorphisms(a)) {
          auto pk = identity_map(a).image;
          for (std::size_t i = 0; i < p; ++i) pk = compose(pk, phi);
          for (Element a0 = 0; a0 < a.order(); ++a0) {
            if (phi[a0] != a0) continue;
            bool inner = true;
            for (Element x = 0; x < a.order() && inner; ++x) inner = pk[x] == a.mul(a.mul(a0, x), a.inv(a0));
            if (!inner) continue;
            auto g = cyclic_extension(a, p, phi, a0);
            auto f = fingerprint(g);
            per_task[t].push_back({std::move(g), std::move(f)});
          }
        }
      });

      std::vector<detail::Candidate> reps;
      for (auto& cands : per_task)
        for (auto& c : cands) {
          bool dup = false;
          for (const auto& r : reps)
            if (r.print == c.print && isomorphic(r.group, c.group, order)) {
              dup = true;
              break;
            }
          if (!dup) reps.push_back(std::move(c));
        }
      std::stable_sort(reps.begin(), reps.end(), [](const auto& x, const auto& y) {
        return detail::group_sort_key(x.print) < detail::group_sort_key(y.print);
      });
      for (auto& r : reps) found.push_back(std::move(r.group));
    }
    for (std::size_t k = 0; k < found.size(); ++k) found[k].set_name("G" + std::to_string(order) + "_" + std::to_string(k + 1));
    return memo.emplace(order, std::move(found)).first->second;
  };
  return rec(rec, n);
}

}  // namespace groupeq
