#pragma once

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "groupeq/error.hpp"
#include "groupeq/finite_group.hpp"
#include "groupeq/group_io.hpp"
#include "groupeq/isomorphism.hpp"
#include "groupeq/permutation.hpp"
#include "groupeq/structure.hpp"
#include "groupeq/subgroup.hpp"
#include "groupeq/verifiers.hpp"

namespace groupeq {

/// Number of isomorphism classes of groups of order n, as tabulated in the SmallGroups
/// library, for the orders the bundled catalog covers.
inline std::optional<std::size_t> cited_group_count(std::size_t n) {
  static const std::map<std::size_t, std::size_t> counts{
      {1, 1},  {2, 1},  {3, 1},  {4, 2},   {5, 1},  {7, 1},  {8, 5},   {9, 2},   {11, 1},  {12, 5},
      {13, 1}, {16, 14}, {18, 5}, {20, 5}, {24, 15}, {28, 4}, {30, 4}, {36, 14}, {40, 14}, {42, 6}};
  auto it = counts.find(n);
  if (it == counts.end()) return std::nullopt;
  return it->second;
}

/// Intersection of the conjugates of h.
inline Subgroup core(const FiniteGroup& g, const Subgroup& h) {
  std::vector<Element> out;
  for (Element x : h.elements) {
    bool all = true;
    for (Element t = 0; t < g.order() && all; ++t) all = h.contains(g.conj(x, t));
    if (all) out.push_back(x);
  }
  return {out};
}

/// A faithful transitive action: g acting on the right cosets of a core-free subgroup of
/// largest order (least-element subgroup on ties). Returns the images of g.generators().
inline std::vector<Permutation> permutation_representation(const FiniteGroup& g,
                                                           std::size_t cap = kDefaultSubgroupCap) {
  Subgroup best = trivial_subgroup();
  for (const auto& h : all_subgroups(g, cap))
    if (h.order() > best.order() && core(g, h).order() == 1) best = h;

  constexpr Element unset = ~Element{0};
  std::vector<Element> coset(g.order(), unset);
  std::vector<Element> reps;
  for (Element x = 0; x < g.order(); ++x) {
    if (coset[x] != unset) continue;
    for (Element a : best.elements) coset[g.mul(a, x)] = static_cast<Element>(reps.size());
    reps.push_back(x);
  }
  std::vector<Permutation> out;
  for (Element s : g.generators()) {
    Permutation p(reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i) p.image[i] = coset[g.mul(reps[i], s)];
    out.push_back(std::move(p));
  }
  return out;
}

struct CatalogEntry {
  std::string file;
  std::string name;
  std::size_t order = 0;
};

struct CatalogCheck {
  std::vector<CatalogEntry> entries;           // sorted by file name
  std::map<std::size_t, std::size_t> counts;   // order -> number of files
  std::vector<std::string> errors;             // load failures, isomorphic pairs, count mismatches
};

/// Loads every *.grp file in `dir`, checks that no two files of the same order describe
/// isomorphic groups and compares the number per order against cited_group_count.
/// Completeness beyond that count is not re-derived.
inline CatalogCheck validate_catalog(const std::string& dir, unsigned jobs = 1, const GroupCaps& caps = {}) {
  if (!std::filesystem::is_directory(dir)) throw Error("not a directory: " + dir);
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".grp") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::vector<std::optional<FiniteGroup>> groups(files.size());
  std::vector<std::string> load_errors(files.size());
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    try {
      groups[i] = load_group_file(files[i].string(), caps);
    } catch (const std::exception& ex) {
      load_errors[i] = files[i].filename().string() + ": " + ex.what();
    }
  });

  CatalogCheck out;
  std::map<std::size_t, std::vector<std::size_t>> by_order;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!groups[i]) {
      out.errors.push_back(load_errors[i]);
      continue;
    }
    out.entries.push_back({files[i].filename().string(), groups[i]->name(), groups[i]->order()});
    ++out.counts[groups[i]->order()];
    by_order[groups[i]->order()].push_back(i);
  }
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& [n, idx] : by_order)
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = a + 1; b < idx.size(); ++b) pairs.emplace_back(idx[a], idx[b]);
  std::vector<char> iso(pairs.size(), 0);
  parallel_for(pairs.size(), jobs, [&](std::size_t k) {
    const auto& g = *groups[pairs[k].first];
    iso[k] = isomorphic(g, *groups[pairs[k].second], g.order()).has_value();
  });
  for (std::size_t k = 0; k < pairs.size(); ++k)
    if (iso[k])
      out.errors.push_back(files[pairs[k].first].filename().string() + " and " +
                           files[pairs[k].second].filename().string() + " are isomorphic");
  for (const auto& [n, c] : out.counts) {
    auto want = cited_group_count(n);
    if (want && *want != c)
      out.errors.push_back("order " + std::to_string(n) + ": " + std::to_string(c) + " groups, expected " +
                           std::to_string(*want));
  }
  return out;
}

}  // namespace groupeq
