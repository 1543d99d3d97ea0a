#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "groupeq/error.hpp"

namespace groupeq {

/// Index of an element inside its FiniteGroup. Index 0 is always the identity.
using Element = std::uint32_t;

/// Tables larger than this are refused by default (order^2 entries are stored).
inline constexpr std::size_t kDefaultTableCap = 4096;

/// A finite group given by a validated Cayley table.
///
/// Immutable once constructed; every instance satisfies the group axioms, has the
/// identity at index 0 and carries unique element names with the identity named "1".
class FiniteGroup {
 public:
  FiniteGroup() : FiniteGroup(trivial()) {}

  /// Validates and normalizes a row-major table. If the identity is not index 0 the
  /// table is relabeled so that it is; names follow their elements.
  static FiniteGroup from_table(std::size_t order, std::vector<Element> table,
                                std::vector<std::string> names, std::string group_name = {},
                                std::size_t table_cap = kDefaultTableCap) {
    if (order == 0) throw AxiomError("a group has at least one element");
    if (order > table_cap)
      throw CapExceeded("group order " + std::to_string(order) + " exceeds the table cap " +
                        std::to_string(table_cap));
    if (table.size() != order * order) throw AxiomError("table is not order x order");
    if (names.empty()) names = default_names(order);
    if (names.size() != order) throw AxiomError("expected one name per element");
    for (Element v : table)
      if (v >= order) throw AxiomError("table entry " + std::to_string(v) + " out of range");

    check_latin(order, table);

    // Locate the identity: the row that is the identity map.
    std::optional<Element> e;
    for (Element a = 0; a < order && !e; ++a) {
      bool ok = true;
      for (Element b = 0; b < order && ok; ++b)
        ok = table[a * order + b] == b && table[b * order + a] == b;
      if (ok) e = a;
    }
    if (!e) throw AxiomError("no two-sided identity element");
    if (*e != 0) {
      std::vector<Element> relabel(order);
      std::iota(relabel.begin(), relabel.end(), Element{0});
      std::swap(relabel[0], relabel[*e]);
      std::vector<Element> t2(order * order);
      for (Element a = 0; a < order; ++a)
        for (Element b = 0; b < order; ++b)
          t2[relabel[a] * order + relabel[b]] = relabel[table[a * order + b]];
      table = std::move(t2);
      std::swap(names[0], names[*e]);
    }
    if (names[0] != "1") {
      for (std::size_t i = 1; i < order; ++i)
        if (names[i] == "1")
          throw AxiomError("element " + std::to_string(i) + " is named \"1\" but is not the identity");
      names[0] = "1";
    }

    FiniteGroup g(order, std::move(table), std::move(names), std::move(group_name));
    g.check_names();
    g.check_associative();
    g.finish();
    return g;
  }

  /// Builds from a product functor without per-entry validation beyond the axioms.
  template <class Mul>
  static FiniteGroup from_product(std::size_t order, Mul&& mul, std::vector<std::string> names,
                                  std::string group_name = {},
                                  std::size_t table_cap = kDefaultTableCap) {
    if (order > table_cap)
      throw CapExceeded("group order " + std::to_string(order) + " exceeds the table cap " +
                        std::to_string(table_cap));
    std::vector<Element> table(order * order);
    for (Element a = 0; a < order; ++a)
      for (Element b = 0; b < order; ++b) table[a * order + b] = mul(a, b);
    return from_table(order, std::move(table), std::move(names), std::move(group_name), table_cap);
  }

  static FiniteGroup trivial() {
    FiniteGroup g(1, {0}, {"1"}, "1");
    g.finish();
    return g;
  }

  std::size_t order() const noexcept { return order_; }
  const std::string& name() const noexcept { return name_; }
  void set_name(std::string n) { name_ = std::move(n); }

  Element mul(Element a, Element b) const { return table_[a * order_ + b]; }
  Element inv(Element a) const { return inverse_[a]; }
  static constexpr Element identity() noexcept { return 0; }

  Element pow(Element a, long long k) const {
    if (k < 0) {
      a = inv(a);
      k = -k;
    }
    k %= static_cast<long long>(orders_[a]);
    Element r = 0;
    for (long long i = 0; i < k; ++i) r = mul(r, a);
    return r;
  }

  /// x^y = y^-1 x y.
  Element conj(Element x, Element y) const { return mul(mul(inv(y), x), y); }

  /// [x,y] = x^-1 y^-1 x y.
  Element commutator(Element x, Element y) const { return mul(mul(inv(x), inv(y)), mul(x, y)); }

  std::size_t element_order(Element a) const { return orders_[a]; }
  const std::string& element_name(Element a) const { return names_[a]; }
  const std::vector<std::string>& element_names() const noexcept { return names_; }

  std::optional<Element> find(std::string_view n) const {
    auto it = by_name_.find(std::string(n));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
  }

  std::span<const Element> row(Element a) const {
    return {table_.data() + a * order_, order_};
  }
  const std::vector<Element>& table() const noexcept { return table_; }

  /// A small generating set chosen greedily (largest element order first, then index).
  const std::vector<Element>& generators() const noexcept { return generators_; }

  static std::vector<std::string> default_names(std::size_t order) {
    std::vector<std::string> names(order);
    names[0] = "1";
    for (std::size_t i = 1; i < order; ++i) names[i] = "e" + std::to_string(i);
    return names;
  }

 private:
  FiniteGroup(std::size_t order, std::vector<Element> table, std::vector<std::string> names,
              std::string group_name)
      : order_(order), table_(std::move(table)), names_(std::move(names)), name_(std::move(group_name)) {}

  static void check_latin(std::size_t n, const std::vector<Element>& t) {
    std::vector<std::uint32_t> seen(n, 0);
    std::uint32_t stamp = 0;
    for (Element a = 0; a < n; ++a) {
      ++stamp;
      for (Element b = 0; b < n; ++b) {
        Element v = t[a * n + b];
        if (seen[v] == stamp)
          throw AxiomError("row " + std::to_string(a) + " repeats entry " + std::to_string(v) +
                           ": not a group (cancellation fails)");
        seen[v] = stamp;
      }
    }
    for (Element b = 0; b < n; ++b) {
      ++stamp;
      for (Element a = 0; a < n; ++a) {
        Element v = t[a * n + b];
        if (seen[v] == stamp)
          throw AxiomError("column " + std::to_string(b) + " repeats entry " + std::to_string(v) +
                           ": not a group (cancellation fails)");
        seen[v] = stamp;
      }
    }
  }

  void check_names() {
    for (Element i = 0; i < order_; ++i) {
      const auto& n = names_[i];
      if (n.empty()) throw AxiomError("element " + std::to_string(i) + " has an empty name");
      for (char c : n)
        if (std::isspace(static_cast<unsigned char>(c)) || c == '=' || c == '#')
          throw AxiomError("element name '" + n + "' contains whitespace, '=' or '#'");
      if (!by_name_.emplace(n, i).second) throw AxiomError("duplicate element name '" + n + "'");
    }
  }

  // Light's test: the operation is associative iff (x g) y = x (g y) for all x, y and
  // all g in a generating set. The generating set is taken under the (not yet known to
  // be associative) operation itself, so the test is exact.
  void check_associative() {
    std::vector<Element> gens;
    std::vector<bool> in(order_, false);
    in[0] = true;
    std::vector<Element> members{0};
    for (Element cand = 1; cand < order_; ++cand) {
      if (in[cand]) continue;
      gens.push_back(cand);
      // magma closure of members plus all generators
      std::vector<Element> frontier{cand};
      in[cand] = true;
      members.push_back(cand);
      while (!frontier.empty()) {
        std::vector<Element> next;
        for (Element f : frontier) {
          for (std::size_t k = 0; k < members.size(); ++k) {
            Element m = members[k];
            for (Element prod : {mul(f, m), mul(m, f)}) {
              if (!in[prod]) {
                in[prod] = true;
                members.push_back(prod);
                next.push_back(prod);
              }
            }
          }
        }
        frontier = std::move(next);
      }
    }
    for (Element g : gens)
      for (Element x = 0; x < order_; ++x) {
        Element xg = mul(x, g);
        for (Element y = 0; y < order_; ++y)
          if (mul(xg, y) != mul(x, mul(g, y)))
            throw AxiomError("not associative: (" + names_[x] + "*" + names_[g] + ")*" + names_[y] +
                             " != " + names_[x] + "*(" + names_[g] + "*" + names_[y] + ")");
      }
  }

  void finish() {
    inverse_.assign(order_, 0);
    for (Element a = 0; a < order_; ++a)
      for (Element b = 0; b < order_; ++b)
        if (mul(a, b) == 0) {
          if (mul(b, a) != 0) throw AxiomError("element " + names_[a] + " has no two-sided inverse");
          inverse_[a] = b;
          break;
        }
    orders_.assign(order_, 1);
    for (Element a = 1; a < order_; ++a) {
      std::size_t k = 1;
      Element x = a;
      while (x != 0) {
        x = mul(x, a);
        ++k;
      }
      orders_[a] = k;
    }
    if (by_name_.empty())
      for (Element i = 0; i < order_; ++i) by_name_.emplace(names_[i], i);

    // Greedy generating set.
    std::vector<Element> by_order(order_);
    std::iota(by_order.begin(), by_order.end(), Element{0});
    std::stable_sort(by_order.begin(), by_order.end(),
                     [&](Element a, Element b) { return orders_[a] > orders_[b]; });
    std::vector<bool> in(order_, false);
    in[0] = true;
    generators_.clear();
    for (Element cand : by_order) {
      if (in[cand]) continue;
      generators_.push_back(cand);
      std::fill(in.begin(), in.end(), false);
      std::vector<Element> queue{0};
      in[0] = true;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        for (Element g : generators_) {
          Element y = mul(queue[head], g);
          if (!in[y]) {
            in[y] = true;
            queue.push_back(y);
          }
        }
      }
    }
  }

  std::size_t order_;
  std::vector<Element> table_;
  std::vector<std::string> names_;
  std::string name_;
  std::vector<Element> inverse_;
  std::vector<std::size_t> orders_;
  std::vector<Element> generators_;
  std::unordered_map<std::string, Element> by_name_;
};

}  // namespace groupeq
