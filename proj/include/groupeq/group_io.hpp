#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "groupeq/constructions.hpp"
#include "groupeq/error.hpp"
#include "groupeq/finite_group.hpp"
#include "groupeq/permutation.hpp"

namespace groupeq {

struct GroupCaps {
  std::size_t closure = kDefaultClosureCap;
  std::size_t table = kDefaultTableCap;
};

namespace detail {

inline std::string strip_comment(std::string line) {
  if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
  while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) line.pop_back();
  std::size_t start = 0;
  while (start < line.size() && std::isspace(static_cast<unsigned char>(line[start]))) ++start;
  return line.substr(start);
}

inline std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

/// Parses the group file format:
///
///     group <name> order <n>
///     table:            | generators:
///     <n rows of n>     | <one permutation per line, cycle notation>
///
/// A table file may add `names: <n names>` to label the elements. Blank lines and `#`
/// comments are ignored. The declared order must match.
inline FiniteGroup load_group(std::string_view text, const GroupCaps& caps = {}) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  std::string name;
  std::size_t order = 0;
  bool have_header = false;
  enum class Mode { None, Table, Generators } mode = Mode::None;
  std::vector<Element> table;
  std::vector<std::string> names;
  std::vector<Permutation> gens;

  while (std::getline(in, raw)) {
    ++lineno;
    auto line = detail::strip_comment(raw);
    if (line.empty()) continue;
    auto toks = detail::split_ws(line);
    if (!have_header) {
      if (toks.size() != 4 || toks[0] != "group" || toks[2] != "order")
        throw ParseError("expected header 'group <name> order <n>'", lineno);
      name = toks[1];
      try {
        std::size_t pos = 0;
        long long v = std::stoll(toks[3], &pos);
        if (pos != toks[3].size() || v < 1) throw std::invalid_argument("order");
        order = static_cast<std::size_t>(v);
      } catch (const std::exception&) {
        throw ParseError("bad order '" + toks[3] + "'", lineno);
      }
      if (order > caps.table)
        throw CapExceeded("declared order " + std::to_string(order) + " exceeds the table cap");
      have_header = true;
      continue;
    }
    if (toks[0] == "table:" || toks[0] == "generators:") {
      if (mode != Mode::None) throw ParseError("only one of table:/generators: is allowed", lineno);
      mode = toks[0] == "table:" ? Mode::Table : Mode::Generators;
      toks.erase(toks.begin());
      if (toks.empty()) continue;
      line = line.substr(line.find(':') + 1);
    } else if (toks[0] == "names:") {
      toks.erase(toks.begin());
      names.insert(names.end(), toks.begin(), toks.end());
      continue;
    }
    if (mode == Mode::Table) {
      for (const auto& t : toks) {
        try {
          std::size_t pos = 0;
          long long v = std::stoll(t, &pos);
          if (pos != t.size() || v < 0) throw std::invalid_argument("entry");
          table.push_back(static_cast<Element>(v));
        } catch (const std::exception&) {
          throw ParseError("bad table entry '" + t + "'", lineno);
        }
      }
    } else if (mode == Mode::Generators) {
      try {
        gens.push_back(parse_cycles(line));
      } catch (const ParseError& e) {
        throw ParseError(e.what(), lineno);
      }
    } else {
      throw ParseError("expected 'table:' or 'generators:'", lineno);
    }
  }
  if (!have_header) throw ParseError("empty group file");
  if (mode == Mode::None) throw ParseError("missing 'table:' or 'generators:' section");
  if (mode == Mode::Table) {
    if (table.size() != order * order)
      throw ParseError("table has " + std::to_string(table.size()) + " entries, expected " +
                       std::to_string(order * order));
    if (!names.empty() && names.size() != order)
      throw ParseError("names: lists " + std::to_string(names.size()) + " names, expected " +
                       std::to_string(order));
    return FiniteGroup::from_table(order, std::move(table), std::move(names), name, caps.table);
  }
  if (!names.empty()) throw ParseError("names: is only allowed with table:");
  auto g = from_generators(std::move(gens), name, caps.closure, caps.table);
  if (g.order() != order)
    throw AxiomError("generators produce a group of order " + std::to_string(g.order()) +
                     ", header declares " + std::to_string(order));
  return g;
}

inline FiniteGroup load_group_file(const std::string& path, const GroupCaps& caps = {}) {
  return load_group(detail::read_file(path), caps);
}

/// Emits a `table:` file with a names: line.
inline std::string write_group_table(const FiniteGroup& g) {
  std::ostringstream out;
  out << "group " << (g.name().empty() ? "G" : g.name()) << " order " << g.order() << "\n";
  out << "names:";
  for (const auto& n : g.element_names()) out << ' ' << n;
  out << "\ntable:\n";
  for (Element a = 0; a < g.order(); ++a) {
    for (Element b = 0; b < g.order(); ++b) out << (b ? " " : "") << g.mul(a, b);
    out << "\n";
  }
  return out.str();
}

inline std::string write_group_generators(const std::string& name, std::size_t order,
                                          const std::vector<Permutation>& gens) {
  std::ostringstream out;
  out << "group " << name << " order " << order << "\ngenerators:\n";
  for (const auto& p : gens) out << to_cycle_string(p) << "\n";
  return out.str();
}

}  // namespace groupeq
