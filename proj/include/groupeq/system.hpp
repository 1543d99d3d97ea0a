#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "groupeq/error.hpp"
#include "groupeq/finite_group.hpp"
#include "groupeq/group_io.hpp"
#include "groupeq/int_matrix.hpp"
#include "groupeq/word.hpp"

namespace groupeq {

/// A `bind:` line as written: a group reference plus symbol=element-name pairs.
struct BindSpec {
  std::string group;
  std::vector<std::pair<std::string, std::string>> assignments;

  friend bool operator==(const BindSpec&, const BindSpec&) = default;
};

/// Coefficient symbols resolved to elements of a concrete group.
struct Binding {
  std::shared_ptr<const FiniteGroup> group;
  std::vector<Element> values;  // indexed by coefficient id
};

/// A finite system {w_j = 1} in declared variables and coefficient symbols.
struct EquationSystem {
  Alphabet alphabet;
  std::vector<Word> words;
  std::optional<BindSpec> bind_spec;
  std::optional<Binding> binding;

  std::size_t num_variables() const { return alphabet.variables.size(); }
  std::size_t num_coefficients() const { return alphabet.coefficients.size(); }
  std::size_t num_equations() const { return words.size(); }
};

namespace detail {

inline bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

}  // namespace detail

/// Parses the system file format:
///
///     vars: x y z
///     coeffs: g1 g2
///     bind: <group-file> g1=<element-name> ...      (optional)
///     eq: <word>            or   eq: <word> = <word>
///
/// `eq: u = v` is stored as the word u v^-1. The bind line is recorded but not resolved.
inline EquationSystem parse_system(std::string_view text) {
  EquationSystem sys;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  bool vars_seen = false, coeffs_seen = false;
  while (std::getline(in, raw)) {
    ++lineno;
    auto line = detail::strip_comment(raw);
    if (line.empty()) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError("expected 'key: value'", lineno);
    std::string key = line.substr(0, colon);
    std::string rest = line.substr(colon + 1);
    if (key == "vars" || key == "coeffs") {
      if (!sys.words.empty()) throw ParseError(key + ": must precede the equations", lineno);
      bool& seen = key == "vars" ? vars_seen : coeffs_seen;
      if (seen) throw ParseError("duplicate " + key + ": line", lineno);
      seen = true;
      auto& list = key == "vars" ? sys.alphabet.variables : sys.alphabet.coefficients;
      for (auto& tok : detail::split_ws(rest)) {
        if (!detail::is_identifier(tok)) throw ParseError("bad identifier '" + tok + "'", lineno);
        for (const auto& existing : sys.alphabet.variables)
          if (existing == tok) throw ParseError("identifier '" + tok + "' declared twice", lineno);
        for (const auto& existing : sys.alphabet.coefficients)
          if (existing == tok) throw ParseError("identifier '" + tok + "' declared twice", lineno);
        list.push_back(tok);
      }
    } else if (key == "bind") {
      if (sys.bind_spec) throw ParseError("duplicate bind: line", lineno);
      auto toks = detail::split_ws(rest);
      if (toks.empty()) throw ParseError("bind: needs a group", lineno);
      BindSpec spec{toks[0], {}};
      for (std::size_t i = 1; i < toks.size(); ++i) {
        auto eq = toks[i].find('=');
        if (eq == std::string::npos || eq == 0 || eq + 1 == toks[i].size())
          throw ParseError("expected symbol=element in bind:", lineno);
        spec.assignments.emplace_back(toks[i].substr(0, eq), toks[i].substr(eq + 1));
      }
      sys.bind_spec = std::move(spec);
    } else if (key == "eq") {
      const std::size_t offset = colon + 1 + (raw.find_first_not_of(" \t") == std::string::npos ? 0 : raw.find_first_not_of(" \t"));
      auto eqpos = rest.find('=');
      if (eqpos == std::string::npos) {
        sys.words.push_back(WordParser(rest, sys.alphabet, lineno, offset).parse());
      } else {
        Word lhs = WordParser(std::string_view(rest).substr(0, eqpos), sys.alphabet, lineno, offset).parse();
        Word rhs = WordParser(std::string_view(rest).substr(eqpos + 1), sys.alphabet, lineno, offset + eqpos + 1).parse();
        sys.words.push_back(concat(lhs, inverse(rhs)));
      }
    } else {
      throw ParseError("unknown key '" + key + "'", lineno);
    }
  }
  if (sys.bind_spec) {
    for (const auto& [sym, _] : sys.bind_spec->assignments) {
      bool declared = false;
      for (const auto& c : sys.alphabet.coefficients) declared |= c == sym;
      if (!declared) throw ParseError("bind: undeclared coefficient '" + sym + "'");
    }
  }
  return sys;
}

/// Re-emits a system; parse_system(write_system(s)) reproduces the words exactly.
inline std::string write_system(const EquationSystem& sys) {
  std::ostringstream out;
  out << "vars:";
  for (const auto& v : sys.alphabet.variables) out << ' ' << v;
  out << "\ncoeffs:";
  for (const auto& c : sys.alphabet.coefficients) out << ' ' << c;
  out << "\n";
  if (sys.bind_spec) {
    out << "bind: " << sys.bind_spec->group;
    for (const auto& [s, e] : sys.bind_spec->assignments) out << ' ' << s << '=' << e;
    out << "\n";
  }
  for (const auto& w : sys.words) out << "eq: " << format_word(w, sys.alphabet) << "\n";
  return out.str();
}

/// Resolves coefficient symbols by element name. Every coefficient must be mapped.
inline EquationSystem bind_system(EquationSystem sys, std::shared_ptr<const FiniteGroup> group,
                           const std::vector<std::pair<std::string, std::string>>& assignments) {
  Binding b{group, std::vector<Element>(sys.num_coefficients(), 0)};
  std::vector<bool> set(sys.num_coefficients(), false);
  for (const auto& [sym, elem] : assignments) {
    std::size_t id = sys.num_coefficients();
    for (std::size_t i = 0; i < sys.num_coefficients(); ++i)
      if (sys.alphabet.coefficients[i] == sym) id = i;
    if (id == sys.num_coefficients()) throw ParseError("bind: undeclared coefficient '" + sym + "'");
    auto e = group->find(elem);
    if (!e) throw ParseError("bind: group has no element named '" + elem + "'");
    b.values[id] = *e;
    set[id] = true;
  }
  for (std::size_t i = 0; i < set.size(); ++i)
    if (!set[i]) throw ParseError("bind: coefficient '" + sys.alphabet.coefficients[i] + "' is not mapped");
  sys.binding = std::move(b);
  return sys;
}

/// Binds using the file's own bind: line.
inline EquationSystem bind_system(EquationSystem sys, std::shared_ptr<const FiniteGroup> group) {
  if (!sys.bind_spec) throw PreconditionError("system has no bind: line");
  auto assignments = sys.bind_spec->assignments;
  return bind_system(std::move(sys), std::move(group), assignments);
}

/// Reads a system file; a bind: line is resolved relative to the file's directory.
inline EquationSystem load_system_file(const std::string& path, const GroupCaps& caps = {}) {
  auto sys = parse_system(detail::read_file(path));
  if (sys.bind_spec) {
    auto gpath = std::filesystem::path(path).parent_path() / sys.bind_spec->group;
    auto group = std::make_shared<const FiniteGroup>(load_group_file(gpath.string(), caps));
    sys = bind_system(std::move(sys), group);
  }
  return sys;
}

/// Entry (j, i) is the exponent sum of variable i in word j.
inline IntMatrix exponent_matrix(const EquationSystem& sys) {
  IntMatrix m(sys.num_equations(), sys.num_variables());
  for (std::size_t j = 0; j < sys.num_equations(); ++j)
    for (const auto& l : sys.words[j])
      if (l.is_var()) m(j, l.id) += l.sign;
  return m;
}

/// Value of `w` in `g` with the given coefficient and variable values.
inline Element evaluate(const FiniteGroup& g, const Word& w, const std::vector<Element>& coeffs,
                        const std::vector<Element>& vars) {
  Element acc = 0;
  for (const auto& l : w) {
    Element x = l.is_var() ? vars[l.id] : coeffs[l.id];
    acc = g.mul(acc, l.sign > 0 ? x : g.inv(x));
  }
  return acc;
}

inline bool satisfies(const EquationSystem& sys, const std::vector<Element>& vars) {
  if (!sys.binding) throw PreconditionError("system is not bound to a group");
  const auto& g = *sys.binding->group;
  for (const auto& w : sys.words)
    if (evaluate(g, w, sys.binding->values, vars) != 0) return false;
  return true;
}

/// Exponent-sum classification of a system.
struct SystemClassification {
  std::size_t equations = 0;
  std::size_t variables = 0;
  std::size_t rational_rank = 0;
  bool nonsingular = false;
  bool unimodular = false;
  std::vector<Integer> invariant_factors;
  /// Primes p for which the system is p-singular; empty optional when rank-deficient
  /// (then it is singular for every p).
  std::optional<std::vector<Integer>> singular_primes;
  std::string proof_note;

  bool p_nonsingular(std::uint64_t p) const {
    if (!nonsingular) return false;
    for (const auto& q : *singular_primes)
      if (q == p) return false;
    return true;
  }
};

inline SystemClassification classify(const IntMatrix& m) {
  SystemClassification c;
  c.equations = m.rows();
  c.variables = m.cols();
  auto snf = smith_normal_form(m);
  c.invariant_factors = snf.invariant_factors();
  c.rational_rank = snf.rank();
  c.nonsingular = c.rational_rank == c.equations;
  if (!c.nonsingular) {
    c.proof_note = "rows are rationally dependent (rank " + std::to_string(c.rational_rank) + " < " +
                   std::to_string(c.equations) + "): singular for all p";
    return c;
  }
  if (c.equations == 0) {
    c.singular_primes = std::vector<Integer>{};
    c.unimodular = true;
    c.proof_note = "no equations: vacuously independent";
    return c;
  }
  const Integer& last = c.invariant_factors[c.equations - 1];
  c.singular_primes = prime_divisors(last);
  c.unimodular = c.singular_primes->empty();
  c.proof_note = "p-singular exactly for primes dividing d_" + std::to_string(c.equations) + " = " + last.str();
  return c;
}

inline SystemClassification classify(const EquationSystem& sys) { return classify(exponent_matrix(sys)); }

}  // namespace groupeq
