#pragma once

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "groupeq/abelian_solver.hpp"
#include "groupeq/algebra.hpp"
#include "groupeq/catalog.hpp"
#include "groupeq/enumerate.hpp"
#include "groupeq/group_io.hpp"
#include "groupeq/isomorphism.hpp"
#include "groupeq/report.hpp"
#include "groupeq/structure.hpp"
#include "groupeq/system.hpp"
#include "groupeq/verifiers.hpp"
#include "groupeq/wreath.hpp"

namespace groupeq::cli {

// ---------------------------------------------------------------------------
// Configuration

struct Config {
  std::size_t cap_table = kDefaultTableCap;
  std::size_t cap_closure = kDefaultClosureCap;
  std::size_t cap_wreath = kDefaultWreathCap;
  std::size_t cap_subgroups = kDefaultSubgroupCap;
  std::size_t cap_enumerate = kDefaultEnumerationCap;
  std::uint64_t cap_work = kDefaultWorkCap;
  std::vector<std::uint64_t> primes{2, 3, 5, 7, 11, 13};
  std::string format = "text";
  unsigned jobs = 1;
  std::uint64_t seed = 0;
  std::size_t trials = 100;

  GroupCaps group_caps() const { return {cap_closure, cap_table}; }
  WreathCaps wreath_caps() const { return {cap_wreath, cap_table}; }

  void validate() const {
    for (auto c : {cap_table, cap_closure, cap_wreath, cap_subgroups, cap_enumerate, static_cast<std::size_t>(cap_work)})
      if (c == 0) throw PreconditionError("caps must be positive");
    if (jobs == 0) throw PreconditionError("jobs must be at least 1");
    if (format != "text" && format != "structured") throw PreconditionError("format must be 'text' or 'structured'");
    for (auto p : primes)
      if (!is_prime(p)) throw PreconditionError("prime list contains " + std::to_string(p));
  }
};

namespace detail {

inline std::vector<std::uint64_t> parse_number_list(const std::string& s) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(s);
  for (std::string part; std::getline(ss, part, ',');) {
    auto t = groupeq::detail::strip_comment(part);
    if (t.empty()) continue;
    out.push_back(groupeq::detail::parse_ull(t));
  }
  return out;
}

}  // namespace detail

/// key=value lines; `#` starts a comment. Keys: cap.table, cap.closure, cap.wreath,
/// cap.subgroups, cap.enumerate, cap.work, primes (comma list), format, jobs, seed, trials.
inline Config parse_config(std::string_view text, Config c = {}) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    auto line = groupeq::detail::strip_comment(raw);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", lineno);
    auto key = groupeq::detail::strip_comment(line.substr(0, eq));
    auto val = groupeq::detail::strip_comment(line.substr(eq + 1));
    try {
      auto num = [&] { return groupeq::detail::parse_ull(val); };
      if (key == "cap.table") c.cap_table = num();
      else if (key == "cap.closure") c.cap_closure = num();
      else if (key == "cap.wreath") c.cap_wreath = num();
      else if (key == "cap.subgroups") c.cap_subgroups = num();
      else if (key == "cap.enumerate") c.cap_enumerate = num();
      else if (key == "cap.work") c.cap_work = num();
      else if (key == "primes") c.primes = detail::parse_number_list(val);
      else if (key == "format") c.format = val;
      else if (key == "jobs") c.jobs = static_cast<unsigned>(num());
      else if (key == "seed") c.seed = num();
      else if (key == "trials") c.trials = num();
      else throw ParseError("unknown config key '" + key + "'", lineno);
    } catch (const ParseError& e) {
      if (e.line()) throw;
      throw ParseError(e.what(), lineno);
    }
  }
  c.validate();
  return c;
}

/// The config file named by GROUPEQ_CONFIG, else ./groupeq.conf when present, else defaults.
inline Config load_default_config(const std::optional<std::string>& explicit_path) {
  std::optional<std::string> path = explicit_path;
  if (!path) {
    if (const char* env = std::getenv("GROUPEQ_CONFIG"); env && *env) path = env;
    else if (std::filesystem::exists("groupeq.conf")) path = "groupeq.conf";
  }
  if (!path) return {};
  try {
    return parse_config(groupeq::detail::read_file(*path));
  } catch (const ParseError& e) {
    throw ParseError(*path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Reports

struct SystemReport {
  static constexpr const char* kind = "analyze-system";
  std::string file;
  std::size_t equations = 0, variables = 0;
  std::string matrix;
  std::optional<Integer> determinant;
  std::size_t rank = 0;
  std::vector<Integer> invariant_factors;
  bool nonsingular = false, unimodular = false;
  std::optional<std::vector<Integer>> singular_primes;  // absent: singular for every p
  std::vector<std::uint64_t> p_nonsingular, p_singular;
  bool rank_checks_agree = true;
  std::string note;

  template <class S, class V>
  static void fields(S& s, V&& v) {
    v("file", s.file), v("equations", s.equations), v("variables", s.variables), v("matrix", s.matrix);
    v("determinant", s.determinant), v("rank", s.rank), v("invariant_factors", s.invariant_factors);
    v("nonsingular", s.nonsingular), v("unimodular", s.unimodular), v("singular_primes", s.singular_primes);
    v("p_nonsingular", s.p_nonsingular), v("p_singular", s.p_singular), v("rank_checks_agree", s.rank_checks_agree);
    v("note", s.note);
  }
  friend bool operator==(const SystemReport&, const SystemReport&) = default;
};

struct GroupReport {
  static constexpr const char* kind = "group";
  std::string file, name;
  std::size_t order = 0;
  bool abelian = false, nilpotent = false, solvable = false, metabelian = false;
  std::optional<std::size_t> derived_length;
  std::size_t center_order = 0;
  std::vector<std::size_t> derived_series;
  std::vector<std::size_t> normal_subgroup_orders;
  std::vector<std::size_t> element_orders, element_order_counts;

  template <class S, class V>
  static void fields(S& s, V&& v) {
    v("file", s.file), v("name", s.name), v("order", s.order), v("abelian", s.abelian), v("nilpotent", s.nilpotent);
    v("solvable", s.solvable), v("metabelian", s.metabelian), v("derived_length", s.derived_length);
    v("center_order", s.center_order), v("derived_series", s.derived_series);
    v("normal_subgroup_orders", s.normal_subgroup_orders), v("element_orders", s.element_orders);
    v("element_order_counts", s.element_order_counts);
  }
  friend bool operator==(const GroupReport&, const GroupReport&) = default;
};

struct ClassifyRecord {
  static constexpr const char* kind = "classify";
  std::optional<std::string> file;
  std::string group;
  std::size_t order = 0;
  bool metabelian = false;
  std::optional<std::size_t> witness_order;
  std::optional<std::uint64_t> witness_p;
  std::optional<std::string> witness_elements;  // element names, space separated
  std::size_t normal_subgroups = 0;
  std::vector<std::string> notes;

  template <class S, class V>
  static void fields(S& s, V&& v) {
    v("file", s.file), v("group", s.group), v("order", s.order), v("metabelian", s.metabelian);
    v("witness_order", s.witness_order), v("witness_p", s.witness_p), v("witness_elements", s.witness_elements);
    v("normal_subgroups", s.normal_subgroups), v("notes", s.notes);
  }
  friend bool operator==(const ClassifyRecord&, const ClassifyRecord&) = default;
};

struct PqRecord {
  static constexpr const char* kind = "order-pq";
  std::string group;
  std::uint64_t p = 0, q = 0;
  std::size_t sylow_q_count = 0, witness_order = 0;
  std::uint64_t witness_p = 0;
  bool verified = false;

  template <class S, class V>
  static void fields(S& s, V&& v) {
    v("group", s.group), v("p", s.p), v("q", s.q), v("sylow_q_count", s.sylow_q_count);
    v("witness_order", s.witness_order), v("witness_p", s.witness_p), v("verified", s.verified);
  }
  friend bool operator==(const PqRecord&, const PqRecord&) = default;
};

struct PkRecord {
  static constexpr const char* kind = "prime-power";
  std::string group;
  std::uint64_t p = 0;
  unsigned k = 0;
  std::uint64_t seed = 0;
  std::size_t trials = 0, solved = 0;
  std::vector<std::string> failures;

  template <class S, class V>
  static void fields(S& s, V&& v) {
    v("group", s.group), v("p", s.p), v("k", s.k), v("seed", s.seed), v("trials", s.trials), v("solved", s.solved);
    v("failures", s.failures);
  }
  friend bool operator==(const PkRecord&, const PkRecord&) = default;
};

struct AuditErrorRecord {
  static constexpr const char* kind = "audit-error";
  std::string file, error;

  template <class S, class V>
  static void fields(S& s, V&& v) {
    v("file", s.file), v("error", s.error);
  }
  friend bool operator==(const AuditErrorRecord&, const AuditErrorRecord&) = default;
};

struct AuditSummaryRecord {
  static constexpr const char* kind = "audit-summary";
  std::string directory;
  std::size_t files = 0, errors = 0;
  std::vector<std::size_t> orders, groups, metabelian, witnessed;  // parallel, by order
  std::vector<std::string> flagged;
  bool reproduced = false;

  template <class S, class V>
  static void fields(S& s, V&& v) {
    v("directory", s.directory), v("files", s.files), v("errors", s.errors), v("orders", s.orders);
    v("groups", s.groups), v("metabelian", s.metabelian), v("witnessed", s.witnessed), v("flagged", s.flagged);
    v("reproduced", s.reproduced);
  }
  friend bool operator==(const AuditSummaryRecord&, const AuditSummaryRecord&) = default;
};

struct WreathRecord {
  static constexpr const char* kind = "wreath-transform";
  std::string file, base, top;
  std::uint64_t p = 0;
  std::size_t wreath_order = 0;
  std::vector<std::string> shifts;
  std::string transformed_system;
  std::string algebra;             // header line of the rows in the algebra file format
  std::vector<std::string> rows;  // m_{j,1}, entries separated by " ; "
  bool translation_law = false, augmentation_matches = false, certified = false;
  std::string augmentation, exponent_rows_mod_p;
  std::size_t rank = 0;
  std::vector<std::size_t> columns;
  Integer minor_determinant = 0;

  template <class S, class V>
  static void fields(S& s, V&& v) {
    v("file", s.file), v("base", s.base), v("top", s.top), v("p", s.p), v("wreath_order", s.wreath_order);
    v("shifts", s.shifts), v("transformed_system", s.transformed_system), v("algebra", s.algebra);
    v("rows", s.rows);
    v("translation_law", s.translation_law), v("augmentation", s.augmentation);
    v("exponent_rows_mod_p", s.exponent_rows_mod_p), v("augmentation_matches", s.augmentation_matches);
    v("certified", s.certified), v("rank", s.rank), v("columns", s.columns), v("minor_determinant", s.minor_determinant);
  }
  friend bool operator==(const WreathRecord&, const WreathRecord&) = default;
};

struct CertifyRecord {
  static constexpr const char* kind = "certify-rows";
  std::string file;
  std::uint64_t p = 0;  // 0: integer coefficients
  std::size_t rows = 0, length = 0, rank = 0;
  std::string augmentation;
  std::vector<std::size_t> columns;
  Integer minor_determinant = 0;
  bool certified = false;

  template <class S, class V>
  static void fields(S& s, V&& v) {
    v("file", s.file), v("p", s.p), v("rows", s.rows), v("length", s.length), v("augmentation", s.augmentation);
    v("rank", s.rank), v("columns", s.columns), v("minor_determinant", s.minor_determinant), v("certified", s.certified);
  }
  friend bool operator==(const CertifyRecord&, const CertifyRecord&) = default;
};

struct CounterexampleRecord {
  static constexpr const char* kind = "counterexample";
  std::uint64_t p = 0, q = 0;
  long long n = 0, m = 0;
  std::string equation;
  long long exponent_sum = 0;
  bool unimodular = false;
  std::optional<std::size_t> group_order;
  std::string s;
  bool ring_identity = false, conjugate_identity = false, s_zero = false;
  std::string lhs_exponent, rhs_exponent;
  std::optional<bool> group_inequality;
  std::optional<std::string> lhs_value, rhs_value;
  std::string conclusion;
  std::optional<bool> solvable_in_group;
  std::optional<std::string> solution;

  template <class S, class V>
  static void fields(S& r, V&& v) {
    v("p", r.p), v("q", r.q), v("n", r.n), v("m", r.m), v("equation", r.equation), v("exponent_sum", r.exponent_sum);
    v("unimodular", r.unimodular), v("group_order", r.group_order), v("s", r.s), v("ring_identity", r.ring_identity);
    v("conjugate_identity", r.conjugate_identity), v("s_zero", r.s_zero), v("lhs_exponent", r.lhs_exponent);
    v("rhs_exponent", r.rhs_exponent), v("group_inequality", r.group_inequality), v("lhs_value", r.lhs_value);
    v("rhs_value", r.rhs_value), v("conclusion", r.conclusion), v("solvable_in_group", r.solvable_in_group);
    v("solution", r.solution);
  }
  friend bool operator==(const CounterexampleRecord&, const CounterexampleRecord&) = default;
};

struct SolveRecord {
  static constexpr const char* kind = "solve";
  std::string file, group;
  std::size_t variables = 0;
  std::uint64_t search_space = 0;
  bool solvable = false;
  std::vector<std::string> assignment;  // "x=<element>"
  std::optional<bool> reversed_agrees;
  std::optional<std::string> expected;

  template <class S, class V>
  static void fields(S& s, V&& v) {
    v("file", s.file), v("group", s.group), v("variables", s.variables), v("search_space", s.search_space);
    v("solvable", s.solvable), v("assignment", s.assignment), v("reversed_agrees", s.reversed_agrees);
    v("expected", s.expected);
  }
  friend bool operator==(const SolveRecord&, const SolveRecord&) = default;
};

struct EnumerateRecord {
  static constexpr const char* kind = "enumerate";
  std::size_t order = 0, count = 0;
  std::optional<std::size_t> expected;
  std::vector<std::string> groups;  // one descriptor per group
  std::optional<std::size_t> catalog_files;
  std::optional<bool> catalog_matches;

  template <class S, class V>
  static void fields(S& s, V&& v) {
    v("order", s.order), v("count", s.count), v("expected", s.expected), v("groups", s.groups);
    v("catalog_files", s.catalog_files), v("catalog_matches", s.catalog_matches);
  }
  friend bool operator==(const EnumerateRecord&, const EnumerateRecord&) = default;
};

// ---------------------------------------------------------------------------
// Commands. Each returns records, the text rendering and the exit code.

struct Outcome {
  std::vector<Record> records;
  std::string text;
  int code = 0;
};

namespace detail {

inline std::string yes_no(bool b) { return b ? "yes" : "no"; }

template <class T>
std::string join(const std::vector<T>& v, const std::string& sep = " ") {
  std::ostringstream out;
  for (std::size_t i = 0; i < v.size(); ++i) out << (i ? sep : "") << v[i];
  return out.str();
}

inline std::shared_ptr<const FiniteGroup> load_shared(const std::string& path, const Config& cfg) {
  return std::make_shared<const FiniteGroup>(load_group_file(path, cfg.group_caps()));
}

inline ClassifyRecord classify_record(const ClassificationReport& r, const FiniteGroup& g,
                                      std::optional<std::string> file) {
  ClassifyRecord c;
  c.file = std::move(file);
  c.group = r.group;
  c.order = r.order;
  c.metabelian = r.metabelian;
  if (r.witness) {
    c.witness_order = r.witness->a.order();
    c.witness_p = r.witness->p;
    std::string names;
    for (Element x : r.witness->a.elements) names += (names.empty() ? "" : " ") + g.element_name(x);
    c.witness_elements = names;
  }
  c.normal_subgroups = r.normal_subgroups;
  c.notes = r.notes;
  return c;
}

inline std::string classify_line(const ClassifyRecord& c) {
  std::string s = c.group + ": order " + std::to_string(c.order) + ", " + (c.metabelian ? "metabelian" : "not metabelian");
  if (c.witness_order)
    s += ", witness |A| = " + std::to_string(*c.witness_order) + ", p = " + std::to_string(*c.witness_p);
  else
    s += ", NO witness (exhaustive over " + std::to_string(c.normal_subgroups) + " normal subgroups)";
  return s;
}

}  // namespace detail

inline Outcome analyze_system(const std::string& file, const Config& cfg) {
  auto sys = parse_system(groupeq::detail::read_file(file));
  const auto m = exponent_matrix(sys);
  const auto cls = classify(m);
  SystemReport r;
  r.file = file;
  r.equations = cls.equations;
  r.variables = cls.variables;
  r.matrix = m.to_string();
  if (m.rows() == m.cols()) r.determinant = determinant(m);
  r.rank = cls.rational_rank;
  r.invariant_factors = cls.invariant_factors;
  r.nonsingular = cls.nonsingular;
  r.unimodular = cls.unimodular;
  r.singular_primes = cls.singular_primes;
  r.note = cls.proof_note;
  for (auto p : cfg.primes) {
    const bool ok = cls.p_nonsingular(p);
    (ok ? r.p_nonsingular : r.p_singular).push_back(p);
    // independent check: full row rank over the p-element field
    if (ok != (rank_mod_p(m, p) == m.rows())) r.rank_checks_agree = false;
  }

  std::ostringstream t;
  t << "system: " << file << "\n";
  t << "equations: " << r.equations << ", variables: " << r.variables << "\n";
  t << "exponent matrix: " << r.matrix << "\n";
  if (r.determinant) t << "determinant: " << *r.determinant << "\n";
  t << "rational rank: " << r.rank << "\n";
  t << "invariant factors: " << detail::join(r.invariant_factors) << "\n";
  t << "non-singular: " << detail::yes_no(r.nonsingular) << "\n";
  t << "singular primes: " << (r.singular_primes ? (r.singular_primes->empty() ? "none" : detail::join(*r.singular_primes)) : "all") << "\n";
  t << (r.unimodular ? "unimodular" : "not unimodular") << "\n";
  t << "p-nonsingular for p in " << detail::join(cfg.primes) << ":";
  for (auto p : cfg.primes) t << " " << p << "=" << (cls.p_nonsingular(p) ? "true" : "false");
  t << "\n";
  t << "note: " << r.note << "\n";
  if (!r.rank_checks_agree) t << "DEVIATION: rank over F_p disagrees with the invariant factors\n";
  return {{to_record(r)}, t.str(), r.rank_checks_agree ? 0 : 1};
}

inline Outcome group_info(const std::string& file, const Config& cfg) {
  auto g = load_group_file(file, cfg.group_caps());
  GroupReport r;
  r.file = file;
  r.name = g.name();
  r.order = g.order();
  r.abelian = is_abelian(g);
  r.nilpotent = is_nilpotent(g);
  r.solvable = is_solvable(g);
  r.metabelian = is_metabelian(g);
  if (r.solvable) r.derived_length = derived_length(g);
  r.center_order = center(g).order();
  for (const auto& s : derived_series(g)) r.derived_series.push_back(s.order());
  for (const auto& n : normal_subgroups(g, cfg.cap_subgroups)) r.normal_subgroup_orders.push_back(n.order());
  std::map<std::size_t, std::size_t> hist;
  for (Element x = 0; x < g.order(); ++x) ++hist[g.element_order(x)];
  for (auto [o, c] : hist) {
    r.element_orders.push_back(o);
    r.element_order_counts.push_back(c);
  }
  std::ostringstream t;
  t << "group: " << r.name << " (" << file << ")\n";
  t << "order: " << r.order << "\n";
  t << "abelian: " << detail::yes_no(r.abelian) << ", nilpotent: " << detail::yes_no(r.nilpotent)
    << ", solvable: " << detail::yes_no(r.solvable) << ", metabelian: " << detail::yes_no(r.metabelian) << "\n";
  if (r.derived_length) t << "derived length: " << *r.derived_length << "\n";
  t << "derived series orders: " << detail::join(r.derived_series) << "\n";
  t << "center order: " << r.center_order << "\n";
  t << "normal subgroup orders: " << detail::join(r.normal_subgroup_orders) << "\n";
  t << "element orders:";
  for (std::size_t i = 0; i < r.element_orders.size(); ++i) t << " " << r.element_orders[i] << "x" << r.element_order_counts[i];
  t << "\n";
  return {{to_record(r)}, t.str(), 0};
}

inline Outcome classify_command(const std::string& file, const Config& cfg) {
  auto g = load_group_file(file, cfg.group_caps());
  const std::string id = g.name().empty() ? std::filesystem::path(file).stem().string() : g.name();
  auto rep = classify_group(g, id, cfg.cap_subgroups);
  Outcome out;
  auto c = detail::classify_record(rep, g, file);
  out.records.push_back(to_record(c));
  std::ostringstream t;
  t << detail::classify_line(c) << "\n";
  if (c.witness_elements) t << "  A = { " << *c.witness_elements << " }\n";
  for (const auto& n : c.notes) t << "  note: " << n << "\n";
  bool deviation = c.metabelian && !c.witness_order && c.order < 42;

  const auto f = factorize(g.order());
  if (f.size() == 2 && f.begin()->second == 1 && f.rbegin()->second == 1) {
    auto pq = lemma_pq_check(g);
    PqRecord r{id, pq.p, pq.q, pq.sylow_q_count, pq.witness.a.order(), pq.witness.p, pq.verified};
    out.records.push_back(to_record(r));
    t << "order " << pq.p << "*" << pq.q << ": " << pq.sylow_q_count << " Sylow " << pq.q << "-subgroup(s); witness (C"
      << pq.q << ", " << pq.p << ") " << (pq.verified ? "verified" : "NOT verified") << "\n";
    deviation |= !pq.verified;
  }
  if (f.size() == 1) {
    auto pk = lemma_pk_check(g, cfg.trials, cfg.seed);
    PkRecord r{id, pk.p, pk.k, pk.seed, pk.trials, pk.solved, pk.failures};
    out.records.push_back(to_record(r));
    t << "prime-power order " << pk.p << "^" << pk.k << ": " << pk.solved << "/" << pk.trials
      << " random unimodular one-variable equations solvable in G (seed " << pk.seed << ")\n";
    for (const auto& e : pk.failures) t << "  unsolved: " << e << "\n";
    deviation |= pk.solved != pk.trials;
  }
  if (deviation) t << "DEVIATION: expected outcome not met\n";
  out.text = t.str();
  out.code = deviation ? 1 : 0;
  return out;
}

inline Outcome audit_command(const std::string& dir, const std::vector<std::size_t>& orders, const Config& cfg) {
  auto rep = audit_catalog(dir, orders, cfg.jobs, cfg.group_caps(), cfg.cap_subgroups);
  Outcome out;
  std::ostringstream t;
  for (const auto& e : rep.entries) {
    if (!e.report) {
      out.records.push_back(to_record(AuditErrorRecord{e.file, e.error}));
      t << e.file << ": ERROR " << e.error << "\n";
      continue;
    }
    // witness element names need the group; report the order and prime only
    ClassifyRecord c;
    c.file = e.file;
    c.group = e.report->group;
    c.order = e.report->order;
    c.metabelian = e.report->metabelian;
    if (e.report->witness) {
      c.witness_order = e.report->witness->a.order();
      c.witness_p = e.report->witness->p;
    }
    c.normal_subgroups = e.report->normal_subgroups;
    c.notes = e.report->notes;
    out.records.push_back(to_record(c));
    t << detail::classify_line(c) << "\n";
  }
  AuditSummaryRecord s;
  s.directory = dir;
  s.files = rep.entries.size();
  s.errors = rep.errors;
  for (const auto& [n, o] : rep.by_order) {
    s.orders.push_back(n);
    s.groups.push_back(o.groups);
    s.metabelian.push_back(o.metabelian);
    s.witnessed.push_back(o.witnessed);
  }
  s.flagged = rep.flagged;
  s.reproduced = rep.reproduced;
  out.records.push_back(to_record(s));
  t << "\norder  groups  metabelian  witnessed\n";
  for (std::size_t i = 0; i < s.orders.size(); ++i) {
    char line[64];
    std::snprintf(line, sizeof line, "%5zu  %6zu  %10zu  %9zu\n", s.orders[i], s.groups[i], s.metabelian[i], s.witnessed[i]);
    t << line;
  }
  t << "files: " << s.files << ", load errors: " << s.errors << "\n";
  t << "metabelian without witness: " << (s.flagged.empty() ? "none" : detail::join(s.flagged, ", ")) << "\n";
  t << "verdict: " << (s.reproduced ? "every metabelian group of order 12, 18, 20, 24, 28, 30, 36 or 40 has a witness"
                                    : "DEVIATION: a metabelian group of a listed order lacks a witness")
    << "\n";
  out.text = t.str();
  out.code = s.reproduced && s.errors == 0 ? 0 : 1;
  return out;
}

inline Outcome wreath_command(const std::string& file, const std::string& base_file, const std::string& top_file,
                              std::optional<std::uint64_t> p_opt, const Config& cfg) {
  auto sys = parse_system(groupeq::detail::read_file(file));
  if (!sys.bind_spec) throw PreconditionError("system has no bind: line (expected 'bind: wreath ...')");
  auto base = detail::load_shared(base_file, cfg);
  auto top = detail::load_shared(top_file, cfg);
  auto w = std::make_shared<const WreathGroup>(base, top, cfg.wreath_caps());
  sys = bind_system(std::move(sys), w->group_ptr());

  std::uint64_t p = 0;
  unsigned k = 0;
  if (p_opt) p = *p_opt;
  else if (top->order() == 1) p = 2;
  else if (!prime_power(top->order(), p, k)) throw PreconditionError("top group is not a p-group; pass --p");

  auto ws = normalize_top_component(sys, w, p);
  auto ts = lemma2_transform(ws);
  auto rx = extract_rows(ws, ts, p);
  auto cert = certify_row_independence(rx.first_rows);

  WreathRecord r;
  r.file = file;
  r.base = base->name();
  r.top = top->name();
  r.p = p;
  r.wreath_order = w->group().order();
  for (Element b : ws.shifts) r.shifts.push_back(top->element_name(b));
  r.transformed_system = write_system(ts.system);
  {
    std::vector<unsigned> exps;
    for (auto n : rx.shape.torsion_orders) {
      unsigned e = 0;
      for (std::size_t v = 1; v < n; v *= p) ++e;
      exps.push_back(e);
    }
    r.algebra = algebra_header(p, exps, 0);
    r.algebra.pop_back();
  }
  for (const auto& row : rx.first_rows.rows) {
    std::string s;
    for (std::size_t i = 0; i < row.size(); ++i) s += (i ? " ; " : "") + format_element(row[i]);
    r.rows.push_back(s);
  }
  r.translation_law = rx.translation_law;
  r.augmentation = rx.augmentation.to_string();
  r.exponent_rows_mod_p = rx.exponent_rows_mod_p.to_string();
  r.augmentation_matches = rx.augmentation_matches;
  r.certified = cert.certified;
  r.rank = cert.rank;
  r.columns = cert.columns;
  r.minor_determinant = cert.minor_determinant;

  std::ostringstream t;
  t << "wreath product: " << r.base << " wr " << r.top << " (order " << r.wreath_order << "), p = " << p << "\n";
  t << "top shifts:";
  for (std::size_t i = 0; i < r.shifts.size(); ++i) t << " " << ws.variables[i] << "->" << r.shifts[i];
  t << "\ntransformed system over the base group:\n" << r.transformed_system;
  t << "rows m_j over Z_" << p << "[top], top in cyclic coordinates x1, x2, ...:\n" << r.algebra << "\n";
  for (const auto& row : r.rows) t << "row: " << row << "\n";
  t << "translation law m_{j,b} = b m_{j,1}: " << detail::yes_no(r.translation_law) << "\n";
  t << "augmentation: " << r.augmentation << " (exponent rows mod p: " << r.exponent_rows_mod_p << ", "
    << (r.augmentation_matches ? "match" : "MISMATCH") << ")\n";
  t << "row independence: " << (r.certified ? "certified" : "NOT certified") << ", rank " << r.rank << ", columns "
    << detail::join(r.columns) << ", minor determinant " << r.minor_determinant << " mod " << p << "\n";
  const bool ok = r.translation_law && r.augmentation_matches && r.certified;
  return {{to_record(r)}, t.str(), ok ? 0 : 1};
}

inline Outcome certify_command(const std::string& file) {
  auto f = parse_algebra_rows(groupeq::detail::read_file(file));
  RowIndependenceCertificate cert;
  std::size_t length = 0;
  if (f.p == 0) {
    auto fam = materialize_rows(f, IntegerRing{});
    length = fam.length();
    cert = certify_row_independence_rational(fam);
  } else {
    auto fam = materialize_rows(f, PrimeField(f.p));
    length = fam.length();
    cert = certify_row_independence(fam);
  }
  CertifyRecord r;
  r.file = file;
  r.p = f.p;
  r.rows = f.rows.size();
  r.length = length;
  r.augmentation = cert.augmentation.to_string();
  r.rank = cert.rank;
  r.columns = cert.columns;
  r.minor_determinant = cert.minor_determinant;
  r.certified = cert.certified;
  std::ostringstream t;
  t << "rows: " << r.rows << " of length " << r.length << " over " << (f.p ? "Z_" + std::to_string(f.p) : std::string("Z")) << "\n";
  t << "augmentation: " << r.augmentation << "\n";
  t << "rank: " << r.rank << "\n";
  if (r.certified)
    t << "certified: rows are independent (columns " << detail::join(r.columns) << ", minor determinant "
      << r.minor_determinant << (f.p ? " mod " + std::to_string(f.p) : std::string()) << ")\n";
  else
    t << "not certified: augmentation rank " << r.rank << " < " << r.rows << " (verdict unknown)\n";
  return {{to_record(r)}, t.str(), r.certified ? 0 : 1};
}

inline Outcome counterexample_command(std::uint64_t p, std::uint64_t q, bool symbolic, bool solve, const Config& cfg) {
  auto inst = counterexample_build(p, q, symbolic, cfg.wreath_caps());
  auto ob = obstruction_check(inst);
  CounterexampleRecord r;
  r.p = p;
  r.q = q;
  r.n = inst.n;
  r.m = inst.m;
  {
    auto pos = inst.text.find("eq: ") + 4;
    r.equation = inst.text.substr(pos, inst.text.find('\n', pos) - pos);
  }
  r.exponent_sum = exponent_sum(inst.equation.words[0], 0);
  r.unimodular = classify(inst.equation).unimodular;
  if (inst.realized()) r.group_order = inst.wreath->group().order();
  r.s = ob.s;
  r.ring_identity = ob.ring_identity;
  r.conjugate_identity = ob.conjugate_identity;
  r.s_zero = ob.s_zero;
  r.lhs_exponent = ob.lhs_exponent;
  r.rhs_exponent = ob.rhs_exponent;
  r.group_inequality = ob.group_inequality;
  if (ob.group_inequality) {
    r.lhs_value = ob.lhs_value;
    r.rhs_value = ob.rhs_value;
  }
  r.conclusion = ob.conclusion();
  if (solve) {
    if (!inst.realized()) throw PreconditionError("--solve needs the group to be realized");
    auto res = brute_force_solve(inst.equation, cfg.cap_work, cfg.jobs);
    r.solvable_in_group = res.solution.has_value();
    if (res.solution) r.solution = inst.wreath->group().element_name((*res.solution)[0]);
  }

  std::ostringstream t;
  t << "C2 wr (C" << p << " x C" << q << ")";
  if (r.group_order) t << ", order " << *r.group_order;
  else t << ", not realized (symbolic mode)";
  t << "\n";
  t << "n = " << r.n << ", m = " << r.m << " (" << r.n << "*" << p << " + " << r.m << "*" << q << " = 1)\n";
  t << "equation: " << r.equation << "\n";
  t << "exponent sum of x: " << r.exponent_sum << " (" << (r.unimodular ? "unimodular" : "NOT unimodular") << ")\n";
  t << "S = " << r.s << "   (a = x1, b = x2)\n";
  t << "ring identity S(1+ab) = S(a+b): " << (r.ring_identity ? "holds" : "FAILS") << "\n";
  t << "exponent identity L(1+ab) = S = L(a+b): " << (r.conjugate_identity ? "holds" : "FAILS") << "\n";
  if (r.s_zero) t << "ANOMALY: S = 0\n";
  t << "(cc^ab)^(1+ab) = c^(" << r.lhs_exponent << "), (cc^ab)^(a+b) = c^(" << r.rhs_exponent << ")\n";
  if (r.group_inequality)
    t << "in G: " << *r.lhs_value << (*r.group_inequality ? " != " : " == ") << *r.rhs_value << "\n";
  else
    t << "in G: not computed (group not realized)\n";
  if (r.solvable_in_group)
    t << "brute force in G: " << (*r.solvable_in_group ? "solution x = " + *r.solution : std::string("no solution")) << "\n";
  t << "conclusion: " << r.conclusion << "\n";
  const bool ok = r.unimodular && r.ring_identity && r.conjugate_identity && !r.s_zero &&
                  (!r.group_inequality || *r.group_inequality);
  return {{to_record(r)}, t.str(), ok ? 0 : 1};
}

inline Outcome solve_command(const std::string& file, const std::optional<std::string>& group_file,
                             const std::optional<std::string>& expect, bool check_reversed, const Config& cfg) {
  EquationSystem sys;
  if (group_file) {
    sys = parse_system(groupeq::detail::read_file(file));
    auto g = detail::load_shared(*group_file, cfg);
    std::vector<std::pair<std::string, std::string>> assignments;
    if (sys.bind_spec) assignments = sys.bind_spec->assignments;
    sys = bind_system(std::move(sys), g, assignments);
  } else {
    sys = load_system_file(file, cfg.group_caps());
    if (!sys.binding) throw PreconditionError("no group: pass --group or add a bind: line");
  }
  if (expect && *expect != "solvable" && *expect != "unsolvable")
    throw PreconditionError("--expect must be 'solvable' or 'unsolvable'");
  const auto& g = *sys.binding->group;
  auto res = brute_force_solve(sys, cfg.cap_work, cfg.jobs);
  SolveRecord r;
  r.file = file;
  r.group = g.name();
  r.variables = sys.num_variables();
  r.search_space = res.search_space;
  r.solvable = res.solution.has_value();
  if (res.solution)
    for (std::size_t i = 0; i < r.variables; ++i)
      r.assignment.push_back(sys.alphabet.variables[i] + "=" + g.element_name((*res.solution)[i]));
  if (check_reversed) r.reversed_agrees = brute_force_solve_reversed(sys, cfg.cap_work).solution == res.solution;
  r.expected = expect;

  std::ostringstream t;
  t << "system: " << file << " over " << r.group << " (order " << g.order() << ")\n";
  t << "search space: " << r.search_space << " assignments\n";
  if (r.solvable) t << "least solution: " << detail::join(r.assignment, ", ") << "\n";
  else t << "no solution (exhaustive)\n";
  if (r.reversed_agrees) t << "reversed search: " << (*r.reversed_agrees ? "agrees" : "DISAGREES") << "\n";
  bool deviation = r.reversed_agrees == false;
  if (expect && (*expect == "solvable") != r.solvable) {
    deviation = true;
    t << "DEVIATION: expected " << *expect << "\n";
  }
  return {{to_record(r)}, t.str(), deviation ? 1 : 0};
}

inline Outcome enumerate_command(std::size_t n, const std::optional<std::string>& catalog, const Config& cfg) {
  auto groups = enumerate_groups(n, cfg.cap_enumerate, cfg.jobs);
  EnumerateRecord r;
  r.order = n;
  r.count = groups.size();
  r.expected = known_group_count(n);
  std::ostringstream t;
  t << "groups of order " << n << ": " << r.count;
  if (r.expected) t << " (expected " << *r.expected << ")";
  t << "\n";
  for (const auto& g : groups) {
    auto f = fingerprint(g);
    std::string d = g.name() + ": " + (is_abelian(g) ? "abelian" : "non-abelian") + ", center " +
                    std::to_string(f.center_order) + ", derived series " + detail::join(f.derived_orders, ",");
    r.groups.push_back(d);
    t << "  " << d << "\n";
  }
  bool deviation = r.expected && *r.expected != r.count;
  if (catalog) {
    auto check = validate_catalog(*catalog, cfg.jobs, cfg.group_caps());
    std::vector<FiniteGroup> files;
    for (const auto& e : check.entries)
      if (e.order == n) files.push_back(load_group_file(*catalog + "/" + e.file, cfg.group_caps()));
    bool match = files.size() == groups.size();
    for (const auto& f : files) {
      std::size_t hits = 0;
      for (const auto& g : groups) hits += isomorphic(f, g, n).has_value();
      match = match && hits == 1;
    }
    r.catalog_files = files.size();
    r.catalog_matches = match;
    t << "catalog " << *catalog << ": " << files.size() << " file(s) of order " << n << ", "
      << (match ? "one-to-one with the enumeration" : "MISMATCH with the enumeration") << "\n";
    deviation |= !match;
  }
  return {{to_record(r)}, t.str(), deviation ? 1 : 0};
}

// ---------------------------------------------------------------------------
// Entry point

inline std::string help_footer() {
  Config d;
  std::ostringstream t;
  t << "Configuration: groupeq.conf in the working directory, or the file named by GROUPEQ_CONFIG\n"
       "or --config; key=value lines. Flags override the file. Defaults:\n"
    << "  cap.table=" << d.cap_table << "  cap.closure=" << d.cap_closure << "  cap.wreath=" << d.cap_wreath
    << "\n  cap.subgroups=" << d.cap_subgroups << "  cap.enumerate=" << d.cap_enumerate << "  cap.work=" << d.cap_work
    << "\n  primes=2,3,5,7,11,13  format=text  jobs=1  seed=0  trials=100\n"
    << "Exit codes: 0 verdicts as expected, 1 deviation found, 2 operational error.";
  return t.str();
}

/// Runs the command line `args` (without the program name).
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"groupeq: equations over finite groups, wreath products and group rings"};
  app.name("groupeq");
  app.footer(help_footer());
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::string> config_path;
  std::string format;
  unsigned jobs = 0;
  std::uint64_t seed = 0, cap_work = 0;
  std::size_t trials = 0, cap_table = 0, cap_closure = 0, cap_wreath = 0, cap_subgroups = 0, cap_enumerate = 0;
  std::string primes;
  app.add_option("--config", config_path, "config file (key=value)");
  auto* o_format = app.add_option("--format", format, "output: text or structured")->check(CLI::IsMember({"text", "structured"}));
  auto* o_jobs = app.add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
  auto* o_seed = app.add_option("--seed", seed, "seed for randomized checks");
  auto* o_trials = app.add_option("--trials", trials, "random equations per prime-power group");
  auto* o_primes = app.add_option("--primes", primes, "comma-separated primes for p-nonsingularity verdicts");
  auto* o_table = app.add_option("--cap-table", cap_table, "largest group order held as a table");
  auto* o_closure = app.add_option("--cap-closure", cap_closure, "largest permutation closure");
  auto* o_wreath = app.add_option("--cap-wreath", cap_wreath, "largest wreath product order");
  auto* o_sub = app.add_option("--cap-subgroups", cap_subgroups, "largest order for subgroup enumeration");
  auto* o_enum = app.add_option("--cap-enumerate", cap_enumerate, "largest order for group enumeration");
  auto* o_work = app.add_option("--cap-work", cap_work, "largest brute-force search space");

  std::string file, dir, base, top, orders, expect, catalog, group;
  std::uint64_t p = 0, q = 0;
  std::size_t order = 0;
  bool symbolic = false, solve = false, reversed = false;

  auto* c_analyze = app.add_subcommand("analyze-system", "exponent-sum matrix, Smith invariants and p-nonsingularity of a system");
  c_analyze->add_option("system", file, "system file")->required();
  std::vector<std::uint64_t> analyze_primes;
  auto* o_aprime = c_analyze->add_option("--prime", analyze_primes, "prime for a p-nonsingularity verdict (repeatable)");

  auto* c_group = app.add_subcommand("group", "structure summary of a group file");
  c_group->add_option("group", file, "group file")->required();

  auto* c_classify = app.add_subcommand(
      "classify", "search for an abelian normal A with G/A an abelian p-group; order-pq and prime-power checks");
  c_classify->add_option("group", file, "group file")->required();

  auto* c_audit = app.add_subcommand("audit-catalog", "classify every group file in a directory");
  c_audit->add_option("dir", dir, "catalog directory")->required();
  c_audit->add_option("--orders", orders, "comma-separated orders to include (default: all)");

  auto* c_wreath = app.add_subcommand("wreath-transform",
                                      "normalize a system over a wreath product and rewrite it over the base group");
  c_wreath->add_option("system", file, "system file with 'bind: wreath sym=element ...'")->required();
  c_wreath->add_option("--base", base, "base group file")->required();
  c_wreath->add_option("--top", top, "top group file (abelian p-group)")->required();
  auto* o_wp = c_wreath->add_option("--p,--prime", p, "the prime p (default: from the top group order)");

  auto* c_certify = app.add_subcommand("certify-rows", "certify independence of group-ring rows by augmentation");
  c_certify->add_option("rows", file, "algebra rows file")->required();

  auto* c_counter = app.add_subcommand("counterexample", "build the C2 wr (C_p x C_q) instance and check its obstruction");
  c_counter->add_option("--p", p, "first prime")->required();
  c_counter->add_option("--q", q, "second prime")->required();
  c_counter->add_flag("--symbolic", symbolic, "skip the group realization (ring identity only)");
  c_counter->add_flag("--solve", solve, "also brute-force the equation inside the group");

  auto* c_solve = app.add_subcommand("solve", "lexicographically least solution by exhaustive search");
  c_solve->add_option("system", file, "system file")->required();
  auto* o_group = c_solve->add_option("--group", group, "group file (default: the system's bind: line)");
  auto* o_expect = c_solve->add_option("--expect", expect, "solvable or unsolvable")->check(CLI::IsMember({"solvable", "unsolvable"}));
  c_solve->add_flag("--check-reversed", reversed, "confirm with a reversed exhaustive search");

  auto* c_enum = app.add_subcommand("enumerate", "all groups of a small order up to isomorphism");
  c_enum->add_option("--order", order, "group order")->required()->check(CLI::PositiveNumber);
  auto* o_catalog = c_enum->add_option("--catalog", catalog, "cross-check against this catalog directory");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    Config cfg = load_default_config(config_path);
    if (o_format->count()) cfg.format = format;
    if (o_jobs->count()) cfg.jobs = jobs;
    if (o_seed->count()) cfg.seed = seed;
    if (o_trials->count()) cfg.trials = trials;
    if (o_primes->count()) cfg.primes = detail::parse_number_list(primes);
    if (o_table->count()) cfg.cap_table = cap_table;
    if (o_closure->count()) cfg.cap_closure = cap_closure;
    if (o_wreath->count()) cfg.cap_wreath = cap_wreath;
    if (o_sub->count()) cfg.cap_subgroups = cap_subgroups;
    if (o_enum->count()) cfg.cap_enumerate = cap_enumerate;
    if (o_work->count()) cfg.cap_work = cap_work;
    cfg.validate();

    Outcome res;
    if (*c_analyze) {
      if (o_aprime->count()) cfg.primes = analyze_primes;
      cfg.validate();
      res = analyze_system(file, cfg);
    }
    else if (*c_group) res = group_info(file, cfg);
    else if (*c_classify) res = classify_command(file, cfg);
    else if (*c_audit) {
      std::vector<std::size_t> ords;
      for (auto v : detail::parse_number_list(orders)) ords.push_back(v);
      res = audit_command(dir, ords, cfg);
    } else if (*c_wreath) res = wreath_command(file, base, top, o_wp->count() ? std::optional<std::uint64_t>(p) : std::nullopt, cfg);
    else if (*c_certify) res = certify_command(file);
    else if (*c_counter) res = counterexample_command(p, q, symbolic, solve, cfg);
    else if (*c_solve)
      res = solve_command(file, o_group->count() ? std::optional<std::string>(group) : std::nullopt,
                          o_expect->count() ? std::optional<std::string>(expect) : std::nullopt, reversed, cfg);
    else if (*c_enum) res = enumerate_command(order, o_catalog->count() ? std::optional<std::string>(catalog) : std::nullopt, cfg);

    out << (cfg.format == "structured" ? emit_records(res.records) : res.text);
    return res.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace groupeq::cli
