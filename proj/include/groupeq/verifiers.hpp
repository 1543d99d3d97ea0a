#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "groupeq/algebra.hpp"
#include "groupeq/constructions.hpp"
#include "groupeq/error.hpp"
#include "groupeq/finite_group.hpp"
#include "groupeq/group_io.hpp"
#include "groupeq/integer.hpp"
#include "groupeq/structure.hpp"
#include "groupeq/subgroup.hpp"
#include "groupeq/system.hpp"
#include "groupeq/word.hpp"
#include "groupeq/wreath.hpp"

namespace groupeq {

inline constexpr std::uint64_t kDefaultWorkCap = 10'000'000;

/// Runs body(i) for i in [0, count) on up to `jobs` threads, indices handed out in order.
template <class Body>
void parallel_for(std::size_t count, unsigned jobs, Body&& body) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t)
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i; (i = next.fetch_add(1)) < count;) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// Brute-force solving

struct SolveResult {
  std::optional<std::vector<Element>> solution;  // lexicographically least
  std::uint64_t search_space = 0;                // |G|^#vars, all of it covered when no solution
};

namespace detail {

inline std::uint64_t search_space(const EquationSystem& sys, std::uint64_t work_cap) {
  if (!sys.binding) throw PreconditionError("system is not bound to a group");
  const std::uint64_t n = sys.binding->group->order();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < sys.num_variables(); ++i) {
    if (total > work_cap / n) throw CapExceeded("brute-force search space exceeds the work cap " + std::to_string(work_cap));
    total *= n;
  }
  if (total > work_cap) throw CapExceeded("brute-force search space exceeds the work cap " + std::to_string(work_cap));
  return total;
}

// Lex-least solution with vars[0] fixed, scanning the remaining variables in lex order.
inline std::optional<std::vector<Element>> search_from(const EquationSystem& sys, Element first) {
  const std::size_t nv = sys.num_variables();
  const Element n = static_cast<Element>(sys.binding->group->order());
  std::vector<Element> vars(nv, 0);
  vars[0] = first;
  while (true) {
    if (satisfies(sys, vars)) return vars;
    std::size_t i = nv;
    while (i-- > 1) {
      if (++vars[i] < n) break;
      vars[i] = 0;
    }
    if (i == 0) return std::nullopt;
  }
}

}  // namespace detail

/// Exhaustive search for the lexicographically least solution (first variable most
/// significant). Values of the first variable are distributed over `jobs` threads; the
/// result does not depend on the thread count.
inline SolveResult brute_force_solve(const EquationSystem& sys, std::uint64_t work_cap = kDefaultWorkCap,
                                     unsigned jobs = 1) {
  SolveResult res;
  res.search_space = detail::search_space(sys, work_cap);
  if (sys.num_variables() == 0) {
    if (satisfies(sys, {})) res.solution = std::vector<Element>{};
    return res;
  }
  const Element n = static_cast<Element>(sys.binding->group->order());
  std::atomic<Element> best{n};
  std::vector<std::optional<std::vector<Element>>> found(n);
  parallel_for(n, jobs, [&](std::size_t v) {
    if (static_cast<Element>(v) > best.load()) return;
    found[v] = detail::search_from(sys, static_cast<Element>(v));
    if (found[v]) {
      Element cur = best.load();
      while (static_cast<Element>(v) < cur && !best.compare_exchange_weak(cur, static_cast<Element>(v))) {
      }
    }
  });
  if (best.load() < n) res.solution = found[best.load()];
  return res;
}

/// Independent check of brute_force_solve: scans the whole space in descending lex order
/// and keeps the last solution seen.
inline SolveResult brute_force_solve_reversed(const EquationSystem& sys, std::uint64_t work_cap = kDefaultWorkCap) {
  SolveResult res;
  res.search_space = detail::search_space(sys, work_cap);
  const std::size_t nv = sys.num_variables();
  const Element n = static_cast<Element>(sys.binding->group->order());
  std::vector<Element> vars(nv, n - 1);
  while (true) {
    if (satisfies(sys, vars)) res.solution = vars;
    std::size_t i = nv;
    while (i-- > 0) {
      if (vars[i] > 0) {
        --vars[i];
        break;
      }
      vars[i] = n - 1;
    }
    if (i == static_cast<std::size_t>(-1)) break;
  }
  return res;
}

// ---------------------------------------------------------------------------
// Abelian-by-abelian-p witnesses

struct Witness {
  Subgroup a;
  std::uint64_t p = 0;

  friend bool operator==(const Witness&, const Witness&) = default;
};

/// A abelian and normal in G, G/A abelian of p-power order (order 1 allowed).
inline bool verify_witness(const FiniteGroup& g, const Witness& w) {
  if (!is_prime(w.p) || !is_subgroup(g, w.a) || !is_normal(g, w.a) || !is_abelian(g, w.a)) return false;
  auto q = quotient(g, w.a);
  if (!is_abelian(q.group)) return false;
  std::uint64_t r = 0;
  unsigned k = 0;
  return q.group.order() == 1 || (prime_power(q.group.order(), r, k) && r == w.p);
}

/// Exhaustive search over normal subgroups, largest first (canonical order within a size).
/// For the trivial quotient p is the least prime dividing |G| (2 for the trivial group).
inline std::optional<Witness> abelian_by_abelian_p_witness(const FiniteGroup& g,
                                                           std::size_t cap = kDefaultSubgroupCap) {
  auto normals = normal_subgroups(g, cap);
  std::stable_sort(normals.begin(), normals.end(),
                   [](const Subgroup& x, const Subgroup& y) { return x.order() > y.order(); });
  const Subgroup derived = commutator_subgroup(g);
  for (const auto& a : normals) {
    if (!is_abelian(g, a)) continue;
    if (!std::includes(a.elements.begin(), a.elements.end(), derived.elements.begin(), derived.elements.end()))
      continue;
    const std::uint64_t index = g.order() / a.order();
    std::uint64_t p = 0;
    unsigned k = 0;
    if (index == 1) {
      auto ps = prime_divisors(static_cast<std::uint64_t>(g.order()));
      p = ps.empty() ? 2 : ps.front();
    } else if (!prime_power(index, p, k)) {
      continue;
    }
    Witness w{a, p};
    if (!verify_witness(g, w)) throw Error("internal: witness failed re-verification");
    return w;
  }
  return std::nullopt;
}

struct ClassificationReport {
  std::string group;
  std::size_t order = 0;
  bool metabelian = false;
  std::optional<Witness> witness;
  std::size_t normal_subgroups = 0;  // how many were searched
  std::vector<std::string> notes;
};

/// The order of each prime in n, e.g. 12 -> {2:2, 3:1}.
inline std::map<std::uint64_t, unsigned> factorize(std::uint64_t n) {
  std::map<std::uint64_t, unsigned> f;
  for (std::uint64_t p : prime_divisors(n))
    while (n % p == 0) {
      n /= p;
      ++f[p];
    }
  return f;
}

inline ClassificationReport classify_group(const FiniteGroup& g, std::string id = {},
                                           std::size_t cap = kDefaultSubgroupCap) {
  ClassificationReport r;
  r.group = id.empty() ? g.name() : std::move(id);
  r.order = g.order();
  r.metabelian = is_metabelian(g);
  r.normal_subgroups = normal_subgroups(g, cap).size();
  r.witness = abelian_by_abelian_p_witness(g, cap);

  const auto f = factorize(g.order());
  if (is_abelian(g)) r.notes.push_back("abelian: A = G with trivial quotient");
  else if (f.size() == 1) r.notes.push_back("group of prime-power order");
  else if (f.size() == 2 && f.begin()->second == 1 && f.rbegin()->second == 1)
    r.notes.push_back("order pq: the Sylow subgroup for the larger prime is normal");
  for (const auto& [p, k] : f) {
    if (f.size() < 2) break;
    if (is_normal(g, sylow_subgroup(g, p)))
      r.notes.push_back("normal Sylow " + std::to_string(p) + "-subgroup");
  }
  if (!r.metabelian) r.notes.push_back("not metabelian: no witness can exist");
  if (r.witness) {
    r.notes.push_back("witness |A| = " + std::to_string(r.witness->a.order()) + ", |G/A| = " +
                      std::to_string(g.order() / r.witness->a.order()) + ", p = " + std::to_string(r.witness->p));
  } else {
    r.notes.push_back("no witness among " + std::to_string(r.normal_subgroups) + " normal subgroups (exhaustive)");
  }
  return r;
}

// ---------------------------------------------------------------------------
// Order pq

struct PqReport {
  std::uint64_t p = 0, q = 0;  // p < q
  std::size_t sylow_q_count = 0;
  Witness witness;
  bool verified = false;
};

inline PqReport lemma_pq_check(const FiniteGroup& g) {
  const auto f = factorize(g.order());
  if (f.size() != 2 || f.begin()->second != 1 || f.rbegin()->second != 1)
    throw PreconditionError("group order " + std::to_string(g.order()) + " is not a product of two distinct primes");
  PqReport r;
  r.p = f.begin()->first;
  r.q = f.rbegin()->first;
  std::size_t of_order_q = 0;
  for (Element x = 0; x < g.order(); ++x) of_order_q += g.element_order(x) == r.q;
  r.sylow_q_count = of_order_q / (r.q - 1);
  r.witness = {sylow_subgroup(g, r.q), r.p};
  r.verified = r.sylow_q_count == 1 && verify_witness(g, r.witness);
  return r;
}

// ---------------------------------------------------------------------------
// Prime-power order: random unimodular one-variable equations

struct PkReport {
  std::uint64_t p = 0;
  unsigned k = 0;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::size_t solved = 0;
  std::vector<std::string> failures;  // equations without a solution in G
};

/// A random equation in one variable x whose exponent sum is +1 or -1, with random
/// coefficients c1..cN bound to elements of g.
inline EquationSystem random_unimodular_equation(std::shared_ptr<const FiniteGroup> g, std::mt19937_64& rng) {
  const int target = rng() % 2 ? 1 : -1;
  const std::size_t pairs = rng() % 3;
  std::vector<int> signs(pairs, 1);
  signs.insert(signs.end(), pairs, -1);
  signs.push_back(target);
  for (std::size_t i = signs.size(); i > 1; --i) std::swap(signs[i - 1], signs[rng() % i]);

  EquationSystem sys;
  sys.alphabet.variables = {"x"};
  Binding bnd{g, {}};
  Word w;
  auto maybe_coeff = [&] {
    if (rng() % 2 == 0) return;
    const auto id = sys.alphabet.coefficients.size();
    sys.alphabet.coefficients.push_back("c" + std::to_string(id + 1));
    bnd.values.push_back(static_cast<Element>(rng() % g->order()));
    w.push_back(Letter::coeff(id, rng() % 2 ? 1 : -1));
  };
  for (int s : signs) {
    maybe_coeff();
    w.push_back(Letter::var(0, s));
  }
  maybe_coeff();
  sys.words.push_back(std::move(w));
  sys.binding = std::move(bnd);
  return sys;
}

inline PkReport lemma_pk_check(const FiniteGroup& g, std::size_t trials = 100, std::uint64_t seed = 0) {
  PkReport r;
  if (!prime_power(g.order(), r.p, r.k)) throw PreconditionError("group of order " + std::to_string(g.order()) + " is not a p-group");
  r.seed = seed;
  r.trials = trials;
  auto shared = std::make_shared<const FiniteGroup>(g);
  std::mt19937_64 rng(seed);
  for (std::size_t t = 0; t < trials; ++t) {
    auto sys = random_unimodular_equation(shared, rng);
    if (std::abs(exponent_matrix(sys)(0, 0).convert_to<long long>()) != 1) throw Error("internal: equation is not unimodular");
    if (brute_force_solve(sys).solution) ++r.solved;
    else r.failures.push_back(format_word(sys.words[0], sys.alphabet));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Catalog audit

inline const std::vector<std::size_t>& listed_orders() {
  static const std::vector<std::size_t> v{12, 18, 20, 24, 28, 30, 36, 40};
  return v;
}

struct AuditEntry {
  std::string file;
  std::optional<ClassificationReport> report;
  std::string error;
};

struct OrderSummary {
  std::size_t groups = 0, metabelian = 0, witnessed = 0;
  friend bool operator==(const OrderSummary&, const OrderSummary&) = default;
};

struct AuditReport {
  std::vector<AuditEntry> entries;             // sorted by file name
  std::map<std::size_t, OrderSummary> by_order;
  std::vector<std::string> flagged;            // metabelian with no witness
  std::size_t errors = 0;
  bool reproduced = true;  // every metabelian group of a listed order has a witness
};

/// Classifies every *.grp file in `dir` (non-recursive). Files whose group order is not in
/// `orders` are skipped when `orders` is non-empty. Load errors are recorded per file.
inline AuditReport audit_catalog(const std::string& dir, const std::vector<std::size_t>& orders = {},
                                 unsigned jobs = 1, const GroupCaps& caps = {},
                                 std::size_t subgroup_cap = kDefaultSubgroupCap) {
  if (!std::filesystem::is_directory(dir)) throw Error("not a directory: " + dir);
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".grp") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::vector<AuditEntry> entries(files.size());
  std::vector<bool> keep(files.size(), true);
  parallel_for(files.size(), jobs, [&](std::size_t i) {
    entries[i].file = files[i].filename().string();
    try {
      auto g = load_group_file(files[i].string(), caps);
      if (!orders.empty() && std::find(orders.begin(), orders.end(), g.order()) == orders.end()) {
        keep[i] = false;
        return;
      }
      entries[i].report = classify_group(g, files[i].stem().string(), subgroup_cap);
    } catch (const std::exception& ex) {
      entries[i].error = ex.what();
    }
  });

  AuditReport out;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!keep[i]) continue;
    auto& e = entries[i];
    if (!e.report) {
      ++out.errors;
    } else {
      const auto& r = *e.report;
      auto& s = out.by_order[r.order];
      ++s.groups;
      s.metabelian += r.metabelian;
      s.witnessed += r.witness.has_value();
      if (r.metabelian && !r.witness) {
        out.flagged.push_back(r.group);
        const auto& lo = listed_orders();
        if (std::find(lo.begin(), lo.end(), r.order) != lo.end()) out.reproduced = false;
      }
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The C2 wr (C_p x C_q) family

struct CounterexampleInstance {
  std::uint64_t p = 0, q = 0;
  long long n = 0, m = 0;                      // n p + m q = 1
  std::shared_ptr<const WreathGroup> wreath;   // null in symbolic mode
  Element a = 0, b = 0, c = 0;
  EquationSystem equation;                     // bound to the wreath product when realized
  std::string text;                            // the equation as a system file (unbound)

  bool realized() const noexcept { return wreath != nullptr; }
};

/// n, m with n p + m q = 1; the coefficient of the smaller prime is its least positive value.
inline std::pair<long long, long long> unimodular_coefficients(std::uint64_t p, std::uint64_t q) {
  require_prime(p);
  require_prime(q);
  if (p == q) throw PreconditionError("p and q must be distinct primes");
  const auto s = static_cast<std::int64_t>(std::min(p, q)), l = static_cast<std::int64_t>(std::max(p, q));
  const std::int64_t cs = floor_mod(mod_inverse(s % l, l), l);
  const std::int64_t cl = (1 - cs * s) / l;
  return p < q ? std::pair<long long, long long>{cs, cl} : std::pair<long long, long long>{cl, cs};
}

/// The equation x^n x^(n a) ... x^(n a^(p-1)) x^m x^(m b) ... x^(m b^(q-1)) = c c^(a b) in
/// one variable x and coefficients a, b, c, as system-file text (no bind line).
inline std::string counterexample_equation_text(std::uint64_t p, std::uint64_t q, long long n, long long m) {
  auto term = [](long long e, const std::string& t, std::uint64_t i) {
    std::string s = "x^" + std::to_string(e);
    if (i == 1) s += "^(" + t + ")";
    else if (i > 1) s += "^(" + t + "^" + std::to_string(i) + ")";
    return s;
  };
  std::string lhs;
  for (std::uint64_t i = 0; i < p; ++i) lhs += (lhs.empty() ? "" : " ") + term(n, "a", i);
  for (std::uint64_t j = 0; j < q; ++j) lhs += " " + term(m, "b", j);
  return "vars: x\ncoeffs: a b c\neq: " + lhs + " = c c^(a b)\n";
}

/// Builds the instance; the wreath product C2 wr (C_p x C_q) has order 2^(pq) pq and is
/// realized only within the caps. Above the caps, `symbolic` selects the equation-only mode.
inline CounterexampleInstance counterexample_build(std::uint64_t p, std::uint64_t q, bool symbolic = false,
                                                   const WreathCaps& caps = {}) {
  CounterexampleInstance inst;
  inst.p = p;
  inst.q = q;
  std::tie(inst.n, inst.m) = unimodular_coefficients(p, q);
  inst.text = counterexample_equation_text(p, q, inst.n, inst.m);
  inst.equation = parse_system(inst.text);

  const double order = std::pow(2.0, static_cast<double>(p * q)) * static_cast<double>(p * q);
  const bool fits = order <= static_cast<double>(caps.wreath) && order <= static_cast<double>(caps.table);
  if (!fits) {
    if (!symbolic)
      throw CapExceeded("C2 wr (C" + std::to_string(p) + " x C" + std::to_string(q) + ") has order 2^" +
                        std::to_string(p * q) + "*" + std::to_string(p * q) + ", above the caps; use symbolic mode");
    return inst;
  }
  auto top = std::make_shared<const FiniteGroup>(direct_product(cyclic(p), cyclic(q)));
  inst.wreath = std::make_shared<const WreathGroup>(std::make_shared<const FiniteGroup>(cyclic(2)), top, caps);
  inst.a = inst.wreath->top_element(1);
  inst.b = inst.wreath->top_element(static_cast<Element>(p));
  inst.c = inst.wreath->base_delta(0, 1);
  const auto& g = inst.wreath->group();
  inst.equation = bind_system(inst.equation, inst.wreath->group_ptr(),
                              {{"a", g.element_name(inst.a)}, {"b", g.element_name(inst.b)}, {"c", g.element_name(inst.c)}});
  return inst;
}

struct ObstructionReport {
  std::uint64_t p = 0, q = 0;
  long long n = 0, m = 0;
  std::string s;                      // S in Z[C_p x C_q], a = x1, b = x2
  bool ring_identity = false;         // S (1 + ab) = S (a + b)
  bool conjugate_identity = false;    // L (1 + ab) = S = L (a + b), L the exponent of x
  bool s_zero = false;                // anomalous input
  std::string lhs_exponent, rhs_exponent;  // (1 + ab)(1 + ab) and (1 + ab)(a + b)
  std::optional<bool> group_inequality;    // (c c^ab)^(1+ab) != (c c^ab)^(a+b); empty if not realized
  std::string lhs_value, rhs_value;        // element names in G

  bool confirmed() const { return ring_identity && !s_zero && group_inequality.value_or(false); }
  std::string conclusion() const {
    if (s_zero) return "anomalous: S = 0";
    if (!ring_identity) return "ring identity fails";
    if (!group_inequality) return "partial: ring identity only (group not realized)";
    return *group_inequality ? "obstruction confirmed: no metabelian solution" : "group inequality fails";
  }
};

namespace detail {

// r^u = prod_g (r^g)^{c_g} for r in the (abelian) base and u in Z[C_p x C_q].
inline Element base_power(const CounterexampleInstance& inst, Element r, const IntegralElement& u) {
  const auto& g = inst.wreath->group();
  Element acc = 0;
  for (const auto& [mono, c] : u.terms()) {
    const auto t = inst.wreath->top_element(static_cast<Element>(mono.torsion[0] + inst.p * mono.torsion[1]));
    acc = g.mul(acc, g.pow(g.conj(r, t), c.convert_to<long long>()));
  }
  return acc;
}

}  // namespace detail

/// Checks the group-ring identity exactly and, when the instance is realized, the
/// inequality in G. The fields n, m are read from `inst` as given.
inline ObstructionReport obstruction_check(const CounterexampleInstance& inst) {
  ObstructionReport r;
  r.p = inst.p;
  r.q = inst.q;
  r.n = inst.n;
  r.m = inst.m;
  const AbelianShape shape{{inst.p, inst.q}, 0};
  const IntegerRing zz;
  const auto one = IntegralElement::one(shape, zz);
  const auto a = IntegralElement::torsion_generator(shape, zz, 0);
  const auto b = IntegralElement::torsion_generator(shape, zz, 1);
  auto sum_a = IntegralElement::zero(shape, zz), sum_b = sum_a;
  for (std::uint64_t i = 0; i < inst.p; ++i) sum_a += a.pow(i);
  for (std::uint64_t j = 0; j < inst.q; ++j) sum_b += b.pow(j);
  const auto n = IntegralElement::constant(shape, zz, inst.n), m = IntegralElement::constant(shape, zz, inst.m);

  const auto s = n * (one + b) * sum_a + m * (one + a) * sum_b;
  const auto l = n * sum_a + m * sum_b;
  const auto u = one + a * b, v = a + b;
  r.s = format_element(s);
  r.s_zero = s.is_zero();
  r.ring_identity = (s * u - s * v).is_zero();
  r.conjugate_identity = l * u == s && l * v == s;
  r.lhs_exponent = format_element(u * u);
  r.rhs_exponent = format_element(u * v);

  if (inst.realized()) {
    const auto& g = inst.wreath->group();
    const Element rr = g.mul(inst.c, g.conj(inst.c, g.mul(inst.a, inst.b)));
    const Element lhs = detail::base_power(inst, rr, u), rhs = detail::base_power(inst, rr, v);
    if (lhs != detail::base_power(inst, inst.c, u * u) || rhs != detail::base_power(inst, inst.c, u * v))
      throw Error("internal: exponent expansion disagrees with the group");
    r.group_inequality = lhs != rhs;
    r.lhs_value = g.element_name(lhs);
    r.rhs_value = g.element_name(rhs);
  }
  return r;
}

}  // namespace groupeq
