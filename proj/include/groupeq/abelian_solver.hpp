#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "groupeq/error.hpp"
#include "groupeq/finite_group.hpp"
#include "groupeq/int_matrix.hpp"
#include "groupeq/integer.hpp"
#include "groupeq/structure.hpp"
#include "groupeq/subgroup.hpp"
#include "groupeq/system.hpp"

namespace groupeq {

/// C_{n_1} x ... x C_{n_l} in mixed radix: (a_1,...,a_l) at a_1 + n_1 a_2 + n_1 n_2 a_3 + ...
inline FiniteGroup abelian_group(const std::vector<std::uint64_t>& orders,
                                 std::size_t table_cap = kDefaultTableCap) {
  std::size_t n = 1;
  for (auto o : orders) {
    if (o == 0) throw PreconditionError("cyclic factor of order 0");
    n *= o;
    if (n > table_cap) throw CapExceeded("abelian group order exceeds the table cap");
  }
  auto digits = [&](Element x) {
    std::vector<std::uint64_t> d(orders.size());
    for (std::size_t i = 0; i < orders.size(); ++i) {
      d[i] = x % orders[i];
      x = static_cast<Element>(x / orders[i]);
    }
    return d;
  };
  std::vector<std::string> names(n);
  for (Element x = 0; x < n; ++x) {
    if (x == 0) {
      names[x] = "1";
      continue;
    }
    auto d = digits(x);
    std::string s = "(";
    for (std::size_t i = 0; i < d.size(); ++i) s += (i ? "," : "") + std::to_string(d[i]);
    names[x] = s + ")";
  }
  std::string gname;
  for (auto o : orders) gname += (gname.empty() ? "C" : "xC") + std::to_string(o);
  if (gname.empty()) gname = "1";
  return FiniteGroup::from_product(
      n,
      [&](Element a, Element b) {
        std::size_t out = 0, radix = 1;
        for (std::size_t i = 0; i < orders.size(); ++i) {
          out += ((a / radix + b / radix) % orders[i]) * radix;
          radix *= orders[i];
        }
        return static_cast<Element>(out);
      },
      std::move(names), gname, table_cap);
}

/// A finite abelian p-group with an explicit cyclic decomposition: B = <g_1> x ... x <g_l>,
/// |g_i| = p^{k_i}, k_1 >= k_2 >= ... >= k_l >= 1.
struct AbelianPDecomposition {
  std::uint64_t p = 0;
  std::vector<unsigned> exponents;
  std::vector<Element> generators;
  /// coordinates[x][i] is the exponent of g_i in x, reduced mod p^{k_i}.
  std::vector<std::vector<std::uint64_t>> coordinates;
};

/// Decomposes an abelian p-group by repeatedly adjoining an element of maximal order
/// modulo the part already split off, corrected so that it meets that part trivially.
inline AbelianPDecomposition decompose_abelian_p_group(const FiniteGroup& b, std::uint64_t p) {
  require_prime(p);
  if (!is_abelian(b)) throw PreconditionError("group is not abelian");
  {
    std::uint64_t q = 0;
    unsigned k = 0;
    if (b.order() != 1 && (!prime_power(b.order(), q, k) || q != p))
      throw PreconditionError("group of order " + std::to_string(b.order()) + " is not a " +
                              std::to_string(p) + "-group");
  }
  AbelianPDecomposition dec;
  dec.p = p;
  // coords of the subgroup generated so far: element -> exponent vector
  std::vector<std::vector<std::uint64_t>> coords(b.order());
  std::vector<bool> in_h(b.order(), false);
  in_h[0] = true;
  std::size_t h_order = 1;

  while (h_order < b.order()) {
    // order of each element modulo H
    Element best = 0;
    std::uint64_t best_ord = 1;
    for (Element x = 1; x < b.order(); ++x) {
      if (in_h[x]) continue;
      std::uint64_t o = 1;
      for (Element y = x; !in_h[y]; y = b.mul(y, x)) ++o;
      if (o > best_ord) {
        best_ord = o;
        best = x;
      }
    }
    // x^{best_ord} = prod g_i^{m_i}; each m_i is divisible by best_ord
    const Element h = b.pow(best, static_cast<long long>(best_ord));
    Element x = best;
    for (std::size_t i = 0; i < dec.generators.size(); ++i) {
      const std::uint64_t m = coords[h][i];
      if (m % best_ord != 0) throw Error("internal: abelian decomposition lift failed");
      x = b.mul(x, b.pow(b.inv(dec.generators[i]), static_cast<long long>(m / best_ord)));
    }
    // extend coordinates: every element of H x <x>
    std::vector<Element> old;
    for (Element y = 0; y < b.order(); ++y)
      if (in_h[y]) {
        old.push_back(y);
        coords[y].push_back(0);
      }
    Element xp = x;
    for (std::uint64_t e = 1; e < best_ord; ++e, xp = b.mul(xp, x)) {
      for (Element y : old) {
        Element z = b.mul(y, xp);
        coords[z] = coords[y];
        coords[z].back() = e;
        in_h[z] = true;
      }
    }
    h_order *= best_ord;
    unsigned k = 0;
    for (std::uint64_t t = best_ord; t > 1; t /= p) ++k;
    dec.generators.push_back(x);
    dec.exponents.push_back(k);
  }
  for (auto& c : coords) c.resize(dec.generators.size(), 0);
  dec.coordinates = std::move(coords);
  return dec;
}

/// A solution of an abelian system in a cyclic-factor-wise extension of B.
struct AbelianSolution {
  std::uint64_t p = 0;
  unsigned raise = 0;                  // each factor's exponent is raised by this much
  std::vector<unsigned> exponents;     // exponents of B' (k_i + raise)
  FiniteGroup extension;               // B' as abelian_group(p^{k_i + raise})
  Homomorphism embedding;              // B -> B', g_i -> p^raise in factor i
  std::vector<Element> assignment;     // variable values in B'
  std::vector<Element> coefficients;   // coefficient values pushed into B'
  AbelianPDecomposition decomposition;
};

/// Solves a bound system over a finite abelian p-group B. The system must be non-singular;
/// for p-nonsingular systems no extension is needed (raise = 0). Otherwise each cyclic factor
/// C_{p^k} is embedded into C_{p^{k+v}}, v the p-valuation of the last invariant factor.
inline AbelianSolution solve_abelian_p_system(const EquationSystem& sys, std::uint64_t p,
                                              std::size_t table_cap = kDefaultTableCap) {
  if (!sys.binding) throw PreconditionError("system is not bound to a group");
  const FiniteGroup& b = *sys.binding->group;
  auto dec = decompose_abelian_p_group(b, p);

  const IntMatrix a = exponent_matrix(sys);
  const auto cls = classify(a);
  if (!cls.nonsingular) throw PreconditionError("system is singular (exponent-sum rows are rationally dependent)");
  auto snf = smith_normal_form(a);
  const std::size_t m = a.rows(), n = a.cols();
  const unsigned v = m ? valuation(snf.d(m - 1, m - 1), p) : 0;

  AbelianSolution sol;
  sol.p = p;
  sol.raise = v;
  sol.decomposition = dec;
  std::vector<std::uint64_t> orders;
  for (unsigned k : dec.exponents) {
    sol.exponents.push_back(k + v);
    orders.push_back(static_cast<std::uint64_t>(ipow(static_cast<std::int64_t>(p), k + v)));
  }
  sol.extension = abelian_group(orders, table_cap);

  auto encode = [&](const std::vector<std::uint64_t>& digits) {
    std::size_t out = 0, radix = 1;
    for (std::size_t i = 0; i < orders.size(); ++i) {
      out += (digits[i] % orders[i]) * radix;
      radix *= orders[i];
    }
    return static_cast<Element>(out);
  };
  const std::uint64_t scale = static_cast<std::uint64_t>(ipow(static_cast<std::int64_t>(p), v));
  sol.embedding.image.resize(b.order());
  for (Element x = 0; x < b.order(); ++x) {
    auto d = dec.coordinates[x];
    for (auto& e : d) e *= scale;
    sol.embedding.image[x] = encode(d);
  }
  for (Element c : sys.binding->values) sol.coefficients.push_back(sol.embedding(c));

  // per factor: solve A x = -c (mod p^{k+v}) through U A V = D
  std::vector<std::vector<std::uint64_t>> var_digits(n, std::vector<std::uint64_t>(orders.size(), 0));
  for (std::size_t f = 0; f < orders.size(); ++f) {
    const Integer mod = orders[f];
    std::vector<Integer> c(m, 0);
    for (std::size_t j = 0; j < m; ++j)
      for (const auto& l : sys.words[j])
        if (!l.is_var()) {
          const Element ce = sys.binding->values[l.id];
          c[j] += Integer(l.sign) * Integer(dec.coordinates[ce][f]) * scale;
        }
    std::vector<Integer> y(n, 0);
    for (std::size_t i = 0; i < m; ++i) {
      Integer r = 0;
      for (std::size_t j = 0; j < m; ++j) r -= snf.u(i, j) * c[j];
      const Integer& di = snf.d(i, i);
      const unsigned ai = valuation(di, p);
      Integer pa = 1;
      for (unsigned t = 0; t < ai; ++t) pa *= p;
      if (r % pa != 0) throw Error("internal: abelian solve divisibility failed");
      Integer unit = (di / pa) % mod;
      if (unit < 0) unit += mod;
      // unit is prime to p, hence invertible mod p^{k+v}
      const Integer inv = mod_inverse(static_cast<std::int64_t>(unit), static_cast<std::int64_t>(orders[f]));
      y[i] = ((r / pa) * inv) % mod;
    }
    for (std::size_t i = 0; i < n; ++i) {
      Integer xi = 0;
      for (std::size_t k = 0; k < n; ++k) xi += snf.v(i, k) * y[k];
      xi %= mod;
      if (xi < 0) xi += mod;
      var_digits[i][f] = static_cast<std::uint64_t>(xi);
    }
  }
  for (std::size_t i = 0; i < n; ++i) sol.assignment.push_back(encode(var_digits[i]));

  for (const auto& w : sys.words)
    if (evaluate(sol.extension, w, sol.coefficients, sol.assignment) != 0)
      throw Error("internal: abelian solution failed verification");
  return sol;
}

}  // namespace groupeq
