#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "groupeq/abelian_solver.hpp"
#include "groupeq/algebra.hpp"
#include "groupeq/constructions.hpp"
#include "groupeq/error.hpp"
#include "groupeq/finite_group.hpp"
#include "groupeq/structure.hpp"
#include "groupeq/subgroup.hpp"
#include "groupeq/system.hpp"

namespace groupeq {

inline constexpr std::size_t kDefaultWreathCap = 1'000'000;

struct WreathCaps {
  std::size_t wreath = kDefaultWreathCap;  // bound on |H|^|B| |B|
  std::size_t table = kDefaultTableCap;    // bound on the realized Cayley table
};

/// The wreath product H wr B = (prod_{b in B} H_b) x| B, realized as a FiniteGroup.
///
/// Element (f, b) with f: B -> H is stored at code(f) + |H|^|B| * b, where code(f) is f read
/// as base-|H| digits, f(beta) at position beta. The product is
///     (f, b1)(g, b2) = (beta -> f(beta) g(beta b1), b1 b2),
/// so B acts on the base by ((a_beta)_beta)^{b1} = (a_{beta b1^-1})_beta.
class WreathGroup {
 public:
  WreathGroup(std::shared_ptr<const FiniteGroup> base, std::shared_ptr<const FiniteGroup> top, const WreathCaps& caps = {})
      : base_(std::move(base)), top_(std::move(top)) {
    const std::size_t h = base_->order(), nb = top_->order();
    double approx = static_cast<double>(nb);
    for (std::size_t i = 0; i < nb; ++i) approx *= static_cast<double>(h);
    if (approx > static_cast<double>(caps.wreath))
      throw CapExceeded("wreath product order exceeds the wreath cap " + std::to_string(caps.wreath));
    base_size_ = 1;
    for (std::size_t i = 0; i < nb; ++i) base_size_ *= h;
    const std::size_t order = base_size_ * nb;
    if (order > caps.table)
      throw CapExceeded("wreath product of order " + std::to_string(order) + " exceeds the table cap " +
                        std::to_string(caps.table));

    std::vector<std::string> names(order);
    for (Element x = 0; x < order; ++x) {
      if (x == 0) {
        names[x] = "1";
        continue;
      }
      auto f = coordinates(x);
      std::string s = "(";
      for (std::size_t i = 0; i < f.size(); ++i) s += (i ? "," : "") + base_->element_name(f[i]);
      names[x] = s + ";" + top_->element_name(top_component(x)) + ")";
    }
    std::vector<Element> fa(nb), fb(nb), out(nb);
    group_ = std::make_shared<const FiniteGroup>(FiniteGroup::from_product(
        order,
        [&](Element x, Element y) {
          decode(x, fa);
          decode(y, fb);
          const Element b1 = top_component(x);
          for (Element beta = 0; beta < nb; ++beta) out[beta] = base_->mul(fa[beta], fb[top_->mul(beta, b1)]);
          return make(out, top_->mul(b1, top_component(y)));
        },
        std::move(names), "(" + base_->name() + "wr" + top_->name() + ")", caps.table));
  }

  const FiniteGroup& group() const noexcept { return *group_; }
  std::shared_ptr<const FiniteGroup> group_ptr() const noexcept { return group_; }
  const FiniteGroup& base() const noexcept { return *base_; }
  const FiniteGroup& top() const noexcept { return *top_; }
  std::shared_ptr<const FiniteGroup> base_ptr() const noexcept { return base_; }
  std::shared_ptr<const FiniteGroup> top_ptr() const noexcept { return top_; }
  std::size_t base_size() const noexcept { return base_size_; }

  Element make(const std::vector<Element>& f, Element b) const {
    std::size_t code = 0;
    for (std::size_t i = f.size(); i-- > 0;) code = code * base_->order() + f[i];
    return static_cast<Element>(code + base_size_ * b);
  }
  std::vector<Element> coordinates(Element x) const {
    std::vector<Element> f(top_->order());
    decode(x, f);
    return f;
  }
  /// [x]_beta
  Element coordinate(Element x, Element beta) const {
    std::size_t code = x % base_size_;
    for (Element i = 0; i < beta; ++i) code /= base_->order();
    return static_cast<Element>(code % base_->order());
  }
  Element top_component(Element x) const { return static_cast<Element>(x / base_size_); }
  bool in_base(Element x) const { return top_component(x) == 0; }
  /// (1, b)
  Element top_element(Element b) const { return static_cast<Element>(base_size_ * b); }
  /// The base element equal to h at beta and 1 elsewhere.
  Element base_delta(Element beta, Element h) const {
    std::vector<Element> f(top_->order(), 0);
    f[beta] = h;
    return make(f, 0);
  }
  /// x = (f, b) -> b
  Homomorphism projection() const {
    Homomorphism p;
    p.image.resize(group_->order());
    for (Element x = 0; x < group_->order(); ++x) p.image[x] = top_component(x);
    return p;
  }

 private:
  void decode(Element x, std::vector<Element>& f) const {
    std::size_t code = x % base_size_;
    for (auto& v : f) {
      v = static_cast<Element>(code % base_->order());
      code /= base_->order();
    }
  }

  std::shared_ptr<const FiniteGroup> base_, top_, group_;
  std::size_t base_size_ = 1;
};

inline WreathGroup wreath_product(const FiniteGroup& h, const FiniteGroup& b, const WreathCaps& caps = {}) {
  return WreathGroup(std::make_shared<const FiniteGroup>(h), std::make_shared<const FiniteGroup>(b), caps);
}

// ---- Kaloujnine-Krasner ----

struct KaloujnineKrasner {
  std::shared_ptr<const WreathGroup> wreath;  // N wr G/N
  Homomorphism embedding;                     // G -> wreath
  std::vector<Element> transversal;           // least element of each coset
};

/// g -> (f_g, gN) with f_g(beta) = t(beta) g t(beta gN)^-1 in N, t the least-element transversal.
inline KaloujnineKrasner kaloujnine_krasner(const FiniteGroup& g, const Subgroup& n, const WreathCaps& caps = {}) {
  auto q = quotient(g, n);
  auto sub = as_group(g, n, g.name().empty() ? "N" : g.name() + "_N");
  std::vector<Element> local(g.order(), 0);
  for (Element i = 0; i < n.elements.size(); ++i) local[n.elements[i]] = i;
  KaloujnineKrasner kk;
  q.group.set_name(g.name().empty() ? "Q" : g.name() + "_Q");
  kk.wreath = std::make_shared<const WreathGroup>(std::make_shared<const FiniteGroup>(std::move(sub.group)),
                                                  std::make_shared<const FiniteGroup>(q.group), caps);
  kk.transversal.assign(q.group.order(), ~Element{0});
  for (Element x = g.order(); x-- > 0;) kk.transversal[q.projection(x)] = x;
  kk.embedding.image.resize(g.order());
  const std::size_t nb = q.group.order();
  std::vector<Element> f(nb);
  for (Element x = 0; x < g.order(); ++x) {
    const Element px = q.projection(x);
    for (Element beta = 0; beta < nb; ++beta) {
      const Element v = g.mul(g.mul(kk.transversal[beta], x), g.inv(kk.transversal[q.group.mul(beta, px)]));
      if (!n.contains(v)) throw Error("internal: transversal cocycle left N");
      f[beta] = local[v];
    }
    kk.embedding.image[x] = kk.wreath->make(f, px);
  }
  if (!is_homomorphism(g, kk.wreath->group(), kk.embedding) || !is_injective(kk.embedding, kk.wreath->group().order()))
    throw Error("internal: Kaloujnine-Krasner map failed verification");
  return kk;
}

// ---- systems over a wreath product ----

/// A letter of a normalized word: either a variable x_i^{sign} conjugated by a top element d,
/// i.e. d^-1 x_i^{sign} d, or a concrete base element of the wreath product.
struct WreathLetter {
  enum class Kind { Var, Base };
  Kind kind = Kind::Var;
  std::size_t var = 0;
  int sign = 1;
  Element conjugator = 0;  // d in B
  Element value = 0;       // base element of the wreath group

  friend bool operator==(const WreathLetter&, const WreathLetter&) = default;
};

/// Words whose coefficients lie in the base C, in variables ranging over C. A solution x' of
/// this system gives the solution x_i = x'_i (1, shift_i) of the original system.
struct WreathSystem {
  std::shared_ptr<const WreathGroup> wreath;
  std::vector<std::string> variables;
  std::vector<std::vector<WreathLetter>> words;
  std::vector<Element> shifts;  // beta_i in B
};

inline Element evaluate(const WreathSystem& ws, const std::vector<WreathLetter>& w, const std::vector<Element>& vars) {
  const auto& g = ws.wreath->group();
  Element acc = 0;
  for (const auto& l : w) {
    if (l.kind == WreathLetter::Kind::Base) {
      acc = g.mul(acc, l.value);
    } else {
      Element x = l.sign > 0 ? vars[l.var] : g.inv(vars[l.var]);
      acc = g.mul(acc, g.conj(x, ws.wreath->top_element(l.conjugator)));
    }
  }
  return acc;
}

namespace detail {

inline const WreathGroup& require_wreath_binding(const EquationSystem& sys, const WreathGroup& w) {
  if (!sys.binding) throw PreconditionError("system is not bound to a group");
  if (sys.binding->group.get() != &w.group() && !(sys.binding->group->table() == w.group().table()))
    throw PreconditionError("system is not bound to this wreath product");
  return w;
}

}  // namespace detail

/// The image of the system under the projection to the top group B.
inline EquationSystem top_image(const EquationSystem& sys, const WreathGroup& w) {
  detail::require_wreath_binding(sys, w);
  EquationSystem img = sys;
  img.bind_spec.reset();
  img.binding = Binding{w.top_ptr(), {}};
  for (Element c : sys.binding->values) img.binding->values.push_back(w.top_component(c));
  return img;
}

/// Substitutes x_i = x'_i (1, shift_i) and pushes every top element to the right; the
/// shifts must solve the top image exactly.
inline WreathSystem normalize_with_shifts(const EquationSystem& sys, std::shared_ptr<const WreathGroup> w,
                                          const std::vector<Element>& shifts) {
  detail::require_wreath_binding(sys, *w);
  if (shifts.size() != sys.num_variables()) throw PreconditionError("one shift per variable required");
  const auto& top = w->top();
  const auto& g = w->group();
  if (!satisfies(top_image(sys, *w), shifts)) throw PreconditionError("shifts do not solve the top image of the system");
  WreathSystem ws;
  ws.wreath = w;
  ws.variables = sys.alphabet.variables;
  ws.shifts = shifts;
  for (const auto& word : sys.words) {
    std::vector<WreathLetter> out;
    Element tau = 0;  // accumulated top element, in B
    // tau z = z^{tau^-1} tau for base z
    auto push_base = [&](Element z) {
      if (z == 0) return;
      out.push_back({WreathLetter::Kind::Base, 0, 1, 0, g.conj(z, w->top_element(top.inv(tau)))});
    };
    for (const auto& l : word) {
      if (l.is_var()) {
        const Element beta = shifts[l.id];
        if (l.sign > 0) {
          out.push_back({WreathLetter::Kind::Var, l.id, 1, top.inv(tau), 0});
          tau = top.mul(tau, beta);
        } else {
          tau = top.mul(tau, top.inv(beta));
          out.push_back({WreathLetter::Kind::Var, l.id, -1, top.inv(tau), 0});
        }
      } else {
        Element c = sys.binding->values[l.id];
        if (l.sign < 0) c = g.inv(c);
        const Element b = w->top_component(c);
        push_base(g.mul(c, w->top_element(top.inv(b))));
        tau = top.mul(tau, b);
      }
    }
    if (tau != 0) throw Error("internal: top component did not cancel");
    ws.words.push_back(std::move(out));
  }
  return ws;
}

/// Solves the top image over B (an abelian p-group) and normalizes; the system must be
/// p-nonsingular, in which case the solution exists in B itself.
inline WreathSystem normalize_top_component(const EquationSystem& sys, std::shared_ptr<const WreathGroup> w,
                                            std::uint64_t p) {
  detail::require_wreath_binding(sys, *w);
  if (!is_abelian(w->top())) throw PreconditionError("top group is not abelian");
  if (!classify(sys).p_nonsingular(p))
    throw PreconditionError("system is not " + std::to_string(p) + "-nonsingular");
  auto sol = solve_abelian_p_system(top_image(sys, *w), p);
  if (sol.raise != 0) throw Error("internal: p-nonsingular top image needed an extension");
  // the extension equals B with an identical coordinate system; map back through the embedding
  std::vector<Element> back(sol.extension.order(), 0);
  for (Element x = 0; x < w->top().order(); ++x) back[sol.embedding(x)] = x;
  std::vector<Element> shifts;
  for (Element v : sol.assignment) shifts.push_back(back[v]);
  return normalize_with_shifts(sys, std::move(w), shifts);
}

/// All solutions of the top image in B, by exhaustive search.
inline std::vector<std::vector<Element>> top_image_solutions(const EquationSystem& sys, const WreathGroup& w) {
  auto img = top_image(sys, w);
  std::vector<std::vector<Element>> out;
  std::vector<Element> vals(sys.num_variables(), 0);
  const auto nb = static_cast<Element>(w.top().order());
  while (true) {
    if (satisfies(img, vals)) out.push_back(vals);
    std::size_t k = vals.size();
    while (k > 0 && ++vals[k - 1] == nb) vals[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

// ---- coordinate-wise transformation ----

/// Variables y_{i,b} (index i |B| + b) and words f_{j,b} (index j |B| + b), as a system over H.
struct TransformedSystem {
  EquationSystem system;  // bound to H
  std::size_t num_variables = 0;
  std::size_t num_equations = 0;
  std::size_t top_order = 0;

  std::size_t var_index(std::size_t i, Element b) const { return i * top_order + b; }
  std::size_t word_index(std::size_t j, Element b) const { return j * top_order + b; }
};

/// f_{j,b}: coefficient c -> [c]_b, variable occurrence (x_i^{sign})^{d} -> y_{i, b d^-1}^{sign}.
inline TransformedSystem lemma2_transform(const WreathSystem& ws) {
  const auto& w = *ws.wreath;
  const auto& top = w.top();
  const auto& h = w.base();
  TransformedSystem ts;
  ts.num_variables = ws.variables.size();
  ts.num_equations = ws.words.size();
  ts.top_order = top.order();
  auto& sys = ts.system;
  for (std::size_t i = 0; i < ts.num_variables; ++i)
    for (Element b = 0; b < top.order(); ++b) sys.alphabet.variables.push_back("y_" + ws.variables[i] + "_" + std::to_string(b));
  // coefficient symbol per H element that occurs, in element order
  std::vector<bool> used(h.order(), false);
  for (const auto& word : ws.words)
    for (const auto& l : word)
      if (l.kind == WreathLetter::Kind::Base)
        for (Element b = 0; b < top.order(); ++b) used[w.coordinate(l.value, b)] = true;
  std::vector<std::size_t> coeff_id(h.order(), 0);
  std::vector<std::pair<std::string, std::string>> assignments;
  std::vector<Element> values;
  for (Element e = 1; e < h.order(); ++e)
    if (used[e]) {
      coeff_id[e] = sys.alphabet.coefficients.size();
      sys.alphabet.coefficients.push_back("h" + std::to_string(e));
      assignments.emplace_back("h" + std::to_string(e), h.element_name(e));
      values.push_back(e);
    }
  for (const auto& word : ws.words)
    for (Element b = 0; b < top.order(); ++b) {
      Word f;
      for (const auto& l : word) {
        if (l.kind == WreathLetter::Kind::Base) {
          const Element hv = w.coordinate(l.value, b);
          if (hv != 0) f.push_back(Letter::coeff(coeff_id[hv]));
        } else {
          f.push_back(Letter::var(ts.var_index(l.var, top.mul(b, top.inv(l.conjugator))), l.sign));
        }
      }
      sys.words.push_back(std::move(f));
    }
  sys.bind_spec = BindSpec{"base", assignments};
  sys.binding = Binding{w.base_ptr(), values};
  return ts;
}

// ---- the row calculus over Z_p[B] ----

struct RowExtraction {
  AbelianShape shape;                                       // B as C_{p^k1} x ...
  std::vector<Monomial> top_monomials;                      // element of B -> monomial
  std::vector<std::vector<std::vector<AlgebraElement>>> m;  // m[j][b] is the row m_{j,b}
  RowFamily first_rows;                                     // m_{j,1}
  bool translation_law = false;                             // m_{j,b} = b m_{j,1} for all j, b
  IntMatrix augmentation;                                   // of the rows m_{j,1}, mod p
  IntMatrix exponent_rows_mod_p;                            // exponent sums of the normalized words, mod p
  bool augmentation_matches = false;
};

/// Row m_{j,b} has i-th entry sum_beta n_{i,beta} beta, n_{i,beta} the exponent sum of y_{i,beta}
/// in f_{j,b} mod p. The B-coordinates come from a cyclic decomposition of the abelian p-group B.
inline RowExtraction extract_rows(const WreathSystem& ws, const TransformedSystem& ts, std::uint64_t p) {
  const auto& top = ws.wreath->top();
  auto dec = decompose_abelian_p_group(top, p);
  RowExtraction rx;
  rx.shape = AbelianGroupSpec{p, dec.exponents, 0}.shape();
  for (Element b = 0; b < top.order(); ++b) {
    Monomial mono = Monomial::identity(rx.shape);
    for (std::size_t i = 0; i < dec.exponents.size(); ++i) mono.torsion[i] = dec.coordinates[b][i];
    rx.top_monomials.push_back(mono);
  }
  const PrimeField field(p);
  const std::size_t nv = ts.num_variables, ne = ts.num_equations, nb = ts.top_order;
  rx.m.assign(ne, std::vector<std::vector<AlgebraElement>>(nb, std::vector<AlgebraElement>(nv, AlgebraElement::zero(rx.shape, field))));
  for (std::size_t j = 0; j < ne; ++j)
    for (Element b = 0; b < nb; ++b) {
      const Word& f = ts.system.words[ts.word_index(j, b)];
      for (std::size_t i = 0; i < nv; ++i)
        for (Element beta = 0; beta < nb; ++beta) {
          const long long n = exponent_sum(f, ts.var_index(i, beta));
          rx.m[j][b][i].add_term(rx.top_monomials[beta], field.from_int(n));
        }
    }
  rx.translation_law = true;
  for (std::size_t j = 0; j < ne; ++j) {
    rx.first_rows.rows.push_back(rx.m[j][0]);
    for (Element b = 0; b < nb; ++b) {
      const auto bm = AlgebraElement::monomial(rx.shape, field, rx.top_monomials[b], 1);
      for (std::size_t i = 0; i < nv; ++i) rx.translation_law = rx.translation_law && rx.m[j][b][i] == bm * rx.m[j][0][i];
    }
  }
  rx.augmentation = augmentation_matrix(rx.first_rows.rows, nv);
  rx.exponent_rows_mod_p = IntMatrix(ne, nv);
  for (std::size_t j = 0; j < ne; ++j)
    for (const auto& l : ws.words[j])
      if (l.kind == WreathLetter::Kind::Var) rx.exponent_rows_mod_p(j, l.var) += l.sign;
  for (std::size_t j = 0; j < ne; ++j)
    for (std::size_t i = 0; i < nv; ++i) rx.exponent_rows_mod_p(j, i) = floor_mod(rx.exponent_rows_mod_p(j, i), static_cast<std::int64_t>(p));
  rx.augmentation_matches = rx.augmentation == rx.exponent_rows_mod_p;
  return rx;
}

/// x_i = ((y_{i,b})_b, shift_i); verified against both the pointwise and the normalized system.
inline std::vector<Element> reconstruct_solution(const WreathSystem& ws, const TransformedSystem& ts,
                                                 const std::vector<Element>& pointwise) {
  if (pointwise.size() != ts.system.num_variables()) throw PreconditionError("pointwise assignment has the wrong size");
  if (!satisfies(ts.system, pointwise)) throw PreconditionError("pointwise assignment does not satisfy the transformed system");
  const auto& w = *ws.wreath;
  std::vector<Element> base_vals, out;
  for (std::size_t i = 0; i < ts.num_variables; ++i) {
    std::vector<Element> f(ts.top_order);
    for (Element b = 0; b < ts.top_order; ++b) f[b] = pointwise[ts.var_index(i, b)];
    base_vals.push_back(w.make(f, 0));
    out.push_back(w.make(f, ws.shifts[i]));
  }
  for (const auto& word : ws.words)
    if (evaluate(ws, word, base_vals) != 0) throw Error("internal: reconstruction fails the normalized system");
  return out;
}

}  // namespace groupeq
