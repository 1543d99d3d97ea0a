#include <groupeq/constructions.hpp>
#include <groupeq/isomorphism.hpp>
#include <groupeq/structure.hpp>
#include <groupeq/wreath.hpp>

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace groupeq;

namespace {

std::shared_ptr<const FiniteGroup> shared(FiniteGroup g) { return std::make_shared<const FiniteGroup>(std::move(g)); }

std::shared_ptr<const WreathGroup> c2_wr_c2() { return std::make_shared<const WreathGroup>(shared(cyclic(2)), shared(cyclic(2))); }

// Oracle: every assignment satisfying the system, by exhaustive enumeration.
std::set<std::vector<Element>> all_solutions(const EquationSystem& sys) {
  std::set<std::vector<Element>> out;
  const auto n = static_cast<Element>(sys.binding->group->order());
  std::vector<Element> vals(sys.num_variables(), 0);
  while (true) {
    if (satisfies(sys, vals)) out.insert(vals);
    std::size_t k = vals.size();
    while (k > 0 && ++vals[k - 1] == n) vals[--k] = 0;
    if (k == 0) return out;
  }
}

EquationSystem bound(const std::string& text, const WreathGroup& w, const std::vector<Element>& coeffs) {
  auto sys = parse_system(text);
  std::vector<std::pair<std::string, std::string>> a;
  for (std::size_t i = 0; i < coeffs.size(); ++i) a.emplace_back(sys.alphabet.coefficients[i], w.group().element_name(coeffs[i]));
  return bind_system(sys, w.group_ptr(), a);
}

}  // namespace

TEST(Wreath, C2WrC2IsDihedral) {
  auto w = c2_wr_c2();
  EXPECT_EQ(w->group().order(), 8u);
  EXPECT_TRUE(isomorphic(w->group(), dihedral(4)).has_value());
}

TEST(Wreath, OrderOfCounterexampleGroup) {
  auto w = wreath_product(cyclic(2), direct_product(cyclic(2), cyclic(3)));
  EXPECT_EQ(w.group().order(), 384u);
  EXPECT_TRUE(is_metabelian(w.group()));
}

TEST(Wreath, TrivialTop) {
  auto w = wreath_product(symmetric_group(3), FiniteGroup::trivial());
  EXPECT_TRUE(isomorphic(w.group(), symmetric_group(3)).has_value());
}

TEST(Wreath, CapsAreEnforced) {
  EXPECT_THROW(wreath_product(cyclic(2), direct_product(cyclic(2), cyclic(5))), CapExceeded);
  EXPECT_THROW(wreath_product(cyclic(2), cyclic(30), WreathCaps{1'000'000, 1'000'000}), CapExceeded);
}

TEST(Wreath, CoordinateActionLaw) {
  for (auto w : {wreath_product(cyclic(2), cyclic(2)), wreath_product(cyclic(3), cyclic(2)),
                 wreath_product(cyclic(2), direct_product(cyclic(2), cyclic(3))), wreath_product(cyclic(2), symmetric_group(3))}) {
    const auto& g = w.group();
    const auto& b = w.top();
    for (Element x = 0; x < g.order(); ++x)
      for (Element d = 0; d < b.order(); ++d) {
        const Element xd = g.conj(x, w.top_element(d));
        for (Element beta = 0; beta < b.order(); ++beta)
          ASSERT_EQ(w.coordinate(xd, beta), w.coordinate(x, b.mul(beta, b.inv(d))));
      }
  }
}

TEST(Wreath, AccessorsRoundTrip) {
  auto w = wreath_product(cyclic(3), cyclic(2));
  for (Element x = 0; x < w.group().order(); ++x) EXPECT_EQ(w.make(w.coordinates(x), w.top_component(x)), x);
  EXPECT_TRUE(is_homomorphism(w.group(), w.top(), w.projection()));
  EXPECT_EQ(w.coordinate(w.base_delta(1, 2), 1), 2u);
  EXPECT_EQ(w.coordinate(w.base_delta(1, 2), 0), 0u);
}

TEST(KaloujnineKrasner, Examples) {
  auto c4 = cyclic(4);
  auto kk = kaloujnine_krasner(c4, closure(c4, {2}));
  EXPECT_EQ(kk.wreath->group().order(), 8u);
  auto s3 = symmetric_group(3);
  auto kk2 = kaloujnine_krasner(s3, commutator_subgroup(s3));
  EXPECT_EQ(kk2.wreath->group().order(), 18u);
  auto kk3 = kaloujnine_krasner(s3, whole_group(s3));
  EXPECT_EQ(kk3.wreath->group().order(), 6u);
  EXPECT_TRUE(isomorphic(kk3.wreath->group(), s3).has_value());
}

TEST(KaloujnineKrasner, InjectiveOnPool) {
  for (const auto& g : {dihedral(4), dicyclic(2), alternating_group(4), affine_group_over_prime_field(5), cyclic(9)}) {
    for (const auto& n : normal_subgroups(g)) {
      const std::size_t bs = g.order() / n.order();
      double approx = static_cast<double>(bs);
      for (std::size_t i = 0; i < bs; ++i) approx *= static_cast<double>(n.order());
      if (approx > kDefaultTableCap) continue;
      auto kk = kaloujnine_krasner(g, n);
      EXPECT_TRUE(is_homomorphism(g, kk.wreath->group(), kk.embedding));
      EXPECT_TRUE(is_injective(kk.embedding, kk.wreath->group().order()));
      for (Element x = 0; x < g.order(); ++x) EXPECT_EQ(kk.transversal[kk.wreath->top_component(kk.embedding(x))] <= x, true);
    }
  }
}

TEST(Normalize, AlreadyNormalized) {
  auto w = c2_wr_c2();
  const Element c = w->base_delta(0, 1);
  auto sys = bound("vars: x\ncoeffs: c\neq: x c\n", *w, {c});
  auto ws = normalize_top_component(sys, w, 2);
  EXPECT_EQ(ws.shifts, std::vector<Element>{0});
  ASSERT_EQ(ws.words.size(), 1u);
  EXPECT_EQ(ws.words[0], (std::vector<WreathLetter>{{WreathLetter::Kind::Var, 0, 1, 0, 0}, {WreathLetter::Kind::Base, 0, 1, 0, c}}));
}

TEST(Normalize, TopComponentIsShiftedAway) {
  auto w = c2_wr_c2();
  const Element c = w->group().mul(w->base_delta(1, 1), w->top_element(1));
  auto sys = bound("vars: x\ncoeffs: c\neq: x c\n", *w, {c});
  auto ws = normalize_top_component(sys, w, 2);
  EXPECT_EQ(ws.shifts, std::vector<Element>{1});
  for (const auto& l : ws.words[0])
    if (l.kind == WreathLetter::Kind::Base) EXPECT_TRUE(w->in_base(l.value));
  // every base x' solving the normalized system gives x = x' t solving the original
  for (Element xp = 0; xp < w->group().order(); ++xp) {
    if (!w->in_base(xp)) continue;
    const bool norm = evaluate(ws, ws.words[0], {xp}) == 0;
    const bool orig = satisfies(sys, {w->group().mul(xp, w->top_element(1))});
    EXPECT_EQ(norm, orig);
  }
}

TEST(Normalize, SquareIsNot2Nonsingular) {
  auto w = c2_wr_c2();
  auto sys = bound("vars: x\ncoeffs: c\neq: x^2 c\n", *w, {w->top_element(1)});
  EXPECT_THROW(normalize_top_component(sys, w, 2), PreconditionError);
}

TEST(CoordinateTransform, SingleEquation) {
  auto w = c2_wr_c2();
  const Element c = w->base_delta(1, 1);
  auto sys = bound("vars: x\ncoeffs: c\neq: x = c\n", *w, {c});
  auto ws = normalize_top_component(sys, w, 2);
  auto ts = lemma2_transform(ws);
  ASSERT_EQ(ts.system.words.size(), 2u);
  EXPECT_EQ(ts.system.num_variables(), 2u);
  auto sols = all_solutions(ts.system);
  ASSERT_EQ(sols.size(), 1u);
  auto x = reconstruct_solution(ws, ts, *sols.begin());
  EXPECT_EQ(x, std::vector<Element>{c});
}

TEST(CoordinateTransform, ConjugateProduct) {
  auto w = c2_wr_c2();
  const Element c = w->base_delta(0, 1);
  auto sys = bound("vars: x\ncoeffs: c t\neq: x x^t c\n", *w, {c, w->top_element(1)});
  // exponent sum 2: not 2-nonsingular, so shifts are supplied explicitly
  EXPECT_THROW(normalize_top_component(sys, w, 2), PreconditionError);
  auto ws = normalize_with_shifts(sys, w, {0});
  auto ts = lemma2_transform(ws);
  // f_{1,b} = y_{b} y_{b t^-1} [c]_b
  EXPECT_EQ(write_system(ts.system),
            "vars: y_x_0 y_x_1\ncoeffs: h1\nbind: base h1=g\neq: y_x_0 y_x_1 h1\neq: y_x_1 y_x_0\n");
  std::set<std::vector<Element>> recon;
  for (const auto& shifts : top_image_solutions(sys, *w)) {
    auto wsb = normalize_with_shifts(sys, w, shifts);
    auto tsb = lemma2_transform(wsb);
    for (const auto& s : all_solutions(tsb.system)) recon.insert(reconstruct_solution(wsb, tsb, s));
  }
  EXPECT_EQ(recon, all_solutions(sys));
  auto rx = extract_rows(ws, ts, 2);
  EXPECT_TRUE(rx.translation_law);
  ASSERT_EQ(rx.first_rows.rows.size(), 1u);
  EXPECT_EQ(format_element(rx.first_rows.rows[0][0]), "1 + x1");
}

TEST(CoordinateTransform, EmptySystem) {
  auto w = c2_wr_c2();
  auto sys = bound("vars:\ncoeffs:\n", *w, {});
  auto ws = normalize_top_component(sys, w, 2);
  auto ts = lemma2_transform(ws);
  EXPECT_TRUE(ts.system.words.empty());
  EXPECT_TRUE(reconstruct_solution(ws, ts, {}).empty());
}

TEST(ExtractRows, SingleVariable) {
  auto w = c2_wr_c2();
  auto sys = bound("vars: x\ncoeffs:\neq: x\n", *w, {});
  auto ws = normalize_top_component(sys, w, 2);
  auto rx = extract_rows(ws, lemma2_transform(ws), 2);
  EXPECT_EQ(format_element(rx.first_rows.rows[0][0]), "1");
}

TEST(ExtractRows, WorkedExampleLifted) {
  auto w = std::make_shared<const WreathGroup>(shared(cyclic(3)), shared(cyclic(3)));
  std::mt19937 rng(4);
  std::uniform_int_distribution<Element> pick(0, static_cast<Element>(w->group().order() - 1));
  for (int trial = 0; trial < 5; ++trial) {
    auto sys = bound("vars: x y z\ncoeffs: g1 g2 g3\neq: [x,y] x^2 g1 y^-3\neq: [y,z] z\neq: x g2 y g3 z\n", *w,
                     {pick(rng), pick(rng), pick(rng)});
    for (std::uint64_t p : {3}) {
      auto ws = normalize_top_component(sys, w, p);
      auto ts = lemma2_transform(ws);
      auto rx = extract_rows(ws, ts, p);
      EXPECT_TRUE(rx.translation_law);
      EXPECT_TRUE(rx.augmentation_matches);
      EXPECT_EQ(rx.augmentation, (IntMatrix{{2, 0, 0}, {0, 0, 1}, {1, 1, 1}}));
      EXPECT_TRUE(certify_row_independence(rx.first_rows).certified);
      EXPECT_TRUE(classify(ts.system).p_nonsingular(p));
    }
  }
}

TEST(CoordinateTransform, RoundTripOnRandomSystems) {
  auto w = c2_wr_c2();
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> len(1, 6), kind(0, 3), sign(0, 1), neq(1, 2), nvar(1, 2);
  std::uniform_int_distribution<Element> pick(0, 7);
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 60; ++trial) {
    EquationSystem sys;
    const int nv = nvar(rng);
    for (int i = 0; i < nv; ++i) sys.alphabet.variables.push_back(i ? "y" : "x");
    sys.alphabet.coefficients = {"c", "d"};
    for (int j = neq(rng); j > 0; --j) {
      Word wd;
      for (int k = len(rng); k > 0; --k) {
        int t = kind(rng);
        wd.push_back(t < 2 ? Letter::var(t % nv, sign(rng) ? 1 : -1) : Letter::coeff(t - 2, sign(rng) ? 1 : -1));
      }
      sys.words.push_back(wd);
    }
    sys = bind_system(sys, w->group_ptr(), {{"c", w->group().element_name(pick(rng))}, {"d", w->group().element_name(pick(rng))}});
    if (!classify(sys).p_nonsingular(2)) continue;
    ++checked;
    std::set<std::vector<Element>> recon;
    for (const auto& shifts : top_image_solutions(sys, *w)) {
      auto ws = normalize_with_shifts(sys, w, shifts);
      auto ts = lemma2_transform(ws);
      auto rx = extract_rows(ws, ts, 2);
      EXPECT_TRUE(rx.translation_law);
      EXPECT_TRUE(rx.augmentation_matches);
      EXPECT_TRUE(certify_row_independence(rx.first_rows).certified);
      for (const auto& s : all_solutions(ts.system)) recon.insert(reconstruct_solution(ws, ts, s));
    }
    EXPECT_EQ(recon, all_solutions(sys)) << write_system(sys);
  }
  EXPECT_GE(checked, 30);
}

TEST(CoordinateTransform, ReconstructRejectsNonSolutions) {
  auto w = c2_wr_c2();
  auto sys = bound("vars: x\ncoeffs: c\neq: x c\n", *w, {w->base_delta(0, 1)});
  auto ws = normalize_top_component(sys, w, 2);
  auto ts = lemma2_transform(ws);
  EXPECT_THROW(reconstruct_solution(ws, ts, {0, 0}), PreconditionError);
}
