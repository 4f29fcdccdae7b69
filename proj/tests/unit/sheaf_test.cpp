#include <gtest/gtest.h>

#include "catdel/error.hpp"
#include "catdel/generators.hpp"
#include "catdel/io.hpp"
#include "catdel/sheaf.hpp"
#include "catdel/syntax.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace catdel;
using testing_support::event_fixture;
using testing_support::fixture;
using testing_support::labels;
using testing_support::sheaf_fixture;

namespace {

using Labels = std::set<std::string>;

// D = X x I with (a,i) R (b,j) iff a R_X b and i = j.
FrameMap constant_domain(const KripkeFrame& base, std::size_t individuals) {
  const FiniteSet idx = numbered_set("I", individuals, "i");
  const CartesianProduct d = cartesian_product(base.carrier(), idx, "D");
  std::vector<Rel> rels;
  for (const Rel& r : base.relations())
    rels.push_back(Rel::from_predicate(d.carrier, d.carrier, [&](std::size_t u, std::size_t v) {
      return r.contains(u / individuals, v / individuals) && u % individuals == v % individuals;
    }));
  return FrameMap(KripkeFrame(d.carrier, base.agents(), rels), base, d.p1);
}

Labels interp(const SheafModel& m, const std::string& f, const EventRegistry& reg = {}) {
  return labels(interp_formula(m, parse_in_context(f), reg));
}

}  // namespace

TEST(Sheaf, IdentityIsSheaf) {
  Rng rng(91);
  const KripkeFrame f = random_frame(rng, numbered_set("X", 3, "x"), agent_names(2));
  const SheafDiagnostics d = is_kripke_sheaf(FrameMap::identity(f));
  EXPECT_TRUE(d.ok());
  EXPECT_TRUE(d.diagonal_characterization);
}

TEST(Sheaf, ConstantDomainIsSheaf) {
  Rng rng(92);
  for (int i = 0; i < 50; ++i) {
    const KripkeFrame base = random_frame(rng, numbered_set("X", rng.between(1, 3), "x"), agent_names(2));
    const SheafDiagnostics d = is_kripke_sheaf(constant_domain(base, rng.between(1, 3)));
    ASSERT_TRUE(d.surjective && d.bounded && d.sheaf_condition);
    ASSERT_TRUE(d.characterizations_agree());
  }
}

TEST(Sheaf, TwoSuccessorsInOneFiber) {
  const FrameMap proj = load_sheaf_projection(read_file(fixture("not_a_sheaf.json")));
  const SheafDiagnostics d = is_kripke_sheaf(proj);
  EXPECT_TRUE(d.surjective);
  EXPECT_TRUE(d.bounded);
  EXPECT_FALSE(d.sheaf_condition);
  EXPECT_EQ(d.failed, "sheaf condition");
  for (const char* w : {"d1", "d2", "d3"}) EXPECT_NE(d.witness.find(w), std::string::npos) << d.witness;
  EXPECT_TRUE(d.characterizations_agree());
}

TEST(Sheaf, CandidatesAgreeWithDiagonal) {
  Rng rng(93);
  std::size_t planted = 0, rejected = 0;
  for (int i = 0; i < 300; ++i) {
    const SheafCandidate c = random_sheaf_candidate(rng, SheafShape{3, 2, 2, false});
    const SheafDiagnostics d = is_kripke_sheaf(c.proj);
    ASSERT_TRUE(d.characterizations_agree());
    if (c.planted == Planted::None) {
      ASSERT_TRUE(d.ok());
    } else {
      ++planted;
      rejected += d.ok() ? 0 : 1;
    }
  }
  EXPECT_GT(planted, 50u);
  EXPECT_EQ(rejected, planted);
}

TEST(Sheaf, FiberedPowerSpecialCases) {
  const SheafModel m = sheaf_fixture("constant_domain.json");
  const FiberedPower& p0 = m.power(0);
  EXPECT_EQ(p0.frame.carrier().elements(), m.sheaf().base().carrier().elements());
  EXPECT_EQ(p0.proj.fn().retyped(p0.frame.carrier(), p0.frame.carrier()), identity(p0.frame.carrier()));
  const FiberedPower& p1 = m.power(1);
  EXPECT_EQ(p1.frame.carrier().elements(), m.sheaf().total().carrier().elements());
  EXPECT_EQ(p1.proj.table(), m.sheaf().proj().table());
}

TEST(Sheaf, SquareOfConstantDomainIsComponentwise) {
  const SheafModel m = sheaf_fixture("constant_domain.json");
  const FiberedPower& p2 = m.power(2);
  EXPECT_EQ(p2.frame.carrier().elements(),
            (std::vector<std::string>{"(u1,u1)", "(u1,v1)", "(v1,u1)", "(v1,v1)", "(u2,u2)", "(u2,v2)", "(v2,u2)",
                                      "(v2,v2)"}));
  const Rel& d = m.sheaf().total().rel(0);
  const Rel& r = p2.frame.rel(0);
  for (std::size_t s = 0; s < p2.tuples.size(); ++s)
    for (std::size_t t = 0; t < p2.tuples.size(); ++t) {
      const bool expect = d.contains(p2.tuples[s][0], p2.tuples[t][0]) && d.contains(p2.tuples[s][1], p2.tuples[t][1]);
      ASSERT_EQ(r.contains(s, t), expect);
    }
  EXPECT_TRUE(r.contains("(u1,v1)", "(u2,v2)"));
  EXPECT_FALSE(r.contains("(u1,v1)", "(v2,u2)"));
}

TEST(Sheaf, PowersOfSheavesAreSheaves) {
  Rng rng(94);
  for (int i = 0; i < 60; ++i) {
    const FrameMap proj = random_sheaf(rng, SheafShape{3, 2, 2, false});
    for (std::size_t n = 0; n <= 3; ++n) {
      const FiberedPower p = fibered_power(proj, n);
      ASSERT_TRUE(is_kripke_sheaf(p.proj).ok()) << n;
      for (const FrameMap& c : p.components) ASSERT_TRUE(is_bounded(c));
    }
    const FiberedPower sq = fibered_power(proj, 2);
    ASSERT_TRUE(is_bounded(diagonal(proj, sq)));
  }
}

TEST(Sheaf, ModelValidation) {
  const SheafModel m = sheaf_fixture("constant_domain.json");
  auto funcs = m.functions();
  // f sends u1 (over w1) to u2 (over w2): not fiber-preserving.
  funcs["f"].table[0] = 2;
  EXPECT_THROW(SheafModel(m.sheaf(), m.signature(), funcs, m.relations()), Error);

  Signature clash = m.signature();
  clash.relations["f"] = 1;
  EXPECT_THROW(clash.validate(), Error);
}

TEST(Sheaf, ConstantDomainFixture) {
  const SheafModel m = sheaf_fixture("constant_domain.json");
  EventRegistry reg;
  reg.add(event_fixture("announce_p.json"));
  // Oracle-frozen extensions.
  EXPECT_EQ(interp(m, "ctx x | [a] F(x)"), (Labels{"u1", "u2"}));
  EXPECT_EQ(interp(m, "ctx x | F(f(x))"), (Labels{"u1", "v1", "v2"}));
  EXPECT_EQ(interp(m, "ctx x | F(f(f(x)))"), (Labels{"u1", "u2", "v1"}));
  EXPECT_EQ(interp(m, "ctx | forall y . F(y)"), (Labels{"w1"}));
  EXPECT_EQ(interp(m, "ctx | exists y . G(y, f(y))"), (Labels{"w1"}));
  EXPECT_EQ(interp(m, "ctx x, y | G(x, y)"), (Labels{"(u1,v1)", "(u2,u2)"}));
  EXPECT_EQ(interp(m, "ctx x | F(c())"), (Labels{"u1", "u2", "v1", "v2"}));
  EXPECT_EQ(interp(m, "ctx x | [a] G(x, f(x))"), (Labels{}));
  EXPECT_EQ(interp(m, "ctx x | [!p] F(x)"), (Labels{"u1", "u2", "v1", "v2"}));
  EXPECT_EQ(interp(m, "ctx x | <!p> [a] F(x)"), (Labels{"u1", "v1"}));
  EXPECT_EQ(interp(m, "ctx x | [Ann,e] [a] F(x)", reg), (Labels{"u1", "u2", "v1", "v2"}));
  EXPECT_EQ(interp(m, "ctx | [Ann,e] forall y . F(y)", reg), (Labels{"w1", "w2"}));
  EXPECT_EQ(interp(m, "ctx x | F(x) & ~F(x)"), (Labels{}));
}

TEST(Sheaf, ForallIsFiberwise) {
  Rng rng(95);
  for (int i = 0; i < 100; ++i) {
    const SheafModel m = random_sheaf_model(rng, SheafShape{});
    const Subset all = interp_formula(m, parse_in_context("ctx | forall y . F(y)"));
    const Subset f = interp_formula(m, parse_in_context("ctx y | F(y)"));
    const auto& proj = m.sheaf().proj();
    for (std::size_t w = 0; w < all.carrier().size(); ++w) {
      bool every = true;
      for (std::size_t d = 0; d < proj.src().carrier().size(); ++d)
        if (proj(d) == w) every = every && f.contains(d);
      ASSERT_EQ(all.contains(w), every);
    }
    ASSERT_EQ(all, forall_map(proj.fn()).apply(f));
  }
}

TEST(Sheaf, AgreesWithOracle) {
  Rng rng(96);
  for (int i = 0; i < 150; ++i) {
    const SheafModel m = random_sheaf_model(rng, SheafShape{});
    const EventModel em = random_fo_event_model(rng, m, "E", 2);
    EventRegistry reg;
    reg.add(em);
    const oracle::Registry oreg{{"E", oracle::from(em)}};
    const oracle::Sheaf os = oracle::from(m);
    std::vector<std::string> ctx;
    for (std::size_t k = rng.below(3); k > 0; --k) ctx.push_back(k == 1 ? "x" : "z");
    FoShape shape{ctx, true, &em};
    for (int j = 0; j < 4; ++j) {
      const Formula f = random_fo_formula(rng, m, shape, rng.between(1, 3));
      ASSERT_EQ(labels(interp_formula(m, {ctx, f}, reg)), oracle::truth_set(os, ctx, f, oreg))
          << print_formula(FormulaInContext{ctx, f});
    }
  }
}

TEST(Sheaf, Terms) {
  const SheafModel m = sheaf_fixture("constant_domain.json");
  EXPECT_EQ(interp_term(m, {"x"}, Term::var("x")).fn(), identity(m.sheaf().total().carrier()));
  EXPECT_EQ(interp_term(m, {"x", "y"}, Term::var("x")).fn(), m.power(2).components[0].fn());
  const FrameMap f = interp_term(m, {"x"}, parse_term("f(x)"));
  EXPECT_EQ(interp_term(m, {"x"}, parse_term("f(f(x))")).fn(), compose(f.fn(), f.fn()));
  const Term via = substitute(parse_term("f(y)"), {"y"}, {parse_term("f(x)")});
  EXPECT_EQ(term_table(m, {"x"}, via), term_table(m, {"x"}, parse_term("f(f(x))")));
  EXPECT_TRUE(is_bounded(interp_tuple(m, {"x", "y"}, {parse_term("f(y)"), parse_term("c()")})));
  EXPECT_THROW(interp_term(m, {"x"}, parse_term("g(x)")), Error);
  try {
    interp_term(m, {"x"}, parse_term("f(x, x)"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ArityMismatch);
  }
}

TEST(Sheaf, VacuousVariable) {
  Rng rng(97);
  for (int i = 0; i < 100; ++i) {
    const SheafModel m = random_sheaf_model(rng, SheafShape{});
    const Formula f = random_fo_formula(rng, m, FoShape{{"x"}}, 2);
    const Subset one = interp_formula(m, {{"x"}, f});
    const Subset two = interp_formula(m, {{"x", "y"}, f});
    ASSERT_EQ(two, preimage_map(m.power(2).components[0].fn()).apply(one));
  }
}

TEST(Sheaf, SubstitutionAndBox) {
  const SheafModel m = sheaf_fixture("constant_domain.json");
  const LawReport r = check_substitution_box_commutation(m, parse_in_context("ctx x | [a] F(x)"), {"y"},
                                                         {parse_term("f(y)")});
  EXPECT_TRUE(r.all_hold());
  const LawReport id = check_substitution_box_commutation(m, parse_in_context("ctx x | F(x)"), {"x"}, {Term::var("x")});
  EXPECT_TRUE(id.all_hold());

  Rng rng(98);
  for (int i = 0; i < 100; ++i) {
    const SheafModel rm = random_sheaf_model(rng, SheafShape{});
    const EventModel em = random_fo_event_model(rng, rm, "E", 2);
    const Formula f = random_fo_formula(rng, rm, FoShape{{"x", "y"}}, 2);
    const std::vector<Term> ts{random_term(rng, rm, {"z"}, 2), random_term(rng, rm, {"z"}, 1)};
    ASSERT_TRUE(check_substitution_box_commutation(rm, {{"x", "y"}, f}, {"z"}, ts, &em).all_hold())
        << print_formula(f);
  }
}

TEST(Sheaf, PullbackUpdateExamples) {
  const SheafModel m = sheaf_fixture("constant_domain.json");
  const SheafUpdate ann = pullback_update(m, event_fixture("announce_p.json"));
  EXPECT_EQ(ann.updated.sheaf().base().carrier().elements(), (std::vector<std::string>{"(w1,e)"}));
  EXPECT_EQ(ann.updated.sheaf().total().carrier().elements(), (std::vector<std::string>{"(u1,e)", "(v1,e)"}));
  EXPECT_TRUE(is_kripke_sheaf(ann.updated.sheaf().proj()).ok());

  const KripkeFrame ef = KripkeFrame::uniform(FiniteSet("T", {"e"}), m.agents(), identity(FiniteSet("T", {"e"})));
  const SheafUpdate triv = pullback_update(m, EventModel("T", ef, {{"e", Formula::top()}}));
  EXPECT_EQ(triv.updated.sheaf().total().carrier().size(), 4u);
  EXPECT_EQ(labels(interp_formula(triv.updated, parse_in_context("ctx x | [a] F(x)"))),
            (Labels{"(u1,e)", "(u2,e)"}));
}

TEST(Sheaf, PullbackUpdateErrors) {
  const SheafModel m = sheaf_fixture("constant_domain.json");
  const KripkeFrame ef = KripkeFrame::uniform(FiniteSet("O", {"e"}), m.agents(), identity(FiniteSet("O", {"e"})));
  try {
    pullback_update(m, EventModel("O", ef, {{"e", parse_formula("F(x)")}}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OpenPrecondition);
  }
  try {
    pullback_update(m, event_fixture("private_announcement.json"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AgentMismatch);
  }
}

TEST(Sheaf, UpdateYieldsSheafAndCommutesWithPowers) {
  Rng rng(99);
  for (int i = 0; i < 100; ++i) {
    const SheafModel m = random_sheaf_model(rng, SheafShape{});
    const EventModel em = random_fo_event_model(rng, m, "E", 2);
    const SheafUpdate u = pullback_update(m, em);
    ASSERT_TRUE(is_kripke_sheaf(u.updated.sheaf().proj()).ok());
    for (std::size_t n = 0; n <= 2; ++n) {
      const auto diff = compare_power_with_pullback(m, u, n);
      ASSERT_FALSE(diff.has_value()) << *diff;
    }
    const auto os = oracle::product(oracle::from(m), oracle::from(em));
    ASSERT_EQ(u.updated.sheaf().total().carrier().elements(), os.individuals);
  }
}

TEST(Sheaf, TransitionNaturality) {
  Rng rng(100);
  for (int i = 0; i < 100; ++i) {
    const SheafModel m = random_sheaf_model(rng, SheafShape{});
    const EventModel em = random_fo_event_model(rng, m, "E", 2);
    const SheafUpdate u = pullback_update(m, em);
    const std::vector<std::size_t> f = tuple_table(m, {"x", "y"}, {Term::var("y"), parse_term("f(x)")});
    for (std::size_t e = 0; e < em.events().size(); ++e)
      ASSERT_TRUE(check_transition_naturality(m, u, e, 2, 2, f).all_hold());
  }
}

TEST(Sheaf, DelInContextBaseCase) {
  Rng rng(101);
  for (int i = 0; i < 100; ++i) {
    const SheafModel m = random_sheaf_model(rng, SheafShape{});
    const EventModel em = random_event_model(rng, "E", m.agents(), 2, {"p"});
    // Context-free formulas over the 0-ary predicate p read as the propositional model on the base.
    std::map<std::string, Subset> val{{"p", m.relation("p", 0)}};
    const KripkeModel base(m.sheaf().base(), val);
    FormulaShape shape;
    shape.atoms = {"p"};
    shape.agents = m.agents();
    const Formula f = random_formula(rng, shape, 2);
    EventRegistry reg;
    reg.add(em);
    for (std::size_t e = 0; e < em.events().size(); ++e) {
      const std::string ev = em.events().element(e);
      ASSERT_EQ(del_in_context(m, em, ev, {{}, f}, true).bits(),
                extension(base, Formula::del_box("E", ev, f), reg).bits());
    }
  }
}

TEST(Sheaf, QuantifierReduction) {
  const SheafModel m = sheaf_fixture("constant_domain.json");
  const EventModel ann = event_fixture("announce_p.json");
  EXPECT_TRUE(verify_quantifier_reduction(m, ann, "e", {}, "y", parse_formula("F(y)")).all_hold());
  EXPECT_TRUE(verify_quantifier_reduction(m, ann, "e", {"x"}, "y", parse_formula("G(x, y)")).all_hold());

  Rng rng(102);
  for (int i = 0; i < 100; ++i) {
    const SheafModel rm = random_sheaf_model(rng, SheafShape{});
    const EventModel em = random_fo_event_model(rng, rm, "E", 2);
    const Formula body = random_fo_formula(rng, rm, FoShape{{"x", "y"}}, 2);
    for (std::size_t e = 0; e < em.events().size(); ++e)
      ASSERT_TRUE(verify_quantifier_reduction(rm, em, em.events().element(e), {"x"}, "y", body).all_hold());
  }
}

TEST(Sheaf, ReduceInContext) {
  const SheafModel m = sheaf_fixture("constant_domain.json");
  EventRegistry reg;
  reg.add(event_fixture("announce_p.json"));
  const Reduction r = reduce_in_context(m, parse_in_context("ctx x | [Ann,e] forall y . [a] G(x, y)"), reg);
  EXPECT_TRUE(is_static(r.result));
  EXPECT_EQ(interp_formula(m, {{"x"}, r.result}), interp_formula(m, {{"x"}, r.input}, reg));
}
