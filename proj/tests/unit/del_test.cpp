#include <gtest/gtest.h>

#include "catdel/del.hpp"
#include "catdel/error.hpp"
#include "catdel/generators.hpp"
#include "catdel/syntax.hpp"
#include "oracle.hpp"
#include "test_support.hpp"

using namespace catdel;
using testing_support::event_fixture;
using testing_support::kripke_fixture;
using testing_support::labels;

namespace {

using Labels = std::set<std::string>;

struct Fixtures {
  KripkeModel two = kripke_fixture("two_worlds.json");
  KripkeModel muddy = kripke_fixture("muddy_children.json");
  EventModel priv = event_fixture("private_announcement.json");
  EventModel ann = event_fixture("announce_p.json");
  EventRegistry reg;
  Fixtures() {
    reg.add(priv);
    reg.add(ann);
  }
};

const std::string kNeitherKnows = "~([a]ma | [a]~ma) & ~([b]mb | [b]~mb)";

Labels ext(const KripkeModel& m, const std::string& f, const EventRegistry& reg = {}) {
  return labels(extension(m, parse_formula(f), reg));
}

}  // namespace

// Expected sets were produced by the pointwise oracle in tests/support.
TEST(Del, TwoWorldExamples) {
  Fixtures fx;
  EXPECT_EQ(ext(fx.two, "true"), (Labels{"w1", "w2"}));
  EXPECT_EQ(ext(fx.two, "false"), (Labels{}));
  EXPECT_EQ(ext(fx.two, "[a]p"), (Labels{}));
  EXPECT_EQ(ext(fx.two, "<a>p"), (Labels{"w1", "w2"}));
  EXPECT_EQ(ext(fx.two, "[!p][a]p"), (Labels{"w1", "w2"}));
  EXPECT_EQ(ext(fx.two, "<!p>[a]p"), (Labels{"w1"}));
  EXPECT_EQ(ext(fx.two, "[!p][a]q"), (Labels{"w2"}));
}

TEST(Del, PrivateAnnouncement) {
  Fixtures fx;
  EXPECT_EQ(ext(fx.two, "[E,ep][a]p", fx.reg), (Labels{"w1", "w2"}));
  EXPECT_EQ(ext(fx.two, "[E,ep][b]p", fx.reg), (Labels{"w2"}));
  EXPECT_EQ(ext(fx.two, "<E,ep>[a]p", fx.reg), (Labels{"w1"}));
  EXPECT_EQ(ext(fx.two, "<E,ep>[b]p", fx.reg), (Labels{}));
  EXPECT_EQ(ext(fx.two, "[E,et][a]p", fx.reg), (Labels{}));
  EXPECT_EQ(ext(fx.two, "[E,ep][b][a]p", fx.reg), (Labels{"w2"}));
  EXPECT_EQ(ext(fx.two, "[E,ep]<b>~[a]p", fx.reg), (Labels{"w1", "w2"}));
  EXPECT_EQ(ext(fx.two, "[E,ep](p & [a]q)", fx.reg), (Labels{"w2"}));
  // b's knowledge of p is the same before and after the private event.
  EXPECT_EQ(ext(fx.two, "[b]p"), (Labels{}));
}

TEST(Del, MuddyChildren) {
  Fixtures fx;
  const std::string first = "(ma | mb)";
  EXPECT_EQ(ext(fx.muddy, "<!" + first + "><!(" + kNeitherKnows + ")>([a]ma & [b]mb)"), (Labels{"mm"}));
  EXPECT_EQ(ext(fx.muddy, "[!" + first + "][!(" + kNeitherKnows + ")]([a]ma & [b]mb)"),
            (Labels{"cc", "cm", "mc", "mm"}));
  EXPECT_EQ(ext(fx.muddy, "[!" + first + "](" + kNeitherKnows + ")"), (Labels{"cc", "mm"}));
  EXPECT_EQ(ext(fx.muddy, "[!" + first + "]([a]ma | [a]~ma)"), (Labels{"cc", "mc"}));
  EXPECT_EQ(ext(fx.muddy, "<!" + first + "><!(" + kNeitherKnows + ")>true"), (Labels{"mm"}));
}

TEST(Del, AgreesWithOracleOnRandomModels) {
  Rng rng(71);
  for (int i = 0; i < 300; ++i) {
    const KripkeModel m = random_model(rng, ModelShape{});
    const EventModel em = random_event_model(rng, "E", m.agents(), 3, {"p", "q"});
    EventRegistry reg;
    reg.add(em);
    const oracle::Registry oreg{{"E", oracle::from(em)}};
    const oracle::Model om = oracle::from(m);
    FormulaShape shape;
    shape.agents = m.agents();
    shape.announcements = true;
    shape.event_models = {&em};
    for (int j = 0; j < 5; ++j) {
      const Formula f = random_formula(rng, shape, rng.between(0, 3));
      ASSERT_EQ(labels(extension(m, f, reg)), oracle::truth_set(om, f, oreg)) << print_formula(f);
    }
  }
}

TEST(Del, UnknownSymbols) {
  Fixtures fx;
  auto kind_of = [&](const std::string& f) {
    try {
      extension(fx.two, parse_formula(f), fx.reg);
    } catch (const Error& e) {
      EXPECT_NE(std::string(e.what()).find("zz"), std::string::npos) << e.what();
      return e.kind();
    }
    return ErrorKind::InvariantViolation;
  };
  EXPECT_EQ(kind_of("zz"), ErrorKind::UnknownAtom);
  EXPECT_EQ(kind_of("[zz]p"), ErrorKind::UnknownAgent);
  EXPECT_EQ(kind_of("[E,zz]p"), ErrorKind::UnknownEvent);
  EXPECT_EQ(kind_of("[zz,e]p"), ErrorKind::UnresolvedEventModel);
}

TEST(Del, PalUpdate) {
  Fixtures fx;
  const PalResult top = pal_update(fx.muddy, Formula::top());
  EXPECT_EQ(top.updated.carrier().elements(), fx.muddy.carrier().elements());
  EXPECT_EQ(top.incl.fn().retyped(fx.muddy.carrier(), fx.muddy.carrier()), identity(fx.muddy.carrier()));
  EXPECT_EQ(pal_update(fx.muddy, Formula::bot()).updated.carrier().size(), 0u);

  const PalResult r = pal_update(fx.muddy, parse_formula("ma | mb"));
  EXPECT_EQ(r.updated.carrier().elements(), (std::vector<std::string>{"mm", "mc", "cm"}));
  EXPECT_EQ(labels(r.updated.atom("ma")), (Labels{"mm", "mc"}));
  EXPECT_TRUE(is_monotone(r.incl));
}

TEST(Del, PalMatchesAnnouncementEventModel) {
  Rng rng(72);
  for (int i = 0; i < 200; ++i) {
    const KripkeModel m = random_model(rng, ModelShape{});
    FormulaShape shape;
    shape.agents = m.agents();
    const Formula sigma = random_formula(rng, shape, 2);
    const PalResult pal = pal_update(m, sigma);
    const UpdateResult upd = product_update(m, announcement_model(sigma, m.agents(), "S"));
    const auto& a = pal.updated;
    const auto& b = upd.updated;
    ASSERT_EQ(a.carrier().size(), b.carrier().size());
    for (std::size_t k = 0; k < a.carrier().size(); ++k)
      ASSERT_EQ(pair_label(a.carrier().element(k), "e"), b.carrier().element(k));
    for (std::size_t ag = 0; ag < m.agents().size(); ++ag)
      ASSERT_EQ(a.frame().rel(ag).retyped(b.carrier(), b.carrier()), b.frame().rel(ag));
    for (const auto& [p, s] : a.valuation()) ASSERT_EQ(s.bits(), b.atom(p).bits());
  }
}

TEST(Del, ProductUpdateInvariants) {
  Rng rng(73);
  for (int i = 0; i < 200; ++i) {
    const KripkeModel m = random_model(rng, ModelShape{});
    const EventModel em = random_event_model(rng, "E", m.agents(), 3, {"p", "q"});
    const UpdateResult u = product_update(m, em);
    const oracle::Model expect = oracle::product(oracle::from(m), oracle::from(em));
    ASSERT_EQ(u.updated.carrier().elements(), expect.worlds);
    const oracle::Model got = oracle::from(u.updated);
    ASSERT_EQ(got.rel, expect.rel);
    ASSERT_EQ(got.val, expect.val);
    ASSERT_TRUE(u.maps.transition_routes_agree());
    for (const auto& t : u.maps.events) {
      ASSERT_EQ(t.transition, t.transition_via_product);
      ASSERT_EQ(t.transition, compose(dagger(t.inclusion), t.injection));
    }
    for (const auto& [p, s] : m.valuation())
      ASSERT_EQ(u.updated.atom(p), preimage_map(u.maps.p_x.fn()).apply(s));
  }
}

TEST(Del, TrivialEventIsIsomorphic) {
  Fixtures fx;
  const EventModel skip = event_fixture("trivial_event.json");
  const UpdateResult u = product_update(fx.two, skip);
  EXPECT_EQ(u.updated.carrier().elements(), (std::vector<std::string>{"(w1,e)", "(w2,e)"}));
  EXPECT_TRUE(is_bounded(u.maps.p_x));
  for (std::size_t a = 0; a < 2; ++a)
    EXPECT_EQ(u.updated.frame().rel(a).retyped(fx.two.carrier(), fx.two.carrier()), fx.two.frame().rel(a));
}

TEST(Del, AgentMismatch) {
  Fixtures fx;
  try {
    product_update(fx.two, fx.ann);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AgentMismatch);
  }
}

TEST(Del, PalReductionsOnFixture) {
  Fixtures fx;
  const LawReport r = verify_pal_reductions(fx.two, parse_formula("p"), parse_formula("[a]q"), parse_formula("q"));
  EXPECT_TRUE(r.all_hold());
  EXPECT_GE(r.laws.size(), 4u);
  const LawReport t = verify_pal_reductions(fx.two, Formula::top(), parse_formula("p"), parse_formula("<b>q"));
  EXPECT_TRUE(t.all_hold());
}

TEST(Del, DelReductionsOnFixture) {
  Fixtures fx;
  for (const std::string e : {"ep", "et"}) {
    const LawReport r = verify_del_reductions(fx.two, fx.priv, e, parse_formula("[b]p"), parse_formula("q"), fx.reg);
    EXPECT_TRUE(r.all_hold()) << e;
  }
  const LawReport s = verify_del_reductions(fx.two, event_fixture("trivial_event.json"), "e", parse_formula("[a]p"),
                                            parse_formula("q"));
  EXPECT_TRUE(s.all_hold());
}

TEST(Del, BoxAxiomConjoinsOverSuccessors) {
  Fixtures fx;
  const auto eqs = del_reduction_instances(fx.priv, "ep", parse_formula("p"), parse_formula("q"), {"p", "q"});
  bool found = false;
  for (const auto& eq : eqs)
    if (eq.lhs == parse_formula("[E,ep][b]p")) {
      EXPECT_EQ(eq.rhs, parse_formula("p -> [b][E,et]p"));
      found = true;
    }
  EXPECT_TRUE(found);
}

TEST(Del, RandomReductions) {
  Rng rng(74);
  for (int i = 0; i < 200; ++i) {
    const KripkeModel m = random_model(rng, ModelShape{});
    const EventModel em = random_event_model(rng, "E", m.agents(), 3, {"p", "q"});
    FormulaShape shape;
    shape.agents = m.agents();
    const Formula sigma = random_formula(rng, shape, 2);
    const Formula phi = random_formula(rng, shape, 2), psi = random_formula(rng, shape, 2);
    ASSERT_TRUE(verify_pal_reductions(m, sigma, phi, psi).all_hold());
    const std::string ev = em.events().element(rng.below(em.events().size()));
    ASSERT_TRUE(verify_del_reductions(m, em, ev, phi, psi).all_hold());
  }
}

TEST(Del, NoLearning) {
  Fixtures fx;
  const NoLearningReport bounded = no_learning_check(fx.two, event_fixture("trivial_event.json"), 2);
  EXPECT_TRUE(bounded.p_x_bounded);
  EXPECT_TRUE(bounded.failures.empty());
  EXPECT_GT(bounded.formulas_checked, 0u);

  const EventModel pub = announcement_model(parse_formula("p"), fx.two.agents(), "P");
  const NoLearningReport learn = no_learning_check(fx.two, pub, 2);
  EXPECT_FALSE(learn.p_x_bounded);
  ASSERT_TRUE(learn.learning_witness.has_value());
  EventRegistry reg;
  reg.add(pub);
  EXPECT_NE(ext(fx.two, "[P,e][a]p", reg), ext(fx.two, "p -> [a]p"));
}

TEST(Del, StaticPreconditionModalities) {
  Fixtures fx;
  const auto top = static_precondition_modalities(fx.muddy, Formula::top());
  EXPECT_TRUE(equal_exhaustive(top.forall_composite, identity_map(fx.muddy.carrier(), ExtensionKind::Meet)));
  EXPECT_TRUE(equal_exhaustive(top.exists_composite, identity_map(fx.muddy.carrier(), ExtensionKind::Join)));
  const auto bot = static_precondition_modalities(fx.muddy, Formula::bot());
  for_each_subset(fx.muddy.carrier(), [&](const Subset& s) {
    EXPECT_EQ(bot.forall_composite.apply(s), Subset::full(fx.muddy.carrier()));
    EXPECT_TRUE(bot.exists_composite.apply(s).empty());
  });

  Rng rng(75);
  for (int i = 0; i < 100; ++i) {
    const KripkeModel m = random_model(rng, ModelShape{});
    FormulaShape shape;
    shape.agents = m.agents();
    const Formula sigma = random_formula(rng, shape, 2);
    const auto mods = static_precondition_modalities(m, sigma);
    const Subset ext_sigma = extension(m, sigma);
    for_each_subset(m.carrier(), [&](const Subset& s) {
      ASSERT_EQ(mods.forall_composite.apply(s), set_union(set_complement(ext_sigma), s));
      ASSERT_EQ(mods.exists_composite.apply(s), set_intersection(ext_sigma, s));
    });
  }
}

TEST(Del, DiamondIsDualOfBox) {
  Rng rng(76);
  for (int i = 0; i < 200; ++i) {
    const KripkeModel m = random_model(rng, ModelShape{});
    FormulaShape shape;
    shape.agents = m.agents();
    const Formula f = random_formula(rng, shape, 2);
    for (const auto& a : m.agents().labels())
      ASSERT_EQ(extension(m, Formula::dia(a, f)),
                extension(m, Formula::neg(Formula::box(a, Formula::neg(f)))));
  }
}

TEST(Del, PositiveFormulasAreMonotoneInValuation) {
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    const KripkeModel m = random_model(rng, ModelShape{});
    auto val = m.valuation();
    for (auto& [p, s] : val) s = set_union(s, Subset::from_code(m.carrier(), rng.bits()));
    const KripkeModel bigger(m.frame(), val);
    // &, | and <a> over atoms.
    Formula f = Formula::atom(rng.chance(0.5) ? "p" : "q");
    for (int d = 0; d < 3; ++d) {
      const Formula g = Formula::atom(rng.chance(0.5) ? "p" : "q");
      switch (rng.below(3)) {
        case 0: f = Formula::conj(f, g); break;
        case 1: f = Formula::disj(f, g); break;
        default: f = Formula::dia(m.agents()[rng.below(m.agents().size())], f);
      }
    }
    ASSERT_TRUE(is_subset(extension(m, f), extension(bigger, f)));
  }
}

TEST(Del, BisimilarWorldsAgree) {
  Rng rng(78);
  for (int i = 0; i < 100; ++i) {
    const KripkeModel m = random_model(rng, ModelShape{3, 2, {"p", "q"}});
    const FrameMap b = random_bounded_onto(rng, m.frame(), rng.between(3, 5), "B");
    std::map<std::string, Subset> val;
    for (const auto& [p, s] : m.valuation()) val.emplace(p, preimage_map(b.fn()).apply(s));
    const KripkeModel cover(b.src(), val);
    ASSERT_TRUE(is_bisimulation(cover.frame(), m.frame(), b.fn()));
    FormulaShape shape;
    shape.agents = m.agents();
    for (int j = 0; j < 10; ++j) {
      const Formula f = random_formula(rng, shape, 3);
      const Subset here = extension(cover, f), there = extension(m, f);
      for (std::size_t w = 0; w < cover.carrier().size(); ++w) ASSERT_EQ(here.contains(w), there.contains(b(w)));
    }
  }
}

TEST(Del, EnumerateFormulas) {
  const auto fs = enumerate_formulas({"p"}, AgentSet({"a"}), 1);
  // p, ~p, [a]p (no & over a single distinct pair).
  EXPECT_EQ(fs.size(), 3u);
  for (const auto& f : fs) EXPECT_LE(depth(f), 1u);
}

TEST(Del, DynamicPrecondition) {
  Fixtures fx;
  const KripkeFrame ef = KripkeFrame::uniform(FiniteSet("Ev", {"e"}), fx.two.agents(),
                                              identity(FiniteSet("Ev", {"e"})));
  EventRegistry reg = fx.reg;
  reg.add(EventModel("D", ef, {{"e", parse_formula("[E,ep][b]p")}}));
  EXPECT_EQ(ext(fx.two, "<D,e>true", reg), (Labels{"w2"}));
}

TEST(Del, ValuationOutsideCarrier) {
  const FiniteSet x("X", {"w"}), y("Y", {"v"});
  const KripkeFrame f = KripkeFrame::uniform(x, AgentSet({"a"}), identity(x));
  EXPECT_THROW(KripkeModel(f, {{"p", Subset::full(y)}}), Error);
}
