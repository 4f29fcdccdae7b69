#include <gtest/gtest.h>

#include "catdel/error.hpp"
#include "catdel/generators.hpp"
#include "catdel/kripke.hpp"
#include "test_support.hpp"

using namespace catdel;

namespace {

using P = std::vector<std::pair<std::string, std::string>>;

const AgentSet kOne({"a"});
const AgentSet kTwo({"a", "b"});

KripkeFrame frame1(const FiniteSet& x, const P& pairs) {
  return KripkeFrame(x, kOne, {Rel::from_labels(x, x, pairs)});
}

FrameMap map_of(const KripkeFrame& src, const KripkeFrame& dst, std::vector<std::size_t> table) {
  return FrameMap(src, dst, Rel::from_function(src.carrier(), dst.carrier(), table));
}

// Pointwise reading of monotonicity: w R v implies f(w) R f(v).
bool naive_monotone(const FrameMap& m) {
  for (std::size_t a = 0; a < m.src().agents().size(); ++a)
    for (auto [w, v] : m.src().rel(a).pairs())
      if (!m.dst().rel(a).contains(m(w), m(v))) return false;
  return true;
}

// Monotone plus the back condition: f(w) R u implies u = f(v) for some v with w R v.
bool naive_bounded(const FrameMap& m) {
  if (!naive_monotone(m)) return false;
  for (std::size_t a = 0; a < m.src().agents().size(); ++a)
    for (std::size_t w = 0; w < m.src().carrier().size(); ++w)
      for (std::size_t u : m.dst().rel(a).successors(m(w))) {
        bool found = false;
        for (std::size_t v : m.src().rel(a).successors(w)) found = found || m(v) == u;
        if (!found) return false;
      }
  return true;
}

}  // namespace

TEST(Kripke, FrameRejectsForeignRelation) {
  const auto x = numbered_set("X", 2, "x"), y = numbered_set("Y", 2, "y");
  EXPECT_THROW(KripkeFrame(x, kOne, {identity(y)}), Error);
  EXPECT_THROW(KripkeFrame(x, kTwo, {identity(x)}), Error);
}

TEST(Kripke, FrameMapNeedsFunctionAndAgents) {
  const auto x = numbered_set("X", 2, "x");
  const KripkeFrame f = frame1(x, {});
  try {
    FrameMap(f, f, Rel(x, x));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotAFunction);
  }
  const KripkeFrame g = KripkeFrame::uniform(x, kTwo, identity(x));
  try {
    FrameMap(f, g, identity(x));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AgentMismatch);
  }
}

TEST(Kripke, MonotoneExamples) {
  const auto x = numbered_set("X", 3, "x");
  Rng rng(41);
  const KripkeFrame f = random_frame(rng, x, kTwo);
  EXPECT_TRUE(is_monotone(FrameMap::identity(f)));

  const SubframeResult sub = subframe(f, Subset::of_indices(x, std::vector<std::size_t>{0, 2}));
  EXPECT_TRUE(is_monotone(sub.incl));

  const auto y = numbered_set("Y", 2, "y");
  const KripkeFrame total = KripkeFrame::uniform(y, kTwo, total_relation(y, y));
  for (int i = 0; i < 50; ++i) {
    const KripkeFrame src = random_frame(rng, x, kTwo, 0.6);
    EXPECT_TRUE(is_monotone(FrameMap(src, total, random_function(rng, x, y))));
  }
}

TEST(Kripke, MonotoneAndBoundedMatchPointwiseReading) {
  Rng rng(42);
  for (int i = 0; i < 500; ++i) {
    const auto x = numbered_set("X", rng.between(1, 4), "x");
    const auto y = numbered_set("Y", rng.between(1, 4), "y");
    const FrameMap m(random_frame(rng, x, kTwo, 0.5), random_frame(rng, y, kTwo, 0.4),
                     random_function(rng, x, y));
    ASSERT_EQ(is_monotone(m), naive_monotone(m));
    ASSERT_EQ(is_bounded(m), naive_bounded(m));
    ASSERT_TRUE(!is_bounded(m) || is_monotone(m));
  }
}

TEST(Kripke, BoundedExamples) {
  const FiniteSet x("X", {"x"}), y("Y", {"y"});
  const KripkeFrame empty = frame1(x, {});
  const KripkeFrame loop = frame1(y, {{"y", "y"}});
  const FrameMap m = map_of(empty, loop, {0});
  EXPECT_TRUE(is_monotone(m));
  EXPECT_FALSE(is_bounded(m));

  Rng rng(43);
  const auto z = numbered_set("Z", 4, "z");
  const KripkeFrame f = random_frame(rng, z, kTwo);
  EXPECT_TRUE(is_bounded(FrameMap::identity(f)));
  const KripkeFrame g = relabel(f, "r");
  const FrameMap iso(f, g, Rel::from_function(f.carrier(), g.carrier(), std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_TRUE(is_bounded(iso));
}

TEST(Kripke, InitialLiftExamples) {
  Rng rng(44);
  const auto x = numbered_set("X", 3, "x");
  const KripkeFrame f = random_frame(rng, x, kTwo);
  const KripkeFrame copy = initial_lift({x, kTwo, {identity(x)}, {f}});
  EXPECT_EQ(copy, f);

  const KripkeFrame top = initial_lift({x, kTwo, {}, {}});
  for (const Rel& r : top.relations()) EXPECT_EQ(r, total_relation(x, x));
}

TEST(Kripke, InitialLiftOfProjectionsIsProduct) {
  Rng rng(45);
  const auto x = numbered_set("X", 2, "x"), y = numbered_set("Y", 3, "y");
  const KripkeFrame fx = random_frame(rng, x, kTwo), fy = random_frame(rng, y, kTwo);
  const ProductResult p = product(fx, fy);
  const KripkeFrame lift = initial_lift({p.frame.carrier(), kTwo, {p.p1.fn(), p.p2.fn()}, {fx, fy}});
  EXPECT_EQ(lift, p.frame);
  EXPECT_TRUE(is_monotone(p.p1));
  EXPECT_TRUE(is_monotone(p.p2));
}

TEST(Kripke, ProductIsPairwiseConjunction) {
  const FiniteSet x("X", {"a", "b"}), y("Y", {"c", "d"});
  const ProductResult p = product(frame1(x, {{"a", "b"}, {"b", "b"}}), frame1(y, {{"c", "c"}, {"d", "c"}}));
  using S = std::set<std::pair<std::string, std::string>>;
  const auto lp = p.frame.rel("a").labeled_pairs();
  EXPECT_EQ(S(lp.begin(), lp.end()), (S{{"(a,c)", "(b,c)"}, {"(a,d)", "(b,c)"}, {"(b,c)", "(b,c)"}, {"(b,d)", "(b,c)"}}));
}

TEST(Kripke, ProductWithUnitAndS5) {
  Rng rng(46);
  const auto x = numbered_set("X", 3, "x");
  const FiniteSet one("One", {"*"});
  const KripkeFrame f = random_frame(rng, x, kTwo);
  const ProductResult pu = product(f, KripkeFrame::uniform(one, kTwo, total_relation(one, one)));
  EXPECT_TRUE(is_bounded(pu.p1));
  for (std::size_t a = 0; a < 2; ++a) EXPECT_EQ(pu.frame.rel(a).retyped(x, x), f.rel(a));

  for (int i = 0; i < 50; ++i) {
    const KripkeFrame s1 = random_frame_with(rng, numbered_set("A", rng.between(1, 3), "a"), kTwo, true, true, true);
    const KripkeFrame s2 = random_frame_with(rng, numbered_set("B", rng.between(1, 3), "b"), kTwo, true, true, true);
    const ProductResult p = product(s1, s2);
    for (const Rel& r : p.frame.relations()) {
      ASSERT_TRUE(is_reflexive(r));
      ASSERT_TRUE(is_transitive(r));
      ASSERT_TRUE(is_symmetric(r));
    }
  }
}

TEST(Kripke, ProductAgentMismatch) {
  const auto x = numbered_set("X", 1, "x");
  try {
    product(frame1(x, {}), KripkeFrame::uniform(x, kTwo, identity(x)));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AgentMismatch);
  }
}

TEST(Kripke, LargestPreservedCheck) {
  Rng rng(47);
  for (int i = 0; i < 200; ++i) {
    const auto x = numbered_set("X", rng.between(1, 3), "x");
    LiftFamily fam{x, kTwo, {}, {}};
    const std::size_t k = rng.between(0, 2);
    for (std::size_t j = 0; j < k; ++j) {
      const auto y = numbered_set("Y" + std::to_string(j), rng.between(1, 3), "y");
      fam.fns.push_back(random_function(rng, x, y));
      fam.targets.push_back(random_frame(rng, y, kTwo, 0.5));
    }
    const KripkeFrame lift = initial_lift(fam);
    std::vector<Rel> cands{lift.rel(0), lift.rel(1), random_relation(rng, x, x, 0.4), total_relation(x, x)};
    ASSERT_TRUE(largest_preserved_check(fam, lift, cands));
  }
}

TEST(Kripke, TotalCandidateOverStrictLift) {
  const FiniteSet x("X", {"a", "b"});
  const KripkeFrame target = frame1(x, {{"a", "a"}});
  const LiftFamily fam{x, kOne, {identity(x)}, {target}};
  const KripkeFrame lift = initial_lift(fam);
  EXPECT_FALSE(leq(total_relation(x, x), lift.rel(0)));
  const FrameMap via(frame1(x, {{"a", "a"}, {"a", "b"}, {"b", "a"}, {"b", "b"}}), target, identity(x));
  EXPECT_FALSE(is_monotone(via));
  std::vector<Rel> cands{total_relation(x, x)};
  EXPECT_TRUE(largest_preserved_check(fam, lift, cands));
}

TEST(Kripke, LiftPreservesFrameProperties) {
  Rng rng(48);
  for (int i = 0; i < 200; ++i) {
    const bool refl = rng.chance(0.5), trans = rng.chance(0.5), sym = rng.chance(0.5);
    const auto x = numbered_set("X", rng.between(1, 4), "x");
    LiftFamily fam{x, kTwo, {}, {}};
    for (std::size_t j = 0; j < 2; ++j) {
      const auto y = numbered_set("Y" + std::to_string(j), rng.between(1, 3), "y");
      fam.fns.push_back(random_function(rng, x, y));
      fam.targets.push_back(random_frame_with(rng, y, kTwo, refl, trans, sym));
    }
    const KripkeFrame lift = initial_lift(fam);
    for (const Rel& r : lift.relations()) {
      ASSERT_TRUE(!refl || is_reflexive(r));
      ASSERT_TRUE(!trans || is_transitive(r));
      ASSERT_TRUE(!sym || is_symmetric(r));
    }
  }
}

TEST(Kripke, CommonKnowledge) {
  const FiniteSet x("X", {"a", "b", "c"});
  const KripkeFrame f(x, kTwo, {Rel::from_labels(x, x, P{{"a", "b"}}), Rel::from_labels(x, x, P{{"b", "c"}})});
  const std::vector<std::string> both{"a", "b"};
  const Rel ck = common_knowledge_relation(f, both);
  EXPECT_TRUE(ck.contains("a", "c"));
  EXPECT_TRUE(is_reflexive(ck) && is_transitive(ck));

  const KripkeFrame pre = KripkeFrame::uniform(x, kTwo, closure_reflexive_transitive(f.rel(0)));
  const std::vector<std::string> just_a{"a"};
  EXPECT_EQ(common_knowledge_relation(pre, just_a), pre.rel(0));

  try {
    common_knowledge_relation(f, std::vector<std::string>{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::EmptyGroup);
  }
}

TEST(Kripke, SubframeExamples) {
  Rng rng(49);
  const auto x = numbered_set("X", 4, "x");
  const KripkeFrame f = random_frame(rng, x, kTwo);
  const SubframeResult all = subframe(f, Subset::full(x));
  const FiniteSet& sx = all.frame.carrier();
  EXPECT_EQ(sx.elements(), x.elements());
  for (std::size_t a = 0; a < 2; ++a) EXPECT_EQ(all.frame.rel(a).retyped(x, x), f.rel(a));
  EXPECT_EQ(all.incl.fn().retyped(x, x), identity(x));
  EXPECT_EQ(subframe(f, Subset(x)).frame.carrier().size(), 0u);

  for (int i = 0; i < 100; ++i) {
    const KripkeFrame s5 = random_frame_with(rng, x, kTwo, true, true, true);
    const SubframeResult s = subframe(s5, Subset::from_code(x, rng.below(16)));
    for (const Rel& r : s.frame.relations()) ASSERT_TRUE(is_reflexive(r) && is_transitive(r) && is_symmetric(r));
    ASSERT_TRUE(is_monotone(s.incl));
    ASSERT_TRUE(is_injective(s.incl.fn()));
  }
}

TEST(Kripke, PullbackAlongIdentity) {
  Rng rng(50);
  const auto x = numbered_set("X", 3, "x");
  const KripkeFrame fx = random_frame(rng, x, kTwo);
  const FrameMap f = random_monotone_into(rng, fx, 4, "Y");
  const PullbackResult pb = pullback(f, FrameMap::identity(fx));
  EXPECT_EQ(pb.frame.carrier().size(), 4u);
  EXPECT_TRUE(is_bounded(pb.p));
  for (std::size_t a = 0; a < 2; ++a)
    EXPECT_EQ(pb.frame.rel(a).retyped(f.src().carrier(), f.src().carrier()), f.src().rel(a));
}

TEST(Kripke, PullbackOfInclusionIsPreimageSubframe) {
  Rng rng(51);
  for (int i = 0; i < 100; ++i) {
    const auto x = numbered_set("X", rng.between(1, 3), "x");
    const KripkeFrame fx = random_frame(rng, x, kTwo, 0.5);
    const FrameMap f = random_monotone_into(rng, fx, rng.between(1, 4), "Y");
    const Subset s = Subset::from_code(x, rng.below(1u << x.size()));
    const SubframeResult sub = subframe(fx, s, "S");
    const PullbackResult pb = pullback(f, sub.incl);

    std::vector<std::size_t> pre;
    for (std::size_t y = 0; y < f.src().carrier().size(); ++y)
      if (s.contains(f(y))) pre.push_back(y);
    const SubframeResult expect = subframe(f.src(), Subset::of_indices(f.src().carrier(), pre));
    ASSERT_EQ(pb.frame.carrier().size(), expect.frame.carrier().size());
    for (std::size_t a = 0; a < 2; ++a)
      ASSERT_EQ(pb.frame.rel(a).retyped(expect.frame.carrier(), expect.frame.carrier()), expect.frame.rel(a));
    ASSERT_TRUE(check_beck_chevalley(Square{pb.p.fn(), pb.q.fn(), f.fn(), sub.incl.fn()}));
  }
}

TEST(Kripke, PullbackCodomainMismatch) {
  const auto x = numbered_set("X", 2, "x"), y = numbered_set("Y", 2, "y");
  const KripkeFrame fx = frame1(x, {}), fy = frame1(y, {});
  try {
    pullback(FrameMap::identity(fx), FrameMap::identity(fy));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CodomainMismatch);
  }
}

TEST(Kripke, PullbackPreservesBounded) {
  Rng rng(52);
  for (int i = 0; i < 500; ++i) {
    const auto x = numbered_set("X", rng.between(1, 3), "x");
    const KripkeFrame fx = random_frame(rng, x, kTwo, 0.5);
    const FrameMap f = random_monotone_into(rng, fx, rng.between(1, 4), "Y");
    const FrameMap g = random_bounded_onto(rng, fx, rng.between(x.size(), 4), "Z");
    ASSERT_TRUE(is_bounded(g));
    ASSERT_TRUE(check_pullback_preserves_bounded(f, g));
  }
}

TEST(Kripke, PullbackAlongMonotoneCanFail) {
  // g merely monotone: x below has no successor but g(x) does.
  const FiniteSet x("X", {"x"}), z("Z", {"z"});
  const KripkeFrame fx = frame1(x, {{"x", "x"}});
  const FrameMap g = map_of(frame1(z, {}), fx, {0});
  EXPECT_FALSE(check_pullback_preserves_bounded(FrameMap::identity(fx), g));
}

TEST(Kripke, Bisimulation) {
  Rng rng(53);
  const auto x = numbered_set("X", 3, "x");
  const KripkeFrame fx = random_frame(rng, x, kTwo);
  EXPECT_TRUE(is_bisimulation(fx, fx, identity(x)));

  const FrameMap b = random_bounded_onto(rng, fx, 5, "B");
  EXPECT_TRUE(is_bisimulation(b.src(), fx, b.fn()));

  const FiniteSet one("O", {"o"}), pt("P", {"p"});
  const KripkeFrame empty = frame1(one, {}), loop = frame1(pt, {{"p", "p"}});
  EXPECT_FALSE(is_bisimulation(empty, loop, total_relation(one, pt)));
}

TEST(Kripke, ComposeFrameMaps) {
  Rng rng(54);
  const auto x = numbered_set("X", 2, "x");
  const KripkeFrame fx = random_frame(rng, x, kTwo);
  const FrameMap g = random_bounded_onto(rng, fx, 3, "Y");
  const FrameMap h = random_bounded_onto(rng, g.src(), 4, "Z");
  const FrameMap c = compose(h, g);
  EXPECT_EQ(c.fn(), compose(h.fn(), g.fn()));
  EXPECT_TRUE(is_bounded(c));
}
