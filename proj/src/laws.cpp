#include "catdel/laws.hpp"

#include <chrono>
#include <functional>
#include <set>

#include "catdel/error.hpp"
#include "catdel/generators.hpp"
#include "catdel/reduce.hpp"
#include "catdel/sheaf.hpp"
#include "catdel/syntax.hpp"

namespace catdel {

namespace {

std::string rel_text(const Rel& r) {
  std::string s = r.dom().name() + "->" + r.cod().name() + " {";
  bool first = true;
  for (const auto& [a, b] : r.labeled_pairs()) {
    if (!first) s += ",";
    first = false;
    s += pair_label(a, b);
  }
  return s + "}";
}

std::string subset_text(const Subset& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& l : s.labels()) {
    if (!first) out += ",";
    first = false;
    out += l;
  }
  return out + "}";
}

class Suite {
 public:
  explicit Suite(std::string name) : start_(std::chrono::steady_clock::now()) {
    report_.suite = std::move(name);
  }

  void fail(const std::string& case_id, std::string check, std::string witness) {
    report_.failures.push_back({case_id, std::move(check), std::move(witness)});
  }

  template <typename Witness>
  void expect(bool ok, const std::string& case_id, const std::string& check, Witness&& witness) {
    if (!ok) fail(case_id, check, witness());
  }

  void absorb(const LawReport& r, const std::string& case_id, const std::string& context = {}) {
    for (const auto& law : r.laws)
      if (law.applicable && !law.holds)
        fail(case_id, law.name, context.empty() ? law.witness : law.witness + " [" + context + "]");
  }

  /// Runs one case; library errors become failures.
  void run(const std::string& case_id, const std::function<void()>& body) {
    ++report_.cases;
    try {
      body();
    } catch (const Error& e) {
      fail(case_id, "error", e.what());
    }
  }

  void note(std::string text) { report_.notes.push_back(std::move(text)); }

  Report finish() {
    report_.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    return std::move(report_);
  }

 private:
  Report report_;
  std::chrono::steady_clock::time_point start_;
};

std::string case_name(std::size_t i) { return "case " + std::to_string(i); }

std::size_t or_default(std::size_t v, std::size_t d) { return v == 0 ? d : v; }

// --- rel-laws ----------------------------------------------------------------

using DaggerFn = std::function<Rel(const Rel&)>;

void pair_laws(Suite& s, const DaggerFn& dag, const std::string& id, const Rel& r) {
  s.expect(compose(identity(r.dom()), r) == r, id, "left-unit", [&] { return rel_text(r); });
  s.expect(compose(r, identity(r.cod())) == r, id, "right-unit", [&] { return rel_text(r); });
  s.expect(dag(dag(r)) == r, id, "dagger-involution",
           [&] { return rel_text(r) + " comes back as " + rel_text(dag(dag(r))); });
}

void order_laws(Suite& s, const DaggerFn& dag, const std::string& id, const Rel& r1, const Rel& r2) {
  s.expect(leq(r1, r2) == leq(dag(r1), dag(r2)), id, "dagger-order",
           [&] { return rel_text(r1) + " vs " + rel_text(r2); });
}

void composable_laws(Suite& s, const DaggerFn& dag, const std::string& id, const Rel& r1,
                     const Rel& r2) {
  s.expect(dag(compose(r1, r2)) == compose(dag(r2), dag(r1)), id, "dagger-contravariance",
           [&] { return rel_text(r1) + " then " + rel_text(r2); });
}

void associativity(Suite& s, const std::string& id, const Rel& r1, const Rel& r2, const Rel& r3) {
  s.expect(compose(compose(r1, r2), r3) == compose(r1, compose(r2, r3)), id, "associativity",
           [&] { return rel_text(r1) + " ; " + rel_text(r2) + " ; " + rel_text(r3); });
}

// r1 : X->Y, r2 : Y->Z, r3 : X->Z
void modularity(Suite& s, const DaggerFn& dag, const std::string& id, const Rel& r1, const Rel& r2,
                const Rel& r3) {
  const Rel lhs = meet(compose(r1, r2), r3);
  const Rel rhs = compose(meet(r1, compose(r3, dag(r2))), r2);
  s.expect(leq(lhs, rhs), id, "modularity", [&] {
    return rel_text(r1) + ", " + rel_text(r2) + ", " + rel_text(r3);
  });
}

// r1 <= s1 : X->Y, r2 <= s2 : Y->Z
void whiskering(Suite& s, const std::string& id, const Rel& r1, const Rel& s1, const Rel& r2,
                const Rel& s2) {
  s.expect(leq(compose(r1, r2), compose(s1, s2)), id, "whiskering", [&] {
    return rel_text(r1) + " <= " + rel_text(s1) + ", " + rel_text(r2) + " <= " + rel_text(s2);
  });
}

Report rel_laws(const LawOptions& opts, const DaggerFn& dag, std::string name) {
  Suite s(std::move(name));
  const std::size_t cases = or_default(opts.cases, 1000);
  const std::size_t max_size = or_default(opts.max_size, 5);

  // Exhaustive part: carriers of size 0, 1, 2 and every relation between them.
  std::vector<FiniteSet> sets;
  for (std::size_t n = 0; n <= 2; ++n) sets.push_back(numbered_set("S" + std::to_string(n), n, "s"));
  std::vector<std::vector<std::vector<Rel>>> all(3, std::vector<std::vector<Rel>>(3));
  for (std::size_t x = 0; x < 3; ++x)
    for (std::size_t y = 0; y < 3; ++y)
      for_each_relation(sets[x], sets[y], [&](const Rel& r) { all[x][y].push_back(r); });

  std::size_t exhaustive = 0;
  s.run("exhaustive", [&] {
    for (std::size_t x = 0; x < 3; ++x)
      for (std::size_t y = 0; y < 3; ++y) {
        const std::string id = "exhaustive |X|=" + std::to_string(x) + " |Y|=" + std::to_string(y);
        for (const Rel& r : all[x][y]) {
          pair_laws(s, dag, id, r);
          ++exhaustive;
          for (const Rel& r2 : all[x][y]) order_laws(s, dag, id, r, r2);
        }
        for (std::size_t z = 0; z < 3; ++z) {
          const std::string idz = id + " |Z|=" + std::to_string(z);
          for (const Rel& r1 : all[x][y])
            for (const Rel& r2 : all[y][z]) {
              composable_laws(s, dag, idz, r1, r2);
              for (const Rel& r3 : all[x][z]) modularity(s, dag, idz, r1, r2, r3);
              for (std::size_t w = 0; w < 3; ++w)
                for (const Rel& r3 : all[z][w]) associativity(s, idz, r1, r2, r3);
            }
          // Whiskering on both sides, one inclusion at a time.
          for (const Rel& r1 : all[x][y])
            for (const Rel& s1 : all[x][y]) {
              if (!leq(r1, s1)) continue;
              for (const Rel& t : all[y][z]) whiskering(s, idz, r1, s1, t, t);
              for (const Rel& t : all[z][x]) whiskering(s, idz, t, t, r1, s1);
            }
        }
      }
  });

  for (std::size_t i = 0; i < cases; ++i) {
    s.run(case_name(i), [&] {
      Rng rng(case_seed(opts.seed, i));
      auto set = [&](const char* name, const char* prefix) {
        return numbered_set(name, rng.between(1, max_size), prefix);
      };
      const FiniteSet x = set("X", "x"), y = set("Y", "y"), z = set("Z", "z"), w = set("W", "w");
      const double d = 0.15 + 0.6 * static_cast<double>(rng.below(100)) / 100.0;
      const Rel r1 = random_relation(rng, x, y, d);
      const Rel r2 = random_relation(rng, y, z, d);
      const Rel r3 = random_relation(rng, z, w, d);
      const Rel r13 = random_relation(rng, x, z, d);
      const Rel s1 = join(r1, random_relation(rng, x, y, 0.2));
      const Rel s2 = join(r2, random_relation(rng, y, z, 0.2));
      const std::string id = case_name(i);
      pair_laws(s, dag, id, r1);
      order_laws(s, dag, id, r1, s1);
      order_laws(s, dag, id, s1, r1);
      order_laws(s, dag, id, r1, random_relation(rng, x, y, d));
      composable_laws(s, dag, id, r1, r2);
      associativity(s, id, r1, r2, r3);
      modularity(s, dag, id, r1, r2, r13);
      whiskering(s, id, r1, s1, r2, s2);
    });
  }
  s.note("exhaustive relations checked: " + std::to_string(exhaustive));
  return s.finish();
}

// --- duality -----------------------------------------------------------------

Report duality(const LawOptions& opts) {
  Suite s("duality");
  const std::size_t cases = or_default(opts.cases, 1000);
  const std::size_t max_size = or_default(opts.max_size, 4);
  std::size_t strict_witnesses = 0;

  for (std::size_t i = 0; i < cases; ++i) {
    const std::string id = case_name(i);
    s.run(id, [&] {
      Rng rng(case_seed(opts.seed, i));
      const FiniteSet x = numbered_set("X", rng.between(1, max_size), "x");
      const FiniteSet y = numbered_set("Y", rng.between(1, max_size), "y");
      const FiniteSet z = numbered_set("Z", rng.between(1, max_size), "z");
      const double d = 0.15 + 0.6 * static_cast<double>(rng.below(100)) / 100.0;
      const Rel r = random_relation(rng, x, y, d);
      const std::string rt = rel_text(r);

      s.expect(check_adjunction(r), id, "adjunction", [&] { return rt; });

      const PowersetMap ex = exists_map(r);
      const PowersetMap fa = forall_map(r);
      std::vector<Subset> subs;
      for_each_subset(x, [&](const Subset& a) { subs.push_back(a); });
      std::vector<Subset> ex_img, fa_img;
      for (const auto& a : subs) {
        ex_img.push_back(ex.apply(a));
        fa_img.push_back(fa.apply(a));
        const Subset dual = set_complement(ex.apply(set_complement(a)));
        s.expect(fa_img.back() == dual, id, "forall-exists-de-morgan",
                 [&] { return rt + " at " + subset_text(a); });
      }
      s.expect(ex.apply(Subset(x)).empty(), id, "exists-empty", [&] { return rt; });
      s.expect(fa.apply(Subset::full(x)) == Subset::full(y), id, "forall-full", [&] { return rt; });
      for (std::size_t a = 0; a < subs.size(); ++a)
        for (std::size_t b = a + 1; b < subs.size(); ++b) {
          const Subset u = set_union(subs[a], subs[b]);
          const Subset n = set_intersection(subs[a], subs[b]);
          s.expect(ex.apply(u) == set_union(ex_img[a], ex_img[b]), id, "exists-preserves-joins",
                   [&] { return rt + " at " + subset_text(subs[a]) + ", " + subset_text(subs[b]); });
          s.expect(fa.apply(n) == set_intersection(fa_img[a], fa_img[b]), id,
                   "forall-preserves-meets",
                   [&] { return rt + " at " + subset_text(subs[a]) + ", " + subset_text(subs[b]); });
        }

      // Relations <-> join maps and meet maps.
      s.expect(relation_from_join_map(ex) == r, id, "join-map-round-trip", [&] { return rt; });
      s.expect(relation_from_meet_map(fa) == r, id, "meet-map-round-trip", [&] { return rt; });
      std::vector<Subset> table;
      for (std::size_t w = 0; w < x.size(); ++w) {
        std::vector<bool> bits(y.size());
        for (std::size_t v = 0; v < y.size(); ++v) bits[v] = rng.chance(0.5);
        table.emplace_back(y, std::move(bits));
      }
      const PowersetMap hj(x, y, ExtensionKind::Join, table);
      const PowersetMap hm(x, y, ExtensionKind::Meet, table);
      s.expect(exists_map(relation_from_join_map(hj)) == hj, id, "relation-round-trip-join",
               [&] { return rel_text(relation_from_join_map(hj)); });
      s.expect(forall_map(relation_from_meet_map(hm)) == hm, id, "relation-round-trip-meet",
               [&] { return rel_text(relation_from_meet_map(hm)); });
      const PowersetMap rebuilt = PowersetMap::from_function(
          x, y, ExtensionKind::Join, [&](const Subset& a) { return ex.apply(a); });
      s.expect(equal_exhaustive(rebuilt, ex), id, "join-map-determined-by-atoms", [&] { return rt; });

      // Order (anti)isomorphisms, in both directions, and dagger functoriality.
      Rel r2 = r;
      switch (rng.below(4)) {
        case 0:
        case 1: r2 = join(r, random_relation(rng, x, y, 0.25)); break;
        case 2: r2 = meet(r, random_relation(rng, x, y, 0.6)); break;
        default: r2 = random_relation(rng, x, y, d); break;
      }
      for (const auto& [a, b] : {std::pair<const Rel*, const Rel*>{&r, &r2}, {&r2, &r}}) {
        const LawReport lr = check_biduality_laws(*a, *b);
        s.absorb(lr, id);
        const bool strict = leq(*a, *b) && !(*a == *b);
        for (const auto& law : lr.laws) {
          if (!law.applicable) continue;
          if (law.witness.rfind("strict at", 0) == 0) ++strict_witnesses;
          s.expect(!strict || !law.witness.empty(), id, law.name + " strictness witness",
                   [&] { return rel_text(*a) + " < " + rel_text(*b); });
        }
      }
      s.absorb(check_biduality_laws(r, random_relation(rng, y, z, d)), id);
    });
  }
  s.note("strictness witnesses: " + std::to_string(strict_witnesses));
  if (cases >= 20 && strict_witnesses == 0) s.fail("all", "strictness witnesses", "none found");
  return s.finish();
}

// --- beck-chevalley ----------------------------------------------------------

Report beck_chevalley(const LawOptions& opts) {
  Suite s("beck-chevalley");
  const std::size_t cases = or_default(opts.cases, 500);
  const std::size_t max_size = or_default(opts.max_size, 4);
  std::size_t non_pullbacks = 0, failing = 0;

  for (std::size_t i = 0; i < cases; ++i) {
    const std::string id = case_name(i);
    s.run(id, [&] {
      Rng rng(case_seed(opts.seed, i));
      const FiniteSet x = numbered_set("X", rng.between(1, max_size), "x");
      const FiniteSet y = numbered_set("Y", rng.between(1, max_size), "y");
      const FiniteSet z = numbered_set("Z", rng.between(1, max_size), "z");
      const Rel f = random_function(rng, y, x);
      const Rel g = random_function(rng, z, x);
      const Square sq = set_pullback(f, g);
      const std::string text = rel_text(f) + ", " + rel_text(g);
      s.expect(is_pullback(sq), id, "constructed square is a pullback", [&] { return text; });
      s.expect(check_beck_chevalley(sq), id, "beck-chevalley", [&] { return text; });
      // The same equation through the powerset maps.
      const PowersetMap lhs = compose(preimage_map(sq.p), exists_map(sq.q));
      const PowersetMap rhs = compose(exists_map(f), preimage_map(g));
      s.expect(equal_exhaustive(lhs, rhs), id, "beck-chevalley-powerset", [&] { return text; });

      // A commuting square that is not a pullback: drop or repeat apex points.
      const FiniteSet& apex = sq.p.dom();
      if (apex.empty()) return;
      const auto pt = function_table(sq.p);
      const auto qt = function_table(sq.q);
      std::vector<std::size_t> keep;
      const bool drop = rng.chance(0.6);
      for (std::size_t u = 0; u < apex.size(); ++u) {
        if (drop && rng.chance(0.4)) continue;
        keep.push_back(u);
        if (!drop && rng.chance(0.4)) keep.push_back(u);
      }
      if (keep.size() == apex.size() && drop) return;
      if (!drop && keep.size() == apex.size()) keep.push_back(0);
      FiniteSet p_set = numbered_set("P", keep.size(), "u");
      std::vector<std::size_t> p2, q2;
      for (std::size_t u : keep) {
        p2.push_back(pt[u]);
        q2.push_back(qt[u]);
      }
      const Square bad{Rel::from_function(p_set, y, p2), Rel::from_function(p_set, z, q2), f, g};
      s.expect(square_commutes(bad), id, "non-pullback square commutes", [&] { return text; });
      s.expect(!is_pullback(bad), id, "non-pullback square detected", [&] { return text; });
      ++non_pullbacks;
      if (!beck_chevalley_holds(bad)) ++failing;
      bool refused = false;
      try {
        check_beck_chevalley(bad);
      } catch (const Error& e) {
        refused = e.kind() == ErrorKind::NotAPullback;
      }
      s.expect(refused, id, "check refuses non-pullback", [&] { return text; });
    });
  }
  s.note("commuting non-pullback squares: " + std::to_string(non_pullbacks) +
         ", of which the equation fails on " + std::to_string(failing));
  if (cases >= 50 && failing < 5) {
    s.fail("all", "non-pullback failures", "only " + std::to_string(failing) + " found");
  }
  return s.finish();
}

// --- topological -------------------------------------------------------------

struct RandomFamily {
  LiftFamily family;
  KripkeFrame lift;
};

RandomFamily random_family(Rng& rng, std::size_t max_size, const AgentSet& agents,
                           std::size_t count,
                           const std::function<KripkeFrame(const FiniteSet&)>& target) {
  FiniteSet x = numbered_set("X", rng.between(1, max_size), "x");
  LiftFamily fam{x, agents, {}, {}};
  for (std::size_t i = 0; i < count; ++i) {
    FiniteSet y = numbered_set("Y" + std::to_string(i), rng.between(1, max_size), "y");
    fam.targets.push_back(target(y));
    fam.fns.push_back(random_function(rng, x, y));
  }
  KripkeFrame lift = initial_lift(fam);
  return RandomFamily{std::move(fam), std::move(lift)};
}

std::string family_text(const LiftFamily& fam) {
  std::string out;
  for (std::size_t i = 0; i < fam.fns.size(); ++i) {
    if (i) out += "; ";
    out += rel_text(fam.fns[i]);
    for (const Rel& r : fam.targets[i].relations()) out += " " + rel_text(r);
  }
  return out.empty() ? "empty family" : out;
}

Report topological(const LawOptions& opts) {
  Suite s("topological");
  const std::size_t cases = or_default(opts.cases, 500);
  const std::size_t max_size = or_default(opts.max_size, 3);
  const std::size_t families = std::max<std::size_t>(1, cases / 10);

  // Universal property of the initial lift, exhaustive over Z with |Z| <= 2.
  std::size_t universal_checks = 0, eq12_candidates = 0;
  for (std::size_t i = 0; i < families; ++i) {
    const std::string id = "lift " + std::to_string(i);
    s.run(id, [&] {
      Rng rng(case_seed(opts.seed, 1000000 + i));
      const AgentSet agents = agent_names(rng.between(1, 2));
      RandomFamily rf = random_family(rng, max_size, agents, rng.below(3), [&](const FiniteSet& y) {
        return random_frame(rng, y, agents, 0.45);
      });
      const LiftFamily& fam = rf.family;
      const KripkeFrame& lift = rf.lift;
      const FiniteSet& x = fam.carrier;

      for (std::size_t a = 0; a < agents.size(); ++a)
        for (std::size_t w = 0; w < x.size(); ++w)
          for (std::size_t v = 0; v < x.size(); ++v) {
            bool all = true;
            for (std::size_t k = 0; k < fam.fns.size(); ++k) {
              const auto t = function_table(fam.fns[k]);
              all = all && fam.targets[k].rel(a).contains(t[w], t[v]);
            }
            s.expect(lift.rel(a).contains(w, v) == all, id, "initial-lift-pointwise",
                     [&] { return family_text(fam) + " at " + x.element(w) + "," + x.element(v); });
          }

      for (std::size_t zn = 1; zn <= 2; ++zn) {
        const FiniteSet z = numbered_set("Z", zn, "z");
        std::vector<Rel> rels;
        for_each_relation(z, z, [&](const Rel& r) { rels.push_back(r); });
        std::size_t tables = 1;
        for (std::size_t k = 0; k < zn; ++k) tables *= x.size();
        std::size_t combos = 1;
        for (std::size_t a = 0; a < agents.size(); ++a) combos *= rels.size();
        for (std::size_t t = 0; t < tables; ++t) {
          std::vector<std::size_t> table(zn);
          for (std::size_t k = 0, c = t; k < zn; ++k, c /= x.size()) table[k] = c % x.size();
          const Rel g = Rel::from_function(z, x, table);
          std::vector<Rel> through;
          for (const Rel& f : fam.fns) through.push_back(compose(g, f));
          for (std::size_t c = 0; c < combos; ++c) {
            std::vector<Rel> rz;
            for (std::size_t a = 0, cc = c; a < agents.size(); ++a, cc /= rels.size())
              rz.push_back(rels[cc % rels.size()]);
            KripkeFrame zf(z, agents, std::move(rz));
            bool all = true;
            for (std::size_t k = 0; k < fam.fns.size() && all; ++k)
              all = is_monotone(FrameMap(zf, fam.targets[k], through[k]));
            const bool direct = is_monotone(FrameMap(zf, lift, g));
            ++universal_checks;
            s.expect(all == direct, id, "initial-lift-universal", [&] {
              std::string w = family_text(fam) + "; g=" + rel_text(g);
              for (const Rel& r : zf.relations()) w += " R_Z=" + rel_text(r);
              return w;
            });
          }
        }
      }

      // R <= R_X iff every f_i preserves R.
      std::vector<Rel> candidates;
      for (int k = 0; k < 4; ++k) {
        const Rel r = random_relation(rng, x, x, 0.4);
        candidates.push_back(k % 2 == 0 ? meet(r, lift.rel(rng.below(agents.size()))) : r);
      }
      eq12_candidates += candidates.size();
      s.expect(largest_preserved_check(fam, lift, candidates), id, "largest-preserved",
               [&] { return family_text(fam); });
    });
  }

  // Reflexivity, transitivity and symmetry survive initial lifts.
  for (std::size_t i = 0; i < families * 2; ++i) {
    const std::string id = "closure " + std::to_string(i);
    s.run(id, [&] {
      Rng rng(case_seed(opts.seed, 2000000 + i));
      const std::size_t props = 1 + i % 7;
      const bool refl = props & 1, trans = props & 2, sym = props & 4;
      const AgentSet agents = agent_names(rng.between(1, 2));
      RandomFamily rf = random_family(rng, max_size, agents, rng.between(1, 3), [&](const FiniteSet& y) {
        return random_frame_with(rng, y, agents, refl, trans, sym);
      });
      for (const Rel& r : rf.lift.relations()) {
        const std::string fam = family_text(rf.family);
        s.expect(!refl || is_reflexive(r), id, "lift-reflexive", [&] { return fam; });
        s.expect(!trans || is_transitive(r), id, "lift-transitive", [&] { return fam; });
        s.expect(!sym || is_symmetric(r), id, "lift-symmetric", [&] { return fam; });
      }
    });
  }

  // Pullbacks of bounded morphisms along monotone maps.
  std::size_t monotone_counterexamples = 0;
  for (std::size_t i = 0; i < cases; ++i) {
    const std::string id = case_name(i);
    s.run(id, [&] {
      Rng rng(case_seed(opts.seed, i));
      const AgentSet agents = agent_names(rng.between(1, 2));
      const KripkeFrame x = random_frame(rng, numbered_set("X", rng.between(1, max_size), "x"), agents, 0.45);
      const FrameMap f = random_monotone_into(rng, x, rng.between(1, max_size), "Y");
      const FrameMap g = random_bounded_onto(rng, x, rng.between(x.carrier().size(), max_size + 1), "Z");
      const std::string text = rel_text(f.fn()) + ", " + rel_text(g.fn());
      s.expect(is_monotone(f), id, "generator: f monotone", [&] { return text; });
      s.expect(is_bounded(g), id, "generator: g bounded", [&] { return text; });
      s.expect(is_monotone(g), id, "bounded implies monotone", [&] { return text; });
      s.expect(check_pullback_preserves_bounded(f, g), id, "pullback-preserves-bounded",
               [&] { return text; });
      const FrameMap g2 = random_monotone_into(rng, x, rng.between(1, max_size), "Z");
      if (!is_bounded(g2) && !check_pullback_preserves_bounded(f, g2)) ++monotone_counterexamples;
    });
  }
  s.note("universal-property instances: " + std::to_string(universal_checks));
  s.note("largest-preserved candidates: " + std::to_string(eq12_candidates));
  s.note("merely monotone g whose pullback is not bounded: " +
         std::to_string(monotone_counterexamples));
  return s.finish();
}

// --- pal-reduction / del-reduction --------------------------------------------

KripkeModel suite_model(Rng& rng, std::size_t max_size) {
  ModelShape shape;
  shape.max_worlds = max_size;
  shape.agents = rng.between(1, 2);
  return random_model(rng, shape);
}

Report pal_reduction(const LawOptions& opts) {
  Suite s("pal-reduction");
  const std::size_t cases = or_default(opts.cases, 500);
  const std::size_t max_size = or_default(opts.max_size, 4);
  std::size_t steps = 0;
  for (std::size_t i = 0; i < cases; ++i) {
    const std::string id = case_name(i);
    s.run(id, [&] {
      Rng rng(case_seed(opts.seed, i));
      const KripkeModel m = suite_model(rng, max_size);
      FormulaShape shape;
      shape.agents = m.agents();
      shape.announcements = true;
      const Formula sigma = random_formula(rng, shape, 2);
      const Formula phi = random_formula(rng, shape, 2);
      const Formula psi = random_formula(rng, shape, 2);
      const std::string text = "sigma=" + print_formula(sigma) + " phi=" + print_formula(phi) +
                               " psi=" + print_formula(psi);
      s.absorb(verify_pal_reductions(m, sigma, phi, psi), id, text);

      EventRegistry reg;
      reg.add(announcement_model(sigma, m.agents(), "A"));
      Evaluator ev(reg);
      s.expect(ev.extension(m, Formula::pal_box(sigma, phi)) ==
                   ev.extension(m, Formula::del_box("A", "e", phi)),
               id, "pal-box-as-event-model", [&] { return text; });
      s.expect(ev.extension(m, Formula::pal_dia(sigma, phi)) ==
                   ev.extension(m, Formula::del_dia("A", "e", phi)),
               id, "pal-dia-as-event-model", [&] { return text; });
      static_precondition_modalities(m, sigma);

      const Formula dynamic = Formula::pal_box(sigma, phi);
      const Reduction red = reduce_to_static(dynamic, reg);
      steps += red.steps.size();
      s.expect(is_static(red.result), id, "reduction-static", [&] { return print_formula(red.result); });
      s.expect(ev.extension(m, red.result) == ev.extension(m, dynamic), id, "reduction-extension",
               [&] { return print_formula(dynamic) + " => " + print_formula(red.result); });
    });
  }
  s.note("reduction steps taken: " + std::to_string(steps));
  return s.finish();
}

Report del_reduction(const LawOptions& opts) {
  Suite s("del-reduction");
  const std::size_t cases = or_default(opts.cases, 500);
  const std::size_t max_size = or_default(opts.max_size, 4);
  std::size_t steps = 0;
  for (std::size_t i = 0; i < cases; ++i) {
    const std::string id = case_name(i);
    s.run(id, [&] {
      Rng rng(case_seed(opts.seed, i));
      const KripkeModel m = suite_model(rng, max_size);
      const EventModel em = random_event_model(rng, "E", m.agents(), 3, {"p", "q"}, 1);
      EventRegistry reg;
      reg.add(em);
      FormulaShape shape;
      shape.agents = m.agents();
      shape.announcements = rng.chance(0.3);
      shape.event_models = {reg.find("E")};
      const Formula phi = random_formula(rng, shape, 2);
      const Formula psi = random_formula(rng, shape, 2);
      const std::string& e = rng.pick(em.events().elements());
      const std::string text = "E=" + rel_text(em.frame().rel(0)) + " event " + e +
                               " phi=" + print_formula(phi) + " psi=" + print_formula(psi);
      s.absorb(verify_del_reductions(m, em, e, phi, psi, reg), id, text);

      Evaluator ev(reg);
      const UpdateResult& u = ev.product_update(m, em);
      s.expect(u.maps.transition_routes_agree(), id, "transition-routes", [&] { return text; });
      const KripkeFrame lifted = initial_lift(LiftFamily{
          u.maps.frame.carrier(), m.agents(), {u.maps.p_x.fn(), u.maps.p_e.fn()}, {m.frame(), em.frame()}});
      s.expect(lifted == u.updated.frame(), id, "update-is-initial-lift", [&] { return text; });

      const Formula dynamic = Formula::del_box("E", e, phi);
      const Reduction red = reduce_to_static(dynamic, reg);
      steps += red.steps.size();
      s.expect(is_static(red.result), id, "reduction-static", [&] { return print_formula(red.result); });
      s.expect(ev.extension(m, red.result) == ev.extension(m, dynamic), id, "reduction-extension",
               [&] { return print_formula(dynamic) + " => " + print_formula(red.result); });
    });
  }
  s.note("reduction steps taken: " + std::to_string(steps));
  return s.finish();
}

// --- no-learning -------------------------------------------------------------

Report no_learning(const LawOptions& opts) {
  Suite s("no-learning");
  const std::size_t cases = or_default(opts.cases, 200);
  const std::size_t max_size = or_default(opts.max_size, 4);
  std::size_t bounded = 0, witnesses = 0;
  for (std::size_t i = 0; i < cases; ++i) {
    const std::string id = case_name(i);
    s.run(id, [&] {
      Rng rng(case_seed(opts.seed, i));
      const KripkeModel m = suite_model(rng, max_size);
      const EventModel em = rng.chance(0.35)
                                ? random_serial_event_model(rng, "E", m.agents(), 3)
                                : random_event_model(rng, "E", m.agents(), 3, {"p", "q"}, 1);
      const NoLearningReport r = no_learning_check(m, em, 2);
      if (r.p_x_bounded) {
        ++bounded;
        for (const auto& f : r.failures) s.fail(id, "no-learning", f);
      } else if (r.learning_witness) {
        ++witnesses;
      }
    });
  }
  s.note("updates with bounded p_X: " + std::to_string(bounded));
  s.note("learning witnesses: " + std::to_string(witnesses));
  if (cases >= 50 && witnesses < 10) {
    s.fail("all", "learning witnesses", "only " + std::to_string(witnesses) + " found");
  }
  return s.finish();
}

// --- sheaf -------------------------------------------------------------------

SheafShape sheaf_shape(Rng& rng, std::size_t max_size) {
  SheafShape shape;
  shape.max_worlds = max_size;
  shape.max_fiber = 2;
  shape.agents = rng.between(1, 2);
  return shape;
}

std::vector<std::string> variables(std::initializer_list<const char*> pool, std::size_t n) {
  std::vector<std::string> out;
  for (const char* v : pool) {
    if (out.size() == n) break;
    out.emplace_back(v);
  }
  return out;
}

std::string sheaf_text(const FrameMap& proj) {
  std::string out = rel_text(proj.fn());
  for (const Rel& r : proj.src().relations()) out += " R_D=" + rel_text(r);
  for (const Rel& r : proj.dst().relations()) out += " R_X=" + rel_text(r);
  return out;
}

Report sheaf_suite(const LawOptions& opts) {
  Suite s("sheaf");
  const std::size_t cases = or_default(opts.cases, 200);
  const std::size_t max_size = or_default(opts.max_size, 3);
  std::size_t planted = 0, sheaves = 0, arrows = 0;

  for (std::size_t i = 0; i < cases; ++i) {
    const std::string id = "candidate " + std::to_string(i);
    s.run(id, [&] {
      Rng rng(case_seed(opts.seed, 3000000 + i));
      const SheafCandidate c = random_sheaf_candidate(rng, sheaf_shape(rng, max_size));
      const SheafDiagnostics d = is_kripke_sheaf(c.proj);
      const std::string text = sheaf_text(c.proj);
      s.expect(d.characterizations_agree(), id, "direct-vs-diagonal", [&] { return text; });
      if (c.planted == Planted::None) {
        ++sheaves;
        s.expect(d.ok(), id, "generated sheaf accepted", [&] { return d.failed + ": " + d.witness; });
        for (std::size_t n = 0; n <= 3; ++n) {
          const FiberedPower p = fibered_power(c.proj, n);
          const SheafDiagnostics dn = is_kripke_sheaf(p.proj);
          s.expect(dn.ok() && dn.characterizations_agree(), id, "power-is-sheaf:" + std::to_string(n),
                   [&] { return text + "; " + dn.failed + ": " + dn.witness; });
        }
      } else {
        ++planted;
        const std::string expected = c.planted == Planted::ExtraEdge ? "sheaf condition" : "bounded";
        s.expect(!d.ok() && d.failed == expected, id, "planted defect detected",
                 [&] { return text + "; reported '" + d.failed + "'"; });
        s.expect(!d.witness.empty(), id, "planted defect witness", [&] { return text; });
      }
    });
  }

  for (std::size_t i = 0; i < cases; ++i) {
    const std::string id = case_name(i);
    s.run(id, [&] {
      Rng rng(case_seed(opts.seed, i));
      const SheafModel m = random_sheaf_model(rng, sheaf_shape(rng, max_size));
      const std::string text = sheaf_text(m.sheaf().proj());

      for (const auto& [name, fi] : m.functions()) {
        const FiberedPower& p = m.power(fi.arity);
        const FrameMap fm(p.frame, m.sheaf().total(),
                          Rel::from_function(p.frame.carrier(), m.sheaf().total().carrier(), fi.table));
        s.expect(is_bounded(fm), id, "slice-monotone-is-bounded:" + name, [&] { return text; });
      }

      const EventModel em = random_fo_event_model(rng, m, "E", 2);
      const SheafUpdate u = pullback_update(m, em);
      const SheafDiagnostics d = is_kripke_sheaf(u.updated.sheaf().proj());
      s.expect(d.ok(), id, "update-is-sheaf", [&] { return text + "; " + d.failed + ": " + d.witness; });
      for (std::size_t n = 0; n <= 2; ++n) {
        const auto diff = compare_power_with_pullback(m, u, n);
        s.expect(!diff, id, "power-commutes-with-pullback:" + std::to_string(n),
                 [&] { return text + "; " + *diff; });
      }

      const bool has_c = m.signature().functions.count("c") > 0;
      for (int t = 0; t < 3; ++t) {
        const std::size_t k = rng.between(has_c ? 0 : 1, 2);
        const std::size_t n = rng.below(3);
        const auto ctx = variables({"x", "z"}, k);
        std::vector<Term> terms;
        for (std::size_t j = 0; j < n; ++j) terms.push_back(random_term(rng, m, ctx, 1));
        const auto f = tuple_table(m, ctx, terms);
        for (std::size_t e = 0; e < em.events().size(); ++e) {
          ++arrows;
          std::string terms_text;
          for (const auto& term : terms) terms_text += print_term(term) + " ";
          s.absorb(check_transition_naturality(m, u, e, k, n, f), id,
                   text + "; k=" + std::to_string(k) + " terms " + terms_text);
        }
      }
    });
  }
  s.note("generated sheaves: " + std::to_string(sheaves) + ", planted non-sheaves: " +
         std::to_string(planted));
  s.note("transition naturality instances: " + std::to_string(arrows));
  return s.finish();
}

// --- fo-reduction ------------------------------------------------------------

Report fo_reduction(const LawOptions& opts) {
  Suite s("fo-reduction");
  const std::size_t cases = or_default(opts.cases, 200);
  const std::size_t max_size = or_default(opts.max_size, 3);
  for (std::size_t i = 0; i < cases; ++i) {
    const std::string id = case_name(i);
    s.run(id, [&] {
      Rng rng(case_seed(opts.seed, i));
      const SheafModel m = random_sheaf_model(rng, sheaf_shape(rng, max_size));
      const EventModel em = random_fo_event_model(rng, m, "E", 2);
      EventRegistry reg;
      reg.add(em);
      const bool has_c = m.signature().functions.count("c") > 0;

      const auto ctx = variables({"x", "z"}, rng.below(3));
      FoShape shape{ctx, true, reg.find("E")};
      const Formula phi = random_fo_formula(rng, m, shape, 2);
      const Formula psi = random_fo_formula(rng, m, shape, 2);
      const std::string& e = rng.pick(em.events().elements());
      const std::string text = print_formula(FormulaInContext{ctx, phi});

      // Substitution and its commutation with the modalities.
      const auto new_ctx = variables({"u", "v"}, rng.between(has_c ? 0 : 1, 2));
      std::vector<Term> terms;
      for (std::size_t j = 0; j < ctx.size(); ++j) terms.push_back(random_term(rng, m, new_ctx, 1));
      s.absorb(check_substitution_box_commutation(m, {ctx, phi}, new_ctx, terms, &em, reg), id, text);

      // Quantifier reduction.
      std::vector<std::string> inner = ctx;
      inner.push_back("y");
      const Formula body = random_fo_formula(rng, m, FoShape{inner, true, reg.find("E")}, 1);
      s.absorb(verify_quantifier_reduction(m, em, e, ctx, "y", body, reg), id,
               print_formula(FormulaInContext{inner, body}));

      // Propositional reduction axioms in context.
      std::vector<Equivalence> eqs = del_reduction_instances(em, e, phi, psi, {"p"});
      if (!ctx.empty() || has_c) {
        const Formula fx = Formula::pred("F", {random_term(rng, m, ctx, 1)});
        eqs.push_back({"del-pred:F", Formula::del_box("E", e, fx), Formula::imp(em.pre(e), fx)});
      }
      s.absorb(check_equivalences_in_context(m, ctx, eqs, reg), id, text);

      // With no variables the in-context semantics is the propositional one on the base.
      const EventModel prop = random_event_model(rng, "P", m.agents(), 2, {"p"}, 1);
      EventRegistry preg;
      preg.add(prop);
      FormulaShape fshape;
      fshape.atoms = {"p"};
      fshape.agents = m.agents();
      fshape.event_models = {preg.find("P")};
      const Formula f0 = random_formula(rng, fshape, 2);
      const std::string& pe = rng.pick(prop.events().elements());
      const KripkeModel base(m.sheaf().base(), {{"p", m.relation("p", 0)}});
      for (bool box : {true, false}) {
        const Subset in_context = del_in_context(m, prop, pe, {{}, f0}, box, preg);
        const Formula g = box ? Formula::del_box("P", pe, f0) : Formula::del_dia("P", pe, f0);
        const Subset flat = extension(base, g, preg);
        s.expect(in_context.bits() == flat.bits(), id, "empty-context-agrees",
                 [&] { return print_formula(g); });
      }

      // Reduction to a static formula in context.
      const Formula dynamic = Formula::del_box("E", e, phi);
      const Reduction red = reduce_in_context(m, {ctx, dynamic}, reg);
      s.expect(is_static(red.result), id, "reduction-static", [&] { return print_formula(red.result); });
      s.expect(interp_formula(m, {ctx, red.result}, reg) == interp_formula(m, {ctx, dynamic}, reg), id,
               "reduction-extension", [&] {
                 return print_formula(dynamic) + " => " + print_formula(red.result);
               });
    });
  }
  return s.finish();
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "rel-laws",      "duality",     "beck-chevalley", "topological", "pal-reduction",
      "del-reduction", "no-learning", "sheaf",          "fo-reduction"};
  return names;
}

Report run_suite(std::string_view name, const LawOptions& opts) {
  if (name == "rel-laws") return rel_laws(opts, [](const Rel& r) { return dagger(r); }, "rel-laws");
  if (name == "duality") return duality(opts);
  if (name == "beck-chevalley") return beck_chevalley(opts);
  if (name == "topological") return topological(opts);
  if (name == "pal-reduction") return pal_reduction(opts);
  if (name == "del-reduction") return del_reduction(opts);
  if (name == "no-learning") return no_learning(opts);
  if (name == "sheaf") return sheaf_suite(opts);
  if (name == "fo-reduction") return fo_reduction(opts);
  fail(ErrorKind::UnknownSymbol, "no law suite named '" + std::string(name) + "'");
}

Report run_self_test(const LawOptions& opts) {
  LawOptions o = opts;
  if (o.cases == 0) o.cases = 50;
  // The mutant forgets one pair of every nonempty relation.
  auto broken = [](const Rel& r) {
    auto pairs = dagger(r).pairs();
    if (!pairs.empty()) pairs.erase(pairs.begin());
    return Rel::from_pairs(r.cod(), r.dom(), pairs);
  };
  return rel_laws(o, broken, "self-test");
}

}  // namespace catdel
