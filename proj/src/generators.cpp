#include "catdel/generators.hpp"

#include <algorithm>
#include <set>

#include "catdel/error.hpp"

namespace catdel {

std::size_t Rng::below(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

std::size_t Rng::between(std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(engine_);
}

bool Rng::chance(double p) { return std::bernoulli_distribution(p)(engine_); }

std::uint64_t Rng::bits() { return engine_(); }

std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = seed * 0x9e3779b97f4a7c15ULL + index + 0x632be59bd9b4e019ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

AgentSet agent_names(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back(std::string(1, static_cast<char>('a' + i)));
  return AgentSet(std::move(names));
}

Rel random_relation(Rng& rng, const FiniteSet& dom, const FiniteSet& cod, double density) {
  return Rel::from_predicate(dom, cod, [&](std::size_t, std::size_t) { return rng.chance(density); });
}

Rel random_function(Rng& rng, const FiniteSet& dom, const FiniteSet& cod) {
  std::vector<std::size_t> table(dom.size());
  for (auto& t : table) t = rng.below(cod.size());
  return Rel::from_function(dom, cod, table);
}

Rel random_surjection(Rng& rng, const FiniteSet& dom, const FiniteSet& cod) {
  if (dom.size() < cod.size()) {
    fail(ErrorKind::InvariantViolation, "random_surjection: domain smaller than codomain");
  }
  std::vector<std::size_t> table(dom.size());
  for (std::size_t i = 0; i < dom.size(); ++i) table[i] = i < cod.size() ? i : rng.below(cod.size());
  std::shuffle(table.begin(), table.end(), std::mt19937_64(rng.bits()));
  return Rel::from_function(dom, cod, table);
}

KripkeFrame random_frame(Rng& rng, const FiniteSet& carrier, const AgentSet& agents, double density) {
  std::vector<Rel> rels;
  for (std::size_t a = 0; a < agents.size(); ++a) rels.push_back(random_relation(rng, carrier, carrier, density));
  return KripkeFrame(carrier, agents, std::move(rels));
}

KripkeFrame random_frame_with(Rng& rng, const FiniteSet& carrier, const AgentSet& agents,
                              bool reflexive, bool transitive, bool symmetric) {
  std::vector<Rel> rels;
  for (std::size_t a = 0; a < agents.size(); ++a) {
    Rel r = random_relation(rng, carrier, carrier, 0.3);
    // Closing under symmetry and transitivity in turn stays symmetric.
    if (symmetric) r = join(r, dagger(r));
    if (transitive) {
      Rel closed = closure_reflexive_transitive(r);
      r = reflexive ? closed : compose(r, closed);
    }
    if (reflexive) r = join(r, identity(carrier));
    rels.push_back(r);
  }
  return KripkeFrame(carrier, agents, std::move(rels));
}

FrameMap random_monotone_into(Rng& rng, const KripkeFrame& target, std::size_t n,
                              const std::string& name) {
  FiniteSet carrier = numbered_set(name, n, "z");
  Rel f = random_function(rng, carrier, target.carrier());
  std::vector<Rel> rels;
  for (const Rel& r : target.relations()) {
    const Rel allowed = compose(compose(f, r), dagger(f));
    rels.push_back(meet(allowed, random_relation(rng, carrier, carrier, 0.6)));
  }
  return FrameMap(KripkeFrame(carrier, target.agents(), std::move(rels)), target, f);
}

FrameMap random_bounded_onto(Rng& rng, const KripkeFrame& target, std::size_t n,
                             const std::string& name) {
  FiniteSet carrier = numbered_set(name, n, "z");
  const FiniteSet& x = target.carrier();
  Rel g = random_surjection(rng, carrier, x);
  const auto table = function_table(g);
  std::vector<std::vector<std::size_t>> fiber(x.size());
  for (std::size_t z = 0; z < n; ++z) fiber[table[z]].push_back(z);

  std::vector<Rel> rels;
  for (const Rel& r : target.relations()) {
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t z = 0; z < n; ++z) {
      for (std::size_t w : r.successors(table[z])) {
        const auto& fib = fiber[w];
        const std::size_t forced = fib[rng.below(fib.size())];
        for (std::size_t z2 : fib)
          if (z2 == forced || rng.chance(0.4)) edges.emplace_back(z, z2);
      }
    }
    rels.push_back(Rel::from_pairs(carrier, carrier, edges));
  }
  return FrameMap(KripkeFrame(carrier, target.agents(), std::move(rels)), target, g);
}

KripkeModel random_model(Rng& rng, const ModelShape& shape, const std::string& name) {
  FiniteSet carrier = numbered_set(name, rng.between(1, shape.max_worlds), "w");
  KripkeFrame frame = random_frame(rng, carrier, agent_names(shape.agents), 0.45);
  std::map<std::string, Subset> val;
  for (const auto& p : shape.atoms) {
    std::vector<bool> bits(carrier.size());
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = rng.chance(0.5);
    val.emplace(p, Subset(carrier, std::move(bits)));
  }
  return KripkeModel(std::move(frame), std::move(val));
}

namespace {

Formula random_leaf(Rng& rng, const std::vector<std::string>& atoms) {
  const std::size_t k = rng.below(atoms.size() + 2);
  if (k < atoms.size()) return Formula::atom(atoms[k]);
  if (rng.chance(0.5)) return Formula::atom(atoms[rng.below(atoms.size())]);
  return k == atoms.size() ? Formula::top() : Formula::bot();
}

Formula random_static(Rng& rng, const std::vector<std::string>& atoms, const AgentSet& agents,
                      std::size_t depth) {
  if (depth == 0 || rng.chance(0.25)) return random_leaf(rng, atoms);
  switch (rng.below(agents.size() > 0 ? 6 : 4)) {
    case 0: return Formula::neg(random_static(rng, atoms, agents, depth - 1));
    case 1:
      return Formula::conj(random_static(rng, atoms, agents, depth - 1),
                           random_static(rng, atoms, agents, depth - 1));
    case 2:
      return Formula::disj(random_static(rng, atoms, agents, depth - 1),
                           random_static(rng, atoms, agents, depth - 1));
    case 3:
      return Formula::imp(random_static(rng, atoms, agents, depth - 1),
                          random_static(rng, atoms, agents, depth - 1));
    case 4:
      return Formula::box(rng.pick(agents.labels()), random_static(rng, atoms, agents, depth - 1));
    default:
      return Formula::dia(rng.pick(agents.labels()), random_static(rng, atoms, agents, depth - 1));
  }
}

}  // namespace

Formula random_formula(Rng& rng, const FormulaShape& shape, std::size_t depth) {
  if (depth == 0 || rng.chance(0.2)) return random_leaf(rng, shape.atoms);
  std::vector<int> choices{0, 1, 2, 3};
  if (shape.agents.size() > 0) choices.insert(choices.end(), {4, 5});
  if (shape.announcements) choices.insert(choices.end(), {6, 7});
  if (!shape.event_models.empty()) choices.insert(choices.end(), {8, 9});
  const std::size_t sub = depth - 1;
  switch (rng.pick(choices)) {
    case 0: return Formula::neg(random_formula(rng, shape, sub));
    case 1: return Formula::conj(random_formula(rng, shape, sub), random_formula(rng, shape, sub));
    case 2: return Formula::disj(random_formula(rng, shape, sub), random_formula(rng, shape, sub));
    case 3: return Formula::imp(random_formula(rng, shape, sub), random_formula(rng, shape, sub));
    case 4: return Formula::box(rng.pick(shape.agents.labels()), random_formula(rng, shape, sub));
    case 5: return Formula::dia(rng.pick(shape.agents.labels()), random_formula(rng, shape, sub));
    case 6:
      return Formula::pal_box(random_static(rng, shape.atoms, shape.agents, 1),
                              random_formula(rng, shape, sub));
    case 7:
      return Formula::pal_dia(random_static(rng, shape.atoms, shape.agents, 1),
                              random_formula(rng, shape, sub));
    default: {
      const EventModel& em = *rng.pick(shape.event_models);
      const std::string& e = rng.pick(em.events().elements());
      Formula body = random_formula(rng, shape, sub);
      return rng.chance(0.5) ? Formula::del_box(em.name(), e, body)
                             : Formula::del_dia(em.name(), e, body);
    }
  }
}

EventModel random_event_model(Rng& rng, const std::string& name, const AgentSet& agents,
                              std::size_t max_events, const std::vector<std::string>& atoms,
                              std::size_t pre_depth) {
  FiniteSet events = numbered_set(name, rng.between(1, max_events), "e");
  KripkeFrame frame = random_frame(rng, events, agents, 0.5);
  std::map<std::string, Formula> pre;
  for (const auto& e : events.elements()) pre.emplace(e, random_static(rng, atoms, agents, pre_depth));
  return EventModel(name, std::move(frame), std::move(pre));
}

EventModel random_serial_event_model(Rng& rng, const std::string& name, const AgentSet& agents,
                                     std::size_t max_events) {
  FiniteSet events = numbered_set(name, rng.between(1, max_events), "e");
  std::vector<Rel> rels;
  for (std::size_t a = 0; a < agents.size(); ++a) {
    Rel r = random_relation(rng, events, events, 0.4);
    std::vector<std::pair<std::size_t, std::size_t>> extra;
    for (std::size_t e = 0; e < events.size(); ++e)
      if (r.successors(e).empty()) extra.emplace_back(e, rng.below(events.size()));
    rels.push_back(join(r, Rel::from_pairs(events, events, extra)));
  }
  std::map<std::string, Formula> pre;
  for (const auto& e : events.elements()) pre.emplace(e, Formula::top());
  return EventModel(name, KripkeFrame(events, agents, std::move(rels)), std::move(pre));
}

namespace {

struct SheafParts {
  KripkeFrame base;
  FiniteSet d;
  std::vector<std::size_t> pi;
  std::vector<std::vector<std::size_t>> fiber;
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edges;  // per agent
};

SheafParts random_sheaf_parts(Rng& rng, const SheafShape& shape) {
  FiniteSet x = numbered_set("X", rng.between(1, shape.max_worlds), "w");
  KripkeFrame base = random_frame(rng, x, agent_names(shape.agents), 0.5);
  std::vector<std::size_t> pi;
  std::vector<std::vector<std::size_t>> fiber(x.size());
  for (std::size_t w = 0; w < x.size(); ++w) {
    const std::size_t k = rng.between(1, shape.max_fiber);
    for (std::size_t i = 0; i < k; ++i) {
      fiber[w].push_back(pi.size());
      pi.push_back(w);
    }
  }
  FiniteSet d = numbered_set("D", pi.size(), "d");
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edges(shape.agents);
  for (std::size_t a = 0; a < shape.agents; ++a) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      for (std::size_t w2 : base.rel(a).successors(pi[i])) {
        edges[a].emplace_back(i, fiber[w2][rng.below(fiber[w2].size())]);
      }
    }
  }
  return SheafParts{std::move(base), std::move(d), std::move(pi), std::move(fiber), std::move(edges)};
}

FrameMap assemble(const SheafParts& s) {
  std::vector<Rel> rels;
  for (const auto& e : s.edges) rels.push_back(Rel::from_pairs(s.d, s.d, e));
  KripkeFrame total(s.d, s.base.agents(), std::move(rels));
  return FrameMap(total, s.base, Rel::from_function(s.d, s.base.carrier(), s.pi));
}

bool plant(Rng& rng, SheafParts& s, Planted kind) {
  const std::size_t agent = rng.below(s.edges.size());
  auto& edges = s.edges[agent];
  const Rel& rx = s.base.rel(agent);
  switch (kind) {
    case Planted::ExtraEdge: {
      std::vector<std::pair<std::size_t, std::size_t>> options;
      for (auto [i, j] : edges)
        for (std::size_t k : s.fiber[s.pi[j]])
          if (k != j) options.emplace_back(i, k);
      if (options.empty()) return false;
      edges.push_back(rng.pick(options));
      return true;
    }
    case Planted::MissingEdge: {
      if (edges.empty()) return false;
      edges.erase(edges.begin() + static_cast<std::ptrdiff_t>(rng.below(edges.size())));
      return true;
    }
    case Planted::StrayEdge: {
      std::vector<std::pair<std::size_t, std::size_t>> options;
      for (std::size_t i = 0; i < s.d.size(); ++i)
        for (std::size_t j = 0; j < s.d.size(); ++j)
          if (!rx.contains(s.pi[i], s.pi[j])) options.emplace_back(i, j);
      if (options.empty()) return false;
      edges.push_back(rng.pick(options));
      return true;
    }
    case Planted::None:
      return true;
  }
  return false;
}

}  // namespace

FrameMap random_sheaf(Rng& rng, const SheafShape& shape) {
  return assemble(random_sheaf_parts(rng, shape));
}

SheafCandidate random_sheaf_candidate(Rng& rng, const SheafShape& shape) {
  SheafParts parts = random_sheaf_parts(rng, shape);
  if (rng.chance(0.5)) return SheafCandidate{assemble(parts), Planted::None};
  std::vector<Planted> kinds{Planted::ExtraEdge, Planted::MissingEdge, Planted::StrayEdge};
  std::shuffle(kinds.begin(), kinds.end(), std::mt19937_64(rng.bits()));
  for (Planted k : kinds)
    if (plant(rng, parts, k)) return SheafCandidate{assemble(parts), k};
  return SheafCandidate{assemble(parts), Planted::None};
}

SheafModel random_sheaf_model(Rng& rng, const SheafShape& shape) {
  FrameMap proj = random_sheaf(rng, shape);
  const KripkeFrame& total = proj.src();
  const KripkeFrame& base = proj.dst();
  const FiniteSet& d = total.carrier();
  const auto& pi = proj.table();
  std::vector<std::vector<std::size_t>> fiber(base.carrier().size());
  for (std::size_t i = 0; i < d.size(); ++i) fiber[pi[i]].push_back(i);

  Signature sig;
  std::map<std::string, FunctionInterp> functions;
  std::map<std::string, Subset> relations;
  auto random_subset = [&](const FiniteSet& c) {
    std::vector<bool> bits(c.size());
    for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = rng.chance(0.5);
    return Subset(c, std::move(bits));
  };

  if (shape.symbols) {
    // f: a monotone fiber-preserving map D -> D; the identity always qualifies.
    std::vector<std::size_t> f_table(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) f_table[i] = i;
    for (int attempt = 0; attempt < 40; ++attempt) {
      std::vector<std::size_t> t(d.size());
      for (std::size_t i = 0; i < d.size(); ++i) t[i] = rng.pick(fiber[pi[i]]);
      if (is_monotone(FrameMap(total, total, Rel::from_function(d, d, t)))) {
        f_table = std::move(t);
        break;
      }
    }
    sig.functions["f"] = 1;
    functions["f"] = FunctionInterp{1, f_table};

    // c: a monotone section X -> D, when one turns up.
    for (int attempt = 0; attempt < 40; ++attempt) {
      std::vector<std::size_t> t(base.carrier().size());
      for (std::size_t w = 0; w < t.size(); ++w) t[w] = rng.pick(fiber[w]);
      if (is_monotone(FrameMap(base, total, Rel::from_function(base.carrier(), d, t)))) {
        sig.functions["c"] = 0;
        functions["c"] = FunctionInterp{0, std::move(t)};
        break;
      }
    }

    sig.relations["F"] = 1;
    relations.emplace("F", random_subset(d));
    const FiberedPower square = fibered_power(proj, 2);
    sig.relations["G"] = 2;
    relations.emplace("G", random_subset(square.frame.carrier()));
    sig.relations["p"] = 0;
    relations.emplace("p", random_subset(base.carrier()));
  }
  return SheafModel(KripkeSheaf(std::move(proj)), std::move(sig), std::move(functions),
                    std::move(relations));
}

Term random_term(Rng& rng, const SheafModel& m, const std::vector<std::string>& context,
                 std::size_t depth) {
  const bool has_f = m.signature().functions.count("f") > 0;
  const bool has_c = m.signature().functions.count("c") > 0;
  if (depth > 0 && has_f && rng.chance(0.35))
    return Term::apply("f", {random_term(rng, m, context, depth - 1)});
  if (context.empty() || (has_c && rng.chance(0.15))) {
    if (!has_c) fail(ErrorKind::InvariantViolation, "random_term: empty context and no constant");
    return Term::apply("c", {});
  }
  return Term::var(rng.pick(context));
}

Formula random_fo_formula(Rng& rng, const SheafModel& m, const FoShape& shape, std::size_t depth) {
  const Signature& sig = m.signature();
  const bool terms_ok = !shape.context.empty() || sig.functions.count("c") > 0;
  auto leaf = [&]() -> Formula {
    std::vector<int> kinds{0};
    if (terms_ok && sig.relations.count("F")) kinds.push_back(1);
    if (terms_ok && sig.relations.count("G")) kinds.push_back(2);
    if (rng.chance(0.1)) return rng.chance(0.5) ? Formula::top() : Formula::bot();
    switch (rng.pick(kinds)) {
      case 1: return Formula::pred("F", {random_term(rng, m, shape.context, 1)});
      case 2:
        return Formula::pred("G", {random_term(rng, m, shape.context, 1),
                                   random_term(rng, m, shape.context, 1)});
      default:
        return sig.relations.count("p") ? Formula::atom("p") : Formula::top();
    }
  };
  if (depth == 0 || rng.chance(0.2)) return leaf();

  std::vector<int> choices{0, 1, 2, 3, 4, 5, 6, 7};
  if (shape.events && shape.event_model) choices.insert(choices.end(), {8, 9});
  const std::size_t sub = depth - 1;
  const auto& agents = m.agents().labels();
  switch (rng.pick(choices)) {
    case 0: return Formula::neg(random_fo_formula(rng, m, shape, sub));
    case 1:
      return Formula::conj(random_fo_formula(rng, m, shape, sub), random_fo_formula(rng, m, shape, sub));
    case 2:
      return Formula::disj(random_fo_formula(rng, m, shape, sub), random_fo_formula(rng, m, shape, sub));
    case 3:
      return Formula::imp(random_fo_formula(rng, m, shape, sub), random_fo_formula(rng, m, shape, sub));
    case 4: return Formula::box(rng.pick(agents), random_fo_formula(rng, m, shape, sub));
    case 5: return Formula::dia(rng.pick(agents), random_fo_formula(rng, m, shape, sub));
    case 6:
    case 7: {
      const std::set<std::string> used(shape.context.begin(), shape.context.end());
      const std::string y = fresh_variable("y", used);
      FoShape inner = shape;
      inner.context.push_back(y);
      Formula body = random_fo_formula(rng, m, inner, sub);
      return rng.chance(0.5) ? Formula::forall(y, body) : Formula::exists(y, body);
    }
    default: {
      const EventModel& em = *shape.event_model;
      const std::string& e = rng.pick(em.events().elements());
      Formula body = random_fo_formula(rng, m, shape, sub);
      return rng.chance(0.5) ? Formula::del_box(em.name(), e, body)
                             : Formula::del_dia(em.name(), e, body);
    }
  }
}

EventModel random_fo_event_model(Rng& rng, const SheafModel& m, const std::string& name,
                                 std::size_t max_events) {
  FiniteSet events = numbered_set(name, rng.between(1, max_events), "e");
  KripkeFrame frame = random_frame(rng, events, m.agents(), 0.5);
  std::map<std::string, Formula> pre;
  for (const auto& e : events.elements()) pre.emplace(e, random_fo_formula(rng, m, FoShape{}, 1));
  return EventModel(name, std::move(frame), std::move(pre));
}

}  // namespace catdel
