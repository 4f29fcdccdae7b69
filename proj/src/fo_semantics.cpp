#include <set>

#include "catdel/error.hpp"
#include "catdel/sheaf.hpp"
#include "catdel/syntax.hpp"

namespace catdel {

namespace {

void all_variables(const Formula& f, std::set<std::string>& out) {
  for (const auto& t : f.terms()) {
    auto vs = free_variables(t);
    out.insert(vs.begin(), vs.end());
  }
  if (f.op() == Op::Forall || f.op() == Op::Exists) out.insert(f.name());
  for (const auto& k : f.kids()) all_variables(k, out);
}

void check_context(const FormulaInContext& f) {
  std::set<std::string> ctx;
  for (const auto& v : f.context) {
    if (!ctx.insert(v).second) {
      fail(ErrorKind::InvariantViolation, "context repeats the variable " + v);
    }
  }
  for (const auto& v : free_variables(f.body)) {
    if (!ctx.count(v)) {
      fail(ErrorKind::UnknownSymbol, "variable " + v + " is free in " + print_formula(f.body) +
                                         " but not in the context");
    }
  }
}

// (a, e) -> index in D' and (w, e) -> index in X(x)E.
struct UpdateIndex {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> d;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> xe;
};

UpdateIndex index_update(const SheafUpdate& u) {
  UpdateIndex idx;
  for (std::size_t j = 0; j < u.source.size(); ++j) idx.d[{u.source[j], u.event[j]}] = j;
  for (std::size_t v = 0; v < u.base.frame.carrier().size(); ++v)
    idx.xe[{u.base.p_x(v), u.base.p_e(v)}] = v;
  return idx;
}

// A tuple of the updated n-th power as (tuple index in D^n_X, event).
std::pair<std::size_t, std::size_t> decompose(const SheafModel& m, const SheafUpdate& u,
                                              std::size_t n, std::size_t t) {
  const FiberedPower& after = u.updated.power(n);
  const std::size_t v = after.worlds[t];
  const std::size_t w = u.base.p_x(v);
  const std::size_t e = u.base.p_e(v);
  std::vector<std::size_t> tuple;
  for (std::size_t j : after.tuples[t]) tuple.push_back(u.source[j]);
  return {m.power(n).locate(tuple, w), e};
}

// The tuple ((a1,e),...,(an,e)) of the updated n-th power for a in D^n_X.
std::size_t lift_tuple(const SheafModel& m, const SheafUpdate& u, const UpdateIndex& idx,
                       std::size_t n, std::size_t a, std::size_t e) {
  const FiberedPower& before = m.power(n);
  const std::size_t v = idx.xe.at({before.worlds[a], e});
  std::vector<std::size_t> tuple;
  for (std::size_t c : before.tuples[a]) tuple.push_back(idx.d.at({c, e}));
  return u.updated.power(n).locate(tuple, v);
}

Rel arrow(const FiberedPower& from, const FiberedPower& to, const std::vector<std::size_t>& table) {
  return Rel::from_function(from.frame.carrier(), to.frame.carrier(), table);
}

std::string world_list(const Subset& s) {
  std::string out = "{";
  const auto labels = s.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? "," : "") + labels[i];
  return out + "}";
}

}  // namespace

std::vector<std::size_t> term_table(const SheafModel& m, const std::vector<std::string>& context,
                                    const Term& t) {
  const FiberedPower& p = m.power(context.size());
  if (t.is_variable()) {
    for (std::size_t i = 0; i < context.size(); ++i) {
      if (context[i] != t.name()) continue;
      std::vector<std::size_t> out;
      for (const auto& tuple : p.tuples) out.push_back(tuple[i]);
      return out;
    }
    fail(ErrorKind::UnknownSymbol, "variable " + t.name() + " is not in the context");
  }
  const FunctionInterp& f = m.function(t.name(), t.args().size());
  const std::vector<std::size_t> args = tuple_table(m, context, t.args());
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < args.size(); ++i) out.push_back(f.table[args[i]]);
  return out;
}

std::vector<std::size_t> tuple_table(const SheafModel& m,
                                     const std::vector<std::string>& context,
                                     const std::vector<Term>& terms) {
  const FiberedPower& p = m.power(context.size());
  const FiberedPower& q = m.power(terms.size());
  std::vector<std::vector<std::size_t>> columns;
  for (const auto& t : terms) columns.push_back(term_table(m, context, t));
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < p.tuples.size(); ++i) {
    std::vector<std::size_t> tuple;
    for (const auto& col : columns) tuple.push_back(col[i]);
    out.push_back(q.locate(tuple, p.worlds[i]));
  }
  return out;
}

FrameMap interp_term(const SheafModel& m, const std::vector<std::string>& context,
                     const Term& t) {
  const FiberedPower& p = m.power(context.size());
  return FrameMap(p.frame, m.sheaf().total(),
                  Rel::from_function(p.frame.carrier(), m.sheaf().total().carrier(),
                                     term_table(m, context, t)));
}

FrameMap interp_tuple(const SheafModel& m, const std::vector<std::string>& context,
                      const std::vector<Term>& terms) {
  const FiberedPower& p = m.power(context.size());
  const FiberedPower& q = m.power(terms.size());
  return FrameMap(p.frame, q.frame, arrow(p, q, tuple_table(m, context, terms)));
}

Rel transition_relation(const SheafModel& m, const SheafUpdate& u, std::size_t n,
                        std::size_t event) {
  const FiberedPower& before = m.power(n);
  const FiberedPower& after = u.updated.power(n);
  const UpdateIndex idx = index_update(u);
  std::vector<std::size_t> members;
  for (std::size_t a = 0; a < before.tuples.size(); ++a)
    if (u.pre[event].contains(before.worlds[a])) members.push_back(a);
  Inclusion inc = inclusion_of(before.frame.carrier(), members, "Pre^" + std::to_string(n));
  std::vector<std::size_t> q;
  for (std::size_t a : members) q.push_back(lift_tuple(m, u, idx, n, a, event));
  Rel qe = Rel::from_function(inc.sub, after.frame.carrier(), q);
  return compose(dagger(inc.incl), qe);
}

Rel pullback_arrow(const SheafModel& m, const SheafUpdate& u, std::size_t k, std::size_t n,
                   const std::vector<std::size_t>& f) {
  const FiberedPower& from = u.updated.power(k);
  const FiberedPower& to = u.updated.power(n);
  const UpdateIndex idx = index_update(u);
  std::vector<std::size_t> table;
  for (std::size_t t = 0; t < from.tuples.size(); ++t) {
    auto [a, e] = decompose(m, u, k, t);
    table.push_back(lift_tuple(m, u, idx, n, f[a], e));
  }
  return Rel::from_function(from.frame.carrier(), to.frame.carrier(), table);
}

struct FoEvaluator::State {
  const EventRegistry& registry;
  std::map<std::pair<const SheafModel*, std::string>, Subset> memo;
  std::map<std::pair<const SheafModel*, std::string>, std::unique_ptr<SheafUpdate>> updates;
  std::map<std::string, std::unique_ptr<EventModel>> announcements;
  std::set<std::pair<const SheafModel*, std::string>> in_progress;

  explicit State(const EventRegistry& r) : registry(r) {}
};

FoEvaluator::FoEvaluator(const EventRegistry& registry)
    : state_(std::make_unique<State>(registry)) {}

FoEvaluator::~FoEvaluator() = default;

const SheafUpdate& FoEvaluator::update(const SheafModel& m, const EventModel& em) {
  auto key = std::make_pair(&m, em.name());
  auto it = state_->updates.find(key);
  if (it != state_->updates.end()) return *it->second;
  if (!(m.agents() == em.agents())) {
    fail(ErrorKind::AgentMismatch, "event model " + em.name() + " and the sheaf model have "
                                   "different agents");
  }
  for (std::size_t k = 0; k < em.events().size(); ++k) {
    const auto open = free_variables(em.pre(k));
    if (!open.empty()) {
      fail(ErrorKind::OpenPrecondition, "precondition of " + em.events().element(k) + " in " +
                                            em.name() + " has free variable " + *open.begin());
    }
  }
  if (!state_->in_progress.insert(key).second) {
    fail(ErrorKind::InvariantViolation,
         "preconditions of " + em.name() + " depend on updating by " + em.name() + " itself");
  }
  std::vector<Subset> pre;
  try {
    for (std::size_t k = 0; k < em.events().size(); ++k)
      pre.push_back(interp(m, FormulaInContext{{}, em.pre(k)}));
  } catch (...) {
    state_->in_progress.erase(key);
    throw;
  }
  state_->in_progress.erase(key);

  const KripkeSheaf& s = m.sheaf();
  const FiniteSet& D = s.total().carrier();
  const FiniteSet& E = em.events();
  FrameUpdate base = update_frame(s.base(), em.frame(), pre);

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> xe;
  for (std::size_t v = 0; v < base.frame.carrier().size(); ++v) xe[{base.p_x(v), base.p_e(v)}] = v;

  std::vector<std::string> labels;
  std::vector<std::size_t> source, event, over;
  for (std::size_t a = 0; a < D.size(); ++a) {
    const std::size_t w = s.proj()(a);
    for (std::size_t k = 0; k < E.size(); ++k) {
      if (!pre[k].contains(w)) continue;
      labels.push_back(pair_label(D.element(a), E.element(k)));
      source.push_back(a);
      event.push_back(k);
      over.push_back(xe.at({w, k}));
    }
  }
  FiniteSet carrier("(" + D.name() + "*" + E.name() + ")", std::move(labels));
  Rel to_d = Rel::from_function(carrier, D, source);
  Rel to_e = Rel::from_function(carrier, E, event);
  KripkeFrame total =
      initial_lift(LiftFamily{carrier, s.base().agents(), {to_d, to_e}, {s.total(), em.frame()}});
  FrameMap proj(total, base.frame, Rel::from_function(carrier, base.frame.carrier(), over));

  // Provisional update record so the powers of the new sheaf can be indexed
  // before its interpretations exist.
  SheafModel bare(KripkeSheaf(proj), Signature{}, {}, {});
  SheafUpdate shell{bare, base, source, event, pre};

  std::map<std::string, FunctionInterp> functions;
  for (const auto& [name, f] : m.functions()) {
    const FiberedPower& after = bare.power(f.arity);
    const UpdateIndex idx = index_update(shell);
    FunctionInterp g{f.arity, {}};
    for (std::size_t t = 0; t < after.tuples.size(); ++t) {
      auto [a, e] = decompose(m, shell, f.arity, t);
      g.table.push_back(idx.d.at({f.table[a], e}));
    }
    functions.emplace(name, std::move(g));
  }
  std::map<std::string, Subset> relations;
  for (const auto& [name, r] : m.relations()) {
    const std::size_t arity = m.signature().relations.at(name);
    const FiberedPower& after = bare.power(arity);
    std::vector<bool> bits;
    for (std::size_t t = 0; t < after.tuples.size(); ++t)
      bits.push_back(r.contains(decompose(m, shell, arity, t).first));
    relations.emplace(name, Subset(after.frame.carrier(), std::move(bits)));
  }

  auto result = std::make_unique<SheafUpdate>(
      SheafUpdate{SheafModel(KripkeSheaf(proj), m.signature(), std::move(functions),
                             std::move(relations)),
                  std::move(base), std::move(source), std::move(event), std::move(pre)});
  return *state_->updates.emplace(key, std::move(result)).first->second;
}

Subset FoEvaluator::interp(const SheafModel& m, const FormulaInContext& f) {
  check_context(f);
  auto key = std::make_pair(&m, print_formula(f));
  auto it = state_->memo.find(key);
  if (it != state_->memo.end()) return it->second;

  const std::vector<std::string>& ctx = f.context;
  const Formula& phi = f.body;
  const FiberedPower& p = m.power(ctx.size());
  auto sub = [&](const Formula& g) { return interp(m, FormulaInContext{ctx, g}); };

  Subset out;
  switch (phi.op()) {
    case Op::Top: out = Subset::full(p.frame.carrier()); break;
    case Op::Bot: out = Subset(p.frame.carrier()); break;
    case Op::Atom:
      out = preimage_map(p.proj.fn()).apply(m.relation(phi.name(), 0));
      break;
    case Op::Pred: {
      const std::size_t k = phi.terms().size();
      const Subset& r = m.relation(phi.name(), k);
      out = preimage_map(arrow(p, m.power(k), tuple_table(m, ctx, phi.terms()))).apply(r);
      break;
    }
    case Op::Not: out = set_complement(sub(phi.body())); break;
    case Op::And: out = set_intersection(sub(phi.kid(0)), sub(phi.kid(1))); break;
    case Op::Or: out = set_union(sub(phi.kid(0)), sub(phi.kid(1))); break;
    case Op::Imp: out = set_implication(sub(phi.kid(0)), sub(phi.kid(1))); break;
    case Op::Box:
      out = forall_map(dagger(p.frame.rel(phi.name()))).apply(sub(phi.body()));
      break;
    case Op::Dia:
      out = exists_map(dagger(p.frame.rel(phi.name()))).apply(sub(phi.body()));
      break;
    case Op::Forall:
    case Op::Exists: {
      std::string y = phi.name();
      Formula body = phi.body();
      std::set<std::string> used(ctx.begin(), ctx.end());
      if (used.count(y)) {
        all_variables(body, used);
        const std::string fresh = fresh_variable(y, used);
        body = substitute(body, {y}, {Term::var(fresh)});
        y = fresh;
      }
      std::vector<std::string> wider = ctx;
      wider.push_back(y);
      Subset inner = interp(m, FormulaInContext{wider, body});
      const FiberedPower& q = m.power(wider.size());
      std::vector<std::size_t> drop;
      for (std::size_t i = 0; i < q.tuples.size(); ++i) {
        std::vector<std::size_t> prefix(q.tuples[i].begin(), q.tuples[i].end() - 1);
        drop.push_back(p.locate(prefix, q.worlds[i]));
      }
      const Rel proj = arrow(q, p, drop);
      out = phi.op() == Op::Forall ? forall_map(proj).apply(inner) : exists_map(proj).apply(inner);
      break;
    }
    case Op::PalBox:
    case Op::PalDia:
    case Op::DelBox:
    case Op::DelDia: {
      const EventModel* em = nullptr;
      std::size_t k = 0;
      if (phi.op() == Op::PalBox || phi.op() == Op::PalDia) {
        const Formula& sigma = phi.announcement();
        const auto open = free_variables(sigma);
        if (!open.empty()) {
          fail(ErrorKind::OpenPrecondition, "announcement " + print_formula(sigma) +
                                                " has free variable " + *open.begin());
        }
        const std::string name = "!" + print_formula(sigma);
        auto& slot = state_->announcements[name];
        if (!slot) slot = std::make_unique<EventModel>(announcement_model(sigma, m.agents(), name));
        em = slot.get();
      } else {
        em = &state_->registry.at(phi.name());
        k = em->event_index(phi.event());
      }
      const SheafUpdate& u = update(m, *em);
      Subset after = interp(u.updated, FormulaInContext{ctx, phi.body()});
      const Rel back = dagger(transition_relation(m, u, ctx.size(), k));
      const bool box = phi.op() == Op::PalBox || phi.op() == Op::DelBox;
      out = box ? forall_map(back).apply(after) : exists_map(back).apply(after);
      break;
    }
  }
  state_->memo.emplace(key, out);
  return out;
}

Subset interp_formula(const SheafModel& m, const FormulaInContext& f,
                      const EventRegistry& registry) {
  FoEvaluator ev(registry);
  return ev.interp(m, f);
}

SheafUpdate pullback_update(const SheafModel& m, const EventModel& em,
                            const EventRegistry& registry) {
  FoEvaluator ev(registry);
  return ev.update(m, em);
}

Subset del_in_context(const SheafModel& m, const EventModel& em, const std::string& event,
                      const FormulaInContext& f, bool box, const EventRegistry& registry) {
  EventRegistry local = registry;
  local.add(em);
  em.event_index(event);
  Formula g = box ? Formula::del_box(em.name(), event, f.body)
                  : Formula::del_dia(em.name(), event, f.body);
  return interp_formula(m, FormulaInContext{f.context, g}, local);
}

LawReport check_equivalences_in_context(const SheafModel& m,
                                        const std::vector<std::string>& context,
                                        const std::vector<Equivalence>& eqs,
                                        const EventRegistry& registry) {
  FoEvaluator ev(registry);
  LawReport report;
  for (const auto& eq : eqs) {
    LawResult r{eq.name, true, true, {}};
    Subset l = ev.interp(m, {context, eq.lhs});
    Subset rr = ev.interp(m, {context, eq.rhs});
    if (!(l == rr)) {
      r.holds = false;
      r.witness = print_formula(FormulaInContext{context, eq.lhs}) + " = " + world_list(l) +
                  " but " + print_formula(eq.rhs) + " = " + world_list(rr);
    }
    report.laws.push_back(std::move(r));
  }
  return report;
}

LawReport check_transition_naturality(const SheafModel& m, const SheafUpdate& u,
                                      std::size_t event, std::size_t k, std::size_t n,
                                      const std::vector<std::size_t>& f) {
  const Rel fr = arrow(m.power(k), m.power(n), f);
  const Rel lifted = pullback_arrow(m, u, k, n, f);
  const Rel rk = transition_relation(m, u, k, event);
  const Rel rn = transition_relation(m, u, n, event);
  const std::string& e = u.base.p_e.dst().carrier().element(event);
  LawReport report;
  const bool forward = compose(rk, lifted) == compose(fr, rn);
  const bool backward = compose(rn, dagger(lifted)) == compose(dagger(fr), rk);
  report.laws.push_back({"transition-naturality:" + e, true, forward,
                         forward ? "" : "p_X^* f o R^k_e differs from R^n_e o f"});
  report.laws.push_back({"transition-naturality-dagger:" + e, true, backward,
                         backward ? "" : "(p_X^* f)^d o R^n_e differs from R^k_e o f^d"});
  return report;
}

LawReport check_substitution_box_commutation(const SheafModel& m, const FormulaInContext& phi,
                                             const std::vector<std::string>& new_context,
                                             const std::vector<Term>& terms,
                                             const EventModel* em,
                                             const EventRegistry& registry) {
  EventRegistry local = registry;
  if (em) local.add(*em);
  FoEvaluator ev(local);
  const std::vector<std::size_t> table = tuple_table(m, new_context, terms);
  const FiberedPower& from = m.power(new_context.size());
  const FiberedPower& to = m.power(phi.context.size());
  const PowersetMap back = preimage_map(arrow(from, to, table));
  const Formula substituted = substitute(phi.body, phi.context, terms);

  LawReport report;
  auto compare = [&](const std::string& name, const Formula& wrapped_sub,
                     const Formula& wrapped_orig) {
    Subset l = ev.interp(m, {new_context, wrapped_sub});
    Subset r = back.apply(ev.interp(m, {phi.context, wrapped_orig}));
    LawResult res{name, true, l == r, {}};
    if (!res.holds) {
      res.witness = print_formula(FormulaInContext{new_context, wrapped_sub}) + " = " +
                    world_list(l) + " but the pulled-back extension is " + world_list(r);
    }
    report.laws.push_back(std::move(res));
  };

  compare("substitution", substituted, phi.body);
  for (const auto& a : m.agents())
    compare("box-substitution:" + a, Formula::box(a, substituted), Formula::box(a, phi.body));
  const bool bounded = is_bounded(FrameMap(from.frame, to.frame, arrow(from, to, table)));
  report.laws.push_back({"term-tuple-bounded", true, bounded,
                         bounded ? "" : "the term tuple is not a bounded morphism"});

  if (em) {
    const SheafUpdate& u = ev.update(m, *em);
    for (std::size_t k = 0; k < em->events().size(); ++k) {
      const std::string& e = em->events().element(k);
      compare("del-box-substitution:" + e, Formula::del_box(em->name(), e, substituted),
              Formula::del_box(em->name(), e, phi.body));
      compare("del-dia-substitution:" + e, Formula::del_dia(em->name(), e, substituted),
              Formula::del_dia(em->name(), e, phi.body));
      LawReport nat =
          check_transition_naturality(m, u, k, new_context.size(), phi.context.size(), table);
      for (auto& law : nat.laws) report.laws.push_back(std::move(law));
    }
  }
  return report;
}

LawReport verify_quantifier_reduction(const SheafModel& m, const EventModel& em,
                                      const std::string& event,
                                      const std::vector<std::string>& context,
                                      const std::string& y, const Formula& body,
                                      const EventRegistry& registry) {
  using F = Formula;
  EventRegistry local = registry;
  local.add(em);
  const Formula& pre = em.pre(event);
  auto after = [&](const Formula& g) { return F::del_box(em.name(), event, g); };
  std::vector<Equivalence> eqs{
      {"forall-reduction", after(F::forall(y, body)), F::forall(y, after(body))},
      {"exists-reduction", after(F::exists(y, body)), F::imp(pre, F::exists(y, after(body)))},
  };
  return check_equivalences_in_context(m, context, eqs, local);
}

std::optional<std::string> compare_power_with_pullback(const SheafModel& m, const SheafUpdate& u,
                                                       std::size_t n) {
  const FiberedPower& after = u.updated.power(n);
  const FiberedPower& before = m.power(n);
  PullbackResult pb = pullback(u.base.p_x, before.proj);
  const std::size_t size = pb.frame.carrier().size();
  if (size != after.tuples.size()) {
    return "power has " + std::to_string(after.tuples.size()) + " tuples, pullback has " +
           std::to_string(size);
  }
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pb_index;
  for (std::size_t i = 0; i < size; ++i) pb_index[{pb.p(i), pb.q(i)}] = i;

  std::vector<std::size_t> to_pb;
  std::vector<bool> hit(size, false);
  for (std::size_t t = 0; t < after.tuples.size(); ++t) {
    const std::size_t a = decompose(m, u, n, t).first;
    auto it = pb_index.find({after.worlds[t], a});
    if (it == pb_index.end()) {
      return "tuple " + after.frame.carrier().element(t) + " has no pullback partner";
    }
    if (hit[it->second]) return "two tuples meet " + pb.frame.carrier().element(it->second);
    hit[it->second] = true;
    to_pb.push_back(it->second);
  }
  for (std::size_t ag = 0; ag < m.agents().size(); ++ag) {
    const Rel& r1 = after.frame.rel(ag);
    const Rel& r2 = pb.frame.rel(ag);
    for (std::size_t s = 0; s < to_pb.size(); ++s)
      for (std::size_t t = 0; t < to_pb.size(); ++t)
        if (r1.contains(s, t) != r2.contains(to_pb[s], to_pb[t])) {
          return "agent " + m.agents()[ag] + " relates " + after.frame.carrier().element(s) +
                 " and " + after.frame.carrier().element(t) +
                 (r1.contains(s, t) ? " but not" : " only") + " in the pullback";
        }
  }
  return std::nullopt;
}

Reduction reduce_in_context(const SheafModel& m, const FormulaInContext& f,
                            const EventRegistry& registry) {
  FoEvaluator ev(registry);
  return reduce_to_static(f.body, registry, [&](const Formula& a, const Formula& b) {
    return ev.interp(m, {f.context, a}) == ev.interp(m, {f.context, b});
  });
}

}  // namespace catdel
