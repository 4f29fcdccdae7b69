#include "catdel/del.hpp"

#include <map>
#include <set>
#include <utility>

#include "catdel/error.hpp"
#include "catdel/syntax.hpp"

namespace catdel {

KripkeModel::KripkeModel(KripkeFrame frame, std::map<std::string, Subset> valuation)
    : frame_(std::move(frame)), valuation_(std::move(valuation)) {
  for (const auto& [atom, s] : valuation_) {
    if (!(s.carrier() == frame_.carrier())) {
      fail(ErrorKind::CarrierMismatch, "valuation of '" + atom + "' is not a subset of " +
                                           frame_.carrier().name());
    }
  }
}

const Subset& KripkeModel::atom(const std::string& name) const {
  auto it = valuation_.find(name);
  if (it == valuation_.end()) fail(ErrorKind::UnknownAtom, "no atom '" + name + "'");
  return it->second;
}

EventModel::EventModel(std::string name, KripkeFrame frame, std::map<std::string, Formula> pre)
    : name_(std::move(name)), frame_(std::move(frame)), pre_(std::move(pre)) {
  for (const auto& e : frame_.carrier().elements()) {
    if (!pre_.count(e)) {
      fail(ErrorKind::InvariantViolation,
           "event model " + name_ + ": no precondition for event '" + e + "'");
    }
  }
  for (const auto& [e, f] : pre_) {
    if (!frame_.carrier().find(e)) {
      fail(ErrorKind::UnknownEvent, "event model " + name_ + ": precondition for unknown event '" +
                                        e + "'");
    }
  }
}

const Formula& EventModel::pre(std::size_t event) const {
  return pre_.at(frame_.carrier().element(event));
}

const Formula& EventModel::pre(const std::string& event) const {
  auto it = pre_.find(event);
  if (it == pre_.end()) fail(ErrorKind::UnknownEvent, name_ + " has no event '" + event + "'");
  return it->second;
}

std::size_t EventModel::event_index(const std::string& event) const {
  auto i = frame_.carrier().find(event);
  if (!i) fail(ErrorKind::UnknownEvent, name_ + " has no event '" + event + "'");
  return *i;
}

EventModel announcement_model(const Formula& sigma, const AgentSet& agents, std::string name) {
  FiniteSet events(name, {"e"});
  KripkeFrame frame = KripkeFrame::uniform(events, agents, identity(events));
  return EventModel(std::move(name), std::move(frame), {{"e", sigma}});
}

void EventRegistry::add(EventModel em) {
  std::string key = em.name();
  models_.insert_or_assign(std::move(key), std::move(em));
}

const EventModel* EventRegistry::find(const std::string& name) const {
  auto it = models_.find(name);
  return it == models_.end() ? nullptr : &it->second;
}

const EventModel& EventRegistry::at(const std::string& name) const {
  const EventModel* em = find(name);
  if (!em) fail(ErrorKind::UnresolvedEventModel, "no event model named '" + name + "'");
  return *em;
}

std::vector<std::string> EventRegistry::names() const {
  std::vector<std::string> out;
  for (const auto& [name, em] : models_) out.push_back(name);
  return out;
}

const EventTransition& FrameUpdate::event(const std::string& name) const {
  for (const auto& t : events)
    if (t.event == name) return t;
  fail(ErrorKind::UnknownEvent, "update has no event '" + name + "'");
}

bool FrameUpdate::transition_routes_agree() const {
  for (const auto& t : events)
    if (!(t.transition == t.transition_via_product)) return false;
  return true;
}

FrameUpdate update_frame(const KripkeFrame& x, const KripkeFrame& e, std::span<const Subset> pre) {
  if (!(x.agents() == e.agents())) {
    fail(ErrorKind::AgentMismatch, "update: agents of " + x.carrier().name() + " and " +
                                       e.carrier().name() + " differ");
  }
  const FiniteSet& X = x.carrier();
  const FiniteSet& E = e.carrier();
  if (pre.size() != E.size()) {
    fail(ErrorKind::InvariantViolation, "update: " + std::to_string(pre.size()) +
                                            " preconditions for " + std::to_string(E.size()) +
                                            " events");
  }
  for (const auto& s : pre) {
    if (!(s.carrier() == X)) {
      fail(ErrorKind::CarrierMismatch, "update: precondition is not a subset of " + X.name());
    }
  }

  std::vector<std::string> labels;
  std::vector<std::size_t> to_x, to_e, to_product;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> index;
  for (std::size_t w = 0; w < X.size(); ++w) {
    for (std::size_t k = 0; k < E.size(); ++k) {
      if (!pre[k].contains(w)) continue;
      index[{w, k}] = labels.size();
      labels.push_back(pair_label(X.element(w), E.element(k)));
      to_x.push_back(w);
      to_e.push_back(k);
      to_product.push_back(w * E.size() + k);
    }
  }
  FiniteSet carrier("(" + X.name() + "*" + E.name() + ")", std::move(labels));
  Rel px = Rel::from_function(carrier, X, to_x);
  Rel pe = Rel::from_function(carrier, E, to_e);
  KripkeFrame frame = initial_lift(LiftFamily{carrier, x.agents(), {px, pe}, {x, e}});

  CartesianProduct xe = cartesian_product(X, E);
  Rel incl = Rel::from_function(carrier, xe.carrier, to_product);

  std::vector<EventTransition> transitions;
  for (std::size_t k = 0; k < E.size(); ++k) {
    const auto members = pre[k].indices();
    Inclusion ie = inclusion_of(X, members, "Pre(" + E.element(k) + ")");
    std::vector<std::size_t> q;
    for (std::size_t w : members) q.push_back(index.at({w, k}));
    Rel qe = Rel::from_function(ie.sub, carrier, q);
    std::vector<std::size_t> q_prime;
    for (std::size_t w = 0; w < X.size(); ++w) q_prime.push_back(w * E.size() + k);
    Rel qpe = Rel::from_function(X, xe.carrier, q_prime);
    transitions.push_back(EventTransition{E.element(k), pre[k], ie.incl, qe,
                                          compose(dagger(ie.incl), qe),
                                          compose(qpe, dagger(incl))});
  }
  FrameMap p_x(frame, x, px);
  FrameMap p_e(frame, e, pe);
  return FrameUpdate{std::move(frame), std::move(p_x), std::move(p_e), std::move(incl),
                     std::move(transitions)};
}

struct Evaluator::State {
  const EventRegistry& registry;
  std::map<std::pair<const KripkeModel*, std::string>, Subset> memo;
  std::map<std::pair<const KripkeModel*, std::string>, std::unique_ptr<PalResult>> pal;
  std::map<std::pair<const KripkeModel*, std::string>, std::unique_ptr<UpdateResult>> updates;
  std::set<std::pair<const KripkeModel*, std::string>> in_progress;

  explicit State(const EventRegistry& r) : registry(r) {}
};

Evaluator::Evaluator(const EventRegistry& registry)
    : state_(std::make_unique<State>(registry)) {}

Evaluator::~Evaluator() = default;

const PalResult& Evaluator::pal_update(const KripkeModel& m, const Formula& sigma) {
  auto key = std::make_pair(&m, print_formula(sigma));
  auto it = state_->pal.find(key);
  if (it != state_->pal.end()) return *it->second;
  Subset s = extension(m, sigma);
  SubframeResult sub = subframe(m.frame(), s, m.carrier().name() + "!");
  PowersetMap back = preimage_map(sub.incl.fn());
  std::map<std::string, Subset> val;
  for (const auto& [atom, v] : m.valuation()) val.emplace(atom, back.apply(v));
  auto result = std::make_unique<PalResult>(
      PalResult{KripkeModel(sub.frame, std::move(val)), std::move(sub.incl)});
  return *state_->pal.emplace(key, std::move(result)).first->second;
}

const UpdateResult& Evaluator::product_update(const KripkeModel& m, const EventModel& em) {
  auto key = std::make_pair(&m, em.name());
  auto it = state_->updates.find(key);
  if (it != state_->updates.end()) return *it->second;
  if (!(m.agents() == em.agents())) {
    fail(ErrorKind::AgentMismatch, "event model " + em.name() + " and model " +
                                       m.carrier().name() + " have different agents");
  }
  if (!state_->in_progress.insert(key).second) {
    fail(ErrorKind::InvariantViolation,
         "preconditions of " + em.name() + " depend on updating by " + em.name() + " itself");
  }
  std::vector<Subset> pre;
  try {
    for (std::size_t k = 0; k < em.events().size(); ++k) pre.push_back(extension(m, em.pre(k)));
  } catch (...) {
    state_->in_progress.erase(key);
    throw;
  }
  state_->in_progress.erase(key);

  FrameUpdate maps = update_frame(m.frame(), em.frame(), pre);
  PowersetMap back = preimage_map(maps.p_x.fn());
  std::map<std::string, Subset> val;
  for (const auto& [atom, v] : m.valuation()) val.emplace(atom, back.apply(v));
  auto result = std::make_unique<UpdateResult>(
      UpdateResult{KripkeModel(maps.frame, std::move(val)), std::move(maps)});
  return *state_->updates.emplace(key, std::move(result)).first->second;
}

Subset Evaluator::extension(const KripkeModel& m, const Formula& f) {
  auto key = std::make_pair(&m, print_formula(f));
  auto it = state_->memo.find(key);
  if (it != state_->memo.end()) return it->second;

  Subset out;
  switch (f.op()) {
    case Op::Top: out = Subset::full(m.carrier()); break;
    case Op::Bot: out = Subset(m.carrier()); break;
    case Op::Atom: out = m.atom(f.name()); break;
    case Op::Pred:
    case Op::Forall:
    case Op::Exists:
      fail(ErrorKind::UnknownSymbol,
           "first-order formula '" + print_formula(f) + "' on a propositional model");
    case Op::Not: out = set_complement(extension(m, f.body())); break;
    case Op::And:
      out = set_intersection(extension(m, f.kid(0)), extension(m, f.kid(1)));
      break;
    case Op::Or: out = set_union(extension(m, f.kid(0)), extension(m, f.kid(1))); break;
    case Op::Imp:
      out = set_implication(extension(m, f.kid(0)), extension(m, f.kid(1)));
      break;
    case Op::Box:
      out = forall_map(dagger(m.frame().rel(f.name()))).apply(extension(m, f.body()));
      break;
    case Op::Dia:
      out = exists_map(dagger(m.frame().rel(f.name()))).apply(extension(m, f.body()));
      break;
    case Op::PalBox:
    case Op::PalDia: {
      const PalResult& pal = pal_update(m, f.announcement());
      Subset after = extension(pal.updated, f.body());
      out = f.op() == Op::PalBox ? forall_map(pal.incl.fn()).apply(after)
                                 : exists_map(pal.incl.fn()).apply(after);
      break;
    }
    case Op::DelBox:
    case Op::DelDia: {
      const EventModel& em = state_->registry.at(f.name());
      em.event_index(f.event());
      const UpdateResult& upd = product_update(m, em);
      Subset after = extension(upd.updated, f.body());
      const Rel back = dagger(upd.maps.event(f.event()).transition);
      out = f.op() == Op::DelBox ? forall_map(back).apply(after) : exists_map(back).apply(after);
      break;
    }
  }
  state_->memo.emplace(key, out);
  return out;
}

Subset extension(const KripkeModel& m, const Formula& f, const EventRegistry& registry) {
  Evaluator ev(registry);
  return ev.extension(m, f);
}

PalResult pal_update(const KripkeModel& m, const Formula& sigma, const EventRegistry& registry) {
  Evaluator ev(registry);
  return ev.pal_update(m, sigma);
}

UpdateResult product_update(const KripkeModel& m, const EventModel& em,
                            const EventRegistry& registry) {
  Evaluator ev(registry);
  return ev.product_update(m, em);
}

std::vector<Equivalence> pal_reduction_instances(const Formula& sigma, const Formula& phi,
                                                 const Formula& psi,
                                                 const std::vector<std::string>& atom_names,
                                                 const AgentSet& agents) {
  using F = Formula;
  std::vector<Equivalence> out;
  for (const auto& p : atom_names) {
    out.push_back({"pal-atom:" + p, F::pal_box(sigma, F::atom(p)), F::imp(sigma, F::atom(p))});
  }
  out.push_back({"pal-and", F::pal_box(sigma, F::conj(phi, psi)),
                 F::conj(F::pal_box(sigma, phi), F::pal_box(sigma, psi))});
  out.push_back({"pal-not", F::pal_box(sigma, F::neg(phi)),
                 F::imp(sigma, F::neg(F::pal_box(sigma, phi)))});
  for (const auto& a : agents) {
    out.push_back({"pal-box:" + a, F::pal_box(sigma, F::box(a, phi)),
                   F::imp(sigma, F::box(a, F::pal_box(sigma, phi)))});
  }
  return out;
}

std::vector<Equivalence> del_reduction_instances(const EventModel& em, const std::string& event,
                                                 const Formula& phi, const Formula& psi,
                                                 const std::vector<std::string>& atom_names) {
  using F = Formula;
  const std::size_t k = em.event_index(event);
  const Formula& pre = em.pre(k);
  auto after = [&](const std::string& ev, const Formula& f) {
    return F::del_box(em.name(), ev, f);
  };
  std::vector<Equivalence> out;
  for (const auto& p : atom_names) {
    out.push_back({"del-atom:" + p, after(event, F::atom(p)), F::imp(pre, F::atom(p))});
  }
  out.push_back({"del-and", after(event, F::conj(phi, psi)),
                 F::conj(after(event, phi), after(event, psi))});
  out.push_back({"del-not", after(event, F::neg(phi)), F::imp(pre, F::neg(after(event, phi)))});
  for (std::size_t a = 0; a < em.agents().size(); ++a) {
    std::vector<Formula> conjuncts;
    for (std::size_t j : em.frame().rel(a).successors(k))
      conjuncts.push_back(after(em.events().element(j), phi));
    out.push_back({"del-box:" + em.agents()[a], after(event, F::box(em.agents()[a], phi)),
                   F::imp(pre, F::box(em.agents()[a], F::conj_all(conjuncts)))});
  }
  return out;
}

namespace {

std::string world_list(const Subset& s) {
  std::string out = "{";
  const auto labels = s.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? "," : "") + labels[i];
  return out + "}";
}

}  // namespace

LawReport check_equivalences(const KripkeModel& m, const std::vector<Equivalence>& eqs,
                             const EventRegistry& registry) {
  Evaluator ev(registry);
  LawReport report;
  for (const auto& eq : eqs) {
    LawResult r{eq.name, true, true, {}};
    Subset l = ev.extension(m, eq.lhs);
    Subset rr = ev.extension(m, eq.rhs);
    if (!(l == rr)) {
      r.holds = false;
      r.witness = print_formula(eq.lhs) + " = " + world_list(l) + " but " +
                  print_formula(eq.rhs) + " = " + world_list(rr);
    }
    report.laws.push_back(std::move(r));
  }
  return report;
}

namespace {

std::vector<std::string> atom_names(const KripkeModel& m) {
  std::vector<std::string> out;
  for (const auto& [a, s] : m.valuation()) out.push_back(a);
  return out;
}

}  // namespace

LawReport verify_pal_reductions(const KripkeModel& m, const Formula& sigma, const Formula& phi,
                                const Formula& psi, const EventRegistry& registry) {
  return check_equivalences(
      m, pal_reduction_instances(sigma, phi, psi, atom_names(m), m.agents()), registry);
}

LawReport verify_del_reductions(const KripkeModel& m, const EventModel& em,
                                const std::string& event, const Formula& phi,
                                const Formula& psi, const EventRegistry& registry) {
  EventRegistry local = registry;
  local.add(em);
  return check_equivalences(m, del_reduction_instances(em, event, phi, psi, atom_names(m)),
                            local);
}

std::vector<Formula> enumerate_formulas(const std::vector<std::string>& atom_names,
                                        const AgentSet& agents, std::size_t max_depth) {
  std::vector<Formula> level;
  std::set<std::string> seen;
  auto add = [&](std::vector<Formula>& into, Formula f) {
    if (seen.insert(print_formula(f)).second) into.push_back(std::move(f));
  };
  for (const auto& p : atom_names) add(level, Formula::atom(p));
  if (level.empty()) add(level, Formula::top());
  for (std::size_t d = 0; d < max_depth; ++d) {
    std::vector<Formula> next = level;
    for (const auto& f : level) {
      add(next, Formula::neg(f));
      for (const auto& a : agents) add(next, Formula::box(a, f));
    }
    for (std::size_t i = 0; i < level.size(); ++i)
      for (std::size_t j = i + 1; j < level.size(); ++j)
        add(next, Formula::conj(level[i], level[j]));
    level = std::move(next);
  }
  return level;
}

NoLearningReport no_learning_check(const KripkeModel& m, const EventModel& em,
                                   std::size_t max_depth, const EventRegistry& registry) {
  EventRegistry local = registry;
  local.add(em);
  Evaluator ev(local);
  NoLearningReport report;
  report.p_x_bounded = is_bounded(ev.product_update(m, em).maps.p_x);
  const auto formulas = enumerate_formulas(atom_names(m), m.agents(), max_depth);
  for (std::size_t k = 0; k < em.events().size(); ++k) {
    const std::string& e = em.events().element(k);
    for (const auto& phi : formulas) {
      ++report.formulas_checked;
      Formula lhs = Formula::del_box(em.name(), e, phi);
      Formula rhs = Formula::imp(em.pre(k), phi);
      Subset l = ev.extension(m, lhs);
      Subset r = ev.extension(m, rhs);
      if (l == r) continue;
      std::string world;
      for (std::size_t w = 0; w < m.carrier().size(); ++w)
        if (l.contains(w) != r.contains(w)) {
          world = m.carrier().element(w);
          break;
        }
      std::string witness = print_formula(lhs) + " differs from " + print_formula(rhs) +
                             " at " + world;
      if (report.p_x_bounded) {
        report.failures.push_back(std::move(witness));
      } else {
        report.learning_witness = std::move(witness);
        return report;
      }
    }
  }
  return report;
}

PreconditionModalities static_precondition_modalities(const KripkeModel& m,
                                                      const Formula& sigma,
                                                      const EventRegistry& registry) {
  const Subset s = extension(m, sigma, registry);
  const auto members = s.indices();
  Inclusion inc = inclusion_of(m.carrier(), members, "Pre");
  PowersetMap back = preimage_map(inc.incl);
  PowersetMap all = compose(convert(back, ExtensionKind::Meet), forall_map(inc.incl));
  PowersetMap some = compose(back, exists_map(inc.incl));

  const FiniteSet& X = m.carrier();
  PowersetMap implies = PowersetMap::from_function(
      X, X, ExtensionKind::Meet, [&](const Subset& t) { return set_implication(s, t); });
  PowersetMap meets = PowersetMap::from_function(
      X, X, ExtensionKind::Join, [&](const Subset& t) { return set_intersection(s, t); });
  if (!(all == implies)) {
    fail(ErrorKind::InvariantViolation, "forall_i o i^-1 differs from " + print_formula(sigma) +
                                            " -> (-)");
  }
  if (!(some == meets)) {
    fail(ErrorKind::InvariantViolation, "exists_i o i^-1 differs from " + print_formula(sigma) +
                                            " & (-)");
  }
  if (X.size() <= kExhaustiveSubsetCap) {
    for_each_subset(X, [&](const Subset& t) {
      if (!(all.apply(t) == set_implication(s, t)) || !(some.apply(t) == set_intersection(s, t))) {
        fail(ErrorKind::InvariantViolation,
             "precondition modalities disagree pointwise at " + world_list(t));
      }
    });
  }
  return PreconditionModalities{std::move(all), std::move(some)};
}

}  // namespace catdel
