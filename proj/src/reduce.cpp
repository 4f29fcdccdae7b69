#include "catdel/reduce.hpp"

#include "catdel/error.hpp"
#include "catdel/syntax.hpp"

namespace catdel {

namespace {

using F = Formula;

// Steps beyond this bound mean a precondition keeps reintroducing updates.
constexpr std::size_t kMaxSteps = 100000;

struct Rewrite {
  std::string rule;
  Formula result;
};

[[noreturn]] void not_reducible(const Formula& residual, const std::string& why) {
  fail(ErrorKind::NotReducible, why + "; residual: " + print_formula(residual));
}

// [σ!]φ where φ is not itself dynamic at the top.
Rewrite rewrite_pal_box(const Formula& f) {
  const Formula& s = f.announcement();
  const Formula& b = f.body();
  auto after = [&](const Formula& x) { return F::pal_box(s, x); };
  switch (b.op()) {
    case Op::Top:
    case Op::Bot:
    case Op::Atom:
    case Op::Pred: return {"pal-atom", F::imp(s, b)};
    case Op::Not: return {"pal-not", F::imp(s, F::neg(after(b.body())))};
    case Op::And: return {"pal-and", F::conj(after(b.kid(0)), after(b.kid(1)))};
    case Op::Or: return {"pal-or", F::disj(after(b.kid(0)), after(b.kid(1)))};
    case Op::Imp: return {"pal-imp", F::imp(after(b.kid(0)), after(b.kid(1)))};
    case Op::Box: return {"pal-box", F::imp(s, F::box(b.name(), after(b.body())))};
    case Op::Dia:
      return {"pal-dia", F::imp(s, F::dia(b.name(), F::pal_dia(s, b.body())))};
    case Op::Forall:
    case Op::Exists:
      if (free_variables(s).count(b.name())) {
        not_reducible(f, "announcement mentions the bound variable " + b.name());
      }
      if (b.op() == Op::Forall) return {"pal-forall", F::forall(b.name(), after(b.body()))};
      return {"pal-exists", F::imp(s, F::exists(b.name(), after(b.body())))};
    default: break;
  }
  not_reducible(f, "no rule for this announcement");
}

Rewrite rewrite_del_box(const Formula& f, const EventRegistry& registry) {
  const EventModel* em = registry.find(f.name());
  if (!em) not_reducible(f, "event model " + f.name() + " is not registered");
  if (!em->events().find(f.event())) {
    not_reducible(f, "event model " + f.name() + " has no event " + f.event());
  }
  const std::size_t k = em->event_index(f.event());
  const Formula& pre = em->pre(k);
  const Formula& b = f.body();
  auto after = [&](const std::string& e, const Formula& x) { return F::del_box(f.name(), e, x); };
  const std::string& e = f.event();
  switch (b.op()) {
    case Op::Top:
    case Op::Bot:
    case Op::Atom:
    case Op::Pred: return {"del-atom", F::imp(pre, b)};
    case Op::Not: return {"del-not", F::imp(pre, F::neg(after(e, b.body())))};
    case Op::And: return {"del-and", F::conj(after(e, b.kid(0)), after(e, b.kid(1)))};
    case Op::Or: return {"del-or", F::disj(after(e, b.kid(0)), after(e, b.kid(1)))};
    case Op::Imp: return {"del-imp", F::imp(after(e, b.kid(0)), after(e, b.kid(1)))};
    case Op::Box:
    case Op::Dia: {
      const auto agent = em->agents().find(b.name());
      if (!agent) not_reducible(f, "event model " + f.name() + " has no agent " + b.name());
      std::vector<Formula> parts;
      for (std::size_t j : em->frame().rel(*agent).successors(k)) {
        const std::string& e2 = em->events().element(j);
        parts.push_back(b.op() == Op::Box ? after(e2, b.body())
                                          : F::del_dia(f.name(), e2, b.body()));
      }
      if (b.op() == Op::Box) return {"del-box", F::imp(pre, F::box(b.name(), F::conj_all(parts)))};
      return {"del-dia", F::imp(pre, F::dia(b.name(), F::disj_all(parts)))};
    }
    case Op::Forall:
    case Op::Exists:
      if (free_variables(pre).count(b.name())) {
        not_reducible(f, "precondition mentions the bound variable " + b.name());
      }
      if (b.op() == Op::Forall) return {"del-forall", F::forall(b.name(), after(e, b.body()))};
      return {"del-exists", F::imp(pre, F::exists(b.name(), after(e, b.body())))};
    default: break;
  }
  not_reducible(f, "no rule for this event");
}

std::optional<Rewrite> find_redex(const Formula& f, const EventRegistry& registry) {
  switch (f.op()) {
    case Op::PalDia:
      return Rewrite{"pal-diamond", F::conj(f.announcement(), F::pal_box(f.announcement(), f.body()))};
    case Op::DelDia: {
      const EventModel* em = registry.find(f.name());
      if (!em) not_reducible(f, "event model " + f.name() + " is not registered");
      if (!em->events().find(f.event())) {
        not_reducible(f, "event model " + f.name() + " has no event " + f.event());
      }
      return Rewrite{"del-diamond",
                     F::conj(em->pre(f.event()), F::del_box(f.name(), f.event(), f.body()))};
    }
    case Op::PalBox:
      if (!is_dynamic_op(f.body().op())) return rewrite_pal_box(f);
      break;
    case Op::DelBox:
      if (!is_dynamic_op(f.body().op())) return rewrite_del_box(f, registry);
      break;
    default: break;
  }
  for (std::size_t i = 0; i < f.kids().size(); ++i) {
    if (auto r = find_redex(f.kid(i), registry)) {
      std::vector<Formula> kids = f.kids();
      kids[i] = r->result;
      return Rewrite{r->rule, with_kids(f, std::move(kids))};
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<ReductionStep> reduction_step(const Formula& f, const EventRegistry& registry) {
  auto r = find_redex(f, registry);
  if (!r) return std::nullopt;
  return ReductionStep{r->rule, f, r->result};
}

Reduction reduce_to_static(const Formula& f, const EventRegistry& registry,
                           const EquivalenceCheck& check) {
  Reduction out{f, f, {}};
  while (auto step = reduction_step(out.result, registry)) {
    if (out.steps.size() >= kMaxSteps) not_reducible(out.result, "rewriting does not terminate");
    if (check && !check(step->before, step->after)) {
      fail(ErrorKind::InvariantViolation, "rule " + step->rule + " changed the meaning of " +
                                              print_formula(step->before));
    }
    out.result = step->after;
    out.steps.push_back(std::move(*step));
  }
  return out;
}

Reduction reduce_on_model(const KripkeModel& m, const Formula& f, const EventRegistry& registry) {
  Evaluator ev(registry);
  return reduce_to_static(f, registry, [&](const Formula& a, const Formula& b) {
    return ev.extension(m, a) == ev.extension(m, b);
  });
}

}  // namespace catdel
