#include "catdel/formula.hpp"

#include <algorithm>

#include "catdel/error.hpp"

namespace catdel {

Term Term::var(std::string name) { return Term(true, std::move(name), {}); }

Term Term::apply(std::string fn, std::vector<Term> args) {
  return Term(false, std::move(fn), std::move(args));
}

Formula Formula::make(Op op, std::string name, std::string event, std::vector<Term> terms,
                      std::vector<Formula> kids) {
  return Formula(std::make_shared<const Node>(
      Node{op, std::move(name), std::move(event), std::move(terms), std::move(kids)}));
}

Formula Formula::top() { return make(Op::Top, {}, {}, {}, {}); }
Formula Formula::bot() { return make(Op::Bot, {}, {}, {}, {}); }
Formula Formula::atom(std::string name) { return make(Op::Atom, std::move(name), {}, {}, {}); }
Formula Formula::pred(std::string name, std::vector<Term> args) {
  return make(Op::Pred, std::move(name), {}, std::move(args), {});
}
Formula Formula::neg(Formula f) { return make(Op::Not, {}, {}, {}, {std::move(f)}); }
Formula Formula::conj(Formula a, Formula b) {
  return make(Op::And, {}, {}, {}, {std::move(a), std::move(b)});
}
Formula Formula::disj(Formula a, Formula b) {
  return make(Op::Or, {}, {}, {}, {std::move(a), std::move(b)});
}
Formula Formula::imp(Formula a, Formula b) {
  return make(Op::Imp, {}, {}, {}, {std::move(a), std::move(b)});
}
Formula Formula::box(std::string agent, Formula f) {
  return make(Op::Box, std::move(agent), {}, {}, {std::move(f)});
}
Formula Formula::dia(std::string agent, Formula f) {
  return make(Op::Dia, std::move(agent), {}, {}, {std::move(f)});
}
Formula Formula::pal_box(Formula announcement, Formula f) {
  return make(Op::PalBox, {}, {}, {}, {std::move(announcement), std::move(f)});
}
Formula Formula::pal_dia(Formula announcement, Formula f) {
  return make(Op::PalDia, {}, {}, {}, {std::move(announcement), std::move(f)});
}
Formula Formula::del_box(std::string event_model, std::string event, Formula f) {
  return make(Op::DelBox, std::move(event_model), std::move(event), {}, {std::move(f)});
}
Formula Formula::del_dia(std::string event_model, std::string event, Formula f) {
  return make(Op::DelDia, std::move(event_model), std::move(event), {}, {std::move(f)});
}
Formula Formula::forall(std::string var, Formula f) {
  return make(Op::Forall, std::move(var), {}, {}, {std::move(f)});
}
Formula Formula::exists(std::string var, Formula f) {
  return make(Op::Exists, std::move(var), {}, {}, {std::move(f)});
}

Formula Formula::conj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return top();
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = conj(out, fs[i]);
  return out;
}

Formula Formula::disj_all(const std::vector<Formula>& fs) {
  if (fs.empty()) return bot();
  Formula out = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) out = disj(out, fs[i]);
  return out;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.op == y.op && x.name == y.name && x.event == y.event && x.terms == y.terms &&
         x.kids == y.kids;
}

bool is_dynamic_op(Op op) {
  return op == Op::PalBox || op == Op::PalDia || op == Op::DelBox || op == Op::DelDia;
}

bool is_binary_op(Op op) { return op == Op::And || op == Op::Or || op == Op::Imp; }

bool is_static(const Formula& f) {
  if (is_dynamic_op(f.op())) return false;
  return std::all_of(f.kids().begin(), f.kids().end(), [](const Formula& k) { return is_static(k); });
}

bool is_propositional(const Formula& f) {
  if (f.op() == Op::Pred || f.op() == Op::Forall || f.op() == Op::Exists) return false;
  return std::all_of(f.kids().begin(), f.kids().end(),
                     [](const Formula& k) { return is_propositional(k); });
}

std::size_t depth(const Formula& f) {
  std::size_t d = 0;
  for (const auto& k : f.kids()) d = std::max(d, depth(k) + 1);
  return d;
}

namespace {

void collect(const Formula& f, Op op, std::set<std::string>& out) {
  if (f.op() == op) out.insert(f.name());
  for (const auto& k : f.kids()) collect(k, op, out);
}

void collect_agents(const Formula& f, std::set<std::string>& out) {
  if (f.op() == Op::Box || f.op() == Op::Dia) out.insert(f.name());
  for (const auto& k : f.kids()) collect_agents(k, out);
}

void collect_event_models(const Formula& f, std::set<std::string>& out) {
  if (f.op() == Op::DelBox || f.op() == Op::DelDia) out.insert(f.name());
  for (const auto& k : f.kids()) collect_event_models(k, out);
}

void term_vars(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) term_vars(a, out);
}

void formula_vars(const Formula& f, std::set<std::string> bound, std::set<std::string>& out) {
  if (f.op() == Op::Pred) {
    for (const auto& t : f.terms()) {
      std::set<std::string> vs;
      term_vars(t, vs);
      for (const auto& v : vs)
        if (!bound.count(v)) out.insert(v);
    }
    return;
  }
  if (f.op() == Op::Forall || f.op() == Op::Exists) bound.insert(f.name());
  for (const auto& k : f.kids()) formula_vars(k, bound, out);
}

Formula rebuild(const Formula& f, std::vector<Formula> kids) {
  switch (f.op()) {
    case Op::Not: return Formula::neg(kids[0]);
    case Op::And: return Formula::conj(kids[0], kids[1]);
    case Op::Or: return Formula::disj(kids[0], kids[1]);
    case Op::Imp: return Formula::imp(kids[0], kids[1]);
    case Op::Box: return Formula::box(f.name(), kids[0]);
    case Op::Dia: return Formula::dia(f.name(), kids[0]);
    case Op::PalBox: return Formula::pal_box(kids[0], kids[1]);
    case Op::PalDia: return Formula::pal_dia(kids[0], kids[1]);
    case Op::DelBox: return Formula::del_box(f.name(), f.event(), kids[0]);
    case Op::DelDia: return Formula::del_dia(f.name(), f.event(), kids[0]);
    case Op::Forall: return Formula::forall(f.name(), kids[0]);
    case Op::Exists: return Formula::exists(f.name(), kids[0]);
    default: return f;
  }
}

}  // namespace

Formula with_kids(const Formula& f, std::vector<Formula> kids) { return rebuild(f, std::move(kids)); }

std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  collect(f, Op::Atom, out);
  return out;
}

std::set<std::string> agents(const Formula& f) {
  std::set<std::string> out;
  collect_agents(f, out);
  return out;
}

std::set<std::string> event_models(const Formula& f) {
  std::set<std::string> out;
  collect_event_models(f, out);
  return out;
}

std::set<std::string> free_variables(const Term& t) {
  std::set<std::string> out;
  term_vars(t, out);
  return out;
}

std::set<std::string> free_variables(const Formula& f) {
  std::set<std::string> out;
  formula_vars(f, {}, out);
  return out;
}

Term substitute(const Term& t, const std::vector<std::string>& vars,
                const std::vector<Term>& terms) {
  if (t.is_variable()) {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == t.name()) return terms[i];
    return t;
  }
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(substitute(a, vars, terms));
  return Term::apply(t.name(), std::move(args));
}

Formula substitute(const Formula& f, const std::vector<std::string>& vars,
                   const std::vector<Term>& terms) {
  if (vars.size() != terms.size()) {
    fail(ErrorKind::ArityMismatch, "substitute: " + std::to_string(vars.size()) +
                                       " variables for " + std::to_string(terms.size()) +
                                       " terms");
  }
  if (f.op() == Op::Pred) {
    std::vector<Term> args;
    for (const auto& t : f.terms()) args.push_back(substitute(t, vars, terms));
    return Formula::pred(f.name(), std::move(args));
  }
  if (f.op() == Op::Forall || f.op() == Op::Exists) {
    const std::string& y = f.name();
    std::vector<std::string> inner_vars;
    std::vector<Term> inner_terms;
    const auto body_free = free_variables(f.body());
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] == y || !body_free.count(vars[i])) continue;
      if (free_variables(terms[i]).count(y)) {
        fail(ErrorKind::VariableCapture, "substituting for " + vars[i] + " under the binder " +
                                             y + " would capture " + y);
      }
      inner_vars.push_back(vars[i]);
      inner_terms.push_back(terms[i]);
    }
    return rebuild(f, {substitute(f.body(), inner_vars, inner_terms)});
  }
  if (f.kids().empty()) return f;
  std::vector<Formula> kids;
  for (const auto& k : f.kids()) kids.push_back(substitute(k, vars, terms));
  return rebuild(f, std::move(kids));
}

std::string fresh_variable(const std::string& base, const std::set<std::string>& used) {
  std::string name = base;
  while (used.count(name)) name += '\'';
  return name;
}

}  // namespace catdel
