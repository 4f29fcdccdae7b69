#ifndef CATDEL_FORMULA_HPP_
#define CATDEL_FORMULA_HPP_

// Immutable formula and term trees shared by the propositional (PAL/DEL)
// and first-order layers.

#include <memory>
#include <set>
#include <string>
#include <vector>

namespace catdel {

/// A variable, or a function symbol applied to terms (constants are nullary
/// applications and print as `c()`).
class Term {
 public:
  static Term var(std::string name);
  static Term apply(std::string fn, std::vector<Term> args);

  bool is_variable() const { return variable_; }
  const std::string& name() const { return name_; }
  const std::vector<Term>& args() const { return args_; }

  friend bool operator==(const Term&, const Term&) = default;

 private:
  Term(bool variable, std::string name, std::vector<Term> args)
      : variable_(variable), name_(std::move(name)), args_(std::move(args)) {}

  bool variable_ = true;
  std::string name_;
  std::vector<Term> args_;
};

enum class Op {
  Top,
  Bot,
  Atom,
  Pred,
  Not,
  And,
  Or,
  Imp,
  Box,
  Dia,
  PalBox,
  PalDia,
  DelBox,
  DelDia,
  Forall,
  Exists,
};

class Formula {
 public:
  static Formula top();
  static Formula bot();
  static Formula atom(std::string name);
  static Formula pred(std::string name, std::vector<Term> args);
  static Formula neg(Formula f);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula imp(Formula a, Formula b);
  static Formula box(std::string agent, Formula f);
  static Formula dia(std::string agent, Formula f);
  static Formula pal_box(Formula announcement, Formula f);
  static Formula pal_dia(Formula announcement, Formula f);
  static Formula del_box(std::string event_model, std::string event, Formula f);
  static Formula del_dia(std::string event_model, std::string event, Formula f);
  static Formula forall(std::string var, Formula f);
  static Formula exists(std::string var, Formula f);

  /// Left-nested conjunction/disjunction; the empty list gives top/bot.
  static Formula conj_all(const std::vector<Formula>& fs);
  static Formula disj_all(const std::vector<Formula>& fs);

  Op op() const { return node_->op; }
  /// Atom/predicate name, agent, event-model name or bound variable.
  const std::string& name() const { return node_->name; }
  const std::string& event() const { return node_->event; }
  const std::vector<Term>& terms() const { return node_->terms; }
  const std::vector<Formula>& kids() const { return node_->kids; }

  const Formula& kid(std::size_t i) const { return node_->kids[i]; }
  /// The operand of a unary operator, or the body of [σ!] / <σ!>.
  const Formula& body() const { return node_->kids.back(); }
  /// σ in [σ!]φ.
  const Formula& announcement() const { return node_->kids.front(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Node {
    Op op;
    std::string name;
    std::string event;
    std::vector<Term> terms;
    std::vector<Formula> kids;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Op op, std::string name, std::string event, std::vector<Term> terms,
                      std::vector<Formula> kids);

  std::shared_ptr<const Node> node_;
};

struct FormulaInContext {
  std::vector<std::string> context;
  Formula body;

  friend bool operator==(const FormulaInContext&, const FormulaInContext&) = default;
};

/// The same operator (name, event, terms) over new children.
Formula with_kids(const Formula& f, std::vector<Formula> kids);

bool is_dynamic_op(Op op);
bool is_binary_op(Op op);

/// No [σ!], <σ!>, [E,e] or <E,e> anywhere.
bool is_static(const Formula& f);
/// No predicates, terms or quantifiers.
bool is_propositional(const Formula& f);
/// Height of the syntax tree; atoms have depth 0.
std::size_t depth(const Formula& f);

std::set<std::string> atoms(const Formula& f);
std::set<std::string> agents(const Formula& f);
std::set<std::string> event_models(const Formula& f);
std::set<std::string> free_variables(const Term& t);
std::set<std::string> free_variables(const Formula& f);

/// Simultaneous substitution of terms for the variables `vars`.
/// Throws VariableCapture when a substituted term would fall under a binder
/// of one of its variables.
Term substitute(const Term& t, const std::vector<std::string>& vars,
                const std::vector<Term>& terms);
Formula substitute(const Formula& f, const std::vector<std::string>& vars,
                   const std::vector<Term>& terms);

/// A name not in `used`, built from `base` by appending primes.
std::string fresh_variable(const std::string& base, const std::set<std::string>& used);

}  // namespace catdel

#endif  // CATDEL_FORMULA_HPP_
