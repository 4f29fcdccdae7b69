#ifndef CATDEL_REDUCE_HPP_
#define CATDEL_REDUCE_HPP_

// Rewriting dynamic formulas to static ones with the PAL/DEL reduction
// axioms, leftmost-outermost redex first.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "catdel/del.hpp"
#include "catdel/formula.hpp"

namespace catdel {

struct ReductionStep {
  std::string rule;
  Formula before;  // whole formula before the rewrite
  Formula after;
};

struct Reduction {
  Formula input;
  Formula result;
  std::vector<ReductionStep> steps;
};

/// Decides whether two whole formulas denote the same set on some model.
using EquivalenceCheck = std::function<bool(const Formula&, const Formula&)>;

/// One rewrite at the leftmost-outermost redex, or nullopt for static input.
/// Throws NotReducible for unresolved event models and for [σ!]/[E,e] over
/// a quantifier that binds a variable free in the precondition.
std::optional<ReductionStep> reduction_step(const Formula& f, const EventRegistry& registry);

/// Rewrites until static. Every step is passed to `check` when given;
/// a rejected step throws InvariantViolation naming the rule.
Reduction reduce_to_static(const Formula& f, const EventRegistry& registry,
                           const EquivalenceCheck& check = {});

/// reduce_to_static with extension equality on `m` as the check.
Reduction reduce_on_model(const KripkeModel& m, const Formula& f,
                          const EventRegistry& registry = {});

}  // namespace catdel

#endif  // CATDEL_REDUCE_HPP_
