#ifndef CATDEL_SHEAF_HPP_
#define CATDEL_SHEAF_HPP_

// Kripke sheaves, their fibered powers, sheaf models of a first-order
// signature, the in-context semantics and the pullback update.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "catdel/del.hpp"
#include "catdel/formula.hpp"
#include "catdel/kripke.hpp"
#include "catdel/reduce.hpp"

namespace catdel {

struct Signature {
  std::map<std::string, std::size_t> functions;
  std::map<std::string, std::size_t> relations;

  /// Throws InvariantViolation if a name is both a function and a relation.
  void validate() const;
};

/// π : D -> X with its source and target frames.
class KripkeSheaf {
 public:
  explicit KripkeSheaf(FrameMap proj) : proj_(std::move(proj)) {}

  const KripkeFrame& total() const { return proj_.src(); }
  const KripkeFrame& base() const { return proj_.dst(); }
  const FrameMap& proj() const { return proj_; }

 private:
  FrameMap proj_;
};

struct SheafDiagnostics {
  bool surjective = false;
  bool bounded = false;
  bool sheaf_condition = false;
  /// π and the diagonal D -> D^2_X both bounded.
  bool diagonal_characterization = false;
  /// The first of "surjective", "bounded", "sheaf condition" that fails.
  std::string failed;
  std::string witness;

  bool ok() const { return surjective && bounded && sheaf_condition; }
  /// Bounded plus sheaf condition agrees with the diagonal characterization.
  bool characterizations_agree() const {
    return (bounded && sheaf_condition) == diagonal_characterization;
  }
};

SheafDiagnostics is_kripke_sheaf(const FrameMap& proj);

/// D^n_X: n-tuples from a single fiber in lexicographic order. n = 0 is the
/// base itself and n = 1 is D itself.
struct FiberedPower {
  std::size_t n = 0;
  KripkeFrame frame;
  FrameMap proj;                     // π^n
  std::vector<FrameMap> components;  // p_i : D^n_X -> D
  std::vector<std::vector<std::size_t>> tuples;
  std::vector<std::size_t> worlds;  // π^n as a table
  std::map<std::vector<std::size_t>, std::size_t> index;

  /// Index of the tuple lying over `world` (the world alone decides when n = 0).
  std::size_t locate(const std::vector<std::size_t>& tuple, std::size_t world) const;
};

/// Works for any map π; the frame is the initial lift of the components and π^n.
FiberedPower fibered_power(const FrameMap& proj, std::size_t n);

/// The diagonal D -> D^2_X.
FrameMap diagonal(const FrameMap& proj, const FiberedPower& square);

struct FunctionInterp {
  std::size_t arity = 0;
  std::vector<std::size_t> table;  // D^arity element index -> D element index
};

class SheafModel {
 public:
  /// Validates the sheaf, the signature, and every interpretation: function
  /// tables must be fiber-preserving and monotone; relations live on D^n_X.
  SheafModel(KripkeSheaf sheaf, Signature sig, std::map<std::string, FunctionInterp> functions,
             std::map<std::string, Subset> relations);

  const KripkeSheaf& sheaf() const { return sheaf_; }
  const Signature& signature() const { return sig_; }
  const std::map<std::string, FunctionInterp>& functions() const { return functions_; }
  const std::map<std::string, Subset>& relations() const { return relations_; }
  const AgentSet& agents() const { return sheaf_.base().agents(); }

  /// Computed on first use and shared by copies of the model.
  const FiberedPower& power(std::size_t n) const;

  /// Throws UnknownSymbol / ArityMismatch.
  const FunctionInterp& function(const std::string& name, std::size_t arity) const;
  const Subset& relation(const std::string& name, std::size_t arity) const;

 private:
  struct PowerCache;

  KripkeSheaf sheaf_;
  Signature sig_;
  std::map<std::string, FunctionInterp> functions_;
  std::map<std::string, Subset> relations_;
  std::shared_ptr<PowerCache> powers_;
};

/// The result of updating a sheaf model with an event model.
struct SheafUpdate {
  SheafModel updated;
  FrameUpdate base;                 // X(x)E with p_X, p_E and the propositional R_e
  std::vector<std::size_t> source;  // D' element -> a in D
  std::vector<std::size_t> event;   // D' element -> e in E
  std::vector<Subset> pre;          // extension of each precondition on X
};

/// Throws OpenPrecondition for a precondition with free variables and
/// AgentMismatch when the event model has other agents.
SheafUpdate pullback_update(const SheafModel& m, const EventModel& em,
                            const EventRegistry& registry = {});

/// R^n_e = q^n_e o (i^n_e)^dagger : D^n_X -|-> D^n_{X(x)E}.
Rel transition_relation(const SheafModel& m, const SheafUpdate& u, std::size_t n,
                        std::size_t event);

/// p_X^* f : D^k_{X(x)E} -> D^n_{X(x)E} for a slice arrow f : D^k_X -> D^n_X given as a table.
Rel pullback_arrow(const SheafModel& m, const SheafUpdate& u, std::size_t k, std::size_t n,
                   const std::vector<std::size_t>& f);

class FoEvaluator {
 public:
  explicit FoEvaluator(const EventRegistry& registry);
  ~FoEvaluator();
  FoEvaluator(const FoEvaluator&) = delete;
  FoEvaluator& operator=(const FoEvaluator&) = delete;

  /// Subset of D^n_X, n = |context|.
  Subset interp(const SheafModel& m, const FormulaInContext& f);
  const SheafUpdate& update(const SheafModel& m, const EventModel& em);

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// Table of ⟦x̄ | t⟧ : D^n_X -> D.
std::vector<std::size_t> term_table(const SheafModel& m, const std::vector<std::string>& context,
                                    const Term& t);
/// Table of ⟦x̄ | t1..tk⟧ : D^n_X -> D^k_X.
std::vector<std::size_t> tuple_table(const SheafModel& m,
                                     const std::vector<std::string>& context,
                                     const std::vector<Term>& terms);
FrameMap interp_term(const SheafModel& m, const std::vector<std::string>& context,
                     const Term& t);
/// The arrow D^n_X -> D^k_X of a term tuple.
FrameMap interp_tuple(const SheafModel& m, const std::vector<std::string>& context,
                      const std::vector<Term>& terms);

Subset interp_formula(const SheafModel& m, const FormulaInContext& f,
                      const EventRegistry& registry = {});

/// ⟦x̄ | [E,e]φ⟧ (box) or ⟦x̄ | <E,e>φ⟧; `em` is added to the registry.
Subset del_in_context(const SheafModel& m, const EventModel& em, const std::string& event,
                      const FormulaInContext& f, bool box, const EventRegistry& registry = {});

/// Extension equality in context of each equivalence.
LawReport check_equivalences_in_context(const SheafModel& m,
                                        const std::vector<std::string>& context,
                                        const std::vector<Equivalence>& eqs,
                                        const EventRegistry& registry);

/// With φ in context x̄ and terms t̄ in context ȳ:
///   substitution           ⟦ȳ | φ[t̄/x̄]⟧ = ⟦t̄⟧^{-1} ⟦x̄ | φ⟧
///   box-substitution:a     the same for [a]φ
///   term-tuple-bounded     ⟦t̄⟧ is a bounded morphism
/// and, when `em` is given, for each event e:
///   del-box-substitution:e / del-dia-substitution:e for [E,e]φ and <E,e>φ,
///   transition-naturality:e and transition-naturality-dagger:e for ⟦t̄⟧.
LawReport check_substitution_box_commutation(const SheafModel& m, const FormulaInContext& phi,
                                             const std::vector<std::string>& new_context,
                                             const std::vector<Term>& terms,
                                             const EventModel* em = nullptr,
                                             const EventRegistry& registry = {});

/// p_X^* f o R^k_e = R^n_e o f and (p_X^* f)^dagger o R^n_e = R^k_e o f^dagger.
LawReport check_transition_naturality(const SheafModel& m, const SheafUpdate& u,
                                      std::size_t event, std::size_t k, std::size_t n,
                                      const std::vector<std::size_t>& f);

/// [E,e]∀y.φ == ∀y.[E,e]φ and [E,e]∃y.φ == Pre(e) -> ∃y.[E,e]φ in context x̄;
/// `body` may use y and x̄.
LawReport verify_quantifier_reduction(const SheafModel& m, const EventModel& em,
                                      const std::string& event,
                                      const std::vector<std::string>& context,
                                      const std::string& y, const Formula& body,
                                      const EventRegistry& registry = {});

/// D^n of the updated sheaf against the Kr pullback of π^n along p_X, under
/// ((a1,e),...,(an,e)) <-> ((w,e),(a1,...,an)). Empty when they agree,
/// otherwise a description of the first difference.
std::optional<std::string> compare_power_with_pullback(const SheafModel& m, const SheafUpdate& u,
                                                       std::size_t n);

/// reduce_to_static with in-context extension equality as the check.
Reduction reduce_in_context(const SheafModel& m, const FormulaInContext& f,
                            const EventRegistry& registry = {});

}  // namespace catdel

#endif  // CATDEL_SHEAF_HPP_
