#ifndef CATDEL_DEL_HPP_
#define CATDEL_DEL_HPP_

// Kripke models, event models and the semantics of modal logic, public
// announcement logic and dynamic epistemic logic, with the product update
// and checkers for the reduction axioms.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "catdel/formula.hpp"
#include "catdel/kripke.hpp"
#include "catdel/powerset.hpp"

namespace catdel {

class KripkeModel {
 public:
  /// Every valuation subset must live on the frame carrier.
  KripkeModel(KripkeFrame frame, std::map<std::string, Subset> valuation);

  const KripkeFrame& frame() const { return frame_; }
  const FiniteSet& carrier() const { return frame_.carrier(); }
  const AgentSet& agents() const { return frame_.agents(); }
  const std::map<std::string, Subset>& valuation() const { return valuation_; }
  /// Throws UnknownAtom.
  const Subset& atom(const std::string& name) const;

 private:
  KripkeFrame frame_;
  std::map<std::string, Subset> valuation_;
};

class EventModel {
 public:
  /// `pre` must name exactly the events of the frame carrier.
  EventModel(std::string name, KripkeFrame frame, std::map<std::string, Formula> pre);

  const std::string& name() const { return name_; }
  const KripkeFrame& frame() const { return frame_; }
  const FiniteSet& events() const { return frame_.carrier(); }
  const AgentSet& agents() const { return frame_.agents(); }
  const Formula& pre(std::size_t event) const;
  /// Throws UnknownEvent.
  const Formula& pre(const std::string& event) const;
  std::size_t event_index(const std::string& event) const;

 private:
  std::string name_;
  KripkeFrame frame_;
  std::map<std::string, Formula> pre_;
};

/// Single event `e` with precondition σ, seen as itself by every agent.
EventModel announcement_model(const Formula& sigma, const AgentSet& agents,
                              std::string name = "announce");

class EventRegistry {
 public:
  void add(EventModel em);
  const EventModel* find(const std::string& name) const;
  /// Throws UnresolvedEventModel.
  const EventModel& at(const std::string& name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, EventModel> models_;
};

/// Per-event data of an update: i_e : Pre(e) -> X, q_e : Pre(e) -> X(x)E and
/// the transition R_e : X -|-> X(x)E.
struct EventTransition {
  std::string event;
  Subset pre;
  Rel inclusion;
  Rel injection;
  Rel transition;             // q_e o i_e^dagger
  Rel transition_via_product;  // i^dagger o q'_e
};

/// The updated frame X(x)E = {(w,e) | w in Pre(e)} with its canonical maps.
struct FrameUpdate {
  KripkeFrame frame;
  FrameMap p_x;
  FrameMap p_e;
  Rel product_inclusion;  // i : X(x)E -> X x E
  std::vector<EventTransition> events;

  const EventTransition& event(const std::string& name) const;
  bool transition_routes_agree() const;
};

/// `pre[k]` is the extension of the precondition of event k on `x`.
FrameUpdate update_frame(const KripkeFrame& x, const KripkeFrame& e, std::span<const Subset> pre);

struct UpdateResult {
  KripkeModel updated;
  FrameUpdate maps;
};

struct PalResult {
  KripkeModel updated;
  FrameMap incl;
};

/// Memoized evaluation of formulas over a model and the models reached
/// from it by updates. Caches live as long as the evaluator.
class Evaluator {
 public:
  explicit Evaluator(const EventRegistry& registry);
  ~Evaluator();
  Evaluator(const Evaluator&) = delete;
  Evaluator& operator=(const Evaluator&) = delete;

  Subset extension(const KripkeModel& m, const Formula& f);
  const PalResult& pal_update(const KripkeModel& m, const Formula& sigma);
  const UpdateResult& product_update(const KripkeModel& m, const EventModel& em);

 private:
  struct State;
  std::unique_ptr<State> state_;
};

Subset extension(const KripkeModel& m, const Formula& f, const EventRegistry& registry = {});
PalResult pal_update(const KripkeModel& m, const Formula& sigma,
                     const EventRegistry& registry = {});
UpdateResult product_update(const KripkeModel& m, const EventModel& em,
                            const EventRegistry& registry = {});

/// Both sides of one reduction axiom instance.
struct Equivalence {
  std::string name;
  Formula lhs;
  Formula rhs;
};

/// [σ!]p == σ->p for every atom of `m`; [σ!](φ&ψ); [σ!]~φ; [σ!][a]φ per agent.
std::vector<Equivalence> pal_reduction_instances(const Formula& sigma, const Formula& phi,
                                                 const Formula& psi,
                                                 const std::vector<std::string>& atom_names,
                                                 const AgentSet& agents);
/// The DEL analogues; the box axiom conjoins over R_E[a]-successors of the event.
std::vector<Equivalence> del_reduction_instances(const EventModel& em, const std::string& event,
                                                 const Formula& phi, const Formula& psi,
                                                 const std::vector<std::string>& atom_names);

/// Extension equality of every equivalence on `m`.
LawReport check_equivalences(const KripkeModel& m, const std::vector<Equivalence>& eqs,
                             const EventRegistry& registry);

LawReport verify_pal_reductions(const KripkeModel& m, const Formula& sigma, const Formula& phi,
                                const Formula& psi, const EventRegistry& registry = {});
/// `em` is added to a copy of `registry` under its own name.
LawReport verify_del_reductions(const KripkeModel& m, const EventModel& em,
                                const std::string& event, const Formula& phi,
                                const Formula& psi, const EventRegistry& registry = {});

/// Formulas over atoms with ~, & and [a] up to the given depth; & is taken over
/// unordered pairs of distinct subformulas.
std::vector<Formula> enumerate_formulas(const std::vector<std::string>& atom_names,
                                        const AgentSet& agents, std::size_t max_depth);

struct NoLearningReport {
  bool p_x_bounded = false;
  std::size_t formulas_checked = 0;
  /// Bounded case: equalities [E,e]φ == Pre(e)->φ that failed.
  std::vector<std::string> failures;
  /// Unbounded case: a formula, event and world where the update teaches something.
  std::optional<std::string> learning_witness;
};

NoLearningReport no_learning_check(const KripkeModel& m, const EventModel& em,
                                   std::size_t max_depth, const EventRegistry& registry = {});

struct PreconditionModalities {
  PowersetMap forall_composite;  // forall_i o i^{-1}
  PowersetMap exists_composite;  // exists_i o i^{-1}
};

/// Throws InvariantViolation unless the composites are σ->(-) and σ&(-).
PreconditionModalities static_precondition_modalities(const KripkeModel& m,
                                                      const Formula& sigma,
                                                      const EventRegistry& registry = {});

}  // namespace catdel

#endif  // CATDEL_DEL_HPP_
