#ifndef CATDEL_GENERATORS_HPP_
#define CATDEL_GENERATORS_HPP_

// Seeded random generators for relations, frames, models, formulas and
// sheaf models. Everything is a pure function of the Rng state.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "catdel/del.hpp"
#include "catdel/sheaf.hpp"

namespace catdel {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n); n must be positive.
  std::size_t below(std::size_t n);
  /// Uniform in [lo, hi].
  std::size_t between(std::size_t lo, std::size_t hi);
  bool chance(double p);
  std::uint64_t bits();

  template <typename T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

 private:
  std::mt19937_64 engine_;
};

/// Seed for case `index` of a suite run with `seed`.
std::uint64_t case_seed(std::uint64_t seed, std::uint64_t index);

AgentSet agent_names(std::size_t n);

Rel random_relation(Rng& rng, const FiniteSet& dom, const FiniteSet& cod, double density = 0.4);
Rel random_function(Rng& rng, const FiniteSet& dom, const FiniteSet& cod);
/// Needs |dom| >= |cod|.
Rel random_surjection(Rng& rng, const FiniteSet& dom, const FiniteSet& cod);

KripkeFrame random_frame(Rng& rng, const FiniteSet& carrier, const AgentSet& agents,
                         double density = 0.4);

/// A frame on `carrier` whose relations are reflexive, transitive and/or symmetric.
KripkeFrame random_frame_with(Rng& rng, const FiniteSet& carrier, const AgentSet& agents,
                              bool reflexive, bool transitive, bool symmetric);

/// A monotone map into `target` from a fresh frame of size `n`.
FrameMap random_monotone_into(Rng& rng, const KripkeFrame& target, std::size_t n,
                              const std::string& name);
/// A bounded morphism onto `target` from a fresh frame of size n >= |target|.
FrameMap random_bounded_onto(Rng& rng, const KripkeFrame& target, std::size_t n,
                             const std::string& name);

struct ModelShape {
  std::size_t max_worlds = 4;
  std::size_t agents = 2;
  std::vector<std::string> atoms{"p", "q"};
};

KripkeModel random_model(Rng& rng, const ModelShape& shape, const std::string& name = "X");

struct FormulaShape {
  std::vector<std::string> atoms{"p", "q"};
  AgentSet agents;
  bool announcements = false;
  /// Event models that [E,e] may refer to.
  std::vector<const EventModel*> event_models;
};

Formula random_formula(Rng& rng, const FormulaShape& shape, std::size_t depth);

/// At most `max_events` events; preconditions are static formulas of depth <= pre_depth.
EventModel random_event_model(Rng& rng, const std::string& name, const AgentSet& agents,
                              std::size_t max_events, const std::vector<std::string>& atoms,
                              std::size_t pre_depth = 1);

/// Every precondition is "true" and every event relation is serial, so p_X is bounded.
EventModel random_serial_event_model(Rng& rng, const std::string& name, const AgentSet& agents,
                                     std::size_t max_events);

struct SheafShape {
  std::size_t max_worlds = 3;
  std::size_t max_fiber = 2;
  std::size_t agents = 1;
  /// Adds unary f, constant c (when a monotone section exists), unary F,
  /// binary G and 0-ary p to the signature.
  bool symbols = true;
};

/// A Kripke sheaf: every individual sees exactly one individual in each
/// fiber over a successor world.
FrameMap random_sheaf(Rng& rng, const SheafShape& shape);

/// How a planted non-sheaf was broken.
enum class Planted { None, ExtraEdge, MissingEdge, StrayEdge };

struct SheafCandidate {
  FrameMap proj;
  Planted planted = Planted::None;
};

/// A sheaf or, about half of the time, a sheaf with one planted defect.
SheafCandidate random_sheaf_candidate(Rng& rng, const SheafShape& shape);

SheafModel random_sheaf_model(Rng& rng, const SheafShape& shape);

struct FoShape {
  std::vector<std::string> context;
  bool events = false;
  const EventModel* event_model = nullptr;
};

/// A formula over the symbols of random_sheaf_model whose free variables lie in `context`.
Formula random_fo_formula(Rng& rng, const SheafModel& m, const FoShape& shape, std::size_t depth);
/// A term over `context` (non-empty context, or a constant symbol).
Term random_term(Rng& rng, const SheafModel& m, const std::vector<std::string>& context,
                 std::size_t depth);

/// Closed sentences for event preconditions in the first-order setting.
EventModel random_fo_event_model(Rng& rng, const SheafModel& m, const std::string& name,
                                 std::size_t max_events);

}  // namespace catdel

#endif  // CATDEL_GENERATORS_HPP_
