#ifndef CATDEL_KRIPKE_HPP_
#define CATDEL_KRIPKE_HPP_

// Multi-agent Kripke frames with monotone maps (Kr) and bounded morphisms
// (Krb), plus the topological constructions DEL is built from: initial
// lifts, products, subframes and pullbacks.

#include <span>
#include <string>
#include <vector>

#include "catdel/powerset.hpp"
#include "catdel/rel.hpp"

namespace catdel {

class AgentSet {
 public:
  AgentSet() = default;
  explicit AgentSet(std::vector<std::string> agents);

  std::size_t size() const { return agents_.size(); }
  const std::string& operator[](std::size_t i) const { return agents_[i]; }
  const std::vector<std::string>& labels() const { return agents_; }
  std::optional<std::size_t> find(std::string_view agent) const;
  /// Throws UnknownAgent.
  std::size_t index_of(std::string_view agent) const;

  auto begin() const { return agents_.begin(); }
  auto end() const { return agents_.end(); }

  friend bool operator==(const AgentSet&, const AgentSet&) = default;

 private:
  std::vector<std::string> agents_;
};

class KripkeFrame {
 public:
  /// `relations[i]` belongs to `agents[i]` and must be an endo-relation on `carrier`.
  KripkeFrame(FiniteSet carrier, AgentSet agents, std::vector<Rel> relations);

  /// Every agent gets the same relation.
  static KripkeFrame uniform(FiniteSet carrier, AgentSet agents, const Rel& r);

  const FiniteSet& carrier() const { return carrier_; }
  const AgentSet& agents() const { return agents_; }
  const Rel& rel(std::size_t agent) const { return relations_[agent]; }
  const Rel& rel(std::string_view agent) const { return relations_[agents_.index_of(agent)]; }
  const std::vector<Rel>& relations() const { return relations_; }

  friend bool operator==(const KripkeFrame&, const KripkeFrame&) = default;

 private:
  FiniteSet carrier_;
  AgentSet agents_;
  std::vector<Rel> relations_;
};

/// A function between the carriers of two frames over the same agents.
class FrameMap {
 public:
  FrameMap(KripkeFrame src, KripkeFrame dst, Rel fn);
  static FrameMap identity(const KripkeFrame& f);

  const KripkeFrame& src() const { return src_; }
  const KripkeFrame& dst() const { return dst_; }
  const Rel& fn() const { return fn_; }
  const std::vector<std::size_t>& table() const { return table_; }
  std::size_t operator()(std::size_t w) const { return table_[w]; }

 private:
  KripkeFrame src_;
  KripkeFrame dst_;
  Rel fn_;
  std::vector<std::size_t> table_;
};

/// g o f ("first f").
FrameMap compose(const FrameMap& f, const FrameMap& g);

/// f o R_X <= R_Y o f for every agent.
bool is_monotone(const FrameMap& m);
/// f o R_X = R_Y o f for every agent.
bool is_bounded(const FrameMap& m);

/// A family of functions f_i : X -> Y_i into frames (Y_i, R_i) over `agents`.
struct LiftFamily {
  FiniteSet carrier;
  AgentSet agents;
  std::vector<Rel> fns;
  std::vector<KripkeFrame> targets;
};

/// R_X = intersection over i of f_i^dagger o R_i o f_i, per agent; the empty
/// family yields the total relation.
KripkeFrame initial_lift(const LiftFamily& family);

/// For each candidate R and agent: R <= R_X[agent] iff every f_i preserves R.
bool largest_preserved_check(const LiftFamily& family, const KripkeFrame& lift,
                             std::span<const Rel> candidates);

/// (U_{a in group} R_a)^*.
Rel common_knowledge_relation(const KripkeFrame& f, std::span<const std::string> group);

struct ProductResult {
  KripkeFrame frame;
  FrameMap p1;
  FrameMap p2;
};
ProductResult product(const KripkeFrame& f1, const KripkeFrame& f2);

struct SubframeResult {
  KripkeFrame frame;
  FrameMap incl;
};
/// R_S = i^dagger o R_X o i.
SubframeResult subframe(const KripkeFrame& f, const Subset& s, std::string name = {});

struct PullbackResult {
  KripkeFrame frame;  // carrier {(y,z) | f(y) = g(z)}
  FrameMap p;         // to f's source
  FrameMap q;         // to g's source
};
/// Pullback in Kr of f : Y -> X and g : Z -> X, with the initial-lift relation.
PullbackResult pullback(const FrameMap& f, const FrameMap& g);

/// Whether the pullback p of g along f is bounded; always true when g is bounded.
bool check_pullback_preserves_bounded(const FrameMap& f, const FrameMap& g);

/// Frame on the tabulation apex of r (initial lift of both projections) and
/// the test that both projections are bounded morphisms.
bool is_bisimulation(const KripkeFrame& f1, const KripkeFrame& f2, const Rel& r);

/// Renames carrier elements to prefix0, prefix1, ... keeping the relations.
KripkeFrame relabel(const KripkeFrame& f, std::string_view prefix);

}  // namespace catdel

#endif  // CATDEL_KRIPKE_HPP_
