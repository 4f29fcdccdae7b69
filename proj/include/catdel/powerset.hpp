#ifndef CATDEL_POWERSET_HPP_
#define CATDEL_POWERSET_HPP_

// The powerset side of Rel: exists/forall images of relations, inverse
// images, and checkers for the adjunction, the (bi)duality laws and the
// Beck-Chevalley condition.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "catdel/rel.hpp"

namespace catdel {

class Subset {
 public:
  Subset() = default;
  explicit Subset(FiniteSet carrier);  // empty subset
  Subset(FiniteSet carrier, std::vector<bool> members);

  static Subset full(const FiniteSet& carrier);
  static Subset of_indices(const FiniteSet& carrier, std::span<const std::size_t> members);
  static Subset of_labels(const FiniteSet& carrier, std::span<const std::string> labels);
  /// Bit i of `code` decides membership of element i.
  static Subset from_code(const FiniteSet& carrier, std::uint64_t code);

  const FiniteSet& carrier() const { return carrier_; }
  bool contains(std::size_t i) const { return members_[i]; }
  bool contains(std::string_view label) const;
  std::size_t count() const;
  bool empty() const { return count() == 0; }
  std::vector<std::size_t> indices() const;
  std::vector<std::string> labels() const;
  const std::vector<bool>& bits() const { return members_; }

  Subset with(std::size_t i, bool member) const;

  friend bool operator==(const Subset& a, const Subset& b);

 private:
  FiniteSet carrier_;
  std::vector<bool> members_;
};

Subset set_union(const Subset& a, const Subset& b);
Subset set_intersection(const Subset& a, const Subset& b);
Subset set_complement(const Subset& a);
/// (~a) u b, the pointwise implication.
Subset set_implication(const Subset& a, const Subset& b);
bool is_subset(const Subset& a, const Subset& b);

/// Largest carrier whose full powerset is enumerated by test-mode checks.
inline constexpr std::size_t kExhaustiveSubsetCap = 12;

void for_each_subset(const FiniteSet& carrier, const std::function<void(const Subset&)>& fn);

enum class ExtensionKind { Join, Meet };

/// A map P(dom) -> P(cod) held in atom-table normal form.
///   Join: table[w] = h({w}),        h(S) = U_{w in S} table[w]
///   Meet: table[w] = h(dom \ {w}),  h(S) = cod n N_{w not in S} table[w]
class PowersetMap {
 public:
  PowersetMap(FiniteSet dom, FiniteSet cod, ExtensionKind kind, std::vector<Subset> table);

  /// Tabulates an arbitrary function on atoms (Join) or co-atoms (Meet).
  /// Only faithful when `fn` preserves joins (resp. meets).
  static PowersetMap from_function(const FiniteSet& dom, const FiniteSet& cod,
                                   ExtensionKind kind,
                                   const std::function<Subset(const Subset&)>& fn);

  const FiniteSet& dom() const { return dom_; }
  const FiniteSet& cod() const { return cod_; }
  ExtensionKind kind() const { return kind_; }
  const std::vector<Subset>& table() const { return table_; }

  Subset apply(const Subset& s) const;

  friend bool operator==(const PowersetMap& a, const PowersetMap& b);

 private:
  FiniteSet dom_;
  FiniteSet cod_;
  ExtensionKind kind_;
  std::vector<Subset> table_;
};

/// exists_R(S) = { v | w R v for some w in S }
PowersetMap exists_map(const Rel& r);
/// forall_R(S) = { v | w in S for all w with w R v }
PowersetMap forall_map(const Rel& r);
/// f^{-1} for a function f : X -> Y, as a join-extension P(Y) -> P(X).
PowersetMap preimage_map(const Rel& f);

/// Re-tabulates `h` in the other normal form. Exact when `h` preserves both
/// joins and meets (e.g. inverse images).
PowersetMap convert(const PowersetMap& h, ExtensionKind kind);

/// h2 o h1 ("first h1"); both maps must share a kind.
PowersetMap compose(const PowersetMap& h1, const PowersetMap& h2);
PowersetMap identity_map(const FiniteSet& x, ExtensionKind kind);

/// h1 <= h2 iff h1(S) <= h2(S) for all S, decided on the atom tables.
bool leq(const PowersetMap& h1, const PowersetMap& h2);
/// Same order decided by enumerating all subsets of dom (CapExceeded beyond the cap).
bool leq_exhaustive(const PowersetMap& h1, const PowersetMap& h2);
bool equal_exhaustive(const PowersetMap& h1, const PowersetMap& h2);
/// A subset S with h1(S) != h2(S), if any.
std::optional<Subset> find_difference(const PowersetMap& h1, const PowersetMap& h2);

/// The unique R with exists_R = h (resp. forall_R = h).
Rel relation_from_join_map(const PowersetMap& h);
Rel relation_from_meet_map(const PowersetMap& h);

/// left(S1) <= S2 iff S1 <= right(S2) for every S1, S2.
bool is_adjoint_pair(const PowersetMap& left, const PowersetMap& right);
/// exists_R -| forall_{R^dagger}, checked over every pair of subsets.
bool check_adjunction(const Rel& r);

struct LawResult {
  std::string name;
  bool applicable = true;
  bool holds = true;
  std::string witness;  // a separating subset or relation pair when the law is strict or fails
};

struct LawReport {
  std::vector<LawResult> laws;
  bool all_hold() const;
  const LawResult* find(std::string_view name) const;
};

/// The order-(anti)isomorphism and functoriality laws of the relation/CABA
/// dualities for a pair of relations:
///   exists-order     R1 <= R2  iff  exists_R1 <= exists_R2
///   forall-order     R1 <= R2  iff  forall_R2 <= forall_R1
///   exists-dagger-functor  exists_{(R2 o R1)^d} = exists_{R1^d} o exists_{R2^d}
///   forall-dagger-functor  forall_{(R2 o R1)^d} = forall_{R1^d} o forall_{R2^d}
///   exists-dagger-order    R1 <= R2  iff  exists_{R1^d} <= exists_{R2^d}
///   forall-dagger-order    R1 <= R2  iff  forall_{R2^d} <= forall_{R1^d}
/// Composition laws apply when r1.cod == r2.dom, order laws when the types agree.
/// Every order comparison is made both on atom tables and exhaustively.
LawReport check_biduality_laws(const Rel& r1, const Rel& r2);

/// A square of functions  p : P -> Y,  q : P -> Z,  f : Y -> X,  g : Z -> X.
struct Square {
  Rel p;
  Rel q;
  Rel f;
  Rel g;
};

/// The set-level pullback of f and g, apex {(y,z) | f(y) = g(z)}.
Square set_pullback(const Rel& f, const Rel& g);
bool square_commutes(const Square& s);
/// Structural pullback test: commutes and <p,q> is a bijection onto the fibered product.
bool is_pullback(const Square& s);
/// p o q^dagger = f^dagger o g, evaluated without validating the square.
bool beck_chevalley_holds(const Square& s);
/// Throws NotAPullback unless `s` is a pullback, then evaluates the equation.
bool check_beck_chevalley(const Square& s);

}  // namespace catdel

#endif  // CATDEL_POWERSET_HPP_
