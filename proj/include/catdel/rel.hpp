#ifndef CATDEL_REL_HPP_
#define CATDEL_REL_HPP_

// Finite sets and binary relations between them: the category Rel with its
// dagger (converse), inclusion order and the handful of allegory laws the
// rest of the library leans on.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace catdel {

/// A named carrier with a fixed enumeration order. Two carriers are equal
/// iff they have the same name and the same element list.
class FiniteSet {
 public:
  FiniteSet();
  FiniteSet(std::string name, std::vector<std::string> elements);

  const std::string& name() const { return data_->name; }
  std::size_t size() const { return data_->elements.size(); }
  bool empty() const { return data_->elements.empty(); }
  const std::string& element(std::size_t i) const { return data_->elements[i]; }
  const std::vector<std::string>& elements() const { return data_->elements; }

  std::optional<std::size_t> find(std::string_view label) const;
  /// Throws InvariantViolation when the label is not an element.
  std::size_t index_of(std::string_view label) const;

  /// Same elements under a different carrier name.
  FiniteSet renamed(std::string name) const;

  friend bool operator==(const FiniteSet& a, const FiniteSet& b);

 private:
  struct Data {
    std::string name;
    std::vector<std::string> elements;
    std::unordered_map<std::string, std::size_t> index;
  };
  std::shared_ptr<const Data> data_;
};

/// Canonical composite labels: "(w,e)" and "(a1,...,an)".
std::string pair_label(std::string_view a, std::string_view b);
std::string tuple_label(std::span<const std::string> parts);

/// A relation R : dom -> cod, i.e. a subset of dom x cod. Stored as a dense
/// row-major bit matrix over the carriers' enumeration order.
class Rel {
 public:
  Rel(FiniteSet dom, FiniteSet cod);

  static Rel from_pairs(FiniteSet dom, FiniteSet cod,
                        std::span<const std::pair<std::size_t, std::size_t>> pairs);
  static Rel from_labels(FiniteSet dom, FiniteSet cod,
                         std::span<const std::pair<std::string, std::string>> pairs);
  static Rel from_predicate(FiniteSet dom, FiniteSet cod,
                            const std::function<bool(std::size_t, std::size_t)>& pred);
  /// Graph of the function given by `table[i]` = image of dom element i.
  static Rel from_function(FiniteSet dom, FiniteSet cod,
                           std::span<const std::size_t> table);
  /// Decodes bit k of `code` as pair (k / |cod|, k % |cod|); |dom|*|cod| <= 64.
  static Rel from_code(FiniteSet dom, FiniteSet cod, std::uint64_t code);

  const FiniteSet& dom() const { return dom_; }
  const FiniteSet& cod() const { return cod_; }

  bool contains(std::size_t w, std::size_t v) const {
    return bits_[w * cod_.size() + v];
  }
  bool contains(std::string_view w, std::string_view v) const;

  std::vector<std::pair<std::size_t, std::size_t>> pairs() const;
  std::vector<std::pair<std::string, std::string>> labeled_pairs() const;
  std::vector<std::size_t> successors(std::size_t w) const;
  std::vector<std::size_t> predecessors(std::size_t v) const;
  std::size_t pair_count() const;
  bool empty() const { return pair_count() == 0; }

  /// Same pairs, carriers replaced by equal-sized ones.
  Rel retyped(FiniteSet dom, FiniteSet cod) const;

  friend bool operator==(const Rel& a, const Rel& b);

 private:
  Rel(FiniteSet dom, FiniteSet cod, std::vector<bool> bits);

  FiniteSet dom_;
  FiniteSet cod_;
  std::vector<bool> bits_;

  friend Rel compose(const Rel&, const Rel&);
  friend Rel dagger(const Rel&);
  friend Rel meet(const Rel&, const Rel&);
  friend Rel join(const Rel&, const Rel&);
};

/// r2 o r1, i.e. "first r1, then r2": w (r2 o r1) u iff w r1 v r2 u for some v.
Rel compose(const Rel& r1, const Rel& r2);
Rel identity(const FiniteSet& x);
Rel dagger(const Rel& r);
Rel total_relation(const FiniteSet& dom, const FiniteSet& cod);
Rel meet(const Rel& r1, const Rel& r2);
Rel join(const Rel& r1, const Rel& r2);
bool leq(const Rel& r1, const Rel& r2);

/// ((r2 o r1) n r3) <= r2 o (r1 n (r2^dagger o r3)) for r1 : X->Y, r2 : Y->Z, r3 : X->Z.
bool check_modularity(const Rel& r1, const Rel& r2, const Rel& r3);

// Evaluated literally through the dagger equations; is_injective and
// is_surjective only carry their usual meaning when r is a function.
bool is_function(const Rel& r);
bool is_injective(const Rel& r);
bool is_surjective(const Rel& r);

/// Image table of a function; throws NotAFunction otherwise.
std::vector<std::size_t> function_table(const Rel& f);

/// (f^dagger o f) n (g^dagger o g) = 1_Z for functions f : Z->X, g : Z->Y.
bool is_jointly_monic(const Rel& f, const Rel& g);

struct Tabulation {
  FiniteSet apex;  // the pair set of the tabulated relation, labelled "(w,v)"
  Rel r1;          // apex -> dom
  Rel r2;          // apex -> cod
};

/// r = r2 o r1^dagger with (r1, r2) jointly monic.
Tabulation tabulate(const Rel& r);

bool is_reflexive(const Rel& r);
bool is_transitive(const Rel& r);
bool is_symmetric(const Rel& r);
Rel closure_reflexive_transitive(const Rel& r);

struct CartesianProduct {
  FiniteSet carrier;  // pairs in lexicographic order, labelled "(x,y)"
  Rel p1;
  Rel p2;
};
CartesianProduct cartesian_product(const FiniteSet& x, const FiniteSet& y,
                                   std::string name = {});

/// Inclusion S -> X of the listed elements (kept in X's order).
struct Inclusion {
  FiniteSet sub;
  Rel incl;
};
Inclusion inclusion_of(const FiniteSet& x, std::span<const std::size_t> members,
                       std::string name);

/// Largest carrier for "for every relation" sweeps: 2^(|dom|*|cod|) <= 2^16.
inline constexpr std::size_t kExhaustiveRelationBits = 16;

/// Calls `fn` on every relation dom -> cod; throws CapExceeded beyond the cap.
void for_each_relation(const FiniteSet& dom, const FiniteSet& cod,
                       const std::function<void(const Rel&)>& fn);

/// Canonical carrier {x0, ..., x(n-1)} named `name`.
FiniteSet numbered_set(std::string name, std::size_t n, std::string_view prefix);

}  // namespace catdel

#endif  // CATDEL_REL_HPP_
