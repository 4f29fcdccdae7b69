#include "catdel/rel.hpp"

#include <algorithm>

#include "catdel/error.hpp"

namespace catdel {

namespace {

void require_same_type(const Rel& a, const Rel& b, std::string_view op) {
  if (!(a.dom() == b.dom()) || !(a.cod() == b.cod())) {
    fail(ErrorKind::CarrierMismatch,
         std::string(op) + ": relations " + a.dom().name() + "->" + a.cod().name() +
             " and " + b.dom().name() + "->" + b.cod().name() + " differ in type");
  }
}

void require_endo(const Rel& r, std::string_view op) {
  if (!(r.dom() == r.cod())) {
    fail(ErrorKind::CarrierMismatch, std::string(op) + ": relation " + r.dom().name() +
                                         "->" + r.cod().name() + " is not on one carrier");
  }
}

}  // namespace

// --- FiniteSet ---------------------------------------------------------------

FiniteSet::FiniteSet() : FiniteSet("", {}) {}

FiniteSet::FiniteSet(std::string name, std::vector<std::string> elements) {
  auto data = std::make_shared<Data>();
  data->name = std::move(name);
  data->index.reserve(elements.size());
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!data->index.emplace(elements[i], i).second) {
      fail(ErrorKind::InvariantViolation,
           "carrier " + data->name + ": duplicate element '" + elements[i] + "'");
    }
  }
  data->elements = std::move(elements);
  data_ = std::move(data);
}

std::optional<std::size_t> FiniteSet::find(std::string_view label) const {
  auto it = data_->index.find(std::string(label));
  if (it == data_->index.end()) return std::nullopt;
  return it->second;
}

std::size_t FiniteSet::index_of(std::string_view label) const {
  if (auto i = find(label)) return *i;
  fail(ErrorKind::InvariantViolation,
       "'" + std::string(label) + "' is not an element of " + name());
}

FiniteSet FiniteSet::renamed(std::string name) const {
  return FiniteSet(std::move(name), data_->elements);
}

bool operator==(const FiniteSet& a, const FiniteSet& b) {
  return a.data_ == b.data_ ||
         (a.data_->name == b.data_->name && a.data_->elements == b.data_->elements);
}

std::string pair_label(std::string_view a, std::string_view b) {
  std::string out = "(";
  out.append(a);
  out += ',';
  out.append(b);
  out += ')';
  return out;
}

std::string tuple_label(std::span<const std::string> parts) {
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ',';
    out += parts[i];
  }
  out += ')';
  return out;
}

FiniteSet numbered_set(std::string name, std::size_t n, std::string_view prefix) {
  std::vector<std::string> elems;
  elems.reserve(n);
  for (std::size_t i = 0; i < n; ++i) elems.push_back(std::string(prefix) + std::to_string(i));
  return FiniteSet(std::move(name), std::move(elems));
}

// --- Rel ---------------------------------------------------------------------

Rel::Rel(FiniteSet dom, FiniteSet cod)
    : dom_(std::move(dom)), cod_(std::move(cod)), bits_(dom_.size() * cod_.size(), false) {}

Rel::Rel(FiniteSet dom, FiniteSet cod, std::vector<bool> bits)
    : dom_(std::move(dom)), cod_(std::move(cod)), bits_(std::move(bits)) {}

Rel Rel::from_pairs(FiniteSet dom, FiniteSet cod,
                    std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  std::vector<bool> bits(dom.size() * cod.size(), false);
  for (auto [w, v] : pairs) {
    if (w >= dom.size() || v >= cod.size()) {
      fail(ErrorKind::InvariantViolation, "pair index out of range for " + dom.name() +
                                              "->" + cod.name());
    }
    bits[w * cod.size() + v] = true;
  }
  return Rel(std::move(dom), std::move(cod), std::move(bits));
}

Rel Rel::from_labels(FiniteSet dom, FiniteSet cod,
                     std::span<const std::pair<std::string, std::string>> pairs) {
  std::vector<bool> bits(dom.size() * cod.size(), false);
  for (const auto& [a, b] : pairs) {
    bits[dom.index_of(a) * cod.size() + cod.index_of(b)] = true;
  }
  return Rel(std::move(dom), std::move(cod), std::move(bits));
}

Rel Rel::from_predicate(FiniteSet dom, FiniteSet cod,
                        const std::function<bool(std::size_t, std::size_t)>& pred) {
  std::vector<bool> bits(dom.size() * cod.size(), false);
  for (std::size_t w = 0; w < dom.size(); ++w)
    for (std::size_t v = 0; v < cod.size(); ++v) bits[w * cod.size() + v] = pred(w, v);
  return Rel(std::move(dom), std::move(cod), std::move(bits));
}

Rel Rel::from_function(FiniteSet dom, FiniteSet cod, std::span<const std::size_t> table) {
  if (table.size() != dom.size()) {
    fail(ErrorKind::NotAFunction, "function table for " + dom.name() + " has " +
                                      std::to_string(table.size()) + " entries");
  }
  std::vector<bool> bits(dom.size() * cod.size(), false);
  for (std::size_t w = 0; w < table.size(); ++w) {
    if (table[w] >= cod.size()) {
      fail(ErrorKind::NotAFunction, "function image out of range in " + cod.name());
    }
    bits[w * cod.size() + table[w]] = true;
  }
  return Rel(std::move(dom), std::move(cod), std::move(bits));
}

Rel Rel::from_code(FiniteSet dom, FiniteSet cod, std::uint64_t code) {
  const std::size_t n = dom.size() * cod.size();
  if (n > 64) fail(ErrorKind::CapExceeded, "relation code needs more than 64 bits");
  std::vector<bool> bits(n, false);
  for (std::size_t k = 0; k < n; ++k) bits[k] = (code >> k) & 1U;
  return Rel(std::move(dom), std::move(cod), std::move(bits));
}

bool Rel::contains(std::string_view w, std::string_view v) const {
  return contains(dom_.index_of(w), cod_.index_of(v));
}

std::vector<std::pair<std::size_t, std::size_t>> Rel::pairs() const {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t w = 0; w < dom_.size(); ++w)
    for (std::size_t v = 0; v < cod_.size(); ++v)
      if (contains(w, v)) out.emplace_back(w, v);
  return out;
}

std::vector<std::pair<std::string, std::string>> Rel::labeled_pairs() const {
  std::vector<std::pair<std::string, std::string>> out;
  for (auto [w, v] : pairs()) out.emplace_back(dom_.element(w), cod_.element(v));
  return out;
}

std::vector<std::size_t> Rel::successors(std::size_t w) const {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < cod_.size(); ++v)
    if (contains(w, v)) out.push_back(v);
  return out;
}

std::vector<std::size_t> Rel::predecessors(std::size_t v) const {
  std::vector<std::size_t> out;
  for (std::size_t w = 0; w < dom_.size(); ++w)
    if (contains(w, v)) out.push_back(w);
  return out;
}

std::size_t Rel::pair_count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

Rel Rel::retyped(FiniteSet dom, FiniteSet cod) const {
  if (dom.size() != dom_.size() || cod.size() != cod_.size()) {
    fail(ErrorKind::CarrierMismatch, "retyped: carrier sizes differ");
  }
  return Rel(std::move(dom), std::move(cod), bits_);
}

bool operator==(const Rel& a, const Rel& b) {
  return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.bits_ == b.bits_;
}

// --- operations --------------------------------------------------------------

Rel compose(const Rel& r1, const Rel& r2) {
  if (!(r1.cod() == r2.dom())) {
    fail(ErrorKind::CarrierMismatch, "compose: middle carriers " + r1.cod().name() +
                                         " and " + r2.dom().name() + " differ");
  }
  const std::size_t nx = r1.dom().size(), ny = r1.cod().size(), nz = r2.cod().size();
  std::vector<bool> bits(nx * nz, false);
  for (std::size_t w = 0; w < nx; ++w)
    for (std::size_t v = 0; v < ny; ++v) {
      if (!r1.contains(w, v)) continue;
      for (std::size_t u = 0; u < nz; ++u)
        if (r2.contains(v, u)) bits[w * nz + u] = true;
    }
  return Rel(r1.dom(), r2.cod(), std::move(bits));
}

Rel identity(const FiniteSet& x) {
  return Rel::from_predicate(x, x, [](std::size_t a, std::size_t b) { return a == b; });
}

Rel dagger(const Rel& r) {
  const std::size_t nx = r.dom().size(), ny = r.cod().size();
  std::vector<bool> bits(nx * ny, false);
  for (std::size_t w = 0; w < nx; ++w)
    for (std::size_t v = 0; v < ny; ++v)
      if (r.contains(w, v)) bits[v * nx + w] = true;
  return Rel(r.cod(), r.dom(), std::move(bits));
}

Rel total_relation(const FiniteSet& dom, const FiniteSet& cod) {
  return Rel::from_predicate(dom, cod, [](std::size_t, std::size_t) { return true; });
}

Rel meet(const Rel& r1, const Rel& r2) {
  require_same_type(r1, r2, "meet");
  std::vector<bool> bits(r1.bits_.size());
  for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = r1.bits_[k] && r2.bits_[k];
  return Rel(r1.dom(), r1.cod(), std::move(bits));
}

Rel join(const Rel& r1, const Rel& r2) {
  require_same_type(r1, r2, "join");
  std::vector<bool> bits(r1.bits_.size());
  for (std::size_t k = 0; k < bits.size(); ++k) bits[k] = r1.bits_[k] || r2.bits_[k];
  return Rel(r1.dom(), r1.cod(), std::move(bits));
}

bool leq(const Rel& r1, const Rel& r2) {
  require_same_type(r1, r2, "leq");
  for (std::size_t w = 0; w < r1.dom().size(); ++w)
    for (std::size_t v = 0; v < r1.cod().size(); ++v)
      if (r1.contains(w, v) && !r2.contains(w, v)) return false;
  return true;
}

bool check_modularity(const Rel& r1, const Rel& r2, const Rel& r3) {
  // r1 : X->Y, r2 : Y->Z, r3 : X->Z
  const Rel lhs = meet(compose(r1, r2), r3);
  const Rel rhs = compose(meet(r1, compose(r3, dagger(r2))), r2);
  return leq(lhs, rhs);
}

bool is_function(const Rel& r) {
  const Rel back = compose(r, dagger(r));   // r^dagger o r : X->X
  const Rel forth = compose(dagger(r), r);  // r o r^dagger : Y->Y
  return leq(identity(r.dom()), back) && leq(forth, identity(r.cod()));
}

bool is_injective(const Rel& r) { return compose(r, dagger(r)) == identity(r.dom()); }

bool is_surjective(const Rel& r) { return compose(dagger(r), r) == identity(r.cod()); }

std::vector<std::size_t> function_table(const Rel& f) {
  std::vector<std::size_t> table(f.dom().size());
  for (std::size_t w = 0; w < f.dom().size(); ++w) {
    std::size_t hits = 0;
    for (std::size_t v = 0; v < f.cod().size(); ++v)
      if (f.contains(w, v)) {
        table[w] = v;
        ++hits;
      }
    if (hits != 1) {
      fail(ErrorKind::NotAFunction, "relation " + f.dom().name() + "->" + f.cod().name() +
                                        " relates '" + f.dom().element(w) + "' to " +
                                        std::to_string(hits) + " elements");
    }
  }
  return table;
}

bool is_jointly_monic(const Rel& f, const Rel& g) {
  if (!(f.dom() == g.dom())) {
    fail(ErrorKind::CarrierMismatch, "is_jointly_monic: domains " + f.dom().name() +
                                         " and " + g.dom().name() + " differ");
  }
  if (!is_function(f) || !is_function(g)) {
    fail(ErrorKind::NotAFunction, "is_jointly_monic needs two functions");
  }
  return meet(compose(f, dagger(f)), compose(g, dagger(g))) == identity(f.dom());
}

Tabulation tabulate(const Rel& r) {
  const auto pairs = r.pairs();
  std::vector<std::string> labels;
  std::vector<std::size_t> left, right;
  labels.reserve(pairs.size());
  for (auto [w, v] : pairs) {
    labels.push_back(pair_label(r.dom().element(w), r.cod().element(v)));
    left.push_back(w);
    right.push_back(v);
  }
  FiniteSet apex("tab(" + r.dom().name() + "," + r.cod().name() + ")", std::move(labels));
  Rel r1 = Rel::from_function(apex, r.dom(), left);
  Rel r2 = Rel::from_function(apex, r.cod(), right);
  return Tabulation{std::move(apex), std::move(r1), std::move(r2)};
}

bool is_reflexive(const Rel& r) {
  require_endo(r, "is_reflexive");
  return leq(identity(r.dom()), r);
}

bool is_transitive(const Rel& r) {
  require_endo(r, "is_transitive");
  return leq(compose(r, r), r);
}

bool is_symmetric(const Rel& r) {
  require_endo(r, "is_symmetric");
  return leq(dagger(r), r);
}

Rel closure_reflexive_transitive(const Rel& r) {
  require_endo(r, "closure_reflexive_transitive");
  Rel current = join(r, identity(r.dom()));
  while (true) {
    Rel next = join(current, compose(current, current));
    if (next == current) return current;
    current = std::move(next);
  }
}

CartesianProduct cartesian_product(const FiniteSet& x, const FiniteSet& y, std::string name) {
  std::vector<std::string> labels;
  std::vector<std::size_t> left, right;
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) {
      labels.push_back(pair_label(x.element(i), y.element(j)));
      left.push_back(i);
      right.push_back(j);
    }
  if (name.empty()) name = x.name() + "x" + y.name();
  FiniteSet carrier(std::move(name), std::move(labels));
  Rel p1 = Rel::from_function(carrier, x, left);
  Rel p2 = Rel::from_function(carrier, y, right);
  return CartesianProduct{std::move(carrier), std::move(p1), std::move(p2)};
}

Inclusion inclusion_of(const FiniteSet& x, std::span<const std::size_t> members,
                       std::string name) {
  std::vector<std::size_t> sorted(members.begin(), members.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<std::string> labels;
  for (std::size_t i : sorted) labels.push_back(x.element(i));
  FiniteSet sub(std::move(name), std::move(labels));
  Rel incl = Rel::from_function(sub, x, sorted);
  return Inclusion{std::move(sub), std::move(incl)};
}

void for_each_relation(const FiniteSet& dom, const FiniteSet& cod,
                       const std::function<void(const Rel&)>& fn) {
  const std::size_t bits = dom.size() * cod.size();
  if (bits > kExhaustiveRelationBits) {
    fail(ErrorKind::CapExceeded, "exhaustive sweep over " + dom.name() + "->" + cod.name() +
                                     " needs 2^" + std::to_string(bits) + " relations");
  }
  const std::uint64_t count = std::uint64_t{1} << bits;
  for (std::uint64_t code = 0; code < count; ++code) fn(Rel::from_code(dom, cod, code));
}

}  // namespace catdel
