#include "catdel/powerset.hpp"

#include <algorithm>

#include "catdel/error.hpp"

namespace catdel {

namespace {

// Pairwise subset sweeps enumerate 2^(|X|+|Y|) combinations.
constexpr std::size_t kPairSweepBits = 16;

std::string format_subset(const Subset& s) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < s.carrier().size(); ++i) {
    if (!s.contains(i)) continue;
    if (!first) out += ',';
    out += s.carrier().element(i);
    first = false;
  }
  return out + "}";
}

std::string format_rel(const Rel& r) {
  std::string out = "{";
  bool first = true;
  for (const auto& [a, b] : r.labeled_pairs()) {
    if (!first) out += ',';
    out += pair_label(a, b);
    first = false;
  }
  return out + "}";
}

void require_carrier(const Subset& s, const FiniteSet& carrier, std::string_view op) {
  if (!(s.carrier() == carrier)) {
    fail(ErrorKind::CarrierMismatch, std::string(op) + ": subset of " + s.carrier().name() +
                                         " used where " + carrier.name() + " is expected");
  }
}

void require_cap(const FiniteSet& x, std::size_t cap, std::string_view op) {
  if (x.size() > cap) {
    fail(ErrorKind::CapExceeded, std::string(op) + ": carrier " + x.name() + " has " +
                                     std::to_string(x.size()) + " elements (cap " +
                                     std::to_string(cap) + ")");
  }
}

std::vector<Subset> all_subsets(const FiniteSet& x) {
  std::vector<Subset> out;
  for_each_subset(x, [&](const Subset& s) { out.push_back(s); });
  return out;
}

}  // namespace

// --- Subset ------------------------------------------------------------------

Subset::Subset(FiniteSet carrier)
    : carrier_(std::move(carrier)), members_(carrier_.size(), false) {}

Subset::Subset(FiniteSet carrier, std::vector<bool> members)
    : carrier_(std::move(carrier)), members_(std::move(members)) {
  if (members_.size() != carrier_.size()) {
    fail(ErrorKind::InvariantViolation, "subset membership vector does not match " +
                                            carrier_.name());
  }
}

Subset Subset::full(const FiniteSet& carrier) {
  return Subset(carrier, std::vector<bool>(carrier.size(), true));
}

Subset Subset::of_indices(const FiniteSet& carrier, std::span<const std::size_t> members) {
  std::vector<bool> bits(carrier.size(), false);
  for (std::size_t i : members) {
    if (i >= carrier.size()) {
      fail(ErrorKind::InvariantViolation, "subset index out of range in " + carrier.name());
    }
    bits[i] = true;
  }
  return Subset(carrier, std::move(bits));
}

Subset Subset::of_labels(const FiniteSet& carrier, std::span<const std::string> labels) {
  std::vector<bool> bits(carrier.size(), false);
  for (const auto& l : labels) bits[carrier.index_of(l)] = true;
  return Subset(carrier, std::move(bits));
}

Subset Subset::from_code(const FiniteSet& carrier, std::uint64_t code) {
  std::vector<bool> bits(carrier.size(), false);
  for (std::size_t i = 0; i < carrier.size() && i < 64; ++i) bits[i] = (code >> i) & 1U;
  return Subset(carrier, std::move(bits));
}

bool Subset::contains(std::string_view label) const {
  return members_[carrier_.index_of(label)];
}

std::size_t Subset::count() const {
  return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), true));
}

std::vector<std::size_t> Subset::indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < members_.size(); ++i)
    if (members_[i]) out.push_back(i);
  return out;
}

std::vector<std::string> Subset::labels() const {
  std::vector<std::string> out;
  for (std::size_t i : indices()) out.push_back(carrier_.element(i));
  return out;
}

Subset Subset::with(std::size_t i, bool member) const {
  Subset copy = *this;
  copy.members_[i] = member;
  return copy;
}

bool operator==(const Subset& a, const Subset& b) {
  return a.carrier_ == b.carrier_ && a.members_ == b.members_;
}

Subset set_union(const Subset& a, const Subset& b) {
  require_carrier(b, a.carrier(), "union");
  std::vector<bool> bits(a.bits().size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = a.contains(i) || b.contains(i);
  return Subset(a.carrier(), std::move(bits));
}

Subset set_intersection(const Subset& a, const Subset& b) {
  require_carrier(b, a.carrier(), "intersection");
  std::vector<bool> bits(a.bits().size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = a.contains(i) && b.contains(i);
  return Subset(a.carrier(), std::move(bits));
}

Subset set_complement(const Subset& a) {
  std::vector<bool> bits(a.bits().size());
  for (std::size_t i = 0; i < bits.size(); ++i) bits[i] = !a.contains(i);
  return Subset(a.carrier(), std::move(bits));
}

Subset set_implication(const Subset& a, const Subset& b) {
  return set_union(set_complement(a), b);
}

bool is_subset(const Subset& a, const Subset& b) {
  require_carrier(b, a.carrier(), "is_subset");
  for (std::size_t i = 0; i < a.bits().size(); ++i)
    if (a.contains(i) && !b.contains(i)) return false;
  return true;
}

void for_each_subset(const FiniteSet& carrier, const std::function<void(const Subset&)>& fn) {
  require_cap(carrier, kExhaustiveSubsetCap, "for_each_subset");
  const std::uint64_t count = std::uint64_t{1} << carrier.size();
  for (std::uint64_t code = 0; code < count; ++code) fn(Subset::from_code(carrier, code));
}

// --- PowersetMap -------------------------------------------------------------

PowersetMap::PowersetMap(FiniteSet dom, FiniteSet cod, ExtensionKind kind,
                         std::vector<Subset> table)
    : dom_(std::move(dom)), cod_(std::move(cod)), kind_(kind), table_(std::move(table)) {
  if (table_.size() != dom_.size()) {
    fail(ErrorKind::InvariantViolation, "atom table size differs from |" + dom_.name() + "|");
  }
  for (const auto& s : table_) require_carrier(s, cod_, "PowersetMap");
}

PowersetMap PowersetMap::from_function(const FiniteSet& dom, const FiniteSet& cod,
                                       ExtensionKind kind,
                                       const std::function<Subset(const Subset&)>& fn) {
  std::vector<Subset> table;
  table.reserve(dom.size());
  for (std::size_t w = 0; w < dom.size(); ++w) {
    Subset probe = kind == ExtensionKind::Join ? Subset(dom).with(w, true)
                                               : Subset::full(dom).with(w, false);
    Subset image = fn(probe);
    require_carrier(image, cod, "PowersetMap::from_function");
    table.push_back(std::move(image));
  }
  return PowersetMap(dom, cod, kind, std::move(table));
}

Subset PowersetMap::apply(const Subset& s) const {
  require_carrier(s, dom_, "apply");
  if (kind_ == ExtensionKind::Join) {
    Subset out(cod_);
    for (std::size_t w = 0; w < dom_.size(); ++w)
      if (s.contains(w)) out = set_union(out, table_[w]);
    return out;
  }
  Subset out = Subset::full(cod_);
  for (std::size_t w = 0; w < dom_.size(); ++w)
    if (!s.contains(w)) out = set_intersection(out, table_[w]);
  return out;
}

bool operator==(const PowersetMap& a, const PowersetMap& b) {
  return a.dom_ == b.dom_ && a.cod_ == b.cod_ && a.kind_ == b.kind_ && a.table_ == b.table_;
}

PowersetMap exists_map(const Rel& r) {
  std::vector<Subset> table;
  for (std::size_t w = 0; w < r.dom().size(); ++w)
    table.push_back(Subset::of_indices(r.cod(), r.successors(w)));
  return PowersetMap(r.dom(), r.cod(), ExtensionKind::Join, std::move(table));
}

PowersetMap forall_map(const Rel& r) {
  std::vector<Subset> table;
  for (std::size_t w = 0; w < r.dom().size(); ++w)
    table.push_back(set_complement(Subset::of_indices(r.cod(), r.successors(w))));
  return PowersetMap(r.dom(), r.cod(), ExtensionKind::Meet, std::move(table));
}

PowersetMap preimage_map(const Rel& f) {
  if (!is_function(f)) {
    fail(ErrorKind::NotAFunction, "preimage_map: " + f.dom().name() + "->" + f.cod().name() +
                                      " is not a function");
  }
  const Rel back = dagger(f);
  PowersetMap via_exists = exists_map(back);
  if (!(convert(forall_map(back), ExtensionKind::Join) == via_exists)) {
    fail(ErrorKind::InvariantViolation, "preimage_map: exists and forall images disagree");
  }
  return via_exists;
}

PowersetMap convert(const PowersetMap& h, ExtensionKind kind) {
  if (h.kind() == kind) return h;
  return PowersetMap::from_function(h.dom(), h.cod(), kind,
                                    [&](const Subset& s) { return h.apply(s); });
}

PowersetMap compose(const PowersetMap& h1, const PowersetMap& h2) {
  if (!(h1.cod() == h2.dom())) {
    fail(ErrorKind::CarrierMismatch, "compose: " + h1.cod().name() + " vs " + h2.dom().name());
  }
  if (h1.kind() != h2.kind()) {
    fail(ErrorKind::InvariantViolation, "compose: join- and meet-extensions do not compose");
  }
  std::vector<Subset> table;
  table.reserve(h1.dom().size());
  for (const auto& s : h1.table()) table.push_back(h2.apply(s));
  return PowersetMap(h1.dom(), h2.cod(), h1.kind(), std::move(table));
}

PowersetMap identity_map(const FiniteSet& x, ExtensionKind kind) {
  return kind == ExtensionKind::Join ? exists_map(identity(x)) : forall_map(identity(x));
}

bool leq(const PowersetMap& h1, const PowersetMap& h2) {
  if (!(h1.dom() == h2.dom()) || !(h1.cod() == h2.cod())) {
    fail(ErrorKind::CarrierMismatch, "leq: maps of different types");
  }
  if (h1.kind() != h2.kind()) return leq_exhaustive(h1, h2);
  // For joins h(S) is a union of atoms; for meets h(dom \ {w}) ranges over the
  // co-atoms and h(S) is their intersection. Either way atoms decide the order.
  for (std::size_t w = 0; w < h1.dom().size(); ++w)
    if (!is_subset(h1.table()[w], h2.table()[w])) return false;
  return true;
}

bool leq_exhaustive(const PowersetMap& h1, const PowersetMap& h2) {
  bool ok = true;
  for_each_subset(h1.dom(), [&](const Subset& s) {
    if (ok && !is_subset(h1.apply(s), h2.apply(s))) ok = false;
  });
  return ok;
}

bool equal_exhaustive(const PowersetMap& h1, const PowersetMap& h2) {
  return !find_difference(h1, h2).has_value();
}

std::optional<Subset> find_difference(const PowersetMap& h1, const PowersetMap& h2) {
  if (!(h1.dom() == h2.dom()) || !(h1.cod() == h2.cod())) {
    fail(ErrorKind::CarrierMismatch, "find_difference: maps of different types");
  }
  std::optional<Subset> found;
  for_each_subset(h1.dom(), [&](const Subset& s) {
    if (!found && !(h1.apply(s) == h2.apply(s))) found = s;
  });
  return found;
}

Rel relation_from_join_map(const PowersetMap& h) {
  if (h.kind() != ExtensionKind::Join) {
    fail(ErrorKind::InvariantViolation, "relation_from_join_map needs a join-extension");
  }
  return Rel::from_predicate(h.dom(), h.cod(), [&](std::size_t w, std::size_t v) {
    return h.table()[w].contains(v);
  });
}

Rel relation_from_meet_map(const PowersetMap& h) {
  if (h.kind() != ExtensionKind::Meet) {
    fail(ErrorKind::InvariantViolation, "relation_from_meet_map needs a meet-extension");
  }
  return Rel::from_predicate(h.dom(), h.cod(), [&](std::size_t w, std::size_t v) {
    return !h.table()[w].contains(v);
  });
}

bool is_adjoint_pair(const PowersetMap& left, const PowersetMap& right) {
  if (!(left.dom() == right.cod()) || !(left.cod() == right.dom())) {
    fail(ErrorKind::CarrierMismatch, "is_adjoint_pair: maps are not opposite");
  }
  if (left.dom().size() + left.cod().size() > kPairSweepBits) {
    fail(ErrorKind::CapExceeded, "is_adjoint_pair: carriers too large for pairwise sweep");
  }
  const auto lefts = all_subsets(left.dom());
  const auto rights = all_subsets(left.cod());
  std::vector<Subset> left_images, right_images;
  for (const auto& s : lefts) left_images.push_back(left.apply(s));
  for (const auto& s : rights) right_images.push_back(right.apply(s));
  for (std::size_t i = 0; i < lefts.size(); ++i)
    for (std::size_t j = 0; j < rights.size(); ++j)
      if (is_subset(left_images[i], rights[j]) != is_subset(lefts[i], right_images[j]))
        return false;
  return true;
}

bool check_adjunction(const Rel& r) { return is_adjoint_pair(exists_map(r), forall_map(dagger(r))); }

// --- biduality ---------------------------------------------------------------

bool LawReport::all_hold() const {
  return std::all_of(laws.begin(), laws.end(), [](const LawResult& l) { return l.holds; });
}

const LawResult* LawReport::find(std::string_view name) const {
  for (const auto& l : laws)
    if (l.name == name) return &l;
  return nullptr;
}

namespace {

// `lower <= upper` as a map order, decided both ways; a disagreement between
// the atom-table decision and the exhaustive one is itself a failure.
struct OrderCheck {
  bool leq = false;
  bool consistent = true;
};

OrderCheck map_order(const PowersetMap& lower, const PowersetMap& upper) {
  OrderCheck c;
  c.leq = leq(lower, upper);
  c.consistent = c.leq == leq_exhaustive(lower, upper);
  return c;
}

// Law "R1 <= R2 iff lower <= upper". When R1 is strictly below R2 the maps
// must also be separated by some subset, which becomes the witness.
LawResult order_law(std::string name, bool included, bool strict, const PowersetMap& lower,
                    const PowersetMap& upper) {
  LawResult law{std::move(name), true, true, {}};
  const OrderCheck c = map_order(lower, upper);
  if (!c.consistent) {
    law.holds = false;
    law.witness = "atom-table and exhaustive order disagree";
    return law;
  }
  if (c.leq != included) {
    law.holds = false;
    law.witness = included ? "relations included but maps not ordered"
                           : "maps ordered but relations not included";
    return law;
  }
  if (strict) {
    if (auto s = find_difference(lower, upper)) {
      law.witness = "strict at S=" + format_subset(*s) + ": " +
                    format_subset(lower.apply(*s)) + " < " + format_subset(upper.apply(*s));
    } else {
      law.holds = false;
      law.witness = "strict inclusion of relations but equal maps";
    }
  }
  return law;
}

LawResult functor_law(std::string name, const PowersetMap& whole, const PowersetMap& parts) {
  LawResult law{std::move(name), true, true, {}};
  const bool tables = whole == parts;
  const auto diff = find_difference(whole, parts);
  if (tables != !diff.has_value()) {
    law.holds = false;
    law.witness = "atom-table and exhaustive equality disagree";
  } else if (!tables) {
    law.holds = false;
    law.witness = "differs at S=" + format_subset(*diff);
  }
  return law;
}

}  // namespace

LawReport check_biduality_laws(const Rel& r1, const Rel& r2) {
  LawReport report;
  const bool comparable = r1.dom() == r2.dom() && r1.cod() == r2.cod();
  const bool composable = r1.cod() == r2.dom();
  if (!comparable && !composable) {
    fail(ErrorKind::CarrierMismatch, "check_biduality_laws: relations neither compose nor compare");
  }
  for (const FiniteSet* x : {&r1.dom(), &r1.cod(), &r2.cod()})
    require_cap(*x, kExhaustiveSubsetCap, "check_biduality_laws");

  if (comparable) {
    const bool inc = leq(r1, r2);
    const bool strict = inc && !(r1 == r2);
    const std::string pair_text = format_rel(r1) + " vs " + format_rel(r2);
    report.laws.push_back(order_law("exists-order", inc, strict, exists_map(r1), exists_map(r2)));
    report.laws.push_back(order_law("forall-order", inc, strict, forall_map(r2), forall_map(r1)));
    const Rel d1 = dagger(r1), d2 = dagger(r2);
    report.laws.push_back(order_law("exists-dagger-order", inc, strict, exists_map(d1), exists_map(d2)));
    report.laws.push_back(order_law("forall-dagger-order", inc, strict, forall_map(d2), forall_map(d1)));
    for (auto& law : report.laws)
      if (!law.holds) law.witness += " [" + pair_text + "]";
  } else {
    for (const char* name : {"exists-order", "forall-order", "exists-dagger-order", "forall-dagger-order"})
      report.laws.push_back(LawResult{name, false, true, {}});
  }

  if (composable) {
    const Rel whole = dagger(compose(r1, r2));
    const Rel d1 = dagger(r1), d2 = dagger(r2);
    report.laws.push_back(functor_law("exists-dagger-functor", exists_map(whole),
                                      compose(exists_map(d2), exists_map(d1))));
    report.laws.push_back(functor_law("forall-dagger-functor", forall_map(whole),
                                      compose(forall_map(d2), forall_map(d1))));
  } else {
    report.laws.push_back(LawResult{"exists-dagger-functor", false, true, {}});
    report.laws.push_back(LawResult{"forall-dagger-functor", false, true, {}});
  }
  return report;
}

// --- Beck-Chevalley ----------------------------------------------------------

Square set_pullback(const Rel& f, const Rel& g) {
  if (!(f.cod() == g.cod())) {
    fail(ErrorKind::CodomainMismatch, "set_pullback: " + f.cod().name() + " vs " + g.cod().name());
  }
  const auto ft = function_table(f);
  const auto gt = function_table(g);
  std::vector<std::string> labels;
  std::vector<std::size_t> left, right;
  for (std::size_t y = 0; y < ft.size(); ++y)
    for (std::size_t z = 0; z < gt.size(); ++z)
      if (ft[y] == gt[z]) {
        labels.push_back(pair_label(f.dom().element(y), g.dom().element(z)));
        left.push_back(y);
        right.push_back(z);
      }
  FiniteSet apex(f.dom().name() + "x[" + f.cod().name() + "]" + g.dom().name(), std::move(labels));
  Rel p = Rel::from_function(apex, f.dom(), left);
  Rel q = Rel::from_function(apex, g.dom(), right);
  return Square{std::move(p), std::move(q), f, g};
}

bool square_commutes(const Square& s) {
  return compose(s.p, s.f) == compose(s.q, s.g);
}

bool is_pullback(const Square& s) {
  if (!square_commutes(s)) return false;
  const auto pt = function_table(s.p);
  const auto qt = function_table(s.q);
  const auto ft = function_table(s.f);
  const auto gt = function_table(s.g);
  std::vector<int> hits(ft.size() * gt.size(), 0);
  for (std::size_t u = 0; u < pt.size(); ++u) ++hits[pt[u] * gt.size() + qt[u]];
  for (std::size_t y = 0; y < ft.size(); ++y)
    for (std::size_t z = 0; z < gt.size(); ++z) {
      const int expected = ft[y] == gt[z] ? 1 : 0;
      if (hits[y * gt.size() + z] != expected) return false;
    }
  return true;
}

bool beck_chevalley_holds(const Square& s) {
  return compose(dagger(s.q), s.p) == compose(s.g, dagger(s.f));
}

bool check_beck_chevalley(const Square& s) {
  for (const Rel* r : {&s.p, &s.q, &s.f, &s.g})
    if (!is_function(*r)) {
      fail(ErrorKind::NotAFunction, "check_beck_chevalley: " + r->dom().name() + "->" +
                                        r->cod().name() + " is not a function");
    }
  if (!square_commutes(s)) fail(ErrorKind::NotAPullback, "square does not commute");
  if (!is_pullback(s)) {
    fail(ErrorKind::NotAPullback, "apex " + s.p.dom().name() +
                                      " is not the fibered product of " + s.f.dom().name() +
                                      " and " + s.g.dom().name());
  }
  return beck_chevalley_holds(s);
}

}  // namespace catdel
