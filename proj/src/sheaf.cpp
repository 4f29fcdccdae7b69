#include "catdel/sheaf.hpp"

#include <mutex>

#include "catdel/error.hpp"

namespace catdel {

void Signature::validate() const {
  for (const auto& [name, arity] : functions) {
    if (relations.count(name)) {
      fail(ErrorKind::InvariantViolation,
           "signature: '" + name + "' is both a function and a relation symbol");
    }
  }
}

SheafDiagnostics is_kripke_sheaf(const FrameMap& proj) {
  SheafDiagnostics d;
  const Rel& pi = proj.fn();
  const KripkeFrame& total = proj.src();
  const FiniteSet& D = total.carrier();

  d.surjective = is_surjective(pi);
  d.bounded = is_bounded(proj);
  d.sheaf_condition = true;
  const Rel same_fiber = compose(pi, dagger(pi));
  for (std::size_t a = 0; a < total.agents().size() && d.sheaf_condition; ++a) {
    const Rel& r = total.rel(a);
    const Rel clash = meet(compose(dagger(r), r), same_fiber);
    if (leq(clash, identity(D))) continue;
    d.sheaf_condition = false;
    for (auto [b, b2] : clash.pairs()) {
      if (b == b2) continue;
      for (std::size_t src = 0; src < D.size(); ++src) {
        if (r.contains(src, b) && r.contains(src, b2)) {
          if (d.witness.empty()) {
            d.witness = "agent " + total.agents()[a] + ": " + D.element(src) + " sees " +
                        D.element(b) + " and " + D.element(b2) + " in one fiber";
          }
          break;
        }
      }
      break;
    }
  }

  const FiberedPower square = fibered_power(proj, 2);
  d.diagonal_characterization = d.bounded && is_bounded(diagonal(proj, square));

  if (!d.surjective) {
    d.failed = "surjective";
    for (std::size_t w = 0; w < pi.cod().size(); ++w) {
      if (pi.predecessors(w).empty()) {
        d.witness = "empty fiber over " + pi.cod().element(w);
        break;
      }
    }
  } else if (!d.bounded) {
    d.failed = "bounded";
    d.witness.clear();
    for (std::size_t a = 0; a < total.agents().size() && d.witness.empty(); ++a) {
      const Rel lhs = compose(total.rel(a), pi);
      const Rel rhs = compose(pi, proj.dst().rel(a));
      for (auto [x, w] : rhs.pairs()) {
        if (!lhs.contains(x, w)) {
          d.witness = "agent " + total.agents()[a] + ": " + D.element(x) + " lies over a world seeing " +
                      pi.cod().element(w) + " but sees nothing over it";
          break;
        }
      }
      if (d.witness.empty()) {
        for (auto [x, w] : lhs.pairs()) {
          if (!rhs.contains(x, w)) {
            d.witness = "agent " + total.agents()[a] + ": " + D.element(x) + " sees over " +
                        pi.cod().element(w) + " but its world does not";
            break;
          }
        }
      }
    }
  } else if (!d.sheaf_condition) {
    d.failed = "sheaf condition";
  }
  return d;
}

std::size_t FiberedPower::locate(const std::vector<std::size_t>& tuple, std::size_t world) const {
  if (n == 0) return world;
  return index.at(tuple);
}

FiberedPower fibered_power(const FrameMap& proj, std::size_t n) {
  const KripkeFrame& total = proj.src();
  const KripkeFrame& base = proj.dst();
  const FiniteSet& D = total.carrier();
  const auto& pi = proj.table();

  if (n == 0) {
    FiberedPower p{0, base, FrameMap::identity(base), {}, {}, {}, {}};
    for (std::size_t w = 0; w < base.carrier().size(); ++w) {
      p.tuples.emplace_back();
      p.worlds.push_back(w);
    }
    return p;
  }
  if (n == 1) {
    FiberedPower p{1, total, proj, {FrameMap::identity(total)}, {}, pi, {}};
    for (std::size_t a = 0; a < D.size(); ++a) {
      p.tuples.push_back({a});
      p.index[{a}] = a;
    }
    return p;
  }

  std::vector<std::vector<std::size_t>> fiber(base.carrier().size());
  for (std::size_t a = 0; a < D.size(); ++a) fiber[pi[a]].push_back(a);

  std::vector<std::vector<std::size_t>> tuples;
  std::vector<std::size_t> current;
  auto extend = [&](auto&& self, std::size_t w) -> void {
    if (current.size() == n) {
      tuples.push_back(current);
      return;
    }
    for (std::size_t a : fiber[w]) {
      current.push_back(a);
      self(self, w);
      current.pop_back();
    }
  };
  for (std::size_t a = 0; a < D.size(); ++a) {
    current = {a};
    extend(extend, pi[a]);
  }

  std::vector<std::string> labels;
  std::vector<std::size_t> worlds;
  std::map<std::vector<std::size_t>, std::size_t> index;
  for (std::size_t i = 0; i < tuples.size(); ++i) {
    std::vector<std::string> parts;
    for (std::size_t a : tuples[i]) parts.push_back(D.element(a));
    labels.push_back(tuple_label(parts));
    worlds.push_back(pi[tuples[i][0]]);
    index[tuples[i]] = i;
  }
  FiniteSet carrier(D.name() + "^" + std::to_string(n), std::move(labels));

  LiftFamily family{carrier, total.agents(), {}, {}};
  for (std::size_t c = 0; c < n; ++c) {
    std::vector<std::size_t> table;
    for (const auto& t : tuples) table.push_back(t[c]);
    family.fns.push_back(Rel::from_function(carrier, D, table));
    family.targets.push_back(total);
  }
  Rel pin = Rel::from_function(carrier, base.carrier(), worlds);
  family.fns.push_back(pin);
  family.targets.push_back(base);
  KripkeFrame frame = initial_lift(family);

  std::vector<FrameMap> components;
  for (std::size_t c = 0; c < n; ++c) components.emplace_back(frame, total, family.fns[c]);
  FrameMap proj_n(frame, base, pin);
  return FiberedPower{n, std::move(frame), std::move(proj_n), std::move(components),
                      std::move(tuples), std::move(worlds), std::move(index)};
}

FrameMap diagonal(const FrameMap& proj, const FiberedPower& square) {
  std::vector<std::size_t> table;
  for (std::size_t a = 0; a < proj.src().carrier().size(); ++a)
    table.push_back(square.index.at({a, a}));
  return FrameMap(proj.src(), square.frame,
                  Rel::from_function(proj.src().carrier(), square.frame.carrier(), table));
}

struct SheafModel::PowerCache {
  std::mutex mutex;
  std::map<std::size_t, std::unique_ptr<FiberedPower>> powers;
};

SheafModel::SheafModel(KripkeSheaf sheaf, Signature sig,
                       std::map<std::string, FunctionInterp> functions,
                       std::map<std::string, Subset> relations)
    : sheaf_(std::move(sheaf)),
      sig_(std::move(sig)),
      functions_(std::move(functions)),
      relations_(std::move(relations)),
      powers_(std::make_shared<PowerCache>()) {
  const SheafDiagnostics diag = is_kripke_sheaf(sheaf_.proj());
  if (!diag.ok()) {
    fail(ErrorKind::InvariantViolation,
         diag.failed + ": " + (diag.witness.empty() ? std::string("no witness") : diag.witness));
  }
  sig_.validate();

  const FiniteSet& D = sheaf_.total().carrier();
  const auto& pi = sheaf_.proj().table();
  for (const auto& [name, interp] : functions_) {
    auto it = sig_.functions.find(name);
    if (it == sig_.functions.end()) fail(ErrorKind::UnknownSymbol, "function '" + name + "' is not in the signature");
    if (it->second != interp.arity) {
      fail(ErrorKind::ArityMismatch, "function '" + name + "' has arity " +
                                         std::to_string(it->second) + " in the signature");
    }
    const FiberedPower& p = power(interp.arity);
    if (interp.table.size() != p.tuples.size()) {
      fail(ErrorKind::InvariantViolation, "function '" + name + "' has " +
                                              std::to_string(interp.table.size()) +
                                              " entries for " + std::to_string(p.tuples.size()) +
                                              " argument tuples");
    }
    for (std::size_t i = 0; i < interp.table.size(); ++i) {
      if (interp.table[i] >= D.size()) {
        fail(ErrorKind::InvariantViolation, "function '" + name + "' leaves D");
      }
      if (pi[interp.table[i]] != p.worlds[i]) {
        fail(ErrorKind::InvariantViolation,
             "function '" + name + "' is not fiber-preserving: " +
                 p.frame.carrier().element(i) + " maps to " + D.element(interp.table[i]));
      }
    }
    FrameMap fm(p.frame, sheaf_.total(), Rel::from_function(p.frame.carrier(), D, interp.table));
    if (!is_monotone(fm)) {
      fail(ErrorKind::InvariantViolation, "function '" + name + "' is not monotone");
    }
  }
  for (const auto& [name, arity] : sig_.functions) {
    if (!functions_.count(name)) {
      fail(ErrorKind::InvariantViolation, "function '" + name + "' has no interpretation");
    }
  }
  for (const auto& [name, s] : relations_) {
    auto it = sig_.relations.find(name);
    if (it == sig_.relations.end()) fail(ErrorKind::UnknownSymbol, "relation '" + name + "' is not in the signature");
    if (!(s.carrier() == power(it->second).frame.carrier())) {
      fail(ErrorKind::InvariantViolation, "relation '" + name + "' is not a subset of " +
                                              power(it->second).frame.carrier().name());
    }
  }
  for (const auto& [name, arity] : sig_.relations) {
    if (!relations_.count(name)) {
      fail(ErrorKind::InvariantViolation, "relation '" + name + "' has no interpretation");
    }
  }
}

const FiberedPower& SheafModel::power(std::size_t n) const {
  std::lock_guard<std::mutex> lock(powers_->mutex);
  auto& slot = powers_->powers[n];
  if (!slot) slot = std::make_unique<FiberedPower>(fibered_power(sheaf_.proj(), n));
  return *slot;
}

const FunctionInterp& SheafModel::function(const std::string& name, std::size_t arity) const {
  auto it = functions_.find(name);
  if (it == functions_.end()) fail(ErrorKind::UnknownSymbol, "no function symbol '" + name + "'");
  if (it->second.arity != arity) {
    fail(ErrorKind::ArityMismatch, "function '" + name + "' takes " +
                                       std::to_string(it->second.arity) + " arguments, given " +
                                       std::to_string(arity));
  }
  return it->second;
}

const Subset& SheafModel::relation(const std::string& name, std::size_t arity) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) fail(ErrorKind::UnknownSymbol, "no relation symbol '" + name + "'");
  const std::size_t declared = sig_.relations.at(name);
  if (declared != arity) {
    fail(ErrorKind::ArityMismatch, "relation '" + name + "' takes " + std::to_string(declared) +
                                       " arguments, given " + std::to_string(arity));
  }
  return it->second;
}

}  // namespace catdel
