#include "catdel/kripke.hpp"

#include <algorithm>
#include <unordered_set>

#include "catdel/error.hpp"

namespace catdel {

namespace {

void require_same_agents(const AgentSet& a, const AgentSet& b, std::string_view op) {
  if (!(a == b)) fail(ErrorKind::AgentMismatch, std::string(op) + ": agent sets differ");
}

}  // namespace

AgentSet::AgentSet(std::vector<std::string> agents) : agents_(std::move(agents)) {
  std::unordered_set<std::string> seen;
  for (const auto& a : agents_) {
    if (!seen.insert(a).second) fail(ErrorKind::InvariantViolation, "duplicate agent '" + a + "'");
  }
}

std::optional<std::size_t> AgentSet::find(std::string_view agent) const {
  for (std::size_t i = 0; i < agents_.size(); ++i)
    if (agents_[i] == agent) return i;
  return std::nullopt;
}

std::size_t AgentSet::index_of(std::string_view agent) const {
  auto i = find(agent);
  if (!i) fail(ErrorKind::UnknownAgent, "no agent '" + std::string(agent) + "'");
  return *i;
}

KripkeFrame::KripkeFrame(FiniteSet carrier, AgentSet agents, std::vector<Rel> relations)
    : carrier_(std::move(carrier)), agents_(std::move(agents)), relations_(std::move(relations)) {
  if (relations_.size() != agents_.size()) {
    fail(ErrorKind::AgentMismatch, "frame " + carrier_.name() + " has " +
                                       std::to_string(relations_.size()) + " relations for " +
                                       std::to_string(agents_.size()) + " agents");
  }
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    if (!(relations_[i].dom() == carrier_) || !(relations_[i].cod() == carrier_)) {
      fail(ErrorKind::CarrierMismatch,
           "relation of agent '" + agents_[i] + "' is not on " + carrier_.name());
    }
  }
}

KripkeFrame KripkeFrame::uniform(FiniteSet carrier, AgentSet agents, const Rel& r) {
  std::vector<Rel> rels(agents.size(), r);
  return KripkeFrame(std::move(carrier), std::move(agents), std::move(rels));
}

FrameMap::FrameMap(KripkeFrame src, KripkeFrame dst, Rel fn)
    : src_(std::move(src)), dst_(std::move(dst)), fn_(std::move(fn)) {
  require_same_agents(src_.agents(), dst_.agents(), "FrameMap");
  if (!(fn_.dom() == src_.carrier()) || !(fn_.cod() == dst_.carrier())) {
    fail(ErrorKind::CarrierMismatch, "FrameMap: function " + fn_.dom().name() + "->" +
                                         fn_.cod().name() + " does not match " +
                                         src_.carrier().name() + "->" + dst_.carrier().name());
  }
  table_ = function_table(fn_);
}

FrameMap FrameMap::identity(const KripkeFrame& f) {
  return FrameMap(f, f, catdel::identity(f.carrier()));
}

FrameMap compose(const FrameMap& f, const FrameMap& g) {
  if (!(f.dst() == g.src())) fail(ErrorKind::CarrierMismatch, "compose: frames do not meet");
  return FrameMap(f.src(), g.dst(), compose(f.fn(), g.fn()));
}

bool is_monotone(const FrameMap& m) {
  for (std::size_t a = 0; a < m.src().agents().size(); ++a) {
    if (!leq(compose(m.src().rel(a), m.fn()), compose(m.fn(), m.dst().rel(a)))) return false;
  }
  return true;
}

bool is_bounded(const FrameMap& m) {
  for (std::size_t a = 0; a < m.src().agents().size(); ++a) {
    if (!(compose(m.src().rel(a), m.fn()) == compose(m.fn(), m.dst().rel(a)))) return false;
  }
  return true;
}

KripkeFrame initial_lift(const LiftFamily& family) {
  if (family.fns.size() != family.targets.size()) {
    fail(ErrorKind::CarrierMismatch, "initial_lift: " + std::to_string(family.fns.size()) +
                                         " functions for " +
                                         std::to_string(family.targets.size()) + " frames");
  }
  for (std::size_t i = 0; i < family.fns.size(); ++i) {
    const Rel& f = family.fns[i];
    if (!(f.dom() == family.carrier) || !(f.cod() == family.targets[i].carrier())) {
      fail(ErrorKind::CarrierMismatch,
           "initial_lift: function " + std::to_string(i) + " is not " + family.carrier.name() +
               "->" + family.targets[i].carrier().name());
    }
    require_same_agents(family.agents, family.targets[i].agents(), "initial_lift");
    function_table(f);
  }
  std::vector<Rel> rels;
  for (std::size_t a = 0; a < family.agents.size(); ++a) {
    Rel r = total_relation(family.carrier, family.carrier);
    for (std::size_t i = 0; i < family.fns.size(); ++i) {
      const Rel& f = family.fns[i];
      r = meet(r, compose(compose(f, family.targets[i].rel(a)), dagger(f)));
    }
    rels.push_back(std::move(r));
  }
  return KripkeFrame(family.carrier, family.agents, std::move(rels));
}

bool largest_preserved_check(const LiftFamily& family, const KripkeFrame& lift,
                             std::span<const Rel> candidates) {
  for (const Rel& r : candidates) {
    if (!(r.dom() == lift.carrier()) || !(r.cod() == lift.carrier())) {
      fail(ErrorKind::CarrierMismatch, "largest_preserved_check: candidate not on " +
                                           lift.carrier().name());
    }
    for (std::size_t a = 0; a < lift.agents().size(); ++a) {
      const bool below = leq(r, lift.rel(a));
      bool preserved = true;
      for (std::size_t i = 0; i < family.fns.size() && preserved; ++i) {
        const Rel& f = family.fns[i];
        preserved = leq(compose(r, f), compose(f, family.targets[i].rel(a)));
      }
      if (below != preserved) return false;
    }
  }
  return true;
}

Rel common_knowledge_relation(const KripkeFrame& f, std::span<const std::string> group) {
  if (group.empty()) fail(ErrorKind::EmptyGroup, "common knowledge needs a nonempty group");
  Rel u(f.carrier(), f.carrier());
  for (const auto& agent : group) u = join(u, f.rel(agent));
  return closure_reflexive_transitive(u);
}

ProductResult product(const KripkeFrame& f1, const KripkeFrame& f2) {
  require_same_agents(f1.agents(), f2.agents(), "product");
  CartesianProduct cp = cartesian_product(f1.carrier(), f2.carrier());
  KripkeFrame frame = initial_lift(LiftFamily{cp.carrier, f1.agents(), {cp.p1, cp.p2}, {f1, f2}});
  FrameMap p1(frame, f1, cp.p1);
  FrameMap p2(frame, f2, cp.p2);
  return ProductResult{std::move(frame), std::move(p1), std::move(p2)};
}

SubframeResult subframe(const KripkeFrame& f, const Subset& s, std::string name) {
  if (!(s.carrier() == f.carrier())) {
    fail(ErrorKind::CarrierMismatch,
         "subframe: subset of " + s.carrier().name() + " used on " + f.carrier().name());
  }
  if (name.empty()) name = f.carrier().name() + "|S";
  auto members = s.indices();
  Inclusion inc = inclusion_of(f.carrier(), members, std::move(name));
  KripkeFrame frame = initial_lift(LiftFamily{inc.sub, f.agents(), {inc.incl}, {f}});
  FrameMap incl(frame, f, inc.incl);
  return SubframeResult{std::move(frame), std::move(incl)};
}

PullbackResult pullback(const FrameMap& f, const FrameMap& g) {
  if (!(f.dst() == g.dst())) {
    fail(ErrorKind::CodomainMismatch, "pullback: " + f.dst().carrier().name() + " vs " +
                                          g.dst().carrier().name());
  }
  Square sq = set_pullback(f.fn(), g.fn());
  KripkeFrame frame =
      initial_lift(LiftFamily{sq.p.dom(), f.src().agents(), {sq.p, sq.q}, {f.src(), g.src()}});
  FrameMap p(frame, f.src(), sq.p);
  FrameMap q(frame, g.src(), sq.q);
  return PullbackResult{std::move(frame), std::move(p), std::move(q)};
}

bool check_pullback_preserves_bounded(const FrameMap& f, const FrameMap& g) {
  return is_bounded(pullback(f, g).p);
}

bool is_bisimulation(const KripkeFrame& f1, const KripkeFrame& f2, const Rel& r) {
  require_same_agents(f1.agents(), f2.agents(), "is_bisimulation");
  if (!(r.dom() == f1.carrier()) || !(r.cod() == f2.carrier())) {
    fail(ErrorKind::CarrierMismatch, "is_bisimulation: relation is not " +
                                         f1.carrier().name() + "->" + f2.carrier().name());
  }
  Tabulation t = tabulate(r);
  KripkeFrame apex = initial_lift(LiftFamily{t.apex, f1.agents(), {t.r1, t.r2}, {f1, f2}});
  return is_bounded(FrameMap(apex, f1, t.r1)) && is_bounded(FrameMap(apex, f2, t.r2));
}

KripkeFrame relabel(const KripkeFrame& f, std::string_view prefix) {
  FiniteSet fresh = numbered_set(f.carrier().name(), f.carrier().size(), prefix);
  std::vector<Rel> rels;
  for (const Rel& r : f.relations()) rels.push_back(r.retyped(fresh, fresh));
  return KripkeFrame(fresh, f.agents(), std::move(rels));
}

}  // namespace catdel
