#include "catdel/io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "catdel/error.hpp"
#include "catdel/syntax.hpp"

namespace catdel {

namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void schema(const std::string& msg) { fail(ErrorKind::SchemaError, msg); }
[[noreturn]] void invalid(const std::string& msg) { fail(ErrorKind::InvariantViolation, msg); }

void require_keys(const json& j, const std::set<std::string>& allowed,
                  const std::set<std::string>& required) {
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) schema("unexpected key '" + key + "'");
  }
  for (const auto& key : required) {
    if (!j.contains(key)) schema("missing key '" + key + "'");
  }
}

std::string get_string(const json& j, const std::string& key, const std::string& fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_string()) schema("'" + key + "' must be a string");
  return j[key].get<std::string>();
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) schema(where + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) schema(where + " must be an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

const json& object_at(const json& j, const std::string& key) {
  static const json empty = json::object();
  if (!j.contains(key)) return empty;
  if (!j[key].is_object()) schema("'" + key + "' must be an object");
  return j[key];
}

FiniteSet labelled_set(const std::string& name, std::vector<std::string> labels,
                       const std::string& what) {
  std::set<std::string> seen;
  for (const auto& l : labels)
    if (!seen.insert(l).second) invalid(what + " lists '" + l + "' twice");
  return FiniteSet(name, std::move(labels));
}

std::size_t lookup(const FiniteSet& s, const std::string& label, const std::string& where) {
  auto i = s.find(label);
  if (!i) invalid(where + ": '" + label + "' is not one of the " + s.name() + " elements");
  return *i;
}

Rel pair_list(const json& j, const FiniteSet& carrier, const std::string& where) {
  if (!j.is_array()) schema(where + " must be an array of pairs");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (const auto& p : j) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
      schema(where + " must be an array of [from, to] string pairs");
    pairs.emplace_back(lookup(carrier, p[0].get<std::string>(), where),
                       lookup(carrier, p[1].get<std::string>(), where));
  }
  return Rel::from_pairs(carrier, carrier, pairs);
}

std::vector<Rel> agent_relations(const json& rels, const FiniteSet& carrier, const AgentSet& agents,
                                 const std::string& key) {
  std::vector<Rel> out(agents.size(), Rel(carrier, carrier));
  for (const auto& [agent, pairs] : rels.items()) {
    auto a = agents.find(agent);
    if (!a) invalid(key + " names unknown agent '" + agent + "'");
    out[*a] = pair_list(pairs, carrier, key + "." + agent);
  }
  return out;
}

AgentSet load_agents(const json& j) {
  auto labels = string_list(j.at("agents"), "'agents'");
  std::set<std::string> seen;
  for (const auto& a : labels)
    if (!seen.insert(a).second) invalid("agents lists '" + a + "' twice");
  return AgentSet(std::move(labels));
}

void check_header(const json& j, const std::string& kind) {
  if (!j.is_object()) schema("document must be a JSON object");
  if (!j.contains("format_version")) schema("missing key 'format_version'");
  if (!j["format_version"].is_number_integer() || j["format_version"].get<int>() != kFormatVersion)
    schema("unsupported format_version (expected " + std::to_string(kFormatVersion) + ")");
  if (get_string(j, "kind", "") != kind) schema("expected kind '" + kind + "'");
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    schema(std::string("invalid JSON: ") + e.what());
  }
}

KripkeModel kripke_from_json(const json& j) {
  check_header(j, "kripke-model");
  require_keys(j, {"format_version", "kind", "name", "worlds", "agents", "relations", "valuation"},
               {"worlds", "agents"});
  FiniteSet worlds = labelled_set(get_string(j, "name", "X"),
                                  string_list(j["worlds"], "'worlds'"), "worlds");
  AgentSet agents = load_agents(j);
  KripkeFrame frame(worlds, agents, agent_relations(object_at(j, "relations"), worlds, agents,
                                                    "relations"));
  std::map<std::string, Subset> val;
  for (const auto& [atom, ws] : object_at(j, "valuation").items()) {
    std::vector<std::size_t> idx;
    for (const auto& w : string_list(ws, "valuation." + atom))
      idx.push_back(lookup(worlds, w, "valuation of " + atom));
    val.emplace(atom, Subset::of_indices(worlds, idx));
  }
  return KripkeModel(std::move(frame), std::move(val));
}

EventModel event_from_json(const json& j) {
  check_header(j, "event-model");
  require_keys(j, {"format_version", "kind", "name", "events", "agents", "relations", "preconditions"},
               {"events", "agents", "preconditions"});
  const std::string name = get_string(j, "name", "E");
  FiniteSet events = labelled_set(name, string_list(j["events"], "'events'"), "events");
  AgentSet agents = load_agents(j);
  KripkeFrame frame(events, agents, agent_relations(object_at(j, "relations"), events, agents,
                                                    "relations"));
  std::map<std::string, Formula> pre;
  for (const auto& [e, text] : object_at(j, "preconditions").items()) {
    lookup(events, e, "preconditions");
    if (!text.is_string()) schema("preconditions." + e + " must be a formula string");
    pre.emplace(e, parse_formula(text.get<std::string>()));
  }
  for (const auto& e : events.elements())
    if (!pre.count(e)) invalid("event '" + e + "' has no precondition");
  return EventModel(name, std::move(frame), std::move(pre));
}

// Argument tuple of an interpretation entry: a world label for arity 0,
// otherwise individual labels from one fiber.
std::size_t argument_index(const json& args, std::size_t arity, const FiberedPower& p,
                           const FiniteSet& worlds, const FiniteSet& D, const std::string& where) {
  if (arity == 0) {
    if (!args.is_string()) schema(where + ": nullary arguments are a world label");
    return lookup(worlds, args.get<std::string>(), where);
  }
  if (!args.is_array() || args.size() != arity)
    schema(where + ": expected " + std::to_string(arity) + " argument labels");
  std::vector<std::size_t> tuple;
  std::vector<std::string> labels;
  for (const auto& a : args) {
    if (!a.is_string()) schema(where + ": argument labels must be strings");
    labels.push_back(a.get<std::string>());
    tuple.push_back(lookup(D, labels.back(), where));
  }
  auto it = p.index.find(tuple);
  if (it == p.index.end()) invalid(where + ": " + tuple_label(labels) + " does not lie in one fiber");
  return it->second;
}

FrameMap projection_from_json(const json& j) {
  check_header(j, "sheaf-model");
  require_keys(j,
               {"format_version", "kind", "name", "base_name", "worlds", "agents", "relations",
                "fibers", "domain_relation", "functions", "predicates"},
               {"worlds", "agents", "fibers"});
  FiniteSet worlds = labelled_set(get_string(j, "base_name", "X"),
                                  string_list(j["worlds"], "'worlds'"), "worlds");
  AgentSet agents = load_agents(j);
  KripkeFrame base(worlds, agents,
                   agent_relations(object_at(j, "relations"), worlds, agents, "relations"));

  const json& fibers = object_at(j, "fibers");
  std::vector<std::vector<std::string>> by_world(worlds.size());
  for (const auto& [w, members] : fibers.items())
    by_world[lookup(worlds, w, "fibers")] = string_list(members, "fibers." + w);
  std::vector<std::string> individuals;
  std::vector<std::size_t> pi;
  for (std::size_t w = 0; w < worlds.size(); ++w)
    for (const auto& a : by_world[w]) {
      individuals.push_back(a);
      pi.push_back(w);
    }
  FiniteSet D = labelled_set(get_string(j, "name", "D"), individuals, "fibers");
  KripkeFrame total(D, agents,
                    agent_relations(object_at(j, "domain_relation"), D, agents, "domain_relation"));
  return FrameMap(total, base, Rel::from_function(D, worlds, pi));
}

SheafModel sheaf_from_json(const json& j) {
  FrameMap proj = projection_from_json(j);
  const FiniteSet& worlds = proj.dst().carrier();
  const FiniteSet& D = proj.src().carrier();
  const SheafDiagnostics diag = is_kripke_sheaf(proj);
  if (!diag.ok()) invalid(diag.failed + ": " + diag.witness);

  Signature sig;
  std::map<std::string, FunctionInterp> functions;
  std::map<std::string, Subset> relations;
  for (const auto& [name, decl] : object_at(j, "functions").items()) {
    if (!decl.is_object() || !decl.contains("arity") || !decl["arity"].is_number_unsigned() ||
        !decl.contains("table") || !decl["table"].is_array())
      schema("functions." + name + " needs an unsigned 'arity' and a 'table' array");
    const auto arity = decl["arity"].get<std::size_t>();
    sig.functions[name] = arity;
    const FiberedPower p = fibered_power(proj, arity);
    std::vector<std::optional<std::size_t>> table(p.tuples.size());
    for (const auto& entry : decl["table"]) {
      if (!entry.is_array() || entry.size() != 2 || !entry[1].is_string())
        schema("functions." + name + ".table entries are [arguments, value]");
      const std::size_t i = argument_index(entry[0], arity, p, worlds, D, "functions." + name);
      if (table[i]) invalid("functions." + name + " defines " + p.frame.carrier().element(i) + " twice");
      table[i] = lookup(D, entry[1].get<std::string>(), "functions." + name);
    }
    FunctionInterp f{arity, {}};
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (!table[i]) invalid("functions." + name + " is undefined at " + p.frame.carrier().element(i));
      f.table.push_back(*table[i]);
    }
    functions.emplace(name, std::move(f));
  }
  for (const auto& [name, decl] : object_at(j, "predicates").items()) {
    if (!decl.is_object() || !decl.contains("arity") || !decl["arity"].is_number_unsigned() ||
        !decl.contains("holds") || !decl["holds"].is_array())
      schema("predicates." + name + " needs an unsigned 'arity' and a 'holds' array");
    const auto arity = decl["arity"].get<std::size_t>();
    if (sig.functions.count(name)) invalid("'" + name + "' is both a function and a predicate");
    sig.relations[name] = arity;
    const FiberedPower p = fibered_power(proj, arity);
    std::vector<std::size_t> members;
    for (const auto& args : decl["holds"])
      members.push_back(argument_index(args, arity, p, worlds, D, "predicates." + name));
    relations.emplace(name, Subset::of_indices(p.frame.carrier(), members));
  }
  return SheafModel(KripkeSheaf(std::move(proj)), std::move(sig), std::move(functions),
                    std::move(relations));
}

json labels_json(const Subset& s) {
  json out = json::array();
  for (const auto& l : s.labels()) out.push_back(l);
  return out;
}

json pairs_json(const Rel& r) {
  json out = json::array();
  for (const auto& [a, b] : r.labeled_pairs()) out.push_back(json::array({a, b}));
  return out;
}

json relations_json(const KripkeFrame& f) {
  json out = json::object();
  for (std::size_t a = 0; a < f.agents().size(); ++a) out[f.agents()[a]] = pairs_json(f.rel(a));
  return out;
}

json agents_json(const AgentSet& agents) {
  json out = json::array();
  for (const auto& a : agents) out.push_back(a);
  return out;
}

json kripke_to_json(const KripkeModel& m) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "kripke-model";
  j["name"] = m.carrier().name();
  j["worlds"] = m.carrier().elements();
  j["agents"] = agents_json(m.agents());
  j["relations"] = relations_json(m.frame());
  json val = json::object();
  for (const auto& [atom, s] : m.valuation()) val[atom] = labels_json(s);
  j["valuation"] = val;
  return j;
}

json args_json(const FiberedPower& p, std::size_t i, const FiniteSet& worlds, const FiniteSet& D) {
  if (p.n == 0) return worlds.element(i);
  json out = json::array();
  for (std::size_t a : p.tuples[i]) out.push_back(D.element(a));
  return out;
}

json sheaf_to_json(const SheafModel& m) {
  const KripkeSheaf& s = m.sheaf();
  const FiniteSet& X = s.base().carrier();
  const FiniteSet& D = s.total().carrier();
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "sheaf-model";
  j["name"] = D.name();
  j["base_name"] = X.name();
  j["worlds"] = X.elements();
  j["agents"] = agents_json(m.agents());
  j["relations"] = relations_json(s.base());
  json fibers = json::object();
  for (std::size_t w = 0; w < X.size(); ++w) {
    json members = json::array();
    for (std::size_t a : s.proj().fn().predecessors(w)) members.push_back(D.element(a));
    fibers[X.element(w)] = members;
  }
  j["fibers"] = fibers;
  j["domain_relation"] = relations_json(s.total());
  json functions = json::object();
  for (const auto& [name, f] : m.functions()) {
    const FiberedPower& p = m.power(f.arity);
    json table = json::array();
    for (std::size_t i = 0; i < f.table.size(); ++i)
      table.push_back(json::array({args_json(p, i, X, D), D.element(f.table[i])}));
    functions[name] = json{{"arity", f.arity}, {"table", table}};
  }
  j["functions"] = functions;
  json predicates = json::object();
  for (const auto& [name, r] : m.relations()) {
    const std::size_t arity = m.signature().relations.at(name);
    const FiberedPower& p = m.power(arity);
    json holds = json::array();
    for (std::size_t i : r.indices()) holds.push_back(args_json(p, i, X, D));
    predicates[name] = json{{"arity", arity}, {"holds", holds}};
  }
  j["predicates"] = predicates;
  return j;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Document load_document(std::string_view json_text) {
  json j = parse_json(json_text);
  if (!j.is_object()) schema("document must be a JSON object");
  const std::string kind = get_string(j, "kind", "");
  if (kind == "kripke-model") return kripke_from_json(j);
  if (kind == "event-model") return event_from_json(j);
  if (kind == "sheaf-model") return sheaf_from_json(j);
  schema("unknown kind '" + kind + "' (expected kripke-model, event-model or sheaf-model)");
}

Document load_file(const std::string& path) { return load_document(read_file(path)); }

KripkeModel load_kripke_model(std::string_view json_text) {
  return kripke_from_json(parse_json(json_text));
}

EventModel load_event_model(std::string_view json_text) {
  return event_from_json(parse_json(json_text));
}

FrameMap load_sheaf_projection(std::string_view json_text) {
  return projection_from_json(parse_json(json_text));
}

SheafModel load_sheaf_model(std::string_view json_text) {
  return sheaf_from_json(parse_json(json_text));
}

std::string dump_model(const KripkeModel& m) { return kripke_to_json(m).dump(2) + "\n"; }

std::string dump_event_model(const EventModel& em) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "event-model";
  j["name"] = em.name();
  j["events"] = em.events().elements();
  j["agents"] = agents_json(em.agents());
  j["relations"] = relations_json(em.frame());
  json pre = json::object();
  for (std::size_t k = 0; k < em.events().size(); ++k)
    pre[em.events().element(k)] = print_formula(em.pre(k));
  j["preconditions"] = pre;
  return j.dump(2) + "\n";
}

std::string dump_sheaf_model(const SheafModel& m) { return sheaf_to_json(m).dump(2) + "\n"; }

std::string dump_update(const UpdateResult& u, const std::optional<std::string>& event) {
  if (!event) return dump_model(u.updated);
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "update-result";
  j["updated"] = kripke_to_json(u.updated);
  j["transition"] = json{{"event", *event}, {"pairs", pairs_json(u.maps.event(*event).transition)}};
  return j.dump(2) + "\n";
}

std::string dump_sheaf_update(const SheafModel& before, const SheafUpdate& u,
                              const std::optional<std::string>& event) {
  if (!event) return dump_sheaf_model(u.updated);
  const std::size_t k = u.base.p_e.dst().carrier().index_of(*event);
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "sheaf-update-result";
  j["updated"] = sheaf_to_json(u.updated);
  j["transition"] = json{{"event", *event},
                         {"worlds", pairs_json(transition_relation(before, u, 0, k))},
                         {"individuals", pairs_json(transition_relation(before, u, 1, k))}};
  return j.dump(2) + "\n";
}

std::string frame_to_dot(const KripkeFrame& f, const std::map<std::string, Subset>& valuation) {
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream out;
  out << "digraph " << quote(f.carrier().name()) << " {\n";
  for (std::size_t w = 0; w < f.carrier().size(); ++w) {
    std::string label = f.carrier().element(w);
    std::string atoms;
    for (const auto& [atom, s] : valuation)
      if (s.contains(w)) atoms += (atoms.empty() ? "" : ",") + atom;
    if (!atoms.empty()) label += " {" + atoms + "}";
    out << "  " << quote(f.carrier().element(w)) << " [label=" << quote(label) << "];\n";
  }
  for (std::size_t a = 0; a < f.agents().size(); ++a)
    for (const auto& [x, y] : f.rel(a).labeled_pairs())
      out << "  " << quote(x) << " -> " << quote(y) << " [label=" << quote(f.agents()[a]) << "];\n";
  out << "}\n";
  return out.str();
}

}  // namespace catdel
