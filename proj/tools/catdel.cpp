// catdel: evaluate formulas, update models, reduce dynamic formulas, check
// sheaf conditions and run the law suites.
//
// Exit codes: 0 success, 1 a law suite or sheaf check failed, 2 bad input,
// 3 internal invariant violation.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "catdel/error.hpp"
#include "catdel/io.hpp"
#include "catdel/laws.hpp"
#include "catdel/reduce.hpp"
#include "catdel/sheaf.hpp"
#include "catdel/syntax.hpp"

namespace {

using namespace catdel;
using json = nlohmann::ordered_json;

/// Anything wrong with the files or text the user supplied.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Globals {
  std::vector<std::string> event_files;
  std::string format = "text";
};

template <typename F>
auto input(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw InputError(e.what());
  }
}

Document load_model_file(const std::string& path) {
  return input([&] { return load_file(path); });
}

EventRegistry load_registry(const std::vector<std::string>& files) {
  EventRegistry reg;
  for (const auto& f : files) reg.add(input([&] { return load_event_model(read_file(f)); }));
  return reg;
}

std::variant<Formula, FormulaInContext> parse_user_formula(const std::string& text) {
  return input([&] { return parse_any(text); });
}

void write_text(const std::optional<std::string>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*path);
  if (!out) throw InputError("cannot write '" + *path + "'");
  out << text;
}

std::vector<std::string> sorted_labels(const Subset& s) {
  auto labels = s.labels();
  std::sort(labels.begin(), labels.end());
  return labels;
}

std::string braces(const std::vector<std::string>& labels) {
  std::string out = "{";
  for (std::size_t i = 0; i < labels.size(); ++i) out += (i ? ", " : "") + labels[i];
  return out + "}";
}

// --- eval --------------------------------------------------------------------

struct EvalArgs {
  std::string model;
  std::string formula;
  std::optional<std::string> world;
  std::optional<std::string> dot;
};

int cmd_eval(const Globals& g, const EvalArgs& a) {
  const Document doc = load_model_file(a.model);
  const EventRegistry reg = load_registry(g.event_files);
  const auto parsed = parse_user_formula(a.formula);

  Subset ext;
  std::string printed;
  if (const auto* m = std::get_if<KripkeModel>(&doc)) {
    Formula f = Formula::top();
    if (const auto* fic = std::get_if<FormulaInContext>(&parsed)) {
      if (!fic->context.empty())
        throw InputError("a formula in a nonempty context needs a sheaf model");
      f = fic->body;
    } else {
      f = std::get<Formula>(parsed);
    }
    printed = print_formula(f);
    ext = extension(*m, f, reg);
    if (a.dot) write_text(a.dot, frame_to_dot(m->frame(), m->valuation()));
  } else if (const auto* m = std::get_if<SheafModel>(&doc)) {
    FormulaInContext fic{{}, Formula::top()};
    if (const auto* f = std::get_if<Formula>(&parsed)) fic.body = *f;
    else fic = std::get<FormulaInContext>(parsed);
    printed = print_formula(fic);
    ext = interp_formula(*m, fic, reg);
    if (a.dot) write_text(a.dot, frame_to_dot(m->sheaf().base()));
  } else {
    throw InputError("eval needs a kripke-model or sheaf-model document");
  }

  if (a.world) {
    const auto i = ext.carrier().find(*a.world);
    if (!i) throw InputError("UnknownSymbol: no world '" + *a.world + "' in " + ext.carrier().name());
    const bool holds = ext.contains(*i);
    if (g.format == "json") {
      std::cout << json{{"formula", printed}, {"world", *a.world}, {"holds", holds}}.dump(2) << "\n";
    } else {
      std::cout << (holds ? "true" : "false") << "\n";
    }
    return 0;
  }
  const auto labels = sorted_labels(ext);
  if (g.format == "json") {
    std::cout << json{{"formula", printed}, {"extension", labels}}.dump(2) << "\n";
  } else {
    std::cout << braces(labels) << "\n";
  }
  return 0;
}

// --- update ------------------------------------------------------------------

struct UpdateArgs {
  std::string model;
  std::string events;
  std::optional<std::string> event;
  std::optional<std::string> out;
  std::optional<std::string> dot;
};

int cmd_update(const Globals& g, const UpdateArgs& a) {
  const Document doc = load_model_file(a.model);
  EventRegistry reg = load_registry(g.event_files);
  const EventModel em = input([&] { return load_event_model(read_file(a.events)); });
  reg.add(em);
  if (a.event) input([&] { return em.event_index(*a.event); });

  if (const auto* m = std::get_if<KripkeModel>(&doc)) {
    const UpdateResult u = product_update(*m, em, reg);
    write_text(a.out, dump_update(u, a.event));
    if (a.dot) write_text(a.dot, frame_to_dot(u.updated.frame(), u.updated.valuation()));
  } else if (const auto* m = std::get_if<SheafModel>(&doc)) {
    const SheafUpdate u = pullback_update(*m, em, reg);
    write_text(a.out, dump_sheaf_update(*m, u, a.event));
    if (a.dot) write_text(a.dot, frame_to_dot(u.updated.sheaf().base()));
  } else {
    throw InputError("update needs a kripke-model or sheaf-model document");
  }
  return 0;
}

// --- laws --------------------------------------------------------------------

struct LawsArgs {
  std::vector<std::string> suites;
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::size_t max_size = 0;
  bool self_test = false;
};

json report_json(const Report& r) {
  json failures = json::array();
  for (const auto& f : r.failures)
    failures.push_back({{"case", f.case_id}, {"check", f.check}, {"witness", f.witness}});
  return json{{"suite", r.suite},   {"cases", r.cases},  {"failures", failures},
              {"notes", r.notes},   {"seconds", r.seconds}, {"pass", r.ok()}};
}

void print_report(const Report& r) {
  std::ostringstream t;
  t.setf(std::ios::fixed);
  t.precision(2);
  t << r.seconds;
  std::cout << (r.ok() ? "PASS " : "FAIL ") << r.suite << ": " << r.cases << " cases, "
            << r.failures.size() << " failures, " << t.str() << " s\n";
  for (const auto& n : r.notes) std::cout << "  note: " << n << "\n";
  const std::size_t shown = std::min<std::size_t>(r.failures.size(), 20);
  for (std::size_t i = 0; i < shown; ++i) {
    const auto& f = r.failures[i];
    std::cout << "  failure: " << f.case_id << " [" << f.check << "] " << f.witness << "\n";
  }
  if (r.failures.size() > shown)
    std::cout << "  ... " << r.failures.size() - shown << " more failures\n";
}

int cmd_laws(const Globals& g, const LawsArgs& a) {
  const LawOptions opts{a.seed, a.cases, a.max_size};
  std::vector<Report> reports;
  if (a.self_test) {
    reports.push_back(run_self_test(opts));
  } else {
    const auto& names = a.suites.empty() ? suite_names() : a.suites;
    for (const auto& n : names) {
      if (std::find(suite_names().begin(), suite_names().end(), n) == suite_names().end())
        throw InputError("UnknownSymbol: no law suite named '" + n + "'");
    }
    for (const auto& n : names) {
      reports.push_back(run_suite(n, opts));
      if (g.format != "json") print_report(reports.back());
    }
  }
  bool ok = true;
  for (const auto& r : reports) ok = ok && r.ok();
  if (g.format == "json") {
    json out = json::array();
    for (const auto& r : reports) out.push_back(report_json(r));
    std::cout << out.dump(2) << "\n";
  } else if (a.self_test) {
    print_report(reports.back());
  }
  return ok ? 0 : 1;
}

// --- reduce ------------------------------------------------------------------

struct ReduceArgs {
  std::string model;
  std::string formula;
};

int cmd_reduce(const Globals& g, const ReduceArgs& a) {
  const Document doc = load_model_file(a.model);
  const EventRegistry reg = load_registry(g.event_files);
  const auto parsed = parse_user_formula(a.formula);

  Reduction red{Formula::top(), Formula::top(), {}};
  std::vector<std::string> context;
  if (const auto* m = std::get_if<KripkeModel>(&doc)) {
    if (const auto* fic = std::get_if<FormulaInContext>(&parsed); fic && !fic->context.empty())
      throw InputError("a formula in a nonempty context needs a sheaf model");
    const Formula f = std::holds_alternative<Formula>(parsed)
                          ? std::get<Formula>(parsed)
                          : std::get<FormulaInContext>(parsed).body;
    red = reduce_on_model(*m, f, reg);
  } else if (const auto* m = std::get_if<SheafModel>(&doc)) {
    FormulaInContext fic{{}, Formula::top()};
    if (const auto* f = std::get_if<Formula>(&parsed)) fic.body = *f;
    else fic = std::get<FormulaInContext>(parsed);
    context = fic.context;
    red = reduce_in_context(*m, fic, reg);
  } else {
    throw InputError("reduce needs a kripke-model or sheaf-model document");
  }

  auto show = [&](const Formula& f) {
    return context.empty() ? print_formula(f) : print_formula(FormulaInContext{context, f});
  };
  if (g.format == "json") {
    json steps = json::array();
    for (const auto& s : red.steps) steps.push_back({{"rule", s.rule}, {"formula", show(s.after)}});
    std::cout << json{{"input", show(red.input)}, {"steps", steps}, {"result", show(red.result)},
                      {"verified", true}}
                     .dump(2)
              << "\n";
  } else {
    std::cout << "input: " << show(red.input) << "\n";
    for (const auto& s : red.steps) std::cout << "  " << s.rule << ": " << show(s.after) << "\n";
    std::cout << "result: " << show(red.result) << "\n";
    std::cout << "every step has the same extension on the model\n";
  }
  return 0;
}

// --- sheaf-check -------------------------------------------------------------

int cmd_sheaf_check(const Globals& g, const std::string& path) {
  const FrameMap proj = input([&] { return load_sheaf_projection(read_file(path)); });
  const SheafDiagnostics d = is_kripke_sheaf(proj);
  std::vector<std::pair<std::string, bool>> powers;
  if (d.ok()) {
    for (std::size_t n = 0; n <= 3; ++n)
      powers.emplace_back(std::to_string(n), is_kripke_sheaf(fibered_power(proj, n).proj).ok());
  }
  std::optional<std::string> model_error;
  if (d.ok()) {
    try {
      load_sheaf_model(read_file(path));
    } catch (const Error& e) {
      model_error = e.what();
    }
  }
  const bool ok = d.ok() && !model_error;

  if (g.format == "json") {
    json j{{"surjective", d.surjective},
           {"bounded", d.bounded},
           {"sheaf_condition", d.sheaf_condition},
           {"diagonal_characterization", d.diagonal_characterization},
           {"is_sheaf", d.ok()}};
    if (!d.ok()) j["failed"] = {{"invariant", d.failed}, {"witness", d.witness}};
    json pw = json::object();
    for (const auto& [n, s] : powers) pw[n] = s;
    j["powers_are_sheaves"] = pw;
    if (model_error) j["interpretation_error"] = *model_error;
    std::cout << j.dump(2) << "\n";
  } else {
    auto yn = [](bool b) { return b ? "yes" : "no"; };
    std::cout << "surjective: " << yn(d.surjective) << "\n"
              << "bounded: " << yn(d.bounded) << "\n"
              << "sheaf condition: " << yn(d.sheaf_condition) << "\n"
              << "diagonal characterization: " << yn(d.diagonal_characterization) << "\n";
    for (const auto& [n, s] : powers) std::cout << "power " << n << " is a sheaf: " << yn(s) << "\n";
    if (!d.ok()) std::cout << "not a Kripke sheaf: " << d.failed << ": " << d.witness << "\n";
    else if (model_error) std::cout << "interpretations rejected: " << *model_error << "\n";
    else std::cout << "Kripke sheaf\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kripke frames, dynamic epistemic logic and Kripke sheaves"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--events", g.event_files, "Event-model documents to register")
      ->allow_extra_args(false);
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "text"}));

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "Print the extension of a formula");
  eval->add_option("model", ea.model)->required();
  eval->add_option("formula", ea.formula)->required();
  eval->add_option("--world", ea.world, "Print true/false at this world");
  eval->add_option("--dot", ea.dot, "Write the frame as Graphviz text");

  UpdateArgs ua;
  auto* update = app.add_subcommand("update", "Update a model with an event model");
  update->add_option("model", ua.model)->required();
  update->add_option("event_model", ua.events)->required();
  update->add_option("--event", ua.event, "Include the transition relation of this event");
  update->add_option("--out", ua.out, "Write the result here");
  update->add_option("--dot", ua.dot, "Write the updated frame as Graphviz text");

  LawsArgs la;
  auto* laws = app.add_subcommand("laws", "Run the law-verification suites");
  laws->add_option("--suite", la.suites, "Suite to run (repeatable)")->allow_extra_args(false);
  laws->add_option("--seed", la.seed);
  laws->add_option("--cases", la.cases, "Cases per suite (0: default)");
  laws->add_option("--max-size", la.max_size, "Largest carrier (0: default)");
  laws->add_flag("--self-test", la.self_test, "Run the checks against a broken dagger");

  ReduceArgs ra;
  auto* reduce = app.add_subcommand("reduce", "Rewrite a dynamic formula to a static one");
  reduce->add_option("model", ra.model)->required();
  reduce->add_option("formula", ra.formula)->required();

  std::string sheaf_path;
  auto* sheaf = app.add_subcommand("sheaf-check", "Check the sheaf condition of a sheaf-model document");
  sheaf->add_option("model", sheaf_path)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*eval) return cmd_eval(g, ea);
    if (*update) return cmd_update(g, ua);
    if (*laws) return cmd_laws(g, la);
    if (*reduce) return cmd_reduce(g, ra);
    if (*sheaf) return cmd_sheaf_check(g, sheaf_path);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::InvariantViolation:
      case ErrorKind::CarrierMismatch:
      case ErrorKind::NotAFunction:
      case ErrorKind::NotAPullback:
      case ErrorKind::CodomainMismatch:
        return 3;
      default:
        return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
