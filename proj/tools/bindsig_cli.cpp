// bindsig: validate signatures, reduce and translate terms, run law suites.
//
// Exit codes: 0 success, 1 input/parse/type/validation error, 2 step limit,
// 3 faithfulness counterexample, 4 law failure.

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "bindsig/dsl.hpp"
#include "bindsig/langs.hpp"
#include "bindsig/laws.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace bindsig;

namespace {

enum Exit { ok = 0, input_error = 1, step_limit = 2, unfaithful = 3, law_failure = 4 };

struct Failure {
  std::vector<Diagnostic> diagnostics;
};

bool json_mode = false;

[[noreturn]] void fail(std::string name, std::string position, std::string reason) {
  throw Failure{{{std::move(name), std::move(position), std::move(reason)}}};
}

json diagnostics_json(const std::vector<Diagnostic>& ds) {
  json out = json::array();
  for (const Diagnostic& d : ds)
    out.push_back({{"location", d.location}, {"position", d.position}, {"reason", d.reason}});
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "-", "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <class F>
auto parsing(const std::string& name, F f) {
  try {
    return f();
  } catch (const ParseError& e) {
    fail(name, e.position(), e.what());
  } catch (const TypeError& e) {
    fail(name, render_path(e.path()), e.what());
  }
}

TwoSignature read_signature(const std::string& arg) {
  if (fs::is_regular_file(arg)) {
    std::string text = read_file(arg);
    return parsing(arg, [&] { return parse_signature(text); });
  }
  try {
    return builtin_signature(arg);
  } catch (const Error&) {
    fail(arg, "-", "no such file or built-in signature");
  }
}

void require_valid(const std::string& name, const ValidationReport& report) {
  if (report.ok()) return;
  Failure f;
  for (Diagnostic d : report.diagnostics) {
    d.location = name + ":" + d.location;
    f.diagnostics.push_back(std::move(d));
  }
  throw f;
}

TwoSignature load_signature(const std::string& arg) {
  TwoSignature sig = read_signature(arg);
  require_valid(arg, validate_signature(sig));
  return sig;
}

Representation load_representation(const std::string& arg) {
  Representation rep;
  if (fs::is_regular_file(arg)) {
    const fs::path dir = fs::path(arg).parent_path();
    std::string text = read_file(arg);
    auto resolve = [&](const std::string& ref, bool quoted) {
      if (!quoted) return builtin_signature(ref);
      std::string path = (dir / ref).string();
      if (!fs::is_regular_file(path)) throw Error("cannot open signature file " + path);
      std::string sig_text = read_file(path);
      TwoSignature sig = parsing(path, [&] { return parse_signature(sig_text); });
      require_valid(path, validate_signature(sig));
      return sig;
    };
    rep = parsing(arg, [&] { return parse_representation(text, resolve).rep; });
  } else {
    try {
      rep = builtin_representation(arg);
    } catch (const Error&) {
      fail(arg, "-", "no such file or built-in representation");
    }
  }
  require_valid(arg, validate_signature(rep.source));
  require_valid(arg, validate_signature(rep.target));
  require_valid(arg, check_representation(rep));
  return rep;
}

Context load_context(const TypeSignature& types, const std::string& text) {
  return parsing("context", [&] { return parse_context(types, text); });
}

Term load_term(const TwoSignature& sig, const Context& ctx, const std::string& text) {
  return parsing("term", [&] { return parse_term(sig, ctx, text); });
}

json trace_json(const Trace& t) {
  json steps = json::array();
  for (const TraceStep& s : t.steps)
    steps.push_back({{"path", render_path(s.position.path)},
                     {"rule", s.position.rule},
                     {"term", print_term(s.result)}});
  return {{"start", print_term(t.start)}, {"steps", steps}, {"result", print_term(t.last())}};
}

void emit(const json& j, const std::string& text) {
  if (json_mode) std::cout << j.dump() << "\n";
  else std::cout << text;
}

// ---------------------------------------------------------------------------

int cmd_validate(const std::string& file) {
  TwoSignature sig = read_signature(file);
  require_valid(file, validate_signature(sig));
  emit({{"command", "validate"}, {"ok", true}, {"signature", sig.name}, {"diagnostics", json::array()}},
       "ok\n");
  return ok;
}

struct ReduceArgs {
  std::string sig, context, term;
  std::optional<std::size_t> steps;
  bool normalize = false;
  std::size_t max_steps = 1000;
};

int cmd_reduce(const ReduceArgs& a) {
  TwoSignature sig = load_signature(a.sig);
  Context ctx = load_context(sig.types, a.context);
  Term e = load_term(sig, ctx, a.term);
  Trace trace{e, {}};
  bool limited = false;
  if (a.steps && !a.normalize) {
    for (std::size_t i = 0; i < *a.steps; ++i) {
      auto next = first_step(sig, trace.last(), ctx);
      if (!next) break;
      trace.steps.push_back({std::move(next->first), std::move(next->second)});
    }
  } else {
    NormalizeResult r = normalize(sig, e, ctx, a.max_steps);
    trace = std::move(r.trace);
    limited = !r.normal_form;
  }
  json j = trace_json(trace);
  j["command"] = "reduce";
  j["step_limit"] = limited;
  emit(j, print_trace(trace) + print_term(trace.last()) + "\n");
  if (limited) {
    std::cerr << "term:-:step limit of " << a.max_steps << " reached\n";
    return step_limit;
  }
  return ok;
}

struct TranslateArgs {
  std::string rep, context, term;
  std::optional<std::size_t> fuel;
};

int cmd_translate(const TranslateArgs& a) {
  Representation rep = load_representation(a.rep);
  Context ctx = load_context(rep.source.types, a.context);
  Term e = load_term(rep.source, ctx, a.term);
  Term image = fold(rep, ctx, e);
  json j = {{"command", "translate"},
            {"representation", rep.name},
            {"context", print_context(retype_context(rep.types, ctx))},
            {"result", print_term(image)}};
  std::string text = print_term(image) + "\n";
  bool faithful = true;
  if (a.fuel) {
    if (*a.fuel == 0) fail("fuel", "-", "fuel must be at least 1");
    const Context target_ctx = retype_context(rep.types, ctx);
    json steps = json::array();
    for (const auto& [pos, next] : step(rep.source, e, ctx)) {
      Term moved = fold(rep, ctx, next);
      ReachResult r = reduces_to(rep.target, image, moved, target_ctx, *a.fuel);
      faithful = faithful && r.yes();
      const std::string verdict = r.yes() ? "yes" : "no";
      text += "step " + render_path(pos.path) + " " + print_name(pos.rule) + " " + verdict +
              " expanded " + std::to_string(r.expanded) + "\n";
      steps.push_back({{"path", render_path(pos.path)},
                       {"rule", pos.rule},
                       {"source", print_term(next)},
                       {"target", print_term(moved)},
                       {"verdict", verdict},
                       {"expanded", r.expanded}});
      if (!r.yes())
        std::cerr << "term:" << render_path(pos.path) << ":" << pos.rule
                  << " step not reached in the target within fuel\n";
    }
    text += std::string("faithful ") + (faithful ? "yes" : "no") + "\n";
    j["steps"] = steps;
    j["faithful"] = faithful;
  }
  emit(j, text);
  return faithful ? ok : unfaithful;
}

struct LawsArgs {
  std::string sig, rep;
  LawOptions opts;
};

json report_json(const LawReport& r) {
  json laws = json::array();
  for (const LawResult& l : r.laws)
    laws.push_back({{"name", l.name},
                    {"passed", l.passed},
                    {"failed", l.failed},
                    {"inconclusive", l.inconclusive},
                    {"ok", l.ok()},
                    {"failures", l.failures}});
  return {{"signature", r.signature},
          {"representation", r.representation},
          {"seed", r.seed},
          {"samples", r.samples},
          {"ok", r.ok()},
          {"laws", laws}};
}

int cmd_laws(const LawsArgs& a) {
  TwoSignature sig = load_signature(a.sig);
  LawReport report = run_language_laws(sig, a.opts);
  if (!a.rep.empty()) {
    Representation rep = load_representation(a.rep);
    if (rep.source != sig) fail(a.rep, "-", "representation source differs from " + a.sig);
    LawReport more = run_representation_laws(rep, a.opts);
    report.representation = more.representation;
    report.laws.insert(report.laws.end(), more.laws.begin(), more.laws.end());
  }
  json j = report_json(report);
  j["command"] = "laws";
  emit(j, format_report(report));
  return report.ok() ? ok : law_failure;
}

struct EnumerateArgs {
  std::string sig, context, type;
  std::size_t max_nodes = 4;
  std::size_t max_type_nodes = 3;
};

int cmd_enumerate(const EnumerateArgs& a) {
  TwoSignature sig = load_signature(a.sig);
  Context ctx = load_context(sig.types, a.context);
  Type t = parsing("type", [&] { return parse_type(sig.types, a.type); });
  if (a.max_nodes == 0) fail("max-nodes", "-", "must be at least 1");
  auto terms = enumerate(sig, ctx, t, a.max_nodes, {a.max_type_nodes});
  json list = json::array();
  std::string text;
  for (const Term& e : terms) {
    list.push_back(print_term(e));
    text += print_term(e) + "\n";
  }
  emit({{"command", "enumerate"}, {"count", terms.size()}, {"terms", list}}, text);
  return ok;
}

// First keyword of a file, skipping blank space and '#' comments.
std::string first_word(const std::string& text) {
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
    } else if (text[i] == '#') {
      while (i < text.size() && text[i] != '\n') ++i;
    } else {
      break;
    }
  }
  std::size_t j = i;
  while (j < text.size() && std::isalpha(static_cast<unsigned char>(text[j]))) ++j;
  return text.substr(i, j - i);
}

int cmd_print(const std::string& arg) {
  std::string text;
  if (fs::is_regular_file(arg)) {
    std::string src = read_file(arg);
    text = parsing(arg, [&]() -> std::string {
      if (first_word(src) == "representation") {
        const fs::path dir = fs::path(arg).parent_path();
        auto resolve = [&](const std::string& ref, bool quoted) {
          if (!quoted) return builtin_signature(ref);
          return parse_signature(read_file((dir / ref).string()));
        };
        return print_representation(parse_representation(src, resolve));
      }
      return print_signature(parse_signature(src));
    });
  } else {
    try {
      CatalogEntry entry = builtin(arg);
      if (auto* s = std::get_if<TwoSignature>(&entry)) text = print_signature(*s);
      else text = print_representation(std::get<Representation>(entry));
    } catch (const Error&) {
      fail(arg, "-", "no such file or catalog entry");
    }
  }
  emit({{"command", "print"}, {"text", text}}, text);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Languages from 2-signatures: reduction, translation and law checking"};
  app.require_subcommand(1);
  std::string format = "text";
  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  };

  std::string validate_file;
  auto* validate = app.add_subcommand("validate", "Validate a signature file");
  validate->add_option("signature", validate_file, "Signature file or built-in name")->required();
  add_format(validate);

  ReduceArgs ra;
  auto* reduce = app.add_subcommand("reduce", "Reduce a term leftmost-outermost");
  reduce->add_option("signature", ra.sig)->required();
  reduce->add_option("context", ra.context, "Context, e.g. [Nat]")->required();
  reduce->add_option("term", ra.term)->required();
  reduce->add_option("--steps", ra.steps, "Take at most this many steps");
  reduce->add_flag("--normalize", ra.normalize, "Reduce to normal form (default)");
  auto* max_steps = reduce->add_option("--max-steps", ra.max_steps, "Step limit for --normalize");
  add_format(reduce);

  TranslateArgs ta;
  auto* translate = app.add_subcommand("translate", "Fold a term through a representation");
  translate->add_option("representation", ta.rep, "Representation file or built-in name")->required();
  translate->add_option("context", ta.context)->required();
  translate->add_option("term", ta.term)->required();
  translate->add_option("--check-faithful", ta.fuel, "Check every source step with this fuel");
  add_format(translate);

  LawsArgs la;
  auto* laws = app.add_subcommand("laws", "Run the law suites");
  laws->add_option("signature", la.sig)->required();
  laws->add_option("representation", la.rep);
  laws->add_option("--seed", la.opts.seed, "Random seed")->capture_default_str();
  laws->add_option("--samples", la.opts.samples, "Samples per suite")->capture_default_str();
  laws->add_option("--fuel", la.opts.fuel, "Search fuel")->capture_default_str()->check(CLI::PositiveNumber);
  laws->add_option("--max-size", la.opts.max_size, "Largest sampled term")->capture_default_str()->check(CLI::PositiveNumber);
  add_format(laws);

  EnumerateArgs ea;
  auto* enumerate_cmd = app.add_subcommand("enumerate", "List all terms up to a size");
  enumerate_cmd->add_option("signature", ea.sig)->required();
  enumerate_cmd->add_option("context", ea.context)->required();
  enumerate_cmd->add_option("type", ea.type)->required();
  enumerate_cmd->add_option("--max-nodes", ea.max_nodes)->capture_default_str();
  enumerate_cmd->add_option("--max-type-nodes", ea.max_type_nodes)->capture_default_str();
  add_format(enumerate_cmd);

  std::string print_arg;
  auto* print = app.add_subcommand("print", "Print a file or catalog entry canonically");
  print->add_option("input", print_arg, "File or catalog name")->required();
  add_format(print);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "bindsig:-:" << e.what() << "\n";
    return input_error;
  }
  json_mode = format == "json";
  if (*max_steps) ra.normalize = true;

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (*validate) return cmd_validate(validate_file);
    if (*reduce) return cmd_reduce(ra);
    if (*translate) return cmd_translate(ta);
    if (*laws) return cmd_laws(la);
    if (*enumerate_cmd) return cmd_enumerate(ea);
    if (*print) return cmd_print(print_arg);
  } catch (const Failure& f) {
    for (const Diagnostic& d : f.diagnostics) std::cerr << d.str() << "\n";
    if (json_mode)
      std::cout << json{{"command", command}, {"ok", false}, {"diagnostics", diagnostics_json(f.diagnostics)}}.dump()
                << "\n";
  } catch (const std::exception& e) {
    std::cerr << "bindsig:-:" << e.what() << "\n";
    if (json_mode)
      std::cout << json{{"command", command},
                        {"ok", false},
                        {"diagnostics", json::array({{{"location", "bindsig"}, {"position", "-"}, {"reason", e.what()}}})}}
                       .dump()
                << "\n";
  }
  return input_error;
}
