// Acceptance run: one PASS/FAIL line per criterion. Exit status is the
// number of failing criteria.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "bindsig/dsl.hpp"
#include "bindsig/laws.hpp"
#include "bindsig/langs.hpp"
#include "cli_matrix.hpp"
#include "oracles.hpp"

using namespace bindsig;

namespace {

// Pinned sizes, fuels and time limits.
constexpr std::size_t monad_samples = 1000;
constexpr double monad_seconds = 10.0;
constexpr std::size_t oracle_samples = 1000;
constexpr std::size_t normalize_steps = 50;
constexpr std::size_t trace_samples = 500;
constexpr std::size_t identity_samples = 500;
constexpr std::size_t envs_per_rule = 20;
constexpr std::size_t env_term_size = 8;
constexpr std::size_t search_fuel = 2000;
constexpr double satisfaction_seconds = 120.0;
constexpr std::size_t faithful_terms = 200;
constexpr std::size_t faithful_size = 12;
constexpr double faithful_seconds = 120.0;
constexpr std::uint64_t church_max = 10;
constexpr std::size_t enum_nodes = 5;
constexpr std::size_t matrix_size = 12;

const char* languages[] = {"TLC", "PCF", "ULC"};

struct Outcome {
  bool pass = true;
  std::ostringstream note;
  void require(bool ok, const std::string& why) {
    if (!ok && pass) note << " first failure: " << why << ";";
    pass = pass && ok;
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Term P(const std::string& text) { return parse_term(builtin_signature("PCF"), {}, text); }

Term num(std::uint64_t n) { return Term::num("num", n); }
Term papp(const Type& a, const Type& b, Term f, Term x) {
  return Term::con("app", {a, b}, {std::move(f), std::move(x)});
}
Term lam(Term b) { return Term::con("abs", {}, {std::move(b)}); }
Term uapp(Term f, Term x) { return Term::con("app", {}, {std::move(f), std::move(x)}); }
Term church(std::uint64_t n) {
  Term body = Term::var(0);
  for (std::uint64_t i = 0; i < n; ++i) body = uapp(Term::var(1), body);
  return lam(lam(body));
}

void monad_laws(Outcome& o) {
  auto t0 = Clock::now();
  std::size_t checked = 0;
  for (const char* name : languages) {
    const TwoSignature& sig = builtin_signature(name);
    Sampler s(sig, default_seed);
    for (std::size_t i = 0; i < monad_samples; ++i) {
      TypedTerm t = s.typed_term();
      Substitution f = s.substitution(t.ctx);
      Substitution g = s.substitution(f.target);
      for (std::size_t k = 0; k < t.ctx.size(); ++k)
        o.require(subst(sig, Term::var(k), f) == f.map[k], std::string(name) + " left unit");
      o.require(subst(sig, t.term, identity_substitution(t.ctx)) == t.term,
                std::string(name) + " right unit");
      o.require(subst(sig, subst(sig, t.term, f), g) == subst(sig, t.term, compose(sig, f, g)),
                std::string(name) + " associativity");
      ++checked;
    }
  }
  double secs = seconds_since(t0);
  o.require(secs < monad_seconds, "time limit");
  o.note << " " << checked << " samples, " << secs << " s (limit " << monad_seconds << " s)";
}

void oracle_agreement(Outcome& o) {
  std::size_t checked = 0;
  for (const char* name : languages) {
    const TwoSignature& sig = builtin_signature(name);
    Sampler s(sig, default_seed + 1);
    for (std::size_t i = 0; i < oracle_samples; ++i) {
      TypedTerm t = s.typed_term();
      Substitution f = s.substitution(t.ctx);
      o.require(subst(sig, t.term, f) == oracle::subst(sig, t.term, f),
                std::string(name) + " " + print_term(t.term));
      // constructors commute with substitution
      if (!t.term.is_var()) {
        Term rebuilt = t.term;
        const Arity& a = *sig.find_arity(t.term.name);
        for (std::size_t j = 0; j < rebuilt.args.size(); ++j) {
          std::size_t nb = a.args[j].binders.size();
          Context bs = binder_types(a, j, t.term.tvec);
          Substitution lifted{extend(t.ctx, bs), extend(f.target, bs), {}};
          for (std::size_t v = 0; v < nb; ++v) lifted.map.push_back(Term::var(v));
          for (const Term& img : f.map) lifted.map.push_back(shift(sig, img, nb));
          rebuilt.args[j] = oracle::subst(sig, t.term.args[j], lifted);
        }
        o.require(subst(sig, t.term, f) == rebuilt, std::string(name) + " constructor law");
      }
      ++checked;
    }
  }
  o.note << " " << checked << " samples";
}

void reduction_rules(Outcome& o) {
  const TwoSignature& pcf = builtin_signature("PCF");
  const TwoSignature& tlc = builtin_signature("TLC");
  const Type nat("Nat");
  const Type to_nat("=>", {nat, nat}), to_bool("=>", {nat, Type("Bool")});
  std::size_t cases = 0;
  auto expect = [&](const TwoSignature& sig, const Context& ctx, const Term& e, const Term& want,
                    const std::string& label) {
    NormalizeResult r = normalize(sig, e, ctx, normalize_steps);
    o.require(r.normal_form && r.result() == want, label + " gave " + print_term(r.result()));
    ++cases;
  };
  for (const Term& n : {num(5), P("(app succ (num 1))"), P("true")}) {
    Type t = *try_typecheck(pcf, {}, n);
    expect(pcf, {}, papp(t, t, Term::con("abs", {t, t}, {Term::var(0)}), n), n, "beta");
  }
  const Type iota("iota");
  expect(tlc, {iota}, parse_term(tlc, {iota}, "(app (abs (var 0)) (var 0))"), Term::var(0),
         "beta TLC");
  expect(pcf, {}, papp(nat, nat, Term::con("pred"), num(0)), num(0), "pred 0");
  for (std::uint64_t n = 0; n <= 10; ++n) {
    Term sn = papp(nat, nat, Term::con("succ"), num(n));
    expect(pcf, {}, papp(nat, nat, Term::con("pred"), sn), num(n), "pred succ " + std::to_string(n));
    expect(pcf, {}, papp(nat, Type("Bool"), Term::con("zero?"), sn), Term::con("false"),
           "zero? succ " + std::to_string(n));
  }
  expect(pcf, {}, papp(nat, Type("Bool"), Term::con("zero?"), num(0)), Term::con("true"),
         "zero? 0");
  for (const char* f : {"(abs {Nat,Nat} (var 0))", "succ", "(abs {Nat,Nat} (app succ (var 0)))"}) {
    Term fn = P(f);
    Term fix = Term::con("fix", {nat}, {fn});
    Term want = papp(nat, nat, fn, fix);
    bool found = false;
    for (const auto& [pos, next] : step(pcf, fix, {})) found = found || next == want;
    o.require(found, std::string("fix ") + f);
    ++cases;
  }
  o.note << " " << cases << " cases, step limit " << normalize_steps;
}

void transported_traces(Outcome& o) {
  std::size_t steps = 0, checked = 0;
  for (const char* name : languages) {
    const TwoSignature& sig = builtin_signature(name);
    Sampler s(sig, default_seed + 2);
    std::size_t per = trace_samples / 3 + (name == std::string("TLC") ? trace_samples % 3 : 0);
    for (std::size_t i = 0; i < per; ++i) {
      TypedTerm t = s.typed_term();
      Trace tr = s.trace(t.ctx, t.term, 4);
      Substitution f = s.substitution(t.ctx);
      auto moved = transport_trace(sig, tr, f);
      o.require(moved && !validate_trace(sig, f.target, *moved), std::string(name) + " trace");
      steps += tr.steps.size();
      ++checked;
    }
  }
  o.note << " " << checked << " traces, " << steps << " steps";
}

void initiality(Outcome& o) {
  for (const char* name : languages) {
    const TwoSignature& sig = builtin_signature(name);
    Representation id = identity_representation(sig);
    Sampler s(sig, default_seed + 3);
    for (std::size_t i = 0; i < identity_samples; ++i) {
      TypedTerm t = s.typed_term();
      o.require(fold(id, t.ctx, t.term) == t.term, std::string(name) + " " + print_term(t.term));
    }
  }
  o.note << " " << identity_samples << " terms per language";
}

void satisfaction(Outcome& o) {
  auto t0 = Clock::now();
  Representation rep = pcf_to_ulc();
  std::size_t yes = 0, inconclusive = 0, max_expanded = 0, min_envs = SIZE_MAX;
  InstanceOptions io;
  io.count = envs_per_rule;
  io.max_size = env_term_size;
  for (std::size_t r = 0; r < rep.source.rules.size(); ++r) {
    const InequationTemplate& rule = rep.source.rules[r];
    InequationTemplate moved = transport_rule(rep, rule);
    auto insts = sample_rule_instances(rep.target, moved, default_seed + r, io);
    min_envs = std::min(min_envs, insts.size());
    o.require(insts.size() >= envs_per_rule, rule.name + " has too few envs");
    for (const RuleInstance& inst : insts) {
      ReachResult res = check_satisfaction(rep, rule, inst.env, inst.ctx, search_fuel);
      if (res.yes()) {
        o.require(!validate_trace(rep.target, inst.ctx, *res.witness), rule.name + " witness");
        ++yes;
      } else {
        ++inconclusive;
      }
      max_expanded = std::max(max_expanded, res.expanded);
    }
  }
  double secs = seconds_since(t0);
  o.require(inconclusive == 0, "inconclusive results");
  o.require(secs < satisfaction_seconds, "time limit");
  o.note << " " << rep.source.rules.size() << " rules, >= " << min_envs << " envs each, " << yes
         << " yes, " << inconclusive << " inconclusive, max expanded " << max_expanded << ", "
         << secs << " s";
}

void faithfulness(Outcome& o) {
  auto t0 = Clock::now();
  Representation rep = pcf_to_ulc();
  const TwoSignature& pcf = rep.source;
  SampleOptions so;
  so.max_size = faithful_size;
  Sampler s(pcf, default_seed + 4, so);
  std::size_t steps = 0, failures = 0;
  for (std::size_t i = 0; i < faithful_terms; ++i) {
    TypedTerm t = s.typed_term(faithful_size, true);
    Term image = fold(rep, {}, t.term);
    for (const auto& [pos, next] : step(pcf, t.term, {})) {
      ReachResult r = reduces_to(rep.target, image, fold(rep, {}, next), {}, search_fuel);
      ++steps;
      if (!r.yes()) ++failures;
      o.require(r.yes(), print_term(t.term) + " at " + render_path(pos.path));
    }
  }
  double secs = seconds_since(t0);
  o.require(secs < faithful_seconds, "time limit");
  o.note << " " << faithful_terms << " terms, " << steps << " steps, " << failures
         << " failures, " << secs << " s";
}

void church_arithmetic(Outcome& o) {
  Representation rep = pcf_to_ulc();
  const Type nat("Nat");
  std::size_t max_expanded = 0;
  for (std::uint64_t n = 0; n <= church_max; ++n) {
    Term sn = papp(nat, nat, Term::con("succ"), num(n));
    Term psn = papp(nat, nat, Term::con("pred"), sn);
    ReachResult a = reduces_to(rep.target, fold(rep, {}, sn), church(n + 1), {}, search_fuel);
    ReachResult b = reduces_to(rep.target, fold(rep, {}, psn), church(n), {}, search_fuel);
    o.require(a.yes(), "succ " + std::to_string(n));
    o.require(b.yes(), "pred succ " + std::to_string(n));
    max_expanded = std::max({max_expanded, a.expanded, b.expanded});
  }
  o.note << " n = 0.." << church_max << ", max expanded " << max_expanded << " of "
         << search_fuel;
}

void enumeration(Outcome& o) {
  struct Case {
    const char* sig;
    const char* ctx;
    const char* type;
  };
  const Case cases[] = {
      {"TLC", "[]", "\"=>\"(iota,iota)"},
      {"TLC", "[iota]", "iota"},
      {"TLC", "[\"=>\"(iota,iota), iota]", "iota"},
      {"TLC", "[iota, iota]", "\"=>\"(iota,iota)"},
      {"PCF", "[]", "Nat"},
      {"PCF", "[]", "Bool"},
      {"PCF", "[Nat]", "\"=>\"(Nat,Nat)"},
      {"PCF", "[\"=>\"(Nat,Nat), Bool]", "Nat"},
  };
  std::size_t terms = 0;
  for (const Case& c : cases) {
    const TwoSignature& sig = builtin_signature(c.sig);
    Context ctx = parse_context(sig.types, c.ctx);
    Type t = parse_type(sig.types, c.type);
    for (std::size_t n = 1; n <= enum_nodes; ++n) {
      auto got = enumerate(sig, ctx, t, n);
      o.require(got == oracle::enumerate(sig, ctx, t, n),
                std::string(c.sig) + " " + c.ctx + " " + c.type + " n=" + std::to_string(n));
      if (n == enum_nodes) terms += got.size();
    }
  }
  o.note << " " << std::size(cases) << " goals, max_nodes 1.." << enum_nodes << ", " << terms
         << " terms at the largest size";
}

void cli_contract(Outcome& o) {
  const std::string data = BINDSIG_DATA, test_data = BINDSIG_TEST_DATA, bin = BINDSIG_CLI;
  auto resolve = [&](const std::string& ref, bool quoted) {
    return quoted ? parse_signature(cli::read_all(data + "/" + ref)) : builtin_signature(ref);
  };
  for (auto [file, name] : {std::pair{"tlc.sig", "TLC"}, {"pcf.sig", "PCF"}, {"ulc.sig", "ULC"}}) {
    std::string text = cli::read_all(data + "/" + file);
    o.require(print_signature(parse_signature(text)) == text, std::string(file) + " reprint");
    o.require(print_signature(builtin_signature(name)) == text, std::string(file) + " catalog");
  }
  std::string rep_text = cli::read_all(data + "/pcf_to_ulc.rep");
  ParsedRepresentation parsed = parse_representation(rep_text, resolve);
  o.require(print_representation(parsed) == rep_text, "pcf_to_ulc.rep reprint");
  o.require(parsed.rep == pcf_to_ulc(), "pcf_to_ulc.rep catalog");

  auto matrix = cli::exit_code_matrix(data, test_data);
  o.require(matrix.size() == matrix_size, "matrix size");
  std::size_t agreed = 0;
  for (const cli::Case& c : matrix) {
    cli::Outcome r = cli::run(bin, c.args);
    bool ok = r.code == c.code;
    agreed += ok;
    o.require(ok, std::string(c.label) + " exited " + std::to_string(r.code));
  }
  o.note << " 4 catalog files, " << agreed << "/" << matrix.size() << " exit codes";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Outcome&)>> criteria[] = {
      {"monad laws", monad_laws},
      {"constructor module morphism", oracle_agreement},
      {"reduction rules", reduction_rules},
      {"monotone substitution", transported_traces},
      {"initiality identity", initiality},
      {"PCF->ULC satisfaction", satisfaction},
      {"translation faithfulness", faithfulness},
      {"Church arithmetic", church_arithmetic},
      {"enumeration oracle", enumeration},
      {"CLI round trip and exit codes", cli_contract},
  };
  int failed = 0;
  int index = 1;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << index++ << " (" << name << "): " << (o.pass ? "PASS" : "FAIL")
              << " -" << o.note.str() << std::endl;
    failed += !o.pass;
  }
  std::cout << (failed == 0 ? "all criteria pass" : "some criteria fail") << std::endl;
  return failed;
}
