#include "bindsig/laws.hpp"

#include <sstream>

#include "bindsig/dsl.hpp"

namespace bindsig {
namespace {

constexpr std::size_t kMaxListed = 5;

// Lifting of a substitution under the binders of argument j, built from
// weakening rather than through subst's own traversal.
Substitution lift(const TwoSignature& sig, const Substitution& sigma,
                  const std::vector<Type>& binders) {
  Substitution out{extend(sigma.source, binders), extend(sigma.target, binders), {}};
  for (std::size_t i = 0; i < binders.size(); ++i) out.map.push_back(Term::var(i));
  const Renaming w = weakening(sigma.target, binders);
  for (const Term& t : sigma.map) out.map.push_back(rename(sig, t, w));
  return out;
}

Renaming random_weakening(Sampler& s, const Context& ctx) {
  return weakening(ctx, s.context(s.below(3)));
}

std::string describe(const Context& ctx, const Term& e) {
  return print_context(ctx) + " " + print_term(e);
}

}  // namespace

void LawResult::fail(std::string why) {
  ++failed;
  if (failures.size() < kMaxListed) failures.push_back(std::move(why));
}

void LawResult::unknown(std::string why) {
  ++inconclusive;
  if (failures.size() < kMaxListed) failures.push_back(std::move(why));
}

bool LawReport::ok() const {
  for (const LawResult& l : laws)
    if (!l.ok()) return false;
  return true;
}

const LawResult* LawReport::find(const std::string& name) const {
  for (const LawResult& l : laws)
    if (l.name == name) return &l;
  return nullptr;
}

LawReport run_language_laws(const TwoSignature& sig, const LawOptions& opts) {
  LawReport report{sig.name, {}, opts.seed, opts.samples, {}};
  LawResult left{"left_unit"}, right{"right_unit"}, assoc{"associativity"};
  LawResult morphism{"constructor_substitution"}, renaming{"rename_substitution"};
  LawResult subject{"subject_reduction"}, traces{"trace_validity"};
  LawResult monotone{"substitution_monotone"}, determinism{"normalize_deterministic"};

  SampleOptions so;
  so.max_size = opts.max_size;
  Sampler s(sig, opts.seed, so);
  for (std::size_t n = 0; n < opts.samples; ++n) {
    TypedTerm tt = s.typed_term();
    const Context& ctx = tt.ctx;
    const Term& e = tt.term;
    Substitution sigma = s.substitution(ctx);
    Substitution tau = s.substitution(sigma.target);

    for (std::size_t i = 0; i < ctx.size(); ++i) {
      if (subst(sig, Term::var(i), sigma) == sigma.map[i]) left.pass();
      else left.fail("var " + std::to_string(i) + " under " + describe(ctx, e));
    }
    if (subst(sig, e, identity_substitution(ctx)) == e) right.pass();
    else right.fail(describe(ctx, e));
    if (subst(sig, subst(sig, e, sigma), tau) == subst(sig, e, compose(sig, sigma, tau)))
      assoc.pass();
    else
      assoc.fail(describe(ctx, e));

    if (!e.is_var()) {
      const Arity& a = *sig.find_arity(e.name);
      Term expected = e;
      for (std::size_t j = 0; j < e.args.size(); ++j)
        expected.args[j] = subst(sig, e.args[j], lift(sig, sigma, binder_types(a, j, e.tvec)));
      if (subst(sig, e, sigma) == expected) morphism.pass();
      else morphism.fail(describe(ctx, e));
    }

    {
      Renaming rho = random_weakening(s, ctx);
      Substitution after = s.substitution(rho.target);
      Substitution through{ctx, after.target, {}};
      for (std::size_t i = 0; i < ctx.size(); ++i) through.map.push_back(after.map[rho.map[i]]);
      bool ok = subst(sig, rename(sig, e, rho), after) == subst(sig, e, through);
      Renaming rho2 = random_weakening(s, sigma.target);
      Substitution then{ctx, rho2.target, {}};
      for (const Term& t : sigma.map) then.map.push_back(rename(sig, t, rho2));
      ok = ok && rename(sig, subst(sig, e, sigma), rho2) == subst(sig, e, then);
      if (ok) renaming.pass();
      else renaming.fail(describe(ctx, e));
    }

    for (const auto& [pos, next] : step(sig, e, ctx)) {
      auto t = try_typecheck(sig, ctx, next);
      if (t && *t == tt.type) subject.pass();
      else subject.fail(describe(ctx, e) + " via " + pos.rule + " at " + render_path(pos.path));
    }

    Trace trace = s.trace(ctx, e, opts.trace_steps);
    if (auto why = validate_trace(sig, ctx, trace)) traces.fail(describe(ctx, e) + ": " + *why);
    else traces.pass();
    {
      auto moved = transport_trace(sig, trace, sigma);
      if (!moved) {
        monotone.fail(describe(ctx, e) + ": trace could not be transported");
      } else if (moved->steps.size() != trace.steps.size() ||
                 moved->start != subst(sig, e, sigma) ||
                 moved->last() != subst(sig, trace.last(), sigma)) {
        monotone.fail(describe(ctx, e) + ": transported trace has the wrong shape");
      } else if (auto why = validate_trace(sig, sigma.target, *moved)) {
        monotone.fail(describe(ctx, e) + ": " + *why);
      } else {
        monotone.pass();
      }
    }

    auto a = normalize(sig, e, ctx, 50), b = normalize(sig, e, ctx, 50);
    if (a.normal_form == b.normal_form && print_trace(a.trace) == print_trace(b.trace))
      determinism.pass();
    else
      determinism.fail(describe(ctx, e));
  }
  report.laws = {left,    right,    assoc,     morphism,   renaming,
                 subject, traces,   monotone,  determinism};
  return report;
}

LawReport run_representation_laws(const Representation& rep, const LawOptions& opts) {
  LawReport report{rep.source.name, rep.name, opts.seed, opts.samples, {}};
  LawResult check{"representation_check"};
  ValidationReport vr = check_representation(rep);
  for (const Diagnostic& d : vr.diagnostics) check.fail(d.str());
  if (vr.ok()) check.pass();
  report.laws.push_back(check);
  if (!vr.ok()) return report;

  LawResult satisfaction{"satisfaction"};
  for (std::size_t r = 0; r < rep.source.rules.size(); ++r) {
    const InequationTemplate& rule = rep.source.rules[r];
    InequationTemplate moved = transport_rule(rep, rule);
    InstanceOptions io;
    io.count = opts.instances;
    for (const RuleInstance& inst : sample_rule_instances(rep.target, moved, opts.seed + r, io)) {
      ReachResult res = check_satisfaction(rep, rule, inst.env, inst.ctx, opts.fuel);
      std::string where = rule.name + " over " + print_context(inst.ctx);
      if (res.yes()) satisfaction.pass();
      else if (res.exhausted) satisfaction.fail(where + ": rhs unreachable");
      else satisfaction.unknown(where + ": not reached within fuel");
    }
  }

  LawResult typing{"fold_typing"}, unit{"colax_unit"}, substitution{"colax_substitution"};
  LawResult faithful{"faithfulness"};
  SampleOptions so;
  so.max_size = opts.max_size;
  Sampler s(rep.source, opts.seed, so);
  std::vector<ColaxSample> samples;
  for (std::size_t n = 0; n < opts.samples; ++n) {
    TypedTerm tt = s.typed_term();
    Term image = fold(rep, tt.ctx, tt.term);
    auto t = try_typecheck(rep.target, retype_context(rep.types, tt.ctx), image);
    if (t && *t == rep.types(tt.type)) typing.pass();
    else typing.fail(describe(tt.ctx, tt.term));
    Substitution sigma = s.substitution(tt.ctx);
    samples.push_back({tt.ctx, tt.term, sigma});
  }
  for (std::size_t n = 0; n < samples.size(); ++n) {
    ColaxReport c = check_colax_laws(rep, {samples[n]}, opts.fuel);
    const std::string where = describe(samples[n].ctx, samples[n].term);
    for (std::size_t i = 0; i < c.unit_ok; ++i) unit.pass();
    for (std::size_t i = 0; i < c.unit_failed; ++i) unit.fail(where);
    if (c.subst_failed) substitution.fail(where);
    else substitution.pass();
    for (std::size_t i = 0; i < c.monotone_ok; ++i) faithful.pass();
    const std::string prefix = "sample 0: ";
    for (const std::string& f : c.failures)
      if (f.starts_with(prefix + "reduction"))
        faithful.fail(where + ": " + f.substr(prefix.size()));
  }
  report.laws.push_back(satisfaction);
  report.laws.push_back(typing);
  report.laws.push_back(unit);
  report.laws.push_back(substitution);
  report.laws.push_back(faithful);
  return report;
}

std::string format_report(const LawReport& report) {
  std::ostringstream out;
  out << "laws " << report.signature;
  if (!report.representation.empty()) out << " via " << report.representation;
  out << " seed " << report.seed << " samples " << report.samples << "\n";
  for (const LawResult& l : report.laws) {
    out << l.name << " passed=" << l.passed << " failed=" << l.failed
        << " inconclusive=" << l.inconclusive << (l.ok() ? " ok" : " FAIL") << "\n";
    for (const std::string& f : l.failures) out << "  " << f << "\n";
  }
  out << (report.ok() ? "all laws hold" : "law failures") << "\n";
  return out.str();
}

}  // namespace bindsig
