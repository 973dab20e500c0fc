#include "bindsig/signature.hpp"

#include <algorithm>
#include <set>

namespace bindsig {

TemplateTerm TemplateTerm::bound(std::size_t i) {
  TemplateTerm t;
  t.kind = Kind::bound_var;
  t.index = i;
  return t;
}

TemplateTerm TemplateTerm::con(std::string name, std::vector<TypeTerm> type_args,
                               std::vector<TemplateTerm> args) {
  TemplateTerm t;
  t.kind = Kind::ctor;
  t.name = std::move(name);
  t.type_args = std::move(type_args);
  t.args = std::move(args);
  return t;
}

TemplateTerm TemplateTerm::numeral_con(std::string name, NumeralRef k) {
  TemplateTerm t = con(std::move(name));
  t.numeral = k;
  return t;
}

TemplateTerm TemplateTerm::metavar(std::size_t k, std::vector<TemplateTerm> inst) {
  TemplateTerm t;
  t.kind = Kind::meta;
  t.index = k;
  t.args = std::move(inst);
  return t;
}

TemplateTerm TemplateTerm::subst(TemplateTerm body, TypeTerm bound_type, TemplateTerm repl) {
  TemplateTerm t;
  t.kind = Kind::subst1;
  t.type_args = {std::move(bound_type)};
  t.args = {std::move(body), std::move(repl)};
  return t;
}

TemplateTerm TemplateTerm::iterate(NumeralRef count, TypeTerm acc_type, TemplateTerm body,
                                   TemplateTerm base) {
  TemplateTerm t;
  t.kind = Kind::iterate;
  t.numeral = count;
  t.type_args = {std::move(acc_type)};
  t.args = {std::move(body), std::move(base)};
  return t;
}

const Arity* TwoSignature::find_arity(std::string_view n) const {
  for (const Arity& a : terms)
    if (a.name == n) return &a;
  return nullptr;
}

const InequationTemplate* TwoSignature::find_rule(std::string_view n) const {
  for (const InequationTemplate& r : rules)
    if (r.name == n) return &r;
  return nullptr;
}

const Arity* TwoSignature::numeral_family() const {
  const Arity* found = nullptr;
  for (const Arity& a : terms) {
    if (!a.nat_indexed) continue;
    if (found != nullptr) return nullptr;
    found = &a;
  }
  return found;
}

namespace {

std::string child(const std::string& path, std::size_t i) {
  return path.empty() ? std::to_string(i) : path + "." + std::to_string(i);
}

std::string root_or(const std::string& path) { return path.empty() ? "-" : path; }

void check_numeral(const TemplateScope& scope, const std::optional<NumeralRef>& k,
                   const std::string& path) {
  if (k && k->scheme && !scope.allow_scheme)
    throw TemplateError(root_or(path), "scheme index n outside a scheme");
}

TypeTerm infer(const TwoSignature& sig, const TemplateScope& scope, const TemplateTerm& t,
               std::vector<TypeTerm>& locals, const std::string& path);

TypeTerm infer_under(const TwoSignature& sig, const TemplateScope& scope,
                     const TemplateTerm& t, std::vector<TypeTerm>& locals,
                     const std::vector<TypeTerm>& extra, const std::string& path) {
  // locals is stored newest-last so that extending is a push_back.
  for (auto it = extra.rbegin(); it != extra.rend(); ++it) locals.push_back(*it);
  TypeTerm r = infer(sig, scope, t, locals, path);
  locals.resize(locals.size() - extra.size());
  return r;
}

void check_type_arg(const TwoSignature& sig, const TemplateScope& scope, const TypeTerm& s,
                    const std::string& path) {
  if (auto why = check_type_term(sig.types, s, scope.degree))
    throw TemplateError(root_or(path), *why);
}

TypeTerm infer(const TwoSignature& sig, const TemplateScope& scope, const TemplateTerm& t,
               std::vector<TypeTerm>& locals, const std::string& path) {
  using K = TemplateTerm::Kind;
  switch (t.kind) {
    case K::bound_var:
      if (t.index >= locals.size())
        throw TemplateError(root_or(path), "unbound variable v" + std::to_string(t.index));
      return locals[locals.size() - 1 - t.index];

    case K::ctor: {
      const Arity* a = sig.find_arity(t.name);
      if (a == nullptr) throw TemplateError(root_or(path), "unknown constructor " + t.name);
      if (t.type_args.size() != a->degree)
        throw TemplateError(root_or(path), "degree mismatch: " + t.name + " expects " +
                                               std::to_string(a->degree) + " type arguments");
      for (const TypeTerm& s : t.type_args) check_type_arg(sig, scope, s, path);
      if (a->nat_indexed != t.numeral.has_value())
        throw TemplateError(root_or(path), a->nat_indexed
                                               ? "numeral index missing for " + t.name
                                               : "unexpected numeral index on " + t.name);
      check_numeral(scope, t.numeral, path);
      if (t.args.size() != a->args.size())
        throw TemplateError(root_or(path), "argument count mismatch: " + t.name + " expects " +
                                               std::to_string(a->args.size()));
      for (std::size_t j = 0; j < t.args.size(); ++j) {
        std::vector<TypeTerm> binders;
        for (const TypeTerm& b : a->args[j].binders)
          binders.push_back(substitute_metavars(b, t.type_args));
        TypeTerm expected = substitute_metavars(a->args[j].type, t.type_args);
        TypeTerm got = infer_under(sig, scope, t.args[j], locals, binders, child(path, j));
        if (got != expected)
          throw TemplateError(child(path, j), "type mismatch in argument " + std::to_string(j) +
                                                  " of " + t.name);
      }
      return substitute_metavars(a->result, t.type_args);
    }

    case K::meta: {
      if (t.index >= scope.metavars.size())
        throw TemplateError(root_or(path), "unknown metavariable " + std::to_string(t.index));
      const MetaVarDecl& m = scope.metavars[t.index];
      if (t.args.size() != m.binders.size())
        throw TemplateError(root_or(path), "metavariable instantiation length: " + m.name +
                                               " has " + std::to_string(m.binders.size()) +
                                               " binders, got " +
                                               std::to_string(t.args.size()));
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        TypeTerm got = infer(sig, scope, t.args[i], locals, child(path, i));
        if (got != m.binders[i])
          throw TemplateError(child(path, i), "type mismatch in instantiation of " + m.name);
      }
      return m.type;
    }

    case K::subst1: {
      if (t.type_args.size() != 1 || t.args.size() != 2)
        throw TemplateError(root_or(path), "malformed substitution node");
      check_type_arg(sig, scope, t.type_args[0], path);
      TypeTerm body = infer_under(sig, scope, t.args[0], locals, {t.type_args[0]}, child(path, 0));
      TypeTerm repl = infer(sig, scope, t.args[1], locals, child(path, 1));
      if (repl != t.type_args[0])
        throw TemplateError(child(path, 1), "substituted term has the wrong type");
      return body;
    }

    case K::iterate: {
      if (t.type_args.size() != 1 || t.args.size() != 2 || !t.numeral)
        throw TemplateError(root_or(path), "malformed iteration node");
      check_type_arg(sig, scope, t.type_args[0], path);
      check_numeral(scope, t.numeral, path);
      TypeTerm base = infer(sig, scope, t.args[1], locals, child(path, 1));
      if (base != t.type_args[0])
        throw TemplateError(child(path, 1), "iteration base has the wrong type");
      TypeTerm body = infer_under(sig, scope, t.args[0], locals, {t.type_args[0]}, child(path, 0));
      if (body != t.type_args[0])
        throw TemplateError(child(path, 0), "iteration step has the wrong type");
      return body;
    }
  }
  throw TemplateError(root_or(path), "unknown template node");
}

// Structural restrictions on left-hand sides. Collects metavariables, type
// variables fixed by constructor type arguments, and scheme use.
struct LhsFacts {
  std::set<std::size_t> metas;
  std::set<std::size_t> type_vars;
  bool uses_scheme = false;
};

void collect_type_vars(const TypeTerm& s, std::set<std::size_t>& out) {
  if (s.is_meta()) {
    out.insert(s.meta);
    return;
  }
  for (const TypeTerm& a : s.args) collect_type_vars(a, out);
}

void scan_lhs(const TemplateTerm& t, const std::string& path, LhsFacts& facts,
              std::vector<Diagnostic>& out, const std::string& rule) {
  using K = TemplateTerm::Kind;
  switch (t.kind) {
    case K::bound_var:
      return;
    case K::ctor:
      for (const TypeTerm& s : t.type_args) collect_type_vars(s, facts.type_vars);
      if (t.numeral && t.numeral->scheme) facts.uses_scheme = true;
      for (std::size_t j = 0; j < t.args.size(); ++j)
        scan_lhs(t.args[j], child(path, j), facts, out, rule);
      return;
    case K::meta: {
      facts.metas.insert(t.index);
      std::set<std::size_t> seen;
      for (const TemplateTerm& a : t.args) {
        if (a.kind != K::bound_var || !seen.insert(a.index).second) {
          out.push_back({rule, "lhs/" + root_or(path),
                         "non-pattern metavariable instantiation (need distinct bound variables)"});
          return;
        }
      }
      return;
    }
    case K::subst1:
    case K::iterate:
      out.push_back({rule, "lhs/" + root_or(path), "substitution or iteration in lhs"});
      return;
  }
}

void collect_metas(const TemplateTerm& t, std::set<std::size_t>& out) {
  if (t.kind == TemplateTerm::Kind::meta) out.insert(t.index);
  for (const TemplateTerm& a : t.args) collect_metas(a, out);
}

void validate_arity(const TwoSignature& sig, const Arity& a, std::vector<Diagnostic>& out) {
  auto check = [&](const TypeTerm& s, const std::string& pos) {
    if (auto why = check_type_term(sig.types, s, a.degree)) out.push_back({a.name, pos, *why});
  };
  for (std::size_t j = 0; j < a.args.size(); ++j) {
    for (std::size_t i = 0; i < a.args[j].binders.size(); ++i)
      check(a.args[j].binders[i], "arg " + std::to_string(j) + " binder " + std::to_string(i));
    check(a.args[j].type, "arg " + std::to_string(j));
  }
  check(a.result, "result");
  if (a.nat_indexed && (a.degree != 0 || !a.args.empty()))
    out.push_back({a.name, "family", "nat-indexed family must have degree 0 and no arguments"});
}

void validate_rule(const TwoSignature& sig, const InequationTemplate& r,
                   std::vector<Diagnostic>& out) {
  const std::size_t before = out.size();
  auto check = [&](const TypeTerm& s, const std::string& pos) {
    if (auto why = check_type_term(sig.types, s, r.degree)) out.push_back({r.name, pos, *why});
  };
  std::set<std::string> names;
  for (const MetaVarDecl& m : r.metavars) {
    if (!names.insert(m.name).second)
      out.push_back({r.name, "metavar " + m.name, "duplicate metavariable name"});
    for (std::size_t i = 0; i < m.binders.size(); ++i)
      check(m.binders[i], "metavar " + m.name + " binder " + std::to_string(i));
    check(m.type, "metavar " + m.name);
  }
  check(r.result_type, "result");
  if (out.size() != before) return;

  if (r.lhs.kind != TemplateTerm::Kind::ctor)
    out.push_back({r.name, "lhs", "lhs must be a constructor application"});
  LhsFacts facts;
  scan_lhs(r.lhs, "", facts, out, r.name);
  for (std::size_t k = 1; k <= r.degree; ++k)
    if (!facts.type_vars.contains(k))
      out.push_back({r.name, "lhs", "type variable " + std::to_string(k) +
                                        " not determined by lhs constructors"});
  if (r.nat_scheme && !facts.uses_scheme)
    out.push_back({r.name, "lhs", "scheme index n not bound by lhs"});
  std::set<std::size_t> rhs_metas;
  collect_metas(r.rhs, rhs_metas);
  for (std::size_t k : rhs_metas)
    if (!facts.metas.contains(k) && k < r.metavars.size())
      out.push_back({r.name, "rhs", "metavariable " + r.metavars[k].name + " unbound in lhs"});

  for (Side side : {Side::lhs, Side::rhs}) {
    const char* label = side == Side::lhs ? "lhs" : "rhs";
    try {
      TypeTerm got = check_template(sig, r, side);
      if (got != r.result_type)
        out.push_back({r.name, label, "type mismatch with declared result type"});
    } catch (const TemplateError& e) {
      out.push_back({r.name, std::string(label) + "/" + e.position(), e.what()});
    }
  }
}

}  // namespace

TypeTerm infer_template(const TwoSignature& sig, const TemplateScope& scope,
                        const TemplateTerm& t, const std::vector<TypeTerm>& locals) {
  std::vector<TypeTerm> stack(locals.rbegin(), locals.rend());
  return infer(sig, scope, t, stack, "");
}

TypeTerm check_template(const TwoSignature& sig, const InequationTemplate& rule, Side side) {
  TemplateScope scope{rule.degree, rule.metavars, rule.nat_scheme};
  return infer_template(sig, scope, side == Side::lhs ? rule.lhs : rule.rhs);
}

ValidationReport validate_signature(const TwoSignature& sig) {
  ValidationReport report;
  auto& out = report.diagnostics;

  std::set<std::string> type_names;
  bool has_nullary = false;
  for (const TypeConstructor& c : sig.types.constructors) {
    if (!type_names.insert(c.name).second)
      out.push_back({c.name, "types", "duplicate type constructor"});
    if (c.arity == 0) has_nullary = true;
  }
  if (!sig.terms.empty() && !has_nullary)
    out.push_back({sig.name.empty() ? "signature" : sig.name, "types",
                   "no nullary type constructor: the closed types are empty"});

  std::set<std::string> arity_names;
  for (const Arity& a : sig.terms) {
    if (!arity_names.insert(a.name).second)
      out.push_back({a.name, "terms", "duplicate arity name"});
    validate_arity(sig, a, out);
  }

  std::set<std::string> rule_names;
  for (const InequationTemplate& r : sig.rules) {
    if (!rule_names.insert(r.name).second)
      out.push_back({r.name, "rules", "duplicate rule name"});
    // A broken arity can make template checking itself fail.
    try {
      validate_rule(sig, r, out);
    } catch (const Error& e) {
      out.push_back({r.name, "rules", e.what()});
    }
  }
  return report;
}

}  // namespace bindsig
