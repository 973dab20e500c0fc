#include "bindsig/rewrite.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

namespace bindsig {

namespace {

std::uint64_t resolve_numeral(const NumeralRef& k, const MatchEnv& env) {
  if (!k.scheme) return k.value;
  if (!env.numeral) throw Error("instantiate_template: scheme index without a numeral");
  return *env.numeral;
}

std::size_t binder_count(const TwoSignature& sig, const Term& e, std::size_t j) {
  const Arity* a = sig.find_arity(e.name);
  if (a == nullptr || j >= a->args.size()) throw Error("unknown constructor " + e.name);
  return a->args[j].binders.size();
}

Term inst(const TwoSignature& sig, const TemplateTerm& t, const MatchEnv& env,
          std::size_t depth) {
  using K = TemplateTerm::Kind;
  switch (t.kind) {
    case K::bound_var:
      return Term::var(t.index);
    case K::ctor: {
      const Arity* a = sig.find_arity(t.name);
      if (a == nullptr) throw Error("instantiate_template: unknown constructor " + t.name);
      Term out = Term::con(t.name);
      out.tvec.reserve(t.type_args.size());
      for (const TypeTerm& s : t.type_args) out.tvec.push_back(instantiate(s, env.tvec));
      if (t.numeral) out.numeral = resolve_numeral(*t.numeral, env);
      out.args.reserve(t.args.size());
      for (std::size_t j = 0; j < t.args.size(); ++j)
        out.args.push_back(inst(sig, t.args[j], env, depth + a->args[j].binders.size()));
      return out;
    }
    case K::meta: {
      if (t.index >= env.metas.size())
        throw Error("instantiate_template: metavariable without a value");
      std::vector<Term> images;
      images.reserve(t.args.size());
      for (const TemplateTerm& a : t.args) images.push_back(inst(sig, a, env, depth));
      return subst_images(sig, env.metas[t.index], images, depth);
    }
    case K::subst1:
      return subst1(sig, inst(sig, t.args[0], env, depth + 1), inst(sig, t.args[1], env, depth));
    case K::iterate: {
      std::uint64_t count = resolve_numeral(*t.numeral, env);
      Term body = inst(sig, t.args[0], env, depth + 1);
      Term acc = inst(sig, t.args[1], env, depth);
      for (std::uint64_t i = 0; i < count; ++i) acc = subst1(sig, body, acc);
      return acc;
    }
  }
  throw Error("instantiate_template: unknown template node");
}

struct PartialEnv {
  std::vector<std::optional<Type>> tvec;
  std::optional<std::uint64_t> numeral;
  std::vector<std::optional<Term>> metas;
};

bool match(const TwoSignature& sig, const InequationTemplate& rule, const TemplateTerm& t,
           const Term& e, std::size_t depth, PartialEnv& env) {
  using K = TemplateTerm::Kind;
  switch (t.kind) {
    case K::bound_var:
      return e.is_var() && e.index == t.index;
    case K::ctor: {
      if (e.is_var() || e.name != t.name || e.args.size() != t.args.size() ||
          e.tvec.size() != t.type_args.size())
        return false;
      if (t.numeral.has_value() != e.numeral.has_value()) return false;
      if (t.numeral) {
        if (!t.numeral->scheme) {
          if (t.numeral->value != *e.numeral) return false;
        } else if (env.numeral) {
          if (*env.numeral != *e.numeral) return false;
        } else {
          env.numeral = e.numeral;
        }
      }
      for (std::size_t i = 0; i < t.type_args.size(); ++i)
        if (!match_type(t.type_args[i], e.tvec[i], env.tvec)) return false;
      for (std::size_t j = 0; j < t.args.size(); ++j)
        if (!match(sig, rule, t.args[j], e.args[j], depth + binder_count(sig, e, j), env))
          return false;
      return true;
    }
    case K::meta: {
      const std::size_t b = t.args.size();
      auto value = rename_partial(sig, e, [&](std::size_t i) -> std::optional<std::size_t> {
        if (i >= depth) return b + (i - depth);
        for (std::size_t p = 0; p < b; ++p)
          if (t.args[p].kind == K::bound_var && t.args[p].index == i) return p;
        return std::nullopt;
      });
      if (!value) return false;
      auto& slot = env.metas[t.index];
      if (slot) return *slot == *value;
      slot = std::move(*value);
      return true;
    }
    case K::subst1:
    case K::iterate:
      return false;
  }
  return false;
}

std::optional<MatchEnv> match_root(const TwoSignature& sig, const InequationTemplate& rule,
                                   const Term& e) {
  if (!e.is_var() && rule.lhs.kind == TemplateTerm::Kind::ctor && e.name != rule.lhs.name)
    return std::nullopt;
  PartialEnv partial{std::vector<std::optional<Type>>(rule.degree), std::nullopt,
                     std::vector<std::optional<Term>>(rule.metavars.size())};
  if (!match(sig, rule, rule.lhs, e, 0, partial)) return std::nullopt;
  MatchEnv env;
  for (auto& s : partial.tvec) {
    if (!s) return std::nullopt;
    env.tvec.push_back(std::move(*s));
  }
  for (auto& m : partial.metas) {
    if (!m) return std::nullopt;
    env.metas.push_back(std::move(*m));
  }
  env.numeral = partial.numeral;
  if (rule.nat_scheme && !env.numeral) return std::nullopt;
  return env;
}

// Pre-order walk over all subterm positions.
template <class F>
bool walk(const TwoSignature& sig, const Term& e, Path& path, std::size_t depth, F& visit) {
  if (visit(e, path, depth)) return true;
  if (e.is_var()) return false;
  for (std::size_t j = 0; j < e.args.size(); ++j) {
    path.push_back(j);
    bool stop = walk(sig, e.args[j], path, depth + binder_count(sig, e, j), visit);
    path.pop_back();
    if (stop) return true;
  }
  return false;
}

std::size_t binders_along(const TwoSignature& sig, const Term& e, const Path& path) {
  std::size_t n = 0;
  const Term* cur = &e;
  for (std::size_t j : path) {
    if (cur->is_var() || j >= cur->args.size()) throw Error("path does not address a subterm");
    n += binder_count(sig, *cur, j);
    cur = &cur->args[j];
  }
  return n;
}

bool valid_path(const Term& e, const Path& path) {
  const Term* cur = &e;
  for (std::size_t j : path) {
    if (cur->is_var() || j >= cur->args.size()) return false;
    cur = &cur->args[j];
  }
  return true;
}

}  // namespace

Term instantiate_template(const TwoSignature& sig, const TemplateTerm& t, const MatchEnv& env) {
  return inst(sig, t, env, 0);
}

Term instantiate_template(const TwoSignature& sig, const InequationTemplate& rule,
                          const MatchEnv& env, Side side, const Context&) {
  return inst(sig, side == Side::lhs ? rule.lhs : rule.rhs, env, 0);
}

Context meta_context(const InequationTemplate& rule, std::size_t k,
                     const std::vector<Type>& tvec, const Context& ctx) {
  std::vector<Type> binders;
  for (const TypeTerm& b : rule.metavars[k].binders) binders.push_back(instantiate(b, tvec));
  return extend(ctx, binders);
}

Type meta_type(const InequationTemplate& rule, std::size_t k, const std::vector<Type>& tvec) {
  return instantiate(rule.metavars[k].type, tvec);
}

std::vector<MatchEnv> match_rule(const TwoSignature& sig, const InequationTemplate& rule,
                                 const Term& e, const Context&) {
  std::vector<MatchEnv> out;
  if (auto env = match_root(sig, rule, e)) out.push_back(std::move(*env));
  return out;
}

const Term& subterm_at(const Term& e, const Path& path) {
  const Term* cur = &e;
  for (std::size_t j : path) {
    if (cur->is_var() || j >= cur->args.size()) throw Error("path does not address a subterm");
    cur = &cur->args[j];
  }
  return *cur;
}

Term replace_at(const Term& e, const Path& path, Term replacement) {
  if (path.empty()) return replacement;
  Term out = e;
  Term* cur = &out;
  for (std::size_t j : path) {
    if (cur->is_var() || j >= cur->args.size()) throw Error("path does not address a subterm");
    cur = &cur->args[j];
  }
  *cur = std::move(replacement);
  return out;
}

Context context_at(const TwoSignature& sig, const Context& ctx, const Term& e,
                   const Path& path) {
  Context cur_ctx = ctx;
  const Term* cur = &e;
  for (std::size_t j : path) {
    if (cur->is_var() || j >= cur->args.size()) throw Error("path does not address a subterm");
    const Arity* a = sig.find_arity(cur->name);
    if (a == nullptr) throw Error("unknown constructor " + cur->name);
    cur_ctx = extend(cur_ctx, binder_types(*a, j, cur->tvec));
    cur = &cur->args[j];
  }
  return cur_ctx;
}

std::vector<std::pair<RedexPosition, Term>> step(const TwoSignature& sig, const Term& e,
                                                 const Context&) {
  std::vector<std::pair<RedexPosition, Term>> out;
  Path path;
  auto visit = [&](const Term& sub, const Path& p, std::size_t) {
    if (sub.is_var()) return false;
    for (const InequationTemplate& rule : sig.rules) {
      auto env = match_root(sig, rule, sub);
      if (!env) continue;
      Term rhs = inst(sig, rule.rhs, *env, 0);
      out.emplace_back(RedexPosition{p, rule.name, std::move(*env)},
                       replace_at(e, p, std::move(rhs)));
    }
    return false;
  };
  walk(sig, e, path, 0, visit);
  return out;
}

std::optional<std::pair<RedexPosition, Term>> first_step(const TwoSignature& sig,
                                                          const Term& e, const Context&) {
  std::optional<std::pair<RedexPosition, Term>> out;
  Path path;
  auto visit = [&](const Term& sub, const Path& p, std::size_t) {
    if (sub.is_var()) return false;
    for (const InequationTemplate& rule : sig.rules) {
      auto env = match_root(sig, rule, sub);
      if (!env) continue;
      Term rhs = inst(sig, rule.rhs, *env, 0);
      out.emplace(RedexPosition{p, rule.name, std::move(*env)}, replace_at(e, p, std::move(rhs)));
      return true;
    }
    return false;
  };
  walk(sig, e, path, 0, visit);
  return out;
}

namespace {

class Budget {
 public:
  explicit Budget(std::size_t fuel) : fuel_(fuel) {}
  bool take() {
    if (spent_ >= fuel_) return false;
    ++spent_;
    return true;
  }
  bool empty() const { return spent_ >= fuel_; }
  std::size_t spent() const { return spent_; }

 private:
  std::size_t fuel_;
  std::size_t spent_ = 0;
};

// Breadth-first search from `a`, optionally interleaved with the
// leftmost-outermost path; at most `limit` expansions.
std::optional<Trace> root_search(const TwoSignature& sig, const Term& a, const Term& b,
                                 const Context& ctx, std::size_t limit, Budget& budget,
                                 bool interleave, bool* exhausted) {
  if (a == b) return Trace{a, {}};
  struct Node {
    const Term* term;
    std::size_t parent;
    std::optional<RedexPosition> via;
  };
  std::unordered_map<Term, std::size_t, TermHash> seen;
  std::vector<Node> nodes;
  auto [root, _] = seen.emplace(a, 0);
  nodes.push_back({&root->first, 0, std::nullopt});

  auto witness = [&](std::size_t idx) {
    std::vector<TraceStep> rev;
    while (nodes[idx].via) {
      rev.push_back({*nodes[idx].via, *nodes[idx].term});
      idx = nodes[idx].parent;
    }
    return Trace{a, {rev.rbegin(), rev.rend()}};
  };

  std::deque<std::size_t> frontier{0};
  Trace path{a, {}};
  bool path_alive = interleave;
  std::size_t used = 0;
  while ((!frontier.empty() || path_alive) && used < limit) {
    if (!frontier.empty()) {
      if (!budget.take()) break;
      ++used;
      std::size_t idx = frontier.front();
      frontier.pop_front();
      for (auto& [pos, next] : step(sig, *nodes[idx].term, ctx)) {
        auto [it, fresh] = seen.emplace(std::move(next), nodes.size());
        if (!fresh) continue;
        nodes.push_back({&it->first, idx, std::move(pos)});
        if (it->first == b) return witness(nodes.size() - 1);
        frontier.push_back(nodes.size() - 1);
      }
    }
    if (path_alive && used < limit) {
      if (!budget.take()) break;
      ++used;
      auto next = first_step(sig, path.last(), ctx);
      if (!next) {
        path_alive = false;
      } else {
        path.steps.push_back({std::move(next->first), std::move(next->second)});
        if (path.last() == b) return path;
      }
    }
  }
  if (exhausted != nullptr) *exhausted = frontier.empty();
  return std::nullopt;
}

// Reduces matching heads argument by argument before searching at the root.
std::optional<Trace> congruence_search(const TwoSignature& sig, const Term& a, const Term& b,
                                       const Context& ctx, std::size_t limit, Budget& budget,
                                       bool* exhausted) {
  if (a == b) return Trace{a, {}};
  const Arity* ar = a.is_var() ? nullptr : sig.find_arity(a.name);
  if (ar != nullptr && !b.is_var() && a.name == b.name && a.tvec == b.tvec &&
      a.numeral == b.numeral && a.args.size() == b.args.size()) {
    Trace out{a, {}};
    Term cur = a;
    bool ok = true;
    for (std::size_t j = 0; ok && j < a.args.size(); ++j) {
      if (a.args[j] == b.args[j]) continue;
      auto sub = congruence_search(sig, a.args[j], b.args[j],
                                   extend(ctx, binder_types(*ar, j, a.tvec)), limit, budget,
                                   nullptr);
      if (!sub) {
        ok = false;
        break;
      }
      for (TraceStep& s : sub->steps) {
        s.position.path.insert(s.position.path.begin(), j);
        cur.args[j] = std::move(s.result);
        out.steps.push_back({std::move(s.position), cur});
      }
    }
    if (ok) return out;
  }
  return root_search(sig, a, b, ctx, limit, budget, true, exhausted);
}

}  // namespace

ReachResult reduces_to(const TwoSignature& sig, const Term& a, const Term& b,
                       const Context& ctx, std::size_t fuel, Search strategy) {
  if (fuel == 0) throw Error("reduces_to: fuel must be at least 1");
  ReachResult result;
  Budget budget(fuel);
  std::optional<Trace> found;
  if (strategy == Search::breadth_first) {
    found = root_search(sig, a, b, ctx, fuel, budget, false, &result.exhausted);
  } else {
    for (std::size_t limit = 16;; limit *= 2) {
      bool exhausted = false;
      found = congruence_search(sig, a, b, ctx, std::min(limit, fuel), budget, &exhausted);
      if (found || exhausted || budget.empty() || limit >= fuel) {
        result.exhausted = !found && exhausted;
        break;
      }
    }
  }
  result.expanded = budget.spent();
  if (found) {
    result.verdict = Reachability::yes;
    result.witness = std::move(found);
  }
  return result;
}

NormalizeResult normalize(const TwoSignature& sig, const Term& e, const Context& ctx,
                          std::size_t max_steps) {
  NormalizeResult out;
  out.trace.start = e;
  for (std::size_t i = 0;; ++i) {
    auto next = first_step(sig, out.trace.last(), ctx);
    if (!next) {
      out.normal_form = true;
      return out;
    }
    if (i == max_steps) return out;
    out.trace.steps.push_back({std::move(next->first), std::move(next->second)});
  }
}

std::optional<std::string> validate_trace(const TwoSignature& sig, const Context& ctx,
                                          const Trace& trace) {
  const Term* cur = &trace.start;
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const TraceStep& s = trace.steps[i];
    const std::string where = "step " + std::to_string(i) + ": ";
    if (!valid_path(*cur, s.position.path)) return where + "path does not address a subterm";
    const InequationTemplate* rule = sig.find_rule(s.position.rule);
    if (rule == nullptr) return where + "unknown rule " + s.position.rule;
    const Term& sub = subterm_at(*cur, s.position.path);
    Context local = context_at(sig, ctx, *cur, s.position.path);
    bool found = false;
    for (const MatchEnv& env : match_rule(sig, *rule, sub, local)) {
      if (env != s.position.env) continue;
      Term rhs = instantiate_template(sig, *rule, env, Side::rhs, local);
      if (replace_at(*cur, s.position.path, std::move(rhs)) == s.result) found = true;
    }
    if (!found) return where + "recorded result is not a reduct of rule " + rule->name;
    cur = &s.result;
  }
  return std::nullopt;
}

std::optional<Trace> transport_trace(const TwoSignature& sig, const Trace& trace,
                                     const Substitution& sigma) {
  Trace out;
  out.start = subst(sig, trace.start, sigma);
  Term cur = out.start;
  for (const TraceStep& s : trace.steps) {
    const InequationTemplate* rule = sig.find_rule(s.position.rule);
    if (rule == nullptr || !valid_path(cur, s.position.path)) return std::nullopt;
    const std::size_t depth = binders_along(sig, cur, s.position.path);
    MatchEnv env = s.position.env;
    for (std::size_t k = 0; k < env.metas.size(); ++k) {
      const std::size_t lift = rule->metavars[k].binders.size() + depth;
      std::vector<Term> images;
      images.reserve(lift + sigma.map.size());
      for (std::size_t i = 0; i < lift; ++i) images.push_back(Term::var(i));
      for (const Term& t : sigma.map) images.push_back(shift(sig, t, lift));
      env.metas[k] = subst_images(sig, env.metas[k], images, 0);
    }
    Term rhs = instantiate_template(sig, rule->rhs, env);
    cur = replace_at(cur, s.position.path, std::move(rhs));
    out.steps.push_back({RedexPosition{s.position.path, s.position.rule, std::move(env)}, cur});
  }
  return out;
}

}  // namespace bindsig
