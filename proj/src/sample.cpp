#include "bindsig/sample.hpp"

#include <algorithm>

namespace bindsig {

Sampler::Sampler(const TwoSignature& sig, std::uint64_t seed, SampleOptions opts)
    : sig_(sig), opts_(opts), rng_(seed), types_(closed_types(sig.types, opts.max_type_nodes)) {
  if (types_.empty()) throw Error("sampler: the type signature has no closed types");
}

std::size_t Sampler::below(std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_);
}

Type Sampler::type() { return types_[below(types_.size())]; }

Context Sampler::context(std::size_t length) {
  Context ctx;
  for (std::size_t i = 0; i < length; ++i) ctx.push_back(type());
  return ctx;
}

Context Sampler::context() { return context(below(opts_.max_context + 1)); }

std::optional<Term> Sampler::term(const Context& ctx, const Type& t, std::size_t max_size) {
  std::vector<Type> pool = types_;
  for (const Type& c : ctx) collect_subtypes(c, pool);
  collect_subtypes(t, pool);
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  for (std::size_t i = 0; i < 8; ++i)
    if (auto e = gen(ctx, t, max_size, pool)) return e;
  return std::nullopt;
}

std::optional<Term> Sampler::gen(const Context& ctx, const Type& t, std::size_t budget,
                                 std::vector<Type>& pool) {
  if (budget == 0) return std::nullopt;
  struct Option {
    std::optional<std::size_t> var;
    const Arity* arity = nullptr;
    std::vector<std::optional<Type>> assignment;
  };
  std::vector<Option> options;
  for (std::size_t i = 0; i < ctx.size(); ++i)
    if (ctx[i] == t) options.push_back({i, nullptr, {}});
  for (const Arity& a : sig_.terms) {
    if (1 + a.args.size() > budget) continue;
    std::vector<std::optional<Type>> assign(a.degree);
    if (match_type(a.result, t, assign)) options.push_back({std::nullopt, &a, std::move(assign)});
  }
  if (options.empty()) return std::nullopt;

  for (int tries = 0; tries < 4; ++tries) {
    Option& o = options[below(options.size())];
    if (o.var) return Term::var(*o.var);
    const Arity& a = *o.arity;
    Term out;
    out.kind = Term::Kind::con;
    out.name = a.name;
    for (const auto& slot : o.assignment) out.tvec.push_back(slot ? *slot : pool[below(pool.size())]);
    std::size_t remaining = budget - 1;
    if (a.nat_indexed) {
      std::uint64_t k = below(std::min(opts_.max_numeral, remaining) + 1);
      out.numeral = k;
      return out;
    }
    bool ok = true;
    for (std::size_t j = 0; j < a.args.size() && ok; ++j) {
      const std::size_t reserve = a.args.size() - j - 1;
      Context inner = extend(ctx, binder_types(a, j, out.tvec));
      auto sub = gen(inner, instantiate(a.args[j].type, out.tvec), remaining - reserve, pool);
      if (!sub) {
        ok = false;
        break;
      }
      remaining -= term_size(*sub);
      out.args.push_back(std::move(*sub));
    }
    if (ok) return out;
  }
  return std::nullopt;
}

TypedTerm Sampler::typed_term(bool closed) { return typed_term(opts_.max_size, closed); }

TypedTerm Sampler::typed_term(std::size_t max_size, bool closed) {
  for (std::size_t i = 0; i < opts_.attempts; ++i) {
    Context ctx = closed ? Context{} : context();
    Type t = type();
    if (auto e = term(ctx, t, max_size)) return {std::move(ctx), std::move(t), std::move(*e)};
  }
  throw Error("sampler: no well-typed term found for " + sig_.name);
}

Substitution Sampler::substitution(const Context& source, std::size_t max_size) {
  for (std::size_t i = 0; i < opts_.attempts; ++i) {
    Context target = context();
    // Half of the time the target extends the source, so every slot is
    // inhabited by at least a variable.
    if (below(2) == 0) target.insert(target.end(), source.begin(), source.end());
    Substitution s{source, target, {}};
    bool ok = true;
    for (const Type& t : source) {
      auto e = term(target, t, max_size);
      if (!e) {
        ok = false;
        break;
      }
      s.map.push_back(std::move(*e));
    }
    if (ok) return s;
  }
  throw Error("sampler: no substitution found for " + sig_.name);
}

Substitution Sampler::substitution(const Context& source, const Context& target,
                                   std::size_t max_size) {
  for (std::size_t i = 0; i < opts_.attempts; ++i) {
    Substitution s{source, target, {}};
    bool ok = true;
    for (const Type& t : source) {
      auto e = term(target, t, max_size);
      if (!e) {
        ok = false;
        break;
      }
      s.map.push_back(std::move(*e));
    }
    if (ok) return s;
  }
  throw Error("sampler: no substitution into the given context for " + sig_.name);
}

Trace Sampler::trace(const Context& ctx, const Term& e, std::size_t max_steps) {
  Trace t{e, {}};
  for (std::size_t i = 0; i < max_steps; ++i) {
    auto next = step(sig_, t.last(), ctx);
    if (next.empty()) break;
    auto& [pos, result] = next[below(next.size())];
    t.steps.push_back({std::move(pos), std::move(result)});
  }
  return t;
}

std::vector<RuleInstance> sample_rule_instances(const TwoSignature& sig,
                                                const InequationTemplate& rule,
                                                std::uint64_t seed,
                                                const InstanceOptions& opts) {
  std::mt19937_64 rng(seed);
  auto below = [&](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  const std::vector<Type> types = closed_types(sig.types, opts.max_type_nodes);
  std::map<std::pair<Context, Type>, std::vector<Term>> pools;
  auto pool = [&](const Context& ctx, const Type& t) -> const std::vector<Term>& {
    auto key = std::make_pair(ctx, t);
    auto it = pools.find(key);
    if (it == pools.end()) {
      auto found = enumerate(sig, ctx, t, opts.max_size, {opts.max_type_nodes});
      it = pools.emplace(key, std::vector<Term>(found.begin(), found.end())).first;
    }
    return it->second;
  };

  std::vector<RuleInstance> out;
  const std::size_t rounds = opts.count * 20;
  for (std::size_t r = 0; r < rounds && out.size() < opts.count; ++r) {
    RuleInstance inst;
    // Context lengths grow with the round so small domains still yield
    // distinct instances.
    const std::size_t warmup = opts.count * 4;
    const std::size_t length =
        r < warmup ? r % (opts.max_context + 1) : opts.max_context + (r - warmup) / 4;
    for (std::size_t i = 0; i < length; ++i) inst.ctx.push_back(types[below(types.size())]);
    for (std::size_t k = 0; k < rule.degree; ++k) inst.env.tvec.push_back(types[below(types.size())]);
    if (rule.nat_scheme) inst.env.numeral = below(opts.max_numeral + 1);
    bool ok = true;
    for (std::size_t k = 0; k < rule.metavars.size() && ok; ++k) {
      const auto& candidates = pool(meta_context(rule, k, inst.env.tvec, inst.ctx),
                                    meta_type(rule, k, inst.env.tvec));
      if (candidates.empty()) {
        ok = false;
        break;
      }
      inst.env.metas.push_back(candidates[below(candidates.size())]);
    }
    if (!ok) continue;
    if (std::find(out.begin(), out.end(), inst) != out.end()) continue;
    out.push_back(std::move(inst));
  }
  return out;
}

}  // namespace bindsig
