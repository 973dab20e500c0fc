#include "bindsig/term.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>

namespace bindsig {

Context extend(const Context& ctx, const std::vector<Type>& binders) {
  Context out;
  out.reserve(binders.size() + ctx.size());
  out.insert(out.end(), binders.begin(), binders.end());
  out.insert(out.end(), ctx.begin(), ctx.end());
  return out;
}

Term Term::var(std::size_t i) {
  Term t;
  t.kind = Kind::var;
  t.index = i;
  return t;
}

Term Term::con(std::string name, std::vector<Type> tvec, std::vector<Term> args) {
  Term t;
  t.kind = Kind::con;
  t.name = std::move(name);
  t.tvec = std::move(tvec);
  t.args = std::move(args);
  return t;
}

Term Term::num(std::string family, std::uint64_t k) {
  Term t = con(std::move(family));
  t.numeral = k;
  return t;
}

namespace {

void hash_mix(std::size_t& seed, std::size_t v) {
  seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

std::size_t hash_type(const Type& t) {
  std::size_t h = std::hash<std::string>{}(t.ctor);
  for (const Type& a : t.args) hash_mix(h, hash_type(a));
  return h;
}

}  // namespace

std::string render_path(const Path& path) {
  if (path.empty()) return "-";
  std::string s;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) s += '.';
    s += std::to_string(path[i]);
  }
  return s;
}

std::size_t TermHash::operator()(const Term& t) const noexcept {
  if (t.is_var()) return 0x51ed270b27u ^ (t.index * 0x100000001b3ULL);
  std::size_t h = std::hash<std::string>{}(t.name);
  for (const Type& s : t.tvec) hash_mix(h, hash_type(s));
  if (t.numeral) hash_mix(h, static_cast<std::size_t>(*t.numeral) + 17);
  for (const Term& a : t.args) hash_mix(h, (*this)(a));
  return h;
}

std::size_t term_size(const Term& t) {
  std::size_t n = 1 + static_cast<std::size_t>(t.numeral.value_or(0));
  for (const Term& a : t.args) n += term_size(a);
  return n;
}

TypeError::TypeError(std::vector<std::size_t> path, const std::string& reason)
    : Error("at " + render_path(path) + ": " + reason), path_(std::move(path)) {}

std::vector<Type> binder_types(const Arity& a, std::size_t j, const std::vector<Type>& tvec) {
  std::vector<Type> out;
  out.reserve(a.args[j].binders.size());
  for (const TypeTerm& b : a.args[j].binders) out.push_back(instantiate(b, tvec));
  return out;
}

namespace {

Type check(const TwoSignature& sig, const Context& ctx, const Term& e,
           std::vector<std::size_t>& path) {
  if (e.is_var()) {
    if (e.index >= ctx.size())
      throw TypeError(path, "unbound variable " + std::to_string(e.index));
    return ctx[e.index];
  }
  const Arity* a = sig.find_arity(e.name);
  if (a == nullptr) throw TypeError(path, "unknown constructor " + e.name);
  if (e.tvec.size() != a->degree)
    throw TypeError(path, "degree mismatch: " + e.name + " has degree " +
                              std::to_string(a->degree) + ", type vector has length " +
                              std::to_string(e.tvec.size()));
  for (const Type& s : e.tvec)
    if (auto why = check_type_term(sig.types, to_type_term(s), 0))
      throw TypeError(path, "ill-formed type in vector of " + e.name + ": " + *why);
  if (a->nat_indexed != e.numeral.has_value())
    throw TypeError(path, a->nat_indexed ? "numeral index missing for " + e.name
                                         : "unexpected numeral index on " + e.name);
  if (e.args.size() != a->args.size())
    throw TypeError(path, "argument count mismatch: " + e.name + " expects " +
                              std::to_string(a->args.size()));
  for (std::size_t j = 0; j < e.args.size(); ++j) {
    Context inner = extend(ctx, binder_types(*a, j, e.tvec));
    Type expected = instantiate(a->args[j].type, e.tvec);
    path.push_back(j);
    Type got = check(sig, inner, e.args[j], path);
    if (got != expected) throw TypeError(path, "type mismatch in argument of " + e.name);
    path.pop_back();
  }
  return instantiate(a->result, e.tvec);
}

}  // namespace

Type typecheck(const TwoSignature& sig, const Context& ctx, const Term& e) {
  std::vector<std::size_t> path;
  return check(sig, ctx, e, path);
}

std::optional<Type> try_typecheck(const TwoSignature& sig, const Context& ctx, const Term& e) {
  try {
    return typecheck(sig, ctx, e);
  } catch (const TypeError&) {
    return std::nullopt;
  }
}

Term mk_con(const TwoSignature& sig, const Context& ctx, std::string name,
            std::vector<Type> tvec, std::optional<std::uint64_t> numeral,
            std::vector<Term> args) {
  Term t = Term::con(std::move(name), std::move(tvec), std::move(args));
  t.numeral = numeral;
  typecheck(sig, ctx, t);
  return t;
}

std::vector<Type> type_universe(const TwoSignature& sig, const Context& ctx, const Type& goal,
                                const EnumerationOptions& opts) {
  std::vector<Type> all = closed_types(sig.types, opts.max_type_nodes);
  for (const Type& t : ctx) collect_subtypes(t, all);
  collect_subtypes(goal, all);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

namespace {

class Enumerator {
 public:
  Enumerator(const TwoSignature& sig, std::vector<Type> universe)
      : sig_(sig), universe_(std::move(universe)) {}

  // All well-typed terms of exactly `size` nodes.
  const std::vector<Term>& exact(const Context& ctx, const Type& t, std::size_t size) {
    auto key = std::make_tuple(ctx, t, size);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::vector<Term> out;
    if (size == 1)
      for (std::size_t i = 0; i < ctx.size(); ++i)
        if (ctx[i] == t) out.push_back(Term::var(i));
    for (const Arity& a : sig_.terms) produce(a, ctx, t, size, out);
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

 private:
  void produce(const Arity& a, const Context& ctx, const Type& t, std::size_t size,
               std::vector<Term>& out) {
    if (a.nat_indexed) {
      if (size >= 1 && instantiate(a.result, {}) == t)
        out.push_back(Term::num(a.name, static_cast<std::uint64_t>(size - 1)));
      return;
    }
    if (size < 1 + a.args.size()) return;
    if (a.args.empty() && size != 1) return;
    std::vector<std::optional<Type>> partial(a.degree);
    if (!match_type(a.result, t, partial)) return;
    std::vector<Type> tvec(a.degree);
    for_each_vector(partial, 0, tvec, [&] {
      if (a.args.empty()) {
        out.push_back(Term::con(a.name, tvec));
        return;
      }
      std::vector<std::size_t> sizes(a.args.size(), 1);
      split(a, ctx, tvec, sizes, 0, size - 1 - a.args.size(), out);
    });
  }

  template <class F>
  void for_each_vector(const std::vector<std::optional<Type>>& partial, std::size_t k,
                       std::vector<Type>& tvec, F&& fn) {
    if (k == partial.size()) {
      fn();
      return;
    }
    if (partial[k]) {
      if (!std::binary_search(universe_.begin(), universe_.end(), *partial[k])) return;
      tvec[k] = *partial[k];
      for_each_vector(partial, k + 1, tvec, fn);
      return;
    }
    for (const Type& u : universe_) {
      tvec[k] = u;
      for_each_vector(partial, k + 1, tvec, fn);
    }
  }

  void split(const Arity& a, const Context& ctx, const std::vector<Type>& tvec,
             std::vector<std::size_t>& sizes, std::size_t pos, std::size_t left,
             std::vector<Term>& out) {
    if (pos + 1 == sizes.size()) {
      sizes[pos] = 1 + left;
      std::vector<const std::vector<Term>*> choices;
      for (std::size_t j = 0; j < sizes.size(); ++j) {
        Context inner = extend(ctx, binder_types(a, j, tvec));
        const auto& c = exact(inner, instantiate(a.args[j].type, tvec), sizes[j]);
        if (c.empty()) return;
        choices.push_back(&c);
      }
      std::vector<Term> current;
      std::function<void(std::size_t)> product = [&](std::size_t j) {
        if (j == choices.size()) {
          out.push_back(Term::con(a.name, tvec, current));
          return;
        }
        for (const Term& c : *choices[j]) {
          current.push_back(c);
          product(j + 1);
          current.pop_back();
        }
      };
      product(0);
      return;
    }
    for (std::size_t k = 0; k <= left; ++k) {
      sizes[pos] = 1 + k;
      split(a, ctx, tvec, sizes, pos + 1, left - k, out);
    }
  }

  const TwoSignature& sig_;
  std::vector<Type> universe_;
  std::map<std::tuple<Context, Type, std::size_t>, std::vector<Term>> memo_;
};

}  // namespace

std::set<Term> enumerate(const TwoSignature& sig, const Context& ctx, const Type& t,
                         std::size_t max_nodes, const EnumerationOptions& opts) {
  Enumerator gen(sig, type_universe(sig, ctx, t, opts));
  std::set<Term> out;
  for (std::size_t n = 1; n <= max_nodes; ++n) {
    const auto& level = gen.exact(ctx, t, n);
    out.insert(level.begin(), level.end());
  }
  return out;
}

}  // namespace bindsig
