#include "bindsig/subst.hpp"

namespace bindsig {

namespace {

std::size_t binder_count(const TwoSignature& sig, const Term& e, std::size_t j) {
  const Arity* a = sig.find_arity(e.name);
  if (a == nullptr || j >= a->args.size())
    throw Error("substitution over unknown constructor " + e.name);
  return a->args[j].binders.size();
}

// Applies `f` to the free variables of `e` under `depth` enclosing binders.
template <class F>
Term map_vars(const TwoSignature& sig, const Term& e, std::size_t depth, const F& f) {
  if (e.is_var()) return e.index < depth ? e : f(e.index - depth, depth);
  Term out;
  out.kind = Term::Kind::con;
  out.name = e.name;
  out.tvec = e.tvec;
  out.numeral = e.numeral;
  out.args.reserve(e.args.size());
  for (std::size_t j = 0; j < e.args.size(); ++j)
    out.args.push_back(map_vars(sig, e.args[j], depth + binder_count(sig, e, j), f));
  return out;
}

}  // namespace

Renaming weakening(const Context& source, const Context& prefix) {
  Renaming r{source, extend(source, prefix), {}};
  for (std::size_t i = 0; i < source.size(); ++i) r.map.push_back(i + prefix.size());
  return r;
}

Substitution identity_substitution(const Context& ctx) {
  Substitution s{ctx, ctx, {}};
  for (std::size_t i = 0; i < ctx.size(); ++i) s.map.push_back(Term::var(i));
  return s;
}

Substitution compose(const TwoSignature& sig, const Substitution& sigma,
                     const Substitution& tau) {
  Substitution out{sigma.source, tau.target, {}};
  out.map.reserve(sigma.map.size());
  for (const Term& t : sigma.map) out.map.push_back(subst(sig, t, tau));
  return out;
}

bool well_formed(const TwoSignature&, const Renaming& rho) {
  if (rho.map.size() != rho.source.size()) return false;
  for (std::size_t i = 0; i < rho.map.size(); ++i)
    if (rho.map[i] >= rho.target.size() || rho.target[rho.map[i]] != rho.source[i]) return false;
  return true;
}

bool well_formed(const TwoSignature& sig, const Substitution& sigma) {
  if (sigma.map.size() != sigma.source.size()) return false;
  for (std::size_t i = 0; i < sigma.map.size(); ++i) {
    auto t = try_typecheck(sig, sigma.target, sigma.map[i]);
    if (!t || *t != sigma.source[i]) return false;
  }
  return true;
}

Term shift(const TwoSignature& sig, const Term& e, std::size_t by, std::size_t cutoff) {
  if (by == 0) return e;
  return map_vars(sig, e, cutoff,
                  [by](std::size_t i, std::size_t depth) { return Term::var(i + depth + by); });
}

Term rename_with(const TwoSignature& sig, const Term& e,
                 const std::function<std::size_t(std::size_t)>& f) {
  return map_vars(sig, e, 0,
                  [&f](std::size_t i, std::size_t depth) { return Term::var(f(i) + depth); });
}

Term rename(const TwoSignature& sig, const Term& e, const Renaming& rho) {
  return rename_with(sig, e, [&rho](std::size_t i) {
    if (i >= rho.map.size()) throw Error("rename: variable outside the source context");
    return rho.map[i];
  });
}

Term subst_images(const TwoSignature& sig, const Term& e, const std::vector<Term>& images,
                  std::size_t tail_shift) {
  return map_vars(sig, e, 0, [&](std::size_t i, std::size_t depth) {
    if (i < images.size()) return shift(sig, images[i], depth);
    return Term::var(i - images.size() + tail_shift + depth);
  });
}

Term subst(const TwoSignature& sig, const Term& e, const Substitution& sigma) {
  return map_vars(sig, e, 0, [&](std::size_t i, std::size_t depth) {
    if (i >= sigma.map.size()) throw Error("subst: variable outside the source context");
    return shift(sig, sigma.map[i], depth);
  });
}

Term subst1(const TwoSignature& sig, const Term& body, const Term& repl) {
  return subst_images(sig, body, {repl}, 0);
}

std::optional<Term> rename_partial(
    const TwoSignature& sig, const Term& e,
    const std::function<std::optional<std::size_t>(std::size_t)>& f) {
  bool failed = false;
  Term out = map_vars(sig, e, 0, [&](std::size_t i, std::size_t depth) {
    auto j = f(i);
    if (!j) {
      failed = true;
      return Term::var(0);
    }
    return Term::var(*j + depth);
  });
  if (failed) return std::nullopt;
  return out;
}

}  // namespace bindsig
