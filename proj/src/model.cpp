#include "bindsig/model.hpp"

#include <set>

namespace bindsig {

Type TypeMap::operator()(const Type& t) const {
  auto it = algebra.find(t.ctor);
  if (it == algebra.end()) throw Error("type map: no image for constructor " + t.ctor);
  std::vector<Type> args;
  args.reserve(t.args.size());
  for (const Type& a : t.args) args.push_back((*this)(a));
  return instantiate(it->second, args);
}

TypeTerm TypeMap::transport(const TypeTerm& s) const {
  if (s.is_meta()) return s;
  auto it = algebra.find(s.ctor);
  if (it == algebra.end()) throw Error("type map: no image for constructor " + s.ctor);
  std::vector<TypeTerm> args;
  args.reserve(s.args.size());
  for (const TypeTerm& a : s.args) args.push_back(transport(a));
  return substitute_metavars(it->second, args);
}

const ArityImage* Representation::find_image(std::string_view arity) const {
  for (const ArityImage& i : images)
    if (i.arity == arity) return &i;
  return nullptr;
}

TemplateScope Representation::image_scope(const Arity& a, const ArityImage* image) const {
  TemplateScope scope;
  scope.degree = a.degree;
  scope.allow_scheme = a.nat_indexed;
  for (std::size_t j = 0; j < a.args.size(); ++j) {
    MetaVarDecl m;
    m.name = image != nullptr && j < image->arg_names.size() ? image->arg_names[j]
                                                             : "M" + std::to_string(j + 1);
    for (const TypeTerm& b : a.args[j].binders) m.binders.push_back(types.transport(b));
    m.type = types.transport(a.args[j].type);
    scope.metavars.push_back(std::move(m));
  }
  return scope;
}

Context retype_context(const TypeMap& g, const Context& ctx) {
  Context out;
  out.reserve(ctx.size());
  for (const Type& t : ctx) out.push_back(g(t));
  return out;
}

std::optional<std::vector<Type>> finite_types(const TypeSignature& sig) {
  std::vector<Type> out;
  for (const TypeConstructor& c : sig.constructors) {
    if (c.arity != 0) return std::nullopt;
    out.emplace_back(c.name);
  }
  return out;
}

namespace {

TemplateTerm substitute_template_types(const TemplateTerm& t, std::span<const TypeTerm> ts) {
  TemplateTerm out = t;
  for (TypeTerm& s : out.type_args) s = substitute_metavars(s, ts);
  for (TemplateTerm& a : out.args) a = substitute_template_types(a, ts);
  return out;
}

std::size_t template_binders(const TwoSignature& sig, const TemplateTerm& t, std::size_t j) {
  using K = TemplateTerm::Kind;
  if (t.kind == K::ctor) {
    const Arity* a = sig.find_arity(t.name);
    if (a == nullptr || j >= a->args.size()) throw Error("unknown constructor " + t.name);
    return a->args[j].binders.size();
  }
  if ((t.kind == K::subst1 || t.kind == K::iterate) && j == 0) return 1;
  return 0;
}

// Simultaneous substitution on the bound variables of a template.
TemplateTerm subst_bound(const TwoSignature& sig, const TemplateTerm& t,
                         const std::vector<TemplateTerm>& images, std::size_t tail_shift,
                         std::size_t depth = 0) {
  if (t.kind == TemplateTerm::Kind::bound_var) {
    if (t.index < depth) return t;
    std::size_t r = t.index - depth;
    if (r < images.size()) return depth == 0 ? images[r] : subst_bound(sig, images[r], {}, depth);
    return TemplateTerm::bound(r - images.size() + tail_shift + depth);
  }
  TemplateTerm out = t;
  for (std::size_t j = 0; j < t.args.size(); ++j)
    out.args[j] = subst_bound(sig, t.args[j], images, tail_shift,
                              depth + template_binders(sig, t, j));
  return out;
}

struct Plug {
  const TwoSignature& target;
  std::span<const TypeTerm> types;
  std::optional<NumeralRef> numeral;
  const std::vector<TemplateTerm>& children;
  const std::vector<std::size_t>& child_binders;

  NumeralRef resolve(const NumeralRef& k) const {
    if (!k.scheme) return k;
    if (!numeral) throw Error("image uses the scheme index outside a numeral family");
    return *numeral;
  }

  TemplateTerm operator()(const TemplateTerm& t, std::size_t depth) const {
    using K = TemplateTerm::Kind;
    if (t.kind == K::meta) {
      if (t.index >= children.size()) throw Error("image refers to a missing argument");
      std::vector<TemplateTerm> inst;
      for (const TemplateTerm& a : t.args) inst.push_back((*this)(a, depth));
      const std::size_t b = child_binders[t.index];
      if (inst.size() != b) throw Error("image instantiation length mismatch");
      return subst_bound(target, children[t.index], inst, depth);
    }
    TemplateTerm out = t;
    for (TypeTerm& s : out.type_args) s = substitute_metavars(s, types);
    if (out.numeral) out.numeral = resolve(*out.numeral);
    for (std::size_t j = 0; j < t.args.size(); ++j)
      out.args[j] = (*this)(t.args[j], depth + template_binders(target, t, j));
    return out;
  }
};

}  // namespace

TemplateTerm transport_template(const Representation& rep, const TemplateTerm& t) {
  using K = TemplateTerm::Kind;
  TemplateTerm out = t;
  for (TypeTerm& s : out.type_args) s = rep.types.transport(s);
  for (TemplateTerm& a : out.args) a = transport_template(rep, a);
  if (t.kind != K::ctor) return out;

  const Arity* a = rep.source.find_arity(t.name);
  const ArityImage* img = rep.find_image(t.name);
  if (a == nullptr || img == nullptr) throw Error("no image for constructor " + t.name);
  std::vector<std::size_t> binders;
  for (const ArgumentSpec& arg : a->args) binders.push_back(arg.binders.size());
  Plug plug{rep.target, out.type_args, t.numeral, out.args, binders};
  return plug(img->image, 0);
}

InequationTemplate transport_rule(const Representation& rep, const InequationTemplate& rule) {
  InequationTemplate out = rule;
  for (MetaVarDecl& m : out.metavars) {
    for (TypeTerm& b : m.binders) b = rep.types.transport(b);
    m.type = rep.types.transport(m.type);
  }
  out.lhs = transport_template(rep, rule.lhs);
  out.rhs = transport_template(rep, rule.rhs);
  out.result_type = rep.types.transport(rule.result_type);
  return out;
}

ValidationReport check_representation(const Representation& rep) {
  ValidationReport report;
  auto& out = report.diagnostics;
  const std::string& who = rep.name.empty() ? std::string("representation") : rep.name;

  if (rep.types.source != rep.source.types)
    out.push_back({who, "types", "type map source differs from the source signature"});
  if (rep.types.target != rep.target.types)
    out.push_back({who, "types", "type map target differs from the target signature"});
  for (const TypeConstructor& c : rep.source.types.constructors) {
    auto it = rep.types.algebra.find(c.name);
    if (it == rep.types.algebra.end()) {
      out.push_back({c.name, "type", "missing type image"});
      continue;
    }
    if (auto why = check_type_term(rep.target.types, it->second, c.arity))
      out.push_back({c.name, "type", *why});
  }
  for (const auto& [name, _] : rep.types.algebra)
    if (rep.source.types.find(name) == nullptr)
      out.push_back({name, "type", "image for an unknown type constructor"});
  if (!out.empty()) return report;

  const auto finite = finite_types(rep.target.types);
  for (const Arity& a : rep.source.terms) {
    const ArityImage* img = rep.find_image(a.name);
    if (img == nullptr) {
      out.push_back({a.name, "image", "missing image"});
      continue;
    }
    if (img->arg_names.size() != a.args.size()) {
      out.push_back({a.name, "image", "image argument count: arity has " +
                                          std::to_string(a.args.size()) + " arguments, image binds " +
                                          std::to_string(img->arg_names.size())});
      continue;
    }
    TemplateScope scope = rep.image_scope(a, img);
    TypeTerm expected = rep.types.transport(a.result);
    std::optional<Diagnostic> symbolic;
    try {
      if (infer_template(rep.target, scope, img->image) != expected)
        symbolic = Diagnostic{a.name, "image", "image type differs from the transported result"};
    } catch (const TemplateError& e) {
      symbolic = Diagnostic{a.name, "image/" + e.position(), e.what()};
    }
    if (!symbolic) continue;
    if (!finite) {
      out.push_back(*symbolic);
      continue;
    }
    // Degree variables range over target types; with finitely many of them
    // every instance is checked on its own.
    std::vector<std::size_t> counter(a.degree, 0);
    bool failed = false;
    while (!failed) {
      std::vector<TypeTerm> tys;
      for (std::size_t k : counter) tys.push_back(to_type_term((*finite)[k]));
      TemplateScope closed = scope;
      closed.degree = 0;
      for (MetaVarDecl& m : closed.metavars) {
        for (TypeTerm& b : m.binders) b = substitute_metavars(b, tys);
        m.type = substitute_metavars(m.type, tys);
      }
      try {
        TypeTerm got =
            infer_template(rep.target, closed, substitute_template_types(img->image, tys));
        if (got != substitute_metavars(expected, tys)) {
          out.push_back({a.name, "image", "image type differs from the transported result"});
          failed = true;
        }
      } catch (const TemplateError& e) {
        out.push_back({a.name, "image/" + e.position(), e.what()});
        failed = true;
      }
      std::size_t k = 0;
      while (k < counter.size() && ++counter[k] == finite->size()) counter[k++] = 0;
      if (k == counter.size()) break;
    }
  }
  for (const ArityImage& img : rep.images)
    if (rep.source.find_arity(img.arity) == nullptr)
      out.push_back({img.arity, "image", "image for an unknown arity"});
  return report;
}

Term fold(const Representation& rep, const Context& ctx, const Term& e) {
  if (e.is_var()) return e;
  const Arity* a = rep.source.find_arity(e.name);
  const ArityImage* img = rep.find_image(e.name);
  if (a == nullptr || img == nullptr) throw Error("fold: no image for constructor " + e.name);
  MatchEnv env;
  env.tvec.reserve(e.tvec.size());
  for (const Type& t : e.tvec) env.tvec.push_back(rep.types(t));
  env.numeral = e.numeral;
  env.metas.reserve(e.args.size());
  for (std::size_t j = 0; j < e.args.size(); ++j)
    env.metas.push_back(fold(rep, extend(ctx, binder_types(*a, j, e.tvec)), e.args[j]));
  return instantiate_template(rep.target, img->image, env);
}

ReachResult check_satisfaction(const Representation& rep, const InequationTemplate& rule,
                               const MatchEnv& env, const Context& target_ctx,
                               std::size_t fuel) {
  if (fuel == 0) throw Error("check_satisfaction: fuel must be at least 1");
  InequationTemplate moved = transport_rule(rep, rule);
  Term lhs = instantiate_template(rep.target, moved, env, Side::lhs, target_ctx);
  Term rhs = instantiate_template(rep.target, moved, env, Side::rhs, target_ctx);
  return reduces_to(rep.target, lhs, rhs, target_ctx, fuel);
}

LawVerdict compare_substitution_law(const Representation& rep, const ColaxSample& sample,
                                    std::size_t fuel) {
  const Context target_ctx = retype_context(rep.types, sample.sigma.target);
  Term left = fold(rep, sample.sigma.target, subst(rep.source, sample.term, sample.sigma));
  Substitution folded{retype_context(rep.types, sample.sigma.source), target_ctx, {}};
  for (const Term& t : sample.sigma.map) folded.map.push_back(fold(rep, sample.sigma.target, t));
  Term right = subst(rep.target, fold(rep, sample.ctx, sample.term), folded);
  if (left == right) return LawVerdict::equal;
  if (reduces_to(rep.target, left, right, target_ctx, fuel).yes() &&
      reduces_to(rep.target, right, left, target_ctx, fuel).yes())
    return LawVerdict::mutually_reachable;
  return LawVerdict::failed;
}

ColaxReport check_colax_laws(const Representation& rep, const std::vector<ColaxSample>& samples,
                             std::size_t fuel) {
  ColaxReport report;
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const ColaxSample& sample = samples[s];
    for (std::size_t i = 0; i < sample.ctx.size(); ++i) {
      if (fold(rep, sample.ctx, Term::var(i)) == Term::var(i)) {
        ++report.unit_ok;
      } else {
        ++report.unit_failed;
        report.failures.push_back("sample " + std::to_string(s) + ": unit law");
      }
    }
    switch (compare_substitution_law(rep, sample, fuel)) {
      case LawVerdict::equal: ++report.subst_equal; break;
      case LawVerdict::mutually_reachable: ++report.subst_mutual; break;
      case LawVerdict::failed:
        ++report.subst_failed;
        report.failures.push_back("sample " + std::to_string(s) + ": substitution law");
        break;
    }
    const Context target_ctx = retype_context(rep.types, sample.ctx);
    const Term image = fold(rep, sample.ctx, sample.term);
    for (const auto& [pos, next] : step(rep.source, sample.term, sample.ctx)) {
      if (reduces_to(rep.target, image, fold(rep, sample.ctx, next), target_ctx, fuel).yes()) {
        ++report.monotone_ok;
      } else {
        ++report.monotone_failed;
        report.failures.push_back("sample " + std::to_string(s) + ": reduction not preserved, rule " +
                                  pos.rule + " at " + render_path(pos.path));
      }
    }
  }
  return report;
}

Representation identity_representation(const TwoSignature& sig) {
  Representation rep;
  rep.name = "id_" + sig.name;
  rep.source = sig;
  rep.target = sig;
  rep.types.source = sig.types;
  rep.types.target = sig.types;
  for (const TypeConstructor& c : sig.types.constructors) {
    std::vector<TypeTerm> args;
    for (std::size_t k = 1; k <= c.arity; ++k) args.push_back(TypeTerm::var(k));
    rep.types.algebra.emplace(c.name, TypeTerm::apply(c.name, std::move(args)));
  }
  for (const Arity& a : sig.terms) {
    ArityImage img;
    img.arity = a.name;
    std::vector<TypeTerm> tys;
    for (std::size_t k = 1; k <= a.degree; ++k) tys.push_back(TypeTerm::var(k));
    std::vector<TemplateTerm> args;
    for (std::size_t j = 0; j < a.args.size(); ++j) {
      img.arg_names.push_back("M" + std::to_string(j + 1));
      std::vector<TemplateTerm> inst;
      for (std::size_t i = 0; i < a.args[j].binders.size(); ++i)
        inst.push_back(TemplateTerm::bound(i));
      args.push_back(TemplateTerm::metavar(j, std::move(inst)));
    }
    img.image = TemplateTerm::con(a.name, std::move(tys), std::move(args));
    if (a.nat_indexed) img.image.numeral = NumeralRef::index();
    rep.images.push_back(std::move(img));
  }
  return rep;
}

Representation compose(const Representation& first, const Representation& second) {
  Representation rep;
  rep.name = first.name + ";" + second.name;
  rep.source = first.source;
  rep.target = second.target;
  rep.types.source = first.types.source;
  rep.types.target = second.types.target;
  for (const auto& [name, image] : first.types.algebra)
    rep.types.algebra.emplace(name, second.types.transport(image));
  for (const ArityImage& img : first.images)
    rep.images.push_back({img.arity, img.arg_names, transport_template(second, img.image)});
  return rep;
}

}  // namespace bindsig
