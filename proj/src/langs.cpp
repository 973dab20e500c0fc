#include "bindsig/langs.hpp"

namespace bindsig {
namespace {

using T = TemplateTerm;

TypeTerm v(std::size_t k) { return TypeTerm::var(k); }
TypeTerm ty(const std::string& name, std::vector<TypeTerm> args = {}) {
  return TypeTerm::apply(name, std::move(args));
}
TypeTerm arrow(TypeTerm a, TypeTerm b) { return ty("=>", {std::move(a), std::move(b)}); }

Arity arity(std::string name, std::size_t degree, std::vector<ArgumentSpec> args, TypeTerm result,
            bool extension = false) {
  Arity a;
  a.name = std::move(name);
  a.degree = degree;
  a.args = std::move(args);
  a.result = std::move(result);
  a.extension = extension;
  return a;
}

Arity constant(std::string name, TypeTerm result, bool extension = false) {
  return arity(std::move(name), 0, {}, std::move(result), extension);
}

T b(std::size_t i) { return T::bound(i); }
T meta(std::size_t k, std::vector<T> inst = {}) { return T::metavar(k, std::move(inst)); }
T c(const std::string& name, std::vector<TypeTerm> tys = {}, std::vector<T> args = {}) {
  return T::con(name, std::move(tys), std::move(args));
}

// Typed application at types (s, t).
T app(TypeTerm s, TypeTerm t, T f, T x) { return c("app", {std::move(s), std::move(t)}, {std::move(f), std::move(x)}); }

InequationTemplate beta_rule() {
  InequationTemplate r;
  r.name = "beta";
  r.degree = 2;
  r.metavars = {{"M", {v(1)}, v(2)}, {"N", {}, v(1)}};
  r.lhs = app(v(1), v(2), c("abs", {v(1), v(2)}, {meta(0, {b(0)})}), meta(1));
  r.rhs = T::subst(meta(0, {b(0)}), v(1), meta(1));
  r.result_type = v(2);
  return r;
}

std::vector<Arity> lambda_terms() {
  return {arity("abs", 2, {{{v(1)}, v(2)}}, arrow(v(1), v(2))),
          arity("app", 2, {{{}, arrow(v(1), v(2))}, {{}, v(1)}}, v(2))};
}

// Untyped lambda templates for the Church encoding.
T lam(T body) { return c("abs", {}, {std::move(body)}); }
T ap(T f, T x) { return c("app", {}, {std::move(f), std::move(x)}); }

}  // namespace

TwoSignature tlc() {
  TwoSignature s;
  s.name = "TLC";
  s.types.constructors = {{"iota", 0}, {"=>", 2}};
  s.terms = lambda_terms();
  s.rules = {beta_rule()};
  return s;
}

TwoSignature ulc() {
  TwoSignature s;
  s.name = "ULC";
  s.types.constructors = {{"star", 0}};
  s.terms = {arity("abs", 0, {{{ty("star")}, ty("star")}}, ty("star")),
             arity("app", 0, {{{}, ty("star")}, {{}, ty("star")}}, ty("star"))};
  InequationTemplate r;
  r.name = "beta";
  r.metavars = {{"M", {ty("star")}, ty("star")}, {"N", {}, ty("star")}};
  r.lhs = ap(lam(meta(0, {b(0)})), meta(1));
  r.rhs = T::subst(meta(0, {b(0)}), ty("star"), meta(1));
  r.result_type = ty("star");
  s.rules = {r};
  return s;
}

TwoSignature pcf() {
  const TypeTerm nat = ty("Nat"), boolean = ty("Bool");
  TwoSignature s;
  s.name = "PCF";
  s.types.constructors = {{"Nat", 0}, {"Bool", 0}, {"=>", 2}};
  s.terms = lambda_terms();
  s.terms.push_back(arity("fix", 1, {{{}, arrow(v(1), v(1))}}, v(1)));
  Arity num = constant("num", nat);
  num.nat_indexed = true;
  s.terms.push_back(num);
  s.terms.push_back(constant("succ", arrow(nat, nat)));
  s.terms.push_back(constant("pred", arrow(nat, nat)));
  s.terms.push_back(constant("zero?", arrow(nat, boolean)));
  s.terms.push_back(constant("true", boolean));
  s.terms.push_back(constant("false", boolean));
  for (const auto& [name, sigma] : {std::pair{"if_nat", nat}, std::pair{"if_bool", boolean}})
    s.terms.push_back(constant(name, arrow(boolean, arrow(sigma, arrow(sigma, sigma))), true));

  s.rules.push_back(beta_rule());

  InequationTemplate fix;
  fix.name = "fix_unfold";
  fix.degree = 1;
  fix.metavars = {{"M", {}, arrow(v(1), v(1))}};
  fix.lhs = c("fix", {v(1)}, {meta(0)});
  fix.rhs = app(v(1), v(1), meta(0), c("fix", {v(1)}, {meta(0)}));
  fix.result_type = v(1);
  s.rules.push_back(fix);

  auto numeral = [](NumeralRef k) { return T::numeral_con("num", k); };
  auto succ_n = app(nat, nat, c("succ"), numeral(NumeralRef::index()));
  auto simple = [&](std::string name, T lhs, T rhs, TypeTerm result, bool scheme) {
    InequationTemplate r;
    r.name = std::move(name);
    r.lhs = std::move(lhs);
    r.rhs = std::move(rhs);
    r.result_type = std::move(result);
    r.nat_scheme = scheme;
    s.rules.push_back(std::move(r));
  };
  simple("pred_zero", app(nat, nat, c("pred"), numeral(NumeralRef::literal(0))),
         numeral(NumeralRef::literal(0)), nat, false);
  simple("pred_succ", app(nat, nat, c("pred"), succ_n), numeral(NumeralRef::index()), nat, true);
  simple("zero_zero", app(nat, boolean, c("zero?"), numeral(NumeralRef::literal(0))), c("true"),
         boolean, false);
  simple("zero_succ", app(nat, boolean, c("zero?"), succ_n), c("false"), boolean, true);

  for (const auto& [name, sigma] : {std::pair{"if_nat", nat}, std::pair{"if_bool", boolean}}) {
    const TypeTerm s2 = arrow(sigma, sigma), s3 = arrow(sigma, s2);
    for (bool branch : {true, false}) {
      InequationTemplate r;
      r.name = std::string(name) + (branch ? "_true" : "_false");
      r.metavars = {{"X", {}, sigma}, {"Y", {}, sigma}};
      T cond = app(boolean, s3, c(name), c(branch ? "true" : "false"));
      r.lhs = app(sigma, sigma, app(sigma, s2, cond, meta(0)), meta(1));
      r.rhs = meta(branch ? 0 : 1);
      r.result_type = sigma;
      r.extension = true;
      s.rules.push_back(std::move(r));
    }
  }
  return s;
}

Representation pcf_to_ulc() {
  Representation rep;
  rep.name = "pcf_to_ulc";
  rep.source = pcf();
  rep.target = ulc();
  rep.types.source = rep.source.types;
  rep.types.target = rep.target.types;
  for (const char* t : {"Nat", "Bool", "=>"}) rep.types.algebra.emplace(t, ty("star"));

  const T church_true = lam(lam(b(1)));
  const T church_false = lam(lam(b(0)));
  const T turing_half = lam(lam(ap(b(0), ap(ap(b(1), b(1)), b(0)))));
  const T conditional = lam(lam(lam(ap(ap(b(2), b(1)), b(0)))));
  auto image = [&](std::string arity, std::vector<std::string> args, T t) {
    rep.images.push_back({std::move(arity), std::move(args), std::move(t)});
  };
  image("abs", {"M"}, lam(meta(0, {b(0)})));
  image("app", {"M", "N"}, ap(meta(0), meta(1)));
  image("fix", {"M"}, ap(ap(turing_half, turing_half), meta(0)));
  image("num", {},
        lam(lam(T::iterate(NumeralRef::index(), ty("star"), ap(b(2), b(0)), b(0)))));
  image("succ", {}, lam(lam(lam(ap(b(1), ap(ap(b(2), b(1)), b(0)))))));
  image("pred", {},
        lam(lam(lam(ap(ap(ap(b(2), lam(lam(ap(b(0), ap(b(1), b(3)))))), lam(b(1))), lam(b(0)))))));
  image("zero?", {}, lam(ap(ap(b(0), lam(church_false)), church_true)));
  image("true", {}, church_true);
  image("false", {}, church_false);
  image("if_nat", {}, conditional);
  image("if_bool", {}, conditional);
  return rep;
}

const TwoSignature& builtin_signature(std::string_view name) {
  static const TwoSignature t = tlc(), p = pcf(), u = ulc();
  if (name == "TLC") return t;
  if (name == "PCF") return p;
  if (name == "ULC") return u;
  throw Error("unknown built-in signature " + std::string(name));
}

Representation builtin_representation(std::string_view name) {
  if (name == "pcf_to_ulc") return pcf_to_ulc();
  if (name.starts_with("id_")) {
    try {
      return identity_representation(builtin_signature(name.substr(3)));
    } catch (const Error&) {
    }
  }
  throw Error("unknown built-in representation " + std::string(name));
}

CatalogEntry builtin(std::string_view name) {
  if (name == "TLC" || name == "PCF" || name == "ULC") return builtin_signature(name);
  return builtin_representation(name);
}

std::vector<std::string> catalog_names() {
  return {"TLC", "PCF", "ULC", "pcf_to_ulc", "id_TLC", "id_PCF", "id_ULC"};
}

}  // namespace bindsig
