// Representations: type maps, checking, the fold, transported rules and
// the colax laws.

#include <gtest/gtest.h>

#include "bindsig/sample.hpp"
#include "helpers.hpp"

using namespace bindsig;
using namespace th;

namespace {

Term U(const std::string& text) { return pt(ULC(), "[]", text); }
Term P(const std::string& text) { return pt(PCF(), "[]", text); }

Term lam(Term body) { return Term::con("abs", {}, {std::move(body)}); }
Term ap(Term f, Term a) { return Term::con("app", {}, {std::move(f), std::move(a)}); }

// c_n = \f.\x. f (f ... x), written out directly
Term church(std::uint64_t n) {
  Term body = Term::var(0);
  for (std::uint64_t i = 0; i < n; ++i) body = ap(Term::var(1), body);
  return lam(lam(body));
}

Representation broken_fix() {
  Representation rep = pcf_to_ulc();
  for (ArityImage& img : rep.images)
    if (img.arity == "fix") std::swap(img.image.args[0], img.image.args[1]);
  return rep;
}

TEST(Retype, Collapse) {
  Representation rep = pcf_to_ulc();
  Context ctx{nat(), arrow(nat(), boolean())};
  EXPECT_EQ(retype_context(rep.types, ctx), (Context{star(), star()}));
  EXPECT_TRUE(retype_context(rep.types, {}).empty());
}

TEST(Retype, Identity) {
  Representation id = identity_representation(TLC());
  Context ctx{arrow(iota(), iota())};
  EXPECT_EQ(retype_context(id.types, ctx), ctx);
  EXPECT_EQ(id.types.transport(TypeTerm::apply("=>", {TypeTerm::var(1), TypeTerm::var(2)})),
            TypeTerm::apply("=>", {TypeTerm::var(1), TypeTerm::var(2)}));
}

TEST(Check, CatalogRepresentations) {
  for (const char* name : {"pcf_to_ulc", "id_TLC", "id_PCF", "id_ULC"}) {
    auto r = check_representation(builtin_representation(name));
    EXPECT_TRUE(r.ok()) << name << ": " << (r.ok() ? "" : r.diagnostics[0].str());
  }
}

TEST(Check, FixImageWithTooFewArguments) {
  Representation rep = pcf_to_ulc();
  for (ArityImage& img : rep.images)
    if (img.arity == "fix") {
      img.arg_names.clear();
      img.image = TemplateTerm::con("abs", {}, {TemplateTerm::con("app", {}, {
                                                    TemplateTerm::bound(0),
                                                    TemplateTerm::bound(0)})});
    }
  auto r = check_representation(rep);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.diagnostics[0].reason.find("argument count"), std::string::npos);
}

TEST(Check, MissingImage) {
  Representation rep = pcf_to_ulc();
  rep.images.pop_back();
  EXPECT_FALSE(check_representation(rep).ok());
}

TEST(Check, IllTypedImageInTypedTarget) {
  Representation rep = identity_representation(TLC());
  for (ArityImage& img : rep.images)
    if (img.arity == "app") std::swap(img.image.args[0], img.image.args[1]);
  EXPECT_FALSE(check_representation(rep).ok());
}

TEST(Fold, ChurchZero) {
  Term c0 = fold(pcf_to_ulc(), {}, P("(num 0)"));
  EXPECT_EQ(c0, church(0));
  EXPECT_EQ(c0, U("(abs (abs (var 0)))"));
  EXPECT_TRUE(step(ULC(), c0, {}).empty());
}

TEST(Fold, NumeralsAreChurch) {
  for (std::uint64_t n = 0; n <= 10; ++n)
    EXPECT_EQ(fold(pcf_to_ulc(), {}, Term::num("num", n)), church(n));
}

TEST(Fold, SuccOfZeroReachesOne) {
  Term image = fold(pcf_to_ulc(), {}, P("(app succ (num 0))"));
  auto r = reduces_to(ULC(), image, church(1), {}, 200);
  ASSERT_TRUE(r.yes());
  EXPECT_FALSE(validate_trace(ULC(), {}, *r.witness));
}

TEST(Fold, KeepsVariables) {
  Context ctx{nat(), boolean()};
  Term e = pt(PCF(), "[Nat, Bool]", "(var 1)");
  EXPECT_EQ(fold(pcf_to_ulc(), ctx, e), Term::var(1));
}

TEST(Fold, IdentityIsIdentity) {
  for (const char* name : {"TLC", "PCF", "ULC"}) {
    const TwoSignature& sig = builtin_signature(name);
    Representation id = identity_representation(sig);
    Sampler s(sig, default_seed);
    for (int i = 0; i < 200; ++i) {
      TypedTerm t = s.typed_term();
      ASSERT_EQ(fold(id, t.ctx, t.term), t.term) << name;
    }
  }
}

TEST(Fold, ImagesTypecheck) {
  Representation rep = pcf_to_ulc();
  Sampler s(PCF(), default_seed + 7);
  for (int i = 0; i < 200; ++i) {
    TypedTerm t = s.typed_term();
    Term image = fold(rep, t.ctx, t.term);
    ASSERT_EQ(try_typecheck(ULC(), retype_context(rep.types, t.ctx), image), star());
  }
}

TEST(Transport, BetaMapsToBeta) {
  Representation rep = pcf_to_ulc();
  InequationTemplate moved = transport_rule(rep, *PCF().find_rule("beta"));
  const InequationTemplate& beta = *ULC().find_rule("beta");
  for (const RuleInstance& inst : sample_rule_instances(ULC(), moved, default_seed)) {
    MatchEnv at_star = inst.env;
    at_star.tvec.clear();
    for (Side side : {Side::lhs, Side::rhs})
      EXPECT_EQ(instantiate_template(ULC(), moved, inst.env, side, inst.ctx),
                instantiate_template(ULC(), beta, at_star, side, inst.ctx));
    auto r = check_satisfaction(rep, *PCF().find_rule("beta"), inst.env, inst.ctx, 10);
    ASSERT_TRUE(r.yes());
    EXPECT_LE(r.witness->steps.size(), 1u);
  }
}

ReachResult satisfied(const Representation& rep, const char* rule, const MatchEnv& env,
                      std::size_t fuel) {
  return check_satisfaction(rep, *rep.source.find_rule(rule), env, {}, fuel);
}

TEST(Satisfaction, FixAtIdentity) {
  MatchEnv env{{}, {}, {lam(Term::var(0))}};
  auto r = satisfied(pcf_to_ulc(), "fix_unfold", env, 500);
  EXPECT_TRUE(r.yes());
}

TEST(Satisfaction, PredZero) {
  auto r = satisfied(pcf_to_ulc(), "pred_zero", MatchEnv{}, 500);
  EXPECT_TRUE(r.yes());
}

TEST(Satisfaction, PredSuccScheme) {
  for (std::uint64_t n = 0; n <= 5; ++n) {
    MatchEnv env{{}, n, {}};
    EXPECT_TRUE(satisfied(pcf_to_ulc(), "pred_succ", env, 2000).yes()) << n;
  }
}

TEST(Satisfaction, BrokenFixFails) {
  MatchEnv env{{}, {}, {lam(Term::var(0))}};
  auto r = satisfied(broken_fix(), "fix_unfold", env, 300);
  EXPECT_FALSE(r.yes());
}

TEST(Satisfaction, RequiresFuel) {
  EXPECT_THROW(satisfied(pcf_to_ulc(), "pred_zero", MatchEnv{}, 0), Error);
}

std::vector<ColaxSample> colax_samples(const TwoSignature& sig, std::uint64_t seed, int n) {
  Sampler s(sig, seed);
  std::vector<ColaxSample> out;
  for (int i = 0; i < n; ++i) {
    TypedTerm t = s.typed_term();
    out.push_back({t.ctx, t.term, s.substitution(t.ctx)});
  }
  return out;
}

TEST(Colax, IdentityAllEqual) {
  Representation id = identity_representation(TLC());
  auto report = check_colax_laws(id, colax_samples(TLC(), default_seed, 100), 200);
  EXPECT_TRUE(report.ok());
  EXPECT_EQ(report.subst_equal, 100u);
  EXPECT_EQ(report.subst_mutual, 0u);
}

TEST(Colax, PcfToUlcAllEqual) {
  auto report = check_colax_laws(pcf_to_ulc(), colax_samples(PCF(), default_seed, 200), 2000);
  EXPECT_TRUE(report.ok()) << (report.failures.empty() ? "" : report.failures[0]);
  EXPECT_EQ(report.subst_equal, 200u);
  EXPECT_EQ(report.unit_failed, 0u);
}

TEST(Colax, BrokenFixIsReported) {
  // Samples whose terms start with fix expose the swapped image.
  std::vector<ColaxSample> samples;
  Term f = P("(abs {Nat,Nat} (var 0))");
  samples.push_back({{}, Term::con("fix", {nat()}, {f}), identity_substitution({})});
  auto report = check_colax_laws(broken_fix(), samples, 300);
  EXPECT_FALSE(report.ok());
  EXPECT_GT(report.monotone_failed, 0u);
}

TEST(Compose, WithIdentity) {
  Representation rep = pcf_to_ulc();
  Representation left = compose(identity_representation(PCF()), rep);
  Representation right = compose(rep, identity_representation(ULC()));
  EXPECT_TRUE(check_representation(left).ok());
  EXPECT_TRUE(check_representation(right).ok());
  Sampler s(PCF(), default_seed + 9);
  for (int i = 0; i < 100; ++i) {
    TypedTerm t = s.typed_term();
    Term direct = fold(rep, t.ctx, t.term);
    ASSERT_EQ(fold(left, t.ctx, t.term), direct);
    ASSERT_EQ(fold(right, t.ctx, t.term), direct);
  }
}

TEST(Compose, FoldOfCompositeIsCompositeOfFolds) {
  Representation id = identity_representation(PCF());
  Representation twice = compose(id, id);
  Sampler s(PCF(), default_seed + 10);
  for (int i = 0; i < 100; ++i) {
    TypedTerm t = s.typed_term();
    ASSERT_EQ(fold(twice, t.ctx, t.term), fold(id, t.ctx, fold(id, t.ctx, t.term)));
  }
}

TEST(FiniteTypes, OnlyForConstantSignatures) {
  EXPECT_EQ(finite_types(ULC().types)->size(), 1u);
  EXPECT_FALSE(finite_types(TLC().types));
}

}  // namespace
