// Rule instantiation, matching, one-step reduction, reachability and
// normalization.

#include <gtest/gtest.h>

#include "bindsig/sample.hpp"
#include "helpers.hpp"

using namespace bindsig;
using namespace th;

namespace {

const InequationTemplate& rule(const TwoSignature& s, const char* n) { return *s.find_rule(n); }

Term P(const std::string& text) { return pt(PCF(), "[]", text); }

TEST(Instantiate, BetaRhsEtaCase) {
  MatchEnv env{{nat(), nat()}, {}, {Term::var(0), Term::num("num", 2)}};
  EXPECT_EQ(instantiate_template(PCF(), rule(PCF(), "beta"), env, Side::rhs, {}),
            Term::num("num", 2));
}

TEST(Instantiate, FixRhs) {
  Term f = pt(PCF(), "[]", "(abs {Nat,Nat} (var 0))");
  MatchEnv env{{nat()}, {}, {f}};
  Term want = Term::con("app", {nat(), nat()}, {f, Term::con("fix", {nat()}, {f})});
  EXPECT_EQ(instantiate_template(PCF(), rule(PCF(), "fix_unfold"), env, Side::rhs, {}), want);
}

TEST(Instantiate, BetaLhs) {
  MatchEnv env{{iota(), iota()}, {}, {Term::var(0), Term::var(0)}};
  EXPECT_EQ(instantiate_template(TLC(), rule(TLC(), "beta"), env, Side::lhs, {iota()}),
            pt(TLC(), "[iota]", "(app (abs (var 0)) (var 0))"));
}

TEST(Match, Beta) {
  Term e = pt(TLC(), "[iota]", "(app (abs (var 0)) (var 0))");
  auto envs = match_rule(TLC(), rule(TLC(), "beta"), e, {iota()});
  ASSERT_EQ(envs.size(), 1u);
  MatchEnv want{{iota(), iota()}, {}, {Term::var(0), Term::var(0)}};
  EXPECT_EQ(envs[0], want);
  EXPECT_TRUE(match_rule(TLC(), rule(TLC(), "beta"), Term::var(0), {iota()}).empty());
}

TEST(Match, PredSuccIndex) {
  auto envs = match_rule(PCF(), rule(PCF(), "pred_succ"), P("(app pred (app succ (num 4)))"), {});
  ASSERT_EQ(envs.size(), 1u);
  EXPECT_EQ(envs[0].numeral, 4u);
}

TEST(Match, MetavariableMustNotEscape) {
  // abs(x. app(v1, v1)) applied: M may use the bound variable, N cannot.
  Term e = pt(TLC(), "[iota]", "(app (abs (var 1)) (var 0))");
  auto envs = match_rule(TLC(), rule(TLC(), "beta"), e, {iota()});
  ASSERT_EQ(envs.size(), 1u);
  EXPECT_EQ(envs[0].metas[0], Term::var(1));
}

TEST(Step, Examples) {
  auto s1 = step(TLC(), pt(TLC(), "[iota]", "(app (abs (var 0)) (var 0))"), {iota()});
  ASSERT_EQ(s1.size(), 1u);
  EXPECT_EQ(s1[0].second, Term::var(0));
  EXPECT_EQ(s1[0].first.rule, "beta");
  EXPECT_TRUE(s1[0].first.path.empty());

  auto s2 = step(PCF(), P("(app pred (num 0))"), {});
  ASSERT_EQ(s2.size(), 1u);
  EXPECT_EQ(s2[0].second, Term::num("num", 0));

  auto s3 = step(PCF(), P("(app zero? (app succ (num 3)))"), {});
  ASSERT_EQ(s3.size(), 1u);
  EXPECT_EQ(s3[0].second, Term::con("false"));
}

TEST(Step, CongruenceOrder) {
  // two redexes: the outer one is listed first
  Term e = P("(app (abs {Nat,Nat} (var 0)) (app pred (num 0)))");
  auto s = step(PCF(), e, {});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_TRUE(s[0].first.path.empty());
  EXPECT_EQ(s[1].first.path, Path{1});
  EXPECT_EQ(first_step(PCF(), e, {})->second, s[0].second);
}

TEST(Step, UnderBinder) {
  Term e = pt(TLC(), "[]", "(abs {iota,iota} (app (abs {iota,iota} (var 0)) (var 0)))");
  auto s = step(TLC(), e, {});
  ASSERT_EQ(s.size(), 1u);
  EXPECT_EQ(s[0].first.path, Path{0});
  EXPECT_EQ(s[0].second, pt(TLC(), "[]", "(abs {iota,iota} (var 0))"));
  EXPECT_EQ(context_at(TLC(), {}, e, {0}), Context{iota()});
}

TEST(Reach, Reflexive) {
  Term e = P("(num 3)");
  auto r = reduces_to(PCF(), e, e, {}, 1);
  EXPECT_TRUE(r.yes());
  EXPECT_TRUE(r.witness->steps.empty());
}

TEST(Reach, FixUnfolds) {
  Term f = P("(abs {Nat,Nat} (var 0))");
  Term fix = Term::con("fix", {nat()}, {f});
  Term target = Term::con("app", {nat(), nat()}, {f, fix});
  for (Search s : {Search::breadth_first, Search::hybrid}) {
    auto r = reduces_to(PCF(), fix, target, {}, 10, s);
    ASSERT_TRUE(r.yes());
    EXPECT_FALSE(validate_trace(PCF(), {}, *r.witness));
    EXPECT_EQ(r.witness->last(), target);
  }
}

TEST(Reach, NumeralsAreNormal) {
  auto r = reduces_to(PCF(), P("(num 0)"), P("(num 1)"), {}, 1000);
  EXPECT_FALSE(r.yes());
  EXPECT_TRUE(r.exhausted);
  auto b = reduces_to(PCF(), P("(num 0)"), P("(num 1)"), {}, 1000, Search::breadth_first);
  EXPECT_FALSE(b.yes());
  EXPECT_TRUE(b.exhausted);
}

TEST(Reach, FuelBound) {
  Term loop = P("(fix (abs {Nat,Nat} (var 0)))");
  auto r = reduces_to(PCF(), loop, P("(num 0)"), {}, 50);
  EXPECT_FALSE(r.yes());
  EXPECT_FALSE(r.exhausted);
  EXPECT_LE(r.expanded, 50u);
}

TEST(Reach, HybridAgreesWithBreadthFirst) {
  Sampler s(PCF(), default_seed);
  for (int i = 0; i < 60; ++i) {
    TypedTerm t = s.typed_term(8, true);
    Trace tr = s.trace(t.ctx, t.term, 3);
    auto b = reduces_to(PCF(), t.term, tr.last(), t.ctx, 2000, Search::breadth_first);
    auto h = reduces_to(PCF(), t.term, tr.last(), t.ctx, 2000, Search::hybrid);
    ASSERT_TRUE(h.yes());
    if (b.yes()) {
      EXPECT_FALSE(validate_trace(PCF(), t.ctx, *b.witness));
    }
    EXPECT_FALSE(validate_trace(PCF(), t.ctx, *h.witness));
  }
}

TEST(Normalize, Examples) {
  auto a = normalize(PCF(), P("(app (abs (var 0)) (num 5))"), {}, 10);
  EXPECT_TRUE(a.normal_form);
  EXPECT_EQ(a.trace.steps.size(), 1u);
  EXPECT_EQ(a.result(), Term::num("num", 5));

  auto b = normalize(PCF(), P("(app pred (app succ (num 2)))"), {}, 10);
  EXPECT_TRUE(b.normal_form);
  EXPECT_EQ(b.result(), Term::num("num", 2));

  auto c = normalize(PCF(), P("(fix (abs {Nat,Nat} (var 0)))"), {}, 50);
  EXPECT_FALSE(c.normal_form);
  EXPECT_EQ(c.trace.steps.size(), 50u);
  for (std::size_t i = 0; i < c.trace.steps.size(); ++i)
    EXPECT_EQ(c.trace.steps[i].position.rule, i % 2 == 0 ? "fix_unfold" : "beta");
}

TEST(Normalize, Conditionals) {
  auto r = normalize(PCF(), P("(app (app (app if_nat (app zero? (num 0))) (num 1)) (num 2))"),
                     {}, 10);
  EXPECT_TRUE(r.normal_form);
  EXPECT_EQ(r.result(), Term::num("num", 1));
}

TEST(Trace, ValidateRejectsForgedStep) {
  auto r = normalize(PCF(), P("(app pred (app succ (num 2)))"), {}, 10);
  Trace forged = r.trace;
  forged.steps[0].result = Term::num("num", 3);
  EXPECT_TRUE(validate_trace(PCF(), {}, forged));
  EXPECT_FALSE(validate_trace(PCF(), {}, r.trace));
}

TEST(Trace, TransportedTracesRevalidate) {
  for (const char* name : {"TLC", "PCF", "ULC"}) {
    const TwoSignature& sig = builtin_signature(name);
    Sampler s(sig, default_seed + 3);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
      TypedTerm t = s.typed_term();
      Trace tr = s.trace(t.ctx, t.term, 4);
      Substitution sigma = s.substitution(t.ctx);
      auto moved = transport_trace(sig, tr, sigma);
      ASSERT_TRUE(moved) << name;
      EXPECT_FALSE(validate_trace(sig, sigma.target, *moved)) << name;
      EXPECT_EQ(moved->start, subst(sig, t.term, sigma));
      checked += !tr.steps.empty();
    }
    EXPECT_GT(checked, 10) << name;
  }
}

TEST(SubjectReduction, StepsPreserveTypes) {
  for (const char* name : {"TLC", "PCF", "ULC"}) {
    const TwoSignature& sig = builtin_signature(name);
    Sampler s(sig, default_seed + 4);
    for (int i = 0; i < 100; ++i) {
      TypedTerm t = s.typed_term();
      for (const auto& [pos, r] : step(sig, t.term, t.ctx))
        ASSERT_EQ(try_typecheck(sig, t.ctx, r), t.type) << name << " " << pos.rule;
    }
  }
}

}  // namespace
