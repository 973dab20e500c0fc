// The built-in catalog.

#include <gtest/gtest.h>

#include "helpers.hpp"

using namespace bindsig;
using namespace th;

namespace {

TypeTerm mv(std::size_t k) { return TypeTerm::var(k); }
TypeTerm arr(TypeTerm a, TypeTerm b) { return TypeTerm::apply("=>", {std::move(a), std::move(b)}); }

TEST(Catalog, TlcArities) {
  const TwoSignature& s = TLC();
  ASSERT_EQ(s.terms.size(), 2u);
  const Arity& abs = *s.find_arity("abs");
  EXPECT_EQ(abs.degree, 2u);
  ASSERT_EQ(abs.args.size(), 1u);
  EXPECT_EQ(abs.args[0].binders, std::vector<TypeTerm>{mv(1)});
  EXPECT_EQ(abs.args[0].type, mv(2));
  EXPECT_EQ(abs.result, arr(mv(1), mv(2)));
  const Arity& app = *s.find_arity("app");
  ASSERT_EQ(app.args.size(), 2u);
  EXPECT_TRUE(app.args[0].binders.empty());
  EXPECT_EQ(app.args[0].type, arr(mv(1), mv(2)));
  EXPECT_EQ(app.args[1].type, mv(1));
  EXPECT_EQ(app.result, mv(2));
}

TEST(Catalog, PcfContents) {
  const TwoSignature& s = PCF();
  std::vector<std::string> types;
  for (const auto& c : s.types.constructors) types.push_back(c.name);
  EXPECT_EQ(types, (std::vector<std::string>{"Nat", "Bool", "=>"}));
  for (const char* n : {"abs", "app", "fix", "num", "succ", "pred", "zero?", "true", "false",
                        "if_nat", "if_bool"})
    EXPECT_TRUE(s.find_arity(n)) << n;
  EXPECT_EQ(s.find_arity("abs")->degree, 2u);
  EXPECT_EQ(s.find_arity("fix")->degree, 1u);
  EXPECT_TRUE(s.find_arity("num")->nat_indexed);
  EXPECT_EQ(s.numeral_family(), s.find_arity("num"));
  for (const char* n : {"beta", "fix_unfold", "pred_zero", "pred_succ", "zero_zero", "zero_succ",
                        "if_nat_true", "if_nat_false", "if_bool_true", "if_bool_false"})
    EXPECT_TRUE(s.find_rule(n)) << n;
  EXPECT_TRUE(s.find_rule("pred_succ")->nat_scheme);
}

TEST(Catalog, FixRuleShape) {
  // Fix <= (id, Fix); app
  const InequationTemplate& r = *PCF().find_rule("fix_unfold");
  ASSERT_EQ(r.metavars.size(), 1u);
  EXPECT_EQ(r.metavars[0].type, arr(mv(1), mv(1)));
  auto M = TemplateTerm::metavar(0);
  EXPECT_EQ(r.lhs, TemplateTerm::con("fix", {mv(1)}, {M}));
  EXPECT_EQ(r.rhs, TemplateTerm::con("app", {mv(1), mv(1)},
                                     {M, TemplateTerm::con("fix", {mv(1)}, {M})}));
}

TEST(Catalog, ExtensionsAreFlagged) {
  const TwoSignature& s = PCF();
  EXPECT_TRUE(s.find_arity("if_nat")->extension);
  EXPECT_TRUE(s.find_arity("if_bool")->extension);
  EXPECT_FALSE(s.find_arity("fix")->extension);
  EXPECT_TRUE(s.find_rule("if_bool_false")->extension);
  EXPECT_FALSE(s.find_rule("pred_succ")->extension);
}

TEST(Catalog, UlcSingleSorted) {
  const TwoSignature& s = ULC();
  ASSERT_EQ(s.types.constructors.size(), 1u);
  EXPECT_EQ(s.types.constructors[0].arity, 0u);
  EXPECT_EQ(s.find_arity("abs")->degree, 0u);
  EXPECT_EQ(s.find_arity("app")->degree, 0u);
  EXPECT_EQ(s.rules.size(), 1u);
}

TEST(Catalog, EveryEntryChecks) {
  for (const std::string& name : catalog_names()) {
    CatalogEntry e = builtin(name);
    if (auto* sig = std::get_if<TwoSignature>(&e))
      EXPECT_TRUE(validate_signature(*sig).ok()) << name;
    else
      EXPECT_TRUE(check_representation(std::get<Representation>(e)).ok()) << name;
  }
  EXPECT_THROW(builtin("SystemF"), Error);
  EXPECT_THROW(builtin_representation("id_SystemF"), Error);
}

}  // namespace
