#pragma once

// Term signatures with binding and inequation templates over them.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bindsig/types.hpp"

namespace bindsig {

/// One argument of a constructor: the types of the variables it binds
/// (binders[0] becomes de Bruijn index 0) and the type of the argument.
struct ArgumentSpec {
  std::vector<TypeTerm> binders;
  TypeTerm type;

  friend bool operator==(const ArgumentSpec&, const ArgumentSpec&) = default;
};

/// A binding arity of degree n: a family of constructors indexed by n types.
struct Arity {
  std::string name;
  std::size_t degree = 0;
  std::vector<ArgumentSpec> args;
  TypeTerm result;
  bool nat_indexed = false;  // one nullary constant per natural number
  bool extension = false;    // catalog flag: completes a partially given language

  friend bool operator==(const Arity&, const Arity&) = default;
};

/// A numeral position in a template: a fixed natural or the scheme index `n`.
struct NumeralRef {
  bool scheme = false;
  std::uint64_t value = 0;

  static NumeralRef literal(std::uint64_t k) { return {false, k}; }
  static NumeralRef index() { return {true, 0}; }

  friend bool operator==(const NumeralRef&, const NumeralRef&) = default;
};

/// Second-order term templates. Children are stored in `args`:
///   bound_var  index = de Bruijn index, no children
///   ctor       name, type_args (length = degree), numeral, constructor arguments
///   meta       index = position in the metavariable list, args = instantiation
///   subst1     type_args = {bound type}, args = {body, replacement}
///   iterate    type_args = {accumulator type}, numeral = count, args = {body, base}
/// In subst1 and iterate the body binds one extra variable at index 0.
struct TemplateTerm {
  enum class Kind : std::uint8_t { bound_var, ctor, meta, subst1, iterate };

  Kind kind = Kind::bound_var;
  std::size_t index = 0;
  std::string name;
  std::vector<TypeTerm> type_args;
  std::optional<NumeralRef> numeral;
  std::vector<TemplateTerm> args;

  static TemplateTerm bound(std::size_t i);
  static TemplateTerm con(std::string name, std::vector<TypeTerm> type_args = {},
                          std::vector<TemplateTerm> args = {});
  static TemplateTerm numeral_con(std::string name, NumeralRef k);
  static TemplateTerm metavar(std::size_t k, std::vector<TemplateTerm> inst = {});
  static TemplateTerm subst(TemplateTerm body, TypeTerm bound_type, TemplateTerm repl);
  static TemplateTerm iterate(NumeralRef count, TypeTerm acc_type, TemplateTerm body,
                              TemplateTerm base);

  friend bool operator==(const TemplateTerm&, const TemplateTerm&) = default;
};

struct MetaVarDecl {
  std::string name;
  std::vector<TypeTerm> binders;
  TypeTerm type;

  friend bool operator==(const MetaVarDecl&, const MetaVarDecl&) = default;
};

struct InequationTemplate {
  std::string name;
  std::size_t degree = 0;
  std::vector<MetaVarDecl> metavars;
  TemplateTerm lhs;
  TemplateTerm rhs;
  TypeTerm result_type;
  bool nat_scheme = false;
  bool extension = false;

  friend bool operator==(const InequationTemplate&, const InequationTemplate&) = default;
};

struct TwoSignature {
  std::string name;
  TypeSignature types;
  std::vector<Arity> terms;
  std::vector<InequationTemplate> rules;

  const Arity* find_arity(std::string_view name) const;
  const InequationTemplate* find_rule(std::string_view name) const;
  /// The unique nat-indexed family, if exactly one exists.
  const Arity* numeral_family() const;

  friend bool operator==(const TwoSignature&, const TwoSignature&) = default;
};

struct Diagnostic {
  std::string location;
  std::string position;
  std::string reason;

  std::string str() const { return location + ":" + position + ":" + reason; }
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

struct ValidationReport {
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return diagnostics.empty(); }
};

/// The typing context of a template: degree, metavariables and whether the
/// scheme numeral `n` may occur.
struct TemplateScope {
  std::size_t degree = 0;
  std::vector<MetaVarDecl> metavars;
  bool allow_scheme = false;
};

/// Raised by template inference; `position` is a dot-separated child path.
class TemplateError : public Error {
 public:
  TemplateError(std::string position, const std::string& reason)
      : Error(reason), position_(std::move(position)) {}
  const std::string& position() const { return position_; }

 private:
  std::string position_;
};

/// Infers the type of `t` under `scope` with local bound-variable types
/// `locals` (index 0 first). Throws TemplateError.
TypeTerm infer_template(const TwoSignature& sig, const TemplateScope& scope,
                        const TemplateTerm& t, const std::vector<TypeTerm>& locals = {});

enum class Side { lhs, rhs };

/// Infers the type of one side of a rule; the result must equal result_type
/// for the rule to be well formed. Throws TemplateError.
TypeTerm check_template(const TwoSignature& sig, const InequationTemplate& rule, Side side);

ValidationReport validate_signature(const TwoSignature& sig);

}  // namespace bindsig
