#pragma once

// Representations of a 2-signature in another generated language and the
// translation they induce by initiality.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bindsig/rewrite.hpp"

namespace bindsig {

/// A representation of a type signature in the closed types of a target.
/// Each source constructor of arity k is sent to a target type expression
/// in metavariables 1..k.
struct TypeMap {
  TypeSignature source;
  TypeSignature target;
  std::map<std::string, TypeTerm, std::less<>> algebra;

  /// The induced fold g from source closed types to target closed types.
  Type operator()(const Type& t) const;
  /// The fold on open type expressions (metavariables are kept).
  TypeTerm transport(const TypeTerm& s) const;

  friend bool operator==(const TypeMap&, const TypeMap&) = default;
};

struct ArityImage {
  std::string arity;
  std::vector<std::string> arg_names;  // one metavariable per argument
  TemplateTerm image;

  friend bool operator==(const ArityImage&, const ArityImage&) = default;
};

struct Representation {
  std::string name;
  TwoSignature source;
  TwoSignature target;
  TypeMap types;
  std::vector<ArityImage> images;

  const ArityImage* find_image(std::string_view arity) const;
  /// Metavariable scope an image of `a` is typed against.
  TemplateScope image_scope(const Arity& a, const ArityImage* image = nullptr) const;

  friend bool operator==(const Representation&, const Representation&) = default;
};

Context retype_context(const TypeMap& g, const Context& ctx);

ValidationReport check_representation(const Representation& rep);

/// The initial morphism: structural recursion sending each constructor to
/// its image template.
Term fold(const Representation& rep, const Context& ctx, const Term& e);

/// A source template pushed through the representation, as a template over
/// the target signature.
TemplateTerm transport_template(const Representation& rep, const TemplateTerm& t);
/// A source rule as a target rule: both sides and all types transported.
InequationTemplate transport_rule(const Representation& rep, const InequationTemplate& rule);

/// Whether the transported lhs reduces to the transported rhs at `env`,
/// a point of the transported rule's domain over `target_ctx`.
ReachResult check_satisfaction(const Representation& rep, const InequationTemplate& rule,
                               const MatchEnv& env, const Context& target_ctx,
                               std::size_t fuel);

enum class LawVerdict { equal, mutually_reachable, failed };

struct ColaxSample {
  Context ctx;
  Term term;
  Substitution sigma;
};

struct ColaxReport {
  std::size_t unit_ok = 0, unit_failed = 0;
  std::size_t subst_equal = 0, subst_mutual = 0, subst_failed = 0;
  /// Each source step of a sample term maps to a target reduction.
  std::size_t monotone_ok = 0, monotone_failed = 0;
  std::vector<std::string> failures;

  bool ok() const { return unit_failed == 0 && subst_failed == 0 && monotone_failed == 0; }
};

LawVerdict compare_substitution_law(const Representation& rep, const ColaxSample& sample,
                                    std::size_t fuel);
ColaxReport check_colax_laws(const Representation& rep, const std::vector<ColaxSample>& samples,
                             std::size_t fuel);

/// Identity representation of a signature in itself.
Representation identity_representation(const TwoSignature& sig);
/// first ; second, with images composed at the template level.
Representation compose(const Representation& first, const Representation& second);

/// Closed target types when the target type signature has only constants.
std::optional<std::vector<Type>> finite_types(const TypeSignature& sig);

}  // namespace bindsig
