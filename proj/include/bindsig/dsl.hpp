#pragma once

// Text formats: signature and representation files, type expressions,
// contexts, term s-expressions, and reduction traces. Every printer emits
// the canonical form its parser accepts.

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "bindsig/model.hpp"

namespace bindsig {

class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& reason);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  /// "line:column"
  std::string position() const;

 private:
  std::size_t line_, column_;
};

/// Constructor and rule names are printed bare when they are identifiers
/// and double-quoted otherwise.
std::string print_name(std::string_view name);

std::string print_type(const Type& t);
std::string print_type_term(const TypeTerm& s);
std::string print_context(const Context& ctx);
std::string print_term(const Term& e);
std::string print_template(const TemplateTerm& t, const TemplateScope& scope,
                           const TwoSignature& sig);
std::string print_signature(const TwoSignature& sig);
/// `source_ref` and `target_ref` default to the signature names.
std::string print_representation(const Representation& rep, const std::string& source_ref = {},
                                 const std::string& target_ref = {});
std::string print_trace(const Trace& trace);

Type parse_type(const TypeSignature& sig, std::string_view text);
Context parse_context(const TypeSignature& sig, std::string_view text);

/// Parses and type checks a term. Omitted type vectors are inferred from
/// the arguments and from `expected`; failing that the parse is rejected.
Term parse_term(const TwoSignature& sig, const Context& ctx, std::string_view text,
                const std::optional<Type>& expected = std::nullopt);

TwoSignature parse_signature(std::string_view text);

/// Resolves the source and target of a representation file. `quoted` tells
/// a quoted path from a bare catalog name.
using SignatureResolver = std::function<TwoSignature(const std::string& ref, bool quoted)>;

struct ParsedRepresentation {
  Representation rep;
  std::string source_ref, target_ref;
  bool source_quoted = false, target_quoted = false;
};

/// Prints with the references as written, keeping quoted paths quoted.
std::string print_representation(const ParsedRepresentation& parsed);

ParsedRepresentation parse_representation(std::string_view text,
                                          const SignatureResolver& resolve);

/// Parses a trace over `ctx`; every step is re-matched to recover its
/// environment, and an invalid step is a parse error.
Trace parse_trace(const TwoSignature& sig, const Context& ctx, std::string_view text);

}  // namespace bindsig
