#pragma once

// Intrinsically typed de Bruijn terms of the language generated by a
// 2-signature. Every constructor node carries its type vector explicitly.

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bindsig/signature.hpp"

namespace bindsig {

/// Index 0 is the most recently bound variable; extension is prepend.
using Context = std::vector<Type>;

Context extend(const Context& ctx, const std::vector<Type>& binders);

struct Term {
  enum class Kind : std::uint8_t { var, con };

  Kind kind = Kind::var;
  std::size_t index = 0;  // var
  std::string name;       // con
  std::vector<Type> tvec;
  std::optional<std::uint64_t> numeral;
  std::vector<Term> args;

  static Term var(std::size_t i);
  static Term con(std::string name, std::vector<Type> tvec = {}, std::vector<Term> args = {});
  static Term num(std::string family, std::uint64_t k);

  bool is_var() const { return kind == Kind::var; }

  friend bool operator==(const Term&, const Term&) = default;
  friend std::strong_ordering operator<=>(const Term&, const Term&) = default;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept;
};

/// Node count; a numeral k counts as k+1 nodes so bounded sets stay finite.
std::size_t term_size(const Term& t);

/// Argument-index path from the root of a term; rendered "-" when empty.
using Path = std::vector<std::size_t>;
std::string render_path(const Path& path);

inline bool eq_term(const Term& a, const Term& b) { return a == b; }

class TypeError : public Error {
 public:
  TypeError(std::vector<std::size_t> path, const std::string& reason);
  const std::vector<std::size_t>& path() const { return path_; }

 private:
  std::vector<std::size_t> path_;
};

/// Instantiated binder types of argument `j` of `a` at `tvec`.
std::vector<Type> binder_types(const Arity& a, std::size_t j, const std::vector<Type>& tvec);

Type typecheck(const TwoSignature& sig, const Context& ctx, const Term& e);
std::optional<Type> try_typecheck(const TwoSignature& sig, const Context& ctx, const Term& e);

Term mk_con(const TwoSignature& sig, const Context& ctx, std::string name,
            std::vector<Type> tvec, std::optional<std::uint64_t> numeral,
            std::vector<Term> args);

struct EnumerationOptions {
  /// Type vectors range over closed types with at most this many nodes,
  /// together with every subterm of the context and goal types.
  std::size_t max_type_nodes = 3;
};

/// The type-vector universe used by enumerate.
std::vector<Type> type_universe(const TwoSignature& sig, const Context& ctx, const Type& goal,
                                const EnumerationOptions& opts);

std::set<Term> enumerate(const TwoSignature& sig, const Context& ctx, const Type& t,
                         std::size_t max_nodes, const EnumerationOptions& opts = {});

}  // namespace bindsig
