#pragma once

// Type-level signatures: first-order type constructors, type expressions
// over numbered metavariables, and closed types (the initial type algebra).

#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bindsig {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TypeConstructor {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const TypeConstructor&, const TypeConstructor&) = default;
};

struct TypeSignature {
  std::vector<TypeConstructor> constructors;

  const TypeConstructor* find(std::string_view name) const;

  friend bool operator==(const TypeSignature&, const TypeSignature&) = default;
};

/// A closed type: an element of the initial algebra of a type signature.
struct Type {
  std::string ctor;
  std::vector<Type> args;

  Type() = default;
  explicit Type(std::string name, std::vector<Type> arguments = {})
      : ctor(std::move(name)), args(std::move(arguments)) {}

  std::size_t size() const;

  friend bool operator==(const Type&, const Type&) = default;
  friend std::strong_ordering operator<=>(const Type&, const Type&) = default;
};

/// A type expression in metavariables 1..n. `meta == 0` marks a constructor
/// application; otherwise the node is the metavariable with that index.
struct TypeTerm {
  std::size_t meta = 0;
  std::string ctor;
  std::vector<TypeTerm> args;

  static TypeTerm var(std::size_t k);
  static TypeTerm apply(std::string name, std::vector<TypeTerm> args = {});

  bool is_meta() const { return meta != 0; }

  friend bool operator==(const TypeTerm&, const TypeTerm&) = default;
  friend std::strong_ordering operator<=>(const TypeTerm&, const TypeTerm&) = default;
};

TypeTerm to_type_term(const Type& t);
std::optional<Type> to_closed(const TypeTerm& s);

/// Largest metavariable index occurring in `s` (0 for closed terms).
std::size_t max_meta(const TypeTerm& s);

/// Structural check against `sig` at degree `degree`; returns the reason of
/// the first problem found, or nothing when well formed.
std::optional<std::string> check_type_term(const TypeSignature& sig,
                                           const TypeTerm& s,
                                           std::size_t degree);

/// Evaluates `s` at the type vector `tvec`: MetaVar k becomes tvec[k-1].
/// Throws Error when `s` mentions a metavariable beyond tvec.
Type instantiate(const TypeTerm& s, std::span<const Type> tvec);

/// Replaces MetaVar k by ts[k-1]; the result lives at the degree of `ts`.
TypeTerm substitute_metavars(const TypeTerm& s, std::span<const TypeTerm> ts);

/// One-sided matching of a pattern against a closed type, extending the
/// partial assignment in place. On failure the assignment may be partially
/// extended; callers copy it first when they need to backtrack.
bool match_type(const TypeTerm& pattern, const Type& t,
                std::vector<std::optional<Type>>& assignment);

/// All closed types of `sig` with at most `max_nodes` constructor nodes,
/// ordered by size and then lexicographically.
std::vector<Type> closed_types(const TypeSignature& sig, std::size_t max_nodes);

/// Collects `t` and all of its subterms into `out`.
void collect_subtypes(const Type& t, std::vector<Type>& out);

template <class Carrier>
using TypeOperation = std::function<Carrier(std::span<const Carrier>)>;

template <class Carrier>
using TypeAlgebra = std::map<std::string, TypeOperation<Carrier>, std::less<>>;

/// The unique algebra morphism out of the initial type algebra.
template <class Carrier>
class TypeFold {
 public:
  explicit TypeFold(TypeAlgebra<Carrier> algebra) : algebra_(std::move(algebra)) {}

  Carrier operator()(const Type& t) const {
    std::vector<Carrier> folded;
    folded.reserve(t.args.size());
    for (const Type& a : t.args) folded.push_back((*this)(a));
    auto it = algebra_.find(t.ctor);
    if (it == algebra_.end()) throw Error("type_fold: no operation for constructor " + t.ctor);
    return it->second(std::span<const Carrier>(folded));
  }

 private:
  TypeAlgebra<Carrier> algebra_;
};

template <class Carrier>
TypeFold<Carrier> type_fold(const TypeSignature& sig, TypeAlgebra<Carrier> algebra) {
  for (const TypeConstructor& c : sig.constructors)
    if (!algebra.contains(c.name))
      throw Error("type_fold: missing operation for constructor " + c.name);
  return TypeFold<Carrier>(std::move(algebra));
}

}  // namespace bindsig
