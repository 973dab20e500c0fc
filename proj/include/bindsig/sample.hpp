#pragma once

// Seeded random generation of well-typed terms, contexts, substitutions,
// reduction traces and rule instances.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "bindsig/rewrite.hpp"

namespace bindsig {

/// Default seed of every randomized suite.
inline constexpr std::uint64_t default_seed = 20240607;

struct SampleOptions {
  std::size_t max_size = 10;      // term nodes, numerals counting k+1
  std::size_t max_context = 2;
  std::size_t max_type_nodes = 3;
  std::size_t max_numeral = 4;
  std::size_t attempts = 500;
};

struct TypedTerm {
  Context ctx;
  Type type;
  Term term;
};

class Sampler {
 public:
  Sampler(const TwoSignature& sig, std::uint64_t seed, SampleOptions opts = {});

  std::mt19937_64& rng() { return rng_; }
  const SampleOptions& options() const { return opts_; }
  std::size_t below(std::size_t n);  // uniform in [0, n)

  Type type();
  Context context(std::size_t length);
  Context context();  // random length up to max_context

  /// A random term of type `t` over `ctx` with at most `max_size` nodes.
  std::optional<Term> term(const Context& ctx, const Type& t, std::size_t max_size);
  /// A random term with random context (empty if `closed`) and type.
  TypedTerm typed_term(bool closed = false);
  TypedTerm typed_term(std::size_t max_size, bool closed);

  /// A random substitution out of `source` into a fresh random context.
  Substitution substitution(const Context& source, std::size_t max_size = 4);
  Substitution substitution(const Context& source, const Context& target, std::size_t max_size);

  /// A random reduction sequence from `e` of up to `max_steps` steps.
  Trace trace(const Context& ctx, const Term& e, std::size_t max_steps);

 private:
  std::optional<Term> gen(const Context& ctx, const Type& t, std::size_t budget,
                          std::vector<Type>& pool);

  const TwoSignature& sig_;
  SampleOptions opts_;
  std::mt19937_64 rng_;
  std::vector<Type> types_;
};

/// A point of a rule's domain together with the context it lives over.
struct RuleInstance {
  Context ctx;
  MatchEnv env;

  friend bool operator==(const RuleInstance&, const RuleInstance&) = default;
};

struct InstanceOptions {
  std::size_t count = 20;
  std::size_t max_size = 8;
  std::size_t max_context = 3;
  std::size_t max_numeral = 7;
  std::size_t max_type_nodes = 2;
};

/// Environments for `rule` over `sig`: type vectors over small closed types,
/// metavariable values drawn from enumerate, scheme indices and contexts of
/// growing length. Returns fewer than `count` only if the domain is smaller.
std::vector<RuleInstance> sample_rule_instances(const TwoSignature& sig,
                                                const InequationTemplate& rule,
                                                std::uint64_t seed,
                                                const InstanceOptions& opts = {});

}  // namespace bindsig
