#pragma once

// The reduction preorder generated by the inequations of a 2-signature:
// template instantiation and matching, one-step reduction closed under
// congruence, reachability search and normalization.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bindsig/subst.hpp"

namespace bindsig {

/// A point of a rule's domain: closed type vector, optional numeral index,
/// and one term per metavariable over (instantiated binders ++ context).
struct MatchEnv {
  std::vector<Type> tvec;
  std::optional<std::uint64_t> numeral;
  std::vector<Term> metas;

  friend bool operator==(const MatchEnv&, const MatchEnv&) = default;
};

struct RedexPosition {
  Path path;
  std::string rule;
  MatchEnv env;
};

struct TraceStep {
  RedexPosition position;
  Term result;
};

struct Trace {
  Term start;
  std::vector<TraceStep> steps;

  const Term& last() const { return steps.empty() ? start : steps.back().result; }
};

/// Instantiates a closed template at `env`.
Term instantiate_template(const TwoSignature& sig, const TemplateTerm& t, const MatchEnv& env);
Term instantiate_template(const TwoSignature& sig, const InequationTemplate& rule,
                          const MatchEnv& env, Side side, const Context& ctx);

/// Metavariable contexts of `rule` at a type vector: binders ++ ctx, and type.
Context meta_context(const InequationTemplate& rule, std::size_t k,
                     const std::vector<Type>& tvec, const Context& ctx);
Type meta_type(const InequationTemplate& rule, std::size_t k, const std::vector<Type>& tvec);

std::vector<MatchEnv> match_rule(const TwoSignature& sig, const InequationTemplate& rule,
                                 const Term& e, const Context& ctx);

const Term& subterm_at(const Term& e, const Path& path);
Term replace_at(const Term& e, const Path& path, Term replacement);
/// Context of the subterm at `path`.
Context context_at(const TwoSignature& sig, const Context& ctx, const Term& e,
                   const Path& path);

/// All one-step reducts, in leftmost-outermost order of positions and
/// declaration order of rules.
std::vector<std::pair<RedexPosition, Term>> step(const TwoSignature& sig, const Term& e,
                                                 const Context& ctx);

/// The first reduct in leftmost-outermost order, if any.
std::optional<std::pair<RedexPosition, Term>> first_step(const TwoSignature& sig,
                                                          const Term& e, const Context& ctx);

enum class Reachability { yes, no_within_fuel };

struct ReachResult {
  Reachability verdict = Reachability::no_within_fuel;
  std::size_t expanded = 0;
  bool exhausted = false;        // every reachable term was expanded
  std::optional<Trace> witness;  // set when verdict is yes

  bool yes() const { return verdict == Reachability::yes; }
};

/// breadth_first: plain search over step-successors of `a`.
/// hybrid: congruent heads are solved argument by argument, and the
/// breadth-first frontier is interleaved with the leftmost-outermost path,
/// under doubling per-search limits. Both are sound: a yes always carries a
/// valid witness.
enum class Search { breadth_first, hybrid };

/// Searches for a reduction from `a` to `b`; fuel bounds the number of
/// expanded terms over all strategies together.
ReachResult reduces_to(const TwoSignature& sig, const Term& a, const Term& b,
                       const Context& ctx, std::size_t fuel,
                       Search strategy = Search::hybrid);

struct NormalizeResult {
  bool normal_form = false;  // false: step limit reached first
  Trace trace;

  const Term& result() const { return trace.last(); }
};

NormalizeResult normalize(const TwoSignature& sig, const Term& e, const Context& ctx,
                          std::size_t max_steps);

/// Re-checks every step of `trace` by matching and instantiation; returns
/// the reason of the first invalid step.
std::optional<std::string> validate_trace(const TwoSignature& sig, const Context& ctx,
                                          const Trace& trace);

/// Pushes a trace through a substitution: each step is replayed at the same
/// position on the substituted terms.
std::optional<Trace> transport_trace(const TwoSignature& sig, const Trace& trace,
                                     const Substitution& sigma);

}  // namespace bindsig
