#pragma once

// Renaming and simultaneous substitution on de Bruijn terms: the monad
// structure of the generated language.

#include <functional>
#include <optional>
#include <vector>

#include "bindsig/term.hpp"

namespace bindsig {

struct Renaming {
  Context source;
  Context target;
  std::vector<std::size_t> map;  // source position -> target position
};

struct Substitution {
  Context source;
  Context target;
  std::vector<Term> map;  // source position -> term over target
};

/// Weakening: `source` into `prefix ++ source`.
Renaming weakening(const Context& source, const Context& prefix);
Substitution identity_substitution(const Context& ctx);
/// (sigma ; tau)(i) = subst(sigma(i), tau).
Substitution compose(const TwoSignature& sig, const Substitution& sigma,
                     const Substitution& tau);

bool well_formed(const TwoSignature& sig, const Renaming& rho);
bool well_formed(const TwoSignature& sig, const Substitution& sigma);

Term rename(const TwoSignature& sig, const Term& e, const Renaming& rho);
Term subst(const TwoSignature& sig, const Term& e, const Substitution& sigma);

/// Replaces variable 0 of `body` by `repl` and shifts the other free
/// variables down by one.
Term subst1(const TwoSignature& sig, const Term& body, const Term& repl);

// Index-level primitives shared by the rewrite engine. `images` is indexed
// by free variable; variables at or beyond images.size() are shifted by
// `tail_shift` relative to images.size().
Term shift(const TwoSignature& sig, const Term& e, std::size_t by, std::size_t cutoff = 0);
Term rename_with(const TwoSignature& sig, const Term& e,
                 const std::function<std::size_t(std::size_t)>& f);
Term subst_images(const TwoSignature& sig, const Term& e, const std::vector<Term>& images,
                  std::size_t tail_shift);

/// Renames free variables through a partial map; fails when a free variable
/// has no image.
std::optional<Term> rename_partial(
    const TwoSignature& sig, const Term& e,
    const std::function<std::optional<std::size_t>(std::size_t)>& f);

}  // namespace bindsig
