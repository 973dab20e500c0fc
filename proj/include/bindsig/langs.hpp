#pragma once

// Built-in languages: simply typed and untyped lambda calculus with beta,
// PCF with its reduction rules, and the Church-encoding representation of
// PCF in the untyped calculus.

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bindsig/model.hpp"

namespace bindsig {

TwoSignature tlc();
TwoSignature pcf();
TwoSignature ulc();

/// Church encoding: Turing's fixed point combinator for fix, Church
/// numerals and booleans; every PCF type collapses to the single sort.
Representation pcf_to_ulc();

using CatalogEntry = std::variant<TwoSignature, Representation>;

/// Signatures TLC, PCF, ULC; representations pcf_to_ulc, id_TLC, id_PCF,
/// id_ULC. Throws Error for other names.
CatalogEntry builtin(std::string_view name);
const TwoSignature& builtin_signature(std::string_view name);
Representation builtin_representation(std::string_view name);

std::vector<std::string> catalog_names();

}  // namespace bindsig
