#pragma once

#include <string>

#include "bindsig/dsl.hpp"
#include "bindsig/langs.hpp"

namespace th {

using namespace bindsig;

inline const TwoSignature& TLC() { return builtin_signature("TLC"); }
inline const TwoSignature& PCF() { return builtin_signature("PCF"); }
inline const TwoSignature& ULC() { return builtin_signature("ULC"); }

inline Type ty(const TwoSignature& sig, const std::string& text) {
  return parse_type(sig.types, text);
}

inline Context cx(const TwoSignature& sig, const std::string& text) {
  return parse_context(sig.types, text);
}

inline Term pt(const TwoSignature& sig, const std::string& ctx, const std::string& text) {
  return parse_term(sig, parse_context(sig.types, ctx), text);
}

inline Type iota() { return Type("iota"); }
inline Type arrow(Type a, Type b) { return Type("=>", {std::move(a), std::move(b)}); }
inline Type nat() { return Type("Nat"); }
inline Type boolean() { return Type("Bool"); }
inline Type star() { return Type("star"); }

}  // namespace th
