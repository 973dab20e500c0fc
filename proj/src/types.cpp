#include "bindsig/types.hpp"

#include <algorithm>

namespace bindsig {

const TypeConstructor* TypeSignature::find(std::string_view name) const {
  for (const TypeConstructor& c : constructors)
    if (c.name == name) return &c;
  return nullptr;
}

std::size_t Type::size() const {
  std::size_t n = 1;
  for (const Type& a : args) n += a.size();
  return n;
}

TypeTerm TypeTerm::var(std::size_t k) {
  TypeTerm s;
  s.meta = k;
  return s;
}

TypeTerm TypeTerm::apply(std::string name, std::vector<TypeTerm> args) {
  TypeTerm s;
  s.ctor = std::move(name);
  s.args = std::move(args);
  return s;
}

TypeTerm to_type_term(const Type& t) {
  std::vector<TypeTerm> args;
  args.reserve(t.args.size());
  for (const Type& a : t.args) args.push_back(to_type_term(a));
  return TypeTerm::apply(t.ctor, std::move(args));
}

std::optional<Type> to_closed(const TypeTerm& s) {
  if (s.is_meta()) return std::nullopt;
  std::vector<Type> args;
  args.reserve(s.args.size());
  for (const TypeTerm& a : s.args) {
    auto c = to_closed(a);
    if (!c) return std::nullopt;
    args.push_back(std::move(*c));
  }
  return Type(s.ctor, std::move(args));
}

std::size_t max_meta(const TypeTerm& s) {
  if (s.is_meta()) return s.meta;
  std::size_t m = 0;
  for (const TypeTerm& a : s.args) m = std::max(m, max_meta(a));
  return m;
}

std::optional<std::string> check_type_term(const TypeSignature& sig, const TypeTerm& s,
                                           std::size_t degree) {
  if (s.is_meta()) {
    if (s.meta > degree)
      return "metavariable " + std::to_string(s.meta) + " out of range for degree " +
             std::to_string(degree);
    return std::nullopt;
  }
  const TypeConstructor* c = sig.find(s.ctor);
  if (c == nullptr) return "unknown type constructor " + s.ctor;
  if (c->arity != s.args.size())
    return "arity mismatch: " + s.ctor + " expects " + std::to_string(c->arity) +
           " arguments, got " + std::to_string(s.args.size());
  for (const TypeTerm& a : s.args)
    if (auto r = check_type_term(sig, a, degree)) return r;
  return std::nullopt;
}

Type instantiate(const TypeTerm& s, std::span<const Type> tvec) {
  if (s.is_meta()) {
    if (s.meta > tvec.size())
      throw Error("instantiate: degree mismatch (metavariable " + std::to_string(s.meta) +
                  ", vector of length " + std::to_string(tvec.size()) + ")");
    return tvec[s.meta - 1];
  }
  std::vector<Type> args;
  args.reserve(s.args.size());
  for (const TypeTerm& a : s.args) args.push_back(instantiate(a, tvec));
  return Type(s.ctor, std::move(args));
}

TypeTerm substitute_metavars(const TypeTerm& s, std::span<const TypeTerm> ts) {
  if (s.is_meta()) {
    if (s.meta > ts.size())
      throw Error("substitute_metavars: metavariable " + std::to_string(s.meta) +
                  " out of range");
    return ts[s.meta - 1];
  }
  std::vector<TypeTerm> args;
  args.reserve(s.args.size());
  for (const TypeTerm& a : s.args) args.push_back(substitute_metavars(a, ts));
  return TypeTerm::apply(s.ctor, std::move(args));
}

bool match_type(const TypeTerm& pattern, const Type& t,
                std::vector<std::optional<Type>>& assignment) {
  if (pattern.is_meta()) {
    if (pattern.meta > assignment.size()) return false;
    auto& slot = assignment[pattern.meta - 1];
    if (slot) return *slot == t;
    slot = t;
    return true;
  }
  if (pattern.ctor != t.ctor || pattern.args.size() != t.args.size()) return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i)
    if (!match_type(pattern.args[i], t.args[i], assignment)) return false;
  return true;
}

namespace {

// Closed types with exactly `n` nodes, memoized in `by_size`.
const std::vector<Type>& types_of_size(const TypeSignature& sig, std::size_t n,
                                       std::vector<std::vector<Type>>& by_size,
                                       std::vector<bool>& done) {
  if (done[n]) return by_size[n];
  std::vector<Type> out;
  for (const TypeConstructor& c : sig.constructors) {
    if (c.arity == 0) {
      if (n == 1) out.emplace_back(c.name);
      continue;
    }
    if (n < 1 + c.arity) continue;
    // Distribute n-1 nodes over the arguments, each getting at least one.
    std::vector<std::size_t> sizes(c.arity, 1);
    std::size_t extra = n - 1 - c.arity;
    std::function<void(std::size_t, std::size_t)> split = [&](std::size_t pos,
                                                              std::size_t left) {
      if (pos + 1 == c.arity) {
        sizes[pos] = 1 + left;
        std::vector<Type> current;
        std::function<void(std::size_t)> product = [&](std::size_t j) {
          if (j == c.arity) {
            out.emplace_back(c.name, current);
            return;
          }
          for (const Type& a : types_of_size(sig, sizes[j], by_size, done)) {
            current.push_back(a);
            product(j + 1);
            current.pop_back();
          }
        };
        product(0);
        return;
      }
      for (std::size_t k = 0; k <= left; ++k) {
        sizes[pos] = 1 + k;
        split(pos + 1, left - k);
      }
    };
    split(0, extra);
  }
  std::sort(out.begin(), out.end());
  by_size[n] = std::move(out);
  done[n] = true;
  return by_size[n];
}

}  // namespace

std::vector<Type> closed_types(const TypeSignature& sig, std::size_t max_nodes) {
  std::vector<std::vector<Type>> by_size(max_nodes + 1);
  std::vector<bool> done(max_nodes + 1, false);
  std::vector<Type> all;
  for (std::size_t n = 1; n <= max_nodes; ++n) {
    const auto& level = types_of_size(sig, n, by_size, done);
    all.insert(all.end(), level.begin(), level.end());
  }
  return all;
}

void collect_subtypes(const Type& t, std::vector<Type>& out) {
  out.push_back(t);
  for (const Type& a : t.args) collect_subtypes(a, out);
}

}  // namespace bindsig
