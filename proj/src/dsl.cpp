#include "bindsig/dsl.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <sstream>

namespace bindsig {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& reason)
    : Error(reason), line_(line), column_(column) {}

std::string ParseError::position() const {
  return std::to_string(line_) + ":" + std::to_string(column_);
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '?' || c == '\'';
}

bool is_identifier(std::string_view s) {
  if (s.empty() || !ident_start(s[0])) return false;
  for (char c : s)
    if (!ident_char(c)) return false;
  return true;
}

std::optional<std::size_t> bound_index(std::string_view s) {
  if (s.size() < 2 || s[0] != 'v') return std::nullopt;
  std::size_t k = 0;
  auto [p, ec] = std::from_chars(s.data() + 1, s.data() + s.size(), k);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return k;
}

template <class T, class F>
std::string join(const std::vector<T>& xs, std::string_view sep, F f) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += f(xs[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lexer

struct Token {
  enum class Kind { ident, number, string, punct, end };
  Kind kind = Kind::end;
  std::string text;
  std::size_t line = 1, column = 1;
};

std::vector<Token> tokenize(std::string_view src, std::size_t first_line = 1) {
  std::vector<Token> out;
  std::size_t line = first_line, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k, ++i) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.line = line;
    t.column = col;
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      t.kind = Token::Kind::ident;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = Token::Kind::number;
      t.text = std::string(src.substr(i, j - i));
      advance(j - i);
    } else if (c == '"') {
      advance(1);
      t.kind = Token::Kind::string;
      while (true) {
        if (i >= src.size() || src[i] == '\n')
          throw ParseError(t.line, t.column, "unterminated string");
        if (src[i] == '"') break;
        if (src[i] == '\\' && i + 1 < src.size()) advance(1);
        t.text += src[i];
        advance(1);
      }
      advance(1);
    } else {
      static const char* const two[] = {":=", "<=", "->"};
      t.kind = Token::Kind::punct;
      for (const char* p : two)
        if (src.substr(i, 2) == p) t.text = p;
      if (t.text.empty()) {
        if (std::string_view("(){}[],;:").find(c) == std::string_view::npos)
          throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        t.text = std::string(1, c);
      }
      advance(t.text.size());
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.line = line;
  end.column = col;
  out.push_back(end);
  return out;
}

// ---------------------------------------------------------------------------
// Parser base

class Parser {
 public:
  explicit Parser(std::string_view src, std::size_t first_line = 1)
      : toks_(tokenize(src, first_line)) {}

  const Token& peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::Kind::end; }

  Token next() {
    Token t = peek();
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& t, const std::string& reason) const {
    throw ParseError(t.line, t.column, reason);
  }
  [[noreturn]] void fail(const std::string& reason) const { fail(peek(), reason); }

  static std::string describe(const Token& t) {
    switch (t.kind) {
      case Token::Kind::end: return "end of input";
      case Token::Kind::string: return "\"" + t.text + "\"";
      default: return "'" + t.text + "'";
    }
  }

  bool is_punct(std::string_view p, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::punct && peek(k).text == p;
  }
  bool is_keyword(std::string_view w, std::size_t k = 0) const {
    return peek(k).kind == Token::Kind::ident && peek(k).text == w;
  }
  bool accept(std::string_view p) {
    if (!is_punct(p)) return false;
    next();
    return true;
  }
  void expect(std::string_view p) {
    if (!accept(p)) fail("expected '" + std::string(p) + "', found " + describe(peek()));
  }
  void expect_keyword(std::string_view w) {
    if (!is_keyword(w)) fail("expected '" + std::string(w) + "', found " + describe(peek()));
    next();
  }
  void expect_end() {
    if (!at_end()) fail("unexpected " + describe(peek()));
  }

  std::string name() {
    if (peek().kind != Token::Kind::ident && peek().kind != Token::Kind::string)
      fail("expected a name, found " + describe(peek()));
    return next().text;
  }

  std::uint64_t number() {
    if (peek().kind != Token::Kind::number) fail("expected a number, found " + describe(peek()));
    Token t = next();
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc()) fail(t, "number out of range");
    return v;
  }

  TypeTerm type_term() {
    if (peek().kind == Token::Kind::number) {
      Token t = peek();
      std::uint64_t k = number();
      if (k == 0) fail(t, "metavariables are numbered from 1");
      return TypeTerm::var(k);
    }
    std::string n = name();
    std::vector<TypeTerm> args;
    if (accept("(")) {
      do args.push_back(type_term());
      while (accept(","));
      expect(")");
    }
    return TypeTerm::apply(std::move(n), std::move(args));
  }

  Type closed_type(const TypeSignature& sig) {
    Token at = peek();
    TypeTerm s = type_term();
    if (auto why = check_type_term(sig, s, 0)) fail(at, *why);
    return *to_closed(s);
  }

  std::vector<TypeTerm> type_term_list(std::string_view open, std::string_view close) {
    expect(open);
    std::vector<TypeTerm> out;
    if (!is_punct(close)) {
      do out.push_back(type_term());
      while (accept(","));
    }
    expect(close);
    return out;
  }

  Context context(const TypeSignature& sig) {
    expect("[");
    Context out;
    if (!is_punct("]")) {
      do out.push_back(closed_type(sig));
      while (accept(","));
    }
    expect("]");
    return out;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Terms

struct RawTerm {
  bool is_var = false;
  std::size_t index = 0;
  std::string name;
  std::optional<std::vector<Type>> tvec;
  std::optional<std::uint64_t> numeral;
  std::vector<RawTerm> args;
  Token at;
};

class TermParser : public Parser {
 public:
  TermParser(const TwoSignature& sig, std::string_view src, std::size_t first_line = 1)
      : Parser(src, first_line), sig_(sig) {}

  RawTerm raw() {
    RawTerm r;
    r.at = peek();
    if (!accept("(")) {
      r.name = name();
      if (sig_.find_arity(r.name) == nullptr) fail(r.at, "unknown constructor " + r.name);
      return r;
    }
    if (is_keyword("var") && peek(1).kind == Token::Kind::number) {
      next();
      r.is_var = true;
      r.index = number();
    } else if (is_keyword("num") && peek(1).kind == Token::Kind::number &&
               (sig_.find_arity("num") == nullptr || sig_.find_arity("num")->nat_indexed)) {
      next();
      const Arity* fam = sig_.numeral_family();
      if (fam == nullptr) fail(r.at, "signature has no numeral family");
      r.name = fam->name;
      r.numeral = number();
    } else {
      if (is_keyword("con") && peek(1).kind != Token::Kind::punct) next();
      Token at = peek();
      r.name = name();
      const Arity* a = sig_.find_arity(r.name);
      if (a == nullptr) fail(at, "unknown constructor " + r.name);
      if (is_punct("{")) {
        next();
        std::vector<Type> tv;
        if (!is_punct("}")) {
          do tv.push_back(closed_type(sig_.types));
          while (accept(","));
        }
        expect("}");
        r.tvec = std::move(tv);
      }
      if (a->nat_indexed && peek().kind == Token::Kind::number) r.numeral = number();
      while (!is_punct(")")) {
        if (at_end()) fail("expected ')', found end of input");
        r.args.push_back(raw());
      }
    }
    expect(")");
    return r;
  }

  Term term(const Context& ctx, const std::optional<Type>& expected) {
    RawTerm r = raw();
    std::optional<TypeTerm> hint;
    if (expected) hint = to_type_term(*expected);
    return elaborate(r, ctx, hint).first;
  }

  // `expected` is a type pattern whose metavariables are unknown parts.
  std::pair<Term, Type> elaborate(const RawTerm& r, const Context& ctx,
                                  const std::optional<TypeTerm>& expected) {
    if (r.is_var) {
      if (r.index >= ctx.size())
        fail(r.at, "unbound variable " + std::to_string(r.index) + " in a context of length " +
                       std::to_string(ctx.size()));
      check_expected(r, ctx[r.index], expected);
      return {Term::var(r.index), ctx[r.index]};
    }
    const Arity& a = *sig_.find_arity(r.name);
    if (r.args.size() != a.args.size())
      fail(r.at, r.name + " expects " + std::to_string(a.args.size()) + " arguments, got " +
                     std::to_string(r.args.size()));
    if (a.nat_indexed && !r.numeral) fail(r.at, r.name + " needs a numeral index");
    if (!a.nat_indexed && r.numeral) fail(r.at, r.name + " takes no numeral index");

    std::vector<std::optional<Type>> known(a.degree);
    std::vector<TypeTerm> hints(a.degree, TypeTerm::var(1));
    if (r.tvec) {
      if (r.tvec->size() != a.degree)
        fail(r.at, "degree mismatch: " + r.name + " has degree " + std::to_string(a.degree) +
                       ", got " + std::to_string(r.tvec->size()) + " types");
      for (std::size_t k = 0; k < a.degree; ++k) known[k] = (*r.tvec)[k];
    } else if (expected) {
      auto trial = known;
      auto trial_hints = hints;
      if (seed(a.result, *expected, trial, trial_hints)) {
        known = std::move(trial);
        hints = std::move(trial_hints);
      }
    }

    auto determined = [&](const TypeTerm& s) {
      for (std::size_t k = 1; k <= max_meta(s); ++k)
        if (!known[k - 1] && mentions(s, k)) return false;
      return true;
    };
    auto at = [&](const TypeTerm& s) {
      std::vector<Type> tv;
      for (auto& k : known) tv.push_back(k ? *k : Type());
      return instantiate(s, tv);
    };

    // Arguments whose type is already forced go first. Otherwise each ready
    // argument is tried without an expected type until one succeeds.
    std::vector<std::optional<Term>> args(r.args.size());
    auto ready = [&](std::size_t j) {
      if (args[j]) return false;
      for (const TypeTerm& b : a.args[j].binders)
        if (!determined(b)) return false;
      return true;
    };
    auto attempt = [&](std::size_t j) {
      const ArgumentSpec& spec = a.args[j];
      std::vector<Type> binders;
      for (const TypeTerm& b : spec.binders) binders.push_back(at(b));
      auto [t, got] = elaborate(r.args[j], extend(ctx, binders), partial(spec.type, known, hints));
      if (!match_type(spec.type, got, known))
        fail(r.args[j].at, "type mismatch in argument " + std::to_string(j) + " of " + r.name +
                               ": got " + print_type(got));
      args[j] = std::move(t);
    };
    for (bool progress = true; progress;) {
      progress = false;
      for (std::size_t j = 0; j < r.args.size() && !progress; ++j) {
        if (ready(j) && determined(a.args[j].type)) {
          attempt(j);
          progress = true;
        }
      }
      std::optional<ParseError> first;
      for (std::size_t j = 0; j < r.args.size() && !progress; ++j) {
        if (!ready(j)) continue;
        auto saved = known;
        try {
          attempt(j);
          progress = true;
        } catch (const ParseError& e) {
          known = std::move(saved);
          if (!first) first = e;
        }
      }
      if (!progress && first) throw *first;
    }
    for (std::size_t k = 0; k < a.degree; ++k)
      if (!known[k]) fail(r.at, "cannot infer the type vector of " + r.name);
    for (auto& t : args)
      if (!t) fail(r.at, "cannot infer the type vector of " + r.name);

    Term out;
    out.kind = Term::Kind::con;
    out.name = r.name;
    for (auto& k : known) out.tvec.push_back(*k);
    out.numeral = r.numeral;
    for (auto& t : args) out.args.push_back(std::move(*t));
    Type result = instantiate(a.result, out.tvec);
    check_expected(r, result, expected);
    return {std::move(out), std::move(result)};
  }

 private:
  static bool mentions(const TypeTerm& s, std::size_t k) {
    if (s.is_meta()) return s.meta == k;
    for (const TypeTerm& a : s.args)
      if (mentions(a, k)) return true;
    return false;
  }

  // Known metavariables become closed types, unknown ones stay holes.
  static TypeTerm partial(const TypeTerm& s, const std::vector<std::optional<Type>>& known,
                          const std::vector<TypeTerm>& hints) {
    if (s.is_meta())
      return known[s.meta - 1] ? to_type_term(*known[s.meta - 1]) : hints[s.meta - 1];
    TypeTerm out = s;
    for (TypeTerm& a : out.args) a = partial(a, known, hints);
    return out;
  }

  // Combines two partial types; false on a clash.
  static bool meet(TypeTerm& into, const TypeTerm& p) {
    if (p.is_meta()) return true;
    if (into.is_meta()) {
      into = p;
      return true;
    }
    if (into.ctor != p.ctor || into.args.size() != p.args.size()) return false;
    for (std::size_t i = 0; i < p.args.size(); ++i)
      if (!meet(into.args[i], p.args[i])) return false;
    return true;
  }

  static bool fits(const Type& t, const TypeTerm& p) {
    if (p.is_meta()) return true;
    if (p.ctor != t.ctor || p.args.size() != t.args.size()) return false;
    for (std::size_t i = 0; i < p.args.size(); ++i)
      if (!fits(t.args[i], p.args[i])) return false;
    return true;
  }

  static bool seed(const TypeTerm& pattern, const TypeTerm& p,
                   std::vector<std::optional<Type>>& known, std::vector<TypeTerm>& hints) {
    if (p.is_meta()) return true;
    if (pattern.is_meta()) {
      auto closed = to_closed(p);
      if (!closed) return meet(hints[pattern.meta - 1], p);
      auto& slot = known[pattern.meta - 1];
      if (slot) return *slot == *closed;
      slot = std::move(*closed);
      return true;
    }
    if (pattern.ctor != p.ctor || pattern.args.size() != p.args.size()) return false;
    for (std::size_t i = 0; i < p.args.size(); ++i)
      if (!seed(pattern.args[i], p.args[i], known, hints)) return false;
    return true;
  }

  void check_expected(const RawTerm& r, const Type& got, const std::optional<TypeTerm>& expected) {
    if (expected && !fits(got, *expected))
      fail(r.at, "type mismatch: expected " + print_type_term(*expected) + ", got " +
                     print_type(got));
  }

  const TwoSignature& sig_;
};

// ---------------------------------------------------------------------------
// Templates

struct MetaNames {
  std::map<std::string, std::size_t, std::less<>> index;
  const TemplateScope* scope = nullptr;
};

class TemplateParser : public Parser {
 public:
  TemplateParser(std::string_view src, std::size_t first_line = 1) : Parser(src, first_line) {}

  TemplateTerm tmpl(const TwoSignature& sig, const MetaNames& metas) {
    Token at = peek();
    bool quoted = at.kind == Token::Kind::string;
    std::string n = name();
    if (!quoted) {
      if (auto k = bound_index(n)) return TemplateTerm::bound(*k);
      if (n == "iter" && is_punct("{")) {
        TypeTerm acc = braced_type();
        expect("(");
        NumeralRef count = numeral_ref();
        expect(",");
        TemplateTerm body = tmpl(sig, metas);
        expect(",");
        TemplateTerm base = tmpl(sig, metas);
        expect(")");
        return TemplateTerm::iterate(count, std::move(acc), std::move(body), std::move(base));
      }
      if (n == "subst" && is_punct("{")) {
        TypeTerm bound = braced_type();
        expect("(");
        TemplateTerm body = tmpl(sig, metas);
        expect(",");
        TemplateTerm repl = tmpl(sig, metas);
        expect(")");
        return TemplateTerm::subst(std::move(body), std::move(bound), std::move(repl));
      }
      if (auto it = metas.index.find(n); it != metas.index.end()) return meta(sig, metas, it->second, at);
    }
    std::vector<TypeTerm> tys;
    if (is_punct("{")) tys = type_term_list("{", "}");
    const Arity* a = sig.find_arity(n);
    if (a != nullptr && a->nat_indexed && is_punct("(")) {
      next();
      NumeralRef k = numeral_ref();
      expect(")");
      TemplateTerm t = TemplateTerm::numeral_con(n, k);
      t.type_args = std::move(tys);
      return t;
    }
    std::vector<TemplateTerm> args;
    if (accept("(")) {
      do args.push_back(tmpl(sig, metas));
      while (accept(","));
      expect(")");
    }
    return TemplateTerm::con(std::move(n), std::move(tys), std::move(args));
  }

 private:
  TypeTerm braced_type() {
    expect("{");
    TypeTerm t = type_term();
    expect("}");
    return t;
  }

  NumeralRef numeral_ref() {
    if (is_keyword("n")) {
      next();
      return NumeralRef::index();
    }
    return NumeralRef::literal(number());
  }

  TemplateTerm meta(const TwoSignature& sig, const MetaNames& metas, std::size_t k,
                    const Token& at) {
    if (!accept("[")) return TemplateTerm::metavar(k);
    if (peek().kind == Token::Kind::number && is_punct(":=", 1)) {
      Token idx = peek();
      if (number() != 0) fail(idx, "only the newest bound variable can be substituted");
      next();
      TemplateTerm repl = tmpl(sig, metas);
      expect("]");
      const MetaVarDecl& d = metas.scope->metavars[k];
      if (d.binders.size() != 1)
        fail(at, "substitution sugar needs a metavariable with exactly one binder");
      return TemplateTerm::subst(TemplateTerm::metavar(k, {TemplateTerm::bound(0)}), d.binders[0],
                                 std::move(repl));
    }
    std::vector<TemplateTerm> inst;
    if (!is_punct("]")) {
      do inst.push_back(tmpl(sig, metas));
      while (accept(","));
    }
    expect("]");
    return TemplateTerm::metavar(k, std::move(inst));
  }
};

std::string numeral_text(const NumeralRef& k) {
  return k.scheme ? std::string("n") : std::to_string(k.value);
}

std::string print_template_rec(const TemplateTerm& t, const TemplateScope& scope,
                               const TwoSignature& sig) {
  using K = TemplateTerm::Kind;
  auto rec = [&](const TemplateTerm& u) { return print_template_rec(u, scope, sig); };
  auto meta_name = [&](std::size_t k) {
    return k < scope.metavars.size() ? print_name(scope.metavars[k].name)
                                     : "?" + std::to_string(k);
  };
  switch (t.kind) {
    case K::bound_var: return "v" + std::to_string(t.index);
    case K::meta: {
      std::string out = meta_name(t.index);
      if (!t.args.empty()) out += "[" + join(t.args, ", ", rec) + "]";
      return out;
    }
    case K::subst1: {
      const TemplateTerm& body = t.args[0];
      if (body.kind == K::meta && body.index < scope.metavars.size() &&
          body.args == std::vector<TemplateTerm>{TemplateTerm::bound(0)} &&
          scope.metavars[body.index].binders == t.type_args)
        return meta_name(body.index) + "[0 := " + rec(t.args[1]) + "]";
      return "subst{" + print_type_term(t.type_args[0]) + "}(" + rec(body) + ", " +
             rec(t.args[1]) + ")";
    }
    case K::iterate:
      return "iter{" + print_type_term(t.type_args[0]) + "}(" + numeral_text(*t.numeral) + ", " +
             rec(t.args[0]) + ", " + rec(t.args[1]) + ")";
    case K::ctor: {
      std::string out = print_name(t.name);
      if (!t.type_args.empty()) out += "{" + join(t.type_args, ",", print_type_term) + "}";
      if (t.numeral) return out + "(" + numeral_text(*t.numeral) + ")";
      if (!t.args.empty()) out += "(" + join(t.args, ", ", rec) + ")";
      return out;
    }
  }
  return {};
}

MetaNames names_of(const TemplateScope& scope) {
  MetaNames m;
  m.scope = &scope;
  for (std::size_t k = 0; k < scope.metavars.size(); ++k) m.index.emplace(scope.metavars[k].name, k);
  return m;
}

std::string print_arg_spec(const ArgumentSpec& a) {
  return "[" + join(a.binders, ",", print_type_term) + "] " + print_type_term(a.type);
}

std::string print_flags(bool extension) { return extension ? "extension " : ""; }

}  // namespace

// ---------------------------------------------------------------------------
// Printers

std::string print_name(std::string_view name) {
  if (is_identifier(name)) return std::string(name);
  std::string out = "\"";
  for (char c : name) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string print_type_term(const TypeTerm& s) {
  if (s.is_meta()) return std::to_string(s.meta);
  std::string out = print_name(s.ctor);
  if (!s.args.empty()) out += "(" + join(s.args, ",", print_type_term) + ")";
  return out;
}

std::string print_type(const Type& t) { return print_type_term(to_type_term(t)); }

std::string print_context(const Context& ctx) { return "[" + join(ctx, ", ", print_type) + "]"; }

std::string print_term(const Term& e) {
  if (e.is_var()) return "(var " + std::to_string(e.index) + ")";
  if (e.numeral && e.tvec.empty() && e.args.empty())
    return "(" + print_name(e.name) + " " + std::to_string(*e.numeral) + ")";
  if (e.tvec.empty() && e.args.empty()) return print_name(e.name);
  std::string out = "(" + print_name(e.name);
  if (!e.tvec.empty()) out += " {" + join(e.tvec, ",", print_type) + "}";
  if (e.numeral) out += " " + std::to_string(*e.numeral);
  for (const Term& a : e.args) out += " " + print_term(a);
  return out + ")";
}

std::string print_template(const TemplateTerm& t, const TemplateScope& scope,
                           const TwoSignature& sig) {
  return print_template_rec(t, scope, sig);
}

std::string print_signature(const TwoSignature& sig) {
  std::ostringstream out;
  out << "signature " << print_name(sig.name) << ";\n";
  out << "types { "
      << join(sig.types.constructors, "; ",
              [](const TypeConstructor& c) { return print_name(c.name) + ":" + std::to_string(c.arity); })
      << " }\n";
  if (!sig.terms.empty()) out << "\n";
  for (const Arity& a : sig.terms) {
    out << print_flags(a.extension);
    if (a.nat_indexed) {
      out << "family " << print_name(a.name) << " : " << print_type_term(a.result) << ";\n";
      continue;
    }
    out << "term " << print_name(a.name) << "[" << a.degree << "] : ("
        << join(a.args, ", ", print_arg_spec) << ") -> (" << print_type_term(a.result) << ");\n";
  }
  if (!sig.rules.empty()) out << "\n";
  for (const InequationTemplate& r : sig.rules) {
    TemplateScope scope{r.degree, r.metavars, r.nat_scheme};
    out << print_flags(r.extension) << "rule " << print_name(r.name) << "[" << r.degree << "] "
        << (r.nat_scheme ? "scheme " : "") << "{"
        << (r.metavars.empty() ? "" : " " + join(r.metavars, "; ", [](const MetaVarDecl& m) {
              return print_name(m.name) + ":[" + join(m.binders, ",", print_type_term) + "]" +
                     print_type_term(m.type);
            }) + " ")
        << "} : " << print_template(r.lhs, scope, sig) << " <= "
        << print_template(r.rhs, scope, sig) << " : " << print_type_term(r.result_type) << ";\n";
  }
  return out.str();
}

std::string print_representation(const Representation& rep, const std::string& source_ref,
                                 const std::string& target_ref) {
  auto ref = [](const std::string& given, const std::string& fallback) {
    if (given.empty()) return print_name(fallback);
    return given.size() > 1 && given.front() == '"' ? given : print_name(given);
  };
  std::ostringstream out;
  out << "representation " << print_name(rep.name) << " : " << ref(source_ref, rep.source.name)
      << " -> " << ref(target_ref, rep.target.name) << ";\n";
  if (!rep.types.algebra.empty()) out << "\n";
  for (const TypeConstructor& c : rep.source.types.constructors)
    if (auto it = rep.types.algebra.find(c.name); it != rep.types.algebra.end())
      out << "type " << print_name(c.name) << " := " << print_type_term(it->second) << ";\n";
  if (!rep.images.empty()) out << "\n";
  for (const ArityImage& img : rep.images) {
    out << "term " << print_name(img.arity);
    if (!img.arg_names.empty()) out << "(" << join(img.arg_names, ", ", print_name) << ")";
    std::string body;
    if (const Arity* a = rep.source.find_arity(img.arity)) {
      TemplateScope scope;
      try {
        scope = rep.image_scope(*a, &img);
      } catch (const Error&) {
        for (const std::string& n : img.arg_names) scope.metavars.push_back({n, {}, {}});
      }
      body = print_template(img.image, scope, rep.target);
    } else {
      TemplateScope scope;
      for (const std::string& n : img.arg_names) scope.metavars.push_back({n, {}, {}});
      body = print_template(img.image, scope, rep.target);
    }
    out << " := " << body << ";\n";
  }
  return out.str();
}

std::string print_representation(const ParsedRepresentation& parsed) {
  auto ref = [](const std::string& r, bool quoted) {
    return quoted && is_identifier(r) ? "\"" + r + "\"" : r;
  };
  return print_representation(parsed.rep, ref(parsed.source_ref, parsed.source_quoted),
                              ref(parsed.target_ref, parsed.target_quoted));
}

std::string print_trace(const Trace& trace) {
  std::string out = "start " + print_term(trace.start) + "\n";
  for (const TraceStep& s : trace.steps)
    out += render_path(s.position.path) + " " + print_name(s.position.rule) + " " +
           print_term(s.result) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Parsers

Type parse_type(const TypeSignature& sig, std::string_view text) {
  Parser p(text);
  Type t = p.closed_type(sig);
  p.expect_end();
  return t;
}

Context parse_context(const TypeSignature& sig, std::string_view text) {
  Parser p(text);
  Context c = p.context(sig);
  p.expect_end();
  return c;
}

Term parse_term(const TwoSignature& sig, const Context& ctx, std::string_view text,
                const std::optional<Type>& expected) {
  TermParser p(sig, text);
  Term t = p.term(ctx, expected);
  p.expect_end();
  typecheck(sig, ctx, t);
  return t;
}

TwoSignature parse_signature(std::string_view text) {
  TemplateParser p(text);
  TwoSignature sig;
  p.expect_keyword("signature");
  sig.name = p.name();
  p.expect(";");
  p.expect_keyword("types");
  p.expect("{");
  while (!p.is_punct("}")) {
    TypeConstructor c;
    c.name = p.name();
    p.expect(":");
    c.arity = p.number();
    sig.types.constructors.push_back(std::move(c));
    if (!p.accept(";")) break;
  }
  p.expect("}");

  while (!p.at_end()) {
    bool extension = false;
    if (p.is_keyword("extension")) {
      p.next();
      extension = true;
    }
    if (p.is_keyword("family")) {
      p.next();
      Arity a;
      a.name = p.name();
      a.nat_indexed = true;
      a.extension = extension;
      p.expect(":");
      a.result = p.type_term();
      p.expect(";");
      sig.terms.push_back(std::move(a));
    } else if (p.is_keyword("term")) {
      p.next();
      Arity a;
      a.name = p.name();
      a.extension = extension;
      p.expect("[");
      a.degree = p.number();
      p.expect("]");
      p.expect(":");
      p.expect("(");
      if (!p.is_punct(")")) {
        do {
          ArgumentSpec spec;
          spec.binders = p.type_term_list("[", "]");
          spec.type = p.type_term();
          a.args.push_back(std::move(spec));
        } while (p.accept(","));
      }
      p.expect(")");
      p.expect("->");
      p.expect("(");
      a.result = p.type_term();
      p.expect(")");
      p.expect(";");
      sig.terms.push_back(std::move(a));
    } else if (p.is_keyword("rule")) {
      p.next();
      InequationTemplate r;
      r.name = p.name();
      r.extension = extension;
      p.expect("[");
      r.degree = p.number();
      p.expect("]");
      if (p.is_keyword("scheme")) {
        p.next();
        r.nat_scheme = true;
      }
      p.expect("{");
      while (!p.is_punct("}")) {
        MetaVarDecl m;
        Token at = p.peek();
        m.name = p.name();
        if (bound_index(m.name)) p.fail(at, "metavariable name " + m.name + " is reserved");
        p.expect(":");
        m.binders = p.type_term_list("[", "]");
        m.type = p.type_term();
        r.metavars.push_back(std::move(m));
        if (!p.accept(";")) break;
      }
      p.expect("}");
      p.expect(":");
      TemplateScope scope{r.degree, r.metavars, r.nat_scheme};
      MetaNames names = names_of(scope);
      r.lhs = p.tmpl(sig, names);
      p.expect("<=");
      r.rhs = p.tmpl(sig, names);
      p.expect(":");
      r.result_type = p.type_term();
      p.expect(";");
      sig.rules.push_back(std::move(r));
    } else {
      p.fail("expected 'term', 'family' or 'rule', found " + Parser::describe(p.peek()));
    }
  }
  return sig;
}

ParsedRepresentation parse_representation(std::string_view text,
                                          const SignatureResolver& resolve) {
  TemplateParser p(text);
  ParsedRepresentation out;
  Representation& rep = out.rep;
  p.expect_keyword("representation");
  rep.name = p.name();
  p.expect(":");
  auto reference = [&](std::string& ref, bool& quoted, TwoSignature& sig) {
    Token at = p.peek();
    quoted = at.kind == Token::Kind::string;
    ref = p.name();
    try {
      sig = resolve(ref, quoted);
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      p.fail(at, e.what());
    }
  };
  reference(out.source_ref, out.source_quoted, rep.source);
  p.expect("->");
  reference(out.target_ref, out.target_quoted, rep.target);
  p.expect(";");
  rep.types.source = rep.source.types;
  rep.types.target = rep.target.types;

  while (!p.at_end()) {
    if (p.is_keyword("type")) {
      p.next();
      Token at = p.peek();
      std::string c = p.name();
      p.expect(":=");
      if (!rep.types.algebra.emplace(c, p.type_term()).second)
        p.fail(at, "duplicate type image for " + c);
      p.expect(";");
    } else if (p.is_keyword("term")) {
      p.next();
      Token at = p.peek();
      ArityImage img;
      img.arity = p.name();
      if (p.accept("(")) {
        do img.arg_names.push_back(p.name());
        while (p.accept(","));
        p.expect(")");
      }
      p.expect(":=");
      const Arity* a = rep.source.find_arity(img.arity);
      if (a == nullptr) p.fail(at, "unknown source constructor " + img.arity);
      if (rep.find_image(img.arity) != nullptr) p.fail(at, "duplicate image for " + img.arity);
      TemplateScope scope;
      try {
        scope = rep.image_scope(*a, &img);
      } catch (const Error& e) {
        p.fail(at, e.what());
      }
      // Extra names beyond the arity stay addressable so the checker can
      // report the count mismatch.
      for (std::size_t j = scope.metavars.size(); j < img.arg_names.size(); ++j)
        scope.metavars.push_back({img.arg_names[j], {}, {}});
      img.image = p.tmpl(rep.target, names_of(scope));
      p.expect(";");
      rep.images.push_back(std::move(img));
    } else {
      p.fail("expected 'type' or 'term', found " + Parser::describe(p.peek()));
    }
  }
  return out;
}

Trace parse_trace(const TwoSignature& sig, const Context& ctx, std::string_view text) {
  Trace trace;
  bool started = false;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    ++line_no;
    begin = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      if (end == text.size()) break;
      continue;
    }
    std::size_t sp = line.find(' ');
    if (sp == std::string_view::npos) throw ParseError(line_no, 1, "malformed trace line");
    std::string_view head = line.substr(0, sp);
    if (!started) {
      if (head != "start") throw ParseError(line_no, 1, "trace must begin with 'start'");
      TermParser p(sig, line.substr(sp + 1), line_no);
      trace.start = p.term(ctx, std::nullopt);
      p.expect_end();
      started = true;
      continue;
    }
    Path path;
    if (head != "-") {
      std::size_t from = 0;
      while (true) {
        std::size_t dot = head.find('.', from);
        std::string_view part = head.substr(from, dot == std::string_view::npos ? dot : dot - from);
        std::size_t k = 0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), k);
        if (ec != std::errc() || ptr != part.data() + part.size() || part.empty())
          throw ParseError(line_no, 1, "malformed path " + std::string(head));
        path.push_back(k);
        if (dot == std::string_view::npos) break;
        from = dot + 1;
      }
    }
    TermParser p(sig, line.substr(sp + 1), line_no);
    Token at = p.peek();
    std::string rule_name = p.name();
    const InequationTemplate* rule = sig.find_rule(rule_name);
    if (rule == nullptr) p.fail(at, "unknown rule " + rule_name);
    Term result = p.term(ctx, std::nullopt);
    p.expect_end();

    const Term& cur = trace.last();
    bool found = false;
    for (auto& [pos, next] : step(sig, cur, ctx)) {
      if (pos.path == path && pos.rule == rule_name && next == result) {
        trace.steps.push_back({pos, std::move(result)});
        found = true;
        break;
      }
    }
    if (!found) p.fail(at, "not a reduction step of the previous term");
  }
  if (!started) throw ParseError(line_no == 0 ? 1 : line_no, 1, "empty trace");
  return trace;
}

}  // namespace bindsig
