#pragma once

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "symcomp/error.hpp"
#include "symcomp/lexer.hpp"
#include "symcomp/symbol.hpp"

namespace symcomp {

enum class Visibility { Public, Private };

struct Name {
  std::string text;
  Visibility visibility = Visibility::Private;

  auto operator<=>(const Name&) const = default;
  bool operator==(const Name&) const = default;

  bool is_public() const { return visibility == Visibility::Public; }
};

inline Name public_name(std::string t) { return {std::move(t), Visibility::Public}; }
inline Name private_name(std::string t) { return {std::move(t), Visibility::Private}; }

struct FnSym {
  std::string name;
  std::size_t arity = 0;

  auto operator<=>(const FnSym&) const = default;
  bool operator==(const FnSym&) const = default;
};

inline std::string to_string(const FnSym& f) { return f.name + "/" + std::to_string(f.arity); }

/// Dolev-Yao term: a name, a symbol (which doubles as a variable), or an
/// application of a function symbol. Immutable; copies share structure.
class Term {
 public:
  enum class Kind { Name, Sym, App };

  static Term name(Name n) { return Term(std::make_shared<const Node>(Node{std::move(n), {}, 1})); }
  static Term name(std::string text, Visibility v) { return name(Name{std::move(text), v}); }
  static Term sym(Symbol s) { return Term(std::make_shared<const Node>(Node{std::move(s), {}, 1})); }
  static Term sym(std::string id) { return sym(Symbol(std::move(id))); }

  /// Application constructor; enforces the arity of `f`.
  static Term app(FnSym f, std::vector<Term> args) {
    if (args.size() != f.arity)
      throw Error(ErrorKind::ArityMismatch, to_string(f) + " applied to " +
                                                std::to_string(args.size()) + " argument(s)");
    std::size_t size = 1;
    for (const auto& a : args) size += a.size();
    return Term(std::make_shared<const Node>(Node{std::move(f), std::move(args), size}));
  }

  Kind kind() const { return static_cast<Kind>(node_->head.index()); }
  bool is_name() const { return kind() == Kind::Name; }
  bool is_sym() const { return kind() == Kind::Sym; }
  bool is_app() const { return kind() == Kind::App; }

  const Name& as_name() const { return std::get<Name>(node_->head); }
  const Symbol& as_sym() const { return std::get<Symbol>(node_->head); }
  const FnSym& fn() const { return std::get<FnSym>(node_->head); }
  const std::vector<Term>& args() const { return node_->args; }

  /// Number of nodes.
  std::size_t size() const { return node_->size; }

  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.node_->head <=> b.node_->head; c != 0) return c;
    const auto& x = a.node_->args;
    const auto& y = b.node_->args;
    if (auto c = x.size() <=> y.size(); c != 0) return c;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (auto c = x[i] <=> y[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const Term& a, const Term& b) { return (a <=> b) == 0; }

 private:
  struct Node {
    std::variant<Name, Symbol, FnSym> head;
    std::vector<Term> args;
    std::size_t size;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

inline Term mk_app(const FnSym& f, std::vector<Term> args) { return Term::app(f, std::move(args)); }

inline std::string to_string(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Name:
      return t.as_name().is_public() ? "'" + t.as_name().text + "'" : t.as_name().text;
    case Term::Kind::Sym:
      return t.as_sym().id;
    case Term::Kind::App: {
      std::string s = t.fn().name;
      if (t.args().empty()) return s;
      s += "(";
      for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i) s += ", ";
        s += to_string(t.args()[i]);
      }
      return s + ")";
    }
  }
  return {};
}

inline void collect_symbols(const Term& t, std::set<Symbol>& out) {
  switch (t.kind()) {
    case Term::Kind::Sym: out.insert(t.as_sym()); break;
    case Term::Kind::App:
      for (const auto& a : t.args()) collect_symbols(a, out);
      break;
    case Term::Kind::Name: break;
  }
}

inline std::set<Symbol> symbols_of(const Term& t) {
  std::set<Symbol> out;
  collect_symbols(t, out);
  return out;
}

inline void collect_subterms(const Term& t, std::set<Term>& out) {
  if (!out.insert(t).second) return;
  if (t.is_app())
    for (const auto& a : t.args()) collect_subterms(a, out);
}

inline bool is_strict_subterm(const Term& sub, const Term& t) {
  if (!t.is_app()) return false;
  for (const auto& a : t.args())
    if (a == sub || is_strict_subterm(sub, a)) return true;
  return false;
}

using Substitution = std::map<Symbol, Term>;

inline Term substitute(const Term& t, const Substitution& s) {
  switch (t.kind()) {
    case Term::Kind::Sym: {
      auto it = s.find(t.as_sym());
      return it == s.end() ? t : it->second;
    }
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args().size());
      for (const auto& a : t.args()) args.push_back(substitute(a, s));
      return Term::app(t.fn(), std::move(args));
    }
    case Term::Kind::Name: return t;
  }
  return t;
}

/// Syntactic matching. Symbols in `pattern` are rule variables; symbols in
/// `subject` are constants. Repeated variables must bind equal terms.
inline bool match(const Term& pattern, const Term& subject, Substitution& binding) {
  switch (pattern.kind()) {
    case Term::Kind::Sym: {
      auto [it, fresh] = binding.emplace(pattern.as_sym(), subject);
      return fresh || it->second == subject;
    }
    case Term::Kind::Name: return subject.is_name() && subject.as_name() == pattern.as_name();
    case Term::Kind::App: {
      if (!subject.is_app() || subject.fn() != pattern.fn()) return false;
      for (std::size_t i = 0; i < pattern.args().size(); ++i)
        if (!match(pattern.args()[i], subject.args()[i], binding)) return false;
      return true;
    }
  }
  return false;
}

/// A rewrite rule lhs -> rhs restricted to the subterm-convergent shape.
class Equation {
 public:
  Equation(Term lhs, Term rhs) : lhs_(std::move(lhs)), rhs_(std::move(rhs)) {
    bool ground_constant = (rhs_.is_app() && rhs_.args().empty()) ||
                           (rhs_.is_name() && rhs_.as_name().is_public());
    if (!is_strict_subterm(rhs_, lhs_) && !ground_constant)
      throw Error(ErrorKind::InvalidEquation,
                  to_string(lhs_) + " = " + to_string(rhs_) +
                      ": right side must be a strict subterm of the left side or a constant");
    auto lhs_syms = symbols_of(lhs_);
    for (const auto& s : symbols_of(rhs_))
      if (!lhs_syms.contains(s))
        throw Error(ErrorKind::InvalidEquation, "variable " + s.id + " of right side not bound");
  }

  const Term& lhs() const { return lhs_; }
  const Term& rhs() const { return rhs_; }

  auto operator<=>(const Equation&) const = default;
  bool operator==(const Equation&) const = default;

 private:
  Term lhs_;
  Term rhs_;
};

using Theory = std::vector<Equation>;

inline std::string to_string(const Equation& e) { return to_string(e.lhs()) + " = " + to_string(e.rhs()); }

namespace detail {

inline Term normalize_rec(const Term& t, const Theory& theory, std::size_t& steps, std::size_t bound) {
  if (!t.is_app()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(normalize_rec(a, theory, steps, bound));
    changed = changed || !(args.back() == a);
  }
  Term cur = changed ? Term::app(t.fn(), std::move(args)) : t;
  for (const auto& eq : theory) {
    Substitution b;
    if (match(eq.lhs(), cur, b)) {
      if (++steps > bound)
        throw Error(ErrorKind::RewriteDepthExceeded, "more than " + std::to_string(bound) + " rewrite steps");
      return normalize_rec(substitute(eq.rhs(), b), theory, steps, bound);
    }
  }
  return cur;
}

}  // namespace detail

inline constexpr std::size_t kDefaultRewriteBound = 100000;

/// Normal form under innermost rewriting with the equations oriented left to
/// right.
inline Term normalize(const Term& t, const Theory& theory, std::size_t bound = kDefaultRewriteBound) {
  std::size_t steps = 0;
  return detail::normalize_rec(t, theory, steps, bound);
}

inline bool eq_mod_E(const Term& a, const Term& b, const Theory& theory) {
  return normalize(a, theory) == normalize(b, theory);
}

/// Function signature; names are unique, so one name has exactly one arity.
class Signature {
 public:
  Signature() = default;
  Signature(std::initializer_list<FnSym> fns) {
    for (const auto& f : fns) add(f);
  }

  void add(const FnSym& f) {
    auto [it, fresh] = fns_.emplace(f.name, f.arity);
    if (!fresh && it->second != f.arity)
      throw Error(ErrorKind::SignatureConflict,
                  f.name + " declared with arities " + std::to_string(it->second) + " and " +
                      std::to_string(f.arity));
  }
  std::optional<FnSym> find(const std::string& name) const {
    auto it = fns_.find(name);
    if (it == fns_.end()) return std::nullopt;
    return FnSym{it->first, it->second};
  }
  bool contains(const FnSym& f) const {
    auto it = fns_.find(f.name);
    return it != fns_.end() && it->second == f.arity;
  }
  std::vector<FnSym> functions() const {
    std::vector<FnSym> out;
    for (const auto& [n, a] : fns_) out.push_back({n, a});
    return out;
  }
  bool empty() const { return fns_.empty(); }
  std::size_t size() const { return fns_.size(); }

  auto operator<=>(const Signature&) const = default;
  bool operator==(const Signature&) const = default;

 private:
  std::map<std::string, std::size_t> fns_;
};

inline std::string to_string(const Signature& sig) {
  std::string s;
  for (const auto& f : sig.functions()) {
    if (!s.empty()) s += ", ";
    s += to_string(f);
  }
  return s;
}

/// Decides what a bare identifier denotes inside a term.
using IdentResolver = std::function<Term(const std::string&)>;

inline IdentResolver symbols_resolver() {
  return [](const std::string& id) { return Term::sym(id); };
}

/// Parses one term from the lexer: `ident`, `'public'`, or `f(t1,...,tn)`.
/// Function arities are taken from `sig` when the name is declared there,
/// otherwise from the argument count.
inline Term parse_term(Lexer& lx, const Signature& sig, const IdentResolver& resolve) {
  const Token& t = lx.peek();
  if (t.kind == Token::Kind::Quoted || t.kind == Token::Kind::Number) {
    auto text = lx.next().text;
    return Term::name(public_name(std::move(text)));
  }
  if (t.kind != Token::Kind::Ident) lx.fail("expected term");
  std::string id = lx.next().text;
  if (lx.accept("(")) {
    std::vector<Term> args;
    if (!lx.is(")")) {
      do {
        args.push_back(parse_term(lx, sig, resolve));
      } while (lx.accept(","));
    }
    lx.expect(")");
    FnSym f{id, args.size()};
    if (auto declared = sig.find(id)) f = *declared;
    return Term::app(f, std::move(args));
  }
  if (auto declared = sig.find(id); declared && declared->arity == 0) return Term::app(*declared, {});
  return resolve(id);
}

inline Term parse_term(const std::string& text, const Signature& sig = {},
                       const IdentResolver& resolve = symbols_resolver()) {
  Lexer lx(text);
  Term t = parse_term(lx, sig, resolve);
  if (!lx.at_end()) lx.fail("trailing input after term");
  return t;
}

/// Parses `lhs = rhs`; identifiers are rule variables.
inline Equation parse_equation(const std::string& text, const Signature& sig) {
  Lexer lx(text);
  Term lhs = parse_term(lx, sig, symbols_resolver());
  lx.expect("=");
  Term rhs = parse_term(lx, sig, symbols_resolver());
  if (!lx.at_end()) lx.fail("trailing input after equation");
  return Equation(std::move(lhs), std::move(rhs));
}

}  // namespace symcomp
