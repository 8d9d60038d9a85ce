#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "symcomp/error.hpp"
#include "symcomp/event.hpp"
#include "symcomp/expr.hpp"
#include "symcomp/lexer.hpp"
#include "symcomp/sbir.hpp"
#include "symcomp/term.hpp"

namespace symcomp {

/// Process of the applied-pi fragment: 0, in, out, event, let, new, !, |, +.
class Process {
 public:
  enum class Kind { Nil, In, Out, Event, Let, New, Bang, Par, Choice };

  static Process nil() { return Process(std::make_shared<const Node>(Node{Kind::Nil, {}, {}, {}, {}})); }
  static Process in(Symbol x, Process p) {
    return make(Kind::In, Term::sym(std::move(x)), {}, {}, {std::move(p)});
  }
  static Process out(Term t, Process p) { return make(Kind::Out, std::move(t), {}, {}, {std::move(p)}); }
  static Process event(Term t, Process p) { return make(Kind::Event, std::move(t), {}, {}, {std::move(p)}); }
  static Process let(Term pattern, Term rhs, Process then, Process otherwise = nil()) {
    return make(Kind::Let, std::move(pattern), std::move(rhs), {}, {std::move(then), std::move(otherwise)});
  }
  static Process new_name(Name n, Process p) { return make(Kind::New, {}, {}, std::move(n), {std::move(p)}); }
  static Process bang(Process p) { return make(Kind::Bang, {}, {}, {}, {std::move(p)}); }
  static Process par(Process p, Process q) { return make(Kind::Par, {}, {}, {}, {std::move(p), std::move(q)}); }
  static Process choice(Process p, Process q) {
    return make(Kind::Choice, {}, {}, {}, {std::move(p), std::move(q)});
  }

  Kind kind() const { return node_->kind; }
  bool is_nil() const { return kind() == Kind::Nil; }

  /// In: bound variable; Out/Event: message; Let: pattern.
  const Term& term() const { return *node_->t1; }
  const Symbol& var() const { return node_->t1->as_sym(); }
  const Term& pattern() const { return *node_->t1; }
  const Term& rhs() const { return *node_->t2; }
  const Name& name() const { return *node_->name; }
  const Process& cont() const { return node_->kids.at(0); }
  const Process& then_branch() const { return node_->kids.at(0); }
  const Process& else_branch() const { return node_->kids.at(1); }
  const Process& left() const { return node_->kids.at(0); }
  const Process& right() const { return node_->kids.at(1); }
  const std::vector<Process>& kids() const { return node_->kids; }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& k : kids()) n += k.size();
    return n;
  }

  friend std::strong_ordering operator<=>(const Process& a, const Process& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    const Node& x = *a.node_;
    const Node& y = *b.node_;
    if (auto c = x.kind <=> y.kind; c != 0) return c;
    if (auto c = x.t1 <=> y.t1; c != 0) return c;
    if (auto c = x.t2 <=> y.t2; c != 0) return c;
    if (auto c = x.name <=> y.name; c != 0) return c;
    if (auto c = x.kids.size() <=> y.kids.size(); c != 0) return c;
    for (std::size_t i = 0; i < x.kids.size(); ++i)
      if (auto c = x.kids[i] <=> y.kids[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const Process& a, const Process& b) { return (a <=> b) == 0; }

 private:
  struct Node {
    Kind kind;
    std::optional<Term> t1, t2;
    std::optional<Name> name;
    std::vector<Process> kids;
  };
  static Process make(Kind k, std::optional<Term> t1, std::optional<Term> t2, std::optional<Name> n,
                      std::vector<Process> kids) {
    return Process(std::make_shared<const Node>(Node{k, std::move(t1), std::move(t2), std::move(n), std::move(kids)}));
  }
  explicit Process(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline bool is_prefix(const Process& p) { return p.kind() != Process::Kind::Par && p.kind() != Process::Kind::Choice; }

inline std::string print_process(const Process& p, const std::string& indent);

/// A process in a position where only a prefix form parses.
inline std::string print_prefix_pos(const Process& p, const std::string& indent) {
  if (is_prefix(p)) return print_process(p, indent);
  return "(" + print_process(p, indent) + ")";
}

inline std::string print_cont(const Process& head, const Process& cont, const std::string& indent) {
  (void)head;
  if (cont.is_nil()) return "";
  return "\n" + indent + print_prefix_pos(cont, indent);
}

inline std::string print_process(const Process& p, const std::string& indent) {
  using K = Process::Kind;
  switch (p.kind()) {
    case K::Nil: return "0";
    case K::In: return "in(" + p.var().id + ");" + print_cont(p, p.cont(), indent);
    case K::Out: return "out(" + to_string(p.term()) + ");" + print_cont(p, p.cont(), indent);
    case K::Event: return "event " + to_string(p.term()) + ";" + print_cont(p, p.cont(), indent);
    case K::New: return "new " + p.name().text + ";" + print_cont(p, p.cont(), indent);
    case K::Let: {
      std::string head = "let " + to_string(p.pattern()) + " = " + to_string(p.rhs()) + " in";
      if (p.else_branch().is_nil()) return head + print_cont(p, p.then_branch(), indent);
      return head + "\n" + indent + "(" + print_process(p.then_branch(), indent) + ")\n" + indent + "else " +
             print_prefix_pos(p.else_branch(), indent);
    }
    case K::Bang: return "!" + print_prefix_pos(p.cont(), indent);
    case K::Par: return print_prefix_pos(p.left(), indent) + " | " + print_prefix_pos(p.right(), indent);
    case K::Choice: {
      // Operands of + never contain a bare |.
      auto side = [&](const Process& q) {
        return q.kind() == K::Par ? "(" + print_process(q, indent) + ")" : print_process(q, indent);
      };
      return side(p.left()) + " + " + side(p.right());
    }
  }
  return {};
}

}  // namespace detail

/// Deterministic text: prefix forms end with `;` or `in`, a trailing 0 after a
/// prefix is omitted, `P + Q`, `P | Q`, `!P`.
inline std::string pretty_print(const Process& p) { return detail::print_process(p, ""); }
inline std::string to_string(const Process& p) { return pretty_print(p); }

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline Process parse_proc(Lexer& lx, const Signature& sig);

inline bool starts_prefix(const Lexer& lx) {
  const Token& t = lx.peek();
  if (t.kind == Token::Kind::Number && t.text == "0") return true;
  if (t.kind == Token::Kind::Punct) return t.text == "!" || t.text == "(";
  if (t.kind != Token::Kind::Ident) return false;
  return t.text == "in" || t.text == "out" || t.text == "event" || t.text == "let" || t.text == "new";
}

inline Process parse_prefix(Lexer& lx, const Signature& sig);

inline Process parse_cont(Lexer& lx, const Signature& sig) {
  return starts_prefix(lx) ? parse_prefix(lx, sig) : Process::nil();
}

inline Process parse_prefix(Lexer& lx, const Signature& sig) {
  const Token& t = lx.peek();
  if (t.kind == Token::Kind::Number && t.text == "0") {
    lx.next();
    return Process::nil();
  }
  if (lx.accept("!")) return Process::bang(parse_prefix(lx, sig));
  if (lx.accept("(")) {
    Process p = parse_proc(lx, sig);
    lx.expect(")");
    return p;
  }
  std::string kw = lx.expect_ident();
  if (kw == "in") {
    lx.expect("(");
    std::string x = lx.expect_ident();
    lx.expect(")");
    lx.expect(";");
    return Process::in(Symbol(x), parse_cont(lx, sig));
  }
  if (kw == "out") {
    lx.expect("(");
    Term m = parse_term(lx, sig, symbols_resolver());
    lx.expect(")");
    lx.expect(";");
    return Process::out(m, parse_cont(lx, sig));
  }
  if (kw == "event") {
    Term e = parse_term(lx, sig, symbols_resolver());
    lx.expect(";");
    return Process::event(e, parse_cont(lx, sig));
  }
  if (kw == "new") {
    std::string n = lx.expect_ident();
    lx.expect(";");
    return Process::new_name(private_name(n), parse_cont(lx, sig));
  }
  if (kw == "let") {
    std::string x = lx.expect_ident();
    lx.expect("=");
    Term rhs = parse_term(lx, sig, symbols_resolver());
    lx.expect("in");
    Process then = parse_cont(lx, sig);
    Process otherwise = Process::nil();
    if (lx.accept("else")) otherwise = parse_prefix(lx, sig);
    return Process::let(Term::sym(x), rhs, then, otherwise);
  }
  lx.fail("expected process");
}

inline Process parse_sum(Lexer& lx, const Signature& sig) {
  Process p = parse_prefix(lx, sig);
  while (lx.accept("+")) p = Process::choice(p, parse_prefix(lx, sig));
  return p;
}

inline Process parse_proc(Lexer& lx, const Signature& sig) {
  Process p = parse_sum(lx, sig);
  while (lx.accept("|")) p = Process::par(p, parse_sum(lx, sig));
  return p;
}

}  // namespace detail

inline Process parse_process(const std::string& text, const Signature& sig = {}) {
  Lexer lx(text);
  Process p = detail::parse_proc(lx, sig);
  if (!lx.at_end()) lx.fail("trailing input after process");
  return p;
}

// ---------------------------------------------------------------------------
// Translation of execution trees

inline FnSym translated_binop(BinOp op) {
  switch (op) {
    case BinOp::Xor: return {"xor", 2};
    case BinOp::Add: return {"plus", 2};
    case BinOp::Mul: return {"mult", 2};
    case BinOp::Concat: return {"concat", 2};
    case BinOp::Eq: return {"Equal", 2};
  }
  return {"?", 2};
}

inline std::optional<BinOp> untranslated_binop(const FnSym& f) {
  for (BinOp op : {BinOp::Xor, BinOp::Add, BinOp::Mul, BinOp::Concat, BinOp::Eq})
    if (translated_binop(op) == f) return op;
  return std::nullopt;
}

inline const FnSym kNotSym{"Not", 1};

/// Function symbols introduced by translating bitstring operators.
inline Signature translated_signature() {
  Signature s;
  for (BinOp op : {BinOp::Xor, BinOp::Add, BinOp::Mul, BinOp::Concat, BinOp::Eq}) s.add(translated_binop(op));
  s.add(kNotSym);
  return s;
}

inline bool is_translated_operator(const FnSym& f) { return untranslated_binop(f).has_value() || f == kNotSym; }

/// Constants become public names spelled like the value; equal values give
/// equal names.
inline Term translate_const(const Bval& b) { return Term::name(public_name(value_text(b))); }

inline Term translate_expr(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Const: return translate_const(e.value());
    case Expr::Kind::Var: return Term::sym(e.var_name());
    case Expr::Kind::Sym: return Term::sym(e.symbol());
    case Expr::Kind::Unop:
      if (e.unop() == UnOp::Not) return Term::app(kNotSym, {translate_expr(e.operand())});
      throw Error(ErrorKind::UnmappedOperator, op_text(e.unop()));
    case Expr::Kind::Binop:
      return Term::app(translated_binop(e.binop()), {translate_expr(e.lhs()), translate_expr(e.rhs())});
  }
  throw Error(ErrorKind::UnmappedOperator, "?");
}

inline Bval parse_value_text(const std::string& s) {
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X') &&
      s.find_first_not_of("0123456789abcdefABCDEF", 2) == std::string::npos)
    return Bval::num(std::stoull(s.substr(2), nullptr, 16));
  return Bval::str(s);
}

/// Inverse of translate_expr on its image; nullopt for other terms.
inline std::optional<Expr> untranslate_term(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Name:
      if (!t.as_name().is_public()) return std::nullopt;
      return Expr::constant(parse_value_text(t.as_name().text));
    case Term::Kind::Sym: return Expr::sym(t.as_sym());
    case Term::Kind::App: {
      if (t.fn() == kNotSym) {
        auto a = untranslate_term(t.args()[0]);
        if (!a) return std::nullopt;
        return Expr::unop(UnOp::Not, *a);
      }
      auto op = untranslated_binop(t.fn());
      if (!op) return std::nullopt;
      auto a = untranslate_term(t.args()[0]);
      auto b = untranslate_term(t.args()[1]);
      if (!a || !b) return std::nullopt;
      return Expr::binop(*op, *a, *b);
    }
  }
  return std::nullopt;
}

inline Process translate_tree(const ExecTree& t) {
  switch (t.kind) {
    case ExecTree::Kind::Leaf: return Process::nil();
    case ExecTree::Kind::Branch: return Process::choice(translate_tree(t.left()), translate_tree(t.right()));
    case ExecTree::Kind::Node: break;
  }
  Process rest = translate_tree(t.child());
  const Event& e = *t.event;
  if (auto* x = std::get_if<ev::Ev>(&e)) return Process::event(Term::name(public_name(x->e.id)), rest);
  if (auto* x = std::get_if<ev::A2P>(&e)) return Process::in(x->x, rest);
  if (auto* x = std::get_if<ev::P2A>(&e)) return Process::out(Term::sym(x->x), rest);
  if (auto* x = std::get_if<ev::FCall>(&e)) {
    std::vector<Term> args;
    for (const auto& a : x->args) args.push_back(Term::sym(a));
    return Process::let(Term::sym(x->result), Term::app(x->f, std::move(args)), rest, Process::nil());
  }
  if (auto* x = std::get_if<ev::Assign>(&e)) return Process::let(Term::sym(x->x), translate_expr(x->e), rest);
  if (auto* x = std::get_if<ev::SFr>(&e)) return Process::new_name(x->name, rest);
  if (std::holds_alternative<ev::Loop>(e)) return Process::bang(rest);
  throw Error(ErrorKind::UntranslatableEvent, to_string(e));
}

/// Header of the .sapic output.
inline std::string sapic_header(const Signature& sig, const Theory& theory) {
  std::string s = "functions: " + to_string(sig) + "\n";
  s += "equations: ";
  for (std::size_t i = 0; i < theory.size(); ++i) s += (i ? ", " : "") + to_string(theory[i]);
  return s + "\n";
}

/// Removes the first let binding in preorder (used as a negative control).
inline Process drop_first_let(const Process& p, bool& done) {
  using K = Process::Kind;
  if (done) return p;
  if (p.kind() == K::Let) {
    done = true;
    return p.then_branch();
  }
  switch (p.kind()) {
    case K::Nil: return p;
    case K::In: return Process::in(p.var(), drop_first_let(p.cont(), done));
    case K::Out: return Process::out(p.term(), drop_first_let(p.cont(), done));
    case K::Event: return Process::event(p.term(), drop_first_let(p.cont(), done));
    case K::New: return Process::new_name(p.name(), drop_first_let(p.cont(), done));
    case K::Bang: return Process::bang(drop_first_let(p.cont(), done));
    case K::Par: {
      Process l = drop_first_let(p.left(), done);
      return Process::par(l, drop_first_let(p.right(), done));
    }
    case K::Choice: {
      Process l = drop_first_let(p.left(), done);
      return Process::choice(l, drop_first_let(p.right(), done));
    }
    case K::Let: break;
  }
  return p;
}

}  // namespace symcomp
