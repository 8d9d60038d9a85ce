#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "symcomp/error.hpp"
#include "symcomp/expr.hpp"
#include "symcomp/lexer.hpp"
#include "symcomp/term.hpp"

namespace symcomp {

namespace bir {
struct Halt {
  auto operator<=>(const Halt&) const = default;
  bool operator==(const Halt&) const = default;
};
struct Jmp {
  Expr target;
  auto operator<=>(const Jmp&) const = default;
  bool operator==(const Jmp&) const = default;
};
struct Cjmp {
  Expr cond, then_target, else_target;
  auto operator<=>(const Cjmp&) const = default;
  bool operator==(const Cjmp&) const = default;
};
struct Assign {
  std::string var;
  Expr e;
  auto operator<=>(const Assign&) const = default;
  bool operator==(const Assign&) const = default;
};
}  // namespace bir

using BirStmt = std::variant<bir::Halt, bir::Jmp, bir::Cjmp, bir::Assign>;

struct BirBlock {
  Bval label;
  std::vector<BirStmt> stmts;
  auto operator<=>(const BirBlock&) const = default;
  bool operator==(const BirBlock&) const = default;
};

struct BirProgram {
  std::vector<BirBlock> blocks;

  const BirBlock* find(const Bval& label) const {
    for (const auto& b : blocks)
      if (b.label == label) return &b;
    return nullptr;
  }
  std::size_t statement_count() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b.stmts.size();
    return n;
  }
  auto operator<=>(const BirProgram&) const = default;
  bool operator==(const BirProgram&) const = default;
};

/// Program counter: block label and statement index.
struct Pc {
  Bval label;
  std::size_t index = 0;
  auto operator<=>(const Pc&) const = default;
  bool operator==(const Pc&) const = default;
};

inline std::string to_string(const Pc& pc) { return value_text(pc.label) + ":" + std::to_string(pc.index); }

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline std::uint64_t parse_number(const std::string& text) {
  try {
    if (text.size() > 2 && (text[1] == 'x' || text[1] == 'X')) return std::stoull(text.substr(2), nullptr, 16);
    return std::stoull(text);
  } catch (const std::exception&) {
    throw Error(ErrorKind::ParseError, "number out of range: " + text);
  }
}

inline Expr parse_bir_expr(Lexer& lx);

inline Expr parse_atom(Lexer& lx) {
  const Token& t = lx.peek();
  if (t.kind == Token::Kind::Number) return Expr::num(parse_number(lx.next().text));
  if (t.kind == Token::Kind::String) return Expr::str(lx.next().text);
  if (lx.accept("(")) {
    Expr e = parse_bir_expr(lx);
    lx.expect(")");
    return e;
  }
  if (t.kind == Token::Kind::Ident) {
    std::string id = lx.next().text;
    if (id == "var" && lx.accept("(")) {
      std::string name = lx.expect_ident();
      lx.expect(")");
      return Expr::var(name);
    }
    return Expr::var(id);
  }
  lx.fail("expected expression");
}

inline Expr parse_unary(Lexer& lx) {
  if (lx.accept("!")) return Expr::unop(UnOp::Not, parse_unary(lx));
  if (lx.is("len") && lx.peek(1).text == "(" && lx.peek(1).kind == Token::Kind::Punct) {
    lx.next();
    lx.expect("(");
    Expr e = parse_bir_expr(lx);
    lx.expect(")");
    return Expr::unop(UnOp::Len, e);
  }
  return parse_atom(lx);
}

inline Expr parse_level(Lexer& lx, int level) {
  static const std::pair<const char*, BinOp> levels[] = {
      {"=", BinOp::Eq}, {"++", BinOp::Concat}, {"^", BinOp::Xor}, {"+", BinOp::Add}, {"*", BinOp::Mul}};
  if (level == 5) return parse_unary(lx);
  Expr e = parse_level(lx, level + 1);
  while (lx.peek().kind == Token::Kind::Punct && lx.peek().text == levels[level].first) {
    lx.next();
    e = Expr::binop(levels[level].second, e, parse_level(lx, level + 1));
  }
  return e;
}

inline Expr parse_bir_expr(Lexer& lx) { return parse_level(lx, 0); }

inline Bval parse_label(Lexer& lx) {
  const Token& t = lx.peek();
  if (t.kind == Token::Kind::Number) return Bval::num(parse_number(lx.next().text));
  if (t.kind == Token::Kind::String) return Bval::str(lx.next().text);
  lx.fail("expected block label");
}

}  // namespace detail

/// Expression in BIR infix syntax: `R1 ^ 0xdeadbeef`, `var(R0)`, `"m"`,
/// `len(m)`, `!(a = b)`.
inline Expr parse_bir_expr(const std::string& text) {
  Lexer lx(text);
  Expr e = detail::parse_bir_expr(lx);
  if (!lx.at_end()) lx.fail("trailing input after expression");
  return e;
}

/// Same syntax, but identifiers denote symbols.
inline Expr parse_sym_expr(const std::string& text) {
  std::function<Expr(const Expr&)> conv = [&](const Expr& e) -> Expr {
    switch (e.kind()) {
      case Expr::Kind::Var: return Expr::sym(e.var_name());
      case Expr::Kind::Unop: return Expr::unop(e.unop(), conv(e.operand()));
      case Expr::Kind::Binop: return Expr::binop(e.binop(), conv(e.lhs()), conv(e.rhs()));
      default: return e;
    }
  };
  return conv(parse_bir_expr(text));
}

/// Parses the textual program format:
///
///     block 0x0:
///       [R30 = 0x1;] jmp(0x44)
///       assign(R1, var(R0))
///       cjmp(R1 = 0x0, 0x10, 0x20)
///       halt
///
/// Bracketed link-register annotations are skipped.
inline BirProgram parse_program(const std::string& text) {
  Lexer lx(text);
  BirProgram p;
  std::set<Bval> labels;
  while (!lx.at_end()) {
    if (!lx.accept("block")) lx.fail("expected 'block'");
    const Token where = lx.peek();
    BirBlock b{detail::parse_label(lx), {}};
    lx.expect(":");
    if (!labels.insert(b.label).second)
      throw Error(ErrorKind::DuplicateLabel, std::to_string(where.line) + ":" + std::to_string(where.col) +
                                                 ": label " + value_text(b.label) + " defined twice");
    while (!lx.at_end() && !lx.is("block")) {
      if (lx.accept("[")) {
        while (!lx.at_end() && !lx.is("]")) lx.next();
        lx.expect("]");
        continue;
      }
      std::string kw = lx.expect_ident();
      if (kw == "halt") {
        b.stmts.push_back(bir::Halt{});
      } else if (kw == "jmp") {
        lx.expect("(");
        Expr t = detail::parse_bir_expr(lx);
        lx.expect(")");
        b.stmts.push_back(bir::Jmp{t});
      } else if (kw == "cjmp") {
        lx.expect("(");
        Expr c = detail::parse_bir_expr(lx);
        lx.expect(",");
        Expr t1 = detail::parse_bir_expr(lx);
        lx.expect(",");
        Expr t2 = detail::parse_bir_expr(lx);
        lx.expect(")");
        b.stmts.push_back(bir::Cjmp{c, t1, t2});
      } else if (kw == "assign") {
        lx.expect("(");
        std::string v = lx.expect_ident();
        lx.expect(",");
        Expr e = detail::parse_bir_expr(lx);
        lx.expect(")");
        b.stmts.push_back(bir::Assign{v, e});
      } else {
        throw Error(ErrorKind::ParseError, std::to_string(where.line) + ": unknown statement '" + kw + "'");
      }
    }
    p.blocks.push_back(std::move(b));
  }
  if (p.blocks.empty()) throw Error(ErrorKind::ParseError, "program has no blocks");
  return p;
}

// ---------------------------------------------------------------------------
// Printing

inline std::string to_string(const BirStmt& s) {
  struct V {
    std::string operator()(const bir::Halt&) const { return "halt"; }
    std::string operator()(const bir::Jmp& j) const { return "jmp(" + to_string(j.target) + ")"; }
    std::string operator()(const bir::Cjmp& c) const {
      return "cjmp(" + to_string(c.cond) + ", " + to_string(c.then_target) + ", " + to_string(c.else_target) + ")";
    }
    std::string operator()(const bir::Assign& a) const { return "assign(" + a.var + ", " + to_string(a.e) + ")"; }
  };
  return std::visit(V{}, s);
}

inline std::string to_string(const BirProgram& p) {
  std::string s;
  for (const auto& b : p.blocks) {
    s += "block " + to_string(b.label) + ":\n";
    for (const auto& st : b.stmts) s += "  " + to_string(st) + "\n";
  }
  return s;
}

inline std::string dump_expr(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Const: return "Const(" + to_string(e.value()) + ")";
    case Expr::Kind::Var: return "Var(" + e.var_name() + ")";
    case Expr::Kind::Sym: return "Sym(" + e.symbol().id + ")";
    case Expr::Kind::Unop: return std::string("Unop(") + op_text(e.unop()) + ", " + dump_expr(e.operand()) + ")";
    case Expr::Kind::Binop:
      return std::string("Binop(") + op_text(e.binop()) + ", " + dump_expr(e.lhs()) + ", " + dump_expr(e.rhs()) + ")";
  }
  return {};
}

inline std::string dump_ast(const BirProgram& p) {
  std::string s = "Program\n";
  for (const auto& b : p.blocks) {
    s += "  Block " + to_string(b.label) + "\n";
    for (const auto& st : b.stmts) {
      s += "    ";
      if (std::holds_alternative<bir::Halt>(st)) s += "Halt";
      if (auto* j = std::get_if<bir::Jmp>(&st)) s += "Jmp " + dump_expr(j->target);
      if (auto* c = std::get_if<bir::Cjmp>(&st))
        s += "Cjmp " + dump_expr(c->cond) + " " + dump_expr(c->then_target) + " " + dump_expr(c->else_target);
      if (auto* a = std::get_if<bir::Assign>(&st)) s += "Assign " + a->var + " " + dump_expr(a->e);
      s += "\n";
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// Evaluation

using Env = std::map<std::string, Bval>;

inline std::uint64_t concat_int(std::uint64_t a, std::uint64_t b) { return (a << 32) | b; }

inline Bval apply_binop(BinOp op, const Bval& a, const Bval& b) {
  if (op == BinOp::Eq) return Bval::num(a == b ? 1 : 0);
  if (op == BinOp::Concat) {
    if (a.is_str() && b.is_str()) return Bval::str(a.as_str() + b.as_str());
    if (a.is_int() && b.is_int()) return Bval::num(concat_int(a.as_int(), b.as_int()));
    throw Error(ErrorKind::TypeMismatch, "++ on mixed operands");
  }
  if (!a.is_int() || !b.is_int())
    throw Error(ErrorKind::TypeMismatch, std::string(op_text(op)) + " expects integer operands");
  switch (op) {
    case BinOp::Xor: return Bval::num(a.as_int() ^ b.as_int());
    case BinOp::Add: return Bval::num(a.as_int() + b.as_int());
    case BinOp::Mul: return Bval::num(a.as_int() * b.as_int());
    default: break;
  }
  throw Error(ErrorKind::TypeMismatch, "unsupported operator");
}

inline Bval apply_unop(UnOp op, const Bval& a) {
  if (op == UnOp::Len) return Bval::num(a.is_str() ? a.as_str().size() : 8);
  if (!a.is_int()) throw Error(ErrorKind::TypeMismatch, "! expects an integer operand");
  return Bval::num(a.as_int() == 0 ? 1 : 0);
}

/// Strict evaluation. `Sym` leaves are looked up by symbol id.
inline Bval eval_expr(const Env& env, const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Const: return e.value();
    case Expr::Kind::Var:
    case Expr::Kind::Sym: {
      const std::string& n = e.is_var() ? e.var_name() : e.symbol().id;
      auto it = env.find(n);
      if (it == env.end()) throw Error(ErrorKind::UnboundVariable, n);
      return it->second;
    }
    case Expr::Kind::Unop: return apply_unop(e.unop(), eval_expr(env, e.operand()));
    case Expr::Kind::Binop: return apply_binop(e.binop(), eval_expr(env, e.lhs()), eval_expr(env, e.rhs()));
  }
  throw Error(ErrorKind::TypeMismatch, "bad expression");
}

inline bool truthy(const Bval& v) { return v.is_int() ? v.as_int() != 0 : !v.as_str().empty(); }

/// Folds constant subexpressions; type errors leave the subexpression as is.
inline Expr fold(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Unop: {
      Expr a = fold(e.operand());
      if (a.is_const()) {
        try {
          return Expr::constant(apply_unop(e.unop(), a.value()));
        } catch (const Error&) {
        }
      }
      return Expr::unop(e.unop(), a);
    }
    case Expr::Kind::Binop: {
      Expr a = fold(e.lhs());
      Expr b = fold(e.rhs());
      if (a.is_const() && b.is_const()) {
        try {
          return Expr::constant(apply_binop(e.binop(), a.value(), b.value()));
        } catch (const Error&) {
        }
      }
      if (e.binop() == BinOp::Eq && a == b) return Expr::num(1);
      return Expr::binop(e.binop(), a, b);
    }
    default: return e;
  }
}

// ---------------------------------------------------------------------------
// Crypto configuration: roles of external jump targets.

enum class RoleKind { Rng, Fn, Send, Recv, Event };

struct LabelRole {
  RoleKind kind = RoleKind::Rng;
  FnSym fn;             // Fn
  std::string hint;     // Rng: name hint; Fn: result hint; Event: event name
  std::string reg = "R0";  // Send / Recv register
  auto operator<=>(const LabelRole&) const = default;
  bool operator==(const LabelRole&) const = default;
};

inline bool is_trusted(const LabelRole& r) { return r.kind == RoleKind::Rng || r.kind == RoleKind::Fn; }

/// `rng [hint]`, `fn f [hint]`, `send [reg]`, `recv [reg]`, `event name`.
inline LabelRole parse_role(const std::string& text, const Signature& sig) {
  std::istringstream in(text);
  std::vector<std::string> w;
  for (std::string s; in >> s;) w.push_back(s);
  if (w.empty()) throw Error(ErrorKind::ConfigError, "empty label role");
  LabelRole r;
  if (w[0] == "rng") {
    r.kind = RoleKind::Rng;
    r.hint = w.size() > 1 ? w[1] : "n";
  } else if (w[0] == "fn") {
    if (w.size() < 2) throw Error(ErrorKind::ConfigError, "fn role needs a function name");
    auto f = sig.find(w[1]);
    if (!f) throw Error(ErrorKind::ConfigError, "function " + w[1] + " not in signature");
    r.kind = RoleKind::Fn;
    r.fn = *f;
    r.hint = w.size() > 2 ? w[2] : "y";
  } else if (w[0] == "send" || w[0] == "recv") {
    r.kind = w[0] == "send" ? RoleKind::Send : RoleKind::Recv;
    if (w.size() > 1) r.reg = w[1];
    r.hint = "in";
  } else if (w[0] == "event") {
    if (w.size() < 2) throw Error(ErrorKind::ConfigError, "event role needs a name");
    r.kind = RoleKind::Event;
    r.hint = w[1];
  } else {
    throw Error(ErrorKind::ConfigError, "unknown role '" + w[0] + "'");
  }
  if (w.size() > 3 || (r.kind != RoleKind::Fn && w.size() > 2))
    throw Error(ErrorKind::ConfigError, "too many words in role '" + text + "'");
  return r;
}

inline std::string to_string(const LabelRole& r) {
  switch (r.kind) {
    case RoleKind::Rng: return "rng " + r.hint;
    case RoleKind::Fn: return "fn " + r.fn.name + " " + r.hint;
    case RoleKind::Send: return "send " + r.reg;
    case RoleKind::Recv: return "recv " + r.reg;
    case RoleKind::Event: return "event " + r.hint;
  }
  return "?";
}

struct CryptoConfig {
  std::map<Bval, LabelRole> roles;
  Signature signature;
  Theory theory;
  std::set<Expr> consts;

  const LabelRole* role(const Bval& label) const {
    auto it = roles.find(label);
    return it == roles.end() ? nullptr : &it->second;
  }
};

inline void validate(const BirProgram& p, const CryptoConfig& cfg) {
  for (const auto& [label, role] : cfg.roles) {
    if (p.find(label))
      throw Error(ErrorKind::ConfigError, "label " + value_text(label) + " is both a block and a role");
    if (role.kind == RoleKind::Fn && !cfg.signature.contains(role.fn))
      throw Error(ErrorKind::ConfigError, "function " + to_string(role.fn) + " not in signature");
  }
}

/// Register name for argument i of a function call.
inline std::string arg_register(std::size_t i) { return "R" + std::to_string(i); }

/// Where control goes after executing the statement at `pc`.
inline Pc next_pc(const Pc& pc) { return {pc.label, pc.index + 1}; }

}  // namespace symcomp
