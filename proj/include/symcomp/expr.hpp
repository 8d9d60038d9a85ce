#pragma once

#include <compare>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "symcomp/error.hpp"
#include "symcomp/symbol.hpp"

namespace symcomp {

/// BIR value: a string or a 64-bit word.
struct Bval {
  std::variant<std::string, std::uint64_t> v;

  static Bval str(std::string s) { return Bval{std::move(s)}; }
  static Bval num(std::uint64_t n) { return Bval{n}; }

  bool is_int() const { return std::holds_alternative<std::uint64_t>(v); }
  bool is_str() const { return !is_int(); }
  std::uint64_t as_int() const { return std::get<std::uint64_t>(v); }
  const std::string& as_str() const { return std::get<std::string>(v); }

  auto operator<=>(const Bval&) const = default;
  bool operator==(const Bval&) const = default;
};

inline std::string hex(std::uint64_t n) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(n));
  return buf;
}

/// Canonical text; also used as the public-name text when a value is
/// translated into a term.
inline std::string value_text(const Bval& b) { return b.is_int() ? hex(b.as_int()) : b.as_str(); }

inline std::string to_string(const Bval& b) {
  return b.is_int() ? hex(b.as_int()) : "\"" + b.as_str() + "\"";
}

enum class BinOp { Xor, Add, Mul, Concat, Eq };
enum class UnOp { Not, Len };

inline const char* op_text(BinOp op) {
  switch (op) {
    case BinOp::Xor: return "^";
    case BinOp::Add: return "+";
    case BinOp::Mul: return "*";
    case BinOp::Concat: return "++";
    case BinOp::Eq: return "=";
  }
  return "?";
}

inline const char* op_text(UnOp op) {
  switch (op) {
    case UnOp::Not: return "!";
    case UnOp::Len: return "len";
  }
  return "?";
}

/// BIR expression. `Sym` leaves only occur in symbolic expressions produced by
/// symbolic execution; parsed programs use `Var`.
class Expr {
 public:
  enum class Kind { Const, Var, Sym, Unop, Binop };

  static Expr constant(Bval b) { return Expr(std::make_shared<const Node>(Node{std::move(b), {}})); }
  static Expr num(std::uint64_t n) { return constant(Bval::num(n)); }
  static Expr str(std::string s) { return constant(Bval::str(std::move(s))); }
  static Expr var(std::string name) { return Expr(std::make_shared<const Node>(Node{VarRef{std::move(name)}, {}})); }
  static Expr sym(Symbol s) { return Expr(std::make_shared<const Node>(Node{std::move(s), {}})); }
  static Expr sym(std::string id) { return sym(Symbol(std::move(id))); }
  static Expr unop(UnOp op, Expr e) { return Expr(std::make_shared<const Node>(Node{op, {std::move(e)}})); }
  static Expr binop(BinOp op, Expr a, Expr b) {
    return Expr(std::make_shared<const Node>(Node{op, {std::move(a), std::move(b)}}));
  }

  Kind kind() const { return static_cast<Kind>(node_->head.index()); }
  bool is_const() const { return kind() == Kind::Const; }
  bool is_sym() const { return kind() == Kind::Sym; }
  bool is_var() const { return kind() == Kind::Var; }

  const Bval& value() const { return std::get<Bval>(node_->head); }
  const std::string& var_name() const { return std::get<VarRef>(node_->head).name; }
  const Symbol& symbol() const { return std::get<Symbol>(node_->head); }
  UnOp unop() const { return std::get<UnOp>(node_->head); }
  BinOp binop() const { return std::get<BinOp>(node_->head); }
  const Expr& operand() const { return node_->kids.at(0); }
  const Expr& lhs() const { return node_->kids.at(0); }
  const Expr& rhs() const { return node_->kids.at(1); }
  const std::vector<Expr>& kids() const { return node_->kids; }

  friend std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.node_->head <=> b.node_->head; c != 0) return c;
    const auto& x = a.node_->kids;
    const auto& y = b.node_->kids;
    if (auto c = x.size() <=> y.size(); c != 0) return c;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (auto c = x[i] <=> y[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }
  friend bool operator==(const Expr& a, const Expr& b) { return (a <=> b) == 0; }

 private:
  struct VarRef {
    std::string name;
    auto operator<=>(const VarRef&) const = default;
    bool operator==(const VarRef&) const = default;
  };
  struct Node {
    std::variant<Bval, VarRef, Symbol, UnOp, BinOp> head;
    std::vector<Expr> kids;
  };
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

inline bool is_atomic(const Expr& e) {
  return e.kind() == Expr::Kind::Const || e.kind() == Expr::Kind::Var || e.kind() == Expr::Kind::Sym;
}

inline std::string to_string(const Expr& e) {
  auto operand = [](const Expr& k) {
    std::string s = to_string(k);
    return is_atomic(k) || k.kind() == Expr::Kind::Unop ? s : "(" + s + ")";
  };
  switch (e.kind()) {
    case Expr::Kind::Const: return to_string(e.value());
    case Expr::Kind::Var: return e.var_name();
    case Expr::Kind::Sym: return e.symbol().id;
    case Expr::Kind::Unop:
      if (e.unop() == UnOp::Len) return "len(" + to_string(e.operand()) + ")";
      return std::string(op_text(e.unop())) + operand(e.operand());
    case Expr::Kind::Binop:
      return operand(e.lhs()) + " " + op_text(e.binop()) + " " + operand(e.rhs());
  }
  return {};
}

inline void collect_symbols(const Expr& e, std::set<Symbol>& out) {
  if (e.is_sym()) out.insert(e.symbol());
  for (const auto& k : e.kids()) collect_symbols(k, out);
}

inline std::set<Symbol> symbols_of(const Expr& e) {
  std::set<Symbol> out;
  collect_symbols(e, out);
  return out;
}

inline void collect_constants(const Expr& e, std::set<Expr>& out) {
  if (e.is_const()) out.insert(e);
  for (const auto& k : e.kids()) collect_constants(k, out);
}

/// Replaces `Sym` leaves according to `rename`.
inline Expr rename_symbols(const Expr& e, const std::map<Symbol, Symbol>& rename) {
  switch (e.kind()) {
    case Expr::Kind::Sym: {
      auto it = rename.find(e.symbol());
      return it == rename.end() ? e : Expr::sym(it->second);
    }
    case Expr::Kind::Unop: return Expr::unop(e.unop(), rename_symbols(e.operand(), rename));
    case Expr::Kind::Binop:
      return Expr::binop(e.binop(), rename_symbols(e.lhs(), rename), rename_symbols(e.rhs(), rename));
    default: return e;
  }
}

}  // namespace symcomp
