#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "symcomp/bir.hpp"
#include "symcomp/compose.hpp"
#include "symcomp/event.hpp"
#include "symcomp/lts.hpp"

namespace symcomp {

namespace sbir {
/// x ≐ e
struct PEq {
  Symbol x;
  Expr e;
  auto operator<=>(const PEq&) const = default;
  bool operator==(const PEq&) const = default;
};
struct PConst {
  Expr c;
  auto operator<=>(const PConst&) const = default;
  bool operator==(const PConst&) const = default;
};
/// x ↦ f(x1..xn)
struct PAlias {
  Symbol x;
  Term t;
  auto operator<=>(const PAlias&) const = default;
  bool operator==(const PAlias&) const = default;
};
}  // namespace sbir

using SbirPredicate = std::variant<sbir::PEq, sbir::PConst, sbir::PAlias>;

inline SbirPredicate peq(Symbol x, Expr e) { return sbir::PEq{std::move(x), std::move(e)}; }
inline SbirPredicate pconst(Expr c) { return sbir::PConst{std::move(c)}; }
inline SbirPredicate palias(Symbol x, Term t) { return sbir::PAlias{std::move(x), std::move(t)}; }

inline std::string to_string(const SbirPredicate& p) {
  if (auto* e = std::get_if<sbir::PEq>(&p)) return e->x.id + " ≐ " + to_string(e->e);
  if (auto* c = std::get_if<sbir::PConst>(&p)) return "const " + to_string(c->c);
  const auto& a = std::get<sbir::PAlias>(p);
  return a.x.id + " ↦ " + to_string(a.t);
}

struct SbirInner {
  Pc pc;
  std::map<std::string, Expr> env;
  std::vector<Expr> phi;
  std::map<Bval, std::size_t> entries;
  bool halted = false;

  auto operator<=>(const SbirInner&) const = default;
  bool operator==(const SbirInner&) const = default;
};

struct SbirLimits {
  std::size_t depth = 64;
  std::size_t unroll = 1;
  std::size_t max_silent = 10000;
  std::size_t max_nodes = 100000;
};

// ---------------------------------------------------------------------------

/// Execution tree: Leaf, Node(pc, event, child) or Branch(pc, cond, l, r).
struct ExecTree {
  enum class Kind { Leaf, Node, Branch };
  Kind kind = Kind::Leaf;
  Pc pc;
  std::optional<Event> event;
  std::optional<Expr> cond;
  std::vector<ExecTree> kids;

  static ExecTree leaf() { return {}; }
  static ExecTree node(Pc pc, Event e, ExecTree child) {
    ExecTree t;
    t.kind = Kind::Node;
    t.pc = std::move(pc);
    t.event = std::move(e);
    t.kids.push_back(std::move(child));
    return t;
  }
  static ExecTree branch(Pc pc, Expr cond, ExecTree l, ExecTree r) {
    ExecTree t;
    t.kind = Kind::Branch;
    t.pc = std::move(pc);
    t.cond = std::move(cond);
    t.kids.push_back(std::move(l));
    t.kids.push_back(std::move(r));
    return t;
  }

  bool is_leaf() const { return kind == Kind::Leaf; }
  bool is_node() const { return kind == Kind::Node; }
  bool is_branch() const { return kind == Kind::Branch; }
  const ExecTree& child() const { return kids.at(0); }
  const ExecTree& left() const { return kids.at(0); }
  const ExecTree& right() const { return kids.at(1); }

  std::size_t size() const {
    std::size_t n = 1;
    for (const auto& k : kids) n += k.size();
    return n;
  }
  std::size_t event_nodes() const {
    std::size_t n = is_node() ? 1 : 0;
    for (const auto& k : kids) n += k.event_nodes();
    return n;
  }
};

/// First node in preorder whose pc matches.
inline const ExecTree& tree_select(const ExecTree& t, const Pc& pc) {
  std::function<const ExecTree*(const ExecTree&)> go = [&](const ExecTree& n) -> const ExecTree* {
    if (!n.is_leaf() && n.pc == pc) return &n;
    for (const auto& k : n.kids)
      if (auto* r = go(k)) return r;
    return nullptr;
  };
  if (auto* r = go(t)) return *r;
  throw Error(ErrorKind::PcNotFound, to_string(pc));
}

/// Event sequences along root-to-leaf paths.
inline std::set<Trace> tree_paths(const ExecTree& t) {
  std::set<Trace> out;
  Trace cur;
  std::function<void(const ExecTree&)> go = [&](const ExecTree& n) {
    switch (n.kind) {
      case ExecTree::Kind::Leaf: out.insert(cur); break;
      case ExecTree::Kind::Node:
        cur.push_back(*n.event);
        go(n.child());
        cur.pop_back();
        break;
      case ExecTree::Kind::Branch:
        go(n.left());
        go(n.right());
        break;
    }
  };
  go(t);
  return out;
}

inline std::set<Trace> prefix_closure(const std::set<Trace>& ts) {
  std::set<Trace> out;
  for (const auto& t : ts)
    for (std::size_t i = 0; i <= t.size(); ++i) out.insert(Trace(t.begin(), t.begin() + i));
  return out;
}

inline std::string to_string(const ExecTree& t, std::size_t indent = 0) {
  std::string pad(indent * 2, ' ');
  switch (t.kind) {
    case ExecTree::Kind::Leaf: return pad + "Leaf\n";
    case ExecTree::Kind::Node: return pad + to_string(t.pc) + " " + to_string(*t.event) + "\n" + to_string(t.child(), indent);
    case ExecTree::Kind::Branch:
      return pad + to_string(t.pc) + " Branch " + to_string(*t.cond) + "\n" + to_string(t.left(), indent + 1) +
             to_string(t.right(), indent + 1);
  }
  return {};
}

inline std::string dot_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '"' || c == '\\') o += '\\';
    o += c;
  }
  return o;
}

/// Graphviz description of the tree.
inline std::string to_dot(const ExecTree& t) {
  std::string s = "digraph exec_tree {\n  node [shape=box];\n";
  std::size_t next = 0;
  std::function<std::size_t(const ExecTree&)> go = [&](const ExecTree& n) {
    std::size_t id = next++;
    std::string label;
    switch (n.kind) {
      case ExecTree::Kind::Leaf: label = "Leaf"; break;
      case ExecTree::Kind::Node: label = to_string(n.pc) + "\\n" + dot_escape(to_string(*n.event)); break;
      case ExecTree::Kind::Branch: label = to_string(n.pc) + "\\nBranch " + dot_escape(to_string(*n.cond)); break;
    }
    s += "  n" + std::to_string(id) + " [label=\"" + label + "\"];\n";
    for (const auto& k : n.kids) {
      std::size_t c = go(k);
      s += "  n" + std::to_string(id) + " -> n" + std::to_string(c) + ";\n";
    }
    return id;
  };
  go(t);
  return s + "}\n";
}

// ---------------------------------------------------------------------------

inline Expr negate(const Expr& e) {
  if (e.kind() == Expr::Kind::Unop && e.unop() == UnOp::Not) return e.operand();
  return Expr::unop(UnOp::Not, e);
}

/// Crypto-aware symbolic execution of a BIR program as a symbolic LTS.
class Sbir {
 public:
  using Predicate = SbirPredicate;
  using Inner = SbirInner;
  using State = SymbolicState<Predicate, Inner>;

  /// Moves available from a state up to the next event, with the branching
  /// structure that leads to them.
  struct Frontier {
    enum class Kind { Stop, Step, Fork };
    Kind kind = Kind::Stop;
    Pc pc;
    std::optional<Event> event;
    std::optional<State> next;
    std::optional<Expr> cond;
    std::vector<Frontier> kids;
  };

  Sbir(BirProgram p, CryptoConfig cfg, SbirLimits lim = {})
      : p_(std::move(p)), cfg_(std::move(cfg)), lim_(lim) {
    validate(p_, cfg_);
  }

  const BirProgram& program() const { return p_; }
  const CryptoConfig& config() const { return cfg_; }
  const SbirLimits& limits() const { return lim_; }

  State initial() const {
    State s;
    s.inner.pc = {p_.blocks.front().label, 0};
    s.inner.entries[s.inner.pc.label] = 1;
    return s;
  }

  std::set<EventTag> sync_alphabet() const { return {"SFr", "A2P", "P2A", "FCall"}; }

  std::vector<Transition<State>> successors(const State& st) const {
    std::vector<Transition<State>> out;
    collect(frontier(st), out);
    dedup(out);
    return out;
  }

  std::vector<State> step(const State& st, const Event& e) const {
    if (auto* a = std::get_if<ev::A2P>(&e)) {
      std::vector<Transition<State>> ts;
      collect(frontier(st, a->x), ts);
      return accept_own(ts, e);
    }
    return accept_own(successors(st), e);
  }

  /// const facts for literal subexpressions of equalities, plus the
  /// configured constants.
  std::set<Predicate> deduce_step(const State& st) const {
    std::set<Predicate> out;
    std::set<Expr> lits;
    for (const auto& p : st.pi)
      if (auto* e = std::get_if<sbir::PEq>(&p)) collect_constants(e->e, lits);
    for (const auto& c : cfg_.consts) lits.insert(c);
    for (const auto& c : lits)
      if (!st.pi.contains(pconst(c))) out.insert(pconst(c));
    return out;
  }

  Frontier frontier(const State& st, const std::optional<Symbol>& adopt = {}) const {
    std::size_t budget = lim_.max_silent;
    return advance(st, adopt, budget);
  }

  ExecTree build_tree(std::size_t depth) const { return build_tree(initial(), depth); }

  ExecTree build_tree(const State& st, std::size_t depth) const {
    std::size_t nodes = 0;
    return tree_rec(st, depth, nodes);
  }

 private:
  static void collect(const Frontier& f, std::vector<Transition<State>>& out) {
    if (f.kind == Frontier::Kind::Step) out.push_back({*f.event, *f.next});
    for (const auto& k : f.kids) collect(k, out);
  }

  ExecTree tree_rec(const State& st, std::size_t depth, std::size_t& nodes) const {
    std::function<ExecTree(const Frontier&)> conv = [&](const Frontier& f) -> ExecTree {
      if (++nodes > lim_.max_nodes)
        throw Error(ErrorKind::StateBudgetExceeded, "execution tree exceeds " + std::to_string(lim_.max_nodes));
      switch (f.kind) {
        case Frontier::Kind::Stop: return ExecTree::leaf();
        case Frontier::Kind::Step:
          return ExecTree::node(f.pc, *f.event, depth == 0 ? ExecTree::leaf() : tree_rec(*f.next, depth - 1, nodes));
        case Frontier::Kind::Fork: return ExecTree::branch(f.pc, *f.cond, conv(f.kids[0]), conv(f.kids[1]));
      }
      return ExecTree::leaf();
    };
    if (depth == 0) return ExecTree::leaf();
    return conv(frontier(st));
  }

  static Frontier stop(const Pc& pc) {
    Frontier f;
    f.pc = pc;
    return f;
  }
  static Frontier emit(const Pc& pc, Event e, State next) {
    Frontier f;
    f.kind = Frontier::Kind::Step;
    f.pc = pc;
    f.event = std::move(e);
    f.next = std::move(next);
    return f;
  }

  /// Current symbolic value of a variable; unbound variables are initial
  /// inputs and get a symbol of their own name.
  static Expr read(State& st, const std::string& var) {
    auto it = st.inner.env.find(var);
    if (it != st.inner.env.end()) return it->second;
    Symbol s = fresh_named_symbol(st.sigma, var);
    st.sigma.insert(s);
    Expr e = Expr::sym(s);
    st.inner.env.emplace(var, e);
    return e;
  }

  static Expr instantiate(State& st, const Expr& e) {
    switch (e.kind()) {
      case Expr::Kind::Var: return read(st, e.var_name());
      case Expr::Kind::Unop: return Expr::unop(e.unop(), instantiate(st, e.operand()));
      case Expr::Kind::Binop: {
        Expr a = instantiate(st, e.lhs());
        return Expr::binop(e.binop(), a, instantiate(st, e.rhs()));
      }
      default: return e;
    }
  }

  /// Register content as a symbol; composite values are first bound to a
  /// fresh symbol.
  static Symbol as_symbol(State& st, const std::string& reg) {
    Expr v = read(st, reg);
    if (v.is_sym()) return v.symbol();
    Symbol s = fresh_named_symbol(st.sigma, reg);
    st.sigma.insert(s);
    st.pi.insert(peq(s, v));
    st.inner.env.insert_or_assign(reg, Expr::sym(s));
    return s;
  }

  Frontier advance(State st, const std::optional<Symbol>& adopt, std::size_t& budget) const {
    while (true) {
      if (budget-- == 0) throw Error(ErrorKind::StateBudgetExceeded, "silent steps exceed limit");
      const Pc pc = st.inner.pc;
      if (st.inner.halted) return stop(pc);
      const BirBlock* b = p_.find(pc.label);
      if (!b) throw Error(ErrorKind::UnknownLabel, value_text(pc.label));
      if (pc.index >= b->stmts.size()) {
        st.inner.halted = true;
        return stop(pc);
      }
      const BirStmt& stmt = b->stmts[pc.index];
      if (std::holds_alternative<bir::Halt>(stmt)) return stop(pc);
      if (auto* a = std::get_if<bir::Assign>(&stmt)) {
        Expr v = fold(instantiate(st, a->e));
        Symbol x = fresh_named_symbol(st.sigma, a->var);
        st.sigma.insert(x);
        st.inner.env.insert_or_assign(a->var, Expr::sym(x));
        st.pi.insert(peq(x, v));
        st.inner.pc = next_pc(pc);
        return emit(pc, ev::Assign{x, v}, std::move(st));
      }
      if (auto* j = std::get_if<bir::Jmp>(&stmt)) return jump(std::move(st), pc, j->target, adopt, budget);
      const auto& c = std::get<bir::Cjmp>(stmt);
      Expr cond = fold(instantiate(st, c.cond));
      auto contains = [&](const Expr& e) {
        return std::find(st.inner.phi.begin(), st.inner.phi.end(), e) != st.inner.phi.end();
      };
      bool take_then = true, take_else = true;
      if (cond.is_const()) {
        take_then = truthy(cond.value());
        take_else = !take_then;
      } else if (contains(cond)) {
        take_else = false;
      } else if (contains(negate(cond))) {
        take_then = false;
      }
      if (!take_else) return jump(std::move(st), pc, c.then_target, adopt, budget);
      if (!take_then) return jump(std::move(st), pc, c.else_target, adopt, budget);
      State s1 = st, s2 = st;
      s1.inner.phi.push_back(cond);
      s2.inner.phi.push_back(negate(cond));
      Frontier f;
      f.kind = Frontier::Kind::Fork;
      f.pc = pc;
      f.cond = cond;
      f.kids.push_back(jump(std::move(s1), pc, c.then_target, adopt, budget));
      f.kids.push_back(jump(std::move(s2), pc, c.else_target, adopt, budget));
      return f;
    }
  }

  Frontier jump(State st, const Pc& pc, const Expr& target_expr, const std::optional<Symbol>& adopt,
                std::size_t& budget) const {
    Expr t = fold(instantiate(st, target_expr));
    if (!t.is_const()) throw Error(ErrorKind::IllegalJumpTarget, "symbolic jump target " + to_string(t));
    const Bval& label = t.value();
    if (p_.find(label)) {
      std::size_t n = ++st.inner.entries[label];
      st.inner.pc = {label, 0};
      if (n > 1 + lim_.unroll) {
        st.inner.halted = true;
        return stop(pc);
      }
      if (n == 2) return emit(pc, ev::Loop{}, std::move(st));
      return advance(std::move(st), adopt, budget);
    }
    const LabelRole* role = cfg_.role(label);
    if (!role) throw Error(ErrorKind::UnmappedExternalJump, value_text(label));
    st.inner.pc = next_pc(pc);
    switch (role->kind) {
      case RoleKind::Rng: {
        Symbol k = fresh_named_symbol(st.sigma, role->hint);
        st.sigma.insert(k);
        st.inner.env.insert_or_assign("R0", Expr::sym(k));
        return emit(pc, ev::SFr{private_name(k.id)}, std::move(st));
      }
      case RoleKind::Fn: {
        std::vector<Symbol> args;
        std::vector<Term> targs;
        for (std::size_t i = 0; i < role->fn.arity; ++i) {
          args.push_back(as_symbol(st, arg_register(i)));
          targs.push_back(Term::sym(args.back()));
        }
        Symbol y = fresh_named_symbol(st.sigma, role->hint);
        st.sigma.insert(y);
        st.pi.insert(palias(y, Term::app(role->fn, std::move(targs))));
        st.inner.env.insert_or_assign("R0", Expr::sym(y));
        return emit(pc, ev::FCall{role->fn, std::move(args), y}, std::move(st));
      }
      case RoleKind::Send: {
        Symbol x = as_symbol(st, role->reg);
        return emit(pc, ev::P2A{x}, std::move(st));
      }
      case RoleKind::Recv: {
        Symbol x = adopt ? *adopt : fresh_named_symbol(st.sigma, role->hint);
        st.sigma.insert(x);
        st.inner.env.insert_or_assign(role->reg, Expr::sym(x));
        return emit(pc, ev::A2P{x}, std::move(st));
      }
      case RoleKind::Event: return emit(pc, ev::Ev{Symbol(role->hint)}, std::move(st));
    }
    return stop(pc);
  }

  BirProgram p_;
  CryptoConfig cfg_;
  SbirLimits lim_;
};

inline ExecTree build_tree(const BirProgram& p, const CryptoConfig& cfg, const SbirLimits& lim) {
  return Sbir(p, cfg, lim).build_tree(lim.depth);
}

/// Access to the SBIR predicates inside nested predicate spaces.
template <class P>
struct SbirEmbedding {};

template <>
struct SbirEmbedding<SbirPredicate> {
  static const SbirPredicate* view(const SbirPredicate& p) { return &p; }
  static SbirPredicate embed(SbirPredicate p) { return p; }
};

}  // namespace symcomp
