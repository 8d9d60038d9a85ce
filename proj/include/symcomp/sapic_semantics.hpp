#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "symcomp/lts.hpp"
#include "symcomp/sapic.hpp"

namespace symcomp {

/// Let-equality recorded by the process semantics: `x = t`.
struct SapicPredicate {
  Symbol x;
  Term t;

  auto operator<=>(const SapicPredicate&) const = default;
  bool operator==(const SapicPredicate&) const = default;
};

inline std::string to_string(const SapicPredicate& p) { return p.x.id + " = " + to_string(p.t); }

struct SapicThread {
  Process p;
  Substitution env;
  std::size_t unfolded = 0;

  auto operator<=>(const SapicThread&) const = default;
  bool operator==(const SapicThread&) const = default;
};

struct SapicInner {
  std::vector<SapicThread> threads;  // sorted, no Nil, no top-level Par

  auto operator<=>(const SapicInner&) const = default;
  bool operator==(const SapicInner&) const = default;
};

inline bool contains_bang(const Process& p) {
  if (p.kind() == Process::Kind::Bang) return true;
  return std::any_of(p.kids().begin(), p.kids().end(), contains_bang);
}

/// Trace semantics of a process as a symbolic LTS. Replicated processes
/// unfold at most `replication` times each.
class SapicSlts {
 public:
  using Predicate = SapicPredicate;
  using Inner = SapicInner;
  using State = SymbolicState<Predicate, Inner>;

  explicit SapicSlts(Process p, std::size_t replication = 2) : p_(std::move(p)), replication_(replication) {
    if (replication_ == 0 && contains_bang(p_))
      throw Error(ErrorKind::ReplicationBudgetExceeded, "replication budget 0 with replicated process");
  }

  const Process& process() const { return p_; }

  State initial() const {
    State s;
    add_thread(s.inner.threads, SapicThread{p_, {}, 0});
    std::sort(s.inner.threads.begin(), s.inner.threads.end());
    return s;
  }

  std::set<EventTag> sync_alphabet() const { return {"SFr", "A2P", "P2A", "FCall"}; }

  std::vector<Transition<State>> successors(const State& st) const { return moves(st, std::nullopt); }

  std::vector<State> step(const State& st, const Event& e) const {
    if (auto* a = std::get_if<ev::A2P>(&e)) return accept_own(moves(st, a->x), e);
    return accept_own(successors(st), e);
  }

  std::set<Predicate> deduce_step(const State&) const { return {}; }

 private:
  struct Move {
    Event event;
    std::vector<SapicThread> replacement;
    SymbolSet sigma;
    std::set<Predicate> preds;
  };

  static void add_thread(std::vector<SapicThread>& out, SapicThread t) {
    if (t.p.is_nil()) return;
    if (t.p.kind() == Process::Kind::Par) {
      add_thread(out, SapicThread{t.p.left(), t.env, 0});
      add_thread(out, SapicThread{t.p.right(), t.env, 0});
      return;
    }
    out.push_back(std::move(t));
  }

  /// Applies the bindings; symbols that are neither bound nor known become
  /// known (free inputs of the process).
  static Term inst(const Term& t, const Substitution& env, SymbolSet& sigma) {
    Term v = substitute(t, env);
    for (const auto& s : symbols_of(v)) sigma.insert(s);
    return v;
  }

  std::vector<Transition<State>> moves(const State& st, const std::optional<Symbol>& adopt) const {
    std::vector<Transition<State>> out;
    for (std::size_t i = 0; i < st.inner.threads.size(); ++i) {
      for (auto& m : thread_moves(st.inner.threads[i], st.sigma, adopt, 0)) {
        State n;
        n.sigma = std::move(m.sigma);
        n.pi = st.pi;
        n.pi.insert(m.preds.begin(), m.preds.end());
        for (std::size_t j = 0; j < st.inner.threads.size(); ++j)
          if (j != i) n.inner.threads.push_back(st.inner.threads[j]);
        for (auto& t : m.replacement) add_thread(n.inner.threads, std::move(t));
        std::sort(n.inner.threads.begin(), n.inner.threads.end());
        out.push_back({std::move(m.event), std::move(n)});
      }
    }
    dedup(out);
    return out;
  }

  std::vector<Move> thread_moves(const SapicThread& th, const SymbolSet& sigma0, const std::optional<Symbol>& adopt,
                                 std::size_t silent) const {
    using K = Process::Kind;
    if (silent > p_.size()) return {};
    const Process& p = th.p;
    std::vector<Move> out;
    SymbolSet sigma = sigma0;
    auto then = [&](const Process& next, Substitution env, std::size_t unfolded = 0) {
      return std::vector<SapicThread>{SapicThread{next, std::move(env), unfolded}};
    };
    switch (p.kind()) {
      case K::Nil: break;
      case K::In: {
        Symbol x = adopt ? *adopt : fresh_named_symbol(sigma, p.var().id);
        sigma.insert(x);
        Substitution env = th.env;
        env.insert_or_assign(p.var(), Term::sym(x));
        out.push_back({ev::A2P{x}, then(p.cont(), std::move(env)), std::move(sigma), {}});
        break;
      }
      case K::Out: {
        Term v = inst(p.term(), th.env, sigma);
        std::set<Predicate> preds;
        Symbol x;
        if (v.is_sym()) {
          x = v.as_sym();
        } else {
          x = fresh_named_symbol(sigma, "out");
          sigma.insert(x);
          preds.insert({x, v});
        }
        out.push_back({ev::P2A{x}, then(p.cont(), th.env), std::move(sigma), std::move(preds)});
        break;
      }
      case K::Event: {
        Term v = substitute(p.term(), th.env);
        std::string label = v.is_name() ? v.as_name().text : v.is_sym() ? v.as_sym().id : to_string(v);
        out.push_back({ev::Ev{Symbol(label)}, then(p.cont(), th.env), std::move(sigma), {}});
        break;
      }
      case K::New: {
        Symbol k = fresh_named_symbol(sigma, p.name().text);
        sigma.insert(k);
        Substitution env = th.env;
        env.insert_or_assign(Symbol(p.name().text), Term::sym(k));
        out.push_back({ev::SFr{private_name(k.id)}, then(p.cont(), std::move(env)), std::move(sigma), {}});
        break;
      }
      case K::Let: {
        if (!p.pattern().is_sym()) throw Error(ErrorKind::ParseError, "let pattern must be a variable");
        Term v = inst(p.rhs(), th.env, sigma);
        Symbol y = fresh_named_symbol(sigma, p.pattern().as_sym().id);
        std::optional<Event> e;
        if (v.is_app() && !is_translated_operator(v.fn())) {
          std::vector<Symbol> args;
          for (const auto& a : v.args())
            if (a.is_sym()) args.push_back(a.as_sym());
          if (args.size() == v.args().size()) e = ev::FCall{v.fn(), std::move(args), y};
        } else if (auto x = untranslate_term(v)) {
          e = ev::Assign{y, *x};
        }
        if (!e) return thread_moves(SapicThread{p.else_branch(), th.env, 0}, sigma0, adopt, silent + 1);
        sigma.insert(y);
        Substitution env = th.env;
        env.insert_or_assign(p.pattern().as_sym(), Term::sym(y));
        out.push_back({std::move(*e), then(p.then_branch(), std::move(env)), std::move(sigma), {{y, v}}});
        break;
      }
      case K::Bang: {
        if (th.unfolded >= replication_) break;
        std::vector<SapicThread> rep{SapicThread{p.cont(), th.env, 0}};
        if (th.unfolded + 1 < replication_) rep.push_back(SapicThread{p, th.env, th.unfolded + 1});
        out.push_back({ev::Loop{}, std::move(rep), std::move(sigma), {}});
        break;
      }
      case K::Par: {
        for (int side = 0; side < 2; ++side) {
          const Process& mine = side == 0 ? p.left() : p.right();
          const Process& other = side == 0 ? p.right() : p.left();
          for (auto& m : thread_moves(SapicThread{mine, th.env, 0}, sigma0, adopt, silent + 1)) {
            m.replacement.push_back(SapicThread{other, th.env, 0});
            out.push_back(std::move(m));
          }
        }
        break;
      }
      case K::Choice: {
        for (const Process* q : {&p.left(), &p.right()})
          for (auto& m : thread_moves(SapicThread{*q, th.env, 0}, sigma0, adopt, silent + 1))
            out.push_back(std::move(m));
        break;
      }
    }
    return out;
  }

  Process p_;
  std::size_t replication_;
};

inline SapicSlts sapic_as_slts(const Process& p, std::size_t replication = 2) { return SapicSlts(p, replication); }

/// True when the component can perform `t` exactly (no deduction moves).
template <SymbolicLts S>
bool accepts_trace(const S& s, const Trace& t) {
  std::set<typename S::State> cur{s.initial()};
  for (const auto& e : t) {
    std::set<typename S::State> next;
    for (const auto& st : cur)
      for (auto& tr : s.successors(st))
        if (tr.event == e) next.insert(std::move(tr.next));
    if (next.empty()) return false;
    cur = std::move(next);
  }
  return true;
}

struct InclusionReport {
  bool ok = true;
  std::size_t checked = 0;
  std::optional<Trace> witness;
};

/// Every maximal path of the tree must be a trace of the process semantics
/// (both sides are prefix closed, so maximal paths suffice).
inline InclusionReport check_trace_inclusion(const ExecTree& tree, const Process& p, std::size_t replication = 2) {
  SapicSlts s(p, replication);
  InclusionReport r;
  for (const auto& t : tree_paths(tree)) {
    ++r.checked;
    if (!accepts_trace(s, t)) {
      r.ok = false;
      r.witness = t;
      return r;
    }
  }
  return r;
}

}  // namespace symcomp
