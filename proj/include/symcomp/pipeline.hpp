#pragma once

#include <optional>
#include <string>
#include <vector>

#include "symcomp/combiners.hpp"
#include "symcomp/compose.hpp"
#include "symcomp/dy_attacker.hpp"
#include "symcomp/dy_library.hpp"
#include "symcomp/lexer.hpp"

namespace symcomp {

struct AttackerSetup {
  Signature signature;
  Theory theory;
  std::vector<Name> names;
  std::size_t proof_bound = 8;
};

using LibAtt = Composed<DyLibrary, DyAttacker>;

inline LibAtt make_lib_att(const AttackerSetup& s) {
  DyConfig dc;
  dc.theory = s.theory;
  dc.signature = s.signature;
  dc.names = s.names;
  dc.proof_bound = s.proof_bound;
  return compose(DyLibrary(LibConfig{s.signature, s.names}), DyAttacker(dc), lib_att_combiner());
}

/// `K(t)`, `Eq(a, b)` or `a ~ b`.
inline DyPredicate parse_goal(const std::string& text, const Signature& sig = {}) {
  Lexer lx(text);
  DyPredicate g = dy_k(Term::sym("_"));
  if ((lx.is("K") || lx.is("Eq")) && lx.peek(1).text == "(") {
    bool k = lx.next().text == "K";
    lx.expect("(");
    Term a = parse_term(lx, sig, symbols_resolver());
    if (k) {
      g = dy_k(a);
    } else {
      lx.expect(",");
      g = dy_eq(a, parse_term(lx, sig, symbols_resolver()));
    }
    lx.expect(")");
  } else {
    Term a = parse_term(lx, sig, symbols_resolver());
    lx.expect("~");
    g = dy_eq(a, parse_term(lx, sig, symbols_resolver()));
  }
  if (!lx.at_end()) lx.fail("trailing input after goal");
  return g;
}

struct QueryOptions {
  std::size_t depth = 32;
  std::size_t ded_budget = 8;
  std::size_t max_states = 20000;
};

/// One program move of a run with the facts it produced. Attacker facts
/// include non-K facts obtained in the deduction gap that follows.
struct StepRecord {
  Event event;
  std::vector<std::string> program_facts;
  std::vector<DyPredicate> attacker_facts;
};

struct QueryResult {
  DeduceResult deduction;
  std::vector<StepRecord> steps;
  std::vector<DyPredicate> acquired;  // K over symbols gained by deduction, in order
  std::size_t states = 0;
  bool budget_hit = false;

  Trace trace() const {
    Trace t;
    for (const auto& s : steps) t.push_back(s.event);
    return t;
  }
};

template <class P>
std::set<DyPredicate> attacker_facts(const std::set<P>& pi) {
  std::set<DyPredicate> out;
  for (const auto& p : pi)
    if (const DyPredicate* d = AttackerEmbedding<P>::view(p)) out.insert(*d);
  return out;
}

namespace detail {

template <SymbolicLts S>
class QueryRun {
 public:
  using Sys = Composed<S, LibAtt>;
  using State = typename Sys::State;
  using Pred = typename Sys::Predicate;

  QueryRun(const Sys& sys, const AttackerSetup& setup, const DyPredicate& goal, const QueryOptions& opt,
           std::string via)
      : sys_(sys), setup_(setup), goal_(goal), opt_(opt), via_(std::move(via)) {}

  QueryResult run() {
    std::vector<StepRecord> steps;
    std::vector<DyPredicate> acquired;
    auto [st, added] = saturate_ordered(sys_, sys_.initial(), opt_.ded_budget);
    note_gap(added, nullptr, acquired);
    visit(st, steps, acquired, opt_.depth);
    if (!found_) {
      res_.steps = first_steps_;
      res_.acquired = first_acquired_;
      res_.deduction.status = any_bound_ ? DeduceStatus::BoundExceeded : DeduceStatus::NotDerivable;
    }
    res_.states = states_;
    return res_;
  }

 private:
  /// Program moves: the program's own proposals answered by the attacker
  /// side, plus attacker inputs the program accepts.
  std::vector<Transition<State>> program_moves(const State& st) const {
    std::vector<Transition<State>> out;
    auto p1 = sys_.proj1(st);
    auto p2 = sys_.proj2(st);
    const auto& shared = sys_.shared_alphabet();
    for (auto& t : sys_.left().successors(p1)) {
      if (!shared.contains(tag_of(t.event))) {
        out.push_back({t.event, sys_.join(t.next, p2)});
        continue;
      }
      for (auto& n2 : sys_.right().step(p2, t.event)) out.push_back({t.event, sys_.join(t.next, n2)});
    }
    if (sys_.left().sync_alphabet().contains("A2P")) {
      for (auto& t : sys_.right().successors(p2)) {
        if (!std::holds_alternative<ev::A2P>(t.event)) continue;
        for (auto& n1 : sys_.left().step(p1, t.event)) out.push_back({t.event, sys_.join(n1, t.next)});
      }
    }
    dedup(out);
    return out;
  }

  void note_gap(const std::vector<Pred>& added, StepRecord* rec, std::vector<DyPredicate>& acquired) const {
    for (const auto& p : added) {
      const DyPredicate* d = AttackerEmbedding<Pred>::view(p);
      if (!d) continue;
      if (auto* k = std::get_if<dy::K>(d)) {
        if (k->t.is_sym()) acquired.push_back(*d);
      } else if (rec) {
        rec->attacker_facts.push_back(*d);
      }
    }
  }

  void visit(const State& st, std::vector<StepRecord>& steps, std::vector<DyPredicate>& acquired, std::size_t depth) {
    if (found_) return;
    if (++states_ > opt_.max_states) {
      res_.budget_hit = true;
      any_bound_ = true;
      return;
    }
    auto pi = attacker_facts(st.pi);
    bool have_goal = pi.erase(goal_) > 0;
    DeduceResult r = dy_deduce(pi, goal_, setup_.proof_bound, setup_.theory);
    if (!r.proved() && have_goal) r = {DeduceStatus::Proved, Proof{"K0", via_, goal_, {}}};
    if (r.status == DeduceStatus::BoundExceeded) any_bound_ = true;
    if (r.proved()) {
      found_ = true;
      res_.deduction = std::move(r);
      res_.steps = steps;
      res_.acquired = acquired;
      return;
    }
    auto moves = depth == 0 ? std::vector<Transition<State>>{} : program_moves(st);
    if (moves.empty() && !have_first_) {
      have_first_ = true;
      first_steps_ = steps;
      first_acquired_ = acquired;
    }
    for (auto& t : moves) {
      StepRecord rec{t.event, {}, {}};
      for (const auto& p : t.next.pi) {
        if (st.pi.contains(p)) continue;
        if (auto* l = std::get_if<Left<typename S::Predicate>>(&p)) rec.program_facts.push_back(to_string(l->p));
        if (const DyPredicate* d = AttackerEmbedding<Pred>::view(p)) rec.attacker_facts.push_back(*d);
      }
      auto [next, added] = saturate_ordered(sys_, t.next, opt_.ded_budget);
      std::size_t mark = acquired.size();
      note_gap(added, &rec, acquired);
      steps.push_back(std::move(rec));
      visit(next, steps, acquired, depth - 1);
      steps.pop_back();
      acquired.erase(acquired.begin() + static_cast<std::ptrdiff_t>(mark), acquired.end());
      if (found_) return;
    }
  }

  const Sys& sys_;
  const AttackerSetup& setup_;
  DyPredicate goal_;
  QueryOptions opt_;
  std::string via_;
  QueryResult res_;
  bool found_ = false, any_bound_ = false, have_first_ = false;
  std::size_t states_ = 0;
  std::vector<StepRecord> first_steps_;
  std::vector<DyPredicate> first_acquired_;
};

}  // namespace detail

/// Composes `program ∥_comb (Lib ∥_lib-att Att)`, follows program moves with
/// a bounded deduction gap after each, and asks whether the attacker can
/// derive `goal` on some path. The proof is searched over the attacker facts
/// without the goal itself; a goal only the combiner supplies yields a bare
/// K0 leaf tagged with the combiner name.
template <SymbolicLts S>
QueryResult run_query(const S& program, Combiner<typename S::Predicate, LibAttPredicate> comb,
                      const AttackerSetup& setup, const DyPredicate& goal, const QueryOptions& opt = {}) {
  std::string via = comb.name;
  auto sys = compose(program, make_lib_att(setup), std::move(comb));
  detail::QueryRun<S> run(sys, setup, goal, opt, std::move(via));
  return run.run();
}

/// Combiner names accepted for an SBIR program on the left.
inline Combiner<SbirPredicate, LibAttPredicate> sbir_combiner(const std::string& name) {
  if (name == "empty") return empty_combiner<SbirPredicate, LibAttPredicate>();
  if (name == "overapprox") return over_approx_combiner();
  if (name == "eqshare") return eq_share_combiner();
  if (name == "bit") return bit_combiner();
  if (name == "bitp") return bit_prime_combiner();
  throw Error(ErrorKind::ConfigError, "combiner '" + name + "' does not apply to an SBIR program");
}

inline const std::vector<std::string>& combiner_names() {
  static const std::vector<std::string> names{"empty", "overapprox", "eqshare", "bit", "bitp", "bitp-sapic", "lib-att"};
  return names;
}

}  // namespace symcomp
