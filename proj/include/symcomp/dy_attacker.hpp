#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "symcomp/compose.hpp"
#include "symcomp/lts.hpp"
#include "symcomp/term.hpp"

namespace symcomp {

namespace dy {
struct K {
  Term t;
  auto operator<=>(const K&) const = default;
  bool operator==(const K&) const = default;
};
struct Eq {
  Term a, b;
  auto operator<=>(const Eq&) const = default;
  bool operator==(const Eq&) const = default;
};
struct Fresh {
  Name n;
  auto operator<=>(const Fresh&) const = default;
  bool operator==(const Fresh&) const = default;
};
struct Maps {
  Symbol x;
  Term t;
  auto operator<=>(const Maps&) const = default;
  bool operator==(const Maps&) const = default;
};
}  // namespace dy

using DyPredicate = std::variant<dy::K, dy::Eq, dy::Fresh, dy::Maps>;

inline DyPredicate dy_k(Term t) { return dy::K{std::move(t)}; }
inline DyPredicate dy_eq(Term a, Term b) { return dy::Eq{std::move(a), std::move(b)}; }
inline DyPredicate dy_fresh(Name n) { return dy::Fresh{std::move(n)}; }
inline DyPredicate dy_maps(Symbol x, Term t) { return dy::Maps{std::move(x), std::move(t)}; }

inline std::string to_string(const DyPredicate& p) {
  struct V {
    std::string operator()(const dy::K& k) const { return "K(" + to_string(k.t) + ")"; }
    std::string operator()(const dy::Eq& e) const { return to_string(e.a) + " ~ " + to_string(e.b); }
    std::string operator()(const dy::Fresh& f) const { return "fresh(" + f.n.text + ")"; }
    std::string operator()(const dy::Maps& m) const { return m.x.id + " ↦ " + to_string(m.t); }
  };
  return std::visit(V{}, p);
}

inline void collect_symbols(const DyPredicate& p, std::set<Symbol>& out) {
  if (auto* k = std::get_if<dy::K>(&p)) collect_symbols(k->t, out);
  if (auto* e = std::get_if<dy::Eq>(&p)) {
    collect_symbols(e->a, out);
    collect_symbols(e->b, out);
  }
  if (auto* m = std::get_if<dy::Maps>(&p)) {
    out.insert(m->x);
    collect_symbols(m->t, out);
  }
}

/// Proof tree over the attacker's deduction rules. Rule names: K0, Pub, App,
/// Subst, Eq, AlSubst, and Hyp for an equality taken from Π.
struct Proof {
  std::string rule;
  std::string detail;
  DyPredicate conclusion;
  std::vector<Proof> premises;

  std::size_t height() const {
    std::size_t h = 0;
    for (const auto& p : premises) h = std::max(h, p.height());
    return h + 1;
  }
  std::string label() const { return detail.empty() ? rule : rule + " " + detail; }
};

/// `Subst ← (App sdec ← (AlSubst ← (K0)), (K0)), (Eq)`
inline std::string to_string(const Proof& p) {
  std::string s = p.label();
  if (p.premises.empty()) return s;
  s += " ← ";
  for (std::size_t i = 0; i < p.premises.size(); ++i) s += (i ? ", (" : "(") + to_string(p.premises[i]) + ")";
  return s;
}

inline std::string to_indented(const Proof& p, std::size_t indent = 0) {
  std::string s = std::string(indent * 2, ' ') + p.label() + ": " + to_string(p.conclusion) + "\n";
  for (const auto& q : p.premises) s += to_indented(q, indent + 1);
  return s;
}

inline void collect_rules(const Proof& p, std::multiset<std::string>& out) {
  out.insert(p.rule);
  for (const auto& q : p.premises) collect_rules(q, out);
}

enum class DeduceStatus { Proved, NotDerivable, BoundExceeded };

inline const char* to_string(DeduceStatus s) {
  switch (s) {
    case DeduceStatus::Proved: return "DERIVED";
    case DeduceStatus::NotDerivable: return "NOT-DERIVED";
    case DeduceStatus::BoundExceeded: return "INCONCLUSIVE";
  }
  return "?";
}

struct DeduceResult {
  DeduceStatus status = DeduceStatus::NotDerivable;
  std::optional<Proof> proof;
  bool proved() const { return status == DeduceStatus::Proved; }
};

inline void collect_terms(const DyPredicate& p, std::set<Term>& out) {
  if (auto* k = std::get_if<dy::K>(&p)) collect_subterms(k->t, out);
  if (auto* e = std::get_if<dy::Eq>(&p)) {
    collect_subterms(e->a, out);
    collect_subterms(e->b, out);
  }
  if (auto* m = std::get_if<dy::Maps>(&p)) {
    collect_subterms(Term::sym(m->x), out);
    collect_subterms(m->t, out);
  }
}

/// Backward-chaining search over the attacker's deduction rules for a fixed
/// predicate set. Successful proofs and clean failures are memoised, so one
/// prover can answer many goals over the same Π.
class DyProver {
 public:
  DyProver(const std::set<DyPredicate>& pi, const Theory& theory, std::size_t bound)
      : pi_(pi), theory_(theory), bound_(bound) {
    for (const auto& p : pi_) {
      collect_terms(p, pool_);
      if (auto* e = std::get_if<dy::Eq>(&p)) eqs_.push_back(*e);
      if (auto* m = std::get_if<dy::Maps>(&p)) maps_.push_back(*m);
    }
  }

  const std::set<Term>& pool() const { return pool_; }

  DeduceResult deduce(const DyPredicate& goal) {
    if (auto* k = std::get_if<dy::K>(&goal)) collect_subterms(k->t, pool_);
    if (auto* e = std::get_if<dy::Eq>(&goal)) {
      collect_subterms(e->a, pool_);
      collect_subterms(e->b, pool_);
    }
    hit_bound_ = false;
    auto p = prove(goal, bound_);
    if (p) return {DeduceStatus::Proved, std::move(p)};
    return {hit_bound_ ? DeduceStatus::BoundExceeded : DeduceStatus::NotDerivable, std::nullopt};
  }

  bool derivable(const Term& t) { return deduce(dy_k(t)).proved(); }

 private:
  std::optional<Proof> prove(const DyPredicate& goal, std::size_t depth) {
    if (auto it = proved_.find(goal); it != proved_.end() && it->second.height() <= depth) return it->second;
    if (failed_.contains(goal)) return std::nullopt;
    if (depth == 0) {
      hit_bound_ = true;
      dirty_ = true;
      return std::nullopt;
    }
    if (active_.contains(goal)) {
      dirty_ = true;
      return std::nullopt;
    }
    active_.insert(goal);
    bool outer_dirty = dirty_;
    dirty_ = false;
    std::optional<Proof> res;
    if (auto* k = std::get_if<dy::K>(&goal))
      res = prove_k(goal, k->t, depth);
    else if (auto* e = std::get_if<dy::Eq>(&goal))
      res = prove_eq(goal, e->a, e->b);
    active_.erase(goal);
    if (res) {
      proved_.insert_or_assign(goal, *res);
    } else if (!dirty_) {
      failed_.insert(goal);
    }
    dirty_ = outer_dirty || dirty_;
    return res;
  }

  std::optional<Proof> prove_eq(const DyPredicate& goal, const Term& a, const Term& b) {
    if (pi_.contains(dy_eq(a, b)) || pi_.contains(dy_eq(b, a))) return Proof{"Hyp", "", goal, {}};
    if (eq_mod_E(a, b, theory_)) return Proof{"Eq", "", goal, {}};
    return std::nullopt;
  }

  std::optional<Proof> prove_k(const DyPredicate& goal, const Term& t, std::size_t depth) {
    if (pi_.contains(goal)) return Proof{"K0", "", goal, {}};
    if (t.is_name() && t.as_name().is_public()) return Proof{"Pub", "", goal, {}};
    if (t.is_app()) {
      Proof p{"App", t.fn().name, goal, {}};
      bool ok = true;
      for (const auto& a : t.args()) {
        auto sub = prove(dy_k(a), depth - 1);
        if (!sub) {
          ok = false;
          break;
        }
        p.premises.push_back(std::move(*sub));
      }
      if (ok) return p;
    }
    for (const auto& m : maps_) {
      if (!(m.t == t)) continue;
      if (auto sub = prove(dy_k(Term::sym(m.x)), depth - 1)) return Proof{"AlSubst", "", goal, {std::move(*sub)}};
    }
    for (const auto& [cand, eq_rule] : subst_candidates(t)) {
      auto sub = prove(dy_k(cand), depth - 1);
      if (!sub) continue;
      Proof eqp{eq_rule, "", dy_eq(cand, t), {}};
      return Proof{"Subst", "", goal, {std::move(*sub), std::move(eqp)}};
    }
    return std::nullopt;
  }

  /// Terms t1 with t1 ~ t available, paired with the rule that justifies it.
  std::vector<std::pair<Term, std::string>> subst_candidates(const Term& t) {
    std::vector<std::pair<Term, std::string>> out;
    std::set<Term> seen{t};
    auto add = [&](const Term& c, const char* rule) {
      if (seen.insert(c).second) out.emplace_back(c, rule);
    };
    for (const auto& e : eqs_) {
      if (e.b == t) add(e.a, "Hyp");
      if (e.a == t) add(e.b, "Hyp");
    }
    if (theory_.empty()) return out;
    Term nf = normalize(t, theory_);
    for (const auto& p : pool_)
      if (!(p == t) && normalize(p, theory_) == nf) add(p, "Eq");
    for (const auto& eq : theory_) {
      Substitution b0;
      if (!match(eq.rhs(), t, b0)) continue;
      auto vars = symbols_of(eq.lhs());
      auto complete = [&](const Substitution& b) {
        return std::all_of(vars.begin(), vars.end(), [&](const Symbol& v) { return b.contains(v); });
      };
      auto try_inst = [&](const Substitution& b) {
        Term inst = substitute(eq.lhs(), b);
        if (normalize(inst, theory_) == nf) add(inst, "Eq");
      };
      if (complete(b0)) {
        try_inst(b0);
        continue;
      }
      std::set<Term> subpatterns;
      collect_subterms(eq.lhs(), subpatterns);
      for (const auto& sp : subpatterns) {
        if (!sp.is_app() || sp == eq.lhs()) continue;
        for (const auto& p : pool_) {
          Substitution b = b0;
          if (match(sp, p, b) && complete(b)) try_inst(b);
        }
      }
    }
    return out;
  }

  const std::set<DyPredicate>& pi_;
  const Theory& theory_;
  std::size_t bound_;
  std::set<Term> pool_;
  std::vector<dy::Eq> eqs_;
  std::vector<dy::Maps> maps_;
  std::map<DyPredicate, Proof> proved_;
  std::set<DyPredicate> failed_;
  std::set<DyPredicate> active_;
  bool dirty_ = false;
  bool hit_bound_ = false;
};

inline DeduceResult dy_deduce(const std::set<DyPredicate>& pi, const DyPredicate& goal, std::size_t bound,
                              const Theory& theory = {}) {
  DyProver prover(pi, theory, bound);
  return prover.deduce(goal);
}

/// Names drawn by freshness rules: declared private names first, then the
/// smallest n<i> that is not yet used.
inline std::vector<Name> fresh_name_candidates(const std::set<Name>& used, const std::vector<Name>& declared) {
  std::vector<Name> out;
  for (const auto& n : declared)
    if (!n.is_public() && !used.contains(n)) out.push_back(n);
  for (std::size_t i = 0;; ++i) {
    Name n = private_name("n" + std::to_string(i));
    if (!used.contains(n)) {
      if (std::find(out.begin(), out.end(), n) == out.end()) out.push_back(n);
      break;
    }
  }
  return out;
}

struct DyConfig {
  Theory theory;
  Signature signature;
  std::vector<Name> names;
  std::size_t proof_bound = 8;
  bool alias = true;
  std::set<DyPredicate> initial_pi;
  SymbolSet initial_sigma;
};

/// The Dolev-Yao attacker as a stateless symbolic LTS.
class DyAttacker {
 public:
  using Predicate = DyPredicate;
  using Inner = Unit;
  using State = SymbolicState<Predicate, Inner>;

  DyAttacker() = default;
  explicit DyAttacker(DyConfig cfg) : cfg_(std::move(cfg)) {}

  const DyConfig& config() const { return cfg_; }

  State initial() const { return {cfg_.initial_sigma, cfg_.initial_pi, {}}; }

  std::set<EventTag> sync_alphabet() const { return {"SFr", "Silent", "P2A", "A2P"}; }

  std::vector<Transition<State>> successors(const State& st) const {
    std::vector<Transition<State>> out;
    {
      auto [x, sigma] = fresh_symbol(st.sigma, "x");
      State n = st;
      n.sigma = std::move(sigma);
      n.pi.insert(dy_k(Term::sym(x)));
      out.push_back({ev::P2A{x}, std::move(n)});
    }
    DyProver prover(st.pi, cfg_.theory, cfg_.proof_bound);
    for (const auto& x : st.sigma)
      if (prover.derivable(Term::sym(x))) out.push_back({ev::A2P{x}, st});
    if (cfg_.alias) {
      auto cands = alias_arguments(st, prover);
      for (const auto& f : cfg_.signature.functions()) {
        std::vector<Term> args;
        enumerate_args(f, cands, args, [&](const Term& t) {
          auto [x, sigma] = fresh_symbol(st.sigma, "x");
          State n = st;
          n.sigma = std::move(sigma);
          n.pi.insert(dy_maps(x, t));
          out.push_back({ev::Alias{x, t}, std::move(n)});
        });
      }
    }
    for (const auto& n : fresh_name_candidates(used_names(st), cfg_.names)) {
      out.push_back({ev::SFr{n}, with_fresh(st, n, false)});
      out.push_back({ev::Silent{n}, with_fresh(st, n, true)});
    }
    dedup(out);
    return out;
  }

  std::vector<State> step(const State& st, const Event& e) const {
    if (auto* p = std::get_if<ev::P2A>(&e)) {
      State n = st;
      n.sigma.insert(p->x);
      n.pi.insert(dy_k(Term::sym(p->x)));
      return {n};
    }
    if (auto* a = std::get_if<ev::A2P>(&e)) {
      if (st.sigma.contains(a->x) && DyProver(st.pi, cfg_.theory, cfg_.proof_bound).derivable(Term::sym(a->x)))
        return {st};
      return {};
    }
    if (auto* f = std::get_if<ev::SFr>(&e)) {
      if (f->name.is_public() || st.pi.contains(dy_fresh(f->name))) return {};
      return {with_fresh(st, f->name, false)};
    }
    if (auto* s = std::get_if<ev::Silent>(&e)) {
      if (s->name.is_public() || st.pi.contains(dy_fresh(s->name))) return {};
      return {with_fresh(st, s->name, true)};
    }
    return {};
  }

  /// K(t) for every pool term t that is derivable but not yet known.
  std::set<Predicate> deduce_step(const State& st) const {
    std::set<Predicate> out;
    DyProver prover(st.pi, cfg_.theory, cfg_.proof_bound);
    std::set<Term> pool = prover.pool();
    for (const auto& s : st.sigma) pool.insert(Term::sym(s));
    for (const auto& t : pool) {
      auto k = dy_k(t);
      if (!st.pi.contains(k) && prover.derivable(t)) out.insert(k);
    }
    return out;
  }

 private:
  static std::set<Name> used_names(const State& st) {
    std::set<Name> used;
    for (const auto& p : st.pi)
      if (auto* f = std::get_if<dy::Fresh>(&p)) used.insert(f->n);
    return used;
  }

  static State with_fresh(const State& st, const Name& n, bool learn) {
    State next = st;
    next.pi.insert(dy_fresh(n));
    if (learn) next.pi.insert(dy_k(Term::name(n)));
    return next;
  }

  std::vector<Term> alias_arguments(const State& st, DyProver& prover) const {
    std::set<Term> pool = prover.pool();
    for (const auto& s : st.sigma) pool.insert(Term::sym(s));
    std::vector<Term> out;
    for (const auto& t : pool)
      if (prover.derivable(t)) out.push_back(t);
    for (const auto& n : cfg_.names)
      if (n.is_public() && !pool.contains(Term::name(n))) out.push_back(Term::name(n));
    return out;
  }

  template <class F>
  static void enumerate_args(const FnSym& f, const std::vector<Term>& cands, std::vector<Term>& args, F&& emit) {
    if (args.size() == f.arity) {
      emit(Term::app(f, args));
      return;
    }
    for (const auto& c : cands) {
      args.push_back(c);
      enumerate_args(f, cands, args, emit);
      args.pop_back();
    }
  }

  DyConfig cfg_;
};

template <>
struct AttackerEmbedding<DyPredicate> {
  static const DyPredicate* view(const DyPredicate& p) { return &p; }
  static DyPredicate embed(DyPredicate p) { return p; }
};

}  // namespace symcomp
