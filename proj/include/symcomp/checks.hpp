#pragma once

#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "symcomp/bir.hpp"
#include "symcomp/bir_concrete.hpp"
#include "symcomp/compose.hpp"
#include "symcomp/dy_attacker.hpp"
#include "symcomp/dy_library.hpp"
#include "symcomp/lts.hpp"
#include "symcomp/sapic_semantics.hpp"
#include "symcomp/sbir.hpp"

namespace symcomp {

// ---------------------------------------------------------------------------
// Small explicit symbolic LTS used as property-test fixtures.

struct FixPred {
  std::string name;
  auto operator<=>(const FixPred&) const = default;
  bool operator==(const FixPred&) const = default;
};

inline std::string to_string(const FixPred& p) { return p.name; }

struct FixEdge {
  int from = 0;
  std::string label;
  int to = 0;
  std::optional<FixPred> requires_pred;  // presence guard
  std::optional<FixPred> forbids_pred;   // absence guard
  std::optional<FixPred> adds;
};

struct FixRule {
  FixPred premise;
  FixPred conclusion;
};

/// Explicit symbolic LTS whose events are `Ev(label)` and whose predicates
/// are plain atoms.
class FixtureLts {
 public:
  using Predicate = FixPred;
  using Inner = int;
  using State = SymbolicState<Predicate, Inner>;

  std::string name = "fixture";
  int states = 1;
  std::vector<FixEdge> edges;
  std::vector<FixRule> rules;
  std::set<FixPred> initial_pi;

  State initial() const { return {{}, initial_pi, 0}; }

  std::set<EventTag> sync_alphabet() const {
    std::set<EventTag> out;
    for (const auto& e : edges) out.insert("Ev:" + e.label);
    return out;
  }

  std::vector<Transition<State>> successors(const State& st) const {
    std::vector<Transition<State>> out;
    for (const auto& e : edges) {
      if (e.from != st.inner) continue;
      if (e.requires_pred && !st.pi.contains(*e.requires_pred)) continue;
      if (e.forbids_pred && st.pi.contains(*e.forbids_pred)) continue;
      State n = st;
      n.inner = e.to;
      if (e.adds) n.pi.insert(*e.adds);
      out.push_back({make_ev(e.label), std::move(n)});
    }
    dedup(out);
    return out;
  }

  std::vector<State> step(const State& st, const Event& e) const { return accept_own(successors(st), e); }

  std::set<Predicate> deduce_step(const State& st) const {
    std::set<Predicate> out;
    for (const auto& r : rules)
      if (st.pi.contains(r.premise) && !st.pi.contains(r.conclusion)) out.insert(r.conclusion);
    return out;
  }
};

inline std::string to_string(const FixtureLts& f) {
  std::string s = f.name + " states=" + std::to_string(f.states) + "\n";
  for (const auto& e : f.edges) {
    s += "  " + std::to_string(e.from) + " -" + e.label;
    if (e.requires_pred) s += " [" + e.requires_pred->name + "]";
    if (e.forbids_pred) s += " [!" + e.forbids_pred->name + "]";
    if (e.adds) s += " +" + e.adds->name;
    s += "-> " + std::to_string(e.to) + "\n";
  }
  for (const auto& r : f.rules) s += "  " + r.premise.name + " |- " + r.conclusion.name + "\n";
  return s;
}

/// Random fixture with ≤ 3 states, presence guards and at most one rule.
/// Labels come from `labels`; predicates from {p, q}.
inline FixtureLts random_fixture(std::mt19937_64& rng, const std::vector<std::string>& labels,
                                 const std::string& name = "fixture") {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)); };
  auto coin = [&](int pct) { return static_cast<int>(pick(100)) < pct; };
  const std::vector<std::string> preds{"p", "q"};
  FixtureLts f;
  f.name = name;
  f.states = static_cast<int>(1 + pick(3));
  std::size_t n_edges = 1 + pick(4);
  for (std::size_t i = 0; i < n_edges; ++i) {
    FixEdge e;
    e.from = static_cast<int>(pick(static_cast<std::size_t>(f.states)));
    e.to = static_cast<int>(pick(static_cast<std::size_t>(f.states)));
    e.label = labels[pick(labels.size())];
    if (coin(30)) e.requires_pred = FixPred{preds[pick(2)]};
    if (coin(30)) e.adds = FixPred{preds[pick(2)]};
    f.edges.push_back(std::move(e));
  }
  if (coin(50)) f.rules.push_back({FixPred{preds[pick(2)]}, FixPred{preds[pick(2)]}});
  if (coin(30)) f.initial_pi.insert(FixPred{preds[pick(2)]});
  return f;
}

/// Left(p) ⊢ Right(q).
inline Combiner<FixPred, FixPred> fixture_enabling_combiner(const std::string& p = "p", const std::string& q = "q") {
  using C = Combined<FixPred, FixPred>;
  Combiner<FixPred, FixPred> c;
  c.name = "fixture-enabling";
  c.declared_class = CombinerClass::Enabling;
  c.derive = [p, q](const std::set<C>& pi) {
    std::set<C> out;
    if (pi.contains(C{Left<FixPred>{{p}}}) && !pi.contains(C{Right<FixPred>{{q}}})) out.insert(Right<FixPred>{{q}});
    return out;
  };
  return c;
}

// ---------------------------------------------------------------------------
// Composition properties

struct PropertyReport {
  bool ok = true;
  std::size_t checked = 0;
  std::string detail;
  std::optional<Trace> counterexample;
};

inline std::string to_string(const PropertyReport& r) {
  std::string s = r.ok ? "pass" : "FAIL";
  s += " (" + std::to_string(r.checked) + " checked)";
  if (!r.detail.empty()) s += " " + r.detail;
  if (r.counterexample) s += " counterexample " + trace_inline(*r.counterexample);
  return s;
}

/// Trace-level check of composition against the interleaving oracle.
/// Enabling combiners: every interleaving is a composed trace. Disabling:
/// every composed trace is an interleaving. Neutral: both.
template <SymbolicLts S1, SymbolicLts S2>
PropertyReport verify_thm1(const S1& s1, const S2& s2, Combiner<typename S1::Predicate, typename S2::Predicate> comb,
                           std::size_t depth, std::size_t ded_budget = 3) {
  PropertyReport r;
  CombinerClass cls = comb.declared_class;
  auto sys = compose(s1, s2, std::move(comb));
  auto t1 = enumerate_traces(s1, depth, ded_budget);
  auto t2 = enumerate_traces(s2, depth, ded_budget);
  auto composed = enumerate_traces(sys, depth, 2 * ded_budget + 2);
  const auto& sync = sys.shared_alphabet();
  if (cls != CombinerClass::Disabling) {
    auto oracle = interleaving_closure(t1, t2, sync, depth);
    for (const auto& t : oracle) {
      ++r.checked;
      if (!composed.contains(t)) {
        r.ok = false;
        r.detail = "interleaving missing from composition";
        r.counterexample = t;
        return r;
      }
    }
  }
  if (cls != CombinerClass::Enabling) {
    for (const auto& t : composed) {
      ++r.checked;
      bool found = false;
      for (const auto& a : t1) {
        for (const auto& b : t2)
          if (a.size() + b.size() >= t.size() && is_interleaving(t, a, b, sync)) {
            found = true;
            break;
          }
        if (found) break;
      }
      if (!found) {
        r.ok = false;
        r.detail = "composed trace is not an interleaving";
        r.counterexample = t;
        return r;
      }
    }
  }
  return r;
}

/// s1∥s2 against s2∥s1 and (s1∥s2)∥s3 against s1∥(s2∥s3), empty combiners.
template <SymbolicLts S1, SymbolicLts S2, SymbolicLts S3>
PropertyReport verify_symmetry_associativity(const S1& s1, const S2& s2, const S3& s3, std::size_t depth,
                                             std::size_t ded_budget = 3) {
  PropertyReport r;
  auto cmp = [&](const std::set<Trace>& a, const std::set<Trace>& b, const std::string& what) {
    r.checked += a.size();
    if (a == b) return true;
    r.ok = false;
    r.detail = what;
    for (const auto& t : a)
      if (!b.contains(t)) r.counterexample = t;
    if (!r.counterexample)
      for (const auto& t : b)
        if (!a.contains(t)) r.counterexample = t;
    return false;
  };
  std::size_t ded = 3 * ded_budget + 2;
  auto ab = enumerate_traces(compose(s1, s2), depth, ded);
  auto ba = enumerate_traces(compose(s2, s1), depth, ded);
  if (!cmp(ab, ba, "symmetry")) return r;
  auto left_assoc = enumerate_traces(compose(compose(s1, s2), s3), depth, ded);
  auto right_assoc = enumerate_traces(compose(s1, compose(s2, s3)), depth, ded);
  cmp(left_assoc, right_assoc, "associativity");
  return r;
}

/// Adding any combiner-derived predicate never removes an available event,
/// checked on every composed state reachable within `depth` events.
template <SymbolicLts S1, SymbolicLts S2>
PropertyReport check_enabling(const Combiner<typename S1::Predicate, typename S2::Predicate>& comb, const S1& s1,
                              const S2& s2, std::size_t depth, std::size_t max_states = 20000) {
  PropertyReport r;
  auto sys = compose(s1, s2, comb);
  using State = typename decltype(sys)::State;
  std::set<State> seen;
  std::vector<std::pair<State, std::size_t>> work{{sys.initial(), depth}};
  auto events = [&](const State& st) {
    std::set<Event> out;
    for (const auto& t : sys.successors(st)) out.insert(t.event);
    return out;
  };
  while (!work.empty()) {
    auto [st, d] = work.back();
    work.pop_back();
    if (!seen.insert(st).second) continue;
    if (seen.size() > max_states) throw Error(ErrorKind::StateBudgetExceeded, "check_enabling");
    auto before = events(st);
    for (const auto& p : comb.derive(st.pi)) {
      ++r.checked;
      State more = st;
      more.pi.insert(p);
      auto after = events(more);
      for (const auto& e : before) {
        if (!after.contains(e)) {
          r.ok = false;
          r.detail = "derived " + to_string(p) + " disables " + to_string(e);
          return r;
        }
      }
      work.push_back({more, d});
    }
    for (const auto& p : sys.deduce_step(st)) {
      State more = st;
      more.pi.insert(p);
      work.push_back({more, d});
    }
    if (d == 0) continue;
    for (auto& t : sys.successors(st)) work.push_back({std::move(t.next), d - 1});
  }
  return r;
}

// ---------------------------------------------------------------------------
// Freshness across library and attacker

struct FreshnessReport {
  bool ok = true;
  std::size_t traces = 0;
  std::optional<Trace> witness;            // trace repeating a name
  std::optional<Trace> post_library_pick;  // trace showing a second pick with a new name
};

inline std::optional<Name> fresh_event_name(const Event& e) {
  if (auto* f = std::get_if<ev::SFr>(&e)) return f->name;
  if (auto* s = std::get_if<ev::Silent>(&e)) return s->name;
  return std::nullopt;
}

/// No trace of Lib ∥ Att within `depth` uses a name in two freshness events.
inline FreshnessReport check_freshness(const Signature& sig, const std::vector<Name>& names, std::size_t depth,
                                       std::size_t ded_budget = 0) {
  DyConfig dc;
  dc.signature = sig;
  dc.names = names;
  auto sys = compose(DyLibrary(LibConfig{sig, names}), DyAttacker(dc), lib_att_combiner());
  FreshnessReport r;
  for (const auto& t : enumerate_traces(sys, depth, ded_budget)) {
    ++r.traces;
    std::set<Name> used;
    std::size_t picks = 0;
    for (const auto& e : t) {
      auto n = fresh_event_name(e);
      if (!n) continue;
      ++picks;
      if (!used.insert(*n).second) {
        r.ok = false;
        r.witness = t;
        return r;
      }
    }
    if (picks >= 2 && std::holds_alternative<ev::SFr>(t.front()) && !r.post_library_pick) r.post_library_pick = t;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Refinement: concrete runs against the execution tree

using Interpretation = std::map<std::string, Bval>;  // symbol id → value

struct RefinementResult {
  bool ok = false;
  Trace symbolic;
  Interpretation iota;
};

namespace detail {

inline bool named_after(const std::string& id, const std::string& hint) {
  return id == hint || (id.size() > hint.size() + 1 && id.compare(0, hint.size() + 1, hint + "_") == 0);
}

class RefinementSearch {
 public:
  RefinementSearch(const ConcreteTrace& c, const Env& initial) : c_(c), initial_(initial) {}

  std::optional<RefinementResult> run(const ExecTree& t) {
    Interpretation iota;
    std::vector<std::pair<Expr, bool>> phi;
    Trace path;
    if (go(t, 0, iota, phi, path)) return RefinementResult{true, result_path_, result_};
    return std::nullopt;
  }

 private:
  /// Binds x to v, or checks an existing binding.
  static bool bind(Interpretation& iota, const Symbol& x, const Bval& v) {
    auto [it, fresh] = iota.emplace(x.id, v);
    return fresh || it->second == v;
  }

  /// Evaluates e under iota; unbound symbols named like an initial register
  /// take that register's initial value.
  std::optional<Bval> eval(Interpretation& iota, const Expr& e) const {
    for (const auto& s : symbols_of(e)) {
      if (iota.contains(s.id)) continue;
      auto it = initial_.find(s.id);
      if (it == initial_.end()) return std::nullopt;
      iota.emplace(s.id, it->second);
    }
    try {
      return eval_expr(iota, e);
    } catch (const Error&) {
      return std::nullopt;
    }
  }

  bool conditions_hold(Interpretation& iota, const std::vector<std::pair<Expr, bool>>& phi) const {
    for (const auto& [c, pol] : phi) {
      auto v = eval(iota, c);
      if (!v || truthy(*v) != pol) return false;
    }
    return true;
  }

  bool go(const ExecTree& t, std::size_t k, Interpretation iota, std::vector<std::pair<Expr, bool>> phi,
          Trace& path) {
    if (t.is_branch()) {
      for (int side = 0; side < 2; ++side) {
        auto phi2 = phi;
        phi2.emplace_back(*t.cond, side == 0);
        if (go(side == 0 ? t.left() : t.right(), k, iota, phi2, path)) return true;
      }
      return false;
    }
    if (k == c_.size()) {
      if (!conditions_hold(iota, phi)) return false;
      result_ = iota;
      result_path_ = path;
      return true;
    }
    if (t.is_leaf()) return false;
    const Event& e = *t.event;
    if (std::holds_alternative<ev::Loop>(e)) {
      path.push_back(e);
      bool ok = go(t.child(), k, iota, phi, path);
      path.pop_back();
      return ok;
    }
    if (!match(e, c_[k], iota)) return false;
    path.push_back(e);
    bool ok = go(t.child(), k + 1, iota, phi, path);
    path.pop_back();
    return ok;
  }

  bool match(const Event& e, const ConcreteEvent& c, Interpretation& iota) const {
    if (auto* x = std::get_if<ev::SFr>(&e))
      return c.tag == "SFr" && c.vals.size() == 1 && named_after(x->name.text, c.label) &&
             bind(iota, Symbol(x->name.text), c.vals[0]);
    if (auto* x = std::get_if<ev::Assign>(&e)) {
      if (c.tag != "Assign" || c.vals.size() != 1 || !named_after(x->x.id, c.label)) return false;
      auto v = eval(iota, x->e);
      return v && *v == c.vals[0] && bind(iota, x->x, c.vals[0]);
    }
    if (auto* x = std::get_if<ev::FCall>(&e)) {
      if (c.tag != "FCall" || c.label != x->f.name || c.vals.size() != x->args.size() + 1) return false;
      for (std::size_t i = 0; i < x->args.size(); ++i)
        if (!bind(iota, x->args[i], c.vals[i])) return false;
      return bind(iota, x->result, c.vals.back());
    }
    if (auto* x = std::get_if<ev::P2A>(&e)) return c.tag == "P2A" && c.vals.size() == 1 && bind(iota, x->x, c.vals[0]);
    if (auto* x = std::get_if<ev::A2P>(&e)) return c.tag == "A2P" && c.vals.size() == 1 && bind(iota, x->x, c.vals[0]);
    if (auto* x = std::get_if<ev::Ev>(&e)) return c.tag == "Ev" && c.label == x->e.id;
    return false;
  }

  const ConcreteTrace& c_;
  const Env& initial_;
  Interpretation result_;
  Trace result_path_;
};

}  // namespace detail

/// Looks for a tree path whose events instantiate the concrete trace and
/// returns the symbol interpretation that does it.
inline std::optional<RefinementResult> find_refinement(const ExecTree& tree, const ConcreteTrace& c,
                                                       const Env& initial_env = {}) {
  detail::RefinementSearch s(c, initial_env);
  return s.run(tree);
}

// ---------------------------------------------------------------------------
// Random BIR programs for the translation checks

struct GeneratedProgram {
  BirProgram program;
  CryptoConfig config;
  std::string text;
};

/// Small random program over R0..R2 with external roles at 0x100.. and up
/// to three blocks (forward jumps, one optional back-edge).
inline GeneratedProgram random_program(std::mt19937_64& rng) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)); };
  const std::vector<std::string> regs{"R0", "R1", "R2"};
  Signature sig{{"senc", 2}, {"h", 1}};
  GeneratedProgram g;
  g.config.signature = sig;
  g.config.roles[Bval::num(0x100)] = parse_role("rng k", sig);
  g.config.roles[Bval::num(0x104)] = parse_role("fn senc c", sig);
  g.config.roles[Bval::num(0x108)] = parse_role("fn h y", sig);
  g.config.roles[Bval::num(0x10c)] = parse_role("send R0", sig);
  g.config.roles[Bval::num(0x110)] = parse_role("recv R1", sig);
  g.config.roles[Bval::num(0x114)] = parse_role("event Done", sig);
  const std::vector<std::string> externals{"0x100", "0x104", "0x108", "0x10c", "0x110", "0x114"};

  auto atom = [&]() -> std::string {
    switch (pick(4)) {
      case 0: return "0x" + std::to_string(1 + pick(9));
      case 1: return "\"m\"";
      default: return regs[pick(regs.size())];
    }
  };
  auto expr = [&]() -> std::string {
    static const std::vector<std::string> ops{"^", "+", "*", "++", "="};
    switch (pick(4)) {
      case 0: return atom();
      case 1: return "!" + regs[pick(regs.size())];
      default: return regs[pick(regs.size())] + " " + ops[pick(ops.size())] + " " + atom();
    }
  };
  std::size_t blocks = 1 + pick(3);
  std::string text;
  for (std::size_t b = 0; b < blocks; ++b) {
    text += "block " + std::to_string(b) + ":\n";
    std::size_t stmts = 1 + pick(3);
    for (std::size_t i = 0; i < stmts; ++i) {
      if (pick(2) == 0)
        text += "  assign(" + regs[pick(regs.size())] + ", " + expr() + ")\n";
      else
        text += "  jmp(" + externals[pick(externals.size())] + ")\n";
    }
    std::size_t choice = pick(4);
    if (b + 1 < blocks && choice < 2) {
      text += "  cjmp(" + regs[pick(regs.size())] + " = " + atom() + ", " + std::to_string(b + 1) + ", " +
              std::to_string(blocks - 1) + ")\n";
    } else if (b + 1 < blocks && choice == 2) {
      text += "  jmp(" + std::to_string(b + 1) + ")\n";
    } else if (b > 0 && choice == 3) {
      text += "  cjmp(R2 = 0x1, " + std::to_string(pick(b + 1)) + ", " + std::to_string(b + 1 < blocks ? b + 1 : b) +
              ")\n";
    } else {
      text += "  halt\n";
    }
  }
  g.text = text;
  g.program = parse_program(text);
  return g;
}

/// Random execution tree of at most `max_nodes` nodes, built from a random
/// program. Returns nothing when no attempt fits.
inline std::optional<ExecTree> random_tree(std::mt19937_64& rng, std::size_t max_nodes = 10,
                                           std::size_t attempts = 200) {
  for (std::size_t i = 0; i < attempts; ++i) {
    GeneratedProgram g = random_program(rng);
    SbirLimits lim;
    lim.depth = 6;
    lim.unroll = 1;
    try {
      ExecTree t = build_tree(g.program, g.config, lim);
      if (t.size() <= max_nodes && t.event_nodes() > 0) return t;
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

}  // namespace symcomp
