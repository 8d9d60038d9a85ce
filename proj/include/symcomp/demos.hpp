#pragma once

#include <set>
#include <string>
#include <vector>

#include "symcomp/checks.hpp"
#include "symcomp/combiners.hpp"
#include "symcomp/pipeline.hpp"
#include "symcomp/sapic.hpp"
#include "symcomp/sapic_semantics.hpp"
#include "symcomp/scenario.hpp"

namespace symcomp {

namespace demo {

inline const char* const kFig5Program = R"txt(// Masked encryption key: encrypt m under a fresh key, then send the key
// masked with a constant.
block 0x0:
  [R30 = 0x1;] jmp(0x44)          // rng
  assign(R1, var(R0))
  assign(R0, "m")
  [R30 = 0x4;] jmp(0x20)          // senc
  [R30 = 0x5;] jmp(0x04)          // send R0
  assign(R2, R1 ^ 0xdeadbeef)
  [R30 = 0x7;] jmp(0x08)          // send R2
  halt
)txt";

inline const char* const kFig5Scenario = R"txt(# Masked encryption key.
program = "fig5.bir"
combiner = "bitp"
depth = 64
ded_budget = 8
unroll = 1

[signature]
senc = 2
sdec = 2

[equations]
dec = "sdec(senc(x,y),y) = x"

[labels]
0x44 = "rng k"
0x20 = "fn senc c"
0x04 = "send R0"
0x08 = "send R2"

[queries]
m = "K(R0)"
key = "K(k)"
)txt";

inline const char* const kConcatProgram = R"txt(// Formatted message: m concatenated with its length, encrypted under a
// fresh key. Both the ciphertext and the key go out.
block 0x0:
  [R30 = 0x1;] jmp(0x44)          // rng
  assign(R1, var(R0))
  assign(R0, M ++ len(M))
  [R30 = 0x4;] jmp(0x20)          // senc
  [R30 = 0x5;] jmp(0x04)          // send R0
  [R30 = 0x6;] jmp(0x08)          // send R1
  halt
)txt";

inline const char* const kConcatScenario = R"txt(# Message formatted as m ++ len(m).
program = "concat.bir"
combiner = "bit"
depth = 64
ded_budget = 8

[signature]
senc = 2
sdec = 2

[equations]
dec = "sdec(senc(x,y),y) = x"

[labels]
0x44 = "rng k"
0x20 = "fn senc c"
0x04 = "send R0"
0x08 = "send R1"

[consts]
lenM = "len(M)"

[queries]
m = "K(M)"
)txt";

inline Scenario fig5_scenario() { return parse_scenario(kFig5Scenario, {}, kFig5Program); }
inline Scenario concat_scenario() { return parse_scenario(kConcatScenario, {}, kConcatProgram); }

inline Signature crypto_signature() { return Signature{{"senc", 2}, {"sdec", 2}}; }
inline Theory crypto_theory() { return {parse_equation("sdec(senc(x,y),y) = x", crypto_signature())}; }

inline Term sym(const std::string& id) { return Term::sym(Symbol(id)); }

inline std::vector<std::string> strings(const std::vector<DyPredicate>& ps) {
  std::vector<std::string> out;
  for (const auto& p : ps) out.push_back(to_string(p));
  return out;
}

}  // namespace demo

/// Runs the scenario's program against library and attacker under `combiner`.
inline QueryResult query_scenario(const Scenario& sc, const std::string& goal, const std::string& combiner) {
  Sbir program(sc.program(), sc.config, sc.limits());
  return run_query(program, sbir_combiner(combiner), sc.attacker(), parse_goal(goal, sc.config.signature),
                   sc.query_options());
}

// ---------------------------------------------------------------------------
// Columns of the masked-key walkthrough

struct Fig5Columns {
  std::vector<std::string> sbir_events;
  std::vector<std::string> program_facts;  // per event, joined with "; "
  std::vector<std::string> attacker_facts;
  std::string sapic;
  std::string proof;
  DeduceStatus status = DeduceStatus::NotDerivable;
  std::vector<std::string> acquired;  // in acquisition order
  bool roundtrip = false;
  bool inclusion = false;
};

inline std::string join(const std::vector<std::string>& xs, const std::string& sep) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? sep : "") + xs[i];
  return s;
}

inline Fig5Columns fig5_columns() {
  Scenario sc = demo::fig5_scenario();
  Sbir program(sc.program(), sc.config, sc.limits());
  Fig5Columns c;
  ExecTree tree = program.build_tree(sc.depth);
  Process proc = translate_tree(tree);
  c.sapic = pretty_print(proc);
  c.roundtrip = parse_process(c.sapic, sc.config.signature) == proc;
  c.inclusion = check_trace_inclusion(tree, proc, sc.replication).ok;
  auto r = run_query(program, sbir_combiner("bitp"), sc.attacker(), parse_goal("K(R0)"), sc.query_options());
  for (const auto& s : r.steps) {
    c.sbir_events.push_back(to_string(s.event));
    c.program_facts.push_back(join(s.program_facts, "; "));
    c.attacker_facts.push_back(join(demo::strings(s.attacker_facts), "; "));
  }
  c.status = r.deduction.status;
  if (r.deduction.proof) c.proof = to_string(*r.deduction.proof);
  c.acquired = demo::strings(r.acquired);
  return c;
}

// ---------------------------------------------------------------------------
// Examples

struct VerdictPair {
  DeduceStatus with;
  DeduceStatus without;
};

/// Masked key: K(R0) under bit′ and under the empty combiner.
inline VerdictPair ex1_masked_key() {
  Scenario sc = demo::fig5_scenario();
  return {query_scenario(sc, "K(R0)", "bitp").deduction.status, query_scenario(sc, "K(R0)", "empty").deduction.status};
}

/// K(b), b ≐ m ++ len(m), const len(m) through the bit combiner.
inline std::set<LibAttPredicate> ex1_concat_derived() {
  using C = Combined<SbirPredicate, LibAttPredicate>;
  Expr len_m = Expr::unop(UnOp::Len, Expr::sym("m"));
  std::set<C> pi{
      Right<LibAttPredicate>{AttackerEmbedding<LibAttPredicate>::embed(dy_k(demo::sym("b")))},
      Left<SbirPredicate>{peq(Symbol("b"), Expr::binop(BinOp::Concat, Expr::sym("m"), len_m))},
      Left<SbirPredicate>{pconst(len_m)},
  };
  std::set<LibAttPredicate> out;
  for (const auto& p : bit_combiner().derive(pi))
    if (auto* r = std::get_if<Right<LibAttPredicate>>(&p)) out.insert(r->p);
  return out;
}

/// K(c), c ↦ senc(m, k), K(k) ⊢ K(m).
inline DeduceResult ex2_logical_truth() {
  using demo::sym;
  std::set<DyPredicate> pi{dy_k(sym("c")), dy_maps(Symbol("c"), mk_app({"senc", 2}, {sym("m"), sym("k")})),
                           dy_k(sym("k"))};
  return dy_deduce(pi, dy_k(sym("m")), 6, demo::crypto_theory());
}

struct TransferResult {
  std::vector<std::string> shared;  // facts produced by the equality combiner
  DeduceResult deduction;
};

/// k''' ≐ k' with k' ~ k gives k''' ~ k; then K(m) from K(k), K(c) and
/// c ↦ senc(m, k''').
inline TransferResult ex3_transfer() {
  using demo::sym;
  using C = Combined<SbirPredicate, LibAttPredicate>;
  std::set<C> pi{
      Left<SbirPredicate>{peq(Symbol("k'''"), Expr::sym("k'"))},
      Right<LibAttPredicate>{AttackerEmbedding<LibAttPredicate>::embed(dy_eq(sym("k'"), sym("k")))},
  };
  TransferResult r;
  std::set<DyPredicate> att{dy_k(sym("k")), dy_k(sym("c")),
                            dy_maps(Symbol("c"), mk_app({"senc", 2}, {sym("m"), sym("k'''")}))};
  for (const auto& p : eq_share_combiner().derive(pi)) {
    if (auto* l = std::get_if<Left<SbirPredicate>>(&p)) r.shared.push_back("L: " + to_string(l->p));
    if (auto* rp = std::get_if<Right<LibAttPredicate>>(&p))
      if (const DyPredicate* d = AttackerEmbedding<LibAttPredicate>::view(rp->p)) {
        r.shared.push_back("R: " + to_string(*d));
        att.insert(*d);
      }
  }
  r.deduction = dy_deduce(att, dy_k(sym("m")), 8, demo::crypto_theory());
  return r;
}

/// Formatted message: K(M) under the bit combiner and under the empty one.
inline VerdictPair ex4_formatted() {
  Scenario sc = demo::concat_scenario();
  return {query_scenario(sc, "K(M)", "bit").deduction.status, query_scenario(sc, "K(M)", "empty").deduction.status};
}

/// Library and attacker never draw the same name.
inline FreshnessReport ex5_freshness(std::size_t depth = 6) {
  return check_freshness(Signature{}, {private_name("n")}, depth);
}

// ---------------------------------------------------------------------------

struct DemoOutput {
  bool ok = false;
  std::vector<std::string> lines;
};

inline const std::vector<std::string>& demo_names() {
  static const std::vector<std::string> names{"ex1", "ex2", "ex3", "ex4", "ex5", "fig5"};
  return names;
}

inline DemoOutput run_demo(const std::string& name) {
  DemoOutput o;
  auto say = [&](std::string s) { o.lines.push_back(std::move(s)); };
  if (name == "ex1") {
    auto v = ex1_masked_key();
    say(std::string("K(R0) with bitp: ") + to_string(v.with));
    say(std::string("K(R0) with empty: ") + to_string(v.without));
    auto d = ex1_concat_derived();
    bool km = false;
    for (const auto& p : d)
      if (const DyPredicate* x = AttackerEmbedding<LibAttPredicate>::view(p)) {
        say("bit on b = m ++ len(m): " + to_string(*x));
        km |= *x == dy_k(demo::sym("m"));
      }
    o.ok = v.with == DeduceStatus::Proved && v.without == DeduceStatus::NotDerivable && km;
  } else if (name == "ex2") {
    auto r = ex2_logical_truth();
    say(std::string("K(m): ") + to_string(r.status));
    if (r.proof) {
      say(to_string(*r.proof));
      std::multiset<std::string> rules;
      collect_rules(*r.proof, rules);
      std::vector<std::string> rs(rules.begin(), rules.end());
      say("rules: " + join(rs, ", "));
    }
    o.ok = r.proved();
  } else if (name == "ex3") {
    auto r = ex3_transfer();
    for (const auto& s : r.shared) say("eqshare: " + s);
    say(std::string("K(m): ") + to_string(r.deduction.status));
    if (r.deduction.proof) say(to_string(*r.deduction.proof));
    o.ok = r.deduction.proved();
  } else if (name == "ex4") {
    auto v = ex4_formatted();
    say(std::string("K(M) with bit: ") + to_string(v.with));
    say(std::string("K(M) with empty: ") + to_string(v.without));
    o.ok = v.with == DeduceStatus::Proved && v.without == DeduceStatus::NotDerivable;
  } else if (name == "ex5") {
    auto r = ex5_freshness();
    say("traces: " + std::to_string(r.traces));
    if (r.witness) say("repeated name in " + trace_inline(*r.witness));
    if (r.post_library_pick) say("second pick: " + trace_inline(*r.post_library_pick));
    o.ok = r.ok && r.post_library_pick.has_value();
  } else if (name == "fig5") {
    auto c = fig5_columns();
    for (std::size_t i = 0; i < c.sbir_events.size(); ++i)
      say(c.sbir_events[i] + " | " + c.program_facts[i] + " | " + c.attacker_facts[i]);
    say("--");
    std::istringstream in(c.sapic);
    for (std::string l; std::getline(in, l);) say(l);
    say("--");
    say(std::string("K(R0): ") + to_string(c.status) + (c.proof.empty() ? "" : "  " + c.proof));
    for (std::size_t i = 0; i < c.acquired.size(); ++i) say(c.acquired[i] + " (" + std::to_string(i + 1) + ")");
    o.ok = c.status == DeduceStatus::Proved && c.roundtrip && c.inclusion;
  } else {
    throw Error(ErrorKind::ConfigError, "unknown demo '" + name + "'");
  }
  return o;
}

}  // namespace symcomp
