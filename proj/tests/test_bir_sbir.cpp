#include <gtest/gtest.h>

#include "oracles.hpp"
#include "symcomp/symcomp.hpp"

using namespace symcomp;

namespace {

CryptoConfig config(std::initializer_list<std::pair<const char*, const char*>> roles) {
  CryptoConfig cfg;
  cfg.signature = Signature{{"senc", 2}, {"sdec", 2}, {"h", 1}};
  for (const auto& [label, role] : roles) cfg.roles[detail::parse_label_text(label)] = parse_role(role, cfg.signature);
  return cfg;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::ConfigError;
}

std::vector<std::string> event_strings(const Trace& t) {
  std::vector<std::string> out;
  for (const auto& e : t) out.push_back(to_string(e));
  return out;
}

}  // namespace

TEST(BirLang, ParsesBlocksAndStatements) {
  auto p = parse_program(demo::kFig5Program);
  ASSERT_EQ(p.blocks.size(), 1u);
  EXPECT_EQ(p.statement_count(), 8u);
  EXPECT_EQ(parse_program(to_string(p)), p);
}

TEST(BirLang, HaltOnlyProgram) {
  auto p = parse_program("block 0x0:\n  halt\n");
  EXPECT_EQ(p.statement_count(), 1u);
}

TEST(BirLang, ReportsParseErrors) {
  EXPECT_EQ(kind_of([] { parse_program("block 0x0:\n  frobnicate(R0)\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_program("assign(R0, 1)"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_program("block 0x0:\n  assign(R0, 1 +)\n"); }), ErrorKind::ParseError);
  EXPECT_EQ(kind_of([] { parse_program(""); }), ErrorKind::ParseError);
}

TEST(BirLang, RejectsDuplicateLabels) {
  EXPECT_EQ(kind_of([] { parse_program("block 0x0:\n halt\nblock 0x0:\n halt\n"); }), ErrorKind::DuplicateLabel);
}

TEST(BirLang, EvaluatesExpressions) {
  Env env{{"R1", Bval::num(0xab)}, {"M", Bval::str("hi")}};
  EXPECT_EQ(eval_expr(env, parse_bir_expr("R1 ^ 0xdeadbeef")), Bval::num(0xab ^ 0xdeadbeefULL));
  EXPECT_EQ(eval_expr(env, parse_bir_expr("M ++ \"!\"")), Bval::str("hi!"));
  EXPECT_EQ(eval_expr(env, parse_bir_expr("len(M)")), Bval::num(2));
  EXPECT_EQ(eval_expr(env, parse_bir_expr("R1 = 0xab")), Bval::num(1));
  EXPECT_EQ(kind_of([&] { eval_expr(env, parse_bir_expr("M + 1")); }), ErrorKind::TypeMismatch);
  EXPECT_EQ(kind_of([&] { eval_expr(env, parse_bir_expr("R9")); }), ErrorKind::UnboundVariable);
}

TEST(BirLang, FoldsConstants) {
  EXPECT_EQ(fold(parse_bir_expr("1 + 2")), Expr::num(3));
  EXPECT_EQ(fold(parse_bir_expr("R0 + (1 + 2)")), parse_bir_expr("R0 + 3"));
}

TEST(BirLang, RolesParseAndValidate) {
  Signature sig{{"senc", 2}};
  EXPECT_EQ(parse_role("fn senc c", sig).fn, (FnSym{"senc", 2}));
  EXPECT_EQ(kind_of([&] { parse_role("fn nope", sig); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([&] { parse_role("teleport", sig); }), ErrorKind::ConfigError);
  CryptoConfig cfg = config({{"0x0", "rng k"}});
  EXPECT_EQ(kind_of([&] { validate(parse_program("block 0x0:\n halt\n"), cfg); }), ErrorKind::ConfigError);
}

TEST(BirLang, ConcreteRunOfFig5) {
  auto sc = demo::fig5_scenario();
  World w;
  w.rng = {Bval::num(0xab)};
  auto t = run_concrete(sc.program(), sc.config, w);
  ASSERT_EQ(t.size(), 7u);
  EXPECT_EQ(t[0].tag, "SFr");
  EXPECT_EQ(t.back().vals.back(), Bval::num(0xab ^ 0xdeadbeefULL));
}

// ---------------------------------------------------------------------------

TEST(SbirExec, Fig5SingleBranch) {
  auto sc = demo::fig5_scenario();
  auto tree = build_tree(sc.program(), sc.config, sc.limits());
  auto paths = tree_paths(tree);
  ASSERT_EQ(paths.size(), 1u);
  EXPECT_EQ(event_strings(*paths.begin()),
            (std::vector<std::string>{"SFr(k)", "Assign(R1,k)", "Assign(R0,\"m\")", "FCall(senc,R0,R1;c)", "P2A(c)",
                                      "Assign(R2,R1 ^ 0xdeadbeef)", "P2A(R2)"}));
}

TEST(SbirExec, SymbolicBranchForks) {
  auto p = parse_program(demo::kBranchProgram);
  auto tree = build_tree(p, config({{"0x100", "rng k"}, {"0x10c", "send R0"}, {"0x110", "recv R1"}, {"0x114", "event Done"}}),
                         SbirLimits{});
  auto paths = tree_paths(tree);
  EXPECT_EQ(paths.size(), 2u);
  bool saw_done = false;
  for (const auto& t : paths)
    for (const auto& e : t) saw_done |= e == make_ev("Done");
  EXPECT_TRUE(saw_done);
}

TEST(SbirExec, LiteralConditionsArePruned) {
  auto p = parse_program("block 0x0:\n  cjmp(1 = 1, 0x10, 0x20)\nblock 0x10:\n  jmp(0x114)\n  halt\nblock 0x20:\n  halt\n");
  auto tree = build_tree(p, config({{"0x114", "event Done"}}), SbirLimits{});
  EXPECT_EQ(tree_paths(tree).size(), 1u);
  EXPECT_FALSE(tree.is_branch());
}

TEST(SbirExec, LoopsAreUnrolledAndMarked) {
  auto p = parse_program("block 0x0:\n  jmp(0x114)\n  jmp(0x0)\n");
  SbirLimits lim;
  lim.unroll = 2;
  auto tree = build_tree(p, config({{"0x114", "event Tick"}}), lim);
  auto paths = tree_paths(tree);
  ASSERT_EQ(paths.size(), 1u);
  const Trace& t = *paths.begin();
  EXPECT_EQ(std::count(t.begin(), t.end(), Event{ev::Loop{}}), 1);
  EXPECT_EQ(std::count(t.begin(), t.end(), make_ev("Tick")), 3);
}

TEST(SbirExec, JumpErrors) {
  auto cfg = config({{"0x114", "event Done"}});
  EXPECT_EQ(kind_of([&] { build_tree(parse_program("block 0x0:\n jmp(0x999)\n"), cfg, {}); }),
            ErrorKind::UnmappedExternalJump);
  EXPECT_EQ(kind_of([&] { build_tree(parse_program("block 0x0:\n jmp(R5)\n"), cfg, {}); }),
            ErrorKind::IllegalJumpTarget);
}

TEST(SbirExec, TreeSelectFindsPc) {
  auto sc = demo::fig5_scenario();
  auto tree = build_tree(sc.program(), sc.config, sc.limits());
  Pc pc{Bval::num(0), 3};
  EXPECT_EQ(to_string(*tree_select(tree, pc).event), "FCall(senc,R0,R1;c)");
  EXPECT_EQ(kind_of([&] { tree_select(tree, Pc{Bval::num(0x77), 0}); }), ErrorKind::PcNotFound);
}

TEST(SbirExec, ReceiveAdoptsOfferedSymbol) {
  auto p = parse_program("block 0x0:\n  jmp(0x110)\n  jmp(0x10c)\n  halt\n");
  Sbir s(p, config({{"0x10c", "send R1"}, {"0x110", "recv R1"}}));
  auto next = s.step(s.initial(), ev::A2P{Symbol("x7")});
  ASSERT_EQ(next.size(), 1u);
  auto out = s.successors(next.front());
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(out.front().event, Event{ev::P2A{Symbol("x7")}});
}

TEST(SbirExec, NodeBudget) {
  auto p = parse_program("block 0x0:\n  jmp(0x114)\n  jmp(0x0)\n");
  SbirLimits lim;
  lim.unroll = 50;
  lim.max_nodes = 10;
  EXPECT_EQ(kind_of([&] { build_tree(p, config({{"0x114", "event Tick"}}), lim); }), ErrorKind::StateBudgetExceeded);
}

TEST(SbirExec, RefinementOfFig5Run) {
  auto sc = demo::fig5_scenario();
  auto tree = build_tree(sc.program(), sc.config, sc.limits());
  World w;
  w.rng = {Bval::num(0xab)};
  auto r = find_refinement(tree, run_concrete(sc.program(), sc.config, w));
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->iota.at("k"), Bval::num(0xab));
  EXPECT_EQ(r->iota.at("R0"), Bval::str("m"));
  EXPECT_EQ(r->iota.at("R2"), Bval::num(0xab ^ 0xdeadbeefULL));
  EXPECT_TRUE(oracle::assignments_agree(r->symbolic, r->iota));
}

TEST(SbirExec, RefinementRejectsForeignRun) {
  auto sc = demo::fig5_scenario();
  auto tree = build_tree(sc.program(), sc.config, sc.limits());
  ConcreteTrace bogus{ConcreteEvent{"P2A", "", {Bval::num(1)}}};
  EXPECT_FALSE(find_refinement(tree, bogus).has_value());
}
