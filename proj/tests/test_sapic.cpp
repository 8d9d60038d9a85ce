#include <gtest/gtest.h>

#include "symcomp/symcomp.hpp"

using namespace symcomp;

namespace {

const char* const kFig5Sapic = R"txt(new k;
let R1 = k in
let R0 = 'm' in
let c = senc(R0, R1) in
out(c);
let R2 = xor(R1, '0xdeadbeef') in
out(R2);)txt";

ExecTree fig5_tree() {
  auto sc = demo::fig5_scenario();
  return build_tree(sc.program(), sc.config, sc.limits());
}

Signature full_signature() {
  Signature s = demo::crypto_signature();
  for (const auto& f : translated_signature().functions()) s.add(f);
  return s;
}

}  // namespace

TEST(Sapic, Fig5Listing) {
  EXPECT_EQ(pretty_print(translate_tree(fig5_tree())), kFig5Sapic);
}

TEST(Sapic, PrintsNilAndChoice) {
  EXPECT_EQ(pretty_print(Process::nil()), "0");
  EXPECT_EQ(pretty_print(Process::choice(Process::nil(), Process::nil())), "0 + 0");
  EXPECT_EQ(pretty_print(Process::bang(Process::out(Term::sym(Symbol("x")), Process::nil()))), "!out(x);");
}

TEST(Sapic, ParsePrintRoundTrip) {
  Process p = translate_tree(fig5_tree());
  EXPECT_EQ(parse_process(pretty_print(p), full_signature()), p);
  Process q = Process::par(Process::in(Symbol("x"), Process::nil()),
                           Process::choice(Process::event(Term::name(public_name("Done")), Process::nil()), Process::nil()));
  EXPECT_EQ(parse_process(pretty_print(q)), q);
}

TEST(Sapic, HeaderListsSignatureAndEquations) {
  std::string h = sapic_header(demo::crypto_signature(), demo::crypto_theory());
  EXPECT_NE(h.find("functions: "), std::string::npos);
  EXPECT_NE(h.find("senc/2"), std::string::npos);
  EXPECT_NE(h.find("equations: sdec(senc(x, y), y) = x"), std::string::npos);
}

TEST(Sapic, LengthHasNoTranslation) {
  try {
    translate_expr(Expr::unop(UnOp::Len, Expr::sym("m")));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::UnmappedOperator);
  }
}

TEST(Sapic, ConstantsBecomePublicNames) {
  Term t = translate_expr(parse_bir_expr("R1 ^ 0xdeadbeef"));
  ASSERT_TRUE(t.is_app());
  EXPECT_EQ(t.fn().name, "xor");
  EXPECT_TRUE(t.args()[1].as_name().is_public());
  EXPECT_EQ(untranslate_term(translate_expr(parse_sym_expr("a ++ \"x\""))),
            parse_sym_expr("a ++ \"x\""));
}

TEST(Sapic, ZeroReplicationIsRejected) {
  Process p = Process::bang(Process::out(Term::sym(Symbol("x")), Process::nil()));
  try {
    SapicSlts s(p, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ReplicationBudgetExceeded);
  }
  EXPECT_NO_THROW(SapicSlts(Process::nil(), 0));
}

TEST(Sapic, TreeTracesAreProcessTraces) {
  ExecTree t = fig5_tree();
  auto r = check_trace_inclusion(t, translate_tree(t));
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.checked, 1u);
}

TEST(Sapic, DroppingALetBreaksInclusion) {
  ExecTree t = fig5_tree();
  bool done = false;
  Process broken = drop_first_let(translate_tree(t), done);
  ASSERT_TRUE(done);
  auto r = check_trace_inclusion(t, broken);
  EXPECT_FALSE(r.ok);
  EXPECT_TRUE(r.witness.has_value());
}

TEST(Sapic, LoopsBecomeReplication) {
  auto p = parse_program("block 0x0:\n  jmp(0x114)\n  jmp(0x0)\n");
  CryptoConfig cfg;
  cfg.roles[Bval::num(0x114)] = parse_role("event Tick", cfg.signature);
  auto tree = build_tree(p, cfg, SbirLimits{});
  Process proc = translate_tree(tree);
  EXPECT_NE(pretty_print(proc).find("!"), std::string::npos);
  EXPECT_TRUE(check_trace_inclusion(tree, proc, 2).ok);
}
