#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "symcomp/symcomp.hpp"

using namespace symcomp;

namespace {

using C = Combined<SbirPredicate, LibAttPredicate>;

C att(const DyPredicate& d) { return Right<LibAttPredicate>{AttackerEmbedding<LibAttPredicate>::embed(d)}; }
C prog(const SbirPredicate& p) { return Left<SbirPredicate>{p}; }
C knows(const std::string& s) { return att(dy_k(demo::sym(s))); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error";
  return ErrorKind::ParseError;
}

}  // namespace

TEST(Combiners, OverApproxLeaksOperands) {
  std::set<C> pi{knows("b"), prog(peq(Symbol("b"), parse_sym_expr("k ^ 0xdeadbeef")))};
  auto out = over_approx_combiner().derive(pi);
  EXPECT_EQ(out, (std::set<C>{knows("k")}));
  EXPECT_TRUE(over_approx_combiner().derive({prog(peq(Symbol("b"), parse_sym_expr("k")))}).empty());
}

TEST(Combiners, EqShareTransfersEqualities) {
  std::set<C> pi{prog(peq(Symbol("x"), Expr::sym("y"))), att(dy_eq(demo::sym("z"), demo::sym("y")))};
  auto out = eq_share_combiner().derive(pi);
  EXPECT_TRUE(out.contains(att(dy_eq(demo::sym("x"), demo::sym("z")))));
  EXPECT_TRUE(out.contains(prog(peq(Symbol("x"), Expr::sym("z")))));
}

TEST(Combiners, BitNeedsAConstantOperand) {
  auto d = ex1_concat_derived();
  EXPECT_TRUE(d.contains(AttackerEmbedding<LibAttPredicate>::embed(dy_k(demo::sym("m")))));
  std::set<C> no_const{knows("b"), prog(peq(Symbol("b"), parse_sym_expr("m ++ len(m)")))};
  EXPECT_TRUE(bit_combiner().derive(no_const).empty());
}

TEST(Combiners, BitPrimeIgnoresConstants) {
  std::set<C> pi{knows("R2"), prog(peq(Symbol("R2"), parse_sym_expr("R1 ^ 0xdeadbeef")))};
  EXPECT_EQ(bit_prime_combiner().derive(pi), (std::set<C>{knows("R1")}));
  std::set<C> alias{knows("R1"), prog(peq(Symbol("R1"), Expr::sym("k")))};
  EXPECT_EQ(bit_prime_combiner().derive(alias), (std::set<C>{knows("k")}));
  EXPECT_TRUE(bit_prime_combiner().derive({knows("R0"), prog(peq(Symbol("R0"), Expr::str("m")))}).empty());
}

TEST(Combiners, BitPrimeOverTranslatedLets) {
  using S = Combined<SapicPredicate, LibAttPredicate>;
  Term rhs = translate_expr(parse_sym_expr("R1 ^ 0xdeadbeef"));
  std::set<S> pi{Left<SapicPredicate>{SapicPredicate{Symbol("R2"), rhs}},
                 Right<LibAttPredicate>{AttackerEmbedding<LibAttPredicate>::embed(dy_k(demo::sym("R2")))}};
  auto out = bit_prime_sapic_combiner().derive(pi);
  EXPECT_TRUE(
      out.contains(S{Right<LibAttPredicate>{AttackerEmbedding<LibAttPredicate>::embed(dy_k(demo::sym("R1")))}}));
}

TEST(Combiners, DeclaredClasses) {
  EXPECT_EQ(bit_prime_combiner().declared_class, CombinerClass::Disabling);
  EXPECT_EQ(bit_combiner().declared_class, CombinerClass::Enabling);
  EXPECT_EQ(kind_of([] { sbir_combiner("lib-att"); }), ErrorKind::ConfigError);
}

// ---------------------------------------------------------------------------

TEST(Scenario, FilesMatchEmbeddedCopies) {
  const std::string dir = SYMCOMP_SCENARIO_DIR;
  EXPECT_EQ(slurp(dir + "/fig5.bir"), demo::kFig5Program);
  EXPECT_EQ(slurp(dir + "/fig5.toml"), demo::kFig5Scenario);
  EXPECT_EQ(slurp(dir + "/concat.bir"), demo::kConcatProgram);
  EXPECT_EQ(slurp(dir + "/concat.toml"), demo::kConcatScenario);
  Scenario sc = load_scenario(dir + "/fig5.toml");
  EXPECT_EQ(sc.combiner, "bitp");
  EXPECT_EQ(sc.queries, (std::vector<std::string>{"K(R0)", "K(k)"}));
}

TEST(Scenario, RejectsUnknownKeys) {
  EXPECT_EQ(kind_of([] { parse_scenario("colour = red\n", {}, "block 0x0:\n halt\n"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_scenario("[weird]\na = 1\n", {}, "block 0x0:\n halt\n"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_scenario("depth = -3\n", {}, "block 0x0:\n halt\n"); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { parse_scenario("depth = 3\n"); }), ErrorKind::ConfigError);
}

TEST(Query, Fig5MaskedKey) {
  auto sc = demo::fig5_scenario();
  auto with = query_scenario(sc, "K(R0)", "bitp");
  EXPECT_EQ(with.deduction.status, DeduceStatus::Proved);
  EXPECT_EQ(demo::strings(with.acquired), (std::vector<std::string>{"K(R1)", "K(k)", "K(R0)"}));
  EXPECT_EQ(query_scenario(sc, "K(R0)", "empty").deduction.status, DeduceStatus::NotDerivable);
  EXPECT_EQ(query_scenario(sc, "K(k)", "overapprox").deduction.status, DeduceStatus::Proved);
}

TEST(Query, Fig5ThroughTheExtractedModel) {
  auto sc = demo::fig5_scenario();
  SapicSlts model(translate_tree(build_tree(sc.program(), sc.config, sc.limits())), sc.replication);
  auto r = run_query(model, bit_prime_sapic_combiner(), sc.attacker(), parse_goal("K(R0)"), sc.query_options());
  EXPECT_EQ(r.deduction.status, DeduceStatus::Proved);
}

TEST(Query, PublicNamesNeedNoProgram) {
  auto sc = demo::fig5_scenario();
  auto r = query_scenario(sc, "K('n_pub')", "empty");
  ASSERT_EQ(r.deduction.status, DeduceStatus::Proved);
  EXPECT_EQ(r.deduction.proof->rule, "Pub");
}

TEST(Query, FormattedMessage) {
  auto v = ex4_formatted();
  EXPECT_EQ(v.with, DeduceStatus::Proved);
  EXPECT_EQ(v.without, DeduceStatus::NotDerivable);
}

TEST(Query, GoalSyntax) {
  EXPECT_EQ(parse_goal("K(R0)"), dy_k(demo::sym("R0")));
  EXPECT_EQ(parse_goal("a ~ b"), dy_eq(demo::sym("a"), demo::sym("b")));
  EXPECT_EQ(parse_goal("Eq(a, b)"), dy_eq(demo::sym("a"), demo::sym("b")));
  EXPECT_THROW(parse_goal("K(R0) junk"), Error);
}

// ---------------------------------------------------------------------------

TEST(Refinement, FixtureWorldsAgreeWithIota) {
  std::size_t found = 0;
  for (const auto& f : refinement_fixtures()) {
    auto p = parse_program(f.program);
    auto cfg = fixture_config(f);
    auto tree = build_tree(p, cfg, SbirLimits{});
    auto concrete = run_concrete(p, cfg, f.world);
    auto r = find_refinement(tree, concrete, f.world.initial_env);
    ASSERT_TRUE(r.has_value()) << f.name;
    EXPECT_TRUE(oracle::assignments_agree(r->symbolic, r->iota)) << f.name;
    ++found;
  }
  EXPECT_EQ(found, 20u);
}

TEST(Demos, AllDemosSucceed) {
  for (const auto& n : demo_names()) EXPECT_TRUE(run_demo(n).ok) << n;
  EXPECT_EQ(kind_of([] { run_demo("nope"); }), ErrorKind::ConfigError);
}
