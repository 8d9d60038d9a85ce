#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "symcomp/symcomp.hpp"

using namespace symcomp;

namespace {

std::set<std::vector<std::string>> as_labels(const std::set<Trace>& ts) {
  std::set<std::vector<std::string>> out;
  for (const auto& t : ts) out.insert(oracle::labels_of(t));
  return out;
}

FixtureLts line(const std::string& name, std::vector<std::string> labels) {
  FixtureLts f;
  f.name = name;
  f.states = static_cast<int>(labels.size()) + 1;
  for (std::size_t i = 0; i < labels.size(); ++i)
    f.edges.push_back({static_cast<int>(i), labels[i], static_cast<int>(i) + 1, {}, {}, {}});
  return f;
}

}  // namespace

TEST(Interleaving, CountsWithoutSynchronisation) {
  Trace a{make_ev("a"), make_ev("b")};
  Trace b{make_ev("c"), make_ev("d")};
  EXPECT_EQ(all_interleavings(a, b, {}).size(), 6u);
}

TEST(Interleaving, SharedEventsHappenOnce) {
  Trace a{make_ev("a"), make_ev("s")};
  Trace b{make_ev("s"), make_ev("d")};
  auto out = all_interleavings(a, b, {"Ev:s"});
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(*out.begin(), (Trace{make_ev("a"), make_ev("s"), make_ev("d")}));
  EXPECT_TRUE(is_interleaving(*out.begin(), a, b, {"Ev:s"}));
  EXPECT_TRUE(all_interleavings(a, Trace{make_ev("d"), make_ev("s")}, {"Ev:s"}).size() == 2u);
}

TEST(Interleaving, MismatchedSharedEventsBlock) {
  Trace a{make_ev("s")};
  Trace b{make_ev("t")};
  EXPECT_TRUE(all_interleavings(a, b, {"Ev:s", "Ev:t"}).empty());
}

TEST(Interleaving, OracleRefusesLongTraces) {
  Trace a(7, make_ev("a"));
  Trace b(6, make_ev("b"));
  try {
    all_interleavings(a, b, {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OracleScaleExceeded);
  }
}

TEST(Composition, SharedAlphabetIsTheIntersection) {
  auto sys = compose(line("A", {"a", "s"}), line("B", {"s", "b"}));
  EXPECT_EQ(sys.shared_alphabet(), (std::set<EventTag>{"Ev:s"}));
  auto traces = enumerate_traces(sys, 3, 0);
  EXPECT_TRUE(traces.contains(Trace{make_ev("a"), make_ev("s"), make_ev("b")}));
  EXPECT_FALSE(traces.contains(Trace{make_ev("s")}));
}

TEST(Composition, ProjectionsRecoverComponents) {
  auto a = line("A", {"a"});
  auto b = line("B", {"b"});
  auto sys = compose(a, b);
  auto st = sys.initial();
  EXPECT_EQ(sys.proj1(st).inner, 0);
  EXPECT_EQ(sys.proj2(st).inner, 0);
  auto next = sys.step(st, make_ev("a"));
  ASSERT_EQ(next.size(), 1u);
  EXPECT_EQ(sys.proj1(next.front()).inner, 1);
  EXPECT_EQ(sys.proj2(next.front()).inner, 0);
}

TEST(Composition, MatchesProductOracleWithEmptyCombiner) {
  for (int seed = 0; seed < 40; ++seed) {
    std::mt19937_64 rng(300 + seed);
    auto a = random_fixture(rng, {"a", "b", "s"}, "A");
    auto b = random_fixture(rng, {"c", "d", "s"}, "B");
    auto composed = as_labels(enumerate_traces(compose(a, b), 4, 8));
    EXPECT_EQ(composed, oracle::fixture_product(a, b, 4, false)) << "seed " << seed << "\n" << to_string(a) << to_string(b);
  }
}

TEST(Composition, MatchesProductOracleWithEnablingCombiner) {
  for (int seed = 0; seed < 40; ++seed) {
    std::mt19937_64 rng(700 + seed);
    auto a = random_fixture(rng, {"a", "b", "s"}, "A");
    auto b = random_fixture(rng, {"c", "d", "s"}, "B");
    auto composed = as_labels(enumerate_traces(compose(a, b, fixture_enabling_combiner()), 4, 8));
    EXPECT_EQ(composed, oracle::fixture_product(a, b, 4, true)) << "seed " << seed;
  }
}

TEST(Composition, EnablingCombinerAddsBehaviour) {
  FixtureLts a = line("A", {"a"});
  a.initial_pi = {FixPred{"p"}};
  FixtureLts b;
  b.edges.push_back({0, "b", 0, FixPred{"q"}, {}, {}});
  auto plain = enumerate_traces(compose(a, b), 2, 4);
  auto enabled = enumerate_traces(compose(a, b, fixture_enabling_combiner()), 2, 4);
  EXPECT_FALSE(plain.contains(Trace{make_ev("b")}));
  EXPECT_TRUE(enabled.contains(Trace{make_ev("b")}));
  EXPECT_TRUE(std::includes(enabled.begin(), enabled.end(), plain.begin(), plain.end()));
}

TEST(Composition, Thm1HoldsOnRandomFixtures) {
  for (int seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    auto a = random_fixture(rng, {"a", "b", "s"}, "A");
    auto b = random_fixture(rng, {"c", "d", "s"}, "B");
    EXPECT_TRUE(verify_thm1(a, b, empty_combiner<FixPred, FixPred>(), 4).ok) << seed;
    EXPECT_TRUE(verify_thm1(a, b, fixture_enabling_combiner(), 4).ok) << seed;
  }
}

TEST(Composition, SymmetricAndAssociative) {
  for (int seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(2000 + seed);
    auto a = random_fixture(rng, {"a", "s", "t"}, "A");
    auto b = random_fixture(rng, {"b", "s", "u"}, "B");
    auto c = random_fixture(rng, {"c", "t", "u"}, "C");
    auto r = verify_symmetry_associativity(a, b, c, 3);
    EXPECT_TRUE(r.ok) << to_string(r);
  }
}

TEST(Composition, EnablingCheckFindsDisablingPredicate) {
  FixtureLts a;
  a.initial_pi = {FixPred{"p"}};
  a.edges.push_back({0, "a", 0, {}, {}, {}});
  FixtureLts b;
  b.edges.push_back({0, "b", 0, {}, FixPred{"q"}, {}});
  auto bad = check_enabling(fixture_enabling_combiner(), a, b, 2);
  EXPECT_FALSE(bad.ok);
  EXPECT_NE(bad.detail.find("disables"), std::string::npos);

  FixtureLts b2;
  b2.edges.push_back({0, "b", 0, FixPred{"q"}, {}, {}});
  EXPECT_TRUE(check_enabling(fixture_enabling_combiner(), a, b2, 2).ok);
}

TEST(Composition, SaturationReportsOrder) {
  FixtureLts a;
  a.initial_pi = {FixPred{"p"}};
  a.edges.push_back({0, "a", 0, {}, {}, {}});
  FixtureLts b;
  b.rules.push_back({FixPred{"q"}, FixPred{"r"}});
  b.edges.push_back({0, "b", 0, {}, {}, {}});
  auto sys = compose(a, b, fixture_enabling_combiner());
  auto [st, added] = saturate_ordered(sys, sys.initial(), 8);
  ASSERT_EQ(added.size(), 2u);
  using C = Combined<FixPred, FixPred>;
  EXPECT_EQ(added[0], (C{Right<FixPred>{{"q"}}}));
  EXPECT_EQ(added[1], (C{Right<FixPred>{{"r"}}}));
  EXPECT_TRUE(st.pi.contains(C{Right<FixPred>{{"r"}}}));
}

TEST(Composition, EnumerationBudgetIsEnforced) {
  FixtureLts a;
  a.states = 1;
  for (const char* l : {"a", "b", "c", "d"}) a.edges.push_back({0, l, 0, {}, {}, FixPred{l}});
  EnumLimits lim;
  lim.depth = 6;
  lim.max_states = 10;
  try {
    enumerate_traces(a, lim);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::StateBudgetExceeded);
  }
}
