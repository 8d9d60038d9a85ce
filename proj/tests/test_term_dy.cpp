#include <gtest/gtest.h>

#include "oracles.hpp"
#include "symcomp/symcomp.hpp"

using namespace symcomp;

namespace {

Signature crypto() { return Signature{{"senc", 2}, {"sdec", 2}, {"pair", 2}, {"fst", 1}}; }
Theory dec_theory() { return {parse_equation("sdec(senc(x,y),y) = x", crypto())}; }
Term sym(const std::string& s) { return Term::sym(Symbol(s)); }

std::multiset<std::string> rules_of(const Proof& p) {
  std::multiset<std::string> out;
  collect_rules(p, out);
  return out;
}

}  // namespace

TEST(TermAlgebra, ArityIsEnforced) {
  EXPECT_THROW(Term::app({"senc", 2}, {sym("a")}), Error);
  try {
    Term::app({"senc", 2}, {sym("a")});
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ArityMismatch);
  }
}

TEST(TermAlgebra, NormalizesDecryption) {
  Term t = parse_term("sdec(senc(m, k), k)", crypto());
  EXPECT_EQ(normalize(t, dec_theory()), sym("m"));
  Term wrong = parse_term("sdec(senc(m, k), j)", crypto());
  EXPECT_EQ(normalize(wrong, dec_theory()), wrong);
  EXPECT_TRUE(eq_mod_E(t, sym("m"), dec_theory()));
}

TEST(TermAlgebra, NormalizesInnermostFirst) {
  Term t = parse_term("sdec(sdec(senc(senc(m, a), b), b), a)", crypto());
  EXPECT_EQ(normalize(t, dec_theory()), sym("m"));
}

TEST(TermAlgebra, RejectsNonConvergentEquation) {
  try {
    parse_equation("senc(x,y) = sdec(x,y)", crypto());
    FAIL() << "accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidEquation);
  }
  EXPECT_THROW(parse_equation("fst(x) = y", crypto()), Error);
}

TEST(TermAlgebra, RewriteBoundIsReported) {
  Term t = parse_term("sdec(sdec(senc(senc(m, a), b), b), a)", crypto());
  try {
    normalize(t, dec_theory(), 1);
    FAIL() << "no bound error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RewriteDepthExceeded);
  }
}

TEST(TermAlgebra, SignatureConflict) {
  Signature s{{"h", 1}};
  EXPECT_NO_THROW(s.add({"h", 1}));
  try {
    s.add({"h", 2});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SignatureConflict);
  }
}

TEST(TermAlgebra, MatchBindsConsistently) {
  Term pat = parse_term("senc(x, x)", crypto());
  Substitution b;
  EXPECT_TRUE(match(pat, parse_term("senc(a, a)", crypto()), b));
  EXPECT_EQ(b.at(Symbol("x")), sym("a"));
  Substitution c;
  EXPECT_FALSE(match(pat, parse_term("senc(a, b)", crypto()), c));
}

TEST(TermAlgebra, ParsesQuotedPublicNames) {
  Term t = parse_term("senc('m', k)", crypto());
  ASSERT_TRUE(t.is_app());
  EXPECT_TRUE(t.args()[0].is_name());
  EXPECT_TRUE(t.args()[0].as_name().is_public());
  EXPECT_THROW(parse_term("senc(a,", crypto()), Error);
}

TEST(TermAlgebra, FreshSymbolsAvoidSigma) {
  SymbolSet sigma{Symbol("k"), Symbol("k_1")};
  Symbol s = fresh_named_symbol(sigma, "k");
  EXPECT_FALSE(sigma.contains(s));
  EXPECT_EQ(fresh_named_symbol({}, "k").id, "k");
}

// ---------------------------------------------------------------------------

TEST(DyAttacker, LogicalTruthProof) {
  std::set<DyPredicate> pi{dy_k(sym("c")), dy_maps(Symbol("c"), parse_term("senc(m, k)", crypto())), dy_k(sym("k"))};
  auto r = dy_deduce(pi, dy_k(sym("m")), 6, dec_theory());
  ASSERT_TRUE(r.proved());
  auto rules = rules_of(*r.proof);
  for (const char* rule : {"AlSubst", "App", "Eq", "Subst"}) EXPECT_TRUE(rules.contains(rule)) << rule;

  oracle::Knowledge k;
  k.known = {"c", "k"};
  k.maps = {{"c", "senc(m,k)"}};
  k.cipher("senc(m,k)", "m", "k");
  EXPECT_TRUE(k.derives("m"));
}

TEST(DyAttacker, WithoutMappingTheCiphertextStaysOpaque) {
  std::set<DyPredicate> pi{dy_k(sym("c")), dy_k(sym("k"))};
  EXPECT_FALSE(dy_deduce(pi, dy_k(sym("m")), 6, dec_theory()).proved());
}

TEST(DyAttacker, PublicNamesAreKnown) {
  auto r = dy_deduce({}, dy_k(Term::name(public_name("n_pub"))), 4);
  ASSERT_TRUE(r.proved());
  EXPECT_EQ(r.proof->rule, "Pub");
  EXPECT_FALSE(dy_deduce({}, dy_k(Term::name(private_name("n"))), 4).proved());
}

TEST(DyAttacker, ComposesKnownTerms) {
  std::set<DyPredicate> pi{dy_k(sym("a")), dy_k(sym("b"))};
  auto r = dy_deduce(pi, dy_k(parse_term("senc(a, b)", crypto())), 4);
  ASSERT_TRUE(r.proved());
  EXPECT_EQ(r.proof->rule, "App");
}

TEST(DyAttacker, SubstAlongEquality) {
  std::set<DyPredicate> pi{dy_k(sym("k")), dy_eq(sym("j"), sym("k"))};
  EXPECT_TRUE(dy_deduce(pi, dy_k(sym("j")), 4).proved());
}

TEST(DyAttacker, TightBoundIsInconclusive) {
  std::set<DyPredicate> pi{dy_k(sym("c")), dy_maps(Symbol("c"), parse_term("senc(m, k)", crypto())), dy_k(sym("k"))};
  auto r = dy_deduce(pi, dy_k(sym("m")), 1, dec_theory());
  EXPECT_EQ(r.status, DeduceStatus::BoundExceeded);
}

TEST(DyAttacker, AcceptsOnlyDerivableInputs) {
  DyAttacker att;
  auto st = att.initial();
  EXPECT_TRUE(att.step(st, ev::A2P{Symbol("x")}).empty());
  auto after = att.step(st, ev::P2A{Symbol("x")});
  ASSERT_EQ(after.size(), 1u);
  EXPECT_EQ(att.step(after.front(), ev::A2P{Symbol("x")}).size(), 1u);
}

TEST(DyAttacker, RefusesUsedNames) {
  DyAttacker att;
  auto st = att.step(att.initial(), ev::SFr{private_name("n")});
  ASSERT_EQ(st.size(), 1u);
  EXPECT_TRUE(att.step(st.front(), ev::SFr{private_name("n")}).empty());
  EXPECT_TRUE(att.step(att.initial(), ev::SFr{public_name("p")}).empty());
}

// ---------------------------------------------------------------------------

TEST(DyLibrary, CallRecordsTheTerm) {
  DyLibrary lib(Signature{{"senc", 2}});
  auto st = lib.initial();
  st.sigma = {Symbol("m"), Symbol("k")};
  auto next = lib.step(st, ev::FCall{{"senc", 2}, {Symbol("m"), Symbol("k")}, Symbol("c")});
  ASSERT_EQ(next.size(), 1u);
  EXPECT_TRUE(next.front().pi.contains(lib_calleq(Symbol("c"), parse_term("senc(m, k)"))));
  EXPECT_TRUE(next.front().sigma.contains(Symbol("c")));
  EXPECT_TRUE(lib.step(st, ev::FCall{{"senc", 2}, {Symbol("m"), Symbol("zz")}, Symbol("c")}).empty());
  EXPECT_TRUE(lib.step(st, ev::FCall{{"sdec", 2}, {Symbol("m"), Symbol("k")}, Symbol("c")}).empty());
}

TEST(DyLibrary, CombinerMirrorsCallsAsMappings) {
  using C = Combined<LibPredicate, DyPredicate>;
  auto comb = lib_att_combiner();
  Term t = parse_term("senc(m, k)");
  std::set<C> pi{Left<LibPredicate>{lib_calleq(Symbol("c"), t)}};
  auto out = comb.derive(pi);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_TRUE(out.contains(C{Right<DyPredicate>{dy_maps(Symbol("c"), t)}}));
  std::set<C> back{Right<DyPredicate>{dy_maps(Symbol("c"), t)}};
  EXPECT_TRUE(comb.derive(back).contains(C{Left<LibPredicate>{lib_calleq(Symbol("c"), t)}}));
}

TEST(DyLibrary, FreshNamesAreMutuallyExclusive) {
  auto r = check_freshness(Signature{}, {private_name("n")}, 4);
  EXPECT_TRUE(r.ok);
  EXPECT_GT(r.traces, 0u);
  ASSERT_TRUE(r.post_library_pick.has_value());
  const auto& t = *r.post_library_pick;
  std::set<Name> names;
  for (const auto& e : t)
    if (auto n = fresh_event_name(e)) EXPECT_TRUE(names.insert(*n).second);
}

TEST(DyLibrary, MergingSignaturesDetectsConflicts) {
  Signature a{{"senc", 2}};
  Signature b{{"h", 1}};
  EXPECT_EQ(merge_libraries(a, b).size(), 2u);
  EXPECT_THROW(merge_libraries(a, Signature{{"senc", 3}}), Error);
}
