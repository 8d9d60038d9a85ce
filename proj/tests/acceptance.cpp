// Acceptance run: one PASS/FAIL line per criterion, each with a wall-clock
// limit. Expected values are frozen here.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "symcomp/symcomp.hpp"

using namespace symcomp;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

void expect(Outcome& o, bool cond, const std::string& what) {
  if (!cond && o.ok) o.detail = what;
  o.ok &= cond;
}

const std::vector<std::string> kFig5Events{
    "SFr(k)", "Assign(R1,k)", "Assign(R0,\"m\")", "FCall(senc,R0,R1;c)", "P2A(c)", "Assign(R2,R1 ^ 0xdeadbeef)",
    "P2A(R2)"};

const std::vector<std::string> kFig5Attacker{"fresh(k)", "", "", "c ↦ senc(R0, R1)", "K(c)", "", "K(R2)"};

const char* const kFig5Sapic =
    "new k;\n"
    "let R1 = k in\n"
    "let R0 = 'm' in\n"
    "let c = senc(R0, R1) in\n"
    "out(c);\n"
    "let R2 = xor(R1, '0xdeadbeef') in\n"
    "out(R2);";

std::string squash(const std::string& s) {
  std::string out;
  for (char ch : s)
    if (ch != ' ' && ch != '\n' && ch != '\t') out += ch;
  return out;
}

Outcome c1_fig5() {
  Outcome o;
  auto c = fig5_columns();
  expect(o, c.sbir_events == kFig5Events, "SBIR event column differs");
  expect(o, squash(c.sapic) == squash(kFig5Sapic), "SAPIC column differs");
  expect(o, c.attacker_facts == kFig5Attacker, "DY predicate column differs");
  expect(o, c.status == DeduceStatus::Proved, "K(R0) not derived");
  expect(o, c.acquired == std::vector<std::string>{"K(R1)", "K(k)", "K(R0)"}, "acquisition order differs");
  expect(o, c.roundtrip && c.inclusion, "SAPIC round trip or inclusion failed");
  return o;
}

Outcome c2_masked_key() {
  Outcome o;
  auto sc = demo::fig5_scenario();
  expect(o, sc.ded_budget == 8, "scenario ded budget is not 8");
  auto v = ex1_masked_key();
  expect(o, v.with == DeduceStatus::Proved, "bitp verdict");
  expect(o, v.without == DeduceStatus::NotDerivable, "empty verdict");
  return o;
}

Outcome c3_concat() {
  Outcome o;
  auto d = ex1_concat_derived();
  expect(o, d == std::set<LibAttPredicate>{AttackerEmbedding<LibAttPredicate>::embed(dy_k(demo::sym("m")))},
         "bit combiner output");
  return o;
}

Outcome c4_logical_truth() {
  Outcome o;
  auto r = ex2_logical_truth();
  expect(o, r.proved(), "K(m) not proved");
  if (!r.proved()) return o;
  std::multiset<std::string> rules;
  collect_rules(*r.proof, rules);
  expect(o, rules == std::multiset<std::string>{"AlSubst", "App", "Eq", "K0", "K0", "Subst"}, "rule multiset");
  oracle::Knowledge k;
  k.known = {"c", "k"};
  k.maps = {{"c", "senc(m,k)"}};
  k.cipher("senc(m,k)", "m", "k");
  expect(o, k.derives("m"), "oracle disagrees");
  return o;
}

Outcome c5_transfer() {
  Outcome o;
  auto r = ex3_transfer();
  bool has = false;
  for (const auto& s : r.shared) has |= s == "R: k''' ~ k";
  expect(o, has, "k''' ~ k not shared");
  expect(o, r.deduction.proved(), "K(m) not derived");
  return o;
}

Outcome c6_freshness() {
  Outcome o;
  auto r = ex5_freshness(6);
  expect(o, r.ok, "a name was drawn twice");
  expect(o, r.traces > 0, "no traces");
  expect(o, r.post_library_pick.has_value(), "no post-library pick");
  if (r.post_library_pick) {
    std::set<Name> seen;
    for (const auto& e : *r.post_library_pick)
      if (auto n = fresh_event_name(e)) expect(o, seen.insert(*n).second, "pick reuses a name");
    expect(o, seen.size() >= 2, "pick has fewer than two names");
  }
  return o;
}

Outcome c7_thm1() {
  Outcome o;
  auto r = suite_thm1(0, 100, 4);
  expect(o, r.ok && r.runs == 100, "suite: " + to_string(r));
  for (std::uint64_t seed = 0; seed < 100 && o.ok; ++seed) {
    std::mt19937_64 rng(seed);
    auto a = random_fixture(rng, {"a", "b", "s"}, "A");
    auto b = random_fixture(rng, {"c", "d", "s"}, "B");
    std::set<std::vector<std::string>> plain;
    for (const auto& t : enumerate_traces(compose(a, b), 4, 8)) plain.insert(oracle::labels_of(t));
    expect(o, plain == oracle::fixture_product(a, b, 4, false), "product oracle, seed " + std::to_string(seed));
    std::set<std::vector<std::string>> enabled;
    for (const auto& t : enumerate_traces(compose(a, b, fixture_enabling_combiner()), 4, 8))
      enabled.insert(oracle::labels_of(t));
    expect(o, std::includes(enabled.begin(), enabled.end(), plain.begin(), plain.end()),
           "enabling lost traces, seed " + std::to_string(seed));
  }
  return o;
}

Outcome c8_sym_assoc() {
  Outcome o;
  auto r = suite_sym_assoc(1000, 50, 3);
  expect(o, r.ok && r.runs == 50, to_string(r));
  return o;
}

Outcome c9_thm3() {
  Outcome o;
  auto r = suite_thm3(5000, 100);
  expect(o, r.ok, to_string(r) + (r.notes.empty() ? "" : " " + r.notes.front()));
  expect(o, r.runs >= 102, "too few trees");
  bool witness = false;
  for (const auto& n : r.notes) witness |= n.rfind("negative control witness", 0) == 0;
  expect(o, witness, "negative control produced no witness");
  return o;
}

Outcome c10_refinement() {
  Outcome o;
  std::size_t found = 0, total = 0;
  for (const auto& f : refinement_fixtures()) {
    ++total;
    auto p = parse_program(f.program);
    auto cfg = fixture_config(f);
    auto r = find_refinement(build_tree(p, cfg, SbirLimits{}), run_concrete(p, cfg, f.world), f.world.initial_env);
    if (r && oracle::assignments_agree(r->symbolic, r->iota)) ++found;
  }
  expect(o, total == 20 && found == 20, std::to_string(found) + "/" + std::to_string(total));
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "fig5 end-to-end", 5, c1_fig5},
      {2, "masked key verdicts", 5, c2_masked_key},
      {3, "concatenation via bit", 1, c3_concat},
      {4, "logical truth proof", 1, c4_logical_truth},
      {5, "transferable equalities", 1, c5_transfer},
      {6, "freshness", 10, c6_freshness},
      {7, "composition vs interleavings", 60, c7_thm1},
      {8, "symmetry and associativity", 30, c8_sym_assoc},
      {9, "tree-to-process inclusion", 60, c9_thm3},
      {10, "refinement spot-check", 30, c10_refinement},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && secs > c.limit_s) o = {false, "over time limit"};
    if (!o.ok) ++failed;
    std::printf("criterion %2d %-30s %s  %.2fs / %.0fs%s%s\n", c.id, c.name, o.ok ? "PASS" : "FAIL", secs, c.limit_s,
                o.detail.empty() ? "" : "  ", o.detail.c_str());
  }
  return failed == 0 ? 0 : 1;
}
