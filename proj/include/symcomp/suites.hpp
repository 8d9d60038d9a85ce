#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "symcomp/checks.hpp"
#include "symcomp/demos.hpp"
#include "symcomp/sapic.hpp"
#include "symcomp/sapic_semantics.hpp"

namespace symcomp {

struct SuiteReport {
  std::string name;
  bool ok = true;
  std::size_t runs = 0;
  std::size_t failures = 0;
  std::vector<std::string> notes;  // failures first, then summary lines
};

inline std::string to_string(const SuiteReport& r) {
  return r.name + ": " + (r.ok ? "pass" : "FAIL") + " (" + std::to_string(r.runs) + " runs, " +
         std::to_string(r.failures) + " failures)";
}

namespace detail {

inline void fail(SuiteReport& r, std::string note) {
  r.ok = false;
  ++r.failures;
  if (r.notes.size() < 5) r.notes.push_back(std::move(note));
}

}  // namespace detail

/// Random pairs of fixture LTSs at depth 4, with the empty combiner and an
/// enabling fixture combiner.
inline SuiteReport suite_thm1(std::uint64_t seed = 0, std::size_t count = 100, std::size_t depth = 4) {
  SuiteReport r{"thm1"};
  for (std::size_t i = 0; i < count; ++i) {
    std::mt19937_64 rng(seed + i);
    auto a = random_fixture(rng, {"a", "b", "s"}, "A");
    auto b = random_fixture(rng, {"c", "d", "s"}, "B");
    ++r.runs;
    auto plain = verify_thm1(a, b, empty_combiner<FixPred, FixPred>(), depth);
    auto enabling = verify_thm1(a, b, fixture_enabling_combiner(), depth);
    if (!plain.ok) detail::fail(r, "seed " + std::to_string(seed + i) + " empty: " + to_string(plain));
    if (!enabling.ok) detail::fail(r, "seed " + std::to_string(seed + i) + " enabling: " + to_string(enabling));
  }
  return r;
}

inline SuiteReport suite_sym_assoc(std::uint64_t seed = 1000, std::size_t count = 50, std::size_t depth = 3) {
  SuiteReport r{"sym-assoc"};
  for (std::size_t i = 0; i < count; ++i) {
    std::mt19937_64 rng(seed + i);
    auto a = random_fixture(rng, {"a", "s", "t"}, "A");
    auto b = random_fixture(rng, {"b", "s", "u"}, "B");
    auto c = random_fixture(rng, {"c", "t", "u"}, "C");
    ++r.runs;
    auto rep = verify_symmetry_associativity(a, b, c, depth);
    if (!rep.ok) detail::fail(r, "seed " + std::to_string(seed + i) + ": " + to_string(rep));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Refinement fixtures

struct RefinementFixture {
  std::string name;
  std::string program;
  std::vector<std::pair<std::string, std::string>> roles;  // label, role text
  World world;
};

namespace demo {

inline const char* const kBranchProgram = R"txt(block 0x0:
  jmp(0x110)
  cjmp(R1 = 0x1, 0x10, 0x20)
block 0x10:
  jmp(0x100)
  assign(R0, R0 ^ R1)
  jmp(0x10c)
  halt
block 0x20:
  jmp(0x114)
  halt
)txt";

inline const char* const kHashProgram = R"txt(block 0x0:
  jmp(0x110)
  assign(R0, var(R1))
  jmp(0x108)
  assign(R2, R0 ++ "tag")
  assign(R0, var(R2))
  jmp(0x10c)
  halt
)txt";

inline const char* const kInitialProgram = R"txt(block 0x0:
  cjmp(R2 = 0x0, 0x10, 0x20)
block 0x10:
  jmp(0x100)
  jmp(0x10c)
  halt
block 0x20:
  assign(R0, R2 + 0x1)
  jmp(0x10c)
  halt
)txt";

inline std::vector<std::pair<std::string, std::string>> fixture_roles() {
  return {{"0x100", "rng k"},    {"0x104", "fn senc c"}, {"0x108", "fn h y"},
          {"0x10c", "send R0"},  {"0x110", "recv R1"},   {"0x114", "event Done"}};
}

}  // namespace demo

/// Twenty scripted concrete runs over four loop-free programs.
inline std::vector<RefinementFixture> refinement_fixtures() {
  std::vector<RefinementFixture> out;
  std::vector<std::pair<std::string, std::string>> fig5_roles{
      {"0x44", "rng k"}, {"0x20", "fn senc c"}, {"0x04", "send R0"}, {"0x08", "send R2"}};
  for (std::uint64_t k : {0xabULL, 0x0ULL, 0x1ULL, 0xdeadbeefULL, 0x1234ULL}) {
    World w;
    w.rng = {Bval::num(k)};
    out.push_back({"fig5 k=" + hex(k), demo::kFig5Program, fig5_roles, w});
  }
  for (auto [in, k] : std::vector<std::pair<std::uint64_t, std::uint64_t>>{{1, 5}, {2, 5}, {0, 9}, {1, 0x77}, {3, 1}}) {
    World w;
    w.inputs = {Bval::num(in)};
    w.rng = {Bval::num(k)};
    out.push_back({"branch in=" + hex(in), demo::kBranchProgram, demo::fixture_roles(), w});
  }
  for (std::uint64_t in : {0x5ULL, 0x0ULL, 0x42ULL, 0xffffULL, 0x7ULL}) {
    World w;
    w.inputs = {Bval::num(in)};
    out.push_back({"hash in=" + hex(in), demo::kHashProgram, demo::fixture_roles(), w});
  }
  for (std::uint64_t r2 : {0x0ULL, 0x1ULL, 0x7ULL, 0x0ULL, 0x3ULL}) {
    World w;
    w.initial_env = {{"R2", Bval::num(r2)}};
    w.rng = {Bval::num(r2 + 0x10)};
    out.push_back({"initial R2=" + hex(r2), demo::kInitialProgram, demo::fixture_roles(), w});
  }
  return out;
}

inline CryptoConfig fixture_config(const RefinementFixture& f) {
  CryptoConfig cfg;
  cfg.signature = Signature{{"senc", 2}, {"sdec", 2}, {"h", 1}};
  for (const auto& [label, role] : f.roles) cfg.roles[detail::parse_label_text(label)] = parse_role(role, cfg.signature);
  return cfg;
}

inline SuiteReport suite_refinement() {
  SuiteReport r{"refinement"};
  SbirLimits lim;
  for (const auto& f : refinement_fixtures()) {
    ++r.runs;
    BirProgram p = parse_program(f.program);
    CryptoConfig cfg = fixture_config(f);
    ExecTree tree = build_tree(p, cfg, lim);
    ConcreteTrace c = run_concrete(p, cfg, f.world);
    auto res = find_refinement(tree, c, f.world.initial_env);
    if (!res) detail::fail(r, f.name + ": no symbolic path explains " + trace_inline(c));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Translation

/// Trees of the bundled programs that use translatable operators only.
inline std::vector<std::pair<std::string, ExecTree>> bundled_trees() {
  std::vector<std::pair<std::string, ExecTree>> out;
  Scenario fig5 = demo::fig5_scenario();
  out.emplace_back("fig5", build_tree(fig5.program(), fig5.config, fig5.limits()));
  for (const auto& f : refinement_fixtures()) {
    if (f.name.rfind("fig5", 0) == 0) continue;
    bool seen = false;
    for (const auto& [n, _] : out) seen |= n == f.program;
    if (!seen) out.emplace_back(f.program, build_tree(parse_program(f.program), fixture_config(f), SbirLimits{}));
  }
  return out;
}

/// Bundled trees plus `count` random trees of at most ten nodes, and the
/// dropped-let mutation as a negative control.
inline SuiteReport suite_thm3(std::uint64_t seed = 5000, std::size_t count = 100) {
  SuiteReport r{"thm3"};
  auto check = [&](const std::string& name, const ExecTree& t) {
    ++r.runs;
    Process p = translate_tree(t);
    auto rep = check_trace_inclusion(t, p);
    if (!rep.ok) detail::fail(r, name + ": missing " + trace_inline(*rep.witness));
  };
  for (const auto& [name, t] : bundled_trees()) check(name, t);
  std::mt19937_64 rng(seed);
  std::size_t made = 0;
  for (std::size_t attempt = 0; made < count && attempt < 10 * count; ++attempt) {
    auto t = random_tree(rng);
    if (!t) continue;
    ++made;
    check("random #" + std::to_string(made), *t);
  }
  if (made < count) detail::fail(r, "only " + std::to_string(made) + " random trees generated");

  Scenario sc = demo::fig5_scenario();
  ExecTree tree = build_tree(sc.program(), sc.config, sc.limits());
  bool done = false;
  Process mutated = drop_first_let(translate_tree(tree), done);
  auto neg = check_trace_inclusion(tree, mutated);
  ++r.runs;
  if (!done || neg.ok || !neg.witness)
    detail::fail(r, "negative control passed");
  else
    r.notes.push_back("negative control witness " + trace_inline(*neg.witness));
  return r;
}

inline SuiteReport suite_freshness(std::size_t depth = 6) {
  SuiteReport r{"freshness"};
  auto rep = ex5_freshness(depth);
  r.runs = rep.traces;
  if (!rep.ok) detail::fail(r, "name drawn twice in " + trace_inline(*rep.witness));
  if (!rep.post_library_pick) detail::fail(r, "no trace with a second pick");
  else r.notes.push_back("second pick " + trace_inline(*rep.post_library_pick));
  return r;
}

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"thm1", "sym-assoc", "thm3", "refinement", "freshness"};
  return names;
}

/// `seed` offsets the random suites; 0 keeps the defaults.
inline SuiteReport run_suite(const std::string& name, std::uint64_t seed = 0) {
  if (name == "thm1") return suite_thm1(seed);
  if (name == "sym-assoc") return suite_sym_assoc(1000 + seed);
  if (name == "thm3") return suite_thm3(5000 + seed);
  if (name == "refinement") return suite_refinement();
  if (name == "freshness") return suite_freshness();
  throw Error(ErrorKind::ConfigError, "unknown suite '" + name + "'");
}

}  // namespace symcomp
