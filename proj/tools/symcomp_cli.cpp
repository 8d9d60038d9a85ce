#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "symcomp/symcomp.hpp"

using json = nlohmann::json;
using namespace symcomp;

namespace {

enum Exit { kOk = 0, kNegative = 1, kInput = 2, kBudget = 3 };

bool is_budget(ErrorKind k) {
  switch (k) {
    case ErrorKind::RewriteDepthExceeded:
    case ErrorKind::StateBudgetExceeded:
    case ErrorKind::OracleScaleExceeded:
    case ErrorKind::BoundExceeded:
    case ErrorKind::ReplicationBudgetExceeded: return true;
    default: return false;
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json strings_json(const std::vector<std::string>& xs) { return json(xs); }

int cmd_parse(const std::string& path, bool ast) {
  BirProgram p = parse_program(read_file(path));
  std::cout << (ast ? dump_ast(p) : to_string(p));
  return kOk;
}

int cmd_exec(const std::string& path, bool dump_tree, bool indented, bool as_json) {
  Scenario sc = load_scenario(path);
  Sbir program(sc.program(), sc.config, sc.limits());
  ExecTree tree = program.build_tree(sc.depth);
  if (dump_tree) {
    std::cout << to_dot(tree);
    return kOk;
  }
  if (indented) {
    std::cout << to_string(tree);
    return kOk;
  }
  auto paths = tree_paths(tree);
  if (as_json) {
    json j = json::array();
    for (const auto& t : paths) {
      json row = json::array();
      for (const auto& e : t) row.push_back(to_string(e));
      j.push_back(row);
    }
    std::cout << json{{"nodes", tree.size()}, {"paths", j}}.dump(2) << "\n";
  } else {
    for (const auto& t : paths) std::cout << trace_inline(t) << "\n";
  }
  return kOk;
}

int cmd_extract(const std::string& path, const std::string& out_path) {
  Scenario sc = load_scenario(path);
  Sbir program(sc.program(), sc.config, sc.limits());
  Process p = translate_tree(program.build_tree(sc.depth));
  std::string text = sapic_header(sc.config.signature, sc.config.theory) + pretty_print(p) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) throw Error(ErrorKind::ConfigError, "cannot write " + out_path);
    out << text;
  }
  return kOk;
}

QueryResult query_one(const Scenario& sc, const std::string& goal, const std::string& combiner) {
  if (combiner == "bitp-sapic") {
    Sbir program(sc.program(), sc.config, sc.limits());
    SapicSlts s(translate_tree(program.build_tree(sc.depth)), sc.replication);
    return run_query(s, bit_prime_sapic_combiner(), sc.attacker(), parse_goal(goal, sc.config.signature),
                     sc.query_options());
  }
  return query_scenario(sc, goal, combiner);
}

int cmd_query(const std::string& path, std::vector<std::string> goals, std::string combiner, bool as_json) {
  Scenario sc = load_scenario(path);
  if (combiner.empty()) combiner = sc.combiner;
  if (goals.empty()) goals = sc.queries;
  if (goals.empty()) throw Error(ErrorKind::ConfigError, "no goal given and scenario has no [queries]");
  int code = kOk;
  json all = json::array();
  for (const auto& g : goals) {
    QueryResult r = query_one(sc, g, combiner);
    const auto status = r.deduction.status;
    if (status == DeduceStatus::BoundExceeded || (status != DeduceStatus::Proved && r.budget_hit))
      code = kBudget;
    else if (status == DeduceStatus::NotDerivable && code == kOk)
      code = kNegative;
    std::vector<std::string> trace, acquired;
    for (const auto& e : r.trace()) trace.push_back(to_string(e));
    for (const auto& a : r.acquired) acquired.push_back(to_string(a));
    if (as_json) {
      all.push_back({{"goal", g},
                     {"combiner", combiner},
                     {"verdict", to_string(status)},
                     {"proof", r.deduction.proof ? to_string(*r.deduction.proof) : ""},
                     {"trace", strings_json(trace)},
                     {"acquired", strings_json(acquired)},
                     {"states", r.states}});
      continue;
    }
    std::cout << g << ": " << to_string(status) << " [" << combiner << "]\n";
    if (r.deduction.proof) std::cout << to_indented(*r.deduction.proof, 1);
    std::cout << "  trace: [" << join(trace, ", ") << "]\n";
    for (std::size_t i = 0; i < acquired.size(); ++i)
      std::cout << "  (" << i + 1 << ") " << acquired[i] << "\n";
  }
  if (as_json) std::cout << all.dump(2) << "\n";
  return code;
}

int cmd_check(const std::string& suite, std::uint64_t seed, bool as_json) {
  std::vector<std::string> names = suite == "all" ? suite_names() : std::vector<std::string>{suite};
  bool ok = true;
  json all = json::array();
  for (const auto& n : names) {
    SuiteReport r = run_suite(n, seed);
    ok &= r.ok;
    if (as_json) {
      all.push_back({{"suite", r.name}, {"ok", r.ok}, {"runs", r.runs}, {"failures", r.failures}, {"notes", r.notes}});
    } else {
      std::cout << to_string(r) << "\n";
      for (const auto& note : r.notes) std::cout << "  " << note << "\n";
    }
  }
  if (as_json) std::cout << all.dump(2) << "\n";
  return ok ? kOk : kNegative;
}

int cmd_demo(const std::string& name, bool as_json) {
  DemoOutput o = run_demo(name);
  if (as_json) {
    std::cout << json{{"demo", name}, {"ok", o.ok}, {"lines", o.lines}}.dump(2) << "\n";
  } else {
    for (const auto& l : o.lines) std::cout << l << "\n";
  }
  return o.ok ? kOk : kNegative;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symbolic composition of programs, crypto libraries and a Dolev-Yao attacker"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable output");

  std::string file, out_path, combiner, name;
  std::vector<std::string> goals;
  bool dump_ast = false, dump_tree = false, indented = false;
  std::uint64_t seed = 0;

  auto* parse = app.add_subcommand("parse", "Parse a BIR program");
  parse->add_option("program", file, "BIR program file")->required();
  parse->add_flag("--dump-ast", dump_ast, "Print the expression AST");

  auto* exec = app.add_subcommand("exec", "Symbolically execute a scenario's program");
  exec->add_option("scenario", file, "Scenario file")->required();
  exec->add_flag("--dump-tree", dump_tree, "Print the execution tree as a Graphviz graph");
  exec->add_flag("--indented", indented, "Print the execution tree as indented text");

  auto* extract = app.add_subcommand("extract", "Translate the execution tree to a process");
  extract->add_option("scenario", file, "Scenario file")->required();
  extract->add_option("-o,--output", out_path, "Write the model here instead of stdout");

  auto* query = app.add_subcommand("query", "Ask whether the attacker derives a goal");
  query->add_option("scenario", file, "Scenario file")->required();
  query->add_option("goals", goals, "Goals such as K(R0); defaults to the scenario's [queries]");
  query->add_option("--combiner", combiner, "Combiner; defaults to the scenario's")
      ->check(CLI::IsMember(combiner_names()));

  auto* check = app.add_subcommand("check", "Run a property suite");
  std::vector<std::string> suites = suite_names();
  suites.push_back("all");
  check->add_option("suite", name, "Suite name")->required()->check(CLI::IsMember(suites));
  check->add_option("--seed", seed, "Offset for the random suites");

  auto* demo_cmd = app.add_subcommand("demo", "Reproduce a worked example");
  demo_cmd->add_option("name", name, "Example name")->required()->check(CLI::IsMember(demo_names()));

  for (auto* sub : {parse, exec, extract, query, check, demo_cmd}) sub->add_flag("--json", as_json, "Machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (*parse) return cmd_parse(file, dump_ast);
    if (*exec) return cmd_exec(file, dump_tree, indented, as_json);
    if (*extract) return cmd_extract(file, out_path);
    if (*query) return cmd_query(file, goals, combiner, as_json);
    if (*check) return cmd_check(name, seed, as_json);
    if (*demo_cmd) return cmd_demo(name, as_json);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return is_budget(e.kind()) ? kBudget : kInput;
  }
  return kInput;
}
