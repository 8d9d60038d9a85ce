#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "symcomp/bir.hpp"
#include "symcomp/error.hpp"
#include "symcomp/pipeline.hpp"
#include "symcomp/sbir.hpp"

namespace symcomp {

/// Flat `key = value` file with `[section]` headers; `#` starts a comment
/// outside quotes. Values may be quoted.
struct KeyValueFile {
  std::vector<std::pair<std::string, std::string>> top;
  std::map<std::string, std::vector<std::pair<std::string, std::string>>> sections;
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"') {
      quote = c;
    } else if (c == '#') {
      return line.substr(0, i);
    }
  }
  return line;
}

inline std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

}  // namespace detail

inline KeyValueFile parse_key_value(const std::string& text) {
  KeyValueFile f;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = detail::trim(detail::strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::ParseError, std::to_string(lineno) + ": bad section header");
      section = detail::trim(line.substr(1, line.size() - 2));
      f.sections[section];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorKind::ParseError, std::to_string(lineno) + ": expected key = value");
    std::string key = detail::unquote(detail::trim(line.substr(0, eq)));
    std::string val = detail::unquote(detail::trim(line.substr(eq + 1)));
    if (section.empty())
      f.top.emplace_back(key, val);
    else
      f.sections[section].emplace_back(key, val);
  }
  return f;
}

struct Scenario {
  std::filesystem::path program_path;
  std::string program_text;
  std::string combiner = "bitp";
  std::size_t depth = 64;
  std::size_t ded_budget = 8;
  std::size_t unroll = 1;
  std::size_t replication = 2;
  std::size_t proof_bound = 8;
  CryptoConfig config;
  std::vector<Name> names;
  std::vector<std::string> queries;

  BirProgram program() const { return parse_program(program_text); }
  SbirLimits limits() const {
    SbirLimits l;
    l.depth = depth;
    l.unroll = unroll;
    return l;
  }
  AttackerSetup attacker() const { return {config.signature, config.theory, names, proof_bound}; }
  QueryOptions query_options() const { return {depth, ded_budget, 20000}; }
};

namespace detail {

inline std::size_t parse_count(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long n = std::stoll(v, &pos, 0);
    if (pos != v.size() || n < 0) throw std::invalid_argument(v);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw Error(ErrorKind::ConfigError, key + ": expected a non-negative integer, got '" + v + "'");
  }
}

inline Bval parse_label_text(const std::string& s) {
  Lexer lx(s);
  Bval b = parse_label(lx);
  if (!lx.at_end()) lx.fail("trailing input after label");
  return b;
}

}  // namespace detail

/// Builds a scenario from file text; `base` resolves a relative program path.
/// `program_text` overrides reading the program from disk.
inline Scenario parse_scenario(const std::string& text, const std::filesystem::path& base = {},
                               const std::string& program_text = {}) {
  KeyValueFile f = parse_key_value(text);
  Scenario s;
  for (const auto& [k, v] : f.top) {
    if (k == "program")
      s.program_path = base / v;
    else if (k == "combiner")
      s.combiner = v;
    else if (k == "depth")
      s.depth = detail::parse_count(k, v);
    else if (k == "ded_budget")
      s.ded_budget = detail::parse_count(k, v);
    else if (k == "unroll")
      s.unroll = detail::parse_count(k, v);
    else if (k == "replication")
      s.replication = detail::parse_count(k, v);
    else if (k == "proof_bound")
      s.proof_bound = detail::parse_count(k, v);
    else
      throw Error(ErrorKind::ConfigError, "unknown key '" + k + "'");
  }
  auto section = [&](const std::string& name) {
    auto it = f.sections.find(name);
    return it == f.sections.end() ? std::vector<std::pair<std::string, std::string>>{} : it->second;
  };
  for (const auto& [k, v] : section("signature")) s.config.signature.add(FnSym{k, detail::parse_count(k, v)});
  for (const auto& [k, v] : section("equations")) s.config.theory.push_back(parse_equation(v, s.config.signature));
  for (const auto& [k, v] : section("labels"))
    s.config.roles[detail::parse_label_text(k)] = parse_role(v, s.config.signature);
  for (const auto& [k, v] : section("consts")) s.config.consts.insert(parse_sym_expr(v));
  for (const auto& [k, v] : section("names")) s.names.push_back(v == "public" ? public_name(k) : private_name(k));
  for (const auto& [k, v] : section("queries")) s.queries.push_back(v);
  for (const auto& [name, _] : f.sections) {
    static const std::set<std::string> known{"signature", "equations", "labels", "consts", "names", "queries"};
    if (!known.contains(name)) throw Error(ErrorKind::ConfigError, "unknown section [" + name + "]");
  }
  if (!program_text.empty()) {
    s.program_text = program_text;
  } else {
    if (s.program_path.empty()) throw Error(ErrorKind::ConfigError, "missing 'program'");
    std::ifstream in(s.program_path);
    if (!in) throw Error(ErrorKind::ConfigError, "cannot read program " + s.program_path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    s.program_text = ss.str();
  }
  return s;
}

inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ConfigError, "cannot read scenario " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path.parent_path());
}

}  // namespace symcomp
