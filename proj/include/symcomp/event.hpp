#pragma once

#include <compare>
#include <string>
#include <variant>
#include <vector>

#include "symcomp/expr.hpp"
#include "symcomp/symbol.hpp"
#include "symcomp/term.hpp"

namespace symcomp {

namespace ev {
struct SFr {
  Name name;
  auto operator<=>(const SFr&) const = default;
  bool operator==(const SFr&) const = default;
};
struct A2P {
  Symbol x;
  auto operator<=>(const A2P&) const = default;
  bool operator==(const A2P&) const = default;
};
struct P2A {
  Symbol x;
  auto operator<=>(const P2A&) const = default;
  bool operator==(const P2A&) const = default;
};
struct FCall {
  FnSym f;
  std::vector<Symbol> args;
  Symbol result;
  auto operator<=>(const FCall&) const = default;
  bool operator==(const FCall&) const = default;
};
struct Alias {
  Symbol x;
  Term t;
  auto operator<=>(const Alias&) const = default;
  bool operator==(const Alias&) const = default;
};
struct Silent {
  Name name;
  auto operator<=>(const Silent&) const = default;
  bool operator==(const Silent&) const = default;
};
struct Tau {
  auto operator<=>(const Tau&) const = default;
  bool operator==(const Tau&) const = default;
};
struct Ev {
  Symbol e;
  auto operator<=>(const Ev&) const = default;
  bool operator==(const Ev&) const = default;
};
struct Loop {
  auto operator<=>(const Loop&) const = default;
  bool operator==(const Loop&) const = default;
};
struct Assign {
  Symbol x;
  Expr e;
  auto operator<=>(const Assign&) const = default;
  bool operator==(const Assign&) const = default;
};
}  // namespace ev

using Event = std::variant<ev::SFr, ev::A2P, ev::P2A, ev::FCall, ev::Alias, ev::Silent, ev::Tau,
                           ev::Ev, ev::Loop, ev::Assign>;
using Trace = std::vector<Event>;
using EventTag = std::string;

inline bool is_tau(const Event& e) { return std::holds_alternative<ev::Tau>(e); }

/// Synchronisation tag: the constructor name, except that `Ev` events are
/// distinguished by their label so that individual events can be shared.
inline EventTag tag_of(const Event& e) {
  struct V {
    EventTag operator()(const ev::SFr&) const { return "SFr"; }
    EventTag operator()(const ev::A2P&) const { return "A2P"; }
    EventTag operator()(const ev::P2A&) const { return "P2A"; }
    EventTag operator()(const ev::FCall&) const { return "FCall"; }
    EventTag operator()(const ev::Alias&) const { return "Alias"; }
    EventTag operator()(const ev::Silent&) const { return "Silent"; }
    EventTag operator()(const ev::Tau&) const { return "Tau"; }
    EventTag operator()(const ev::Ev& x) const { return "Ev:" + x.e.id; }
    EventTag operator()(const ev::Loop&) const { return "Loop"; }
    EventTag operator()(const ev::Assign&) const { return "Assign"; }
  };
  return std::visit(V{}, e);
}

inline std::string to_string(const Event& e) {
  struct V {
    std::string operator()(const ev::SFr& x) const { return "SFr(" + x.name.text + ")"; }
    std::string operator()(const ev::A2P& x) const { return "A2P(" + x.x.id + ")"; }
    std::string operator()(const ev::P2A& x) const { return "P2A(" + x.x.id + ")"; }
    std::string operator()(const ev::FCall& x) const {
      std::string s = "FCall(" + x.f.name;
      for (const auto& a : x.args) s += "," + a.id;
      return s + ";" + x.result.id + ")";
    }
    std::string operator()(const ev::Alias& x) const { return "Alias(" + x.x.id + "," + to_string(x.t) + ")"; }
    std::string operator()(const ev::Silent& x) const { return "Silent(" + x.name.text + ")"; }
    std::string operator()(const ev::Tau&) const { return "Tau"; }
    std::string operator()(const ev::Ev& x) const { return "Ev(" + x.e.id + ")"; }
    std::string operator()(const ev::Loop&) const { return "Loop"; }
    std::string operator()(const ev::Assign& x) const { return "Assign(" + x.x.id + "," + to_string(x.e) + ")"; }
  };
  return std::visit(V{}, e);
}

/// One event per line.
inline std::string to_string(const Trace& t) {
  std::string s;
  for (const auto& e : t) s += to_string(e) + "\n";
  return s;
}

inline std::string trace_inline(const Trace& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + to_string(t[i]);
  return s + "]";
}

inline Event make_ev(const std::string& label) { return ev::Ev{Symbol(label)}; }

}  // namespace symcomp
