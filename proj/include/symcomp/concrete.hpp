#pragma once

#include <algorithm>
#include <compare>
#include <concepts>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "symcomp/error.hpp"
#include "symcomp/expr.hpp"

namespace symcomp {

/// Event of a concrete (plain) LTS. `tag` decides synchronisation; `label`
/// names the variable, function, or event; `vals` carries concrete values
/// (for FCall: arguments followed by the result).
struct ConcreteEvent {
  std::string tag;
  std::string label;
  std::vector<Bval> vals;

  auto operator<=>(const ConcreteEvent&) const = default;
  bool operator==(const ConcreteEvent&) const = default;
};

using ConcreteTrace = std::vector<ConcreteEvent>;

inline std::string to_string(const ConcreteEvent& e) {
  std::string s = e.tag + "(";
  bool first = true;
  if (!e.label.empty()) {
    s += e.label;
    first = false;
  }
  for (std::size_t i = 0; i < e.vals.size(); ++i) {
    bool result = e.tag == "FCall" && i + 1 == e.vals.size();
    s += result ? ";" : (first ? "" : ",");
    s += to_string(e.vals[i]);
    first = false;
  }
  return s + ")";
}

inline std::string trace_inline(const ConcreteTrace& t) {
  std::string s = "[";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + to_string(t[i]);
  return s + "]";
}

/// Plain LTS: successors proposes moves, `accept` answers a partner's
/// proposal of a shared event.
template <class M>
concept ConcreteLts = requires(const M& m, const typename M::State& st, const ConcreteEvent& e) {
  { m.initial() } -> std::convertible_to<typename M::State>;
  { m.successors(st) } -> std::convertible_to<std::vector<std::pair<ConcreteEvent, typename M::State>>>;
  { m.accept(st, e) } -> std::convertible_to<std::vector<typename M::State>>;
  { m.alphabet() } -> std::convertible_to<std::set<std::string>>;
};

/// Finite explicit LTS, handy for tests.
struct ExplicitLts {
  using State = int;
  int init = 0;
  std::multimap<int, std::pair<ConcreteEvent, int>> edges;
  std::set<std::string> tags;

  State initial() const { return init; }
  std::vector<std::pair<ConcreteEvent, State>> successors(const State& s) const {
    std::vector<std::pair<ConcreteEvent, State>> out;
    auto [a, b] = edges.equal_range(s);
    for (auto it = a; it != b; ++it) out.push_back(it->second);
    return out;
  }
  std::vector<State> accept(const State& s, const ConcreteEvent& e) const {
    std::vector<State> out;
    for (auto& [ev, n] : successors(s))
      if (ev == e) out.push_back(n);
    return out;
  }
  std::set<std::string> alphabet() const { return tags; }

  void add(int from, const std::string& tag, int to) {
    edges.emplace(from, std::make_pair(ConcreteEvent{tag, "", {}}, to));
    tags.insert(tag);
  }
};

/// CSP-style product: shared tags synchronise, others interleave.
template <ConcreteLts M1, ConcreteLts M2>
class ConcreteProduct {
 public:
  using State = std::pair<typename M1::State, typename M2::State>;

  ConcreteProduct(M1 m1, M2 m2) : m1_(std::move(m1)), m2_(std::move(m2)) {
    auto a = m1_.alphabet();
    auto b = m2_.alphabet();
    for (const auto& t : a)
      if (b.contains(t)) shared_.insert(t);
    all_ = a;
    all_.insert(b.begin(), b.end());
  }

  State initial() const { return {m1_.initial(), m2_.initial()}; }

  std::vector<std::pair<ConcreteEvent, State>> successors(const State& s) const {
    std::vector<std::pair<ConcreteEvent, State>> out;
    for (auto& [e, n1] : m1_.successors(s.first)) {
      if (!shared_.contains(e.tag))
        out.push_back({e, {n1, s.second}});
      else
        for (auto& n2 : m2_.accept(s.second, e)) out.push_back({e, {n1, n2}});
    }
    for (auto& [e, n2] : m2_.successors(s.second)) {
      if (!shared_.contains(e.tag))
        out.push_back({e, {s.first, n2}});
      else
        for (auto& n1 : m1_.accept(s.first, e)) out.push_back({e, {n1, n2}});
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  std::vector<State> accept(const State& s, const ConcreteEvent& e) const {
    std::vector<State> out;
    if (shared_.contains(e.tag)) {
      for (auto& n1 : m1_.accept(s.first, e))
        for (auto& n2 : m2_.accept(s.second, e)) out.push_back({n1, n2});
    } else if (m1_.alphabet().contains(e.tag)) {
      for (auto& n1 : m1_.accept(s.first, e)) out.push_back({n1, s.second});
    } else {
      for (auto& n2 : m2_.accept(s.second, e)) out.push_back({s.first, n2});
    }
    return out;
  }

  std::set<std::string> alphabet() const { return all_; }
  const std::set<std::string>& shared() const { return shared_; }

 private:
  M1 m1_;
  M2 m2_;
  std::set<std::string> shared_, all_;
};

template <ConcreteLts M1, ConcreteLts M2>
ConcreteProduct<M1, M2> compose_concrete(M1 m1, M2 m2) {
  return ConcreteProduct<M1, M2>(std::move(m1), std::move(m2));
}

template <ConcreteLts M>
std::set<ConcreteTrace> enumerate_concrete_traces(const M& m, std::size_t depth, std::size_t max_states = 200000) {
  std::set<ConcreteTrace> out;
  std::size_t visited = 0;
  ConcreteTrace prefix;
  auto go = [&](auto& self, const typename M::State& s, std::size_t d) -> void {
    if (++visited > max_states) throw Error(ErrorKind::StateBudgetExceeded, "concrete enumeration");
    out.insert(prefix);
    if (d == 0) return;
    for (auto& [e, n] : m.successors(s)) {
      prefix.push_back(e);
      self(self, n, d - 1);
      prefix.pop_back();
    }
  };
  go(go, m.initial(), depth);
  return out;
}

}  // namespace symcomp
