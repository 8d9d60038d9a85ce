#pragma once

// Reference computations used by the tests. They work on plain data and do
// not go through the composition or deduction engines.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "symcomp/symcomp.hpp"

namespace oracle {

using symcomp::FixtureLts;
using symcomp::Trace;

/// Predicates of one fixture closed under its own rules.
inline std::set<std::string> close_under(const FixtureLts& f, std::set<std::string> preds) {
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& r : f.rules)
      if (preds.contains(r.premise.name) && preds.insert(r.conclusion.name).second) grew = true;
  }
  return preds;
}

struct Side {
  int state;
  std::set<std::string> preds;
  auto operator<=>(const Side&) const = default;
};

/// Traces of the synchronous product of two fixtures with label-level
/// synchronisation on common labels. With `p_enables_q`, the right side
/// gains q whenever the left side holds p.
inline std::set<std::vector<std::string>> fixture_product(const FixtureLts& a, const FixtureLts& b, std::size_t depth,
                                                          bool p_enables_q) {
  std::set<std::string> la, lb;
  for (const auto& e : a.edges) la.insert(e.label);
  for (const auto& e : b.edges) lb.insert(e.label);

  auto initial_preds = [](const FixtureLts& f) {
    std::set<std::string> s;
    for (const auto& p : f.initial_pi) s.insert(p.name);
    return s;
  };
  auto settle = [&](Side& x, Side& y) {
    x.preds = close_under(a, x.preds);
    y.preds = close_under(b, y.preds);
    if (p_enables_q && x.preds.contains("p") && !y.preds.contains("q")) {
      y.preds.insert("q");
      y.preds = close_under(b, y.preds);
    }
  };
  auto moves = [](const FixtureLts& f, const Side& s, const std::string& label) {
    std::vector<Side> out;
    for (const auto& e : f.edges) {
      if (e.from != s.state || e.label != label) continue;
      if (e.requires_pred && !s.preds.contains(e.requires_pred->name)) continue;
      if (e.forbids_pred && s.preds.contains(e.forbids_pred->name)) continue;
      Side n = s;
      n.state = e.to;
      if (e.adds) n.preds.insert(e.adds->name);
      out.push_back(n);
    }
    return out;
  };

  std::set<std::vector<std::string>> out;
  std::vector<std::string> prefix;
  std::function<void(Side, Side, std::size_t)> go = [&](Side x, Side y, std::size_t d) {
    settle(x, y);
    out.insert(prefix);
    if (d == 0) return;
    std::set<std::string> labels = la;
    labels.insert(lb.begin(), lb.end());
    for (const auto& l : labels) {
      bool in_a = la.contains(l), in_b = lb.contains(l);
      prefix.push_back(l);
      if (in_a && in_b) {
        for (const auto& nx : moves(a, x, l))
          for (const auto& ny : moves(b, y, l)) go(nx, ny, d - 1);
      } else if (in_a) {
        for (const auto& nx : moves(a, x, l)) go(nx, y, d - 1);
      } else {
        for (const auto& ny : moves(b, y, l)) go(x, ny, d - 1);
      }
      prefix.pop_back();
    }
  };
  go(Side{0, initial_preds(a)}, Side{0, initial_preds(b)}, depth);
  return out;
}

/// Event labels of a fixture trace (every event is Ev(label)).
inline std::vector<std::string> labels_of(const Trace& t) {
  std::vector<std::string> out;
  for (const auto& e : t) out.push_back(std::get<symcomp::ev::Ev>(e).e.id);
  return out;
}

/// Forward closure of attacker knowledge for the senc/sdec theory: Maps
/// unfolding, equality substitution both ways, and decryption under a known
/// key.
struct Knowledge {
  std::set<std::string> known;                           // printed terms
  std::vector<std::pair<std::string, std::string>> maps;  // symbol, term
  std::vector<std::pair<std::string, std::string>> eqs;
  std::map<std::string, std::pair<std::string, std::string>> senc;  // ciphertext text → (msg, key)

  void cipher(const std::string& c, const std::string& m, const std::string& k) { senc[c] = {m, k}; }

  bool derives(const std::string& goal) {
    bool grew = true;
    while (grew) {
      grew = false;
      auto learn = [&](const std::string& t) {
        if (known.insert(t).second) grew = true;
      };
      for (const auto& [x, t] : maps)
        if (known.contains(x)) learn(t);
      for (const auto& [a, b] : eqs) {
        if (known.contains(a)) learn(b);
        if (known.contains(b)) learn(a);
      }
      for (const auto& [c, mk] : senc)
        if (known.contains(c) && known.contains(mk.second)) learn(mk.first);
    }
    return known.contains(goal);
  }
};

/// Every Assign event of the symbolic trace agrees with the interpretation.
inline bool assignments_agree(const Trace& symbolic, const symcomp::Interpretation& iota) {
  for (const auto& e : symbolic) {
    auto* a = std::get_if<symcomp::ev::Assign>(&e);
    if (!a) continue;
    auto it = iota.find(a->x.id);
    if (it == iota.end()) return false;
    if (!(symcomp::eval_expr(iota, a->e) == it->second)) return false;
  }
  return true;
}

}  // namespace oracle
