#pragma once

#include <compare>
#include <concepts>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "symcomp/error.hpp"
#include "symcomp/event.hpp"
#include "symcomp/symbol.hpp"

namespace symcomp {

/// (Σ, Π, c): global symbol set, the component's predicates, inner state.
template <class P, class C>
struct SymbolicState {
  SymbolSet sigma;
  std::set<P> pi;
  C inner;

  auto operator<=>(const SymbolicState&) const = default;
  bool operator==(const SymbolicState&) const = default;
};

/// Inner state of stateless components.
struct Unit {
  auto operator<=>(const Unit&) const = default;
  bool operator==(const Unit&) const = default;
};

template <class St>
struct Transition {
  Event event;
  St next;

  auto operator<=>(const Transition&) const = default;
  bool operator==(const Transition&) const = default;
};

/// Contract of a symbolic LTS.
///  - `successors` lists the visible (non-Tau) moves the component proposes.
///  - `step` lists the states reached when a partner proposes `e`; this is how
///    a receiving side adopts symbols minted by the emitter.
///  - `deduce_step` lists predicates derivable from Π that are not yet in Π;
///    each one is a Tau move.
template <class S>
concept SymbolicLts = requires(const S& s, const typename S::State& st, const Event& e) {
  typename S::Predicate;
  typename S::Inner;
  requires std::same_as<typename S::State, SymbolicState<typename S::Predicate, typename S::Inner>>;
  { s.initial() } -> std::convertible_to<typename S::State>;
  { s.successors(st) } -> std::convertible_to<std::vector<Transition<typename S::State>>>;
  { s.step(st, e) } -> std::convertible_to<std::vector<typename S::State>>;
  { s.deduce_step(st) } -> std::convertible_to<std::set<typename S::Predicate>>;
  { s.sync_alphabet() } -> std::convertible_to<std::set<EventTag>>;
};

/// Default implementation of `step` for components that only accept what they
/// would propose themselves.
template <class St>
std::vector<St> accept_own(const std::vector<Transition<St>>& own, const Event& e) {
  std::vector<St> out;
  for (const auto& t : own)
    if (t.event == e) out.push_back(t.next);
  return out;
}

template <class St>
void dedup(std::vector<Transition<St>>& ts) {
  std::set<Transition<St>> seen;
  std::vector<Transition<St>> out;
  for (auto& t : ts)
    if (seen.insert(t).second) out.push_back(std::move(t));
  ts = std::move(out);
}

struct EnumLimits {
  std::size_t depth = 4;
  std::size_t ded_budget = 4;
  std::size_t max_states = 200000;
};

namespace detail {

template <SymbolicLts S>
class TraceEnumerator {
 public:
  using State = typename S::State;
  TraceEnumerator(const S& s, EnumLimits lim) : s_(s), lim_(lim) {}

  const std::set<Trace>& run(const State& st, std::size_t depth, std::size_t tau) {
    Key key{st, depth, tau};
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    if (memo_.size() >= lim_.max_states)
      throw Error(ErrorKind::StateBudgetExceeded,
                  "more than " + std::to_string(lim_.max_states) + " states visited");
    std::set<Trace> out{Trace{}};
    if (depth > 0) {
      for (const auto& t : s_.successors(st)) {
        for (const auto& rest : run(t.next, depth - 1, lim_.ded_budget)) {
          Trace tr{t.event};
          tr.insert(tr.end(), rest.begin(), rest.end());
          out.insert(std::move(tr));
        }
      }
      if (tau > 0) {
        for (const auto& phi : s_.deduce_step(st)) {
          State next = st;
          next.pi.insert(phi);
          const auto& sub = run(next, depth, tau - 1);
          out.insert(sub.begin(), sub.end());
        }
      }
    }
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

 private:
  using Key = std::tuple<State, std::size_t, std::size_t>;
  const S& s_;
  EnumLimits lim_;
  std::map<Key, std::set<Trace>> memo_;
};

}  // namespace detail

/// Event sequences of length ≤ depth, with up to `ded_budget` Tau steps
/// before each visible event. Tau is not recorded.
template <SymbolicLts S>
std::set<Trace> enumerate_traces(const S& s, EnumLimits lim) {
  detail::TraceEnumerator<S> en(s, lim);
  return en.run(s.initial(), lim.depth, lim.ded_budget);
}

template <SymbolicLts S>
std::set<Trace> enumerate_traces(const S& s, std::size_t depth, std::size_t ded_budget) {
  EnumLimits lim;
  lim.depth = depth;
  lim.ded_budget = ded_budget;
  return enumerate_traces(s, lim);
}

/// Applies every Tau step reachable within `budget`, in the order given by
/// `deduce_step`, and returns the saturated state plus the added predicates
/// in acquisition order.
template <SymbolicLts S>
std::pair<typename S::State, std::vector<typename S::Predicate>> saturate(const S& s, typename S::State st,
                                                                          std::size_t budget) {
  std::vector<typename S::Predicate> added;
  while (added.size() < budget) {
    auto news = s.deduce_step(st);
    if (news.empty()) break;
    for (const auto& p : news) {
      if (added.size() >= budget) break;
      if (st.pi.insert(p).second) added.push_back(p);
    }
  }
  return {std::move(st), std::move(added)};
}

inline constexpr std::size_t kOracleMaxLength = 12;

namespace detail {

inline void interleave_rec(const Trace& a, std::size_t i, const Trace& b, std::size_t j,
                           const std::set<EventTag>& sync, Trace& prefix, std::set<Trace>& out) {
  if (i == a.size() && j == b.size()) {
    out.insert(prefix);
    return;
  }
  if (i < a.size() && !sync.contains(tag_of(a[i]))) {
    prefix.push_back(a[i]);
    interleave_rec(a, i + 1, b, j, sync, prefix, out);
    prefix.pop_back();
  }
  if (j < b.size() && !sync.contains(tag_of(b[j]))) {
    prefix.push_back(b[j]);
    interleave_rec(a, i, b, j + 1, sync, prefix, out);
    prefix.pop_back();
  }
  if (i < a.size() && j < b.size() && sync.contains(tag_of(a[i])) && a[i] == b[j]) {
    prefix.push_back(a[i]);
    interleave_rec(a, i + 1, b, j + 1, sync, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace detail

/// All partially synchronised interleavings of t1 and t2.
inline std::set<Trace> all_interleavings(const Trace& t1, const Trace& t2, const std::set<EventTag>& sync) {
  if (t1.size() + t2.size() > kOracleMaxLength)
    throw Error(ErrorKind::OracleScaleExceeded, "combined length " + std::to_string(t1.size() + t2.size()) +
                                                    " exceeds " + std::to_string(kOracleMaxLength));
  std::set<Trace> out;
  Trace prefix;
  detail::interleave_rec(t1, 0, t2, 0, sync, prefix, out);
  return out;
}

inline bool is_interleaving(const Trace& t, const Trace& t1, const Trace& t2, const std::set<EventTag>& sync) {
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> dead;
  std::function<bool(std::size_t, std::size_t, std::size_t)> go = [&](std::size_t k, std::size_t i,
                                                                     std::size_t j) -> bool {
    if (k == t.size()) return i == t1.size() && j == t2.size();
    if (dead.contains({k, i, j})) return false;
    const Event& e = t[k];
    bool shared = sync.contains(tag_of(e));
    bool ok = false;
    if (shared) {
      ok = i < t1.size() && j < t2.size() && t1[i] == e && t2[j] == e && go(k + 1, i + 1, j + 1);
    } else {
      ok = (i < t1.size() && t1[i] == e && go(k + 1, i + 1, j)) ||
           (j < t2.size() && t2[j] == e && go(k + 1, i, j + 1));
    }
    if (!ok) dead.insert({k, i, j});
    return ok;
  };
  return go(0, 0, 0);
}

/// Interleavings of every pair drawn from two trace sets, keeping only those
/// of length ≤ max_len.
inline std::set<Trace> interleaving_closure(const std::set<Trace>& a, const std::set<Trace>& b,
                                            const std::set<EventTag>& sync, std::size_t max_len) {
  std::set<Trace> out;
  for (const auto& t1 : a)
    for (const auto& t2 : b) {
      if (t1.size() + t2.size() > 2 * max_len) continue;
      for (auto& t : all_interleavings(t1, t2, sync))
        if (t.size() <= max_len) out.insert(std::move(t));
    }
  return out;
}

}  // namespace symcomp
