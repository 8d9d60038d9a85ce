#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "symcomp/lts.hpp"

namespace symcomp {

template <class P>
struct Left {
  P p;
  auto operator<=>(const Left&) const = default;
  bool operator==(const Left&) const = default;
};

template <class P>
struct Right {
  P p;
  auto operator<=>(const Right&) const = default;
  bool operator==(const Right&) const = default;
};

/// Disjoint union of two predicate spaces.
template <class P1, class P2>
using Combined = std::variant<Left<P1>, Right<P2>>;

template <class P>
std::string to_string(const Left<P>& l) {
  return "L:" + to_string(l.p);
}
template <class P>
std::string to_string(const Right<P>& r) {
  return "R:" + to_string(r.p);
}
template <class P1, class P2>
std::string to_string(const Combined<P1, P2>& c) {
  return std::visit([](const auto& x) { return to_string(x); }, c);
}

template <class P1, class P2>
std::set<P1> proj_left(const std::set<Combined<P1, P2>>& pi) {
  std::set<P1> out;
  for (const auto& c : pi)
    if (auto* l = std::get_if<Left<P1>>(&c)) out.insert(l->p);
  return out;
}

template <class P1, class P2>
std::set<P2> proj_right(const std::set<Combined<P1, P2>>& pi) {
  std::set<P2> out;
  for (const auto& c : pi)
    if (auto* r = std::get_if<Right<P2>>(&c)) out.insert(r->p);
  return out;
}

template <class P1, class P2>
std::set<Combined<P1, P2>> inject(const std::set<P1>& l, const std::set<P2>& r) {
  std::set<Combined<P1, P2>> out;
  for (const auto& p : l) out.insert(Left<P1>{p});
  for (const auto& p : r) out.insert(Right<P2>{p});
  return out;
}

/// Access to the attacker's predicates inside (nested) predicate spaces.
/// Specialised by spaces that contain attacker facts.
template <class P>
struct AttackerEmbedding {};

template <class P>
concept HasAttacker = requires(const P& p) {
  AttackerEmbedding<P>::view(p);
};

template <class L, class R>
  requires HasAttacker<R>
struct AttackerEmbedding<std::variant<Left<L>, Right<R>>> {
  static auto view(const std::variant<Left<L>, Right<R>>& c) -> decltype(AttackerEmbedding<R>::view(
      std::declval<const R&>())) {
    if (auto* r = std::get_if<Right<R>>(&c)) return AttackerEmbedding<R>::view(r->p);
    return nullptr;
  }
  template <class A>
  static std::variant<Left<L>, Right<R>> embed(A p) {
    return Right<R>{AttackerEmbedding<R>::embed(std::move(p))};
  }
};

template <class L, class R>
  requires(HasAttacker<L> && !HasAttacker<R>)
struct AttackerEmbedding<std::variant<Left<L>, Right<R>>> {
  static auto view(const std::variant<Left<L>, Right<R>>& c) -> decltype(AttackerEmbedding<L>::view(
      std::declval<const L&>())) {
    if (auto* l = std::get_if<Left<L>>(&c)) return AttackerEmbedding<L>::view(l->p);
    return nullptr;
  }
  template <class A>
  static std::variant<Left<L>, Right<R>> embed(A p) {
    return Left<L>{AttackerEmbedding<L>::embed(std::move(p))};
  }
};

enum class CombinerClass { Neutral, Enabling, Disabling };

inline const char* to_string(CombinerClass c) {
  switch (c) {
    case CombinerClass::Neutral: return "neutral";
    case CombinerClass::Enabling: return "enabling";
    case CombinerClass::Disabling: return "disabling";
  }
  return "?";
}

/// Combined deduction relation. `derive` is one-step: it returns facts
/// derivable from the input in a single application; the caller iterates.
template <class P1, class P2>
struct Combiner {
  using Pred = Combined<P1, P2>;
  std::string name = "empty";
  std::function<std::set<Pred>(const std::set<Pred>&)> derive = [](const std::set<Pred>&) {
    return std::set<Pred>{};
  };
  CombinerClass declared_class = CombinerClass::Neutral;
};

template <class P1, class P2>
Combiner<P1, P2> empty_combiner() {
  return {};
}

template <class C1, class C2>
struct PairInner {
  C1 c1;
  C2 c2;
  auto operator<=>(const PairInner&) const = default;
  bool operator==(const PairInner&) const = default;
};

template <class S>
concept HasOrderedDeduce = requires(const S& s, const typename S::State& st) {
  { s.deduce_ordered(st) } -> std::convertible_to<std::vector<typename S::Predicate>>;
};

/// Deduction candidates in priority order. Components without a preference
/// fall back to the set order.
template <SymbolicLts S>
std::vector<typename S::Predicate> deduce_ordered(const S& s, const typename S::State& st) {
  if constexpr (HasOrderedDeduce<S>) {
    return s.deduce_ordered(st);
  } else {
    auto d = s.deduce_step(st);
    return {d.begin(), d.end()};
  }
}

/// Symbolic parallel composition S1 ∥ S2 under a combiner.
template <SymbolicLts S1, SymbolicLts S2>
class Composed {
 public:
  using P1 = typename S1::Predicate;
  using P2 = typename S2::Predicate;
  using Predicate = Combined<P1, P2>;
  using Inner = PairInner<typename S1::Inner, typename S2::Inner>;
  using State = SymbolicState<Predicate, Inner>;
  using State1 = typename S1::State;
  using State2 = typename S2::State;

  Composed(S1 s1, S2 s2, Combiner<P1, P2> comb = {})
      : s1_(std::move(s1)), s2_(std::move(s2)), comb_(std::move(comb)) {
    a1_ = s1_.sync_alphabet();
    a2_ = s2_.sync_alphabet();
    for (const auto& t : a1_) {
      if (a2_.contains(t)) shared_.insert(t);
      alphabet_.insert(t);
    }
    alphabet_.insert(a2_.begin(), a2_.end());
  }

  const S1& left() const { return s1_; }
  const S2& right() const { return s2_; }
  const Combiner<P1, P2>& combiner() const { return comb_; }
  const std::set<EventTag>& shared_alphabet() const { return shared_; }

  State initial() const {
    auto i1 = s1_.initial();
    auto i2 = s2_.initial();
    State st;
    st.sigma = i1.sigma;
    st.sigma.insert(i2.sigma.begin(), i2.sigma.end());
    st.pi = inject<P1, P2>(i1.pi, i2.pi);
    st.inner = {i1.inner, i2.inner};
    return st;
  }

  State1 proj1(const State& st) const { return {st.sigma, proj_left<P1, P2>(st.pi), st.inner.c1}; }
  State2 proj2(const State& st) const { return {st.sigma, proj_right<P1, P2>(st.pi), st.inner.c2}; }

  std::vector<Transition<State>> successors(const State& st) const {
    std::vector<Transition<State>> out;
    State1 p1 = proj1(st);
    State2 p2 = proj2(st);
    for (auto& t : s1_.successors(p1)) {
      if (!shared_.contains(tag_of(t.event))) {
        out.push_back({t.event, join(t.next, p2)});
      } else {
        for (auto& n2 : s2_.step(p2, t.event)) out.push_back({t.event, join(t.next, n2)});
      }
    }
    for (auto& t : s2_.successors(p2)) {
      if (!shared_.contains(tag_of(t.event))) {
        out.push_back({t.event, join(p1, t.next)});
      } else {
        for (auto& n1 : s1_.step(p1, t.event)) out.push_back({t.event, join(n1, t.next)});
      }
    }
    dedup(out);
    return out;
  }

  std::vector<State> step(const State& st, const Event& e) const {
    std::vector<State> out;
    EventTag tag = tag_of(e);
    State1 p1 = proj1(st);
    State2 p2 = proj2(st);
    if (shared_.contains(tag)) {
      auto n1s = s1_.step(p1, e);
      if (n1s.empty()) return out;
      auto n2s = s2_.step(p2, e);
      for (const auto& n1 : n1s)
        for (const auto& n2 : n2s) out.push_back(join(n1, n2));
    } else if (a1_.contains(tag)) {
      for (auto& n1 : s1_.step(p1, e)) out.push_back(join(n1, p2));
    } else if (a2_.contains(tag)) {
      for (auto& n2 : s2_.step(p2, e)) out.push_back(join(p1, n2));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  /// Combiner facts first, then the left component, then the right one.
  std::vector<Predicate> deduce_ordered(const State& st) const {
    std::vector<Predicate> out;
    std::set<Predicate> seen;
    auto add = [&](const Predicate& p) {
      if (!st.pi.contains(p) && seen.insert(p).second) out.push_back(p);
    };
    for (const auto& p : comb_.derive(st.pi)) add(p);
    for (const auto& p : symcomp::deduce_ordered(s1_, proj1(st))) add(Left<P1>{p});
    for (const auto& p : symcomp::deduce_ordered(s2_, proj2(st))) add(Right<P2>{p});
    return out;
  }

  std::set<Predicate> deduce_step(const State& st) const {
    auto v = deduce_ordered(st);
    return {v.begin(), v.end()};
  }

  std::set<EventTag> sync_alphabet() const { return alphabet_; }

  State join(const State1& n1, const State2& n2) const {
    State st;
    st.sigma = n1.sigma;
    st.sigma.insert(n2.sigma.begin(), n2.sigma.end());
    st.pi = inject<P1, P2>(n1.pi, n2.pi);
    st.inner = {n1.inner, n2.inner};
    return st;
  }

 private:
  S1 s1_;
  S2 s2_;
  Combiner<P1, P2> comb_;
  std::set<EventTag> a1_, a2_, shared_, alphabet_;
};

template <SymbolicLts S1, SymbolicLts S2>
Composed<S1, S2> compose(S1 s1, S2 s2, Combiner<typename S1::Predicate, typename S2::Predicate> comb = {}) {
  return Composed<S1, S2>(std::move(s1), std::move(s2), std::move(comb));
}

/// Saturation that follows `deduce_ordered`; returns the predicates in the
/// order they were acquired.
template <SymbolicLts S>
std::pair<typename S::State, std::vector<typename S::Predicate>> saturate_ordered(const S& s, typename S::State st,
                                                                                  std::size_t budget) {
  std::vector<typename S::Predicate> added;
  while (added.size() < budget) {
    auto news = deduce_ordered(s, st);
    if (news.empty()) break;
    for (const auto& p : news) {
      if (added.size() >= budget) break;
      if (st.pi.insert(p).second) added.push_back(p);
    }
  }
  return {std::move(st), std::move(added)};
}

}  // namespace symcomp
