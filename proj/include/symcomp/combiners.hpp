#pragma once

#include <set>
#include <string>
#include <vector>

#include "symcomp/compose.hpp"
#include "symcomp/dy_attacker.hpp"
#include "symcomp/dy_library.hpp"
#include "symcomp/sapic_semantics.hpp"
#include "symcomp/sbir.hpp"

namespace symcomp {

/// Attacker side of the usual pipeline: library composed with the attacker.
using LibAttPredicate = Combined<LibPredicate, DyPredicate>;

namespace detail {

/// Symbols y with Right(K(y)).
template <class LP, class RP>
std::set<Symbol> known_symbols(const std::set<Combined<LP, RP>>& pi) {
  std::set<Symbol> out;
  for (const auto& p : pi)
    if (auto* r = std::get_if<Right<RP>>(&p))
      if (const DyPredicate* d = AttackerEmbedding<RP>::view(r->p))
        if (auto* k = std::get_if<dy::K>(d); k && k->t.is_sym()) out.insert(k->t.as_sym());
  return out;
}

template <class LP, class RP>
std::vector<sbir::PEq> left_equalities(const std::set<Combined<LP, RP>>& pi) {
  std::vector<sbir::PEq> out;
  for (const auto& p : pi)
    if (auto* l = std::get_if<Left<LP>>(&p))
      if (const SbirPredicate* s = SbirEmbedding<LP>::view(l->p))
        if (auto* e = std::get_if<sbir::PEq>(s)) out.push_back(*e);
  return out;
}

template <class LP, class RP>
void add_knowledge(const std::set<Combined<LP, RP>>& pi, std::set<Combined<LP, RP>>& out, const Symbol& z) {
  Combined<LP, RP> k = Right<RP>{AttackerEmbedding<RP>::embed(dy_k(Term::sym(z)))};
  if (!pi.contains(k)) out.insert(std::move(k));
}

}  // namespace detail

/// K(x), x ≐ y ⊢ K(z) for every z in symbols(y).
template <class LP = SbirPredicate, class RP = LibAttPredicate>
Combiner<LP, RP> over_approx_combiner() {
  using C = Combined<LP, RP>;
  Combiner<LP, RP> c;
  c.name = "overapprox";
  c.declared_class = CombinerClass::Enabling;
  c.derive = [](const std::set<C>& pi) {
    std::set<C> out;
    auto known = detail::known_symbols<LP, RP>(pi);
    for (const auto& e : detail::left_equalities<LP, RP>(pi))
      if (known.contains(e.x))
        for (const auto& z : symbols_of(e.e)) detail::add_knowledge<LP, RP>(pi, out, z);
    return out;
  };
  return c;
}

/// x ≐ y, y ~ z ⊢ x ≐ z (when z is a symbol) and x ~ z. `~` is read
/// symmetrically.
template <class LP = SbirPredicate, class RP = LibAttPredicate>
Combiner<LP, RP> eq_share_combiner() {
  using C = Combined<LP, RP>;
  Combiner<LP, RP> c;
  c.name = "eqshare";
  c.declared_class = CombinerClass::Enabling;
  c.derive = [](const std::set<C>& pi) {
    std::set<C> out;
    std::vector<dy::Eq> eqs;
    for (const auto& p : pi)
      if (auto* r = std::get_if<Right<RP>>(&p))
        if (const DyPredicate* d = AttackerEmbedding<RP>::view(r->p))
          if (auto* e = std::get_if<dy::Eq>(d)) eqs.push_back(*e);
    auto emit = [&](C p) {
      if (!pi.contains(p)) out.insert(std::move(p));
    };
    for (const auto& le : detail::left_equalities<LP, RP>(pi)) {
      if (!le.e.is_sym()) continue;
      Term y = Term::sym(le.e.symbol());
      for (const auto& re : eqs) {
        for (int dir = 0; dir < 2; ++dir) {
          const Term& a = dir == 0 ? re.a : re.b;
          const Term& z = dir == 0 ? re.b : re.a;
          if (a != y) continue;
          emit(Right<RP>{AttackerEmbedding<RP>::embed(dy_eq(Term::sym(le.x), z))});
          if (z.is_sym()) emit(Left<LP>{SbirEmbedding<LP>::embed(peq(le.x, Expr::sym(z.as_sym())))});
        }
      }
    }
    return out;
  };
  return c;
}

/// K(y), y ≐ op(x, c), const c ⊢ K(x).
template <class LP = SbirPredicate, class RP = LibAttPredicate>
Combiner<LP, RP> bit_combiner() {
  using C = Combined<LP, RP>;
  Combiner<LP, RP> c;
  c.name = "bit";
  c.declared_class = CombinerClass::Enabling;
  c.derive = [](const std::set<C>& pi) {
    std::set<C> out;
    std::set<Expr> consts;
    for (const auto& p : pi)
      if (auto* l = std::get_if<Left<LP>>(&p))
        if (const SbirPredicate* s = SbirEmbedding<LP>::view(l->p))
          if (auto* k = std::get_if<sbir::PConst>(s)) consts.insert(k->c);
    auto known = detail::known_symbols<LP, RP>(pi);
    for (const auto& e : detail::left_equalities<LP, RP>(pi)) {
      if (!known.contains(e.x) || e.e.kind() != Expr::Kind::Binop) continue;
      if (e.e.lhs().is_sym() && consts.contains(e.e.rhs()))
        detail::add_knowledge<LP, RP>(pi, out, e.e.lhs().symbol());
    }
    return out;
  };
  return c;
}

/// K(y), y ≐ x ◇ w ⊢ K(z) for z in symbols(x) ∪ symbols(w). Also fires when
/// the right-hand side is a symbol or a unary application.
template <class LP = SbirPredicate, class RP = LibAttPredicate>
Combiner<LP, RP> bit_prime_combiner() {
  using C = Combined<LP, RP>;
  Combiner<LP, RP> c;
  c.name = "bitp";
  c.declared_class = CombinerClass::Disabling;
  c.derive = [](const std::set<C>& pi) {
    std::set<C> out;
    auto known = detail::known_symbols<LP, RP>(pi);
    for (const auto& e : detail::left_equalities<LP, RP>(pi)) {
      if (!known.contains(e.x)) continue;
      auto k = e.e.kind();
      if (k != Expr::Kind::Binop && k != Expr::Kind::Unop && k != Expr::Kind::Sym && k != Expr::Kind::Var) continue;
      for (const auto& z : symbols_of(e.e)) detail::add_knowledge<LP, RP>(pi, out, z);
    }
    return out;
  };
  return c;
}

/// bit′ read through the operator translation: fires on let-equalities whose
/// right-hand side is a translated operator application or a symbol.
template <class RP = LibAttPredicate>
Combiner<SapicPredicate, RP> bit_prime_sapic_combiner() {
  using C = Combined<SapicPredicate, RP>;
  Combiner<SapicPredicate, RP> c;
  c.name = "bitp-sapic";
  c.declared_class = CombinerClass::Enabling;
  c.derive = [](const std::set<C>& pi) {
    std::set<C> out;
    std::set<Symbol> known;
    for (const auto& p : pi)
      if (auto* r = std::get_if<Right<RP>>(&p))
        if (const DyPredicate* d = AttackerEmbedding<RP>::view(r->p))
          if (auto* k = std::get_if<dy::K>(d); k && k->t.is_sym()) known.insert(k->t.as_sym());
    for (const auto& p : pi) {
      auto* l = std::get_if<Left<SapicPredicate>>(&p);
      if (!l || !known.contains(l->p.x)) continue;
      const Term& t = l->p.t;
      if (!t.is_sym() && !(t.is_app() && is_translated_operator(t.fn()))) continue;
      for (const auto& z : symbols_of(t)) {
        C k = Right<RP>{AttackerEmbedding<RP>::embed(dy_k(Term::sym(z)))};
        if (!pi.contains(k)) out.insert(std::move(k));
      }
    }
    return out;
  };
  return c;
}

}  // namespace symcomp
