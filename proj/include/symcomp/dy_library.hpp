#pragma once

#include <set>
#include <string>
#include <variant>
#include <vector>

#include "symcomp/compose.hpp"
#include "symcomp/dy_attacker.hpp"

namespace symcomp {

namespace lib {
struct LFresh {
  Name n;
  auto operator<=>(const LFresh&) const = default;
  bool operator==(const LFresh&) const = default;
};
struct CallEq {
  Symbol y;
  Term t;
  auto operator<=>(const CallEq&) const = default;
  bool operator==(const CallEq&) const = default;
};
}  // namespace lib

using LibPredicate = std::variant<lib::LFresh, lib::CallEq>;

inline LibPredicate lib_fresh(Name n) { return lib::LFresh{std::move(n)}; }
inline LibPredicate lib_calleq(Symbol y, Term t) { return lib::CallEq{std::move(y), std::move(t)}; }

inline std::string to_string(const LibPredicate& p) {
  if (auto* f = std::get_if<lib::LFresh>(&p)) return "freshL(" + f->n.text + ")";
  const auto& c = std::get<lib::CallEq>(p);
  return c.y.id + " ↦ " + to_string(c.t);
}

struct LibConfig {
  Signature signature;
  std::vector<Name> names;
};

/// Stateless crypto library: freshness bookkeeping and FCall abstraction.
class DyLibrary {
 public:
  using Predicate = LibPredicate;
  using Inner = Unit;
  using State = SymbolicState<Predicate, Inner>;

  DyLibrary() = default;
  explicit DyLibrary(LibConfig cfg) : cfg_(std::move(cfg)) {}
  explicit DyLibrary(Signature sig) { cfg_.signature = std::move(sig); }

  const LibConfig& config() const { return cfg_; }

  State initial() const { return {}; }

  std::set<EventTag> sync_alphabet() const { return {"SFr", "Silent", "FCall"}; }

  std::vector<Transition<State>> successors(const State& st) const {
    std::vector<Transition<State>> out;
    for (const auto& n : fresh_name_candidates(used_names(st), cfg_.names)) {
      State next = st;
      next.pi.insert(lib_fresh(n));
      out.push_back({ev::SFr{n}, next});
      out.push_back({ev::Silent{n}, next});
    }
    for (const auto& f : cfg_.signature.functions()) {
      std::vector<Symbol> args;
      each_tuple(f.arity, st.sigma, args, [&](const std::vector<Symbol>& xs) {
        auto [y, sigma] = fresh_symbol(st.sigma, "y");
        out.push_back({ev::FCall{f, xs, y}, call(st, f, xs, y)});
      });
    }
    return out;
  }

  std::vector<State> step(const State& st, const Event& e) const {
    auto fresh = [&](const Name& n) -> std::vector<State> {
      if (n.is_public() || st.pi.contains(lib_fresh(n))) return {};
      State next = st;
      next.pi.insert(lib_fresh(n));
      return {next};
    };
    if (auto* f = std::get_if<ev::SFr>(&e)) return fresh(f->name);
    if (auto* s = std::get_if<ev::Silent>(&e)) return fresh(s->name);
    if (auto* c = std::get_if<ev::FCall>(&e)) {
      if (!cfg_.signature.contains(c->f) || c->args.size() != c->f.arity) return {};
      for (const auto& x : c->args)
        if (!st.sigma.contains(x)) return {};
      if (st.sigma.contains(c->result)) return {};
      return {call(st, c->f, c->args, c->result)};
    }
    return {};
  }

  std::set<Predicate> deduce_step(const State&) const { return {}; }

 private:
  static std::set<Name> used_names(const State& st) {
    std::set<Name> used;
    for (const auto& p : st.pi)
      if (auto* f = std::get_if<lib::LFresh>(&p)) used.insert(f->n);
    return used;
  }

  static State call(const State& st, const FnSym& f, const std::vector<Symbol>& xs, const Symbol& y) {
    State next = st;
    next.sigma.insert(y);
    std::vector<Term> args;
    for (const auto& x : xs) args.push_back(Term::sym(x));
    next.pi.insert(lib_calleq(y, Term::app(f, std::move(args))));
    return next;
  }

  template <class F>
  static void each_tuple(std::size_t n, const SymbolSet& sigma, std::vector<Symbol>& acc, F&& emit) {
    if (acc.size() == n) {
      emit(acc);
      return;
    }
    for (const auto& s : sigma) {
      acc.push_back(s);
      each_tuple(n, sigma, acc, emit);
      acc.pop_back();
    }
  }

  LibConfig cfg_;
};

/// Mirrors CallEq facts of the library and Maps facts of the attacker.
template <class LP = LibPredicate, class AP = DyPredicate>
Combiner<LP, AP> lib_att_combiner() {
  using C = Combined<LP, AP>;
  Combiner<LP, AP> c;
  c.name = "lib-att";
  c.declared_class = CombinerClass::Enabling;
  c.derive = [](const std::set<C>& pi) {
    std::set<C> out;
    for (const auto& p : pi) {
      if (auto* l = std::get_if<Left<LP>>(&p)) {
        if (auto* ce = std::get_if<lib::CallEq>(&l->p)) {
          C m = Right<AP>{AttackerEmbedding<AP>::embed(dy_maps(ce->y, ce->t))};
          if (!pi.contains(m)) out.insert(m);
        }
      } else if (auto* r = std::get_if<Right<AP>>(&p)) {
        const DyPredicate* d = AttackerEmbedding<AP>::view(r->p);
        if (!d) continue;
        if (auto* mp = std::get_if<dy::Maps>(d)) {
          C m = Left<LP>{lib_calleq(mp->x, mp->t)};
          if (!pi.contains(m)) out.insert(m);
        }
      }
    }
    return out;
  };
  return c;
}

inline Signature merge_libraries(const Signature& a, const Signature& b) {
  Signature out = a;
  for (const auto& f : b.functions()) out.add(f);
  return out;
}

}  // namespace symcomp
