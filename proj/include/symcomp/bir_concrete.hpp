#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symcomp/bir.hpp"
#include "symcomp/concrete.hpp"

namespace symcomp {

/// Scripted environment answering the program's external calls.
struct World {
  Env initial_env;
  std::vector<Bval> rng;
  std::vector<Bval> inputs;
  std::function<Bval(const FnSym&, const std::vector<Bval>&)> fcall;

  Bval rng_value(std::size_t i) const { return i < rng.size() ? rng[i] : Bval::num(0x1000 + i); }
  Bval input_value(std::size_t i) const { return i < inputs.size() ? inputs[i] : Bval::num(0x2000 + i); }
  Bval call(const FnSym& f, const std::vector<Bval>& args) const {
    if (fcall) return fcall(f, args);
    std::string s = f.name + "(";
    for (std::size_t i = 0; i < args.size(); ++i) s += (i ? "," : "") + value_text(args[i]);
    return Bval::str(s + ")");
  }
};

struct ConcreteState {
  Env env;
  Pc pc;
  bool halted = false;
  std::size_t rng_used = 0;
  std::size_t inputs_used = 0;
  std::size_t steps = 0;

  auto operator<=>(const ConcreteState&) const = default;
  bool operator==(const ConcreteState&) const = default;
};

inline constexpr std::size_t kConcreteStepLimit = 10000;

/// Runs silent statements (jumps) and executes the next event-producing
/// statement. Returns nothing once the program halts.
inline std::optional<std::pair<ConcreteEvent, ConcreteState>> concrete_step(const BirProgram& p,
                                                                           const CryptoConfig& cfg,
                                                                           const World& world, ConcreteState s,
                                                                           const std::optional<Bval>& input = {}) {
  while (!s.halted) {
    if (++s.steps > kConcreteStepLimit) {
      s.halted = true;
      break;
    }
    const BirBlock* b = p.find(s.pc.label);
    if (!b) throw Error(ErrorKind::UnknownLabel, value_text(s.pc.label));
    if (s.pc.index >= b->stmts.size()) {
      s.halted = true;
      break;
    }
    const BirStmt& stmt = b->stmts[s.pc.index];
    if (std::holds_alternative<bir::Halt>(stmt)) {
      s.halted = true;
      break;
    }
    if (auto* a = std::get_if<bir::Assign>(&stmt)) {
      Bval v = eval_expr(s.env, a->e);
      s.env[a->var] = v;
      s.pc = next_pc(s.pc);
      return std::make_pair(ConcreteEvent{"Assign", a->var, {v}}, s);
    }
    Bval target;
    if (auto* j = std::get_if<bir::Jmp>(&stmt)) {
      target = eval_expr(s.env, j->target);
    } else {
      const auto& c = std::get<bir::Cjmp>(stmt);
      target = eval_expr(s.env, truthy(eval_expr(s.env, c.cond)) ? c.then_target : c.else_target);
    }
    if (p.find(target)) {
      s.pc = {target, 0};
      continue;
    }
    const LabelRole* role = cfg.role(target);
    if (!role) throw Error(ErrorKind::IllegalJumpTarget, value_text(target));
    auto reg = [&](const std::string& r) {
      auto it = s.env.find(r);
      if (it == s.env.end()) throw Error(ErrorKind::UnboundVariable, r);
      return it->second;
    };
    ConcreteEvent e;
    switch (role->kind) {
      case RoleKind::Rng: {
        Bval v = world.rng_value(s.rng_used++);
        s.env["R0"] = v;
        e = {"SFr", role->hint, {v}};
        break;
      }
      case RoleKind::Fn: {
        std::vector<Bval> args;
        for (std::size_t i = 0; i < role->fn.arity; ++i) args.push_back(reg(arg_register(i)));
        Bval r = world.call(role->fn, args);
        s.env["R0"] = r;
        args.push_back(r);
        e = {"FCall", role->fn.name, args};
        break;
      }
      case RoleKind::Send: e = {"P2A", "", {reg(role->reg)}}; break;
      case RoleKind::Recv: {
        Bval v = input ? *input : world.input_value(s.inputs_used);
        ++s.inputs_used;
        s.env[role->reg] = v;
        e = {"A2P", "", {v}};
        break;
      }
      case RoleKind::Event: e = {"Ev", role->hint, {}}; break;
    }
    s.pc = next_pc(s.pc);
    return std::make_pair(e, s);
  }
  return std::nullopt;
}

/// A BIR program with a scripted world as a plain LTS.
class ConcreteBir {
 public:
  using State = ConcreteState;

  ConcreteBir(BirProgram p, CryptoConfig cfg, World w) : p_(std::move(p)), cfg_(std::move(cfg)), w_(std::move(w)) {}

  State initial() const {
    State s;
    s.env = w_.initial_env;
    s.pc = {p_.blocks.front().label, 0};
    return s;
  }

  std::vector<std::pair<ConcreteEvent, State>> successors(const State& s) const {
    std::vector<std::pair<ConcreteEvent, State>> out;
    if (auto r = concrete_step(p_, cfg_, w_, s)) out.push_back(std::move(*r));
    return out;
  }

  std::vector<State> accept(const State& s, const ConcreteEvent& e) const {
    if (e.tag == "A2P" && e.vals.size() == 1) {
      auto r = concrete_step(p_, cfg_, w_, s, e.vals[0]);
      if (r && r->first == e) return {r->second};
      return {};
    }
    std::vector<State> out;
    for (auto& [ev, n] : successors(s))
      if (ev == e) out.push_back(n);
    return out;
  }

  std::set<std::string> alphabet() const { return {"SFr", "FCall", "P2A", "A2P"}; }

 private:
  BirProgram p_;
  CryptoConfig cfg_;
  World w_;
};

/// Network stub: swallows every output and supplies scripted inputs.
struct StubAttacker {
  using State = std::size_t;
  std::vector<Bval> inputs;

  State initial() const { return 0; }
  std::vector<std::pair<ConcreteEvent, State>> successors(const State& s) const {
    if (s < inputs.size()) return {{ConcreteEvent{"A2P", "", {inputs[s]}}, s + 1}};
    return {};
  }
  std::vector<State> accept(const State& s, const ConcreteEvent& e) const {
    if (e.tag == "P2A") return {s};
    if (e.tag == "A2P" && s < inputs.size() && e.vals.size() == 1 && e.vals[0] == inputs[s]) return {s + 1};
    return {};
  }
  std::set<std::string> alphabet() const { return {"P2A", "A2P"}; }
};

/// Deterministic run of a program against its world.
inline ConcreteTrace run_concrete(const BirProgram& p, const CryptoConfig& cfg, const World& w,
                                  std::size_t max_events = 1000) {
  ConcreteBir m(p, cfg, w);
  ConcreteTrace t;
  auto s = m.initial();
  while (t.size() < max_events) {
    auto r = concrete_step(p, cfg, w, s);
    if (!r) break;
    t.push_back(r->first);
    s = r->second;
  }
  return t;
}

}  // namespace symcomp
