#pragma once

#include <cassert>
#include <optional>
#include <vector>

#include "lam/machine.hpp"
#include "lam/program.hpp"
#include "lam/refinement.hpp"
#include "lam/stack_machine.hpp"

namespace lam {

struct Clo;
using Env = std::vector<Clo>;

/// Closure: a program paired with an environment (a delayed substitution).
struct Clo {
  Pro prog;
  Env env;

  friend bool operator==(const Clo& lhs, const Clo& rhs) {
    return lhs.prog == rhs.prog && lhs.env == rhs.env;
  }
};

using CloStack = std::vector<Clo>;

/// State of the closure machine: control and argument stacks of closures.
struct CloState {
  CloStack control;
  CloStack values;

  friend bool operator==(const CloState& lhs, const CloState& rhs) {
    return lhs.control == rhs.control && lhs.values == rhs.values;
  }
};

/// Parallel program substitution P[k:=W]: variable commands at index n >= k
/// pick the lambda body W[n-k] when it exists.
inline Pro psubst_many(const Pro& p, Nat k, const std::vector<Pro>& w) {
  switch (p.kind()) {
    case Pro::Kind::Ret:
      return p;
    case Pro::Kind::App:
      return Pro::app(psubst_many(p.rest(), k, w));
    case Pro::Kind::Lam:
      return Pro::lam(psubst_many(p.body(), k + 1, w), psubst_many(p.rest(), k, w));
    case Pro::Kind::Var: {
      Nat n = p.index();
      if (n >= k && n - k < w.size())
        return Pro::lam(w[n - k], psubst_many(p.rest(), k, w));
      return Pro::var(n, psubst_many(p.rest(), k, w));
    }
  }
  assert(false);
  return p;
}

inline std::vector<Pro> resolve_env(const Env& env);

/// Unfolds a value closure into the program it stands for: the environment is
/// substituted at cutoff 1, leaving variable 0 (the pending argument) free.
inline Pro resolve_value_closure(const Clo& e) { return psubst_many(e.prog, 1, resolve_env(e.env)); }

/// Unfolds a task closure: substitution at cutoff 0, no variable stays free.
inline Pro resolve_task_closure(const Clo& e) { return psubst_many(e.prog, 0, resolve_env(e.env)); }

inline std::vector<Pro> resolve_env(const Env& env) {
  std::vector<Pro> out;
  out.reserve(env.size());
  for (const Clo& e : env) out.push_back(resolve_value_closure(e));
  return out;
}

/// Value-closure bound: the program may use one variable per environment
/// entry plus the pending argument; environments hold value closures.
inline bool clo_bound(const Clo& e) {
  if (!pbound(e.prog, e.env.size() + 1)) return false;
  for (const Clo& entry : e.env)
    if (!clo_bound(entry)) return false;
  return true;
}

/// Task-closure bound: no free variables beyond the environment.
inline bool task_bound(const Clo& e) {
  if (!pbound(e.prog, e.env.size())) return false;
  for (const Clo& entry : e.env)
    if (!clo_bound(entry)) return false;
  return true;
}

/// Closed state: tasks allow no free variable, values allow exactly one.
inline bool state_closed(const CloState& st) {
  for (const Clo& e : st.control)
    if (!task_bound(e)) return false;
  for (const Clo& e : st.values)
    if (!clo_bound(e)) return false;
  return true;
}

/// The four reduction rules. The variable rule is the one new over the stack
/// machine: it pushes the environment entry instead of substituting.
inline std::optional<LabeledStep<CloState>> closure_step(const CloState& st) {
  if (st.control.empty()) return std::nullopt;
  const Clo& head = st.control.front();
  CloState next = st;
  switch (head.prog.kind()) {
    case Pro::Kind::Ret:
      next.control.erase(next.control.begin());
      return LabeledStep<CloState>{Label::Tau, std::move(next)};
    case Pro::Kind::Var: {
      Nat n = head.prog.index();
      if (n >= head.env.size()) return std::nullopt;
      Clo entry = head.env[n];
      next.control.front().prog = head.prog.rest();
      next.values.insert(next.values.begin(), std::move(entry));
      return LabeledStep<CloState>{Label::Tau, std::move(next)};
    }
    case Pro::Kind::Lam: {
      Clo value{head.prog.body(), head.env};
      next.control.front().prog = head.prog.rest();
      next.values.insert(next.values.begin(), std::move(value));
      return LabeledStep<CloState>{Label::Tau, std::move(next)};
    }
    case Pro::Kind::App: {
      if (st.values.size() < 2) return std::nullopt;
      Clo arg = st.values[0];
      Clo fun = st.values[1];
      next.values.erase(next.values.begin(), next.values.begin() + 2);
      next.control.front().prog = head.prog.rest();
      Env extended;
      extended.reserve(fun.env.size() + 1);
      extended.push_back(std::move(arg));
      extended.insert(extended.end(), fun.env.begin(), fun.env.end());
      next.control.insert(next.control.begin(), Clo{fun.prog, std::move(extended)});
      return LabeledStep<CloState>{Label::Beta, std::move(next)};
    }
  }
  assert(false);
  return std::nullopt;
}

/// Decompiles a closed state to the stack-machine state with every closure
/// unfolded. Closedness is part of the refinement relation, so non-closed
/// states have no decompilation.
inline std::optional<StackState> decompile_state(const CloState& st) {
  if (!state_closed(st)) return std::nullopt;
  StackState out;
  out.control.reserve(st.control.size());
  out.values.reserve(st.values.size());
  for (const Clo& e : st.control) out.control.push_back(resolve_task_closure(e));
  for (const Clo& e : st.values) out.values.push_back(resolve_value_closure(e));
  return out;
}

/// Command count of programs on the control stack, environments excluded.
inline Nat closure_tau_measure(const CloState& st) {
  Nat total = 0;
  for (const Clo& e : st.control) total += e.prog.size();
  return total;
}

/// Initial state running the compiled term in the empty environment.
inline CloState closure_init(const Term& s) { return CloState{{Clo{compile_top(s), {}}}, {}}; }

struct ClosureMachine {
  using State = CloState;
  std::optional<LabeledStep<State>> step(const State& st) const { return closure_step(st); }
  Nat tau_measure(const State& st) const { return closure_tau_measure(st); }
};

/// Strict simulation of the stack machine: labels match step for step.
inline Refinement<CloState, StackState> closure_to_stack_refinement() {
  Refinement<CloState, StackState> r;
  r.silent = SilentPolicy::Mirror;
  r.decompile = [](const CloState& st) { return decompile_state(st); };
  r.target_step = [](const StackState& st) { return stack_step(st); };
  r.target_reducible = [](const StackState& st) { return stack_step(st).has_value(); };
  return r;
}

/// Refinement of closure-machine states all the way to terms.
inline Refinement<CloState, Term> closure_to_term_refinement() {
  return compose(closure_to_stack_refinement(), stack_to_term_refinement());
}

}  // namespace lam
