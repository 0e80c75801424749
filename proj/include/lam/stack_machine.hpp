#pragma once

#include <cassert>
#include <optional>
#include <vector>

#include "lam/machine.hpp"
#include "lam/program.hpp"
#include "lam/refinement.hpp"
#include "lam/term.hpp"

namespace lam {

/// Program stack, head at index 0.
using ProStack = std::vector<Pro>;

/// State of the naive stack machine: control stack (tasks) and argument
/// stack (values). Programs on the argument stack represent abstraction
/// bodies; programs on the control stack run as they are.
struct StackState {
  ProStack control;
  ProStack values;

  friend bool operator==(const StackState& lhs, const StackState& rhs) {
    return lhs.control == rhs.control && lhs.values == rhs.values;
  }
};

/// The three reduction rules: return and lambda are silent, application is
/// observable and performs program substitution. A leading variable command
/// matches no rule.
inline std::optional<LabeledStep<StackState>> stack_step(const StackState& st) {
  if (st.control.empty()) return std::nullopt;
  const Pro& head = st.control.front();
  StackState next = st;
  switch (head.kind()) {
    case Pro::Kind::Ret:
      next.control.erase(next.control.begin());
      return LabeledStep<StackState>{Label::Tau, std::move(next)};
    case Pro::Kind::Lam:
      next.control.front() = head.rest();
      next.values.insert(next.values.begin(), head.body());
      return LabeledStep<StackState>{Label::Tau, std::move(next)};
    case Pro::Kind::App: {
      if (st.values.size() < 2) return std::nullopt;
      Pro r = st.values[0];
      Pro q = st.values[1];
      next.values.erase(next.values.begin(), next.values.begin() + 2);
      next.control.front() = head.rest();
      next.control.insert(next.control.begin(), psubst(q, 0, r));
      return LabeledStep<StackState>{Label::Beta, std::move(next)};
    }
    case Pro::Kind::Var:
      return std::nullopt;
  }
  assert(false);
  return std::nullopt;
}

/// Argument-stack decompilation: every program must represent a term, which
/// is then wrapped as an abstraction.
inline std::optional<TermStack> decompile_values(const ProStack& values) {
  TermStack out;
  out.reserve(values.size());
  for (const Pro& p : values) {
    auto one = decompile(p, {});
    if (!one || one->size() != 1) return std::nullopt;
    out.push_back(Term::lam(one->front()));
  }
  return out;
}

/// Control-stack decompilation: runs the stacked programs over a term stack.
inline std::optional<TermStack> decompile_control(const ProStack& control, TermStack stack) {
  for (const Pro& p : control) {
    auto next = decompile(p, std::move(stack));
    if (!next) return std::nullopt;
    stack = std::move(*next);
  }
  return stack;
}

/// A state refines the unique term its stacks decompile to, when the final
/// term stack is a singleton.
inline std::optional<Term> decompile_state(const StackState& st) {
  auto args = decompile_values(st.values);
  if (!args) return std::nullopt;
  auto terms = decompile_control(st.control, std::move(*args));
  if (!terms || terms->size() != 1) return std::nullopt;
  return terms->front();
}

enum class StackClass { Reducible, FinalAbstraction, StuckVar };

/// Trichotomy for decompilable states: the machine can step, or it halted on
/// a single value, or a leading variable command witnesses a stuck term.
/// Pre: decompile_state(st) is defined.
inline StackClass classify_state(const StackState& st) {
  assert(decompile_state(st).has_value());
  if (stack_step(st)) return StackClass::Reducible;
  if (st.control.empty()) return StackClass::FinalAbstraction;
  return StackClass::StuckVar;
}

/// Command count over the control stack; strictly decreasing on tau steps.
inline Nat stack_tau_measure(const StackState& st) {
  Nat total = 0;
  for (const Pro& p : st.control) total += p.size();
  return total;
}

/// Initial state running the compiled term.
inline StackState stack_init(const Term& s) { return StackState{{compile_top(s)}, {}}; }

struct StackMachine {
  using State = StackState;
  std::optional<LabeledStep<State>> step(const State& st) const { return stack_step(st); }
  Nat tau_measure(const State& st) const { return stack_tau_measure(st); }
};

/// Refinement of stack-machine states to terms.
inline Refinement<StackState, Term> stack_to_term_refinement() {
  Refinement<StackState, Term> r;
  r.silent = SilentPolicy::Preserve;
  r.decompile = [](const StackState& st) { return decompile_state(st); };
  r.target_step = [](const Term& s) -> std::optional<LabeledStep<Term>> {
    auto next = step(s);
    if (!next) return std::nullopt;
    return LabeledStep<Term>{Label::Beta, *next};
  };
  r.target_reducible = [](const Term& s) { return step(s).has_value(); };
  return r;
}

}  // namespace lam
