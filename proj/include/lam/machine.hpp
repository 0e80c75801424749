#pragma once

#include <concepts>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "lam/term.hpp"

namespace lam {

/// Machine steps are silent (tau) or observable (beta).
enum class Label { Tau, Beta };

template <typename S>
struct LabeledStep {
  Label label;
  S state;
};

/// A machine: a state type, a functional labeled step, and a natural measure
/// that strictly decreases across every silent step.
template <typename M>
concept Machine = requires(const M& m, const typename M::State& s) {
  { m.step(s) } -> std::convertible_to<std::optional<LabeledStep<typename M::State>>>;
  { m.tau_measure(s) } -> std::convertible_to<Nat>;
};

template <typename S>
struct RunResult {
  EvalStatus status;
  S last;  // normal form, or the last state reached when fuel ran out
  Nat steps = 0;
  Nat beta_steps = 0;
  Nat tau_steps = 0;
};

/// Iterates the machine step at most fuel times.
template <Machine M>
RunResult<typename M::State> evaluate(const M& machine, typename M::State state, Nat fuel) {
  RunResult<typename M::State> result{EvalStatus::Normal, std::move(state)};
  while (result.steps < fuel) {
    auto next = machine.step(result.last);
    if (!next) return result;
    (next->label == Label::Beta ? result.beta_steps : result.tau_steps) += 1;
    result.steps += 1;
    result.last = std::move(next->state);
  }
  if (machine.step(result.last)) result.status = EvalStatus::OutOfFuel;
  return result;
}

/// Runs until normal form, spending fuel on beta steps only. Tau runs are
/// finite by the machine's measure, so this terminates whenever the refined
/// term does; fuel then counts observable steps uniformly across levels.
template <Machine M>
RunResult<typename M::State> evaluate_beta_budget(const M& machine, typename M::State state,
                                                  Nat beta_fuel) {
  RunResult<typename M::State> result{EvalStatus::Normal, std::move(state)};
  for (;;) {
    auto next = machine.step(result.last);
    if (!next) return result;
    if (next->label == Label::Beta) {
      if (result.beta_steps == beta_fuel) {
        result.status = EvalStatus::OutOfFuel;
        return result;
      }
      result.beta_steps += 1;
    } else {
      result.tau_steps += 1;
    }
    result.steps += 1;
    result.last = std::move(next->state);
  }
}

template <typename S>
struct Trace {
  S initial;
  std::vector<LabeledStep<S>> steps;
  EvalStatus status;  // OutOfFuel when the last recorded state still reduces
};

/// Records the full labeled trace from a state, at most fuel steps long.
template <Machine M>
Trace<typename M::State> run_trace(const M& machine, typename M::State initial, Nat fuel) {
  Trace<typename M::State> trace{std::move(initial), {}, EvalStatus::Normal};
  const typename M::State* current = &trace.initial;
  while (trace.steps.size() < fuel) {
    auto next = machine.step(*current);
    if (!next) return trace;
    trace.steps.push_back(std::move(*next));
    current = &trace.steps.back().state;
  }
  if (machine.step(*current)) trace.status = EvalStatus::OutOfFuel;
  return trace;
}

}  // namespace lam
