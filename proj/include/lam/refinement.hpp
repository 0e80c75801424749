#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>

#include "lam/machine.hpp"

namespace lam {

/// What a silent machine step must do to the decompiled value:
/// - Preserve: leave it unchanged (refining a plain reduction system).
/// - Mirror: match a silent step of the target machine (strict simulation).
enum class SilentPolicy { Preserve, Mirror };

/// A refinement from machine states S to target values X, given by a
/// decompilation function plus the target system's step and reducibility.
/// Stateless function record; safe to share across concurrent audits.
template <typename S, typename X>
struct Refinement {
  SilentPolicy silent;
  std::function<std::optional<X>(const S&)> decompile;
  // For Preserve targets the label is irrelevant and fixed to Beta.
  std::function<std::optional<LabeledStep<X>>(const X&)> target_step;
  std::function<bool(const X&)> target_reducible;
};

/// Composes two refinements; decompilation failures propagate.
template <typename S, typename B, typename X>
Refinement<S, X> compose(Refinement<S, B> lower, Refinement<B, X> upper) {
  Refinement<S, X> composed;
  composed.silent = upper.silent;
  composed.decompile = [lower = lower.decompile,
                        upper = upper.decompile](const S& state) -> std::optional<X> {
    auto mid = lower(state);
    if (!mid) return std::nullopt;
    return upper(*mid);
  };
  composed.target_step = std::move(upper.target_step);
  composed.target_reducible = std::move(upper.target_reducible);
  return composed;
}

enum class ViolationKind {
  SilentChanged,
  BetaMismatch,
  ProgressFailed,
  TauBudgetExceeded,
  DecompileFailed,
};

inline const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::SilentChanged: return "SilentChanged";
    case ViolationKind::BetaMismatch: return "BetaMismatch";
    case ViolationKind::ProgressFailed: return "ProgressFailed";
    case ViolationKind::TauBudgetExceeded: return "TauBudgetExceeded";
    case ViolationKind::DecompileFailed: return "DecompileFailed";
  }
  return "?";
}

struct Violation {
  ViolationKind kind;
  Nat at_step;
  std::string detail;
};

struct AuditReport {
  Nat steps_checked = 0;
  Nat beta_count = 0;
  Nat max_tau_run = 0;
  std::optional<Violation> violation;

  bool ok() const { return !violation.has_value(); }
};

/// Walks the trace from a0 for at most fuel steps and checks, at every step,
/// the four conditions a refinement promises: progress (a reducible target
/// means a reducible state), silent steps behave per the policy, observable
/// steps advance the target by exactly one step, and the tau measure strictly
/// decreases across silent steps.
template <Machine M, typename X>
AuditReport audit_refinement(const M& machine, const Refinement<typename M::State, X>& refinement,
                             typename M::State state, Nat fuel) {
  AuditReport report;
  auto fail = [&](ViolationKind kind, std::string detail) {
    report.violation = Violation{kind, report.steps_checked, std::move(detail)};
    return report;
  };

  auto target = refinement.decompile(state);
  if (!target) return fail(ViolationKind::DecompileFailed, "initial state does not decompile");

  Nat tau_run = 0;
  while (report.steps_checked < fuel) {
    auto next = machine.step(state);
    if (!next) {
      if (refinement.target_reducible(*target))
        return fail(ViolationKind::ProgressFailed, "target reducible but machine state is normal");
      return report;
    }
    if (next->label == Label::Tau) {
      if (machine.tau_measure(next->state) >= machine.tau_measure(state))
        return fail(ViolationKind::TauBudgetExceeded, "tau measure did not decrease");
      tau_run += 1;
      report.max_tau_run = std::max(report.max_tau_run, tau_run);
      auto decompiled = refinement.decompile(next->state);
      if (!decompiled) return fail(ViolationKind::DecompileFailed, "state after tau step does not decompile");
      if (refinement.silent == SilentPolicy::Preserve) {
        if (!(*decompiled == *target))
          return fail(ViolationKind::SilentChanged, "tau step changed the decompiled value");
      } else {
        auto advanced = refinement.target_step(*target);
        if (!advanced || advanced->label != Label::Tau)
          return fail(ViolationKind::SilentChanged, "target has no matching tau step");
        if (!(*decompiled == advanced->state))
          return fail(ViolationKind::SilentChanged, "tau step does not track the target's tau step");
        target = std::move(advanced->state);
      }
    } else {
      tau_run = 0;
      auto advanced = refinement.target_step(*target);
      if (!advanced) return fail(ViolationKind::BetaMismatch, "target has no successor");
      if (refinement.silent == SilentPolicy::Mirror && advanced->label != Label::Beta)
        return fail(ViolationKind::BetaMismatch, "target step is silent");
      auto decompiled = refinement.decompile(next->state);
      if (!decompiled) return fail(ViolationKind::DecompileFailed, "state after beta step does not decompile");
      if (!(*decompiled == advanced->state))
        return fail(ViolationKind::BetaMismatch, "beta step does not land on the target's successor");
      target = std::move(advanced->state);
      report.beta_count += 1;
    }
    state = std::move(next->state);
    report.steps_checked += 1;
  }
  return report;
}

struct TopDownOutcome {
  bool ok;
  std::string detail;
  explicit operator bool() const { return ok; }
};

/// Checks that the machine, started at a state decompiling to x, performs zero
/// or more tau steps then exactly one beta step landing on x_target.
template <Machine M, typename X>
TopDownOutcome top_down_check(const M& machine, const Refinement<typename M::State, X>& refinement,
                              typename M::State state, const X& x_target, Nat fuel) {
  for (Nat taken = 0; taken <= fuel; ++taken) {
    auto next = machine.step(state);
    if (!next) return {false, "machine stopped before an observable step"};
    if (next->label == Label::Beta) {
      auto decompiled = refinement.decompile(next->state);
      if (!decompiled) return {false, "state after the observable step does not decompile"};
      if (!(*decompiled == x_target)) return {false, "observable step lands on the wrong target"};
      return {true, ""};
    }
    state = std::move(next->state);
  }
  std::ostringstream detail;
  detail << "no observable step within " << fuel << " silent steps";
  return {false, detail.str()};
}

}  // namespace lam
