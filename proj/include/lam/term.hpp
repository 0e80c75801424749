#pragma once

#include <cassert>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lam {

using Nat = std::uint64_t;

/// Call-by-value de Bruijn term: variable index, application, or abstraction.
/// Values are immutable; copies share structure.
class Term {
 public:
  enum class Kind { Var, App, Lam };

  static Term var(Nat index) {
    return Term(std::make_shared<const Node>(Node{Kind::Var, index, nullptr, nullptr, 1}));
  }
  static Term app(const Term& fun, const Term& arg) {
    return Term(std::make_shared<const Node>(
        Node{Kind::App, 0, fun.node_, arg.node_, fun.size() + arg.size() + 1}));
  }
  static Term lam(const Term& body) {
    return Term(std::make_shared<const Node>(Node{Kind::Lam, 0, body.node_, nullptr, body.size() + 1}));
  }

  Kind kind() const { return node_->kind; }
  bool is_var() const { return node_->kind == Kind::Var; }
  bool is_app() const { return node_->kind == Kind::App; }
  bool is_lam() const { return node_->kind == Kind::Lam; }

  Nat index() const {
    assert(is_var());
    return node_->index;
  }
  Term fun() const {
    assert(is_app());
    return Term(node_->a);
  }
  Term arg() const {
    assert(is_app());
    return Term(node_->b);
  }
  Term body() const {
    assert(is_lam());
    return Term(node_->a);
  }

  /// Number of constructors in the term.
  Nat size() const { return node_->size; }

  friend bool operator==(const Term& lhs, const Term& rhs) { return equal(lhs.node_.get(), rhs.node_.get()); }
  friend bool operator!=(const Term& lhs, const Term& rhs) { return !(lhs == rhs); }

 private:
  struct Node {
    Kind kind;
    Nat index;
    std::shared_ptr<const Node> a;  // App fun / Lam body
    std::shared_ptr<const Node> b;  // App arg
    Nat size;
  };

  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  // Iterative so that deep left spines (which reduction can produce) do not
  // exhaust the call stack.
  static bool equal(const Node* lhs, const Node* rhs) {
    std::vector<std::pair<const Node*, const Node*>> work{{lhs, rhs}};
    while (!work.empty()) {
      auto [l, r] = work.back();
      work.pop_back();
      if (l == r) continue;
      if (l->kind != r->kind || l->size != r->size) return false;
      switch (l->kind) {
        case Kind::Var:
          if (l->index != r->index) return false;
          break;
        case Kind::App:
          work.emplace_back(l->a.get(), r->a.get());
          work.emplace_back(l->b.get(), r->b.get());
          break;
        case Kind::Lam:
          work.emplace_back(l->a.get(), r->a.get());
          break;
      }
    }
    return true;
  }

  std::shared_ptr<const Node> node_;
};

/// Simple substitution s[k:=u]: no index shifting, capturing on open terms.
inline Term subst(const Term& s, Nat k, const Term& u) {
  switch (s.kind()) {
    case Term::Kind::Var:
      return s.index() == k ? u : s;
    case Term::Kind::App:
      return Term::app(subst(s.fun(), k, u), subst(s.arg(), k, u));
    case Term::Kind::Lam:
      return Term::lam(subst(s.body(), k + 1, u));
  }
  assert(false);
  return s;
}

/// One call-by-value reduction step, or nothing if the term is irreducible.
/// Beta fires only on (lam s)(lam t); otherwise the left subterm of an
/// application reduces first, then the right one under an abstraction.
inline std::optional<Term> step(const Term& s) {
  if (!s.is_app()) return std::nullopt;
  const Term f = s.fun();
  const Term x = s.arg();
  if (f.is_lam() && x.is_lam()) return subst(f.body(), 0, x);
  if (auto f2 = step(f)) return Term::app(*f2, x);
  if (f.is_lam()) {
    if (auto x2 = step(x)) return Term::app(f, *x2);
  }
  return std::nullopt;
}

/// True iff every free variable of s is smaller than k.
inline bool bound(const Term& s, Nat k) {
  switch (s.kind()) {
    case Term::Kind::Var:
      return s.index() < k;
    case Term::Kind::App:
      return bound(s.fun(), k) && bound(s.arg(), k);
    case Term::Kind::Lam:
      return bound(s.body(), k + 1);
  }
  assert(false);
  return false;
}

inline bool closed(const Term& s) { return bound(s, 0); }

/// Smallest free index of s, or nothing when s is closed.
inline std::optional<Nat> min_free_index(const Term& s, Nat depth = 0) {
  switch (s.kind()) {
    case Term::Kind::Var:
      if (s.index() >= depth) return s.index() - depth;
      return std::nullopt;
    case Term::Kind::App: {
      auto l = min_free_index(s.fun(), depth);
      auto r = min_free_index(s.arg(), depth);
      if (l && r) return std::min(*l, *r);
      return l ? l : r;
    }
    case Term::Kind::Lam:
      return min_free_index(s.body(), depth + 1);
  }
  assert(false);
  return std::nullopt;
}

/// Stuck terms: a variable, an application with a stuck function part, or an
/// abstraction applied to a stuck argument.
inline bool stuck(const Term& s) {
  switch (s.kind()) {
    case Term::Kind::Var:
      return true;
    case Term::Kind::App:
      if (stuck(s.fun())) return true;
      return s.fun().is_lam() && stuck(s.arg());
    case Term::Kind::Lam:
      return false;
  }
  assert(false);
  return false;
}

enum class TermClass { Reducible, Abstraction, Stuck };

/// Exactly one class applies to any term.
inline TermClass classify(const Term& s) {
  if (step(s)) return TermClass::Reducible;
  if (s.is_lam()) return TermClass::Abstraction;
  return TermClass::Stuck;
}

enum class EvalStatus { Normal, OutOfFuel };

struct TermEval {
  EvalStatus status;
  Term last;        // normal form, or the last term reached when fuel ran out
  Nat steps;        // reduction steps taken
};

/// Iterates step at most fuel times.
inline TermEval eval(Term s, Nat fuel) {
  Nat taken = 0;
  while (taken < fuel) {
    auto next = step(s);
    if (!next) return {EvalStatus::Normal, s, taken};
    s = *next;
    ++taken;
  }
  if (!step(s)) return {EvalStatus::Normal, s, taken};
  return {EvalStatus::OutOfFuel, s, taken};
}

}  // namespace lam
