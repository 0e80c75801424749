#pragma once

#include <cassert>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "lam/term.hpp"

namespace lam {

/// Command-sequence program: ret | var n;P | lamb Q;P | app;P.
/// Tree-recursive: the lamb command nests a whole program as abstraction body.
class Pro {
 public:
  enum class Kind { Ret, Var, Lam, App };

  static Pro ret() {
    return Pro(std::make_shared<const Node>(Node{Kind::Ret, 0, nullptr, nullptr, 1}));
  }
  static Pro var(Nat index, const Pro& rest) {
    return Pro(std::make_shared<const Node>(Node{Kind::Var, index, nullptr, rest.node_, rest.size() + 1}));
  }
  static Pro lam(const Pro& body, const Pro& rest) {
    return Pro(std::make_shared<const Node>(
        Node{Kind::Lam, 0, body.node_, rest.node_, body.size() + rest.size() + 1}));
  }
  static Pro app(const Pro& rest) {
    return Pro(std::make_shared<const Node>(Node{Kind::App, 0, nullptr, rest.node_, rest.size() + 1}));
  }

  Kind kind() const { return node_->kind; }
  bool is_ret() const { return node_->kind == Kind::Ret; }

  Nat index() const {
    assert(kind() == Kind::Var);
    return node_->index;
  }
  Pro body() const {
    assert(kind() == Kind::Lam);
    return Pro(node_->body);
  }
  Pro rest() const {
    assert(kind() != Kind::Ret);
    return Pro(node_->rest);
  }

  /// Total command count, nested lamb bodies included.
  Nat size() const { return node_->size; }

  friend bool operator==(const Pro& lhs, const Pro& rhs) { return equal(lhs.node_.get(), rhs.node_.get()); }
  friend bool operator!=(const Pro& lhs, const Pro& rhs) { return !(lhs == rhs); }

 private:
  struct Node {
    Kind kind;
    Nat index;
    std::shared_ptr<const Node> body;
    std::shared_ptr<const Node> rest;
    Nat size;
  };

  explicit Pro(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static bool equal(const Node* lhs, const Node* rhs) {
    std::vector<std::pair<const Node*, const Node*>> work{{lhs, rhs}};
    while (!work.empty()) {
      auto [l, r] = work.back();
      work.pop_back();
      if (l == r) continue;
      if (l->kind != r->kind || l->size != r->size) return false;
      switch (l->kind) {
        case Kind::Ret:
          break;
        case Kind::Var:
          if (l->index != r->index) return false;
          work.emplace_back(l->rest.get(), r->rest.get());
          break;
        case Kind::Lam:
          work.emplace_back(l->body.get(), r->body.get());
          work.emplace_back(l->rest.get(), r->rest.get());
          break;
        case Kind::App:
          work.emplace_back(l->rest.get(), r->rest.get());
          break;
      }
    }
    return true;
  }

  std::shared_ptr<const Node> node_;
};

/// Term stack, head at index 0.
using TermStack = std::vector<Term>;

/// Compiles a term in front of a continuation program.
inline Pro compile(const Term& s, const Pro& cont) {
  switch (s.kind()) {
    case Term::Kind::Var:
      return Pro::var(s.index(), cont);
    case Term::Kind::Lam:
      return Pro::lam(compile(s.body(), Pro::ret()), cont);
    case Term::Kind::App:
      return compile(s.fun(), compile(s.arg(), Pro::app(cont)));
  }
  assert(false);
  return cont;
}

inline Pro compile_top(const Term& s) { return compile(s, Pro::ret()); }

/// Runs a program over a term stack. Nothing when a lamb body does not
/// represent a single term or an app command finds fewer than two operands.
inline std::optional<TermStack> decompile(const Pro& p, TermStack stack) {
  switch (p.kind()) {
    case Pro::Kind::Ret:
      return stack;
    case Pro::Kind::Var:
      stack.insert(stack.begin(), Term::var(p.index()));
      return decompile(p.rest(), std::move(stack));
    case Pro::Kind::Lam: {
      auto body = decompile(p.body(), {});
      if (!body || body->size() != 1) return std::nullopt;
      stack.insert(stack.begin(), Term::lam(body->front()));
      return decompile(p.rest(), std::move(stack));
    }
    case Pro::Kind::App: {
      if (stack.size() < 2) return std::nullopt;
      Term t = stack[0];
      Term s = stack[1];
      stack.erase(stack.begin());
      stack[0] = Term::app(s, t);
      return decompile(p.rest(), std::move(stack));
    }
  }
  assert(false);
  return std::nullopt;
}

/// P represents s iff running P on the empty stack yields exactly [s].
inline bool represents(const Pro& p, const Term& s) {
  auto result = decompile(p, {});
  return result && result->size() == 1 && result->front() == s;
}

/// Program substitution P[k:=R]: a matching variable command becomes a lambda
/// command with R as its body.
inline Pro psubst(const Pro& p, Nat k, const Pro& r) {
  switch (p.kind()) {
    case Pro::Kind::Ret:
      return p;
    case Pro::Kind::Var:
      if (p.index() == k) return Pro::lam(r, psubst(p.rest(), k, r));
      return Pro::var(p.index(), psubst(p.rest(), k, r));
    case Pro::Kind::Lam:
      return Pro::lam(psubst(p.body(), k + 1, r), psubst(p.rest(), k, r));
    case Pro::Kind::App:
      return Pro::app(psubst(p.rest(), k, r));
  }
  assert(false);
  return p;
}

/// Bound predicate for programs, mirroring the term-level one.
inline bool pbound(const Pro& p, Nat k) {
  switch (p.kind()) {
    case Pro::Kind::Ret:
      return true;
    case Pro::Kind::Var:
      return p.index() < k && pbound(p.rest(), k);
    case Pro::Kind::Lam:
      return pbound(p.body(), k + 1) && pbound(p.rest(), k);
    case Pro::Kind::App:
      return pbound(p.rest(), k);
  }
  assert(false);
  return false;
}

inline bool pclosed(const Pro& p) { return pbound(p, 0); }

}  // namespace lam
