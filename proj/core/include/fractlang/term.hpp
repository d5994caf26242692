#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fractlang/rational.hpp"

namespace fractlang {

enum class NodeKind : unsigned char {
  kBoundVar,  // de Bruijn index, counted outwards from the nearest binder
  kFreeVar,
  kPrefix,
  kSum,
  kChoice,
  kMu,
};

struct Node;

/// Immutable, shareable process expression in locally nameless form.
///
/// Bound variables are de Bruijn indices; free variables keep their names.
/// A `mu` node remembers the surface name of its binder only as a printing
/// hint, so structural equality of two `Expr`s is exactly alpha-equivalence.
/// Both classic terms (`+`) and probabilistic terms (`+[r]`) share this
/// representation; `Term` and `PTerm` below restrict which nodes may occur.
class Expr {
 public:
  Expr() = default;

  static Expr bound_var(std::size_t index);
  static Expr free_var(std::string name);
  static Expr prefix(std::string action, Expr body);
  static Expr sum(Expr lhs, Expr rhs);
  static Expr choice(Expr lhs, Rational probability, Expr rhs);
  // Binds the free occurrences of `var` in `body`.
  static Expr mu(std::string var, const Expr& body);
  // `body` is already abstracted: index 0 at binder depth 0 refers to this mu.
  static Expr mu_abstracted(std::string hint, Expr body);

  explicit operator bool() const noexcept { return node_ != nullptr; }

  NodeKind kind() const;
  // Action label, free variable name, or binder hint depending on kind.
  const std::string& name() const;
  std::size_t index() const;
  const Rational& probability() const;
  // Prefix and mu bodies live in lhs().
  const Expr& lhs() const;
  const Expr& rhs() const;
  const Expr& body() const { return lhs(); }

  std::size_t size() const;
  std::size_t hash() const;
  // No dangling de Bruijn indices.
  bool locally_closed() const;

  const Node* node() const noexcept { return node_.get(); }

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  NodeKind kind{};
  std::string name;
  std::size_t index = 0;
  Rational probability;
  Expr lhs;
  Expr rhs;
  std::size_t hash = 0;
  std::size_t size = 1;
  std::size_t loose = 0;  // 1 + largest dangling index, 0 when locally closed
};

bool alpha_eq(const Expr& a, const Expr& b);

struct AlphaHash {
  std::size_t operator()(const Expr& e) const noexcept { return e.hash(); }
};
struct AlphaEqual {
  bool operator()(const Expr& a, const Expr& b) const { return alpha_eq(a, b); }
};

// Replaces the binder-0 occurrences of an abstracted mu body by `value`.
// `value` must be locally closed.
Expr instantiate(const Expr& mu_body, const Expr& value);

// mu v e  ->  e[mu v e / v]
Expr unfold(const Expr& mu);

// e[g/v]: every free occurrence of `var` in `e` replaced by `g`.
// Binders cannot capture in locally nameless form, so no renaming is needed.
Expr substitute(const Expr& e, const Expr& g, std::string_view var);

std::set<std::string> free_vars(const Expr& e);
std::set<std::string> binder_names(const Expr& e);
std::set<std::string> actions(const Expr& e);
bool occurs_free(const Expr& e, std::string_view var);
bool is_closed(const Expr& e);
bool contains_kind(const Expr& e, NodeKind kind);

// First violation of closedness or guardedness, if any. `variable` receives
// the offending name (bound variables report their binder hint).
struct Violation {
  bool unguarded = false;  // false => free variable
  std::string variable;
};
std::optional<Violation> find_violation(const Expr& e);
// Throws WellFormednessError on the first violation.
void check_well_formed(const Expr& e);

// Child positions: 0 = lhs/body, 1 = rhs.
using Path = std::vector<int>;
// Returns an empty Expr if the path does not exist.
Expr subterm_at(const Expr& e, std::span<const int> path);
Expr replace_at(const Expr& e, std::span<const int> path, const Expr& replacement);

// Concrete syntax; binder names are freshened when a hint would capture or
// shadow, so the output always reparses to an alpha-equivalent expression.
std::string to_string(const Expr& e);

/// Classic process term: no probabilistic choice nodes.
class Term {
 public:
  Term() = default;
  explicit Term(Expr e);
  const Expr& expr() const noexcept { return expr_; }
  friend bool operator==(const Term& a, const Term& b) { return alpha_eq(a.expr_, b.expr_); }

 private:
  Expr expr_;
};

/// Probabilistic process term: `+[r]` instead of `+`.
class PTerm {
 public:
  PTerm() = default;
  explicit PTerm(Expr e);
  const Expr& expr() const noexcept { return expr_; }
  friend bool operator==(const PTerm& a, const PTerm& b) { return alpha_eq(a.expr_, b.expr_); }

 private:
  Expr expr_;
};

inline bool alpha_eq(const Term& a, const Term& b) { return a == b; }
inline bool alpha_eq(const PTerm& a, const PTerm& b) { return a == b; }
inline std::string to_string(const Term& t) { return to_string(t.expr()); }
inline std::string to_string(const PTerm& t) { return to_string(t.expr()); }

inline Term substitute(const Term& e, const Term& g, std::string_view var) {
  return Term(substitute(e.expr(), g.expr(), var));
}
inline PTerm substitute(const PTerm& e, const PTerm& g, std::string_view var) {
  return PTerm(substitute(e.expr(), g.expr(), var));
}

}  // namespace fractlang
