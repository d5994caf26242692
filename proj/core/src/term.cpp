#include "fractlang/term.hpp"

#include <algorithm>
#include <stdexcept>

#include "fractlang/error.hpp"

namespace fractlang {

namespace {

std::size_t mix(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::shared_ptr<Node> make(NodeKind kind) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  return n;
}

}  // namespace

// ---------------------------------------------------------------------------
// Construction

Expr Expr::bound_var(std::size_t index) {
  auto n = make(NodeKind::kBoundVar);
  n->index = index;
  n->loose = index + 1;
  n->hash = mix(mix(1, index), 0x51);
  return Expr(std::move(n));
}

Expr Expr::free_var(std::string name) {
  auto n = make(NodeKind::kFreeVar);
  n->hash = mix(2, std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::prefix(std::string action, Expr body) {
  if (!body) throw std::invalid_argument("prefix: empty body");
  auto n = make(NodeKind::kPrefix);
  n->hash = mix(mix(3, std::hash<std::string>{}(action)), body.hash());
  n->size = 1 + body.size();
  n->loose = body.node()->loose;
  n->name = std::move(action);
  n->lhs = std::move(body);
  return Expr(std::move(n));
}

Expr Expr::sum(Expr lhs, Expr rhs) {
  if (!lhs || !rhs) throw std::invalid_argument("sum: empty operand");
  auto n = make(NodeKind::kSum);
  n->hash = mix(mix(4, lhs.hash()), rhs.hash());
  n->size = 1 + lhs.size() + rhs.size();
  n->loose = std::max(lhs.node()->loose, rhs.node()->loose);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

Expr Expr::choice(Expr lhs, Rational probability, Expr rhs) {
  if (!lhs || !rhs) throw std::invalid_argument("choice: empty operand");
  auto n = make(NodeKind::kChoice);
  n->hash = mix(mix(mix(5, lhs.hash()), rhs.hash()),
                std::hash<std::string>{}(fractlang::to_string(probability)));
  n->size = 1 + lhs.size() + rhs.size();
  n->loose = std::max(lhs.node()->loose, rhs.node()->loose);
  n->probability = std::move(probability);
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Expr(std::move(n));
}

namespace {

Expr abstract(const Expr& e, std::string_view var, std::size_t depth) {
  switch (e.kind()) {
    case NodeKind::kFreeVar:
      return e.name() == var ? Expr::bound_var(depth) : e;
    case NodeKind::kBoundVar:
      return e;
    case NodeKind::kPrefix:
      return Expr::prefix(e.name(), abstract(e.body(), var, depth));
    case NodeKind::kSum:
      return Expr::sum(abstract(e.lhs(), var, depth), abstract(e.rhs(), var, depth));
    case NodeKind::kChoice:
      return Expr::choice(abstract(e.lhs(), var, depth), e.probability(),
                          abstract(e.rhs(), var, depth));
    case NodeKind::kMu:
      return Expr::mu_abstracted(e.name(), abstract(e.body(), var, depth + 1));
  }
  return e;
}

// Adds `amount` to every index >= cutoff.
Expr shift(const Expr& e, std::size_t amount, std::size_t cutoff) {
  if (amount == 0 || e.node()->loose <= cutoff) return e;
  switch (e.kind()) {
    case NodeKind::kBoundVar:
      return Expr::bound_var(e.index() + amount);
    case NodeKind::kFreeVar:
      return e;
    case NodeKind::kPrefix:
      return Expr::prefix(e.name(), shift(e.body(), amount, cutoff));
    case NodeKind::kSum:
      return Expr::sum(shift(e.lhs(), amount, cutoff), shift(e.rhs(), amount, cutoff));
    case NodeKind::kChoice:
      return Expr::choice(shift(e.lhs(), amount, cutoff), e.probability(),
                          shift(e.rhs(), amount, cutoff));
    case NodeKind::kMu:
      return Expr::mu_abstracted(e.name(), shift(e.body(), amount, cutoff + 1));
  }
  return e;
}

Expr instantiate_at(const Expr& e, const Expr& value, std::size_t depth) {
  if (e.node()->loose <= depth) return e;
  switch (e.kind()) {
    case NodeKind::kBoundVar:
      if (e.index() == depth) return shift(value, depth, 0);
      return Expr::bound_var(e.index() - 1);  // index > depth: an outer binder
    case NodeKind::kFreeVar:
      return e;
    case NodeKind::kPrefix:
      return Expr::prefix(e.name(), instantiate_at(e.body(), value, depth));
    case NodeKind::kSum:
      return Expr::sum(instantiate_at(e.lhs(), value, depth),
                       instantiate_at(e.rhs(), value, depth));
    case NodeKind::kChoice:
      return Expr::choice(instantiate_at(e.lhs(), value, depth), e.probability(),
                          instantiate_at(e.rhs(), value, depth));
    case NodeKind::kMu:
      return Expr::mu_abstracted(e.name(), instantiate_at(e.body(), value, depth + 1));
  }
  return e;
}

Expr substitute_at(const Expr& e, const Expr& g, std::string_view var, std::size_t depth) {
  switch (e.kind()) {
    case NodeKind::kFreeVar:
      return e.name() == var ? shift(g, depth, 0) : e;
    case NodeKind::kBoundVar:
      return e;
    case NodeKind::kPrefix:
      return Expr::prefix(e.name(), substitute_at(e.body(), g, var, depth));
    case NodeKind::kSum:
      return Expr::sum(substitute_at(e.lhs(), g, var, depth), substitute_at(e.rhs(), g, var, depth));
    case NodeKind::kChoice:
      return Expr::choice(substitute_at(e.lhs(), g, var, depth), e.probability(),
                          substitute_at(e.rhs(), g, var, depth));
    case NodeKind::kMu:
      return Expr::mu_abstracted(e.name(), substitute_at(e.body(), g, var, depth + 1));
  }
  return e;
}

}  // namespace

Expr Expr::mu(std::string var, const Expr& body) {
  if (!body) throw std::invalid_argument("mu: empty body");
  Expr abstracted = abstract(body, var, 0);
  return mu_abstracted(std::move(var), std::move(abstracted));
}

Expr Expr::mu_abstracted(std::string hint, Expr body) {
  if (!body) throw std::invalid_argument("mu: empty body");
  auto n = make(NodeKind::kMu);
  n->hash = mix(6, body.hash());
  n->size = 1 + body.size();
  n->loose = body.node()->loose > 0 ? body.node()->loose - 1 : 0;
  n->name = std::move(hint);
  n->lhs = std::move(body);
  return Expr(std::move(n));
}

// ---------------------------------------------------------------------------
// Accessors

NodeKind Expr::kind() const { return node_->kind; }
const std::string& Expr::name() const { return node_->name; }
std::size_t Expr::index() const { return node_->index; }
const Rational& Expr::probability() const { return node_->probability; }
const Expr& Expr::lhs() const { return node_->lhs; }
const Expr& Expr::rhs() const { return node_->rhs; }
std::size_t Expr::size() const { return node_->size; }
std::size_t Expr::hash() const { return node_->hash; }
bool Expr::locally_closed() const { return node_->loose == 0; }

// ---------------------------------------------------------------------------
// Equality and substitution

bool alpha_eq(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return true;
  if (!a || !b) return false;
  if (a.hash() != b.hash() || a.size() != b.size() || a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case NodeKind::kBoundVar:
      return a.index() == b.index();
    case NodeKind::kFreeVar:
      return a.name() == b.name();
    case NodeKind::kPrefix:
      return a.name() == b.name() && alpha_eq(a.body(), b.body());
    case NodeKind::kSum:
      return alpha_eq(a.lhs(), b.lhs()) && alpha_eq(a.rhs(), b.rhs());
    case NodeKind::kChoice:
      return a.probability() == b.probability() && alpha_eq(a.lhs(), b.lhs()) &&
             alpha_eq(a.rhs(), b.rhs());
    case NodeKind::kMu:
      return alpha_eq(a.body(), b.body());
  }
  return false;
}

Expr instantiate(const Expr& mu_body, const Expr& value) { return instantiate_at(mu_body, value, 0); }

Expr unfold(const Expr& mu) {
  if (mu.kind() != NodeKind::kMu) throw std::invalid_argument("unfold: not a mu expression");
  return instantiate(mu.body(), mu);
}

Expr substitute(const Expr& e, const Expr& g, std::string_view var) {
  if (!occurs_free(e, var)) return e;
  return substitute_at(e, g, var, 0);
}

// ---------------------------------------------------------------------------
// Queries

namespace {

template <class F>
void visit(const Expr& e, F&& f) {
  f(e);
  switch (e.kind()) {
    case NodeKind::kPrefix:
    case NodeKind::kMu:
      visit(e.body(), f);
      break;
    case NodeKind::kSum:
    case NodeKind::kChoice:
      visit(e.lhs(), f);
      visit(e.rhs(), f);
      break;
    default:
      break;
  }
}

}  // namespace

std::set<std::string> free_vars(const Expr& e) {
  std::set<std::string> out;
  visit(e, [&](const Expr& n) {
    if (n.kind() == NodeKind::kFreeVar) out.insert(n.name());
  });
  return out;
}

std::set<std::string> binder_names(const Expr& e) {
  std::set<std::string> out;
  visit(e, [&](const Expr& n) {
    if (n.kind() == NodeKind::kMu) out.insert(n.name());
  });
  return out;
}

std::set<std::string> actions(const Expr& e) {
  std::set<std::string> out;
  visit(e, [&](const Expr& n) {
    if (n.kind() == NodeKind::kPrefix) out.insert(n.name());
  });
  return out;
}

bool occurs_free(const Expr& e, std::string_view var) {
  bool found = false;
  visit(e, [&](const Expr& n) {
    if (n.kind() == NodeKind::kFreeVar && n.name() == var) found = true;
  });
  return found;
}

bool is_closed(const Expr& e) { return e.locally_closed() && free_vars(e).empty(); }

bool contains_kind(const Expr& e, NodeKind kind) {
  bool found = false;
  visit(e, [&](const Expr& n) {
    if (n.kind() == kind) found = true;
  });
  return found;
}

namespace {

struct Binder {
  std::string name;
  std::size_t prefixes_at_binding;
};

std::optional<Violation> violation_at(const Expr& e, std::vector<Binder>& scope,
                                      std::size_t prefixes) {
  switch (e.kind()) {
    case NodeKind::kFreeVar:
      return Violation{false, e.name()};
    case NodeKind::kBoundVar: {
      if (e.index() >= scope.size()) return Violation{false, "#" + std::to_string(e.index())};
      const Binder& b = scope[scope.size() - 1 - e.index()];
      if (prefixes <= b.prefixes_at_binding) return Violation{true, b.name};
      return std::nullopt;
    }
    case NodeKind::kPrefix:
      return violation_at(e.body(), scope, prefixes + 1);
    case NodeKind::kSum:
    case NodeKind::kChoice:
      if (auto v = violation_at(e.lhs(), scope, prefixes)) return v;
      return violation_at(e.rhs(), scope, prefixes);
    case NodeKind::kMu: {
      scope.push_back({e.name(), prefixes});
      auto v = violation_at(e.body(), scope, prefixes);
      scope.pop_back();
      return v;
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<Violation> find_violation(const Expr& e) {
  std::vector<Binder> scope;
  return violation_at(e, scope, 0);
}

void check_well_formed(const Expr& e) {
  if (auto v = find_violation(e)) {
    throw WellFormednessError(v->unguarded ? WellFormedness::kUnguarded : WellFormedness::kFreeVariable,
                              v->variable, SourcePos{0, 0});
  }
}

// ---------------------------------------------------------------------------
// Positions

Expr subterm_at(const Expr& e, std::span<const int> path) {
  Expr cur = e;
  for (int step : path) {
    switch (cur.kind()) {
      case NodeKind::kPrefix:
      case NodeKind::kMu:
        if (step != 0) return {};
        cur = cur.body();
        break;
      case NodeKind::kSum:
      case NodeKind::kChoice:
        if (step == 0) {
          cur = cur.lhs();
        } else if (step == 1) {
          cur = cur.rhs();
        } else {
          return {};
        }
        break;
      default:
        return {};
    }
  }
  return cur;
}

Expr replace_at(const Expr& e, std::span<const int> path, const Expr& replacement) {
  if (path.empty()) return replacement;
  const int step = path.front();
  const auto rest = path.subspan(1);
  switch (e.kind()) {
    case NodeKind::kPrefix:
      if (step != 0) break;
      return Expr::prefix(e.name(), replace_at(e.body(), rest, replacement));
    case NodeKind::kMu:
      if (step != 0) break;
      return Expr::mu_abstracted(e.name(), replace_at(e.body(), rest, replacement));
    case NodeKind::kSum:
      if (step == 0) return Expr::sum(replace_at(e.lhs(), rest, replacement), e.rhs());
      if (step == 1) return Expr::sum(e.lhs(), replace_at(e.rhs(), rest, replacement));
      break;
    case NodeKind::kChoice:
      if (step == 0) return Expr::choice(replace_at(e.lhs(), rest, replacement), e.probability(), e.rhs());
      if (step == 1) return Expr::choice(e.lhs(), e.probability(), replace_at(e.rhs(), rest, replacement));
      break;
    default:
      break;
  }
  throw std::out_of_range("replace_at: path does not address a subterm");
}

// ---------------------------------------------------------------------------
// Printing

namespace {

class Printer {
 public:
  explicit Printer(const Expr& root) : reserved_(free_vars(root)) {}

  std::string print(const Expr& e) {
    std::string out;
    term(e, out);
    return out;
  }

 private:
  void term(const Expr& e, std::string& out) {
    switch (e.kind()) {
      case NodeKind::kMu: {
        std::string name = fresh(e.name());
        out += "mu " + name + ". ";
        scope_.push_back(std::move(name));
        term(e.body(), out);
        scope_.pop_back();
        break;
      }
      case NodeKind::kSum:
      case NodeKind::kChoice:
        summand(e.lhs(), e.kind(), /*right=*/false, out);
        if (e.kind() == NodeKind::kSum) {
          out += " + ";
        } else {
          out += " +[" + fractlang::to_string(e.probability()) + "] ";
        }
        summand(e.rhs(), e.kind(), /*right=*/true, out);
        break;
      default:
        simple(e, out);
        break;
    }
  }

  void summand(const Expr& e, NodeKind parent, bool right, std::string& out) {
    const bool bare = (e.kind() == parent && !right) || e.kind() == NodeKind::kPrefix ||
                      e.kind() == NodeKind::kBoundVar || e.kind() == NodeKind::kFreeVar;
    if (bare) {
      term(e, out);
    } else {
      out += '(';
      term(e, out);
      out += ')';
    }
  }

  void simple(const Expr& e, std::string& out) {
    switch (e.kind()) {
      case NodeKind::kBoundVar:
        if (e.index() < scope_.size()) {
          out += scope_[scope_.size() - 1 - e.index()];
        } else {
          out += "#" + std::to_string(e.index());
        }
        break;
      case NodeKind::kFreeVar:
        out += e.name();
        break;
      case NodeKind::kPrefix: {
        out += e.name();
        out += '.';
        const Expr& b = e.body();
        if (b.kind() == NodeKind::kPrefix || b.kind() == NodeKind::kBoundVar ||
            b.kind() == NodeKind::kFreeVar) {
          simple(b, out);
        } else {
          out += '(';
          term(b, out);
          out += ')';
        }
        break;
      }
      default:
        term(e, out);
        break;
    }
  }

  bool taken(const std::string& name) const {
    if (name.empty() || name == "mu") return true;
    if (reserved_.count(name) != 0) return true;
    return std::find(scope_.begin(), scope_.end(), name) != scope_.end();
  }

  std::string fresh(const std::string& hint) {
    const std::string base = hint.empty() ? std::string("v") : hint;
    if (!taken(base)) return base;
    for (std::size_t i = 1;; ++i) {
      std::string candidate = base + std::to_string(i);
      if (!taken(candidate)) return candidate;
    }
  }

  std::set<std::string> reserved_;
  std::vector<std::string> scope_;
};

}  // namespace

std::string to_string(const Expr& e) { return Printer(e).print(e); }

// ---------------------------------------------------------------------------

Term::Term(Expr e) : expr_(std::move(e)) {
  if (!expr_) throw std::invalid_argument("Term: empty expression");
  if (contains_kind(expr_, NodeKind::kChoice)) {
    throw std::invalid_argument("Term: probabilistic choice in a classic term");
  }
}

PTerm::PTerm(Expr e) : expr_(std::move(e)) {
  if (!expr_) throw std::invalid_argument("PTerm: empty expression");
  if (contains_kind(expr_, NodeKind::kSum)) {
    throw std::invalid_argument("PTerm: nondeterministic sum in a probabilistic term");
  }
}

}  // namespace fractlang
