#include "fractlang/proof.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <sstream>
#include <tuple>

#include "fractlang/error.hpp"

namespace fractlang {

namespace {

constexpr std::array<std::pair<Rule, const char*>, 12> kRuleNames{{
    {Rule::kID, "ID"},
    {Rule::kCM, "CM"},
    {Rule::kAS, "AS"},
    {Rule::kDS, "DS"},
    {Rule::kFP, "FP"},
    {Rule::kCN, "CN"},
    {Rule::kAE, "AE"},
    {Rule::kUA, "UA"},
    {Rule::kRefl, "Refl"},
    {Rule::kSym, "Sym"},
    {Rule::kTrans, "Trans"},
    {Rule::kCong, "Cong"},
}};

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void malformed(std::size_t line, const std::string& what) {
  throw MalformedDerivation("line " + std::to_string(line) + ": " + what);
}

std::size_t parse_id(const std::string& text, std::size_t line) {
  if (text.empty() || !std::all_of(text.begin(), text.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    malformed(line, "expected a step number, found '" + text + "'");
  }
  return static_cast<std::size_t>(std::stoull(text));
}

Expr parse_side(const std::string& text, ProofSystem system, std::size_t line, const ParseOptions& opts = {}) {
  try {
    return parse_expr(text, flavor_of(system), opts);
  } catch (const Error& e) {
    malformed(line, std::string("bad term '") + text + "': " + e.what());
  }
}

std::pair<Expr, Expr> parse_equation(const std::string& text, ProofSystem system, std::size_t line) {
  const auto eq = text.find("==");
  if (eq == std::string::npos) malformed(line, "expected '<lhs> == <rhs>'");
  return {parse_side(trim(text.substr(0, eq)), system, line), parse_side(trim(text.substr(eq + 2)), system, line)};
}

// Start of the trailing `[key=...]` block. Terms never contain `[path=`,
// `[ctx=` or `[vars=`, so the earliest such marker is unambiguous.
std::size_t instantiation_start(const std::string& s) {
  std::size_t best = std::string::npos;
  for (const char* key : {"[path=", "[ctx=", "[vars="}) {
    best = std::min(best, s.find(key));
  }
  return best;
}

void parse_instantiation(std::string block, Step& step, ProofSystem system) {
  // block is "[k=v, k=v]"
  block = trim(block);
  if (block.size() < 2 || block.back() != ']') malformed(step.line, "unterminated instantiation block");
  block = block.substr(1, block.size() - 2);
  std::stringstream ss(block);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) malformed(step.line, "expected key=value in instantiation");
    const std::string key = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    if (key == "path") {
      step.path.clear();
      if (value.empty() || value == "-") continue;
      std::stringstream ps(value);
      std::string comp;
      while (std::getline(ps, comp, '.')) {
        if (comp != "0" && comp != "1") malformed(step.line, "path components must be 0 or 1");
        step.path.push_back(comp == "0" ? 0 : 1);
      }
    } else if (key == "ctx") {
      step.context = parse_side(value, system, step.line, ParseOptions{false, false});
    } else if (key == "vars") {
      std::stringstream vs(value);
      std::string v;
      while (vs >> v) step.holes.push_back(v);
    } else {
      malformed(step.line, "unknown instantiation key '" + key + "'");
    }
  }
}

// ---------------------------------------------------------------------------
// Rule checks. Each returns an empty string on success.

bool is(const Expr& e, NodeKind k) { return e.kind() == k; }

std::string classic_axiom(Rule rule, const Expr& l, const Expr& r) {
  switch (rule) {
    case Rule::kID:
      if (is(l, NodeKind::kSum) && alpha_eq(l.lhs(), l.rhs()) && alpha_eq(l.lhs(), r)) return {};
      return "not an instance of e + e == e";
    case Rule::kCM:
      if (is(l, NodeKind::kSum) && is(r, NodeKind::kSum) && alpha_eq(l.lhs(), r.rhs()) && alpha_eq(l.rhs(), r.lhs())) {
        return {};
      }
      return "not an instance of e2 + e1 == e1 + e2";
    case Rule::kAS:
      if (is(l, NodeKind::kSum) && is(l.rhs(), NodeKind::kSum) && is(r, NodeKind::kSum) && is(r.lhs(), NodeKind::kSum) &&
          alpha_eq(l.lhs(), r.lhs().lhs()) && alpha_eq(l.rhs().lhs(), r.lhs().rhs()) && alpha_eq(l.rhs().rhs(), r.rhs())) {
        return {};
      }
      return "not an instance of e1 + (e2 + e3) == (e1 + e2) + e3";
    case Rule::kDS:
      if (is(l, NodeKind::kPrefix) && is(l.body(), NodeKind::kSum) && is(r, NodeKind::kSum) &&
          is(r.lhs(), NodeKind::kPrefix) && is(r.rhs(), NodeKind::kPrefix) && r.lhs().name() == l.name() &&
          r.rhs().name() == l.name() && alpha_eq(l.body().lhs(), r.lhs().body()) &&
          alpha_eq(l.body().rhs(), r.rhs().body())) {
        return {};
      }
      return "not an instance of a(e1 + e2) == ae1 + ae2";
    default:
      return "not an axiom";
  }
}

std::string prob_axiom(Rule rule, const Expr& l, const Expr& r) {
  switch (rule) {
    case Rule::kID:
      if (is(l, NodeKind::kChoice) && alpha_eq(l.lhs(), l.rhs()) && alpha_eq(l.lhs(), r)) return {};
      return "not an instance of e +[r] e == e";
    case Rule::kCM:
      if (is(l, NodeKind::kChoice) && is(r, NodeKind::kChoice) && alpha_eq(l.lhs(), r.rhs()) &&
          alpha_eq(l.rhs(), r.lhs()) && r.probability() == 1 - l.probability()) {
        return {};
      }
      return "not an instance of e1 +[r] e2 == e2 +[1-r] e1";
    case Rule::kAS: {
      if (!(is(l, NodeKind::kChoice) && is(l.lhs(), NodeKind::kChoice) && is(r, NodeKind::kChoice) &&
            is(r.rhs(), NodeKind::kChoice) && alpha_eq(l.lhs().lhs(), r.lhs()) &&
            alpha_eq(l.lhs().rhs(), r.rhs().lhs()) && alpha_eq(l.rhs(), r.rhs().rhs()))) {
        return "not an instance of (e1 +[r] e2) +[s] e3 == e1 +[rs] (e2 +[s(1-r)/(1-rs)] e3)";
      }
      const Rational& pr = l.lhs().probability();
      const Rational& ps = l.probability();
      const Rational rs = pr * ps;
      if (rs == 1) return "AS side condition rs != 1 violated (r = s = 1); the axiom is undefined here";
      if (r.probability() != rs) {
        return "outer probability must be rs = " + to_string(rs) + ", found " + to_string(r.probability());
      }
      const Rational inner = ps * (1 - pr) / (1 - rs);
      if (r.rhs().probability() != inner) {
        return "inner probability must be s(1-r)/(1-rs) = " + to_string(inner) + ", found " +
               to_string(r.rhs().probability());
      }
      return {};
    }
    case Rule::kDS:
      if (is(l, NodeKind::kPrefix) && is(l.body(), NodeKind::kChoice) && is(r, NodeKind::kChoice) &&
          is(r.lhs(), NodeKind::kPrefix) && is(r.rhs(), NodeKind::kPrefix) && r.lhs().name() == l.name() &&
          r.rhs().name() == l.name() && r.probability() == l.body().probability() &&
          alpha_eq(l.body().lhs(), r.lhs().body()) && alpha_eq(l.body().rhs(), r.rhs().body())) {
        return {};
      }
      return "not an instance of a(e1 +[r] e2) == ae1 +[r] ae2";
    default:
      return "not an axiom";
  }
}

std::string fixed_point(const Expr& l, const Expr& r) {
  if (is(l, NodeKind::kMu) && alpha_eq(unfold(l), r)) return {};
  return "not an instance of mu v e == e[mu v e/v]";
}

// Axioms are equations, so either orientation is accepted. When neither
// matches, the first orientation's diagnosis is reported unless only the
// second one got as far as a side condition.
std::string axiom(Rule rule, const Expr& l, const Expr& r, ProofSystem system) {
  auto one = [&](const Expr& a, const Expr& b) {
    if (rule == Rule::kFP) return fixed_point(a, b);
    return system == ProofSystem::kClassic ? classic_axiom(rule, a, b) : prob_axiom(rule, a, b);
  };
  const std::string forward = one(l, r);
  if (forward.empty()) return {};
  const std::string backward = one(r, l);
  if (backward.empty()) return {};
  if (forward.rfind("not an instance", 0) == 0 && backward.rfind("not an instance", 0) != 0) return backward;
  return forward;
}

}  // namespace

std::string to_string(Rule rule) {
  for (const auto& [r, name] : kRuleNames) {
    if (r == rule) return name;
  }
  return "?";
}

std::optional<Rule> rule_from_string(std::string_view name) {
  for (const auto& [r, n] : kRuleNames) {
    if (name == n) return r;
  }
  return std::nullopt;
}

Derivation parse_derivation(std::string_view text, ProofSystem system) {
  Derivation d;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const auto colon = line.find(':');
    if (colon == std::string::npos) malformed(lineno, "expected '<id>:' or 'goal:'");
    const std::string head = trim(line.substr(0, colon));
    std::string rest = trim(line.substr(colon + 1));
    if (head == "goal") {
      if (d.goal) malformed(lineno, "duplicate goal");
      d.goal = parse_equation(rest, system, lineno);
      continue;
    }
    Step step;
    step.line = lineno;
    step.id = parse_id(head, lineno);
    const auto open = rest.find('(');
    const auto close = rest.find(')');
    if (open == std::string::npos || close == std::string::npos || close < open) {
      malformed(lineno, "expected '<RULE>(<premises>)'");
    }
    const std::string rule_name = trim(rest.substr(0, open));
    const auto rule = rule_from_string(rule_name);
    if (!rule) malformed(lineno, "unknown rule '" + rule_name + "'");
    step.rule = *rule;
    std::stringstream ps(rest.substr(open + 1, close - open - 1));
    std::string prem;
    while (std::getline(ps, prem, ',')) {
      prem = trim(prem);
      if (!prem.empty()) step.premises.push_back(parse_id(prem, lineno));
    }
    rest = rest.substr(close + 1);
    const auto inst = instantiation_start(rest);
    if (inst != std::string::npos) {
      parse_instantiation(rest.substr(inst), step, system);
      rest = rest.substr(0, inst);
    }
    std::tie(step.lhs, step.rhs) = parse_equation(rest, system, lineno);
    d.steps.push_back(std::move(step));
  }
  if (d.steps.empty()) throw MalformedDerivation("derivation has no steps");
  return d;
}

Verdict check(const Derivation& derivation, ProofSystem system) {
  std::map<std::size_t, const Step*> proved;
  auto premise = [&](const Step& s, std::size_t k) -> const Step& {
    const auto it = proved.find(s.premises[k]);
    if (it == proved.end()) {
      throw MalformedDerivation("step " + std::to_string(s.id) + " cites step " + std::to_string(s.premises[k]) +
                                ", which is not an earlier step");
    }
    return *it->second;
  };
  auto arity = [&](const Step& s, std::size_t n) {
    if (s.premises.size() != n) {
      throw MalformedDerivation("step " + std::to_string(s.id) + ": rule " + to_string(s.rule) + " takes " +
                                std::to_string(n) + " premise(s), found " + std::to_string(s.premises.size()));
    }
  };
  const ProofSystem sys = system;

  for (const Step& s : derivation.steps) {
    if (proved.count(s.id) != 0) throw MalformedDerivation("duplicate step id " + std::to_string(s.id));
    for (const Expr* side : {&s.lhs, &s.rhs}) {
      if (!*side) throw MalformedDerivation("step " + std::to_string(s.id) + " is missing a side");
      if (auto v = find_violation(*side)) {
        return {false, s.id, std::string("step terms must be closed and guarded; offending variable '") + v->variable + "'"};
      }
      const bool wrong_flavor = sys == ProofSystem::kClassic ? contains_kind(*side, NodeKind::kChoice)
                                                             : contains_kind(*side, NodeKind::kSum);
      if (wrong_flavor) return {false, s.id, "term does not belong to this proof system"};
    }

    std::string why;
    switch (s.rule) {
      case Rule::kID:
      case Rule::kCM:
      case Rule::kAS:
      case Rule::kDS:
      case Rule::kFP:
        arity(s, 0);
        why = axiom(s.rule, s.lhs, s.rhs, sys);
        break;
      case Rule::kAE:
        arity(s, 0);
        if (!(is(s.lhs, NodeKind::kMu) && is(s.rhs, NodeKind::kMu) && alpha_eq(s.lhs, s.rhs))) {
          why = "not an instance of mu w e == mu v e[v/w] with v not free in e";
        }
        break;
      case Rule::kRefl:
        arity(s, 0);
        if (!alpha_eq(s.lhs, s.rhs)) why = "sides differ";
        break;
      case Rule::kSym: {
        arity(s, 1);
        const Step& p = premise(s, 0);
        if (!(alpha_eq(p.lhs, s.rhs) && alpha_eq(p.rhs, s.lhs))) why = "conclusion is not the premise reversed";
        break;
      }
      case Rule::kTrans: {
        arity(s, 2);
        const Step& p = premise(s, 0);
        const Step& q = premise(s, 1);
        if (!alpha_eq(p.rhs, q.lhs)) {
          why = "premises do not chain: middle terms differ";
        } else if (!(alpha_eq(p.lhs, s.lhs) && alpha_eq(q.rhs, s.rhs))) {
          why = "conclusion does not match the outer terms of the premises";
        }
        break;
      }
      case Rule::kCong: {
        arity(s, 1);
        const Step& p = premise(s, 0);
        const Expr at_l = subterm_at(s.lhs, s.path);
        const Expr at_r = subterm_at(s.rhs, s.path);
        if (!at_l || !at_r) {
          why = "path does not address a subterm on both sides";
        } else if (!alpha_eq(at_l, p.lhs) || !alpha_eq(at_r, p.rhs)) {
          why = "subterms at the path are not the premise's sides";
        } else if (!alpha_eq(replace_at(s.lhs, s.path, p.rhs), s.rhs)) {
          why = "sides differ outside the rewritten position";
        }
        break;
      }
      case Rule::kCN: {
        if (!s.context) throw MalformedDerivation("step " + std::to_string(s.id) + ": CN needs [ctx=..., vars=...]");
        if (s.holes.size() != s.premises.size()) {
          throw MalformedDerivation("step " + std::to_string(s.id) + ": CN needs one premise per hole variable");
        }
        const auto fv = free_vars(s.context);
        const std::set<std::string> holes(s.holes.begin(), s.holes.end());
        if (fv != holes || holes.size() != s.holes.size()) {
          why = "context must have precisely the hole variables free";
          break;
        }
        const auto bound = binder_names(s.context);
        Expr left = s.context;
        Expr right = s.context;
        for (std::size_t k = 0; k < s.holes.size() && why.empty(); ++k) {
          const Step& p = premise(s, k);
          for (const auto& v : free_vars(p.rhs)) {
            if (bound.count(v) != 0) why = "variable '" + v + "' free in a premise is bound in the context";
          }
          left = substitute(left, p.lhs, s.holes[k]);
          right = substitute(right, p.rhs, s.holes[k]);
        }
        if (why.empty() && !(alpha_eq(left, s.lhs) && alpha_eq(right, s.rhs))) {
          why = "conclusion is not g[e/v] == g[f/v]";
        }
        break;
      }
      case Rule::kUA: {
        arity(s, 1);
        const Step& p = premise(s, 0);
        if (!is(s.rhs, NodeKind::kMu)) {
          why = "right-hand side must be a mu term";
        } else if (!alpha_eq(p.lhs, s.lhs)) {
          why = "premise must have the same left-hand side g";
        } else if (!alpha_eq(p.rhs, instantiate(s.rhs.body(), s.lhs))) {
          why = "premise right-hand side is not e[g/v]";
        }
        break;
      }
    }
    if (!why.empty()) return {false, s.id, to_string(s.rule) + ": " + why};
    proved.emplace(s.id, &s);
  }

  const Step& last = derivation.steps.back();
  if (derivation.goal) {
    if (!(alpha_eq(derivation.goal->first, last.lhs) && alpha_eq(derivation.goal->second, last.rhs))) {
      return {false, last.id, "last step does not conclude the goal"};
    }
  }
  return {true, 0, {}};
}

}  // namespace fractlang
