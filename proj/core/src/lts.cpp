#include "fractlang/lts.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "fractlang/error.hpp"
#include "fractlang/parser.hpp"

namespace fractlang {

namespace {

void collect_steps(const Expr& e, std::vector<std::pair<std::string, Expr>>& out) {
  switch (e.kind()) {
    case NodeKind::kPrefix: {
      const auto dup = std::find_if(out.begin(), out.end(), [&](const auto& s) {
        return s.first == e.name() && alpha_eq(s.second, e.body());
      });
      if (dup == out.end()) out.emplace_back(e.name(), e.body());
      break;
    }
    case NodeKind::kSum:
      collect_steps(e.lhs(), out);
      collect_steps(e.rhs(), out);
      break;
    case NodeKind::kMu:
      collect_steps(unfold(e), out);
      break;
    case NodeKind::kChoice:
      throw std::invalid_argument("step: probabilistic choice in a classic term");
    case NodeKind::kBoundVar:
    case NodeKind::kFreeVar:
      throw std::invalid_argument("step: term is not closed and guarded");
  }
}

struct Weighted {
  std::string action;
  Expr target;
  Rational weight;
};

void collect_prob(const Expr& e, const Rational& weight, std::vector<Weighted>& out) {
  if (weight == 0) return;
  switch (e.kind()) {
    case NodeKind::kPrefix: {
      const auto dup = std::find_if(out.begin(), out.end(), [&](const Weighted& w) {
        return w.action == e.name() && alpha_eq(w.target, e.body());
      });
      if (dup == out.end()) {
        out.push_back({e.name(), e.body(), weight});
      } else {
        dup->weight += weight;
      }
      break;
    }
    case NodeKind::kChoice:
      collect_prob(e.lhs(), weight * e.probability(), out);
      collect_prob(e.rhs(), weight * (1 - e.probability()), out);
      break;
    case NodeKind::kMu:
      collect_prob(unfold(e), weight, out);
      break;
    case NodeKind::kSum:
      throw std::invalid_argument("step_prob: nondeterministic sum in a probabilistic term");
    case NodeKind::kBoundVar:
    case NodeKind::kFreeVar:
      throw std::invalid_argument("step_prob: term is not closed and guarded");
  }
}

std::vector<std::string> sorted_alphabet(const std::set<std::string>& names) {
  return {names.begin(), names.end()};
}

std::size_t index_of(const std::vector<std::string>& alphabet, const std::string& a) {
  return static_cast<std::size_t>(std::lower_bound(alphabet.begin(), alphabet.end(), a) - alphabet.begin());
}

void check_reachable(std::size_t n, std::size_t root, const std::vector<std::vector<std::size_t>>& succ) {
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> queue{root};
  seen[root] = true;
  while (!queue.empty()) {
    const std::size_t s = queue.front();
    queue.pop_front();
    for (std::size_t t : succ[s]) {
      if (!seen[t]) {
        seen[t] = true;
        queue.push_back(t);
      }
    }
  }
  for (std::size_t s = 0; s < n; ++s) {
    if (!seen[s]) throw std::invalid_argument("state " + std::to_string(s) + " is unreachable from the root");
  }
}

std::vector<std::string> default_labels(std::size_t n, std::vector<std::string> labels) {
  if (labels.empty()) {
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back("s" + std::to_string(i));
  }
  if (labels.size() != n) throw std::invalid_argument("label count does not match state count");
  return labels;
}

}  // namespace

std::vector<Successor> step(const Term& e) {
  std::vector<std::pair<std::string, Expr>> raw;
  collect_steps(e.expr(), raw);
  std::vector<Successor> out;
  out.reserve(raw.size());
  for (auto& [a, t] : raw) out.push_back({std::move(a), Term(std::move(t))});
  return out;
}

std::vector<ProbSuccessor> step_prob(const PTerm& e) {
  std::vector<Weighted> raw;
  collect_prob(e.expr(), Rational(1), raw);
  std::vector<ProbSuccessor> out;
  out.reserve(raw.size());
  for (auto& w : raw) {
    if (w.weight == 0) continue;
    out.push_back({std::move(w.action), PTerm(std::move(w.target)), std::move(w.weight)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Lts

Lts Lts::from_edges(std::size_t num_states, const std::vector<LabelledEdge>& edges, std::size_t root,
                    std::vector<std::string> labels) {
  if (num_states == 0) throw std::invalid_argument("an LTS needs at least one state");
  if (root >= num_states) throw std::invalid_argument("root out of range");
  std::set<std::string> names;
  for (const auto& e : edges) {
    if (e.source >= num_states || e.target >= num_states) throw std::invalid_argument("edge endpoint out of range");
    names.insert(e.action);
  }
  Lts lts;
  lts.alphabet_ = sorted_alphabet(names);
  lts.out_.resize(num_states);
  lts.root_ = root;
  lts.labels_ = default_labels(num_states, std::move(labels));
  std::vector<std::vector<std::size_t>> succ(num_states);
  for (const auto& e : edges) {
    const Transition t{index_of(lts.alphabet_, e.action), e.target};
    auto& row = lts.out_[e.source];
    if (std::find(row.begin(), row.end(), t) == row.end()) row.push_back(t);
    succ[e.source].push_back(e.target);
  }
  for (std::size_t s = 0; s < num_states; ++s) {
    if (lts.out_[s].empty()) throw std::invalid_argument("state " + std::to_string(s) + " has no outgoing edge");
  }
  check_reachable(num_states, root, succ);
  return lts;
}

std::size_t Lts::num_edges() const {
  std::size_t n = 0;
  for (const auto& row : out_) n += row.size();
  return n;
}

std::optional<std::size_t> Lts::action_index(std::string_view action) const {
  const auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), action);
  if (it == alphabet_.end() || *it != action) return std::nullopt;
  return static_cast<std::size_t>(it - alphabet_.begin());
}

Lts unfold(const Term& e, std::size_t max_states) {
  std::unordered_map<Expr, std::size_t, AlphaHash, AlphaEqual> index;
  std::vector<Term> states{e};
  std::vector<std::vector<std::pair<std::string, std::size_t>>> raw;
  index.emplace(e.expr(), 0);
  std::set<std::string> names;
  for (std::size_t cur = 0; cur < states.size(); ++cur) {
    auto succ = step(states[cur]);
    if (succ.empty()) throw std::logic_error("unfold: state without transitions");
    std::vector<std::pair<std::string, std::size_t>> row;
    for (auto& s : succ) {
      auto [it, inserted] = index.emplace(s.target.expr(), states.size());
      if (inserted) {
        if (states.size() >= max_states) throw StateBudgetExceeded(max_states);
        states.push_back(s.target);
      }
      names.insert(s.action);
      row.emplace_back(std::move(s.action), it->second);
    }
    raw.push_back(std::move(row));
  }
  Lts lts;
  lts.alphabet_ = sorted_alphabet(names);
  lts.out_.resize(states.size());
  for (std::size_t s = 0; s < raw.size(); ++s) {
    for (const auto& [a, t] : raw[s]) lts.out_[s].push_back({index_of(lts.alphabet_, a), t});
  }
  lts.labels_.reserve(states.size());
  for (const auto& t : states) lts.labels_.push_back(to_string(t));
  lts.terms_ = std::move(states);
  lts.root_ = 0;
  return lts;
}

// ---------------------------------------------------------------------------
// Lmc

Lmc Lmc::from_edges(std::size_t num_states, const std::vector<ProbEdge>& edges, std::size_t root,
                    std::vector<std::string> labels) {
  if (num_states == 0) throw std::invalid_argument("an LMC needs at least one state");
  if (root >= num_states) throw std::invalid_argument("root out of range");
  std::set<std::string> names;
  for (const auto& e : edges) {
    if (e.source >= num_states || e.target >= num_states) throw std::invalid_argument("edge endpoint out of range");
    if (e.probability < 0) throw std::invalid_argument("negative probability");
    if (e.probability > 0) names.insert(e.action);
  }
  Lmc lmc;
  lmc.alphabet_ = sorted_alphabet(names);
  lmc.out_.resize(num_states);
  lmc.root_ = root;
  lmc.labels_ = default_labels(num_states, std::move(labels));
  std::vector<std::vector<std::size_t>> succ(num_states);
  for (const auto& e : edges) {
    if (e.probability == 0) continue;
    const std::size_t a = index_of(lmc.alphabet_, e.action);
    auto& row = lmc.out_[e.source];
    const auto dup = std::find_if(row.begin(), row.end(),
                                  [&](const ProbTransition& t) { return t.action == a && t.target == e.target; });
    if (dup == row.end()) {
      row.push_back({a, e.target, e.probability});
    } else {
      dup->probability += e.probability;
    }
    succ[e.source].push_back(e.target);
  }
  for (std::size_t s = 0; s < num_states; ++s) {
    Rational total = 0;
    for (const auto& t : lmc.out_[s]) total += t.probability;
    if (total != 1) {
      throw std::invalid_argument("probabilities leaving state " + std::to_string(s) + " sum to " +
                                  to_string(total) + ", not 1");
    }
  }
  check_reachable(num_states, root, succ);
  return lmc;
}

std::optional<std::size_t> Lmc::action_index(std::string_view action) const {
  const auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), action);
  if (it == alphabet_.end() || *it != action) return std::nullopt;
  return static_cast<std::size_t>(it - alphabet_.begin());
}

Lts Lmc::underlying() const {
  Lts lts;
  lts.alphabet_ = alphabet_;
  lts.out_.resize(out_.size());
  for (std::size_t s = 0; s < out_.size(); ++s) {
    for (const auto& t : out_[s]) {
      if (t.probability > 0) lts.out_[s].push_back({t.action, t.target});
    }
  }
  lts.labels_ = labels_;
  lts.root_ = root_;
  return lts;
}

Lmc unfold_prob(const PTerm& e, std::size_t max_states) {
  std::unordered_map<Expr, std::size_t, AlphaHash, AlphaEqual> index;
  std::vector<PTerm> states{e};
  index.emplace(e.expr(), 0);
  struct RawEdge {
    std::string action;
    std::size_t target;
    Rational probability;
  };
  std::vector<std::vector<RawEdge>> raw;
  std::set<std::string> names;
  for (std::size_t cur = 0; cur < states.size(); ++cur) {
    auto succ = step_prob(states[cur]);
    if (succ.empty()) throw std::logic_error("unfold_prob: state without transitions");
    std::vector<RawEdge> row;
    for (auto& s : succ) {
      auto [it, inserted] = index.emplace(s.target.expr(), states.size());
      if (inserted) {
        if (states.size() >= max_states) throw StateBudgetExceeded(max_states);
        states.push_back(s.target);
      }
      names.insert(s.action);
      row.push_back({std::move(s.action), it->second, std::move(s.probability)});
    }
    raw.push_back(std::move(row));
  }
  Lmc lmc;
  lmc.alphabet_ = sorted_alphabet(names);
  lmc.out_.resize(states.size());
  for (std::size_t s = 0; s < raw.size(); ++s) {
    for (auto& r : raw[s]) lmc.out_[s].push_back({index_of(lmc.alphabet_, r.action), r.target, std::move(r.probability)});
  }
  lmc.labels_.reserve(states.size());
  for (const auto& t : states) lmc.labels_.push_back(to_string(t));
  lmc.terms_ = std::move(states);
  lmc.root_ = 0;
  return lmc;
}

// ---------------------------------------------------------------------------
// Text format

std::string to_text(const Lts& lts) {
  std::ostringstream os;
  for (std::size_t s = 0; s < lts.size(); ++s) os << "state " << s << ' ' << lts.label(s) << '\n';
  for (std::size_t s = 0; s < lts.size(); ++s) {
    for (const auto& t : lts.transitions(s)) {
      os << "edge " << s << ' ' << lts.alphabet()[t.action] << ' ' << t.target << '\n';
    }
  }
  return os.str();
}

std::string to_text(const Lmc& lmc) {
  std::ostringstream os;
  for (std::size_t s = 0; s < lmc.size(); ++s) os << "state " << s << ' ' << lmc.label(s) << '\n';
  for (std::size_t s = 0; s < lmc.size(); ++s) {
    for (const auto& t : lmc.transitions(s)) {
      os << "edge " << s << ' ' << lmc.alphabet()[t.action] << ' ' << t.target << ' '
         << to_string(t.probability) << '\n';
    }
  }
  return os.str();
}

namespace {

struct ParsedGraph {
  std::size_t num_states = 0;
  std::map<std::size_t, std::string> labels;
  std::vector<ProbEdge> edges;
  bool any_probability = false;
  bool all_probability = true;
};

std::size_t parse_index(const std::string& tok, std::size_t line) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size() || tok.empty()) {
    throw Error("line " + std::to_string(line) + ": expected a state index, found '" + tok + "'");
  }
  return static_cast<std::size_t>(v);
}

ParsedGraph parse_graph(std::string_view text) {
  ParsedGraph g;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) continue;
    if (kw == "state") {
      std::string idx;
      ls >> idx;
      const std::size_t s = parse_index(idx, lineno);
      std::string rest;
      std::getline(ls, rest);
      const auto first = rest.find_first_not_of(' ');
      g.labels[s] = first == std::string::npos ? "" : rest.substr(first);
      g.num_states = std::max(g.num_states, s + 1);
    } else if (kw == "edge") {
      std::string src, action, dst, prob;
      ls >> src >> action >> dst;
      if (dst.empty()) throw Error("line " + std::to_string(lineno) + ": edge needs <src> <action> <dst>");
      ProbEdge e{parse_index(src, lineno), action, parse_index(dst, lineno), Rational(1)};
      if (!is_action_label(action)) throw Error("line " + std::to_string(lineno) + ": bad action label '" + action + "'");
      if (ls >> prob) {
        if (!parse_rational(prob, e.probability)) {
          throw Error("line " + std::to_string(lineno) + ": bad probability '" + prob + "'");
        }
        g.any_probability = true;
      } else {
        g.all_probability = false;
      }
      g.num_states = std::max({g.num_states, e.source + 1, e.target + 1});
      g.edges.push_back(std::move(e));
    } else {
      throw Error("line " + std::to_string(lineno) + ": expected 'state' or 'edge', found '" + kw + "'");
    }
  }
  if (g.num_states == 0) throw Error("empty transition system");
  return g;
}

std::vector<std::string> labels_of(const ParsedGraph& g) {
  std::vector<std::string> labels;
  for (std::size_t s = 0; s < g.num_states; ++s) {
    const auto it = g.labels.find(s);
    labels.push_back(it == g.labels.end() || it->second.empty() ? "s" + std::to_string(s) : it->second);
  }
  return labels;
}

}  // namespace

Lts lts_from_text(std::string_view text) {
  const ParsedGraph g = parse_graph(text);
  if (g.any_probability) throw Error("probabilities are not allowed in an LTS description");
  std::vector<LabelledEdge> edges;
  for (const auto& e : g.edges) edges.push_back({e.source, e.action, e.target});
  try {
    return Lts::from_edges(g.num_states, edges, 0, labels_of(g));
  } catch (const std::invalid_argument& ex) {
    throw Error(ex.what());
  }
}

Lmc lmc_from_text(std::string_view text) {
  const ParsedGraph g = parse_graph(text);
  if (!g.all_probability) throw Error("every LMC edge needs a probability");
  try {
    return Lmc::from_edges(g.num_states, g.edges, 0, labels_of(g));
  } catch (const std::invalid_argument& ex) {
    throw Error(ex.what());
  }
}

}  // namespace fractlang
