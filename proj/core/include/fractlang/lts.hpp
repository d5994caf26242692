#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fractlang/rational.hpp"
#include "fractlang/term.hpp"

namespace fractlang {

struct Successor {
  std::string action;
  Term target;
};

struct ProbSuccessor {
  std::string action;
  PTerm target;
  Rational probability;
};

// One small step of a well-formed classic term. Successors come out in
// left-to-right discovery order with duplicate (action, target) pairs removed.
std::vector<Successor> step(const Term& e);

// The distribution of a well-formed probabilistic term. Entries with equal
// (action, target) are merged and zero-weight entries dropped; the weights of
// the result sum to exactly one.
std::vector<ProbSuccessor> step_prob(const PTerm& e);

struct Transition {
  std::size_t action;  // index into alphabet()
  std::size_t target;
  friend bool operator==(const Transition&, const Transition&) = default;
};

struct LabelledEdge {
  std::size_t source;
  std::string action;
  std::size_t target;
};

/// Finite, productive labelled transition system with every state reachable
/// from the root. Actions are stored as indices into a sorted alphabet.
class Lts {
 public:
  Lts() = default;

  // Throws std::invalid_argument if a state has no outgoing edge, an index is
  // out of range, or a state is unreachable from `root`.
  static Lts from_edges(std::size_t num_states, const std::vector<LabelledEdge>& edges,
                        std::size_t root = 0, std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return out_.size(); }
  std::size_t root() const noexcept { return root_; }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const std::vector<Transition>& transitions(std::size_t state) const { return out_.at(state); }
  std::size_t num_edges() const;
  // Canonical term text for unfolded systems, otherwise "s<i>".
  const std::string& label(std::size_t state) const { return labels_.at(state); }
  std::optional<std::size_t> action_index(std::string_view action) const;

  // Present only for systems produced by unfold().
  const std::vector<Term>& terms() const noexcept { return terms_; }

 private:
  friend Lts unfold(const Term&, std::size_t);
  friend class Lmc;

  std::vector<std::string> alphabet_;
  std::vector<std::vector<Transition>> out_;
  std::vector<std::string> labels_;
  std::vector<Term> terms_;
  std::size_t root_ = 0;
};

struct ProbTransition {
  std::size_t action;
  std::size_t target;
  Rational probability;
};

struct ProbEdge {
  std::size_t source;
  std::string action;
  std::size_t target;
  Rational probability;
};

/// Finite labelled Markov chain. Every state's outgoing probabilities are
/// strictly positive and sum to exactly one.
class Lmc {
 public:
  Lmc() = default;

  // Zero-probability edges are dropped; parallel edges with the same action
  // and target are merged. Throws std::invalid_argument on a bad row sum,
  // a negative probability, or an unreachable state.
  static Lmc from_edges(std::size_t num_states, const std::vector<ProbEdge>& edges,
                        std::size_t root = 0, std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return out_.size(); }
  std::size_t root() const noexcept { return root_; }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  const std::vector<ProbTransition>& transitions(std::size_t state) const { return out_.at(state); }
  const std::string& label(std::size_t state) const { return labels_.at(state); }
  std::optional<std::size_t> action_index(std::string_view action) const;
  const std::vector<PTerm>& terms() const noexcept { return terms_; }

  // Support of each distribution as an LTS over the same states.
  Lts underlying() const;

 private:
  friend Lmc unfold_prob(const PTerm&, std::size_t);

  std::vector<std::string> alphabet_;
  std::vector<std::vector<ProbTransition>> out_;
  std::vector<std::string> labels_;
  std::vector<PTerm> terms_;
  std::size_t root_ = 0;
};

inline constexpr std::size_t kDefaultStateBudget = 100'000;

// Breadth-first closure of step() from `e`, identifying alpha-equivalent
// states. The root is state 0. Throws StateBudgetExceeded past `max_states`.
Lts unfold(const Term& e, std::size_t max_states = kDefaultStateBudget);
Lmc unfold_prob(const PTerm& e, std::size_t max_states = kDefaultStateBudget);

// Plain-text adjacency format:
//   state <i> <label>
//   edge <i> <action> <j> [<p/q>]
// The root is state 0.
std::string to_text(const Lts& lts);
std::string to_text(const Lmc& lmc);
Lts lts_from_text(std::string_view text);
Lmc lmc_from_text(std::string_view text);

}  // namespace fractlang
