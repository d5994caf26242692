#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fractlang/lts.hpp"

namespace fractlang {

using Word = std::vector<std::string>;

std::string to_string(const Word& w);

// Finite-depth trace language: every word of length <= depth labelling a
// path from the state. Prefix closed by construction.
struct TraceSet {
  std::size_t depth = 0;
  std::set<Word> words;

  bool contains(const Word& w) const { return words.count(w) != 0; }
  friend bool operator==(const TraceSet&, const TraceSet&) = default;
};

TraceSet traces(const Lts& lts, std::size_t state, std::size_t depth);

// Subset construction of the trace language of one state, over a caller
// supplied (sorted) alphabet so two automata can be run in lockstep.
// Every non-dead state accepts.
class Dfa {
 public:
  static Dfa determinize(const Lts& lts, std::size_t start, const std::vector<std::string>& alphabet);

  std::size_t size() const noexcept { return subsets_.size(); }
  std::size_t start() const noexcept { return 0; }
  std::size_t dead() const noexcept { return dead_; }
  std::size_t next(std::size_t state, std::size_t action) const { return delta_[state][action]; }
  const std::vector<std::size_t>& subset(std::size_t state) const { return subsets_[state]; }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }

  // Unknown actions lead to the dead state.
  bool accepts(const Word& w) const;

 private:
  std::vector<std::string> alphabet_;
  std::vector<std::vector<std::size_t>> subsets_;
  std::vector<std::vector<std::size_t>> delta_;
  std::size_t dead_ = 0;
};

struct EquivResult {
  bool equivalent = true;
  // Shortest distinguishing word (ties broken lexicographically by action
  // name) when the states are not trace equivalent.
  std::optional<Word> witness;
};

EquivResult trace_equiv(const Lts& l1, std::size_t x1, const Lts& l2, std::size_t x2);

// Brute-force comparison of the depth-bounded trace sets.
bool equiv_oracle(const Lts& l1, std::size_t x1, const Lts& l2, std::size_t x2, std::size_t depth);

}  // namespace fractlang
