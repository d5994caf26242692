#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fractlang/geometry.hpp"
#include "fractlang/lts.hpp"
#include "fractlang/rational.hpp"
#include "fractlang/trace_equiv.hpp"

namespace fractlang {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

/// Linear form of an Lmc: M_a[x][y] is the probability of x -a-> y, so the
/// measure of the cylinder of a1...an from x is e_x M_a1 ... M_an 1.
class WeightedAutomaton {
 public:
  explicit WeightedAutomaton(const Lmc& lmc);
  // Block-diagonal union of two chains over the union of their alphabets;
  // states of `second` are numbered after those of `first`.
  WeightedAutomaton(const Lmc& first, const Lmc& second);

  std::size_t size() const noexcept { return n_; }
  const std::vector<std::string>& alphabet() const noexcept { return alphabet_; }
  std::optional<std::size_t> action_index(const std::string& a) const;
  const RationalMatrix& matrix(std::size_t action) const { return m_.at(action); }

  // v M_a, skipping zero entries.
  RationalVector step(const RationalVector& v, std::size_t action) const;
  static Rational total(const RationalVector& v);

 private:
  void add(const Lmc& lmc, std::size_t offset);

  std::size_t n_ = 0;
  std::vector<std::string> alphabet_;
  std::vector<RationalMatrix> m_;
};

// Exact measure of the cylinder of `w` from state x. Throws UnknownAction for
// an action outside the chain's alphabet.
Rational trace_measure(const Lmc& lmc, std::size_t x, const Word& w);

/// Cylinder measures of every word up to `depth` over the chain's alphabet,
/// for every state.
struct TraceMeasureTable {
  std::size_t depth = 0;
  std::vector<std::string> alphabet;
  std::vector<std::map<Word, Rational>> measure;  // indexed by state

  // Every state gives the empty word measure 1, and each word's measure is
  // the sum over its one-letter extensions (checked for words shorter than
  // depth).
  bool consistent() const;
};

TraceMeasureTable trace_measure_table(const Lmc& lmc, std::size_t depth);

struct MeasureEquivResult {
  bool equivalent = true;
  // Shortest word whose cylinder measures differ.
  std::optional<Word> witness;
  Rational lhs_measure;
  Rational rhs_measure;
};

// Spans the row vectors of the difference e_x1 - e_x2 of the union automaton
// breadth first, in exact arithmetic.
MeasureEquivResult tzeng_equiv(const Lmc& l1, std::size_t x1, const Lmc& l2, std::size_t x2);

// Counter-based SplitMix64: stream `index` of `seed` is independent of every
// other index, so samples can be drawn in any order.
class SplitMix64 {
 public:
  SplitMix64(std::uint64_t seed, std::uint64_t index);
  std::uint64_t next();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();

 private:
  std::uint64_t state_;
};

struct SampleOptions {
  std::size_t truncation = 30;
  std::size_t samples = 100'000;
  std::uint64_t seed = 0;
  Point base{};
  std::size_t threads = 1;
};

// Walks the chain `truncation` steps from x per sample and evaluates the
// emitted word. Output is in sample-index order and does not depend on the
// thread count.
std::vector<Point> sample_measure(const Lmc& lmc, std::size_t x, const Interpretation& interp,
                                  const SampleOptions& options);

}  // namespace fractlang
