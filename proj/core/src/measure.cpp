#include "fractlang/measure.hpp"

#include <algorithm>
#include <deque>
#include <thread>

#include "fractlang/error.hpp"

namespace fractlang {

WeightedAutomaton::WeightedAutomaton(const Lmc& lmc) : n_(lmc.size()), alphabet_(lmc.alphabet()) {
  m_.assign(alphabet_.size(), RationalMatrix(n_, RationalVector(n_)));
  add(lmc, 0);
}

WeightedAutomaton::WeightedAutomaton(const Lmc& first, const Lmc& second) : n_(first.size() + second.size()) {
  std::set_union(first.alphabet().begin(), first.alphabet().end(), second.alphabet().begin(),
                 second.alphabet().end(), std::back_inserter(alphabet_));
  m_.assign(alphabet_.size(), RationalMatrix(n_, RationalVector(n_)));
  add(first, 0);
  add(second, first.size());
}

void WeightedAutomaton::add(const Lmc& lmc, std::size_t offset) {
  std::vector<std::size_t> remap;
  for (const auto& a : lmc.alphabet()) remap.push_back(*action_index(a));
  for (std::size_t x = 0; x < lmc.size(); ++x) {
    for (const auto& t : lmc.transitions(x)) {
      m_[remap[t.action]][offset + x][offset + t.target] += t.probability;
    }
  }
}

std::optional<std::size_t> WeightedAutomaton::action_index(const std::string& a) const {
  const auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), a);
  if (it == alphabet_.end() || *it != a) return std::nullopt;
  return static_cast<std::size_t>(it - alphabet_.begin());
}

RationalVector WeightedAutomaton::step(const RationalVector& v, std::size_t action) const {
  const auto& m = m_.at(action);
  RationalVector out(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    if (v[i] == 0) continue;
    for (std::size_t j = 0; j < n_; ++j) {
      if (m[i][j] != 0) out[j] += v[i] * m[i][j];
    }
  }
  return out;
}

Rational WeightedAutomaton::total(const RationalVector& v) {
  Rational s = 0;
  for (const auto& x : v) s += x;
  return s;
}

Rational trace_measure(const Lmc& lmc, std::size_t x, const Word& w) {
  if (x >= lmc.size()) throw std::out_of_range("trace_measure: state out of range");
  std::vector<std::size_t> idx;
  for (const auto& a : w) {
    const auto i = lmc.action_index(a);
    if (!i) throw UnknownAction(a);
    idx.push_back(*i);
  }
  // Sparse forward pass: only states with nonzero mass are carried.
  std::map<std::size_t, Rational> v{{x, Rational(1)}};
  for (const auto a : idx) {
    std::map<std::size_t, Rational> next;
    for (const auto& [s, mass] : v) {
      for (const auto& t : lmc.transitions(s)) {
        if (t.action == a) next[t.target] += mass * t.probability;
      }
    }
    v = std::move(next);
    if (v.empty()) return 0;
  }
  Rational total = 0;
  for (const auto& [s, mass] : v) total += mass;
  return total;
}

bool TraceMeasureTable::consistent() const {
  for (const auto& table : measure) {
    const auto root = table.find(Word{});
    if (root == table.end() || root->second != 1) return false;
    for (const auto& [w, m] : table) {
      if (w.size() >= depth) continue;
      Rational sum = 0;
      for (const auto& a : alphabet) {
        Word wa = w;
        wa.push_back(a);
        const auto it = table.find(wa);
        if (it == table.end()) return false;
        sum += it->second;
      }
      if (sum != m) return false;
    }
  }
  return true;
}

TraceMeasureTable trace_measure_table(const Lmc& lmc, std::size_t depth) {
  const WeightedAutomaton wa(lmc);
  TraceMeasureTable table;
  table.depth = depth;
  table.alphabet = lmc.alphabet();
  table.measure.resize(lmc.size());
  for (std::size_t x = 0; x < lmc.size(); ++x) {
    RationalVector e(lmc.size());
    e[x] = 1;
    std::vector<std::pair<Word, RationalVector>> frontier{{Word{}, e}};
    table.measure[x].emplace(Word{}, Rational(1));
    for (std::size_t d = 0; d < depth; ++d) {
      std::vector<std::pair<Word, RationalVector>> next;
      for (const auto& [w, v] : frontier) {
        for (std::size_t a = 0; a < wa.alphabet().size(); ++a) {
          Word u = w;
          u.push_back(wa.alphabet()[a]);
          RationalVector va = wa.step(v, a);
          table.measure[x].emplace(u, WeightedAutomaton::total(va));
          next.emplace_back(std::move(u), std::move(va));
        }
      }
      frontier = std::move(next);
    }
  }
  return table;
}

namespace {

// Row-echelon basis over the rationals.
class Basis {
 public:
  // Adds v if independent of the basis; returns whether it was added.
  bool insert(RationalVector v) {
    for (const auto& [pivot, row] : rows_) {
      if (v[pivot] == 0) continue;
      const Rational f = v[pivot] / row[pivot];
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (row[j] != 0) v[j] -= f * row[j];
      }
    }
    const auto nz = std::find_if(v.begin(), v.end(), [](const Rational& r) { return r != 0; });
    if (nz == v.end()) return false;
    rows_.emplace_back(static_cast<std::size_t>(nz - v.begin()), std::move(v));
    return true;
  }

 private:
  std::vector<std::pair<std::size_t, RationalVector>> rows_;
};

}  // namespace

MeasureEquivResult tzeng_equiv(const Lmc& l1, std::size_t x1, const Lmc& l2, std::size_t x2) {
  if (x1 >= l1.size() || x2 >= l2.size()) throw std::out_of_range("tzeng_equiv: state out of range");
  const WeightedAutomaton wa(l1, l2);
  const std::size_t n1 = l1.size();
  RationalVector v0(wa.size());
  v0[x1] += 1;
  v0[n1 + x2] -= 1;

  // Invariant: every vector in the basis has been checked to sum to zero, so
  // any vector in its span does too.
  Basis basis;
  std::deque<std::pair<Word, RationalVector>> queue;
  basis.insert(v0);
  queue.emplace_back(Word{}, v0);
  while (!queue.empty()) {
    auto [w, v] = std::move(queue.front());
    queue.pop_front();
    for (std::size_t a = 0; a < wa.alphabet().size(); ++a) {
      RationalVector va = wa.step(v, a);
      Word u = w;
      u.push_back(wa.alphabet()[a]);
      if (!basis.insert(va)) continue;
      if (WeightedAutomaton::total(va) != 0) {
        MeasureEquivResult r;
        r.equivalent = false;
        r.witness = u;
        auto measure_from = [&](std::size_t state) {
          RationalVector e(wa.size());
          e[state] = 1;
          for (const auto& a : u) e = wa.step(e, *wa.action_index(a));
          return WeightedAutomaton::total(e);
        };
        r.lhs_measure = measure_from(x1);
        r.rhs_measure = measure_from(n1 + x2);
        return r;
      }
      queue.emplace_back(std::move(u), std::move(va));
    }
  }
  return {};
}

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

// Neighbouring indices are decorrelated by mixing the index before it is
// folded into the seed.
SplitMix64::SplitMix64(std::uint64_t seed, std::uint64_t index)
    : state_(seed ^ mix64(index + 0x9e3779b97f4a7c15ULL)) {}

std::uint64_t SplitMix64::next() { return mix64(state_ += 0x9e3779b97f4a7c15ULL); }

double SplitMix64::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::vector<Point> sample_measure(const Lmc& lmc, std::size_t x, const Interpretation& interp,
                                  const SampleOptions& options) {
  if (x >= lmc.size()) throw std::out_of_range("sample_measure: state out of range");
  std::vector<const AffineContraction*> maps;
  for (const auto& a : lmc.alphabet()) maps.push_back(&interp.at(a));
  // Cumulative probabilities per state, as doubles.
  std::vector<std::vector<double>> cumulative(lmc.size());
  for (std::size_t s = 0; s < lmc.size(); ++s) {
    double acc = 0.0;
    for (const auto& t : lmc.transitions(s)) {
      acc += to_double(t.probability);
      cumulative[s].push_back(acc);
    }
  }

  std::vector<Point> out(options.samples);
  auto draw = [&](std::size_t i, std::vector<std::size_t>& word) {
    SplitMix64 rng(options.seed, i);
    std::size_t s = x;
    word.clear();
    for (std::size_t k = 0; k < options.truncation; ++k) {
      const auto& cum = cumulative[s];
      const double u = rng.uniform() * cum.back();
      auto it = std::upper_bound(cum.begin(), cum.end(), u);
      if (it == cum.end()) --it;
      const auto& t = lmc.transitions(s)[static_cast<std::size_t>(it - cum.begin())];
      word.push_back(t.action);
      s = t.target;
    }
    Point p = options.base;
    for (auto a = word.rbegin(); a != word.rend(); ++a) p = (*maps[*a])(p);
    out[i] = p;
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, options.samples));
  if (threads == 1) {
    std::vector<std::size_t> word;
    for (std::size_t i = 0; i < options.samples; ++i) draw(i, word);
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      std::vector<std::size_t> word;
      for (std::size_t i = t; i < options.samples; i += threads) draw(i, word);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

}  // namespace fractlang
