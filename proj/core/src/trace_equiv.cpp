#include "fractlang/trace_equiv.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <stdexcept>

namespace fractlang {

std::string to_string(const Word& w) {
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i > 0) out += ' ';
    out += w[i];
  }
  return out;
}

namespace {

void enumerate(const Lts& lts, const std::vector<std::size_t>& frontier, std::size_t remaining, Word& word,
               std::set<Word>& out) {
  out.insert(word);
  if (remaining == 0) return;
  for (std::size_t a = 0; a < lts.alphabet().size(); ++a) {
    std::vector<std::size_t> next;
    for (std::size_t s : frontier) {
      for (const auto& t : lts.transitions(s)) {
        if (t.action == a) next.push_back(t.target);
      }
    }
    if (next.empty()) continue;
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    word.push_back(lts.alphabet()[a]);
    enumerate(lts, next, remaining - 1, word, out);
    word.pop_back();
  }
}

std::vector<std::string> merged_alphabet(const Lts& a, const Lts& b) {
  std::vector<std::string> out;
  std::set_union(a.alphabet().begin(), a.alphabet().end(), b.alphabet().begin(), b.alphabet().end(),
                 std::back_inserter(out));
  return out;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

Word shortest_witness(const Dfa& d1, const Dfa& d2) {
  using Pair = std::pair<std::size_t, std::size_t>;
  struct Visit {
    Pair parent;
    std::size_t action;
  };
  std::map<Pair, Visit> seen;
  std::deque<Pair> queue;
  const Pair start{d1.start(), d2.start()};
  seen.emplace(start, Visit{start, 0});
  queue.push_back(start);
  while (!queue.empty()) {
    const Pair cur = queue.front();
    queue.pop_front();
    if ((cur.first == d1.dead()) != (cur.second == d2.dead())) {
      Word w;
      for (Pair p = cur; p != start;) {
        const Visit& v = seen.at(p);
        w.push_back(d1.alphabet()[v.action]);
        p = v.parent;
      }
      std::reverse(w.begin(), w.end());
      return w;
    }
    for (std::size_t a = 0; a < d1.alphabet().size(); ++a) {
      const Pair nxt{d1.next(cur.first, a), d2.next(cur.second, a)};
      if (seen.emplace(nxt, Visit{cur, a}).second) queue.push_back(nxt);
    }
  }
  throw std::logic_error("shortest_witness: automata are equivalent");
}

}  // namespace

TraceSet traces(const Lts& lts, std::size_t state, std::size_t depth) {
  if (state >= lts.size()) throw std::out_of_range("traces: state out of range");
  TraceSet ts;
  ts.depth = depth;
  Word w;
  enumerate(lts, {state}, depth, w, ts.words);
  return ts;
}

Dfa Dfa::determinize(const Lts& lts, std::size_t start, const std::vector<std::string>& alphabet) {
  if (start >= lts.size()) throw std::out_of_range("determinize: state out of range");
  Dfa dfa;
  dfa.alphabet_ = alphabet;
  // Map the caller's alphabet onto the LTS's own action indices.
  std::vector<std::optional<std::size_t>> local(alphabet.size());
  for (std::size_t a = 0; a < alphabet.size(); ++a) local[a] = lts.action_index(alphabet[a]);

  std::map<std::vector<std::size_t>, std::size_t> index;
  auto intern = [&](std::vector<std::size_t> subset) {
    auto [it, inserted] = index.emplace(subset, dfa.subsets_.size());
    if (inserted) {
      dfa.subsets_.push_back(std::move(subset));
      dfa.delta_.emplace_back();
    }
    return it->second;
  };
  intern({start});
  dfa.dead_ = intern({});
  for (std::size_t cur = 0; cur < dfa.subsets_.size(); ++cur) {
    std::vector<std::size_t> row(alphabet.size());
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
      std::vector<std::size_t> next;
      if (local[a]) {
        for (std::size_t s : dfa.subsets_[cur]) {
          for (const auto& t : lts.transitions(s)) {
            if (t.action == *local[a]) next.push_back(t.target);
          }
        }
      }
      std::sort(next.begin(), next.end());
      next.erase(std::unique(next.begin(), next.end()), next.end());
      row[a] = intern(std::move(next));
    }
    dfa.delta_[cur] = std::move(row);
  }
  return dfa;
}

bool Dfa::accepts(const Word& w) const {
  std::size_t s = start();
  for (const auto& a : w) {
    const auto it = std::lower_bound(alphabet_.begin(), alphabet_.end(), a);
    if (it == alphabet_.end() || *it != a) return false;
    s = next(s, static_cast<std::size_t>(it - alphabet_.begin()));
    if (s == dead_) return false;
  }
  return true;
}

EquivResult trace_equiv(const Lts& l1, std::size_t x1, const Lts& l2, std::size_t x2) {
  const auto alphabet = merged_alphabet(l1, l2);
  const Dfa d1 = Dfa::determinize(l1, x1, alphabet);
  const Dfa d2 = Dfa::determinize(l2, x2, alphabet);

  // Hopcroft-Karp: assume the start states equal and close under successors.
  // Since every live state accepts, the only possible conflict is a pair with
  // exactly one dead component.
  const std::size_t offset = d1.size();
  UnionFind classes(d1.size() + d2.size());
  std::deque<std::pair<std::size_t, std::size_t>> todo;
  classes.unite(d1.start(), offset + d2.start());
  todo.emplace_back(d1.start(), d2.start());
  bool equivalent = true;
  while (!todo.empty() && equivalent) {
    const auto [p, q] = todo.front();
    todo.pop_front();
    if ((p == d1.dead()) != (q == d2.dead())) {
      equivalent = false;
      break;
    }
    for (std::size_t a = 0; a < alphabet.size(); ++a) {
      const std::size_t np = d1.next(p, a);
      const std::size_t nq = d2.next(q, a);
      if (classes.unite(np, offset + nq)) todo.emplace_back(np, nq);
    }
  }
  EquivResult result;
  result.equivalent = equivalent;
  if (!equivalent) result.witness = shortest_witness(d1, d2);
  return result;
}

bool equiv_oracle(const Lts& l1, std::size_t x1, const Lts& l2, std::size_t x2, std::size_t depth) {
  return traces(l1, x1, depth).words == traces(l2, x2, depth).words;
}

}  // namespace fractlang
