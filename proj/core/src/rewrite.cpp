#include "fractlang/rewrite.hpp"

#include <array>
#include <random>
#include <stdexcept>

namespace fractlang {

namespace {

struct Candidate {
  Rule rule;
  Path path;
  Expr before;
  Expr after;
};

// Weights for probabilistic ID read right to left, including the degenerate
// ends of [0, 1].
const std::array<Rational, 8>& weight_pool() {
  static const std::array<Rational, 8> pool{Rational(1, 2), Rational(1, 3), Rational(2, 3), Rational(1, 4),
                                            Rational(3, 4), Rational(1, 5), Rational(0),    Rational(1)};
  return pool;
}

class Collector {
 public:
  Collector(const RewriteOptions& opts, std::size_t total_size, std::mt19937_64& rng, bool probabilistic)
      : opts_(opts), total_(total_size), rng_(rng), prob_(probabilistic) {}

  void walk(const Expr& e, Path& path) {
    at(e, path);
    switch (e.kind()) {
      case NodeKind::kPrefix:
      case NodeKind::kMu:
        path.push_back(0);
        walk(e.body(), path);
        path.pop_back();
        break;
      case NodeKind::kSum:
      case NodeKind::kChoice:
        path.push_back(0);
        walk(e.lhs(), path);
        path.back() = 1;
        walk(e.rhs(), path);
        path.pop_back();
        break;
      default:
        break;
    }
  }

  std::vector<Candidate>& candidates() { return out_; }

 private:
  bool allowed(Rule r) const { return opts_.rules.empty() || opts_.rules.count(r) != 0; }

  void offer(Rule r, const Path& path, const Expr& before, Expr after) {
    if (!allowed(r)) return;
    if (after.size() > before.size() && total_ + after.size() - before.size() > opts_.max_size) return;
    out_.push_back({r, path, before, std::move(after)});
  }

  void at(const Expr& e, const Path& path) {
    if (opts_.closed_positions_only && !e.locally_closed()) return;
    const NodeKind bin = prob_ ? NodeKind::kChoice : NodeKind::kSum;
    auto join = [&](Expr l, const Rational& p, Expr r) {
      return prob_ ? Expr::choice(std::move(l), p, std::move(r)) : Expr::sum(std::move(l), std::move(r));
    };

    // ID, both directions
    if (e.kind() == bin && alpha_eq(e.lhs(), e.rhs())) offer(Rule::kID, path, e, e.lhs());
    if (allowed(Rule::kID)) {
      const Rational p = prob_ ? weight_pool()[rng_() % weight_pool().size()] : Rational(0);
      offer(Rule::kID, path, e, join(e, p, e));
    }

    if (e.kind() == bin) {
      const Expr& l = e.lhs();
      const Expr& r = e.rhs();
      const Rational& p = e.probability();
      offer(Rule::kCM, path, e, join(r, 1 - p, l));

      // (e1 . e2) . e3  ->  e1 . (e2 . e3)
      if (l.kind() == bin) {
        if (!prob_) {
          offer(Rule::kAS, path, e, Expr::sum(l.lhs(), Expr::sum(l.rhs(), r)));
        } else {
          const Rational& pr = l.probability();
          const Rational rs = pr * p;
          if (rs != 1) {
            offer(Rule::kAS, path, e,
                  Expr::choice(l.lhs(), rs, Expr::choice(l.rhs(), p * (1 - pr) / (1 - rs), r)));
          }
        }
      }
      // e1 . (e2 . e3)  ->  (e1 . e2) . e3
      if (r.kind() == bin) {
        if (!prob_) {
          offer(Rule::kAS, path, e, Expr::sum(Expr::sum(l, r.lhs()), r.rhs()));
        } else if (p != 1) {
          const Rational& q = r.probability();
          const Rational s = 1 - (1 - p) * (1 - q);
          const Rational rr = s == 0 ? Rational(0) : Rational(p / s);
          offer(Rule::kAS, path, e, Expr::choice(Expr::choice(l, rr, r.lhs()), s, r.rhs()));
        }
      }
      // ae1 . ae2  ->  a(e1 . e2)
      if (l.kind() == NodeKind::kPrefix && r.kind() == NodeKind::kPrefix && l.name() == r.name()) {
        offer(Rule::kDS, path, e, Expr::prefix(l.name(), join(l.body(), p, r.body())));
      }
    }

    if (e.kind() == NodeKind::kPrefix && e.body().kind() == bin) {
      const Expr& b = e.body();
      offer(Rule::kDS, path, e,
            join(Expr::prefix(e.name(), b.lhs()), b.probability(), Expr::prefix(e.name(), b.rhs())));
    }

    if (e.kind() == NodeKind::kMu) {
      offer(Rule::kFP, path, e, unfold(e));
      static const std::array<const char*, 4> hints{"u", "v", "w", "z"};
      const char* hint = hints[rng_() % hints.size()];
      offer(Rule::kAE, path, e, Expr::mu_abstracted(hint, e.body()));
    }
  }

  const RewriteOptions& opts_;
  std::size_t total_;
  std::mt19937_64& rng_;
  bool prob_;
  std::vector<Candidate> out_;
};

}  // namespace

RewriteChain rewrite_chain(const Expr& e, Flavor flavor, std::uint64_t seed, std::size_t steps, const RewriteOptions& options) {
  std::mt19937_64 rng(seed);
  const bool prob = flavor == Flavor::kProbabilistic;
  RewriteChain chain{e, e, {}};
  for (std::size_t i = 0; i < steps; ++i) {
    Collector collector(options, chain.result.size(), rng, prob);
    Path path;
    collector.walk(chain.result, path);
    auto& cands = collector.candidates();
    if (cands.empty()) break;
    Candidate& pick = cands[rng() % cands.size()];
    chain.result = replace_at(chain.result, pick.path, pick.after);
    chain.steps.push_back({pick.rule, std::move(pick.path), std::move(pick.before), std::move(pick.after)});
  }
  return chain;
}

Term rewrite_random(const Term& e, std::uint64_t seed, std::size_t steps, const RewriteOptions& options) {
  return Term(rewrite_chain(e.expr(), Flavor::kClassic, seed, steps, options).result);
}

PTerm rewrite_random(const PTerm& e, std::uint64_t seed, std::size_t steps, const RewriteOptions& options) {
  return PTerm(rewrite_chain(e.expr(), Flavor::kProbabilistic, seed, steps, options).result);
}

Derivation to_derivation(const RewriteChain& chain) {
  Derivation d;
  d.goal = std::make_pair(chain.origin, chain.result);
  std::size_t id = 1;
  d.steps.push_back(Step{id, Rule::kRefl, {}, chain.origin, chain.origin, {}, {}, {}, 0});
  std::size_t proved = id;
  Expr current = chain.origin;
  for (const auto& rw : chain.steps) {
    if (!rw.before.locally_closed()) {
      throw std::invalid_argument("to_derivation: rewrite at an open position cannot be stated as an axiom step");
    }
    const Expr next = replace_at(current, rw.path, rw.after);
    d.steps.push_back(Step{id + 1, rw.rule, {}, rw.before, rw.after, {}, {}, {}, 0});
    d.steps.push_back(Step{id + 2, Rule::kCong, {id + 1}, current, next, rw.path, {}, {}, 0});
    d.steps.push_back(Step{id + 3, Rule::kTrans, {proved, id + 2}, chain.origin, next, {}, {}, {}, 0});
    id += 3;
    proved = id;
    current = next;
  }
  return d;
}

}  // namespace fractlang
