#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "fractlang/parser.hpp"
#include "fractlang/proof.hpp"
#include "fractlang/term.hpp"

namespace fractlang {

struct RewriteOptions {
  // Empty means every axiom is allowed.
  std::set<Rule> rules;
  // Rewrites that would push the term past this many nodes are not offered.
  std::size_t max_size = 400;
  // Skip positions under a binder whose subterm mentions that binder. Chains
  // built this way can be replayed as derivations over closed terms.
  bool closed_positions_only = false;
};

// One applied axiom instance: the subterm at `path` went from `before` to
// `after`.
struct AppliedRewrite {
  Rule rule;
  Path path;
  Expr before;
  Expr after;
};

struct RewriteChain {
  Expr origin;
  Expr result;
  std::vector<AppliedRewrite> steps;
};

// Applies up to `steps` axiom instances, each picked uniformly among all
// (position, oriented axiom) pairs that apply. Stops early when nothing
// applies. Sums are built as `+` or `+[p]` according to `flavor`.
RewriteChain rewrite_chain(const Expr& e, Flavor flavor, std::uint64_t seed, std::size_t steps,
                           const RewriteOptions& options = {});

Term rewrite_random(const Term& e, std::uint64_t seed, std::size_t steps, const RewriteOptions& options = {});
PTerm rewrite_random(const PTerm& e, std::uint64_t seed, std::size_t steps, const RewriteOptions& options = {});

// Derivation of origin == result: each rewrite becomes an axiom step lifted
// by Cong and chained with Trans. Throws std::invalid_argument if a rewrite
// touched a subterm that is not closed.
Derivation to_derivation(const RewriteChain& chain);

}  // namespace fractlang
