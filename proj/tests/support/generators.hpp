#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "fractlang/geometry.hpp"
#include "fractlang/lts.hpp"
#include "fractlang/term.hpp"

namespace fractlang::testing {

using Rng = std::mt19937_64;

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);  // inclusive
double uniform_real(Rng& rng, double lo, double hi);

std::vector<std::string> action_names(std::size_t n);  // a, b, c, ...

// Closed, guarded term of roughly `size` nodes. Choice weights are drawn
// from a small pool of fractions including 0 and 1.
Expr random_term(Rng& rng, std::size_t size, std::size_t num_actions, bool probabilistic);

// Productive, fully reachable system with out-degree 1..max_out.
Lts random_lts(Rng& rng, std::size_t max_states, std::size_t num_actions, std::size_t max_out = 3);

// Chain with rational weights; every state has 1..max_out successors.
Lmc random_lmc(Rng& rng, std::size_t states, std::size_t num_actions, std::size_t max_out = 3);

// Copy of `lmc` with state `split` duplicated: incoming mass is divided
// between the copies, which share outgoing distributions. Trace measures of
// the original states are unchanged.
Lmc split_state(const Lmc& lmc, std::size_t split, Rng& rng);

// Affine maps whose largest singular value is uniform in [cmin, cmax].
Interpretation random_interpretation(Rng& rng, int dim, const std::vector<std::string>& actions, double cmin,
                                     double cmax);

}  // namespace fractlang::testing
