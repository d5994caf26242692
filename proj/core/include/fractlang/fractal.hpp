#pragma once

#include <cstddef>
#include <set>
#include <vector>

#include "fractlang/geometry.hpp"
#include "fractlang/lts.hpp"
#include "fractlang/trace_equiv.hpp"

namespace fractlang {

/// Finite point cloud standing in for a nonempty compact set, together with
/// an upper bound on its Hausdorff distance to the set it approximates.
struct CompactApprox {
  int dim = 2;
  std::vector<Point> points;
  double guarantee = 0.0;
};

// Indexed by Lts state.
using SolutionVector = std::vector<CompactApprox>;

struct SolveOptions {
  std::size_t threads = 1;
  // Grid pitch for snapping; 0 disables snapping altogether.
  double snap_pitch = 0.0;
  // Snapping kicks in once an iterate holds more points than this.
  std::size_t snap_threshold = 1'000'000;
};

// One application of the system operator: component x becomes the union of
// sigma_a(K_y) over the edges x -a-> y. Output points are sorted and
// deduplicated. Throws UnknownAction, DimensionMismatch.
SolutionVector apply_system(const Lts& lts, const Interpretation& interp, const SolutionVector& k,
                            std::size_t threads = 1);

// depth iterations from {p0} in every component. guarantee = c^n D / (1 - c),
// with c the largest coefficient on the alphabet and D the product Hausdorff
// distance between the first two iterates, plus pitch*sqrt(d)/(1-c) if any
// snapping happened.
SolutionVector solve(const Lts& lts, const Interpretation& interp, std::size_t depth, const Point& p0,
                     const SolveOptions& options = {});

// Largest Hausdorff distance between a component and its image under the
// system operator.
double check_solution(const Lts& lts, const Interpretation& interp, const SolutionVector& sv);

// Exact Hausdorff distance between finite clouds, using a bucket grid for
// nearest-neighbour queries. Throws DimensionMismatch.
double hausdorff(const CompactApprox& a, const CompactApprox& b);
// Same value by exhaustive pairwise comparison.
double hausdorff_brute(const CompactApprox& a, const CompactApprox& b);
// Max over components. Throws std::invalid_argument on a length mismatch.
double product_hausdorff(const SolutionVector& a, const SolutionVector& b);

// Symbolic solve under the shift maps on A^omega: component x is the set of
// length-n prefixes of the streams from x.
std::vector<std::set<Word>> cantor_solve(const Lts& lts, std::size_t depth);
// 2^-k where k is the length of the longest common prefix; 0 for equal words.
double cantor_distance(const Word& u, const Word& v);

}  // namespace fractlang
