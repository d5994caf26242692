#include <benchmark/benchmark.h>

#include <cmath>
#include <random>

#include "fractlang/fractal.hpp"
#include "fractlang/lts.hpp"
#include "fractlang/measure.hpp"
#include "fractlang/parser.hpp"

namespace fl = fractlang;

namespace {

fl::Interpretation triangle() {
  return fl::parse_interpretation(
      "dim 2\n"
      "map a : 0.5 0 0 0.5 | 0.25 0.4330127018922193\n"
      "map b : 0.5 0 0 0.5 | 0 0\n"
      "map c : 0.5 0 0 0.5 | 0.5 0\n");
}

const fl::Lts& twisted() {
  static const fl::Lts l = fl::unfold(fl::parse_term("mu v. a.v + b.(b.v + c.v) + c.(b.v + c.v)"));
  return l;
}

void BM_SolveTwisted(benchmark::State& state) {
  const auto interp = triangle();
  fl::SolveOptions opts;
  opts.threads = static_cast<std::size_t>(state.range(1));
  for (auto _ : state) {
    auto sv = fl::solve(twisted(), interp, static_cast<std::size_t>(state.range(0)), {0, 0, 0}, opts);
    benchmark::DoNotOptimize(sv);
  }
}
BENCHMARK(BM_SolveTwisted)->Args({8, 1})->Args({10, 1})->Args({10, 4})->Unit(benchmark::kMillisecond);

void BM_Hausdorff(benchmark::State& state) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0, 1);
  const auto n = static_cast<std::size_t>(state.range(0));
  fl::CompactApprox a{2, {}, 0};
  fl::CompactApprox b{2, {}, 0};
  for (std::size_t i = 0; i < n; ++i) {
    a.points.push_back({u(rng), u(rng), 0});
    b.points.push_back({u(rng), u(rng), 0});
  }
  for (auto _ : state) benchmark::DoNotOptimize(fl::hausdorff(a, b));
}
BENCHMARK(BM_Hausdorff)->Arg(1 << 12)->Arg(1 << 16)->Unit(benchmark::kMillisecond);

void BM_Unfold(benchmark::State& state) {
  // Nested binders with cross references; the state count grows with depth.
  std::string term = "a0.v0";
  for (int i = 1; i <= state.range(0); ++i) {
    term = "mu v" + std::to_string(i) + ". (a" + std::to_string(i) + ".v" + std::to_string(i) + " + b.(" + term +
           ") + c.v0)";
  }
  term = "mu v0. " + term;
  const fl::Term e = fl::parse_term(term);
  for (auto _ : state) benchmark::DoNotOptimize(fl::unfold(e));
}
BENCHMARK(BM_Unfold)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

void BM_TzengSplitChain(benchmark::State& state) {
  // Two presentations of the same uniform chain over a ring of n states.
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<fl::ProbEdge> ring;
  std::vector<fl::ProbEdge> doubled;
  for (std::size_t x = 0; x < n; ++x) {
    ring.push_back({x, "a", (x + 1) % n, fl::Rational(1, 2)});
    ring.push_back({x, "b", x, fl::Rational(1, 2)});
    doubled.push_back({x, "a", (x + 1) % n, fl::Rational(1, 4)});
    doubled.push_back({x, "a", n + (x + 1) % n, fl::Rational(1, 4)});
    doubled.push_back({x, "b", x, fl::Rational(1, 2)});
    doubled.push_back({n + x, "a", (x + 1) % n, fl::Rational(1, 2)});
    doubled.push_back({n + x, "b", x, fl::Rational(1, 2)});
  }
  const fl::Lmc l1 = fl::Lmc::from_edges(n, ring);
  const fl::Lmc l2 = fl::Lmc::from_edges(2 * n, doubled);
  for (auto _ : state) benchmark::DoNotOptimize(fl::tzeng_equiv(l1, 0, l2, 0));
}
BENCHMARK(BM_TzengSplitChain)->Arg(4)->Arg(16)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
