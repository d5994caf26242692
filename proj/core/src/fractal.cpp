#include "fractlang/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "fractlang/error.hpp"

namespace fractlang {

namespace {

void sort_unique(std::vector<Point>& pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

void snap(std::vector<Point>& pts, int dim, double pitch) {
  for (auto& p : pts) {
    for (int i = 0; i < dim; ++i) p[i] = std::round(p[i] / pitch) * pitch;
  }
  sort_unique(pts);
}

template <class F>
void parallel_for(std::size_t n, std::size_t threads, F&& f) {
  threads = std::max<std::size_t>(1, std::min(threads, n));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < n; i += threads) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

// Uniform bucket grid over a point set for exact nearest-neighbour queries.
class BucketGrid {
 public:
  BucketGrid(const std::vector<Point>& pts, int dim) : pts_(pts), dim_(dim) {
    lo_ = hi_ = pts.front();
    for (const auto& p : pts) {
      for (int i = 0; i < dim; ++i) {
        lo_[i] = std::min(lo_[i], p[i]);
        hi_[i] = std::max(hi_[i], p[i]);
      }
    }
    double extent = 0.0;
    for (int i = 0; i < dim; ++i) extent = std::max(extent, hi_[i] - lo_[i]);
    // About two points per cell along the widest axis.
    const double per_axis = std::max(1.0, std::floor(std::pow(static_cast<double>(pts.size()) / 2.0, 1.0 / dim)));
    cell_ = extent > 0.0 ? extent / per_axis : 1.0;
    for (int i = 0; i < 3; ++i) {
      res_[i] = i < dim ? static_cast<long>(std::floor((hi_[i] - lo_[i]) / cell_)) + 1 : 1;
    }
    start_.assign(static_cast<std::size_t>(res_[0] * res_[1] * res_[2]) + 1, 0);
    std::vector<std::size_t> key(pts.size());
    for (std::size_t k = 0; k < pts.size(); ++k) {
      key[k] = flat(cell_of(pts[k]));
      ++start_[key[k] + 1];
    }
    for (std::size_t c = 1; c < start_.size(); ++c) start_[c] += start_[c - 1];
    index_.resize(pts.size());
    std::vector<std::size_t> fill(start_.begin(), start_.end() - 1);
    for (std::size_t k = 0; k < pts.size(); ++k) index_[fill[key[k]]++] = k;
  }

  // Nearest distance from q, except that the search may stop as soon as a
  // distance <= `enough` is seen (the result is then some value <= enough).
  double nearest(const Point& q, double enough) const {
    const auto c = cell_of(q);
    double best = std::numeric_limits<double>::infinity();
    long max_ring = 0;
    for (int i = 0; i < 3; ++i) max_ring = std::max({max_ring, c[i], res_[i] - 1 - c[i]});
    for (long ring = 0; ring <= max_ring; ++ring) {
      if (ring >= 1 && best <= static_cast<double>(ring - 1) * cell_) break;
      std::array<long, 3> lo{};
      std::array<long, 3> hi{};
      for (int i = 0; i < 3; ++i) {
        lo[i] = std::max(0L, c[i] - ring);
        hi[i] = std::min(res_[i] - 1, c[i] + ring);
      }
      auto scan = [&](long x, long y, long z) {
        const std::size_t f = flat({x, y, z});
        for (std::size_t k = start_[f]; k < start_[f + 1]; ++k) {
          best = std::min(best, distance(q, pts_[index_[k]]));
        }
      };
      // Visit only the cells on the boundary of the (clipped) cube of radius
      // `ring` around c.
      for (long x = lo[0]; x <= hi[0]; ++x) {
        const bool x_edge = std::labs(x - c[0]) == ring;
        if (!x_edge && res_[2] == 1) {
          if (c[1] - ring >= 0) scan(x, c[1] - ring, 0);
          if (ring > 0 && c[1] + ring < res_[1]) scan(x, c[1] + ring, 0);
          continue;
        }
        for (long y = lo[1]; y <= hi[1]; ++y) {
          const bool xy_edge = x_edge || std::labs(y - c[1]) == ring;
          if (xy_edge) {
            for (long z = lo[2]; z <= hi[2]; ++z) scan(x, y, z);
          } else {
            if (c[2] - ring >= 0) scan(x, y, c[2] - ring);
            if (ring > 0 && c[2] + ring < res_[2]) scan(x, y, c[2] + ring);
          }
        }
      }
      if (best <= enough) break;
    }
    return best;
  }

 private:
  std::array<long, 3> cell_of(const Point& p) const {
    std::array<long, 3> c{0, 0, 0};
    for (int i = 0; i < dim_; ++i) {
      const double t = std::floor((p[i] - lo_[i]) / cell_);
      c[i] = std::clamp(static_cast<long>(std::clamp(t, -1.0, static_cast<double>(res_[i]))), 0L, res_[i] - 1);
    }
    return c;
  }
  std::size_t flat(const std::array<long, 3>& c) const {
    return static_cast<std::size_t>((c[0] * res_[1] + c[1]) * res_[2] + c[2]);
  }

  const std::vector<Point>& pts_;
  int dim_;
  Point lo_{};
  Point hi_{};
  double cell_ = 1.0;
  std::array<long, 3> res_{1, 1, 1};
  std::vector<std::size_t> start_;
  std::vector<std::size_t> index_;
};

double directed(const std::vector<Point>& from, const BucketGrid& to) {
  double worst = 0.0;
  for (const auto& p : from) worst = std::max(worst, to.nearest(p, worst));
  return worst;
}

void require_same_dim(const CompactApprox& a, const CompactApprox& b) {
  if (a.dim != b.dim) throw DimensionMismatch(a.dim, b.dim);
  if (a.points.empty() || b.points.empty()) throw std::invalid_argument("hausdorff: empty point set");
}

}  // namespace

double hausdorff(const CompactApprox& a, const CompactApprox& b) {
  require_same_dim(a, b);
  const BucketGrid ga(a.points, a.dim);
  const BucketGrid gb(b.points, b.dim);
  return std::max(directed(a.points, gb), directed(b.points, ga));
}

double hausdorff_brute(const CompactApprox& a, const CompactApprox& b) {
  require_same_dim(a, b);
  auto one_way = [](const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_way(a.points, b.points), one_way(b.points, a.points));
}

double product_hausdorff(const SolutionVector& a, const SolutionVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("product_hausdorff: component counts differ");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, hausdorff(a[i], b[i]));
  return d;
}

SolutionVector apply_system(const Lts& lts, const Interpretation& interp, const SolutionVector& k,
                            std::size_t threads) {
  if (k.size() != lts.size()) throw std::invalid_argument("apply_system: one component per state required");
  std::vector<const AffineContraction*> maps;
  for (const auto& a : lts.alphabet()) maps.push_back(&interp.at(a));
  for (const auto& c : k) {
    if (c.dim != interp.dim()) throw DimensionMismatch(interp.dim(), c.dim);
  }
  SolutionVector out(lts.size());
  parallel_for(lts.size(), threads, [&](std::size_t x) {
    auto& pts = out[x].points;
    out[x].dim = interp.dim();
    for (const auto& t : lts.transitions(x)) {
      const auto& f = *maps[t.action];
      for (const auto& p : k[t.target].points) pts.push_back(f(p));
    }
    sort_unique(pts);
  });
  return out;
}

SolutionVector solve(const Lts& lts, const Interpretation& interp, std::size_t depth, const Point& p0,
                     const SolveOptions& options) {
  const int dim = interp.dim();
  const double c = interp.max_coeff(lts.alphabet());
  Point base{};
  for (int i = 0; i < dim; ++i) base[i] = p0[i];

  SolutionVector k(lts.size(), CompactApprox{dim, {base}, 0.0});
  const SolutionVector first = apply_system(lts, interp, k, options.threads);
  const double d0 = product_hausdorff(k, first);

  bool snapped = false;
  for (std::size_t n = 0; n < depth; ++n) {
    k = n == 0 ? first : apply_system(lts, interp, k, options.threads);
    if (options.snap_pitch > 0.0) {
      std::size_t total = 0;
      for (const auto& comp : k) total += comp.points.size();
      if (total > options.snap_threshold) {
        for (auto& comp : k) snap(comp.points, dim, options.snap_pitch);
        snapped = true;
      }
    }
  }
  double guarantee = std::pow(c, static_cast<double>(depth)) * d0 / (1.0 - c);
  if (snapped) guarantee += options.snap_pitch * std::sqrt(static_cast<double>(dim)) / (1.0 - c);
  for (auto& comp : k) comp.guarantee = guarantee;
  return k;
}

double check_solution(const Lts& lts, const Interpretation& interp, const SolutionVector& sv) {
  return product_hausdorff(sv, apply_system(lts, interp, sv));
}

std::vector<std::set<Word>> cantor_solve(const Lts& lts, std::size_t depth) {
  std::vector<std::set<Word>> k(lts.size(), std::set<Word>{Word{}});
  for (std::size_t n = 0; n < depth; ++n) {
    std::vector<std::set<Word>> next(lts.size());
    for (std::size_t x = 0; x < lts.size(); ++x) {
      for (const auto& t : lts.transitions(x)) {
        for (const auto& w : k[t.target]) {
          Word v;
          v.reserve(w.size() + 1);
          v.push_back(lts.alphabet()[t.action]);
          v.insert(v.end(), w.begin(), w.end());
          next[x].insert(std::move(v));
        }
      }
    }
    k = std::move(next);
  }
  return k;
}

double cantor_distance(const Word& u, const Word& v) {
  if (u == v) return 0.0;
  std::size_t k = 0;
  while (k < u.size() && k < v.size() && u[k] == v[k]) ++k;
  return std::ldexp(1.0, -static_cast<int>(k));
}

}  // namespace fractlang
