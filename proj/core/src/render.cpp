#include "fractlang/render.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fractlang {

void validate(const RenderConfig& cfg) {
  if (cfg.width == 0 || cfg.height == 0) throw std::invalid_argument("image size must be at least 1x1");
  if (cfg.bbox && !(cfg.bbox->xmax > cfg.bbox->xmin && cfg.bbox->ymax > cfg.bbox->ymin)) {
    throw std::invalid_argument("bounding box must have positive width and height");
  }
}

BBox auto_bbox(std::span<const Point> points, int dim) {
  if (points.empty()) return {};
  double lo[2] = {points[0][0], points[0][1]};
  double hi[2] = {lo[0], lo[1]};
  for (const auto& p : points) {
    for (int i = 0; i < 2; ++i) {
      lo[i] = std::min(lo[i], p[i]);
      hi[i] = std::max(hi[i], p[i]);
    }
  }
  if (dim == 1) {
    lo[1] = 0.0;
    hi[1] = 1.0;
  }
  BBox box;
  double* out[2][2] = {{&box.xmin, &box.xmax}, {&box.ymin, &box.ymax}};
  for (int i = 0; i < 2; ++i) {
    const double extent = hi[i] - lo[i];
    const double margin = extent > 0.0 ? 0.02 * extent : 0.5;
    *out[i][0] = lo[i] - margin;
    *out[i][1] = hi[i] + margin;
  }
  return box;
}

Pixel pixel_of(const Point& p, int dim, const BBox& box, std::size_t width, std::size_t height) {
  auto bucket = [](double v, double lo, double hi, std::size_t n) {
    const double t = std::floor((v - lo) / (hi - lo) * static_cast<double>(n));
    return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(n - 1)));
  };
  const std::size_t col = bucket(p[0], box.xmin, box.xmax, width);
  const std::size_t up = dim == 1 ? 0 : bucket(p[1], box.ymin, box.ymax, height);
  return {col, height - 1 - up};
}

namespace {

std::string header(const char* magic, std::size_t w, std::size_t h) {
  return std::string(magic) + "\n" + std::to_string(w) + " " + std::to_string(h) + "\n255\n";
}

}  // namespace

std::string render_set(const CompactApprox& set, const RenderConfig& cfg) {
  validate(cfg);
  const BBox box = cfg.bbox ? *cfg.bbox : auto_bbox(set.points, set.dim);
  std::vector<bool> on(cfg.width * cfg.height, false);
  for (const auto& p : set.points) {
    const Pixel px = pixel_of(p, set.dim, box, cfg.width, cfg.height);
    if (set.dim == 1) {
      for (std::size_t r = 0; r < cfg.height; ++r) on[r * cfg.width + px.column] = true;
    } else {
      on[px.row * cfg.width + px.column] = true;
    }
  }
  std::string out = header("P6", cfg.width, cfg.height);
  out.reserve(out.size() + on.size() * 3);
  for (const bool b : on) {
    out.push_back(static_cast<char>(255));
    out.push_back(static_cast<char>(b ? 0 : 255));
    out.push_back(static_cast<char>(b ? 0 : 255));
  }
  return out;
}

std::string render_measure(std::span<const Point> samples, int dim, const RenderConfig& cfg) {
  validate(cfg);
  const BBox box = cfg.bbox ? *cfg.bbox : auto_bbox(samples, dim);
  std::vector<std::size_t> count(cfg.width * cfg.height, 0);
  for (const auto& p : samples) {
    const Pixel px = pixel_of(p, dim, box, cfg.width, cfg.height);
    if (dim == 1) {
      for (std::size_t r = 0; r < cfg.height; ++r) ++count[r * cfg.width + px.column];
    } else {
      ++count[px.row * cfg.width + px.column];
    }
  }
  const std::size_t nmax = count.empty() ? 0 : *std::max_element(count.begin(), count.end());
  std::string out = header("P5", cfg.width, cfg.height);
  const double denom = std::log1p(static_cast<double>(nmax));
  for (const std::size_t n : count) {
    const double g = nmax == 0 ? 0.0 : 255.0 * std::log1p(static_cast<double>(n)) / denom;
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(g))));
  }
  return out;
}

}  // namespace fractlang
