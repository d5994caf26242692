#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "fractlang/fractal.hpp"
#include "fractlang/geometry.hpp"

namespace fractlang {

struct BBox {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = 1.0;
  double ymax = 1.0;
};

struct RenderConfig {
  std::size_t width = 512;
  std::size_t height = 512;
  std::optional<BBox> bbox;  // tight bound plus a 2% margin when absent
};

// Throws std::invalid_argument for a zero-sized image or degenerate box.
void validate(const RenderConfig& cfg);

// Tight bounding box grown by 2% of its extent on every side. A zero extent
// becomes a unit-wide window centred on the points. Dimension 1 uses y in [0, 1].
BBox auto_bbox(std::span<const Point> points, int dim);

struct Pixel {
  std::size_t column;
  std::size_t row;  // 0 is the top row
};

// Clamped into the image; the y axis points up.
Pixel pixel_of(const Point& p, int dim, const BBox& box, std::size_t width, std::size_t height);

// Binary PPM (P6): red points on white. In dimension 1 every point paints
// its whole column.
std::string render_set(const CompactApprox& set, const RenderConfig& cfg);

// Binary PGM (P5): per-pixel sample counts n, gray 255*log(1+n)/log(1+max n).
std::string render_measure(std::span<const Point> samples, int dim, const RenderConfig& cfg);

}  // namespace fractlang
