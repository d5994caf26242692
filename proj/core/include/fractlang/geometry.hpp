#pragma once

#include <array>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fractlang {

// Points live in R^d for d <= 3; unused coordinates stay zero.
using Point = std::array<double, 3>;
using Matrix3 = std::array<std::array<double, 3>, 3>;

double distance(const Point& a, const Point& b);

// Largest singular value of the leading dim x dim block, from the eigenvalues
// of A^T A in closed form.
double largest_singular_value(int dim, const Matrix3& a);

struct AffineContraction {
  int dim = 2;
  Matrix3 linear{};
  Point offset{};
  double coeff = 0.0;

  Point operator()(const Point& p) const;
};

// Throws NotAContraction when the largest singular value is >= 1 - 1e-9.
AffineContraction certify_contraction(int dim, const Matrix3& linear, const Point& offset);

class Interpretation {
 public:
  explicit Interpretation(int dim = 2) : dim_(dim) {}

  int dim() const noexcept { return dim_; }
  // Throws DimensionMismatch if the map's dim differs.
  void set(const std::string& action, AffineContraction map);
  // Throws UnknownAction.
  const AffineContraction& at(std::string_view action) const;
  bool contains(std::string_view action) const;
  const std::map<std::string, AffineContraction, std::less<>>& maps() const noexcept { return maps_; }

  // Largest coefficient over the given actions (all actions when empty).
  // Throws UnknownAction for an action without a map.
  double max_coeff(std::span<const std::string> actions = {}) const;

 private:
  int dim_;
  std::map<std::string, AffineContraction, std::less<>> maps_;
};

// Line format:
//   dim 2
//   map a : 0.5 0 0 0.5 | 0.25 0.4330127018922193
// The matrix is row-major. '#' starts a comment. Throws Error on bad input
// and NotAContraction for a non-contracting map.
Interpretation parse_interpretation(std::string_view text);
std::string to_text(const Interpretation& interp);

// sigma_{a1}(sigma_{a2}(... sigma_{an}(base))). Throws UnknownAction.
Point eval_stream(const Interpretation& interp, std::span<const std::string> word, const Point& base);

}  // namespace fractlang
