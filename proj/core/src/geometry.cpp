#include "fractlang/geometry.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "fractlang/error.hpp"

namespace fractlang {

double distance(const Point& a, const Point& b) {
  const double dx = a[0] - b[0];
  const double dy = a[1] - b[1];
  const double dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

namespace {

// Largest eigenvalue of a symmetric positive semidefinite matrix.
double largest_eigenvalue(int dim, const Matrix3& b) {
  if (dim == 1) return b[0][0];
  if (dim == 2) {
    const double half_tr = 0.5 * (b[0][0] + b[1][1]);
    const double half_diff = 0.5 * (b[0][0] - b[1][1]);
    return half_tr + std::hypot(half_diff, b[0][1]);
  }
  const double off = b[0][1] * b[0][1] + b[0][2] * b[0][2] + b[1][2] * b[1][2];
  if (off == 0.0) return std::max({b[0][0], b[1][1], b[2][2]});
  const double q = (b[0][0] + b[1][1] + b[2][2]) / 3.0;
  const double p2 = (b[0][0] - q) * (b[0][0] - q) + (b[1][1] - q) * (b[1][1] - q) + (b[2][2] - q) * (b[2][2] - q) +
                    2.0 * off;
  const double p = std::sqrt(p2 / 6.0);
  Matrix3 c{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) c[i][j] = (b[i][j] - (i == j ? q : 0.0)) / p;
  }
  const double det = c[0][0] * (c[1][1] * c[2][2] - c[1][2] * c[2][1]) -
                     c[0][1] * (c[1][0] * c[2][2] - c[1][2] * c[2][0]) +
                     c[0][2] * (c[1][0] * c[2][1] - c[1][1] * c[2][0]);
  const double r = std::clamp(det / 2.0, -1.0, 1.0);
  return q + 2.0 * p * std::cos(std::acos(r) / 3.0);
}

}  // namespace

double largest_singular_value(int dim, const Matrix3& a) {
  if (dim < 1 || dim > 3) throw Error("dimension must be 1, 2 or 3");
  Matrix3 ata{};
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      double s = 0.0;
      for (int k = 0; k < dim; ++k) s += a[k][i] * a[k][j];
      ata[i][j] = s;
    }
  }
  return std::sqrt(std::max(0.0, largest_eigenvalue(dim, ata)));
}

Point AffineContraction::operator()(const Point& p) const {
  Point out = offset;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) out[i] += linear[i][j] * p[j];
  }
  return out;
}

AffineContraction certify_contraction(int dim, const Matrix3& linear, const Point& offset) {
  const double sigma = largest_singular_value(dim, linear);
  if (!(sigma < 1.0 - 1e-9)) throw NotAContraction(sigma);
  AffineContraction f;
  f.dim = dim;
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) f.linear[i][j] = linear[i][j];
    f.offset[i] = offset[i];
  }
  // Absorb the closed-form rounding so the coefficient is a certified bound.
  f.coeff = std::min(sigma + 1e-13, 1.0 - 1e-9);
  return f;
}

void Interpretation::set(const std::string& action, AffineContraction map) {
  if (map.dim != dim_) throw DimensionMismatch(dim_, map.dim);
  maps_[action] = map;
}

const AffineContraction& Interpretation::at(std::string_view action) const {
  const auto it = maps_.find(action);
  if (it == maps_.end()) throw UnknownAction(std::string(action));
  return it->second;
}

bool Interpretation::contains(std::string_view action) const { return maps_.find(action) != maps_.end(); }

double Interpretation::max_coeff(std::span<const std::string> actions) const {
  double c = 0.0;
  if (actions.empty()) {
    for (const auto& [name, f] : maps_) c = std::max(c, f.coeff);
  } else {
    for (const auto& a : actions) c = std::max(c, at(a).coeff);
  }
  return c;
}

namespace {

double parse_double(const std::string& tok, std::size_t line) {
  double v = 0.0;
  const char* first = tok.data();
  const char* last = tok.data() + tok.size();
  if (!tok.empty() && tok[0] == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw Error("interpretation line " + std::to_string(line) + ": bad number '" + tok + "'");
  }
  return v;
}

}  // namespace

Interpretation parse_interpretation(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  int dim = 0;
  Interpretation interp;
  while (std::getline(in, raw)) {
    ++lineno;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ls(raw);
    std::string kw;
    if (!(ls >> kw)) continue;
    auto fail = [&](const std::string& what) -> void {
      throw Error("interpretation line " + std::to_string(lineno) + ": " + what);
    };
    if (kw == "dim") {
      if (dim != 0) fail("duplicate dim");
      std::string tok;
      if (!(ls >> tok) || (tok != "1" && tok != "2" && tok != "3")) fail("dim must be 1, 2 or 3");
      dim = tok[0] - '0';
      interp = Interpretation(dim);
      continue;
    }
    if (kw != "map") fail("expected 'dim' or 'map', found '" + kw + "'");
    if (dim == 0) fail("'map' before 'dim'");
    std::string action;
    std::string colon;
    if (!(ls >> action >> colon) || colon != ":") fail("expected 'map <action> : ...'");
    std::vector<std::string> lin;
    std::vector<std::string> off;
    bool bar = false;
    for (std::string tok; ls >> tok;) {
      if (tok == "|") {
        if (bar) fail("more than one '|'");
        bar = true;
      } else {
        (bar ? off : lin).push_back(tok);
      }
    }
    const auto d = static_cast<std::size_t>(dim);
    if (!bar || lin.size() != d * d || off.size() != d) {
      fail("map needs " + std::to_string(d * d) + " matrix entries, '|', and " + std::to_string(d) + " offsets");
    }
    if (interp.contains(action)) fail("duplicate map for '" + action + "'");
    Matrix3 m{};
    Point o{};
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) m[i][j] = parse_double(lin[i * d + j], lineno);
      o[i] = parse_double(off[i], lineno);
    }
    interp.set(action, certify_contraction(dim, m, o));
  }
  if (dim == 0) throw Error("interpretation has no 'dim' line");
  return interp;
}

std::string to_text(const Interpretation& interp) {
  std::ostringstream out;
  out.precision(17);
  out << "dim " << interp.dim() << '\n';
  for (const auto& [name, f] : interp.maps()) {
    out << "map " << name << " :";
    for (int i = 0; i < f.dim; ++i) {
      for (int j = 0; j < f.dim; ++j) out << ' ' << f.linear[i][j];
    }
    out << " |";
    for (int i = 0; i < f.dim; ++i) out << ' ' << f.offset[i];
    out << '\n';
  }
  return out.str();
}

Point eval_stream(const Interpretation& interp, std::span<const std::string> word, const Point& base) {
  Point p = base;
  for (auto it = word.rbegin(); it != word.rend(); ++it) p = interp.at(*it)(p);
  return p;
}

}  // namespace fractlang
