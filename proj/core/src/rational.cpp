#include "fractlang/rational.hpp"

#include <cctype>

namespace fractlang {

namespace {

using boost::multiprecision::cpp_int;

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

bool parse_rational(std::string_view text, Rational& out) {
  bool negative = false;
  if (!text.empty() && text.front() == '-') {
    negative = true;
    text.remove_prefix(1);
  }
  if (const auto slash = text.find('/'); slash != std::string_view::npos) {
    const auto num = text.substr(0, slash);
    const auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return false;
    const cpp_int d{std::string(den)};
    if (d == 0) return false;
    out = Rational(cpp_int(std::string(num)), d);
  } else if (const auto dot = text.find('.'); dot != std::string_view::npos) {
    const auto whole = text.substr(0, dot);
    const auto frac = text.substr(dot + 1);
    if (!(all_digits(whole) || whole.empty()) || !all_digits(frac)) return false;
    cpp_int scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    const cpp_int w = whole.empty() ? cpp_int(0) : cpp_int(std::string(whole));
    out = Rational(w * scale + cpp_int(std::string(frac)), scale);
  } else {
    if (!all_digits(text)) return false;
    out = Rational(cpp_int(std::string(text)));
  }
  if (negative) out = -out;
  return true;
}

std::string to_string(const Rational& r) {
  const auto num = boost::multiprecision::numerator(r);
  const auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& r) { return r.convert_to<double>(); }

}  // namespace fractlang
