#include "extenlab/dyadic.hpp"

#include <charconv>
#include <cmath>

#include "extenlab/error.hpp"

namespace extenlab {

double Dyadic::value() const { return std::ldexp(1.0, -exponent_); }

std::string Dyadic::str() const { return "2^-" + std::to_string(exponent_); }

bool is_dyadic(double value) {
  if (!(value > 0.0) || value > 1.0) return false;
  int exp = 0;
  const double mant = std::frexp(value, &exp);
  return mant == 0.5;
}

Dyadic Dyadic::from_value(double value) {
  if (!is_dyadic(value)) {
    throw Error(ErrorKind::not_dyadic, "resolution " + std::to_string(value) + " is not 2^-k");
  }
  int exp = 0;
  std::frexp(value, &exp);
  return Dyadic(1 - exp);
}

Dyadic Dyadic::parse(std::string_view text) {
  if (text.starts_with("2^-")) {
    const auto digits = text.substr(3);
    int k = -1;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), k);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() || k < 0 || k > 60) {
      throw Error(ErrorKind::not_dyadic, "cannot parse exponent in '" + std::string(text) + "'");
    }
    return Dyadic(k);
  }
  if (text == "1" || text == "2^0" || text == "2^-0") return Dyadic(0);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorKind::not_dyadic, "expected 2^-k, got '" + std::string(text) + "'");
  }
  return from_value(v);
}

}  // namespace extenlab
