#pragma once

#include <string>
#include <string_view>

namespace extenlab {

/// A resolution of the form 2^-k, k >= 0. Stored by exponent so that
/// every resolution used by the library is exactly representable.
class Dyadic {
 public:
  constexpr Dyadic() = default;
  explicit constexpr Dyadic(int exponent) : exponent_(exponent) {}

  constexpr int exponent() const { return exponent_; }
  double value() const;
  std::string str() const;  // "2^-k"

  /// Parses "2^-k" exactly, or a decimal that is an exact power of two <= 1.
  static Dyadic parse(std::string_view text);
  /// Throws not_dyadic unless `value` is exactly 2^-k.
  static Dyadic from_value(double value);

  friend constexpr bool operator==(Dyadic, Dyadic) = default;

 private:
  int exponent_ = 0;
};

bool is_dyadic(double value);

}  // namespace extenlab
