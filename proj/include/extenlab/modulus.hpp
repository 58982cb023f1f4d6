#pragma once

#include <utility>
#include <vector>

namespace extenlab {

/// Modulus of continuity omega: nondecreasing, omega(0) = 0.
///
/// Step tables are read as omega(r) = b_i for the first entry with r <= r_i,
/// and +inf past the last radius (the table makes no claim there).
class Modulus {
 public:
  enum class Kind { lipschitz, step };

  Modulus() = default;
  static Modulus lipschitz(double constant);
  static Modulus step(std::vector<std::pair<double, double>> table);
  /// Locally constant at scales below `gap`, bounded by `bound` beyond it.
  static Modulus locally_constant(double gap, double bound);

  Kind kind() const { return kind_; }
  double lipschitz_constant() const { return constant_; }
  const std::vector<std::pair<double, double>>& table() const { return table_; }

  double operator()(double r) const;
  /// Smallest R with omega(r) >= bound for every r >= R.
  double radius_reaching(double bound) const;
  /// Lipschitz constant dominating omega when one exists (step tables whose
  /// first bound is zero), else +inf.
  double lipschitz_envelope() const;

  friend bool operator==(const Modulus&, const Modulus&) = default;

 private:
  Kind kind_ = Kind::lipschitz;
  double constant_ = 0.0;
  std::vector<std::pair<double, double>> table_;
};

}  // namespace extenlab
