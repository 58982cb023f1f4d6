#include "extenlab/modulus.hpp"

#include <cmath>
#include <limits>

#include "extenlab/error.hpp"

namespace extenlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Modulus Modulus::lipschitz(double constant) {
  if (!(constant >= 0.0) || !std::isfinite(constant))
    throw Error(ErrorKind::invalid_argument, "Lipschitz constant must be finite and >= 0");
  Modulus m;
  m.kind_ = Kind::lipschitz;
  m.constant_ = constant;
  return m;
}

Modulus Modulus::step(std::vector<std::pair<double, double>> table) {
  if (table.empty()) throw Error(ErrorKind::invalid_argument, "step modulus needs at least one entry");
  double prev_r = 0.0, prev_b = 0.0;
  for (const auto& [r, b] : table) {
    if (!(r > prev_r) || !(b >= prev_b) || !std::isfinite(b))
      throw Error(ErrorKind::invalid_argument, "step modulus must have increasing radii and nondecreasing bounds");
    prev_r = r;
    prev_b = b;
  }
  Modulus m;
  m.kind_ = Kind::step;
  m.table_ = std::move(table);
  return m;
}

Modulus Modulus::locally_constant(double gap, double bound) {
  if (!(gap > 0.0)) throw Error(ErrorKind::invalid_argument, "gap must be > 0");
  return step({{std::nextafter(gap, 0.0), 0.0}, {1e300, bound}});
}

double Modulus::operator()(double r) const {
  if (r <= 0.0) return 0.0;
  if (kind_ == Kind::lipschitz) return constant_ * r;
  for (const auto& [radius, bound] : table_)
    if (r <= radius) return bound;
  return kInf;
}

double Modulus::radius_reaching(double bound) const {
  if (bound <= 0.0) return 0.0;
  if (kind_ == Kind::lipschitz) return constant_ > 0.0 ? bound / constant_ : kInf;
  for (std::size_t i = 0; i < table_.size(); ++i)
    if (table_[i].second >= bound) return i == 0 ? 0.0 : table_[i - 1].first;
  return table_.back().first;
}

double Modulus::lipschitz_envelope() const {
  if (kind_ == Kind::lipschitz) return constant_;
  if (table_.front().second > 0.0) return kInf;
  double best = 0.0;
  for (std::size_t i = 1; i < table_.size(); ++i) best = std::max(best, table_[i].second / table_[i - 1].first);
  return best;
}

}  // namespace extenlab
