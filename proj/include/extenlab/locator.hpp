#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "extenlab/net.hpp"

namespace extenlab {

/// Nearest-point and ball queries from net points to a fixed subset of the
/// same net, at any radius. Grid indexes at doubling radii for coordinate
/// metrics, plain scans for explicit matrices.
class SubsetLocator {
 public:
  SubsetLocator(const Net& net, std::vector<std::size_t> subset);

  const std::vector<std::size_t>& subset() const { return subset_; }
  bool empty() const { return subset_.empty(); }

  /// (position in subset, distance) of the nearest subset point to net point y.
  std::pair<std::size_t, double> nearest(std::size_t y) const;
  /// Positions of subset points within `radius` of net point y, ascending, with distances.
  void within(std::size_t y, double radius, std::vector<std::pair<std::size_t, double>>& out) const;

 private:
  double distance(std::size_t y, std::size_t position) const { return net_->distance(y, subset_[position]); }

  const Net* net_;
  std::vector<std::size_t> subset_;
  std::unique_ptr<Net> sub_net_;
  std::vector<std::unique_ptr<NeighborIndex>> levels_;
};

/// d(A, B) for index sets of one net; +inf if either is empty.
double set_distance(const Net& net, std::span<const std::size_t> a, std::span<const std::size_t> b);

}  // namespace extenlab
