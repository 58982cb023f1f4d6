#include "extenlab/locator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "extenlab/error.hpp"

namespace extenlab {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double extent(const Net& net) {
  if (net.size() == 0) return 1.0;
  const std::size_t d = net.dimension();
  std::vector<double> lo(d, kInf), hi(d, -kInf);
  for (std::size_t i = 0; i < net.size(); ++i)
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = std::min(lo[k], net.point(i)[k]);
      hi[k] = std::max(hi[k], net.point(i)[k]);
    }
  double sq = 0.0;
  for (std::size_t k = 0; k < d; ++k) sq += (hi[k] - lo[k]) * (hi[k] - lo[k]);
  return std::max(std::sqrt(sq), 2.0);
}
}  // namespace

SubsetLocator::SubsetLocator(const Net& net, std::vector<std::size_t> subset) : net_(&net), subset_(std::move(subset)) {
  for (const std::size_t s : subset_)
    if (s >= net.size()) throw Error(ErrorKind::invalid_argument, "subset index out of range");
  if (subset_.empty() || !net.metric().coordinate_based()) return;
  sub_net_ = std::make_unique<Net>(net.subset(subset_));
  const double top = 2.0 * extent(net);
  double r = net.resolution();
  while (true) {
    levels_.push_back(std::make_unique<NeighborIndex>(*sub_net_, r));
    if (r >= top) break;
    r *= 2.0;
  }
}

std::pair<std::size_t, double> SubsetLocator::nearest(std::size_t y) const {
  if (subset_.empty()) throw Error(ErrorKind::invalid_argument, "nearest point in an empty set");
  if (levels_.empty()) {
    std::pair<std::size_t, double> best{0, distance(y, 0)};
    for (std::size_t q = 1; q < subset_.size(); ++q) {
      const double d = distance(y, q);
      if (d < best.second) best = {q, d};
    }
    return best;
  }
  const auto p = net_->point(y);
  for (const auto& level : levels_)
    if (auto hit = level->nearest(p)) return *hit;
  throw Error(ErrorKind::inconsistent_input, "locator levels do not cover the net");
}

void SubsetLocator::within(std::size_t y, double radius, std::vector<std::pair<std::size_t, double>>& out) const {
  out.clear();
  if (subset_.empty()) return;
  if (levels_.empty()) {
    for (std::size_t q = 0; q < subset_.size(); ++q) {
      const double d = distance(y, q);
      if (d <= radius) out.emplace_back(q, d);
    }
    return;
  }
  const NeighborIndex* chosen = levels_.back().get();
  for (const auto& level : levels_)
    if (level->radius() >= radius) {
      chosen = level.get();
      break;
    }
  std::vector<std::size_t> hits;
  const auto p = net_->point(y);
  if (chosen->radius() >= radius) {
    chosen->within_point(p, hits);
  } else {
    hits.resize(subset_.size());
    for (std::size_t q = 0; q < hits.size(); ++q) hits[q] = q;
  }
  for (const std::size_t q : hits) {
    const double d = sub_net_->distance_to(q, p);
    if (d <= radius) out.emplace_back(q, d);
  }
}

double set_distance(const Net& net, std::span<const std::size_t> a, std::span<const std::size_t> b) {
  if (a.empty() || b.empty()) return kInf;
  const SubsetLocator locator(net, {b.begin(), b.end()});
  double best = kInf;
  for (const std::size_t i : a) best = std::min(best, locator.nearest(i).second);
  return best;
}

}  // namespace extenlab
