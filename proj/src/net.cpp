#include "extenlab/net.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "extenlab/error.hpp"

namespace extenlab {

double blocks_distance(std::span<const std::size_t> blocks, std::span<const double> a,
                       std::span<const double> b) {
  double best = 0.0;
  std::size_t offset = 0;
  for (const std::size_t width : blocks) {
    double sq = 0.0;
    for (std::size_t k = offset; k < offset + width; ++k) {
      const double diff = a[k] - b[k];
      sq += diff * diff;
    }
    best = std::max(best, sq);
    offset += width;
  }
  return std::sqrt(best);
}

double coordinate_distance(const Metric& metric, std::span<const double> a, std::span<const double> b) {
  switch (metric.kind) {
    case Metric::Kind::blocks:
      return blocks_distance(metric.blocks, a, b);
    case Metric::Kind::cone: {
      const std::size_t last = a.size() - 1;
      const double base = blocks_distance(metric.blocks, a.first(last), b.first(last));
      const double direct = std::max(base, std::abs(a[last] - b[last]));
      const double via_apex = (1.0 - a[last]) + (1.0 - b[last]);
      return std::min(direct, via_apex);
    }
    case Metric::Kind::matrix:
      break;
  }
  throw Error(ErrorKind::invalid_argument, "matrix metric has no coordinate distance");
}

Net::Net(std::size_t dimension, std::vector<double> coords, double resolution, Metric metric)
    : dim_(dimension), coords_(std::move(coords)), resolution_(resolution), metric_(std::move(metric)) {
  if (dim_ == 0) throw Error(ErrorKind::invalid_argument, "net dimension must be >= 1");
  if (coords_.size() % dim_ != 0) throw Error(ErrorKind::invalid_argument, "coordinate count not a multiple of dimension");
  if (!(resolution_ > 0.0)) throw Error(ErrorKind::invalid_argument, "net resolution must be > 0");
  if (metric_.kind == Metric::Kind::blocks || metric_.kind == Metric::Kind::cone) {
    const std::size_t total = std::accumulate(metric_.blocks.begin(), metric_.blocks.end(), std::size_t{0});
    const std::size_t expect = metric_.kind == Metric::Kind::cone ? dim_ - 1 : dim_;
    if (total != expect) throw Error(ErrorKind::invalid_argument, "metric blocks do not cover the coordinates");
  } else {
    const std::size_t n = size();
    if (metric_.matrix.size() != n * n) throw Error(ErrorKind::invalid_argument, "distance matrix has wrong size");
  }
}

double Net::distance(std::size_t i, std::size_t j) const {
  if (metric_.kind == Metric::Kind::matrix) return metric_.matrix[i * size() + j];
  return coordinate_distance(metric_, point(i), point(j));
}

double Net::distance_to(std::size_t i, std::span<const double> p) const {
  return coordinate_distance(metric_, point(i), p);
}

Net Net::subset(std::span<const std::size_t> indices) const {
  std::vector<double> coords;
  coords.reserve(indices.size() * dim_);
  for (const std::size_t i : indices) {
    const auto p = point(i);
    coords.insert(coords.end(), p.begin(), p.end());
  }
  Metric metric = metric_;
  if (metric_.kind == Metric::Kind::matrix) {
    const std::size_t n = size();
    metric.matrix.assign(indices.size() * indices.size(), 0.0);
    for (std::size_t a = 0; a < indices.size(); ++a)
      for (std::size_t b = 0; b < indices.size(); ++b)
        metric.matrix[a * indices.size() + b] = metric_.matrix[indices[a] * n + indices[b]];
  }
  return Net(dim_, std::move(coords), resolution_, std::move(metric));
}

Net Net::with_resolution(double resolution) const {
  Net copy = *this;
  if (!(resolution > 0.0)) throw Error(ErrorKind::invalid_argument, "net resolution must be > 0");
  copy.resolution_ = resolution;
  return copy;
}

void Net::validate(std::size_t triangle_samples) const {
  if (!(resolution_ > 0.0)) throw Error(ErrorKind::invalid_argument, "resolution must be > 0");
  for (const double c : coords_)
    if (!std::isfinite(c)) throw Error(ErrorKind::invalid_argument, "non-finite coordinate");
  if (metric_.kind != Metric::Kind::matrix) return;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    if (distance(i, i) != 0.0) throw Error(ErrorKind::invalid_argument, "nonzero self-distance");
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = distance(i, j);
      if (!std::isfinite(d) || d < 0.0 || d != distance(j, i))
        throw Error(ErrorKind::invalid_argument, "distance matrix not symmetric, finite and nonnegative");
    }
  }
  if (n < 3) return;
  // deterministic spot check of the triangle inequality
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  auto next = [&]() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return static_cast<std::size_t>(state % n);
  };
  for (std::size_t s = 0; s < triangle_samples; ++s) {
    const std::size_t a = next(), b = next(), c = next();
    if (distance(a, c) > distance(a, b) + distance(b, c) + 1e-12)
      throw Error(ErrorKind::invalid_argument, "distance matrix violates the triangle inequality");
  }
}

// ---------------------------------------------------------------------------

namespace {
constexpr std::size_t kMaxGridDimension = 6;

std::uint64_t mix(std::uint64_t h) {
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdULL;
  h ^= h >> 33;
  h *= 0xc4ceb9fe1a85ec53ULL;
  h ^= h >> 33;
  return h;
}
}  // namespace

NeighborIndex::NeighborIndex(const Net& net, double radius) : net_(&net), radius_(radius) {
  if (!(radius > 0.0)) throw Error(ErrorKind::invalid_argument, "neighbour radius must be > 0");
  const std::size_t n = net.size();
  brute_ = !net.metric().coordinate_based() || net.dimension() > kMaxGridDimension;
  if (brute_) return;

  std::vector<std::uint64_t> hashes(n);
  std::vector<std::int64_t> cell(net.dimension());
  for (std::size_t i = 0; i < n; ++i) {
    cell_of(net.point(i), cell);
    hashes[i] = cell_hash(cell);
  }
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), 0U);
  std::stable_sort(order_.begin(), order_.end(),
                   [&](std::uint32_t a, std::uint32_t b) { return hashes[a] < hashes[b]; });
  buckets_.reserve(n);
  for (std::uint32_t q = 0; q < n;) {
    std::uint32_t end = q;
    while (end < n && hashes[order_[end]] == hashes[order_[q]]) ++end;
    buckets_.emplace(hashes[order_[q]], std::make_pair(q, end));
    q = end;
  }
  if (net.metric().kind == Metric::Kind::cone) {
    in_apex_zone_.assign(n, 0);
    const std::size_t last = net.dimension() - 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (net.point(i)[last] >= 1.0 - radius_) {
        in_apex_zone_[i] = 1;
        apex_zone_.push_back(static_cast<std::uint32_t>(i));
      }
    }
  }
}

std::uint64_t NeighborIndex::cell_hash(std::span<const std::int64_t> cell) const {
  std::uint64_t h = 0x2545f4914f6cdd1dULL;
  for (const std::int64_t c : cell) h = mix(h ^ (static_cast<std::uint64_t>(c) + 0x9e3779b97f4a7c15ULL + (h << 6)));
  return h;
}

void NeighborIndex::cell_of(std::span<const double> p, std::vector<std::int64_t>& cell) const {
  cell.resize(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) cell[k] = static_cast<std::int64_t>(std::floor(p[k] / radius_));
}

void NeighborIndex::within_point(std::span<const double> p, std::vector<std::size_t>& out) const {
  out.clear();
  const Net& net = *net_;
  if (!net.metric().coordinate_based())
    throw Error(ErrorKind::invalid_argument, "ambient queries need a coordinate metric");
  if (brute_ || net.metric().kind == Metric::Kind::cone) {
    for (std::size_t j = 0; j < net.size(); ++j)
      if (net.distance_to(j, p) <= radius_) out.push_back(j);
    return;
  }
  scan_cells(p, [&](std::size_t j) {
    if (net.distance_to(j, p) <= radius_) out.push_back(j);
  });
  std::sort(out.begin(), out.end());
}

std::optional<std::pair<std::size_t, double>> NeighborIndex::nearest(std::span<const double> p) const {
  std::vector<std::size_t> hits;
  within_point(p, hits);
  std::optional<std::pair<std::size_t, double>> best;
  for (const std::size_t j : hits) {
    const double d = net_->distance_to(j, p);
    if (!best || d < best->second) best = std::make_pair(j, d);
  }
  return best;
}

}  // namespace extenlab
