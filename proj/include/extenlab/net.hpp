#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace extenlab {

/// Metric attached to a net.
///
/// `blocks` splits the coordinates into consecutive blocks and takes the max
/// of the per-block Euclidean norms; a single block is the ambient Euclidean
/// metric, several blocks are the max metric on a product. `cone` applies the
/// blocks metric to all but the last coordinate (the cone level t in [0,1])
/// and pushes it through the collapse of the t = 1 level. `matrix` is an
/// explicit distance table.
struct Metric {
  enum class Kind { blocks, cone, matrix };

  Kind kind = Kind::blocks;
  std::vector<std::size_t> blocks;  // blocks / cone base
  std::vector<double> matrix;       // row-major, matrix kind only

  static Metric euclidean(std::size_t dim) { return {Kind::blocks, {dim}, {}}; }
  static Metric max_of(std::vector<std::size_t> blocks) { return {Kind::blocks, std::move(blocks), {}}; }
  static Metric cone_over(std::vector<std::size_t> base_blocks) { return {Kind::cone, std::move(base_blocks), {}}; }
  static Metric explicit_matrix(std::vector<double> m) { return {Kind::matrix, {}, std::move(m)}; }

  bool is_euclidean() const { return kind == Kind::blocks && blocks.size() == 1; }
  /// Coordinate-free metrics (blocks, cone) can measure arbitrary ambient points.
  bool coordinate_based() const { return kind != Kind::matrix; }

  friend bool operator==(const Metric&, const Metric&) = default;
};

double blocks_distance(std::span<const std::size_t> blocks, std::span<const double> a,
                       std::span<const double> b);
double coordinate_distance(const Metric& metric, std::span<const double> a, std::span<const double> b);

/// A finite point set standing in for a compact metric space at resolution ε.
class Net {
 public:
  Net() = default;
  Net(std::size_t dimension, std::vector<double> coords, double resolution, Metric metric);

  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  std::size_t dimension() const { return dim_; }
  double resolution() const { return resolution_; }
  const Metric& metric() const { return metric_; }
  const std::vector<double>& coords() const { return coords_; }

  std::span<const double> point(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  double distance(std::size_t i, std::size_t j) const;
  /// Distance from net point i to an ambient point; not available for matrix metrics.
  double distance_to(std::size_t i, std::span<const double> p) const;

  /// Sub-net on the given indices, same metric (matrix rows/cols restricted).
  Net subset(std::span<const std::size_t> indices) const;
  Net with_resolution(double resolution) const;

  /// Validates the Net invariants: resolution > 0, finite coordinates,
  /// symmetric finite matrix with zero diagonal, triangle inequality on
  /// `triangle_samples` deterministic triples (matrix metric only).
  void validate(std::size_t triangle_samples = 2000) const;

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
  double resolution_ = 1.0;
  Metric metric_;
};

/// Fixed-radius neighbour queries over a net. Grid hashing on the
/// coordinates (every supported metric dominates the Chebyshev distance,
/// apart from the cone's apex shortcut which is handled separately);
/// brute force for matrix metrics and high dimensions.
class NeighborIndex {
 public:
  NeighborIndex(const Net& net, double radius);

  double radius() const { return radius_; }
  const Net& net() const { return *net_; }

  /// Calls f(j, d) for every j != i with d(i, j) <= radius, in no particular order.
  template <class F>
  void for_each_within(std::size_t i, F&& f) const;

  /// Net points within radius of an ambient point (coordinate metrics only).
  void within_point(std::span<const double> p, std::vector<std::size_t>& out) const;
  /// Nearest net point within radius of p, if any.
  std::optional<std::pair<std::size_t, double>> nearest(std::span<const double> p) const;

 private:
  std::uint64_t cell_hash(std::span<const std::int64_t> cell) const;
  void cell_of(std::span<const double> p, std::vector<std::int64_t>& cell) const;
  template <class F>
  void scan_cells(std::span<const double> p, F&& f) const;

  const Net* net_;
  double radius_;
  bool brute_ = false;
  std::vector<std::uint32_t> order_;
  std::unordered_map<std::uint64_t, std::pair<std::uint32_t, std::uint32_t>> buckets_;
  std::vector<std::uint32_t> apex_zone_;  // cone metric: points with t >= 1 - radius
  std::vector<char> in_apex_zone_;
};

template <class F>
void NeighborIndex::scan_cells(std::span<const double> p, F&& f) const {
  const std::size_t dim = net_->dimension();
  std::vector<std::int64_t> base(dim), cell(dim);
  cell_of(p, base);
  std::size_t combos = 1;
  for (std::size_t k = 0; k < dim; ++k) combos *= 3;
  for (std::size_t c = 0; c < combos; ++c) {
    std::size_t code = c;
    for (std::size_t k = 0; k < dim; ++k) {
      cell[k] = base[k] + static_cast<std::int64_t>(code % 3) - 1;
      code /= 3;
    }
    const auto it = buckets_.find(cell_hash(cell));
    if (it == buckets_.end()) continue;
    for (std::uint32_t q = it->second.first; q < it->second.second; ++q) f(static_cast<std::size_t>(order_[q]));
  }
}

template <class F>
void NeighborIndex::for_each_within(std::size_t i, F&& f) const {
  const Net& net = *net_;
  if (brute_) {
    for (std::size_t j = 0; j < net.size(); ++j) {
      if (j == i) continue;
      const double d = net.distance(i, j);
      if (d <= radius_) f(j, d);
    }
    return;
  }
  const bool i_in_zone = !in_apex_zone_.empty() && in_apex_zone_[i];
  scan_cells(net.point(i), [&](std::size_t j) {
    if (j == i) return;
    if (i_in_zone && in_apex_zone_[j]) return;  // handled by the zone scan
    const double d = net.distance(i, j);
    if (d <= radius_) f(j, d);
  });
  if (i_in_zone) {
    for (const std::uint32_t j : apex_zone_) {
      if (j == i) continue;
      const double d = net.distance(i, j);
      if (d <= radius_) f(static_cast<std::size_t>(j), d);
    }
  }
}

}  // namespace extenlab
