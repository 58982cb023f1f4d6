#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "extenlab/net.hpp"

namespace extenlab {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n);
  std::size_t find(std::size_t x);
  bool unite(std::size_t a, std::size_t b);
  std::size_t size() const { return parent_.size(); }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::uint8_t> rank_;
};

/// Distance-<=-scale graph on a net, stored as sorted CSR adjacency.
class EpsilonGraph {
 public:
  EpsilonGraph(const Net& net, double scale, std::vector<std::size_t> offsets, std::vector<std::uint32_t> targets);

  const Net& net() const { return *net_; }
  double scale() const { return scale_; }
  std::size_t vertex_count() const { return offsets_.size() - 1; }
  std::size_t edge_count() const { return targets_.size() / 2; }
  std::span<const std::uint32_t> neighbors(std::size_t v) const {
    return {targets_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  bool has_edge(std::size_t a, std::size_t b) const;

 private:
  const Net* net_;
  double scale_;
  std::vector<std::size_t> offsets_;
  std::vector<std::uint32_t> targets_;
};

/// Component labeling; each id is the smallest member index of its component.
using Labeling = std::vector<std::size_t>;

EpsilonGraph build_epsilon_graph(const Net& net, double scale);
Labeling graph_components(const EpsilonGraph& g);
/// Same labeling computed on a vertex-induced subgraph: vertices with
/// keep[v] == 0 get label SIZE_MAX and do not connect anything.
Labeling graph_components(const EpsilonGraph& g, std::span<const char> keep);
std::size_t count_components(const Labeling& labels);

/// Components of the scale graph without materializing the edges.
Labeling components_at_scale(const Net& net, double scale);

/// Max over src-dst paths of the minimum height along the path, -inf if
/// dst is unreachable. Threshold binary search over the sorted heights.
double widest_path_value(const EpsilonGraph& g, std::size_t src, std::size_t dst, std::span<const double> height);

/// Fewest-hop path from src to dst through vertices with allow[v] != 0;
/// empty if none exists.
std::vector<std::size_t> bfs_path(const EpsilonGraph& g, std::size_t src, std::size_t dst,
                                  std::span<const char> allow);

constexpr std::size_t kNoLabel = std::numeric_limits<std::size_t>::max();

}  // namespace extenlab
