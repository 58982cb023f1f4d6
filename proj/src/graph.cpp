#include "extenlab/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>

#include "extenlab/error.hpp"
#include "extenlab/kernels.hpp"

namespace extenlab {

UnionFind::UnionFind(std::size_t n) : parent_(n), rank_(n, 0) { std::iota(parent_.begin(), parent_.end(), 0); }

std::size_t UnionFind::find(std::size_t x) {
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];
    x = parent_[x];
  }
  return x;
}

bool UnionFind::unite(std::size_t a, std::size_t b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  if (rank_[a] < rank_[b]) std::swap(a, b);
  parent_[b] = a;
  if (rank_[a] == rank_[b]) ++rank_[a];
  return true;
}

EpsilonGraph::EpsilonGraph(const Net& net, double scale, std::vector<std::size_t> offsets,
                           std::vector<std::uint32_t> targets)
    : net_(&net), scale_(scale), offsets_(std::move(offsets)), targets_(std::move(targets)) {}

bool EpsilonGraph::has_edge(std::size_t a, std::size_t b) const {
  const auto row = neighbors(a);
  return std::binary_search(row.begin(), row.end(), static_cast<std::uint32_t>(b));
}

EpsilonGraph build_epsilon_graph(const Net& net, double scale) {
  if (!(scale > 0.0)) throw Error(ErrorKind::invalid_argument, "graph scale must be > 0");
  auto adj = kernels::parallel::epsilon_adjacency(net, scale);
  return EpsilonGraph(net, scale, std::move(adj.offsets), std::move(adj.targets));
}

namespace {
Labeling canonical(UnionFind& uf, std::span<const char> keep) {
  const std::size_t n = uf.size();
  Labeling labels(n, kNoLabel);
  std::vector<std::size_t> smallest(n, kNoLabel);
  for (std::size_t v = 0; v < n; ++v) {
    if (!keep.empty() && !keep[v]) continue;
    const std::size_t r = uf.find(v);
    if (smallest[r] == kNoLabel) smallest[r] = v;
    labels[v] = smallest[r];
  }
  return labels;
}
}  // namespace

Labeling graph_components(const EpsilonGraph& g) { return graph_components(g, {}); }

Labeling graph_components(const EpsilonGraph& g, std::span<const char> keep) {
  const std::size_t n = g.vertex_count();
  UnionFind uf(n);
  for (std::size_t v = 0; v < n; ++v) {
    if (!keep.empty() && !keep[v]) continue;
    for (const std::uint32_t w : g.neighbors(v))
      if (keep.empty() || keep[w]) uf.unite(v, w);
  }
  return canonical(uf, keep);
}

std::size_t count_components(const Labeling& labels) {
  std::size_t count = 0;
  for (std::size_t v = 0; v < labels.size(); ++v)
    if (labels[v] == v) ++count;
  return count;
}

Labeling components_at_scale(const Net& net, double scale) {
  UnionFind uf(net.size());
  const NeighborIndex index(net, scale);
  for (std::size_t i = 0; i < net.size(); ++i)
    index.for_each_within(i, [&](std::size_t j, double) {
      if (j > i) uf.unite(i, j);
    });
  return canonical(uf, {});
}

namespace {
bool reachable_above(const EpsilonGraph& g, std::size_t src, std::size_t dst, std::span<const double> height,
                     double threshold, std::vector<char>& seen, std::vector<std::size_t>& stack) {
  std::fill(seen.begin(), seen.end(), 0);
  stack.clear();
  stack.push_back(src);
  seen[src] = 1;
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    if (v == dst) return true;
    for (const std::uint32_t w : g.neighbors(v)) {
      if (seen[w] || height[w] < threshold) continue;
      seen[w] = 1;
      stack.push_back(w);
    }
  }
  return false;
}
}  // namespace

double widest_path_value(const EpsilonGraph& g, std::size_t src, std::size_t dst, std::span<const double> height) {
  const std::size_t n = g.vertex_count();
  if (src >= n || dst >= n) throw Error(ErrorKind::invalid_argument, "widest path endpoint out of range");
  if (height.size() != n) throw Error(ErrorKind::invalid_argument, "height vector has wrong length");
  if (src == dst) return height[src];
  const double cap = std::min(height[src], height[dst]);
  std::vector<double> levels;
  levels.reserve(n);
  for (const double h : height)
    if (h <= cap) levels.push_back(h);
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  std::vector<char> seen(n);
  std::vector<std::size_t> stack;
  if (!reachable_above(g, src, dst, height, levels.front(), seen, stack))
    return -std::numeric_limits<double>::infinity();
  std::size_t lo = 0, hi = levels.size() - 1;  // invariant: levels[lo] reachable
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo + 1) / 2;
    if (reachable_above(g, src, dst, height, levels[mid], seen, stack))
      lo = mid;
    else
      hi = mid - 1;
  }
  return levels[lo];
}

std::vector<std::size_t> bfs_path(const EpsilonGraph& g, std::size_t src, std::size_t dst,
                                  std::span<const char> allow) {
  const std::size_t n = g.vertex_count();
  if (src >= n || dst >= n) throw Error(ErrorKind::invalid_argument, "path endpoint out of range");
  if (!allow[src] || !allow[dst]) return {};
  std::vector<std::size_t> parent(n, kNoLabel);
  std::deque<std::size_t> queue{src};
  parent[src] = src;
  while (!queue.empty()) {
    const std::size_t v = queue.front();
    queue.pop_front();
    if (v == dst) break;
    for (const std::uint32_t w : g.neighbors(v)) {
      if (parent[w] != kNoLabel || !allow[w]) continue;
      parent[w] = v;
      queue.push_back(w);
    }
  }
  if (parent[dst] == kNoLabel) return {};
  std::vector<std::size_t> path{dst};
  while (path.back() != src) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace extenlab
