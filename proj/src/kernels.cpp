#include "extenlab/kernels.hpp"

#include <algorithm>
#include <memory>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace extenlab::kernels {

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace {

Adjacency from_rows(std::vector<std::vector<std::uint32_t>>& rows) {
  Adjacency adj;
  adj.offsets.assign(rows.size() + 1, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) adj.offsets[i + 1] = adj.offsets[i] + rows[i].size();
  adj.targets.resize(adj.offsets.back());
  for (std::size_t i = 0; i < rows.size(); ++i) std::copy(rows[i].begin(), rows[i].end(), adj.targets.begin() + adj.offsets[i]);
  return adj;
}

// Larger excess wins; ties go to the lexicographically smaller pair so that
// serial and parallel scans agree on the witness.
void consider(ModulusScan& best, double excess, std::size_t a, std::size_t b) {
  if (excess > best.excess || (excess == best.excess && std::make_pair(a, b) < std::make_pair(best.a, best.b))) {
    best.excess = excess;
    best.a = a;
    best.b = b;
  }
}

double value_distance(const ValueView& f, std::size_t i, std::size_t j) {
  return coordinate_distance(*f.metric, f.row(i), f.row(j));
}

// Upper bound on the diameter of the value set: the bounding-box diagonal
// dominates every blocks-metric distance.
double value_diameter_bound(const ValueView& f, std::size_t n) {
  if (n == 0) return 0.0;
  std::vector<double> lo(f.dimension, std::numeric_limits<double>::infinity());
  std::vector<double> hi(f.dimension, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = f.row(i);
    for (std::size_t k = 0; k < f.dimension; ++k) {
      lo[k] = std::min(lo[k], r[k]);
      hi[k] = std::max(hi[k], r[k]);
    }
  }
  double sq = 0.0;
  for (std::size_t k = 0; k < f.dimension; ++k) sq += (hi[k] - lo[k]) * (hi[k] - lo[k]);
  // cone codomains can exceed the Euclidean bound only through the apex shortcut, which is shorter
  return std::sqrt(sq);
}

bool flat_euclidean(const Metric& m, std::size_t dim) {
  return m.kind == Metric::Kind::blocks && m.blocks.size() == 1 && m.blocks[0] == dim;
}

// Row i of an all-pairs Lipschitz scan over flat Euclidean coordinates; same
// arithmetic as coordinate_distance, so results match the generic path bit for bit.
template <std::size_t DX, std::size_t DV>
void lipschitz_row_fixed(const double* x, std::size_t dx_rt, const double* v, std::size_t dv_rt, std::size_t n,
                         std::size_t i, double lipschitz, double slack, ModulusScan& best, std::size_t& count) {
  const std::size_t dx = DX ? DX : dx_rt, dv = DV ? DV : dv_rt;
  const double* xi = x + i * dx;
  const double* vi = v + i * dv;
  auto excess_at = [&](std::size_t j) {
    const double* xj = x + j * dx;
    const double* vj = v + j * dv;
    double sx = 0.0, sv = 0.0;
    for (std::size_t k = 0; k < dx; ++k) sx += (xi[k] - xj[k]) * (xi[k] - xj[k]);
    for (std::size_t k = 0; k < dv; ++k) sv += (vi[k] - vj[k]) * (vi[k] - vj[k]);
    const double d = std::sqrt(sx);
    return std::sqrt(sv) - (d <= 0.0 ? 0.0 : lipschitz * d) - slack;
  };
  double row_best = -std::numeric_limits<double>::infinity();
#pragma omp simd reduction(max : row_best)
  for (std::size_t j = i + 1; j < n; ++j) row_best = std::max(row_best, excess_at(j));
  count += n - i - 1;
  if (row_best < best.excess) return;
  for (std::size_t j = i + 1; j < n; ++j)
    if (excess_at(j) == row_best) {
      consider(best, row_best, i, j);
      break;
    }
}

void lipschitz_row(const double* x, std::size_t dx, const double* v, std::size_t dv, std::size_t n, std::size_t i,
                   double lipschitz, double slack, ModulusScan& best, std::size_t& count) {
  if (i + 1 >= n) return;
  if (dx == 1 && dv == 1) return lipschitz_row_fixed<1, 1>(x, dx, v, dv, n, i, lipschitz, slack, best, count);
  if (dx == 1 && dv == 2) return lipschitz_row_fixed<1, 2>(x, dx, v, dv, n, i, lipschitz, slack, best, count);
  if (dx == 2 && dv == 1) return lipschitz_row_fixed<2, 1>(x, dx, v, dv, n, i, lipschitz, slack, best, count);
  if (dx == 2 && dv == 2) return lipschitz_row_fixed<2, 2>(x, dx, v, dv, n, i, lipschitz, slack, best, count);
  lipschitz_row_fixed<0, 0>(x, dx, v, dv, n, i, lipschitz, slack, best, count);
}

}  // namespace

namespace serial {

Adjacency epsilon_adjacency(const Net& net, double scale) {
  const std::size_t n = net.size();
  std::vector<std::vector<std::uint32_t>> rows(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (net.distance(i, j) <= scale) {
        rows[i].push_back(static_cast<std::uint32_t>(j));
        rows[j].push_back(static_cast<std::uint32_t>(i));
      }
  for (auto& row : rows) std::sort(row.begin(), row.end());
  return from_rows(rows);
}

ModulusScan modulus_scan(const Net& domain, const ValueView& f, const Modulus& omega, double slack) {
  ModulusScan best;
  best.excess = -std::numeric_limits<double>::infinity();
  const std::size_t n = domain.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double excess = value_distance(f, i, j) - omega(domain.distance(i, j)) - slack;
      consider(best, excess, i, j);
      ++best.pairs_examined;
    }
  return best;
}

double sup_distance(const ValueView& f, const ValueView& g) {
  double best = 0.0;
  const std::size_t n = f.values.size() / f.dimension;
  for (std::size_t i = 0; i < n; ++i) best = std::max(best, coordinate_distance(*f.metric, f.row(i), g.row(i)));
  return best;
}

}  // namespace serial

namespace parallel {

Adjacency epsilon_adjacency(const Net& net, double scale) {
  const std::size_t n = net.size();
  const NeighborIndex index(net, scale);
  std::vector<std::vector<std::uint32_t>> rows(n);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    auto& row = rows[i];
    index.for_each_within(i, [&](std::size_t j, double) { row.push_back(static_cast<std::uint32_t>(j)); });
    std::sort(row.begin(), row.end());
  }
  return from_rows(rows);
}

ModulusScan modulus_scan(const Net& domain, const ValueView& f, const Modulus& omega, double slack) {
  const std::size_t n = domain.size();
  const double diam = value_diameter_bound(f, n);
  const double reach = omega.radius_reaching(diam - slack);
  ModulusScan best;
  best.excess = -std::numeric_limits<double>::infinity();
  if (n < 2) return best;

  const ValueView coords{domain.coords(), domain.dimension(), &domain.metric()};
  // a pruning radius comparable to the domain's extent saves nothing over a plain scan
  const bool all_pairs = !std::isfinite(reach) || reach >= 1e200 ||
                         (domain.metric().coordinate_based() && reach >= 0.25 * value_diameter_bound(coords, n));
  std::unique_ptr<NeighborIndex> index;
  if (!all_pairs && reach > 0.0) index = std::make_unique<NeighborIndex>(domain, reach);

  const bool flat = all_pairs && omega.kind() == Modulus::Kind::lipschitz && flat_euclidean(domain.metric(), domain.dimension()) &&
                    flat_euclidean(*f.metric, f.dimension);
  std::size_t examined = 0;
#pragma omp parallel
  {
    ModulusScan local;
    local.excess = -std::numeric_limits<double>::infinity();
    std::size_t local_count = 0;
#pragma omp for schedule(dynamic, 64) nowait
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      if (flat) {
        lipschitz_row(domain.coords().data(), domain.dimension(), f.values.data(), f.dimension, n, i,
                      omega.lipschitz_constant(), slack, local, local_count);
      } else if (all_pairs) {
        for (std::size_t j = i + 1; j < n; ++j) {
          consider(local, value_distance(f, i, j) - omega(domain.distance(i, j)) - slack, i, j);
          ++local_count;
        }
      } else if (index) {
        index->for_each_within(i, [&](std::size_t j, double d) {
          if (j <= i) return;
          consider(local, value_distance(f, i, j) - omega(d) - slack, i, j);
          ++local_count;
        });
      }
    }
#pragma omp critical
    {
      consider(best, local.excess, local.a, local.b);
      examined += local_count;
    }
  }
  best.pairs_examined = examined;
  return best;
}

double sup_distance(const ValueView& f, const ValueView& g) {
  double best = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(f.values.size() / f.dimension);
#pragma omp parallel for reduction(max : best)
  for (std::ptrdiff_t i = 0; i < n; ++i)
    best = std::max(best, coordinate_distance(*f.metric, f.row(static_cast<std::size_t>(i)),
                                              g.row(static_cast<std::size_t>(i))));
  return best;
}

}  // namespace parallel

}  // namespace extenlab::kernels
