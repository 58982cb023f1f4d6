#include "extenlab/map.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>

#include "extenlab/error.hpp"
#include "extenlab/locator.hpp"

namespace extenlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double envelope_or_throw(const Modulus& m, const char* what) {
  const double l = m.lipschitz_envelope();
  if (!std::isfinite(l)) throw Error(ErrorKind::invalid_argument, std::string(what) + " needs a Lipschitz modulus");
  return l;
}

// Modulus that is zero below the smallest distance between domain points
// with different values, and `bound` beyond it.
Modulus locally_constant_on(const Net& domain, const std::vector<double>& values, std::size_t dim, double bound) {
  double gap = kInf;
  const std::size_t n = domain.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      bool differ = false;
      for (std::size_t k = 0; k < dim && !differ; ++k) differ = values[i * dim + k] != values[j * dim + k];
      if (differ) gap = std::min(gap, domain.distance(i, j));
    }
  if (!std::isfinite(gap)) return Modulus::lipschitz(0.0);
  return Modulus::locally_constant(gap * (1.0 - 1e-9), bound);
}

std::optional<int> earring_circle(std::span<const double> p) {
  const double r2 = p[0] * p[0] + p[1] * p[1];
  if (r2 <= 1e-24) return 0;
  if (p[0] <= 0.0) return std::nullopt;
  const double n = 2.0 * p[0] / r2;
  const double rn = std::round(n);
  if (rn < 1.0 || std::abs(n - rn) > 1e-6 * rn) return std::nullopt;
  return static_cast<int>(rn);
}

std::size_t reciprocal_index(double x) { return static_cast<std::size_t>(std::llround(1.0 / x)); }

double wrap_angle(double d) {
  while (d > kPi) d -= 2.0 * kPi;
  while (d <= -kPi) d += 2.0 * kPi;
  return d;
}

const Retraction& retraction_or_throw(const AnnotatedSpace& space, const std::string& name) {
  const Retraction* r = space.find_retraction(name);
  if (!r) throw Error(ErrorKind::invalid_argument, "codomain '" + space.name + "' has no retraction '" + name + "'");
  return *r;
}

std::shared_ptr<const Net> time_net(Dyadic step) {
  const std::size_t count = (std::size_t{1} << step.exponent()) + 1;
  std::vector<double> t(count);
  for (std::size_t k = 0; k < count; ++k) t[k] = static_cast<double>(k) * step.value();
  return std::make_shared<const Net>(1, std::move(t), step.value(), Metric::euclidean(1));
}

Dyadic dyadic_floor(double value) {
  int k = static_cast<int>(std::ceil(-std::log2(value) - 1e-12));
  k = std::clamp(k, 1, 14);
  return Dyadic(k);
}

// Dugundji weights: for y outside Z, Z points within 2 d(y, Z) weighted by
// 2 d(y, Z) - d(y, z).
class DugundjiWeights {
 public:
  DugundjiWeights(const SpacePair& pair) : pair_(pair), locator_(pair.y->net, pair.z) {}

  template <class F>
  void weights(std::size_t y, std::vector<std::pair<std::size_t, double>>& scratch, F&& f) const {
    const double d = locator_.nearest(y).second;
    locator_.within(y, 2.0 * d, scratch);
    for (const auto& [q, dist] : scratch) {
      const double w = 2.0 * d - dist;
      if (w > 0.0) f(q, w);
    }
  }
  std::size_t crowd(std::size_t y, std::vector<std::pair<std::size_t, double>>& scratch) const {
    const double d = locator_.nearest(y).second;
    locator_.within(y, 2.25 * d, scratch);
    return scratch.size();
  }

 private:
  const SpacePair& pair_;
  SubsetLocator locator_;
};

// Weighted average of Z rows, clamped per coordinate into the contributors' range.
void average_rows(const DugundjiWeights& w, std::size_t y, std::span<const double> rows, std::size_t dim,
                  std::vector<std::pair<std::size_t, double>>& scratch, std::span<double> out) {
  std::vector<double> acc(dim, 0.0), lo(dim, kInf), hi(dim, -kInf);
  double total = 0.0;
  w.weights(y, scratch, [&](std::size_t q, double weight) {
    total += weight;
    for (std::size_t k = 0; k < dim; ++k) {
      const double v = rows[q * dim + k];
      acc[k] += weight * v;
      lo[k] = std::min(lo[k], v);
      hi[k] = std::max(hi[k], v);
    }
  });
  for (std::size_t k = 0; k < dim; ++k) out[k] = std::clamp(acc[k] / total, lo[k], hi[k]);
}

double dugundji_factor(std::size_t crowd) { return std::max(33.0, 19.5 * static_cast<double>(crowd)); }

}  // namespace

// --- basics -------------------------------------------------------------------

double MapSample::value_distance(std::size_t i, std::size_t j) const {
  return coordinate_distance(codomain->net.metric(), value(i), value(j));
}

bool same_net(const Net& a, const Net& b) {
  if (&a == &b) return true;
  return a.dimension() == b.dimension() && a.coords() == b.coords() && a.metric() == b.metric();
}

bool same_codomain(const AnnotatedSpace& a, const AnnotatedSpace& b) {
  if (&a == &b) return true;
  return a.name == b.name && same_net(a.net, b.net);
}

namespace {
void require_same_domain(const MapSample& f, const MapSample& g) {
  if (!f.domain || !g.domain || !same_net(*f.domain, *g.domain))
    throw Error(ErrorKind::domain_mismatch, "maps are sampled on different domain nets");
  if (!same_codomain(*f.codomain, *g.codomain))
    throw Error(ErrorKind::domain_mismatch, "maps have different codomains");
}
}  // namespace

double sup_distance(const MapSample& f, const MapSample& g) {
  require_same_domain(f, g);
  if (f.size() == 0) return 0.0;
  return kernels::parallel::sup_distance(f.view(), g.view());
}

SupBound sup_distance_bound(const MapSample& f, const MapSample& g) {
  const double v = sup_distance(f, g);
  const double eps = f.domain->resolution();
  return {v, v + f.modulus(eps) + g.modulus(eps)};
}

kernels::ModulusScan modulus_scan(const MapSample& f, double slack) {
  if (!(slack >= 0.0)) throw Error(ErrorKind::invalid_argument, "slack must be >= 0");
  return kernels::parallel::modulus_scan(*f.domain, f.view(), f.modulus, slack);
}

bool check_modulus(const MapSample& f, double slack) { return modulus_scan(f, slack).excess <= 0.0; }

double codomain_gap(const MapSample& f) {
  const Net& net = f.codomain->net;
  if (!net.metric().coordinate_based()) throw Error(ErrorKind::invalid_argument, "codomain needs a coordinate metric");
  // distinct value rows, in first-seen order
  std::map<std::vector<double>, std::size_t> seen;
  std::vector<std::size_t> rows;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto v = f.value(i);
    if (seen.emplace(std::vector<double>(v.begin(), v.end()), i).second) rows.push_back(i);
  }
  if (rows.empty()) return 0.0;
  std::vector<std::unique_ptr<NeighborIndex>> levels;
  double r = net.resolution();
  for (int l = 0; l < 60; ++l, r *= 2.0) {
    levels.push_back(std::make_unique<NeighborIndex>(net, r));
    if (r > 1e6) break;
  }
  double worst = 0.0;
  const auto n = static_cast<std::ptrdiff_t>(rows.size());
#pragma omp parallel for reduction(max : worst) schedule(dynamic, 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double best = kInf;
    const auto v = f.value(rows[static_cast<std::size_t>(i)]);
    for (const auto& level : levels)
      if (auto hit = level->nearest(v)) {
        best = hit->second;
        break;
      }
    worst = std::max(worst, best);
  }
  return worst;
}

double value_diameter(const MapSample& f) {
  const std::size_t n = f.size(), dim = f.dimension();
  if (n < 2) return 0.0;
  if (n <= 4096) {
    double best = 0.0;
#pragma omp parallel for reduction(max : best) schedule(dynamic, 16)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i)
      for (std::size_t j = static_cast<std::size_t>(i) + 1; j < n; ++j)
        best = std::max(best, f.value_distance(static_cast<std::size_t>(i), j));
    return best;
  }
  std::vector<double> lo(dim, kInf), hi(dim, -kInf);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < dim; ++k) {
      lo[k] = std::min(lo[k], f.value(i)[k]);
      hi[k] = std::max(hi[k], f.value(i)[k]);
    }
  double sq = 0.0;
  for (std::size_t k = 0; k < dim; ++k) sq += (hi[k] - lo[k]) * (hi[k] - lo[k]);
  return std::sqrt(sq);
}

MapSample restrict(const MapSample& f, const SpacePair& pair) {
  if (!f.domain || !same_net(*f.domain, pair.y->net))
    throw Error(ErrorKind::domain_mismatch, "map is not defined on the pair's Y");
  MapSample out{pair.z_net, f.codomain, {}, f.modulus};
  const std::size_t dim = f.dimension();
  out.values.reserve(pair.z.size() * dim);
  for (const std::size_t y : pair.z) {
    const auto v = f.value(y);
    out.values.insert(out.values.end(), v.begin(), v.end());
  }
  return out;
}

MapSample constant_map(std::shared_ptr<const Net> domain, SpacePtr codomain, std::span<const double> value) {
  if (value.size() != codomain->net.dimension())
    throw Error(ErrorKind::invalid_argument, "constant value has the wrong dimension");
  MapSample out{std::move(domain), std::move(codomain), {}, Modulus::lipschitz(0.0)};
  out.values.reserve(out.size() * value.size());
  for (std::size_t i = 0; i < out.size(); ++i) out.values.insert(out.values.end(), value.begin(), value.end());
  return out;
}

MapSample inclusion_map(std::shared_ptr<const Net> domain, SpacePtr codomain) {
  if (domain->dimension() != codomain->net.dimension())
    throw Error(ErrorKind::invalid_argument, "inclusion needs matching dimensions");
  return {domain, codomain, domain->coords(), Modulus::lipschitz(1.0)};
}

// --- families -----------------------------------------------------------------

MapSample MapFamily::member(std::size_t n) const {
  if (n < 1 || n > n_max)
    throw Error(ErrorKind::beyond_truncation,
                "n = " + std::to_string(n) + " is outside 1.." + std::to_string(n_max) + " for family " + name);
  return member_fn(n);
}

std::vector<std::string> family_names() {
  return {"pathcomp", "sine-eclosed", "sine-eopen", "comb", "ndagger-eopen", "ndagger-eclosed", "hawaii"};
}

namespace {

MapFamily comb_family(Dyadic res) {
  MapFamily fam;
  fam.name = "comb";
  fam.pair = make_pair("interval-ndagger", res);
  fam.codomain = make_space("comb", res);
  fam.n_max = ndagger_cutoff(res) - 1;
  const SpacePair pair = fam.pair;
  const SpacePtr x = fam.codomain;
  fam.member_fn = [pair, x](std::size_t n) {
    MapSample m{pair.z_net, x, {}, {}};
    for (std::size_t i = 0; i < pair.z_net->size(); ++i) {
      const double z = pair.z_net->point(i)[0];
      if (z > 0.0 && reciprocal_index(z) <= n) {
        m.values.insert(m.values.end(), {z, 1.0});
      } else {
        m.values.insert(m.values.end(), {0.0, 1.0});
      }
    }
    const double nn = static_cast<double>(n);
    m.modulus = Modulus::locally_constant((1.0 / nn - 1.0 / (nn + 1.0)) * (1.0 - 1e-9), std::sqrt(2.0));
    return m;
  };
  fam.limit = MapSample{pair.z_net, x, {}, Modulus::lipschitz(1.0)};
  for (std::size_t i = 0; i < pair.z_net->size(); ++i) fam.limit.values.insert(fam.limit.values.end(), {pair.z_net->point(i)[0], 1.0});
  return fam;
}

MapFamily pathcomp_family(Dyadic res, const std::string& name) {
  MapFamily fam;
  fam.name = name;
  fam.pair = make_pair("interval-ndagger", res);
  fam.codomain = make_space("sine", res);
  fam.n_max = ndagger_cutoff(res);
  const SpacePair pair = fam.pair;
  const SpacePtr x = fam.codomain;
  // x_k = (1/k, 0) on the curve, converging to (0, 0) on the segment
  fam.member_fn = [pair, x](std::size_t n) {
    MapSample m{pair.z_net, x, {}, Modulus::lipschitz(1.0)};
    const double xn = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < pair.z_net->size(); ++i) {
      const double z = pair.z_net->point(i)[0];
      const bool early = z > 0.0 && reciprocal_index(z) <= n;
      m.values.insert(m.values.end(), {early ? z : xn, 0.0});
    }
    return m;
  };
  fam.limit = MapSample{pair.z_net, x, {}, Modulus::lipschitz(1.0)};
  for (std::size_t i = 0; i < pair.z_net->size(); ++i) fam.limit.values.insert(fam.limit.values.end(), {pair.z_net->point(i)[0], 0.0});
  return fam;
}

MapFamily sine_eopen_family(Dyadic res) {
  MapFamily fam;
  fam.name = "sine-eopen";
  fam.pair = make_pair("sine-ndagger", res);
  fam.codomain = fam.pair.y;
  fam.n_max = ndagger_cutoff(res) - 1;
  const SpacePair pair = fam.pair;
  const SpacePtr x = fam.codomain;
  fam.member_fn = [pair, x](std::size_t n) {
    MapSample m{pair.z_net, x, {}, {}};
    for (std::size_t i = 0; i < pair.z_net->size(); ++i) {
      const double z = pair.z_net->point(i)[0];
      const bool early = z > 0.0 && reciprocal_index(z) <= n;
      m.values.insert(m.values.end(), {early ? z : 0.0, 0.0});
    }
    const double nn = static_cast<double>(n);
    m.modulus = Modulus::locally_constant((1.0 / nn - 1.0 / (nn + 1.0)) * (1.0 - 1e-9), 1.0);
    return m;
  };
  fam.limit = inclusion_map(pair.z_net, x);
  return fam;
}

MapFamily ndagger_eopen_family(Dyadic res) {
  MapFamily fam;
  fam.name = "ndagger-eopen";
  fam.pair = make_pair("interval-ndagger", res);
  fam.codomain = make_space("ndagger", res);
  fam.n_max = ndagger_cutoff(res);
  const SpacePair pair = fam.pair;
  const SpacePtr x = fam.codomain;
  // the value m of N-dagger sits at 1/m, infinity at 0
  fam.member_fn = [pair, x](std::size_t n) {
    MapSample m{pair.z_net, x, {}, Modulus::lipschitz(1.0)};
    for (std::size_t i = 0; i < pair.z_net->size(); ++i) {
      const double z = pair.z_net->point(i)[0];
      m.values.push_back(z > 0.0 ? 1.0 / static_cast<double>(n + reciprocal_index(z)) : 0.0);
    }
    return m;
  };
  const double zero = 0.0;
  fam.limit = constant_map(pair.z_net, x, std::span<const double>(&zero, 1));
  return fam;
}

Modulus hawaii_modulus() {
  std::vector<std::pair<double, double>> table;
  for (int i = 40; i >= -1; --i) {
    const double r = std::ldexp(1.0, -i);
    table.emplace_back(r, std::sqrt(2.0 * r));
  }
  return Modulus::step(std::move(table));
}

MapFamily hawaii_family(Dyadic res) {
  MapFamily fam;
  fam.name = "hawaii";
  fam.pair = make_pair("earring-disk", res);
  fam.codomain = make_space("earring", res);
  fam.n_max = earring_cutoff(res) - 1;
  const SpacePair pair = fam.pair;
  const SpacePtr x = fam.codomain;
  fam.member_fn = [pair, x](std::size_t n) {
    MapSample m{pair.z_net, x, {}, hawaii_modulus()};
    for (std::size_t i = 0; i < pair.z_net->size(); ++i) {
      const auto p = pair.z_net->point(i);
      const auto k = earring_circle(p);
      if (!k) throw Error(ErrorKind::inconsistent_input, "Z point off the earring");
      if (*k != 0 && static_cast<std::size_t>(*k) > n)
        m.values.insert(m.values.end(), p.begin(), p.end());
      else
        m.values.insert(m.values.end(), {0.0, 0.0});
    }
    return m;
  };
  const double origin[2] = {0.0, 0.0};
  fam.limit = constant_map(pair.z_net, x, origin);
  return fam;
}

struct EclosedLayout {
  std::vector<std::size_t> block_of;  // block number from 1, 0 at infinity
};

MapFamily ndagger_eclosed_family(Dyadic res, std::size_t blocks) {
  if (blocks < 3) throw Error(ErrorKind::invalid_argument, "ndagger-eclosed needs at least three blocks");
  if (blocks > ndagger_cutoff(res)) throw Error(ErrorKind::beyond_truncation, "too many blocks for the resolution");
  std::vector<SpacePair> parts;
  for (std::size_t m = 0; m < blocks; ++m) parts.push_back(make_pair("interval-endpoints", res));
  OpcPair opc = opc_pair(parts);
  MapFamily fam;
  fam.name = "ndagger-eclosed";
  fam.pair = opc.pair;
  fam.codomain = make_space("ndagger", res);
  fam.n_max = blocks - 2;
  auto layout = std::make_shared<EclosedLayout>();
  layout->block_of.assign(fam.pair.y->size(), 0);
  for (std::size_t m = 0; m < blocks; ++m)
    for (const std::size_t y : opc.layout.block_indices[m]) layout->block_of[y] = m + 1;
  const SpacePair pair = fam.pair;
  const SpacePtr x = fam.codomain;
  auto build = [pair, x, layout](std::size_t n) {
    MapSample m{pair.z_net, x, {}, {}};
    for (const std::size_t y : pair.z) {
      const std::size_t b = layout->block_of[y];
      m.values.push_back(b != 0 && b <= n ? 1.0 / static_cast<double>(b) : 0.0);
    }
    m.modulus = locally_constant_on(*pair.z_net, m.values, 1, 1.0);
    return m;
  };
  fam.member_fn = build;
  // the last block stands in for the tail, so the limit sends it to infinity
  fam.limit = build(blocks - 1);
  return fam;
}

[[noreturn]] void refuse(const MapFamily& fam, std::optional<std::size_t> n) {
  throw Error(ErrorKind::refused, fam.name + (n ? " phi_" + std::to_string(*n) : std::string(" limit")) +
                                      " does not extend; no extension is offered");
}

MapSample comb_extension(const MapFamily& fam, std::size_t n) {
  const MapSample phi = fam.member(n);
  const auto ynet = fam.pair.y_net();
  MapSample ext{ynet, fam.codomain, {}, {}};
  ext.values.resize(ynet->size() * 2);
  double lipschitz = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double left = 1.0 / static_cast<double>(k + 1), right = 1.0 / static_cast<double>(k);
    const double from_x = k + 1 <= n ? left : 0.0;
    lipschitz = std::max(lipschitz, (2.0 + (right - from_x)) * static_cast<double>(k) * static_cast<double>(k + 1));
  }
  for (std::size_t y = 0; y < ynet->size(); ++y) {
    const double t = ynet->point(y)[0];
    double* out = ext.values.data() + 2 * y;
    if (t <= 1.0 / static_cast<double>(n + 1)) {
      out[0] = 0.0;
      out[1] = 1.0;
      continue;
    }
    std::size_t k = static_cast<std::size_t>(std::floor(1.0 / t));
    k = std::clamp<std::size_t>(k, 1, n);
    while (k > 1 && t > 1.0 / static_cast<double>(k)) --k;
    while (k < n && t <= 1.0 / static_cast<double>(k + 1)) ++k;
    const double left = 1.0 / static_cast<double>(k + 1), right = 1.0 / static_cast<double>(k);
    const double from_x = k + 1 <= n ? left : 0.0;
    if (t == right) {
      out[0] = right;
      out[1] = 1.0;
      continue;
    }
    // down the tooth at from_x, across the base, up the tooth at 1/k
    const double length = 2.0 + (right - from_x);
    const double s = (t - left) / (right - left) * length;
    if (s <= 1.0) {
      out[0] = from_x;
      out[1] = 1.0 - s;
    } else if (s <= 1.0 + (right - from_x)) {
      out[0] = from_x + (s - 1.0);
      out[1] = 0.0;
    } else {
      out[0] = right;
      out[1] = std::min(1.0, s - 1.0 - (right - from_x));
    }
  }
  // Z points carry phi_n exactly
  for (std::size_t i = 0; i < fam.pair.z.size(); ++i) {
    ext.values[2 * fam.pair.z[i]] = phi.value(i)[0];
    ext.values[2 * fam.pair.z[i] + 1] = phi.value(i)[1];
  }
  ext.modulus = Modulus::lipschitz(lipschitz);
  return ext;
}

MapSample pathcomp_extension(const MapFamily& fam, std::size_t n) {
  const MapSample phi = fam.member(n);
  const auto ynet = fam.pair.y_net();
  MapSample ext{ynet, fam.codomain, {}, {}};
  ext.values.resize(ynet->size() * 2);
  const double xn = 1.0 / static_cast<double>(n);
  // along the curve itself between consecutive x_k, constant x_n below 1/n
  for (std::size_t y = 0; y < ynet->size(); ++y) {
    const double t = ynet->point(y)[0];
    ext.values[2 * y] = t <= xn ? xn : t;
    ext.values[2 * y + 1] = t <= xn ? 0.0 : std::sin(kPi / t);
  }
  for (std::size_t i = 0; i < fam.pair.z.size(); ++i) {
    ext.values[2 * fam.pair.z[i]] = phi.value(i)[0];
    ext.values[2 * fam.pair.z[i] + 1] = phi.value(i)[1];
  }
  const double nn = static_cast<double>(n);
  ext.modulus = Modulus::lipschitz(std::sqrt(1.0 + kPi * kPi * nn * nn * nn * nn));
  return ext;
}

MapSample eclosed_extension(const MapFamily& fam, std::optional<std::size_t> n) {
  const MapSample phi = n ? fam.member(*n) : fam.limit;
  const ClopenStructure& clopen = fam.pair.y->clopen;
  // V_k: atoms meeting phi^{-1}(1/k); accepted by the clopen oracle
  std::map<double, std::vector<std::size_t>, std::greater<>> preimage;
  for (std::size_t i = 0; i < fam.pair.z.size(); ++i)
    if (phi.value(i)[0] != 0.0) preimage[phi.value(i)[0]].push_back(fam.pair.z[i]);
  std::vector<double> targets;
  std::vector<std::vector<std::size_t>> atom_sets;
  for (const auto& [value, points] : preimage) {
    if (!clopen.trace_is_clopen(fam.pair.z, points))
      throw Error(ErrorKind::refused, "a preimage is not the trace of a clopen set");
    std::vector<std::size_t> atoms;
    for (const std::size_t p : points) atoms.push_back(clopen.atom_of[p]);
    std::sort(atoms.begin(), atoms.end());
    atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
    targets.push_back(value);
    atom_sets.push_back(std::move(atoms));
  }
  const auto disjoint = disjointify(clopen, atom_sets);
  const auto ynet = fam.pair.y_net();
  MapSample ext{ynet, fam.codomain, std::vector<double>(ynet->size(), 0.0), {}};
  for (std::size_t k = 0; k < disjoint.size(); ++k)
    for (const std::size_t p : clopen.points_of(disjoint[k])) ext.values[p] = targets[k];
  ext.modulus = locally_constant_on(*ynet, ext.values, 1, 1.0);
  return ext;
}

}  // namespace

MapFamily example_family(const std::string& name, Dyadic resolution, std::size_t blocks) {
  if (name == "comb") return comb_family(resolution);
  if (name == "pathcomp" || name == "sine-eclosed") return pathcomp_family(resolution, name);
  if (name == "sine-eopen") return sine_eopen_family(resolution);
  if (name == "ndagger-eopen") return ndagger_eopen_family(resolution);
  if (name == "ndagger-eclosed") return ndagger_eclosed_family(resolution, blocks);
  if (name == "hawaii") return hawaii_family(resolution);
  throw Error(ErrorKind::unknown_name, "no map family named '" + name + "'");
}

MapSample explicit_extension(const MapFamily& fam, std::optional<std::size_t> n) {
  if (n && (*n < 1 || *n > fam.n_max))
    throw Error(ErrorKind::beyond_truncation, "n = " + std::to_string(*n) + " is beyond the truncation");
  if (fam.name == "comb") {
    if (!n) refuse(fam, n);
    return comb_extension(fam, *n);
  }
  if (fam.name == "pathcomp" || fam.name == "sine-eclosed") {
    if (!n) refuse(fam, n);
    return pathcomp_extension(fam, *n);
  }
  if (fam.name == "sine-eopen") {
    if (n) refuse(fam, n);
    return inclusion_map(fam.pair.y_net(), fam.codomain);
  }
  if (fam.name == "ndagger-eopen" || fam.name == "hawaii") {
    if (n) refuse(fam, n);
    return constant_map(fam.pair.y_net(), fam.codomain, fam.limit.value(0));
  }
  if (fam.name == "ndagger-eclosed") return eclosed_extension(fam, n);
  throw Error(ErrorKind::unknown_name, "no explicit extensions for family '" + fam.name + "'");
}

// --- Dugundji -----------------------------------------------------------------

PartialExtension dugundji_partial(const SpacePair& pair, const MapSample& f, const std::string& retraction) {
  if (!f.domain || !same_net(*f.domain, *pair.z_net))
    throw Error(ErrorKind::domain_mismatch, "map is not defined on the pair's Z");
  if (pair.z.empty()) throw Error(ErrorKind::invalid_argument, "cannot extend from an empty Z");
  const Retraction& r = retraction_or_throw(*f.codomain, retraction);
  const double lf = envelope_or_throw(f.modulus, "Dugundji extension");
  const std::size_t n = pair.y->size(), dim = f.dimension();
  PartialExtension out;
  out.values.assign(n * dim, 0.0);
  out.ok.assign(n, 1);
  const DugundjiWeights weights(pair);
  std::size_t crowd = 0;
#pragma omp parallel reduction(max : crowd)
  {
    std::vector<std::pair<std::size_t, double>> scratch;
    std::vector<double> avg(dim);
#pragma omp for schedule(dynamic, 128)
    for (std::ptrdiff_t yy = 0; yy < static_cast<std::ptrdiff_t>(n); ++yy) {
      const auto y = static_cast<std::size_t>(yy);
      std::span<double> out_row(out.values.data() + y * dim, dim);
      const std::size_t pos = pair.z_position(y);
      if (pos != SpacePair::npos) {
        std::copy_n(f.value(pos).begin(), dim, out_row.begin());
        continue;
      }
      average_rows(weights, y, f.values, dim, scratch, avg);
      crowd = std::max(crowd, weights.crowd(y, scratch));
      if (r.in_domain(avg)) {
        r.apply(avg, out_row);
      } else {
        std::copy(avg.begin(), avg.end(), out_row.begin());
        out.ok[y] = 0;
      }
    }
  }
  out.lipschitz = crowd == 0 ? lf : r.lipschitz() * lf * dugundji_factor(crowd);
  return out;
}

MapSample dugundji_extend(const SpacePair& pair, const MapSample& f, const std::string& retraction) {
  PartialExtension partial = dugundji_partial(pair, f, retraction);
  const auto failed = static_cast<std::size_t>(std::count(partial.ok.begin(), partial.ok.end(), 0));
  if (failed > 0)
    throw Error(ErrorKind::extension_failure,
                std::to_string(failed) + " weighted averages fall outside the domain of retraction '" + retraction + "'");
  return {pair.y_net(), f.codomain, std::move(partial.values), Modulus::lipschitz(partial.lipschitz)};
}

MapSample dugundji_extend_relative(const SpacePair& pair, const MapSample& f, const MapSample& base,
                                   const std::string& retraction) {
  if (!f.domain || !same_net(*f.domain, *pair.z_net))
    throw Error(ErrorKind::domain_mismatch, "map is not defined on the pair's Z");
  if (!base.domain || !same_net(*base.domain, pair.y->net))
    throw Error(ErrorKind::domain_mismatch, "base map is not defined on the pair's Y");
  if (!same_codomain(*f.codomain, *base.codomain)) throw Error(ErrorKind::domain_mismatch, "codomains differ");
  const Retraction& r = retraction_or_throw(*f.codomain, retraction);
  const double lf = envelope_or_throw(f.modulus, "relative extension");
  const double lb = envelope_or_throw(base.modulus, "relative extension");
  const std::size_t n = pair.y->size(), dim = f.dimension();
  std::vector<double> displacement(pair.z.size() * dim);
  for (std::size_t i = 0; i < pair.z.size(); ++i)
    for (std::size_t k = 0; k < dim; ++k) displacement[i * dim + k] = f.value(i)[k] - base.value(pair.z[i])[k];
  MapSample out{pair.y_net(), f.codomain, std::vector<double>(n * dim), {}};
  const DugundjiWeights weights(pair);
  std::size_t crowd = 0, failed = 0;
#pragma omp parallel reduction(max : crowd) reduction(+ : failed)
  {
    std::vector<std::pair<std::size_t, double>> scratch;
    std::vector<double> avg(dim);
#pragma omp for schedule(dynamic, 128)
    for (std::ptrdiff_t yy = 0; yy < static_cast<std::ptrdiff_t>(n); ++yy) {
      const auto y = static_cast<std::size_t>(yy);
      std::span<double> row = out.value(y);
      const std::size_t pos = pair.z_position(y);
      if (pos != SpacePair::npos) {
        std::copy_n(f.value(pos).begin(), dim, row.begin());
        continue;
      }
      average_rows(weights, y, displacement, dim, scratch, avg);
      crowd = std::max(crowd, weights.crowd(y, scratch));
      bool zero = true;
      for (std::size_t k = 0; k < dim; ++k) {
        zero = zero && avg[k] == 0.0;
        avg[k] += base.value(y)[k];
      }
      if (zero) {
        std::copy_n(base.value(y).begin(), dim, row.begin());
      } else if (r.in_domain(avg)) {
        r.apply(avg, row);
      } else {
        ++failed;
      }
    }
  }
  if (failed > 0)
    throw Error(ErrorKind::extension_failure,
                std::to_string(failed) + " perturbed values fall outside the domain of retraction '" + retraction + "'");
  const double factor = crowd == 0 ? 1.0 : dugundji_factor(crowd);
  out.modulus = Modulus::lipschitz(r.lipschitz() * (lb + (lf + lb) * factor));
  return out;
}

MapSample urysohn(std::shared_ptr<const Net> y, std::span<const std::size_t> z, std::span<const std::size_t> v) {
  const std::size_t n = y->size();
  std::vector<char> in_v(n, 0);
  for (const std::size_t i : v) {
    if (i >= n) throw Error(ErrorKind::invalid_argument, "V index out of range");
    in_v[i] = 1;
  }
  std::vector<std::size_t> zs(z.begin(), z.end()), outside;
  for (const std::size_t i : zs)
    if (i >= n) throw Error(ErrorKind::invalid_argument, "Z index out of range");
  for (std::size_t i = 0; i < n; ++i)
    if (!in_v[i]) outside.push_back(i);
  auto interval = make_space("interval", dyadic_floor(y->resolution()));
  MapSample f{y, interval, std::vector<double>(n, 0.0), Modulus::lipschitz(0.0)};
  if (zs.empty()) return f;
  if (outside.empty()) {
    std::fill(f.values.begin(), f.values.end(), 1.0);
    return f;
  }
  const double separation = set_distance(*y, zs, outside);
  if (!(separation > 0.0))
    throw Error(ErrorKind::degenerate_separation, "Z meets the closure of Y \\ V");
  const SubsetLocator to_z(*y, zs), to_c(*y, outside);
#pragma omp parallel for schedule(dynamic, 256)
  for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const double dz = to_z.nearest(i).second, dc = to_c.nearest(i).second;
    f.values[i] = dz == 0.0 ? 1.0 : dc / (dz + dc);
  }
  f.modulus = Modulus::lipschitz(2.0 / separation);
  return f;
}

// --- homotopies ---------------------------------------------------------------

std::size_t Homotopy::nearest_time(double t) const {
  const double h = step.value();
  const auto k = static_cast<std::ptrdiff_t>(std::llround(t / h));
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(k, 0, static_cast<std::ptrdiff_t>(time_count()) - 1));
}

MapSample Homotopy::slice(std::size_t k) const {
  if (k >= time_count()) throw Error(ErrorKind::invalid_argument, "time index out of range");
  const std::size_t n = base->size(), dim = map.dimension();
  MapSample s{base, map.codomain, {}, Modulus::lipschitz(slice_lipschitz)};
  s.values.assign(map.values.begin() + static_cast<std::ptrdiff_t>(k * n * dim),
                  map.values.begin() + static_cast<std::ptrdiff_t>((k + 1) * n * dim));
  return s;
}

HomotopyMode default_mode(const AnnotatedSpace& codomain) {
  if (codomain.convex) return HomotopyMode::straight_line;
  if (codomain.find_retraction("radial")) return HomotopyMode::geodesic_circle;
  throw Error(ErrorKind::invalid_argument, "no catalog homotopy for codomain '" + codomain.name + "'");
}

Homotopy homotopy_between(const MapSample& f, const MapSample& g, HomotopyMode mode, Dyadic step) {
  require_same_domain(f, g);
  if (step.exponent() < 1 || step.exponent() > 16) throw Error(ErrorKind::invalid_argument, "time step out of range");
  const double lf = envelope_or_throw(f.modulus, "homotopy"), lg = envelope_or_throw(g.modulus, "homotopy");
  const std::size_t n = f.size(), dim = f.dimension();
  Homotopy h;
  h.base = f.domain;
  h.step = step;
  const std::size_t times = h.time_count();
  h.map = MapSample{std::make_shared<const Net>(product_net(*f.domain, *time_net(step))), f.codomain,
                    std::vector<double>(n * times * dim), {}};
  auto row = [&](std::size_t k, std::size_t y) { return h.map.value(k * n + y); };

  if (mode == HomotopyMode::straight_line) {
    if (!f.codomain->convex) throw Error(ErrorKind::invalid_argument, "straight-line homotopy needs a convex codomain");
    double sup = 0.0;
    for (std::size_t y = 0; y < n; ++y) {
      sup = std::max(sup, coordinate_distance(f.codomain->net.metric(), f.value(y), g.value(y)));
      const bool equal = std::equal(f.value(y).begin(), f.value(y).end(), g.value(y).begin());
      for (std::size_t k = 0; k < times; ++k) {
        auto out = row(k, y);
        if (k == 0 || equal) {
          std::copy_n(f.value(y).begin(), dim, out.begin());
        } else if (k + 1 == times) {
          std::copy_n(g.value(y).begin(), dim, out.begin());
        } else {
          const double t = h.time(k);
          for (std::size_t c = 0; c < dim; ++c) out[c] = (1.0 - t) * f.value(y)[c] + t * g.value(y)[c];
        }
      }
    }
    h.slice_lipschitz = std::max(lf, lg);
    h.time_lipschitz = sup;
  } else {
    const Retraction& r = retraction_or_throw(*f.codomain, "radial");
    const double cx = r.center[0], cy = r.center[1], radius = r.radius;
    double widest = 0.0;
    std::vector<double> from(n), delta(n);
    for (std::size_t y = 0; y < n; ++y) {
      from[y] = std::atan2(f.value(y)[1] - cy, f.value(y)[0] - cx);
      const double to = std::atan2(g.value(y)[1] - cy, g.value(y)[0] - cx);
      const bool equal = std::equal(f.value(y).begin(), f.value(y).end(), g.value(y).begin());
      delta[y] = equal ? 0.0 : wrap_angle(to - from[y]);
      if (std::abs(delta[y]) >= kPi - 1e-12)
        throw Error(ErrorKind::epsilon_too_large, "an antipodal pair has no shorter arc");
      widest = std::max(widest, std::abs(delta[y]));
    }
    for (std::size_t y = 0; y < n; ++y)
      for (std::size_t k = 0; k < times; ++k) {
        auto out = row(k, y);
        if (k == 0 || delta[y] == 0.0) {
          std::copy_n(f.value(y).begin(), dim, out.begin());
        } else if (k + 1 == times) {
          std::copy_n(g.value(y).begin(), dim, out.begin());
        } else {
          const double a = from[y] + h.time(k) * delta[y];
          out[0] = cx + radius * std::cos(a);
          out[1] = cy + radius * std::sin(a);
        }
      }
    const double kappa = std::max(1.0, widest / (kPi - widest));
    h.slice_lipschitz = (kPi / 2.0) * (lf + kappa * (lf + lg));
    h.time_lipschitz = radius * widest;
  }
  h.map.modulus = Modulus::lipschitz(h.slice_lipschitz + h.time_lipschitz);
  return h;
}

MapSample glue_homotopy_extension(const SpacePair& pair, std::span<const std::size_t> closure, const MapSample& phibar,
                                  const Homotopy& psi, const MapSample& f, double tolerance) {
  const Net& y = pair.y->net;
  if (!same_net(*phibar.domain, y) || !same_net(*f.domain, y))
    throw Error(ErrorKind::domain_mismatch, "phibar and f must live on Y");
  if (psi.base->size() != closure.size()) throw Error(ErrorKind::domain_mismatch, "psi is not sampled on closure(V)");
  for (std::size_t i = 0; i < closure.size(); ++i) {
    const auto a = psi.base->point(i), b = y.point(closure[i]);
    if (!std::equal(a.begin(), a.end(), b.begin())) throw Error(ErrorKind::domain_mismatch, "psi base differs from closure(V)");
  }
  const auto& metric = phibar.codomain->net.metric();
  for (std::size_t i = 0; i < closure.size(); ++i)
    if (coordinate_distance(metric, psi.value(0, i), phibar.value(closure[i])) > tolerance)
      throw Error(ErrorKind::gluing_mismatch, "psi_0 differs from phibar on closure(V)");
  MapSample out = phibar;
  for (std::size_t i = 0; i < closure.size(); ++i) {
    const std::size_t k = psi.nearest_time(f.values[closure[i]]);
    std::copy_n(psi.value(k, i).begin(), out.dimension(), out.value(closure[i]).begin());
  }
  const double lp = envelope_or_throw(phibar.modulus, "gluing");
  const double lf = envelope_or_throw(f.modulus, "gluing");
  out.modulus = Modulus::lipschitz(std::max(psi.slice_lipschitz, lp) + psi.time_lipschitz * lf);
  return out;
}

double delta_for(const AnnotatedSpace& codomain, double target) {
  if (!(target > 0.0)) throw Error(ErrorKind::invalid_argument, "target diameter must be > 0");
  if (codomain.convex) return target / 2.0;
  if (codomain.find_retraction("radial")) return std::min(target / 2.0, 1.0);
  throw Error(ErrorKind::invalid_argument, "no delta table for codomain '" + codomain.name + "'");
}

MapSample small_diameter_extend(const SpacePair& pair, const MapSample& f, double target) {
  const double delta = delta_for(*f.codomain, target);
  const double diam = value_diameter(f);
  if (!(diam < delta))
    throw Error(ErrorKind::diameter_too_large,
                "diam f(Z) = " + std::to_string(diam) + " is not below delta = " + std::to_string(delta));
  MapSample ext = dugundji_extend(pair, f, f.codomain->convex ? "clamp" : "radial");
  const double out = value_diameter(ext);
  if (!(out < target))
    throw Error(ErrorKind::diameter_too_large, "extension diameter " + std::to_string(out) + " reaches the target");
  return ext;
}

Homotopy cone_contraction(const SpacePtr& x, const SpacePtr& v, std::size_t p, double target) {
  if (p >= v->size()) throw Error(ErrorKind::invalid_argument, "basepoint is not a net point of V");
  if (v->net.dimension() != x->net.dimension()) throw Error(ErrorKind::invalid_argument, "V must sit inside X");
  const SpacePair pair = spiked_base_pair(v, p);
  const std::size_t nv = v->size();
  MapSample f{pair.z_net, x, {}, Modulus::lipschitz(1.0)};
  for (const std::size_t y : pair.z) {
    const auto q = y < nv ? v->net.point(y) : v->net.point(p);
    f.values.insert(f.values.end(), q.begin(), q.end());
  }
  const MapSample ext = small_diameter_extend(pair, f, target);
  const std::size_t levels = cone_levels(*pair.y) - 1;
  const double h = 1.0 / static_cast<double>(levels);
  Homotopy out;
  out.base = std::make_shared<const Net>(v->net);
  out.step = Dyadic::from_value(h);
  const std::size_t dim = x->net.dimension();
  out.map = MapSample{std::make_shared<const Net>(product_net(*out.base, *time_net(out.step))), x,
                      std::vector<double>(nv * (levels + 1) * dim), {}};
  const std::size_t apex = pair.y->size() - 1;
  for (std::size_t k = 0; k <= levels; ++k)
    for (std::size_t i = 0; i < nv; ++i) {
      const std::size_t src = k == levels ? apex : k * nv + i;
      std::copy_n(ext.value(src).begin(), dim, out.map.value(k * nv + i).begin());
    }
  const double l = ext.modulus.lipschitz_constant();
  out.slice_lipschitz = l;
  out.time_lipschitz = l;
  out.map.modulus = Modulus::lipschitz(l);
  return out;
}

Homotopy equiconnect_homotopy(const MapSample& phi0, const MapSample& phi1, double target, Dyadic step) {
  const double delta = delta_for(*phi0.codomain, target);
  const double sup = sup_distance(phi0, phi1);
  if (!(sup < delta))
    throw Error(ErrorKind::epsilon_too_large,
                "sup distance " + std::to_string(sup) + " is not below delta = " + std::to_string(delta));
  return homotopy_between(phi0, phi1, default_mode(*phi0.codomain), step);
}

// --- winding ------------------------------------------------------------------

double max_angular_step(std::span<const double> loop, std::span<const double> center) {
  const std::size_t n = loop.size() / 2;
  if (n == 0 || loop.size() % 2 != 0) throw Error(ErrorKind::invalid_argument, "loop must be a nonempty list of planar points");
  std::vector<double> angle(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = loop[2 * i] - center[0], dy = loop[2 * i + 1] - center[1];
    if (dx == 0.0 && dy == 0.0) throw Error(ErrorKind::loop_too_coarse, "loop passes through the centre");
    angle[i] = std::atan2(dy, dx);
  }
  double widest = 0.0;
  for (std::size_t i = 0; i < n; ++i) widest = std::max(widest, std::abs(wrap_angle(angle[(i + 1) % n] - angle[i])));
  return widest;
}

int winding_number(std::span<const double> loop, std::span<const double> center) {
  const std::size_t n = loop.size() / 2;
  if (max_angular_step(loop, center) >= kPi) throw Error(ErrorKind::loop_too_coarse, "an angular step reaches pi");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    const double a = std::atan2(loop[2 * i + 1] - center[1], loop[2 * i] - center[0]);
    const double b = std::atan2(loop[2 * j + 1] - center[1], loop[2 * j] - center[0]);
    total += wrap_angle(b - a);
  }
  const double turns = total / (2.0 * kPi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-6) throw Error(ErrorKind::inconsistent_input, "angle sum is not a whole turn");
  return static_cast<int>(rounded);
}

}  // namespace extenlab
