#include "extenlab/space.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <numeric>
#include <set>
#include <unordered_map>

#include "extenlab/error.hpp"
#include "extenlab/graph.hpp"

namespace extenlab {

namespace {

constexpr double kPi = std::numbers::pi;

// Accumulates labelled 2-d (or 1-d) points, dropping exact duplicates.
class PointBuilder {
 public:
  explicit PointBuilder(std::size_t dim) : dim_(dim) {}

  std::size_t add(std::vector<double> p, std::size_t label, int circle = 0) {
    auto [it, inserted] = seen_.emplace(p, coords_.size() / dim_);
    if (!inserted) return it->second;
    coords_.insert(coords_.end(), p.begin(), p.end());
    labels_.push_back(label);
    circles_.push_back(circle);
    return it->second;
  }

  std::size_t size() const { return labels_.size(); }
  std::vector<double>& coords() { return coords_; }
  std::vector<std::size_t>& labels() { return labels_; }
  std::vector<int>& circles() { return circles_; }
  std::optional<std::size_t> find(const std::vector<double>& p) const {
    const auto it = seen_.find(p);
    if (it == seen_.end()) return std::nullopt;
    return it->second;
  }

 private:
  std::size_t dim_;
  std::vector<double> coords_;
  std::vector<std::size_t> labels_;
  std::vector<int> circles_;
  std::map<std::vector<double>, std::size_t> seen_;
};

// Greedy thinning of a sample stream: a sample is kept unless a kept point
// of the same stream lies within `radius`.
class Thinner {
 public:
  explicit Thinner(double radius) : radius_(radius) {}

  bool try_keep(double x, double y) {
    const auto cx = static_cast<std::int64_t>(std::floor(x / radius_));
    const auto cy = static_cast<std::int64_t>(std::floor(y / radius_));
    for (std::int64_t dx = -1; dx <= 1; ++dx)
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        const auto it = cells_.find(key(cx + dx, cy + dy));
        if (it == cells_.end()) continue;
        for (const auto& [px, py] : it->second)
          if ((px - x) * (px - x) + (py - y) * (py - y) <= radius_ * radius_) return false;
      }
    cells_[key(cx, cy)].emplace_back(x, y);
    return true;
  }

 private:
  static std::uint64_t key(std::int64_t a, std::int64_t b) {
    return (static_cast<std::uint64_t>(a) << 32) ^ (static_cast<std::uint64_t>(b) & 0xffffffffULL);
  }
  double radius_;
  std::unordered_map<std::uint64_t, std::vector<std::pair<double, double>>> cells_;
};

std::size_t pow2(int k) { return std::size_t{1} << k; }

void check_resolution(Dyadic r) {
  if (r.exponent() < 1 || r.exponent() > 14)
    throw Error(ErrorKind::invalid_argument, "catalog resolutions run from 2^-1 to 2^-14, got " + r.str());
}

std::shared_ptr<AnnotatedSpace> finish(std::string name, std::size_t dim, PointBuilder& b, Dyadic resolution,
                                       std::vector<std::string> component_names) {
  auto space = std::make_shared<AnnotatedSpace>();
  space->name = std::move(name);
  space->net = Net(dim, std::move(b.coords()), resolution.value(), Metric::euclidean(dim));
  space->path_components = std::move(b.labels());
  space->component_names = std::move(component_names);
  space->clopen = ClopenStructure::connected(space->net.size());
  return space;
}

double get(const std::map<std::string, double>& params, const std::string& key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void add_earring_points(PointBuilder& b, Dyadic resolution, std::size_t label) {
  const double eps = resolution.value();
  b.add({0.0, 0.0}, label, 0);
  for (std::size_t n = 1; n <= earring_cutoff(resolution); ++n) {
    const double r = 1.0 / static_cast<double>(n);
    auto m = static_cast<std::size_t>(std::ceil(2.0 * kPi * r / eps));
    m = std::max<std::size_t>(8, m + (m % 2));
    for (std::size_t j = 1; j < m; ++j) {
      std::vector<double> p;
      if (2 * j == m) {
        p = {2.0 * r, 0.0};
      } else {
        const double theta = kPi + 2.0 * kPi * static_cast<double>(j) / static_cast<double>(m);
        p = {r + r * std::cos(theta), r * std::sin(theta)};
      }
      b.add(std::move(p), label, static_cast<int>(n));
    }
  }
}

SpacePtr make_point() {
  PointBuilder b(1);
  b.add({0.0}, 0);
  auto s = finish("point", 1, b, Dyadic(1), {"point"});
  s->convex = true;
  s->basepoints["0"] = 0;
  return s;
}

SpacePtr make_two_point(Dyadic res) {
  PointBuilder b(1);
  b.add({0.0}, 0);
  b.add({1.0}, 1);
  auto s = finish("two-point", 1, b, res, {"{0}", "{1}"});
  s->clopen = ClopenStructure::discrete(2);
  s->basepoints["0"] = 0;
  s->basepoints["1"] = 1;
  return s;
}

SpacePtr make_interval(Dyadic res, bool with_ndagger) {
  const double eps = res.value();
  std::vector<double> xs;
  for (std::size_t j = 0; j <= pow2(res.exponent()); ++j) xs.push_back(static_cast<double>(j) * eps);
  if (with_ndagger)
    for (std::size_t n = 1; n <= ndagger_cutoff(res); ++n) xs.push_back(1.0 / static_cast<double>(n));
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  PointBuilder b(1);
  for (const double x : xs) b.add({x}, 0);
  auto s = finish("interval", 1, b, res, {"[0,1]"});
  s->convex = true;
  s->basepoints["0"] = 0;
  s->basepoints["1"] = s->net.size() - 1;
  Retraction r;
  r.name = "clamp";
  r.kind = Retraction::Kind::clamp_interval;
  r.lo = 0.0;
  r.hi = 1.0;
  r.reach = 1.0;
  s->retractions.push_back(r);
  return s;
}

SpacePtr make_ndagger(Dyadic res) {
  PointBuilder b(1);
  b.add({0.0}, 0);
  const std::size_t cutoff = ndagger_cutoff(res);
  // ascending coordinates: 0, 1/cutoff, ..., 1/1
  for (std::size_t n = cutoff; n >= 1; --n) b.add({1.0 / static_cast<double>(n)}, b.size());
  std::vector<std::string> names{"{inf}"};
  for (std::size_t n = cutoff; n >= 1; --n) names.push_back("{" + std::to_string(n) + "}");
  auto s = finish("ndagger", 1, b, res, std::move(names));
  s->clopen = ClopenStructure::discrete(s->net.size());
  ClopenStructure::Tail tail{0, {}};
  for (std::size_t i = s->net.size() - 1; i >= 1; --i) tail.atoms.push_back(i);  // n = 1, 2, ...
  s->clopen.tails.push_back(tail);
  s->basepoints["inf"] = 0;
  return s;
}

SpacePtr make_circle(Dyadic res) {
  const std::size_t m = 8 * pow2(res.exponent());
  PointBuilder b(2);
  for (std::size_t j = 0; j < m; ++j) {
    std::vector<double> p;
    if (j % (m / 4) == 0) {
      const std::size_t q = j / (m / 4);
      const double xs[] = {1.0, 0.0, -1.0, 0.0}, ys[] = {0.0, 1.0, 0.0, -1.0};
      p = {xs[q], ys[q]};
    } else {
      const double theta = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(m);
      p = {std::cos(theta), std::sin(theta)};
    }
    b.add(std::move(p), 0);
  }
  auto s = finish("circle", 2, b, res, {"S1"});
  s->basepoints["angle0"] = 0;
  Retraction r;
  r.name = "radial";
  r.kind = Retraction::Kind::radial;
  r.center = {0.0, 0.0};
  r.radius = 1.0;
  r.lo = 0.5;
  r.hi = 1.5;
  s->retractions.push_back(r);
  return s;
}

SpacePtr make_disk(Dyadic res, double cx, double cy, double radius, bool with_earring) {
  const double eps = res.value();
  PointBuilder b(2);
  const auto steps = static_cast<std::int64_t>(std::ceil(radius / eps));
  for (std::int64_t i = -steps; i <= steps; ++i)
    for (std::int64_t j = -steps; j <= steps; ++j) {
      const double dx = static_cast<double>(i) * eps, dy = static_cast<double>(j) * eps;
      if (dx * dx + dy * dy <= radius * radius) b.add({cx + dx, cy + dy}, 0);
    }
  auto m = static_cast<std::size_t>(std::ceil(2.0 * kPi * radius / eps));
  m = std::max<std::size_t>(8, m);
  for (std::size_t j = 0; j < m; ++j) {
    const double theta = 2.0 * kPi * static_cast<double>(j) / static_cast<double>(m);
    b.add({cx + radius * std::cos(theta), cy + radius * std::sin(theta)}, 0);
  }
  if (with_earring) add_earring_points(b, res, 0);
  auto s = finish("disk", 2, b, res, {"disk"});
  s->convex = true;
  Retraction r;
  r.name = "clamp";
  r.kind = Retraction::Kind::clamp_disk;
  r.center = {cx, cy};
  r.radius = radius;
  r.reach = 1.0;
  s->retractions.push_back(r);
  s->basepoints["center"] = *b.find({cx, cy});
  return s;
}

SpacePtr make_sine(Dyadic res) {
  const double eps = res.value();
  PointBuilder b(2);
  // segment {0} x [-1,1], label 0
  for (std::int64_t j = -static_cast<std::int64_t>(pow2(res.exponent())); j <= static_cast<std::int64_t>(pow2(res.exponent())); ++j)
    b.add({0.0, static_cast<double>(j) * eps}, 0);
  // curve, label 1: the points (1/k, 0) exactly, then a thinned arc-length sampling
  Thinner thin(eps / 2.0);
  for (std::size_t k = 1; k <= ndagger_cutoff(res); ++k) {
    const double x = 1.0 / static_cast<double>(k);
    b.add({x, 0.0}, 1);
    thin.try_keep(x, 0.0);
  }
  const double h = eps / 4.0;
  const double x_min = eps / 2.0;
  double x = 1.0;
  while (x >= x_min) {
    const double y = std::sin(kPi / x);
    if (thin.try_keep(x, y)) b.add({x, y}, 1);
    const double x_lo = std::max(x - h, x_min * 0.5);
    const double slope = kPi / (x_lo * x_lo);
    x -= h / std::sqrt(1.0 + slope * slope);
  }
  auto s = finish("sine", 2, b, res, {"segment", "curve"});
  s->basepoints["origin"] = *b.find({0.0, 0.0});
  return s;
}

SpacePtr make_comb(Dyadic res) {
  const double eps = res.value();
  const std::size_t levels = pow2(res.exponent());
  PointBuilder b(2);
  for (std::size_t j = 0; j <= levels; ++j) b.add({static_cast<double>(j) * eps, 0.0}, 0);
  auto tooth = [&](double x) {
    for (std::size_t j = 0; j <= levels; ++j) b.add({x, static_cast<double>(j) * eps}, 0);
  };
  tooth(0.0);
  const std::size_t resolved = resolved_cutoff(res);
  for (std::size_t n = 1; n <= resolved; ++n) tooth(1.0 / static_cast<double>(n));
  // unresolved teeth: greedy selection keeping every true tooth within eps/2 of a kept one
  std::size_t n = resolved + 1;
  while (1.0 / static_cast<double>(n) > eps / 2.0) {
    const double x = 1.0 / static_cast<double>(n);
    tooth(x);
    std::size_t next = n + 1;
    while (1.0 / static_cast<double>(next + 1) >= x - eps / 2.0) ++next;
    n = next;
  }
  auto s = finish("comb", 2, b, res, {"comb"});
  s->basepoints["origin"] = *b.find({0.0, 0.0});
  s->basepoints["top0"] = *b.find({0.0, 1.0});
  return s;
}

SpacePtr make_earring(Dyadic res) {
  PointBuilder b(2);
  add_earring_points(b, res, 0);
  std::vector<int> circles = b.circles();
  auto s = finish("earring", 2, b, res, {"earring"});
  s->circle_index = std::move(circles);
  s->basepoints["origin"] = 0;
  return s;
}

}  // namespace

std::size_t ndagger_cutoff(Dyadic resolution) { return pow2(resolution.exponent()); }

std::size_t resolved_cutoff(Dyadic resolution) {
  const std::size_t limit = pow2(resolution.exponent());
  std::size_t n = 1;
  while ((n + 1) * (n + 2) <= limit) ++n;
  return n;
}

std::size_t earring_cutoff(Dyadic resolution) { return 2 * pow2(resolution.exponent()) - 1; }

std::vector<std::string> catalog_names() {
  return {"point", "two-point", "interval", "circle", "disk", "ndagger", "sine", "comb", "earring"};
}

SpacePtr make_space(const std::string& name, Dyadic resolution, const std::map<std::string, double>& parameters) {
  const auto known = catalog_names();
  if (std::find(known.begin(), known.end(), name) == known.end())
    throw Error(ErrorKind::unknown_name, "no catalog space named '" + name + "'");
  check_resolution(resolution);
  SpacePtr built;
  if (name == "point") {
    built = make_point();
  } else if (name == "two-point") {
    built = make_two_point(resolution);
  } else if (name == "interval") {
    built = make_interval(resolution, get(parameters, "ndagger", 0.0) != 0.0);
  } else if (name == "circle") {
    built = make_circle(resolution);
  } else if (name == "disk") {
    const double radius = get(parameters, "radius", 1.0);
    if (!(radius > 0.0)) throw Error(ErrorKind::invalid_argument, "disk radius must be > 0");
    built = make_disk(resolution, get(parameters, "cx", 0.0), get(parameters, "cy", 0.0), radius,
                      get(parameters, "earring", 0.0) != 0.0);
  } else if (name == "ndagger") {
    built = make_ndagger(resolution);
  } else if (name == "sine") {
    built = make_sine(resolution);
  } else if (name == "comb") {
    built = make_comb(resolution);
  } else {
    built = make_earring(resolution);
  }
  auto space = std::const_pointer_cast<AnnotatedSpace>(built);
  if (name == "point") space->net = space->net.with_resolution(resolution.value());
  space->catalog = CatalogRef{name, parameters, resolution};
  return space;
}

SpacePtr make_space(const CatalogRef& ref) { return make_space(ref.name, ref.resolution, ref.parameters); }

SpacePair make_pair(const std::string& name, Dyadic resolution) {
  if (name == "interval-ndagger") {
    auto y = make_space("interval", resolution, {{"ndagger", 1.0}});
    std::vector<std::size_t> z;
    std::set<double> marks{0.0};
    for (std::size_t n = 1; n <= ndagger_cutoff(resolution); ++n) marks.insert(1.0 / static_cast<double>(n));
    for (std::size_t i = 0; i < y->size(); ++i)
      if (marks.contains(y->net.point(i)[0])) z.push_back(i);
    return SpacePair::make(y, std::move(z));
  }
  if (name == "sine-ndagger") {
    auto y = make_space("sine", resolution);
    std::vector<std::size_t> z;
    for (std::size_t i = 0; i < y->size(); ++i) {
      const auto p = y->net.point(i);
      if (p[1] != 0.0) continue;
      if (p[0] == 0.0) {
        z.push_back(i);
        continue;
      }
      const double k = 1.0 / p[0];
      const double rk = std::round(k);
      if (rk >= 1.0 && rk <= static_cast<double>(ndagger_cutoff(resolution)) && 1.0 / rk == p[0]) z.push_back(i);
    }
    return SpacePair::make(y, std::move(z));
  }
  if (name == "earring-disk") {
    auto y = make_space("disk", resolution, {{"cx", 1.0}, {"cy", 0.0}, {"radius", 1.0}, {"earring", 1.0}});
    const auto x = make_space("earring", resolution);
    std::vector<std::size_t> z;
    const NeighborIndex index(y->net, y->resolution());
    for (std::size_t i = 0; i < x->size(); ++i) {
      const auto hit = index.nearest(x->net.point(i));
      if (!hit || hit->second != 0.0) throw Error(ErrorKind::inconsistent_input, "earring point missing from disk net");
      z.push_back(hit->first);
    }
    return SpacePair::make(y, std::move(z));
  }
  if (name == "interval-endpoints") {
    auto y = make_space("interval", resolution);
    return SpacePair::make(y, {0, y->size() - 1});
  }
  throw Error(ErrorKind::unknown_name, "no catalog pair named '" + name + "'");
}

// --- clopen structure -------------------------------------------------------

ClopenStructure ClopenStructure::connected(std::size_t points) {
  return {std::vector<std::size_t>(points, 0), points == 0 ? 0u : 1u, {}};
}

ClopenStructure ClopenStructure::discrete(std::size_t points) {
  ClopenStructure c;
  c.atom_of.resize(points);
  std::iota(c.atom_of.begin(), c.atom_of.end(), 0);
  c.atom_count = points;
  return c;
}

bool ClopenStructure::trace_is_clopen(std::span<const std::size_t> z, std::span<const std::size_t> trace) const {
  // status per atom: 0 no Z points, 1 all Z points in trace, 2 none in trace, 3 split
  std::vector<char> in_trace(atom_of.size(), 0);
  for (const std::size_t t : trace) {
    if (t >= atom_of.size()) return false;
    in_trace[t] = 1;
  }
  std::vector<char> in_z(atom_of.size(), 0);
  for (const std::size_t p : z) {
    if (p >= atom_of.size()) return false;
    in_z[p] = 1;
  }
  for (const std::size_t t : trace)
    if (!in_z[t]) return false;
  std::vector<char> status(atom_count, 0);
  for (const std::size_t p : z) {
    char& s = status[atom_of[p]];
    const char mine = in_trace[p] ? 1 : 2;
    if (s == 0)
      s = mine;
    else if (s != mine)
      s = 3;
  }
  for (const char s : status)
    if (s == 3) return false;
  for (const Tail& tail : tails) {
    const char limit = status[tail.limit_atom];
    if (limit == 0) continue;
    for (auto it = tail.atoms.rbegin(); it != tail.atoms.rend(); ++it) {
      if (status[*it] == 0) continue;
      if (status[*it] != limit) return false;
      break;
    }
  }
  return true;
}

bool ClopenStructure::accepts(std::span<const std::size_t> set) const {
  std::vector<std::size_t> all(atom_of.size());
  std::iota(all.begin(), all.end(), 0);
  return trace_is_clopen(all, set);
}

std::vector<std::size_t> ClopenStructure::points_of(std::span<const std::size_t> atoms) const {
  std::vector<char> wanted(atom_count, 0);
  for (const std::size_t a : atoms)
    if (a < atom_count) wanted[a] = 1;
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < atom_of.size(); ++p)
    if (wanted[atom_of[p]]) out.push_back(p);
  return out;
}

ClopenStructure ClopenStructure::restricted(std::span<const std::size_t> indices) const {
  ClopenStructure c;
  c.atom_count = atom_count;
  c.tails = tails;
  c.atom_of.reserve(indices.size());
  for (const std::size_t i : indices) c.atom_of.push_back(atom_of[i]);
  return c;
}

std::vector<std::vector<std::size_t>> disjointify(const ClopenStructure& clopen,
                                                  const std::vector<std::vector<std::size_t>>& atom_sets) {
  std::vector<char> taken(clopen.atom_count, 0);
  std::vector<std::vector<std::size_t>> out;
  for (const auto& set : atom_sets) {
    for (const std::size_t a : set)
      if (a >= clopen.atom_count) throw Error(ErrorKind::invalid_argument, "atom id out of range");
    if (!clopen.accepts(clopen.points_of(set))) throw Error(ErrorKind::invalid_argument, "input set is not clopen");
    std::vector<std::size_t> u;
    for (const std::size_t a : set)
      if (!taken[a]) u.push_back(a);
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());
    for (const std::size_t a : set) taken[a] = 1;
    out.push_back(std::move(u));
  }
  return out;
}

// --- retractions ----------------------------------------------------------

namespace {
double norm_from(std::span<const double> p, std::span<const double> c) {
  double sq = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) sq += (p[k] - c[k]) * (p[k] - c[k]);
  return std::sqrt(sq);
}

std::optional<int> earring_circle_of(std::span<const double> p) {
  const double r2 = p[0] * p[0] + p[1] * p[1];
  if (r2 <= 1e-24) return 0;
  if (p[0] <= 0.0) return std::nullopt;
  const double n = 2.0 * p[0] / r2;
  const double rn = std::round(n);
  if (rn < 1.0 || std::abs(n - rn) > 1e-6 * rn) return std::nullopt;
  return static_cast<int>(rn);
}
}  // namespace

bool Retraction::in_domain(std::span<const double> p) const {
  switch (kind) {
    case Kind::clamp_interval:
      return p[0] >= lo - reach && p[0] <= hi + reach;
    case Kind::clamp_disk:
      return norm_from(p, center) <= radius + reach;
    case Kind::radial: {
      const double r = norm_from(p, center);
      return r > lo && r < hi;
    }
    case Kind::collapse:
      return earring_circle_of(p).has_value();
  }
  return false;
}

void Retraction::apply(std::span<const double> p, std::span<double> out) const {
  if (!in_domain(p)) throw Error(ErrorKind::extension_failure, "point outside the domain of retraction '" + name + "'");
  switch (kind) {
    case Kind::clamp_interval:
      out[0] = std::clamp(p[0], lo, hi);
      return;
    case Kind::clamp_disk: {
      const double r = norm_from(p, center);
      const double s = r > radius ? radius / r : 1.0;
      for (std::size_t k = 0; k < p.size(); ++k) out[k] = center[k] + (p[k] - center[k]) * s;
      return;
    }
    case Kind::radial: {
      const double r = norm_from(p, center);
      for (std::size_t k = 0; k < p.size(); ++k) out[k] = center[k] + radius * (p[k] - center[k]) / r;
      return;
    }
    case Kind::collapse: {
      const int n = *earring_circle_of(p);
      if (n == circle) {
        std::copy(p.begin(), p.end(), out.begin());
      } else {
        out[0] = 0.0;
        out[1] = 0.0;
      }
      return;
    }
  }
}

double Retraction::lipschitz() const {
  switch (kind) {
    case Kind::clamp_interval:
    case Kind::clamp_disk:
      return 1.0;
    case Kind::radial:
      return radius / lo;
    case Kind::collapse:
      return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::infinity();
}

Retraction collapse_retraction(const AnnotatedSpace& earring, int k) {
  if (earring.circle_index.empty()) throw Error(ErrorKind::invalid_argument, "collapse needs the earring");
  const int max_circle = *std::max_element(earring.circle_index.begin(), earring.circle_index.end());
  if (k < 1 || k > max_circle)
    throw Error(ErrorKind::beyond_truncation, "circle C_" + std::to_string(k) + " is beyond the truncation");
  Retraction r;
  r.name = "collapse-" + std::to_string(k);
  r.kind = Retraction::Kind::collapse;
  r.circle = k;
  r.center = {1.0 / k, 0.0};
  r.radius = 1.0 / k;
  return r;
}

// --- AnnotatedSpace -------------------------------------------------------

const Retraction* AnnotatedSpace::find_retraction(std::string_view wanted) const {
  for (const auto& r : retractions)
    if (r.name == wanted) return &r;
  if (wanted.starts_with("collapse-") && !circle_index.empty()) return nullptr;
  return nullptr;
}

std::optional<std::size_t> AnnotatedSpace::index_of(std::span<const double> p, double tolerance) const {
  std::optional<std::size_t> best;
  double best_d = tolerance;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const double d = net.distance_to(i, p);
    if (d <= best_d) {
      if (!best || d < best_d) {
        best = i;
        best_d = d;
      }
    }
  }
  return best;
}

std::optional<std::size_t> AnnotatedSpace::component_of_value(std::span<const double> p, double tolerance) const {
  std::optional<std::size_t> label;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (net.distance_to(i, p) > tolerance) continue;
    if (label && *label != path_components[i]) return std::nullopt;
    label = path_components[i];
  }
  return label;
}

std::vector<std::string> check_space_invariants(const AnnotatedSpace& space) {
  std::vector<std::string> problems;
  try {
    space.net.validate();
  } catch (const Error& e) {
    problems.emplace_back(e.what());
    return problems;
  }
  const std::size_t n = space.net.size();
  if (space.path_components.size() != n) {
    problems.emplace_back("path component labelling has wrong length");
    return problems;
  }
  for (const std::size_t c : space.path_components)
    if (c >= space.component_count()) {
      problems.emplace_back("path component id out of range");
      return problems;
    }
  if (space.resolution() <= space.connectivity_threshold) {
    std::vector<std::vector<std::size_t>> members(space.component_count());
    for (std::size_t i = 0; i < n; ++i) members[space.path_components[i]].push_back(i);
    for (std::size_t c = 0; c < members.size(); ++c) {
      if (members[c].empty()) {
        problems.push_back("component '" + space.component_names[c] + "' has no net points");
        continue;
      }
      const Net sub = space.net.subset(members[c]);
      if (count_components(components_at_scale(sub, 2.0 * space.resolution())) != 1)
        problems.push_back("component '" + space.component_names[c] + "' is not 2eps-connected");
    }
  }
  if (space.clopen.atom_of.size() != n) {
    problems.emplace_back("clopen atom labelling has wrong length");
  } else {
    std::vector<std::size_t> atom_of_component(space.component_count(), kNoLabel);
    for (std::size_t i = 0; i < n; ++i) {
      auto& a = atom_of_component[space.path_components[i]];
      if (a == kNoLabel) a = space.clopen.atom_of[i];
      if (a != space.clopen.atom_of[i]) {
        problems.emplace_back("a clopen atom splits a path component");
        break;
      }
    }
  }
  for (const Retraction& r : space.retractions) {
    std::vector<double> out(space.net.dimension());
    for (std::size_t i = 0; i < n; ++i) {
      const auto p = space.net.point(i);
      if (!r.in_domain(p)) {
        problems.push_back("retraction '" + r.name + "' undefined on a net point");
        break;
      }
      r.apply(p, out);
      if (space.net.distance_to(i, out) > space.resolution()) {
        problems.push_back("retraction '" + r.name + "' moves a net point by more than eps");
        break;
      }
    }
  }
  return problems;
}

// --- pairs ----------------------------------------------------------------

SpacePair SpacePair::make(SpacePtr y, std::vector<std::size_t> z) {
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  for (const std::size_t i : z)
    if (i >= y->size()) throw Error(ErrorKind::invalid_argument, "Z index out of range");
  SpacePair pair;
  pair.z_net = std::make_shared<const Net>(y->net.subset(z));
  pair.y = std::move(y);
  pair.z = std::move(z);
  return pair;
}

std::size_t SpacePair::z_position(std::size_t y_index) const {
  const auto it = std::lower_bound(z.begin(), z.end(), y_index);
  if (it == z.end() || *it != y_index) return npos;
  return static_cast<std::size_t>(it - z.begin());
}

// --- constructors ---------------------------------------------------------

namespace {

std::vector<std::size_t> dense_relabel(const std::vector<std::size_t>& raw) {
  std::map<std::size_t, std::size_t> ids;
  std::vector<std::size_t> out;
  out.reserve(raw.size());
  for (const std::size_t r : raw) out.push_back(ids.try_emplace(r, ids.size()).first->second);
  return out;
}

constexpr std::size_t kMaxMatrixPoints = 6000;

}  // namespace

Net product_net(const Net& a, const Net& factor) {
  const std::size_t na = a.size(), nf = factor.size();
  const std::size_t da = a.dimension(), df = factor.dimension();
  const std::size_t total = na * nf;
  std::vector<double> coords;
  coords.reserve(total * (da + df));
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t i = 0; i < na; ++i) {
      const auto pa = a.point(i);
      const auto pf = factor.point(f);
      coords.insert(coords.end(), pa.begin(), pa.end());
      coords.insert(coords.end(), pf.begin(), pf.end());
    }
  Metric metric;
  if (a.metric().kind == Metric::Kind::blocks && factor.metric().kind == Metric::Kind::blocks) {
    std::vector<std::size_t> blocks = a.metric().blocks;
    blocks.insert(blocks.end(), factor.metric().blocks.begin(), factor.metric().blocks.end());
    metric = Metric::max_of(std::move(blocks));
  } else {
    if (total > kMaxMatrixPoints) throw Error(ErrorKind::invalid_argument, "product too large for an explicit metric");
    std::vector<double> m(total * total);
    for (std::size_t p = 0; p < total; ++p)
      for (std::size_t q = 0; q < total; ++q)
        m[p * total + q] = std::max(a.distance(p % na, q % na), factor.distance(p / na, q / na));
    metric = Metric::explicit_matrix(std::move(m));
  }
  return Net(da + df, std::move(coords), std::max(a.resolution(), factor.resolution()), std::move(metric));
}

SpacePtr product(const SpacePtr& a, const SpacePtr& factor) {
  const std::size_t na = a->size(), nf = factor->size();
  auto s = std::make_shared<AnnotatedSpace>();
  s->name = "product(" + a->name + "," + factor->name + ")";
  s->net = product_net(a->net, factor->net);

  const std::size_t ka = a->component_count();
  std::vector<std::size_t> raw(na * nf);
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t i = 0; i < na; ++i) raw[f * na + i] = factor->path_components[f] * ka + a->path_components[i];
  s->path_components = dense_relabel(raw);
  std::map<std::size_t, std::string> names;
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t i = 0; i < na; ++i)
      names.try_emplace(s->path_components[f * na + i],
                        a->component_names[a->path_components[i]] + "x" + factor->component_names[factor->path_components[f]]);
  for (const auto& [id, name] : names) s->component_names.push_back(name);

  const std::size_t aa = a->clopen.atom_count, af = factor->clopen.atom_count;
  auto atom_id = [&](std::size_t alpha, std::size_t beta) { return beta * aa + alpha; };
  s->clopen.atom_count = aa * af;
  s->clopen.atom_of.resize(na * nf);
  for (std::size_t f = 0; f < nf; ++f)
    for (std::size_t i = 0; i < na; ++i)
      s->clopen.atom_of[f * na + i] = atom_id(a->clopen.atom_of[i], factor->clopen.atom_of[f]);
  for (const auto& tail : factor->clopen.tails)
    for (std::size_t alpha = 0; alpha < aa; ++alpha) {
      ClopenStructure::Tail t{atom_id(alpha, tail.limit_atom), {}};
      for (const std::size_t beta : tail.atoms) t.atoms.push_back(atom_id(alpha, beta));
      s->clopen.tails.push_back(std::move(t));
    }
  for (const auto& tail : a->clopen.tails)
    for (std::size_t beta = 0; beta < af; ++beta) {
      ClopenStructure::Tail t{atom_id(tail.limit_atom, beta), {}};
      for (const std::size_t alpha : tail.atoms) t.atoms.push_back(atom_id(alpha, beta));
      s->clopen.tails.push_back(std::move(t));
    }
  s->connectivity_threshold = std::min(a->connectivity_threshold, factor->connectivity_threshold);
  return s;
}

SpacePtr product_with(const SpacePtr& a, ProductFactor factor) {
  if (factor.kind == ProductFactor::Kind::interval) {
    if (factor.step.value() > a->resolution())
      throw Error(ErrorKind::invalid_argument, "grid step must be <= the space's resolution");
    return product(a, make_space("interval", factor.step));
  }
  return product(a, make_space("ndagger", Dyadic::from_value(a->resolution())));
}

SpacePtr cone(const SpacePtr& a) {
  double h = a->resolution();
  if (!is_dyadic(h)) h = std::ldexp(1.0, static_cast<int>(std::floor(std::log2(h))));
  const auto levels = static_cast<std::size_t>(std::llround(1.0 / h));
  const std::size_t na = a->size(), d = a->net.dimension();
  std::vector<double> coords;
  coords.reserve((na * levels + 1) * (d + 1));
  for (std::size_t j = 0; j < levels; ++j)
    for (std::size_t i = 0; i < na; ++i) {
      const auto p = a->net.point(i);
      coords.insert(coords.end(), p.begin(), p.end());
      coords.push_back(static_cast<double>(j) * h);
    }
  {
    const auto p = a->net.point(0);
    coords.insert(coords.end(), p.begin(), p.end());
    coords.push_back(1.0);
  }
  const std::size_t total = na * levels + 1;
  Metric metric;
  if (a->net.metric().kind == Metric::Kind::blocks) {
    metric = Metric::cone_over(a->net.metric().blocks);
  } else {
    if (total > kMaxMatrixPoints) throw Error(ErrorKind::invalid_argument, "cone too large for an explicit metric");
    std::vector<double> m(total * total);
    auto level_of = [&](std::size_t p) { return p == total - 1 ? 1.0 : coords[p * (d + 1) + d]; };
    for (std::size_t p = 0; p < total; ++p)
      for (std::size_t q = 0; q < total; ++q) {
        if (p == q) continue;
        const double tp = level_of(p), tq = level_of(q);
        const double base = (p == total - 1 || q == total - 1) ? 0.0 : a->net.distance(p % na, q % na);
        m[p * total + q] = std::min(std::max(base, std::abs(tp - tq)), (1.0 - tp) + (1.0 - tq));
      }
    metric = Metric::explicit_matrix(std::move(m));
  }
  auto s = std::make_shared<AnnotatedSpace>();
  s->name = "cone(" + a->name + ")";
  s->net = Net(d + 1, std::move(coords), std::max(a->resolution(), h), std::move(metric));
  s->path_components.assign(total, 0);
  s->component_names = {"cone"};
  s->clopen = ClopenStructure::connected(total);
  s->basepoints["apex"] = total - 1;
  s->connectivity_threshold = a->connectivity_threshold;
  return s;
}

std::size_t cone_levels(const AnnotatedSpace& cone_space) {
  const std::size_t d = cone_space.net.dimension();
  std::set<double> levels;
  for (std::size_t i = 0; i < cone_space.size(); ++i) levels.insert(cone_space.net.point(i)[d - 1]);
  return levels.size();
}

OpcResult opc_disjoint_union(std::span<const SpacePtr> blocks) {
  if (blocks.empty()) throw Error(ErrorKind::invalid_argument, "opc needs at least one space");
  std::size_t dim = 1;
  for (const auto& b : blocks) {
    if (!b->net.metric().is_euclidean())
      throw Error(ErrorKind::invalid_argument, "opc blocks must carry the Euclidean metric");
    dim = std::max(dim, b->net.dimension());
  }
  OpcResult out;
  auto s = std::make_shared<AnnotatedSpace>();
  std::vector<double> coords;
  std::vector<std::size_t> labels;
  double resolution = 0.0;
  std::size_t component_offset = 0, atom_offset = 0, index = 0;
  ClopenStructure clopen;
  ClopenStructure::Tail tail;
  for (std::size_t n = 1; n <= blocks.size(); ++n) {
    const AnnotatedSpace& b = *blocks[n - 1];
    const std::size_t bd = b.net.dimension();
    std::vector<double> lo(bd, std::numeric_limits<double>::infinity()), hi(bd, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < b.size(); ++i)
      for (std::size_t k = 0; k < bd; ++k) {
        lo[k] = std::min(lo[k], b.net.point(i)[k]);
        hi[k] = std::max(hi[k], b.net.point(i)[k]);
      }
    std::vector<double> mid(bd);
    for (std::size_t k = 0; k < bd; ++k) mid[k] = 0.5 * (lo[k] + hi[k]);
    double radius = 0.0;
    for (std::size_t i = 0; i < b.size(); ++i) radius = std::max(radius, norm_from(b.net.point(i), mid));
    const double target = std::ldexp(1.0, -static_cast<int>(n) - 4);
    const double scale = radius > target ? target / radius : 1.0;
    const double offset = 0.75 * std::ldexp(1.0, -static_cast<int>(n));
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (std::size_t k = 0; k < dim; ++k) {
        const double local = k < bd ? (b.net.point(i)[k] - mid[k]) * scale : 0.0;
        coords.push_back(k == 0 ? offset + local : local);
      }
      labels.push_back(component_offset + b.path_components[i]);
      clopen.atom_of.push_back(atom_offset + b.clopen.atom_of[i]);
      idx.push_back(index++);
    }
    for (std::size_t c = 0; c < b.component_count(); ++c)
      s->component_names.push_back("block" + std::to_string(n) + ":" + b.component_names[c]);
    for (std::size_t a = 0; a < b.clopen.atom_count; ++a) tail.atoms.push_back(atom_offset + a);
    component_offset += b.component_count();
    atom_offset += b.clopen.atom_count;
    resolution = std::max(resolution, b.resolution() * scale);
    out.block_indices.push_back(std::move(idx));
  }
  for (std::size_t k = 0; k < dim; ++k) coords.push_back(0.0);
  labels.push_back(component_offset);
  s->component_names.push_back("inf");
  clopen.atom_of.push_back(atom_offset);
  tail.limit_atom = atom_offset;
  clopen.atom_count = atom_offset + 1;
  clopen.tails.push_back(std::move(tail));
  out.infinity = index;

  s->name = "opc(" + std::to_string(blocks.size()) + " blocks)";
  s->net = Net(dim, std::move(coords), resolution, Metric::euclidean(dim));
  s->path_components = std::move(labels);
  s->clopen = std::move(clopen);
  s->basepoints["inf"] = out.infinity;
  out.space = std::move(s);
  return out;
}

OpcPair opc_pair(std::span<const SpacePair> blocks) {
  std::vector<SpacePtr> spaces;
  for (const auto& b : blocks) spaces.push_back(b.y);
  OpcResult layout = opc_disjoint_union(spaces);
  std::vector<std::size_t> z;
  for (std::size_t n = 0; n < blocks.size(); ++n)
    for (const std::size_t i : blocks[n].z) z.push_back(layout.block_indices[n][i]);
  z.push_back(layout.infinity);
  return {SpacePair::make(layout.space, std::move(z)), std::move(layout)};
}

SpacePair spiked_base_pair(const SpacePtr& v, std::size_t p) {
  if (p >= v->size()) throw Error(ErrorKind::invalid_argument, "basepoint is not a net point of V");
  auto y = cone(v);
  const std::size_t na = v->size();
  const std::size_t apex = y->size() - 1;
  std::vector<std::size_t> z;
  for (std::size_t i = 0; i < na; ++i) z.push_back(i);
  for (std::size_t j = na + p; j < apex; j += na) z.push_back(j);
  z.push_back(apex);
  return SpacePair::make(y, std::move(z));
}

SpacePtr subspace(const SpacePtr& y, std::span<const std::size_t> indices, const std::string& name) {
  std::vector<std::size_t> idx(indices.begin(), indices.end());
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  auto s = std::make_shared<AnnotatedSpace>();
  s->name = name.empty() ? y->name + "|sub" : name;
  s->net = y->net.subset(idx);
  std::vector<std::size_t> raw;
  for (const std::size_t i : idx) raw.push_back(y->path_components[i]);
  std::map<std::size_t, std::size_t> ids;
  for (const std::size_t r : raw) ids.try_emplace(r, ids.size());
  for (const std::size_t r : raw) s->path_components.push_back(ids[r]);
  s->component_names.resize(ids.size());
  for (const auto& [old_id, new_id] : ids) s->component_names[new_id] = y->component_names[old_id];
  s->clopen = y->clopen.restricted(idx);
  s->retractions = y->retractions;
  for (const auto& [key, value] : y->basepoints) {
    const auto it = std::lower_bound(idx.begin(), idx.end(), value);
    if (it != idx.end() && *it == value) s->basepoints[key] = static_cast<std::size_t>(it - idx.begin());
  }
  if (!y->circle_index.empty())
    for (const std::size_t i : idx) s->circle_index.push_back(y->circle_index[i]);
  // a subset of a path component need not be path-connected
  s->connectivity_threshold = 0.0;
  return s;
}

}  // namespace extenlab
