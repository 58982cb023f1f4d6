#include "extenlab/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <type_traits>
#include <variant>

#include "extenlab/error.hpp"
#include "extenlab/graph.hpp"

namespace extenlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(10);
  out << v;
  return out.str();
}

// Collects trace entries; the first failure fixes the status.
class Recorder {
 public:
  explicit Recorder(Verdict& v) : v_(v) {}
  bool check(bool ok, const std::string& name, const std::string& detail, VerdictStatus failure = VerdictStatus::refuted) {
    v_.trace.push_back({name, ok, detail});
    if (!ok && v_.status == VerdictStatus::verified) v_.status = failure;
    return ok;
  }
  bool malformed(bool ok, const std::string& name, const std::string& detail) {
    return check(ok, name, detail, VerdictStatus::invalid_certificate);
  }
  bool failed() const { return v_.status != VerdictStatus::verified; }

 private:
  Verdict& v_;
};

std::optional<std::size_t> exact_index(const Net& net, std::span<const double> p) {
  const NeighborIndex index(net, net.resolution());
  const auto hit = index.nearest(p);
  if (hit && hit->second == 0.0) return hit->first;
  return std::nullopt;
}

// Path-component label of a codomain value: the exact net point's label, or
// the common label of all net points within epsilon.
std::optional<std::size_t> value_label(const AnnotatedSpace& x, std::span<const double> p) {
  if (const auto i = exact_index(x.net, p)) return x.path_components[*i];
  return x.component_of_value(p, x.resolution());
}

bool separated_by_labels(const Net& x, const Labeling& labels, std::span<const char> keep, std::span<const double> a,
                         std::span<const double> b) {
  const auto from = anchors_near(x, a, x.resolution(), keep);
  const auto to = anchors_near(x, b, x.resolution(), keep);
  for (const std::size_t i : from)
    for (const std::size_t j : to)
      if (labels[i] == labels[j]) return false;
  return true;
}

// --- checkers ---------------------------------------------------------------

void check_positive(const SpacePair& pair, const MapSample& phi, const PositiveCertificate& c, Verdict& v) {
  Recorder r(v);
  const MapSample& ext = c.extension;
  if (!r.malformed(std::isfinite(c.tolerance) && c.tolerance >= 0.0, "tolerance", "tolerance " + fmt(c.tolerance))) return;
  if (!r.malformed(ext.domain != nullptr && ext.codomain != nullptr, "shape", "extension has a domain and codomain")) return;
  if (!r.check(same_net(*ext.domain, pair.y->net), "domain", "extension is sampled on Y", VerdictStatus::inconsistent_input))
    return;
  if (!r.check(same_codomain(*ext.codomain, *phi.codomain), "codomain", "extension and phi share X",
               VerdictStatus::inconsistent_input))
    return;
  if (!r.malformed(ext.values.size() == ext.size() * ext.dimension(), "shape", "one value row per Y point")) return;
  const double eps = phi.codomain->resolution();
  const auto scan = modulus_scan(ext, 2.0 * eps);
  r.check(scan.excess <= 0.0, "modulus",
          "worst excess " + fmt(scan.excess) + " over " + std::to_string(scan.pairs_examined) + " pairs, slack 2eps");
  const double gap = codomain_gap(ext);
  r.check(gap <= eps, "codomain", "values within " + fmt(gap) + " of X's net");
  const double error = sup_distance(restrict(ext, pair), phi);
  r.check(error <= c.tolerance, "restriction", "sup |ext|Z - phi| = " + fmt(error));
  v.margin = c.tolerance - error;
}

void check_path_component(const SpacePair& pair, const MapSample& phi, const PathComponentCertificate& c, Verdict& v) {
  Recorder r(v);
  const AnnotatedSpace& y = *pair.y;
  const std::size_t n = y.size();
  if (!r.malformed(pair.contains(c.z1) && pair.contains(c.z2), "endpoints", "z1 and z2 lie in Z")) return;
  if (!r.malformed(c.z1 != c.z2, "endpoints", "z1 differs from z2")) return;
  bool in_range = !c.y_path.empty();
  for (const std::size_t i : c.y_path) in_range = in_range && i < n;
  if (!r.malformed(in_range, "path", "witness indices lie in Y")) return;
  if (!r.malformed(c.y_path.front() == c.z1 && c.y_path.back() == c.z2, "path", "witness runs from z1 to z2")) return;
  const double scale = 2.0 * y.resolution();
  double longest = 0.0;
  bool one_label = true;
  for (std::size_t i = 0; i + 1 < c.y_path.size(); ++i) {
    longest = std::max(longest, y.net.distance(c.y_path[i], c.y_path[i + 1]));
    one_label = one_label && y.path_components[c.y_path[i]] == y.path_components[c.y_path[i + 1]];
  }
  r.check(longest <= scale, "path-steps", "longest step " + fmt(longest) + " <= 2eps");
  r.check(one_label, "path-label", "witness stays in one path component of Y");
  const auto l1 = value_label(*phi.codomain, phi.value(pair.z_position(c.z1)));
  const auto l2 = value_label(*phi.codomain, phi.value(pair.z_position(c.z2)));
  if (!r.check(l1 && l2, "x-labels", "images have determined path-component labels")) return;
  r.check(*l1 == c.x_labels[0] && *l2 == c.x_labels[1], "x-labels",
          "computed labels (" + std::to_string(*l1) + ", " + std::to_string(*l2) + ") match the claim");
  r.check(*l1 != *l2, "x-distinct", "images lie in different path components of X");
  v.margin = 1.0;
}

void check_clopen(const SpacePair& pair, const MapSample& phi, const ClopenCertificate& c, Verdict& v) {
  Recorder r(v);
  if (!r.check(phi.dimension() == 1, "codomain", "phi takes values in N-dagger", VerdictStatus::inconsistent_input)) return;
  if (!r.malformed(c.k >= 1, "value", "k >= 1")) return;
  std::vector<std::size_t> claimed = c.trace;
  std::sort(claimed.begin(), claimed.end());
  bool in_z = std::adjacent_find(claimed.begin(), claimed.end()) == claimed.end();
  for (const std::size_t t : claimed) in_z = in_z && pair.contains(t);
  if (!r.malformed(in_z, "trace", "trace is a set of Z points")) return;
  const double target = 1.0 / static_cast<double>(c.k);
  std::vector<std::size_t> preimage;
  for (std::size_t i = 0; i < pair.z.size(); ++i)
    if (phi.value(i)[0] == target) preimage.push_back(pair.z[i]);
  r.check(preimage == claimed, "preimage",
          "phi^-1(1/" + std::to_string(c.k) + ") has " + std::to_string(preimage.size()) + " points");
  const bool clopen = pair.y->clopen.trace_is_clopen(pair.z, claimed);
  r.check(!clopen, "clopen-oracle", "no clopen subset of Y has this trace on Z");
  v.margin = 1.0;
}

void check_crossing(const SpacePair& pair, const MapSample& phi, const MandatoryCrossingCertificate& c, Verdict& v) {
  Recorder r(v);
  const AnnotatedSpace& x = *phi.codomain;
  const AnnotatedSpace& y = *pair.y;
  if (!r.malformed(!c.brackets.empty(), "brackets", "at least one bracket")) return;
  if (!r.malformed(c.region.axis < x.net.dimension(), "region", "region axis within X's dimension")) return;
  if (!r.malformed(std::isfinite(c.separation), "separation", "separation is finite")) return;
  bool in_z = pair.contains(c.z0);
  for (const auto& [a, b] : c.brackets) in_z = in_z && pair.contains(a) && pair.contains(b);
  if (!r.malformed(in_z, "indices", "z0 and bracket ends lie in Z")) return;
  if (!r.check(x.net.metric().coordinate_based(), "codomain", "X has coordinates", VerdictStatus::inconsistent_input))
    return;

  const double eps = x.resolution();
  const std::size_t nx = x.size();
  std::vector<char> outside(nx);
  double to_region = kInf;
  const auto image0 = phi.value(pair.z_position(c.z0));
  for (std::size_t i = 0; i < nx; ++i) {
    const bool inside = c.region.contains(x.net.point(i));
    outside[i] = inside ? 0 : 1;
    if (inside) to_region = std::min(to_region, x.net.distance_to(i, image0));
  }
  if (!r.malformed(std::isfinite(to_region), "region", "region contains net points of X")) return;
  r.check(to_region >= c.separation, "separation", "d(phi(z0), region) = " + fmt(to_region) + " >= " + fmt(c.separation));
  r.check(c.separation > 4.0 * eps, "separation", "separation " + fmt(c.separation) + " > 4eps");

  const EpsilonGraph graph = build_epsilon_graph(x.net, 2.0 * eps);
  double previous = kInf;
  for (std::size_t j = 0; j < c.brackets.size(); ++j) {
    const auto [a, b] = c.brackets[j];
    const std::string tag = "bracket " + std::to_string(j + 1);
    const auto va = phi.value(pair.z_position(a)), vb = phi.value(pair.z_position(b));
    std::vector<char> keep = outside;
    if (const auto label = value_label(x, va))
      for (std::size_t i = 0; i < nx; ++i) keep[i] = keep[i] && x.path_components[i] == *label;
    const bool anchored = !anchors_near(x.net, va, eps, {}).empty() && !anchors_near(x.net, vb, eps, {}).empty();
    if (!r.check(anchored, tag + " anchors", "images lie within eps of X's net", VerdictStatus::inconsistent_input)) return;
    r.check(separated_by_labels(x.net, graph_components(graph, keep), keep, va, vb), tag + " crossing",
            "every 2eps-chain between the images meets the region");
    r.check(y.path_components[a] == y.path_components[b], tag + " joined", "a_j and b_j share a path component of Y");
    const double reach = std::max(y.net.distance(a, c.z0), y.net.distance(b, c.z0));
    r.check(reach < previous, tag + " converges", "max d(., z0) = " + fmt(reach) + " decreases");
    previous = reach;
  }
  v.margin = c.separation - 4.0 * eps;
}

void check_winding(const SpacePair& pair, const MapSample& phi, const WindingCertificate& c, Verdict& v) {
  Recorder r(v);
  const AnnotatedSpace& y = *pair.y;
  if (!r.malformed(c.loop.size() >= 3, "loop", "loop has at least three points")) return;
  bool in_z = true;
  for (const std::size_t i : c.loop) in_z = in_z && pair.contains(i);
  if (!r.malformed(in_z, "loop", "loop lies in Z")) return;
  if (!r.malformed(c.expected != 0, "expected", "expected winding is nonzero")) return;
  if (!r.check(y.net.dimension() == 2 && phi.dimension() == 2, "planar", "Y and X are planar",
               VerdictStatus::inconsistent_input))
    return;
  const std::size_t m = c.loop.size();
  bool shaped = c.rings.size() >= 2;
  for (const auto& ring : c.rings) shaped = shaped && ring.size() == 2 * m;
  if (!r.malformed(shaped, "rings", "at least two rings of the loop's length")) return;
  bool starts = true;
  for (std::size_t i = 0; i < m; ++i) {
    const auto p = y.net.point(c.loop[i]);
    starts = starts && c.rings[0][2 * i] == p[0] && c.rings[0][2 * i + 1] == p[1];
  }
  if (!r.malformed(starts, "rings", "ring 0 is the loop")) return;
  const auto& last = c.rings.back();
  bool constant = true;
  for (std::size_t i = 1; i < m; ++i) constant = constant && last[2 * i] == last[0] && last[2 * i + 1] == last[1];
  r.check(constant, "rings", "the last ring is a single point");

  const double eps = y.resolution();
  auto at = [&](std::size_t ring, std::size_t i) { return std::span<const double>(c.rings[ring].data() + 2 * i, 2); };
  double longest = 0.0;
  for (std::size_t k = 0; k < c.rings.size(); ++k)
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t next = (i + 1) % m;
      longest = std::max(longest, std::hypot(at(k, i)[0] - at(k, next)[0], at(k, i)[1] - at(k, next)[1]));
      if (k + 1 < c.rings.size()) {
        longest = std::max(longest, std::hypot(at(k, i)[0] - at(k + 1, i)[0], at(k, i)[1] - at(k + 1, i)[1]));
        longest = std::max(longest, std::hypot(at(k, i)[0] - at(k + 1, next)[0], at(k, i)[1] - at(k + 1, next)[1]));
      }
    }
  r.check(longest <= 2.0 * eps, "disk-edges", "longest witness edge " + fmt(longest) + " <= 2eps");
  double off_net = 0.0;
  {
    const NeighborIndex index(y.net, eps);
    for (const auto& ring : c.rings)
      for (std::size_t i = 0; i < m; ++i) {
        const auto hit = index.nearest(std::span<const double>(ring.data() + 2 * i, 2));
        off_net = std::max(off_net, hit ? hit->second : kInf);
      }
  }
  r.check(off_net <= eps, "disk-in-Y", "witness points within " + fmt(off_net) + " of Y's net");

  const std::string prefix = "collapse-";
  if (!r.malformed(c.retraction.rfind(prefix, 0) == 0, "retraction", "retraction is a circle collapse")) return;
  int circle = 0;
  try {
    circle = std::stoi(c.retraction.substr(prefix.size()));
  } catch (const std::exception&) {
    r.malformed(false, "retraction", "circle index parses");
    return;
  }
  Retraction retraction;
  try {
    retraction = collapse_retraction(*phi.codomain, circle);
  } catch (const Error& e) {
    r.malformed(false, "retraction", e.what());
    return;
  }
  std::vector<double> image(2 * m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto value = phi.value(pair.z_position(c.loop[i]));
    if (!r.check(retraction.in_domain(value), "retraction", "phi(loop) lies on X", VerdictStatus::inconsistent_input))
      return;
    retraction.apply(value, std::span<double>(image.data() + 2 * i, 2));
  }
  const double step = max_angular_step(image, retraction.center);
  if (!r.check(step < std::numbers::pi, "winding", "angular steps below pi (largest " + fmt(step) + ")")) return;
  const int winding = winding_number(image, retraction.center);
  r.check(winding == c.expected, "winding",
          "winding of r o phi o loop is " + std::to_string(winding) + ", expected " + std::to_string(c.expected));
  v.margin = std::numbers::pi - step;
}

}  // namespace

bool Region::contains(std::span<const double> p) const {
  const double value = p[axis];
  switch (op) {
    case Op::le:
      return value <= threshold;
    case Op::ge:
      return value >= threshold;
    case Op::abs_ge:
      return std::abs(value) >= threshold;
  }
  return false;
}

std::string certificate_kind(const Certificate& cert) {
  static const char* names[] = {"positive", "path-component", "clopen", "mandatory-crossing", "winding"};
  return names[cert.index()];
}

std::string to_string(VerdictStatus status) {
  switch (status) {
    case VerdictStatus::verified:
      return "verified";
    case VerdictStatus::refuted:
      return "refuted";
    case VerdictStatus::invalid_certificate:
      return "invalid-certificate";
    case VerdictStatus::inconsistent_input:
      return "inconsistent-input";
  }
  return "unknown";
}

std::vector<std::size_t> anchors_near(const Net& x, std::span<const double> p, double radius,
                                      std::span<const char> keep) {
  const NeighborIndex index(x, radius);
  std::vector<std::size_t> hits;
  index.within_point(p, hits);
  if (!keep.empty()) std::erase_if(hits, [&](std::size_t i) { return !keep[i]; });
  return hits;
}

bool chain_separated(const Net& x, double scale, std::span<const char> keep, std::span<const double> a,
                     std::span<const double> b) {
  return separated_by_labels(x, graph_components(build_epsilon_graph(x, scale), keep), keep, a, b);
}

Verdict check_certificate(const SpacePair& pair, const MapSample& phi, const Certificate& cert) {
  Verdict v;
  v.kind = certificate_kind(cert);
  v.epsilon = pair.y->resolution();
  if (!phi.domain || !phi.codomain || !same_net(*phi.domain, *pair.z_net) ||
      phi.values.size() != phi.size() * phi.dimension()) {
    v.status = VerdictStatus::inconsistent_input;
    v.trace.push_back({"phi", false, "phi is not sampled on the pair's Z"});
    return v;
  }
  try {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, PositiveCertificate>) check_positive(pair, phi, c, v);
          if constexpr (std::is_same_v<T, PathComponentCertificate>) check_path_component(pair, phi, c, v);
          if constexpr (std::is_same_v<T, ClopenCertificate>) check_clopen(pair, phi, c, v);
          if constexpr (std::is_same_v<T, MandatoryCrossingCertificate>) check_crossing(pair, phi, c, v);
          if constexpr (std::is_same_v<T, WindingCertificate>) check_winding(pair, phi, c, v);
        },
        cert);
  } catch (const Error& e) {
    v.trace.push_back({"checker", false, e.what()});
    v.status = e.kind() == ErrorKind::domain_mismatch || e.kind() == ErrorKind::inconsistent_input
                   ? VerdictStatus::inconsistent_input
                   : VerdictStatus::invalid_certificate;
  }
  if (v.status != VerdictStatus::verified) v.margin = std::min(v.margin, 0.0);
  return v;
}

std::vector<std::vector<double>> ring_witness(std::span<const double> loop, std::span<const double> center,
                                              double edge) {
  const std::size_t m = loop.size() / 2;
  if (m < 3 || loop.size() % 2 != 0) throw Error(ErrorKind::invalid_argument, "ring witness needs a planar loop");
  double reach = 0.0, side = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t j = (i + 1) % m;
    reach = std::max(reach, std::hypot(loop[2 * i] - center[0], loop[2 * i + 1] - center[1]));
    side = std::max(side, std::hypot(loop[2 * i] - loop[2 * j], loop[2 * i + 1] - loop[2 * j + 1]));
  }
  if (!(side < edge)) throw Error(ErrorKind::loop_too_coarse, "loop edges already reach the witness bound");
  const auto count = static_cast<std::size_t>(std::ceil(reach / (edge - side) * (1.0 + 1e-9))) + 1;
  std::vector<std::vector<double>> rings;
  rings.emplace_back(loop.begin(), loop.end());
  for (std::size_t k = 1; k <= count; ++k) {
    const double s = 1.0 - static_cast<double>(k) / static_cast<double>(count);
    std::vector<double> ring(2 * m);
    for (std::size_t i = 0; i < m; ++i) {
      ring[2 * i] = k == count ? center[0] : center[0] + s * (loop[2 * i] - center[0]);
      ring[2 * i + 1] = k == count ? center[1] : center[1] + s * (loop[2 * i + 1] - center[1]);
    }
    rings.push_back(std::move(ring));
  }
  return rings;
}

// --- builders ---------------------------------------------------------------

namespace {

std::size_t z_index_at(const SpacePair& pair, std::span<const double> p) {
  for (const std::size_t y : pair.z) {
    const auto q = pair.y->net.point(y);
    if (std::equal(q.begin(), q.end(), p.begin(), p.end())) return y;
  }
  throw Error(ErrorKind::inconsistent_input, "expected point missing from Z");
}

std::size_t reciprocal_point(const SpacePair& pair, std::size_t k) {
  const double x = 1.0 / static_cast<double>(k);
  std::vector<double> p(pair.y->net.dimension(), 0.0);
  p[0] = x;
  return z_index_at(pair, p);
}

PathComponentCertificate path_certificate(const SpacePair& pair, const MapSample& phi, std::size_t z1, std::size_t z2) {
  const AnnotatedSpace& y = *pair.y;
  const EpsilonGraph g = build_epsilon_graph(y.net, 2.0 * y.resolution());
  std::vector<char> allow(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) allow[i] = y.path_components[i] == y.path_components[z1];
  PathComponentCertificate c;
  c.z1 = z1;
  c.z2 = z2;
  c.y_path = bfs_path(g, z1, z2, allow);
  if (c.y_path.empty()) throw Error(ErrorKind::inconsistent_input, "z1 and z2 are not chained in Y");
  const auto l1 = value_label(*phi.codomain, phi.value(pair.z_position(z1)));
  const auto l2 = value_label(*phi.codomain, phi.value(pair.z_position(z2)));
  if (!l1 || !l2) throw Error(ErrorKind::inconsistent_input, "image labels are not determined");
  c.x_labels = {*l1, *l2};
  return c;
}

MandatoryCrossingCertificate crossing_certificate(const MapFamily& fam, const MapSample& phi, Region region) {
  const SpacePair& pair = fam.pair;
  const AnnotatedSpace& x = *fam.codomain;
  const double eps = x.resolution();
  MandatoryCrossingCertificate c;
  c.region = region;
  c.z0 = z_index_at(pair, std::vector<double>(pair.y->net.dimension(), 0.0));
  std::vector<char> outside(x.size());
  double to_region = kInf;
  const auto image0 = phi.value(pair.z_position(c.z0));
  for (std::size_t i = 0; i < x.size(); ++i) {
    const bool inside = region.contains(x.net.point(i));
    outside[i] = inside ? 0 : 1;
    if (inside) to_region = std::min(to_region, x.net.distance_to(i, image0));
  }
  c.separation = to_region;
  const EpsilonGraph graph = build_epsilon_graph(x.net, 2.0 * eps);
  const std::size_t cutoff = ndagger_cutoff(Dyadic::from_value(pair.y->resolution()));
  for (std::size_t j = 1; j + 1 <= cutoff; ++j) {
    const std::size_t a = reciprocal_point(pair, j + 1), b = reciprocal_point(pair, j);
    const auto va = phi.value(pair.z_position(a)), vb = phi.value(pair.z_position(b));
    std::vector<char> keep = outside;
    if (const auto label = value_label(x, va))
      for (std::size_t i = 0; i < x.size(); ++i) keep[i] = keep[i] && x.path_components[i] == *label;
    if (!separated_by_labels(x.net, graph_components(graph, keep), keep, va, vb)) break;
    c.brackets.emplace_back(a, b);
  }
  if (c.brackets.empty()) throw Error(ErrorKind::epsilon_too_large, "no bracket separates at this resolution");
  return c;
}

WindingCertificate winding_certificate(const MapFamily& fam, std::size_t n) {
  const SpacePair& pair = fam.pair;
  const AnnotatedSpace& x = *fam.codomain;
  const int k = static_cast<int>(n + 1);
  WindingCertificate c;
  c.retraction = "collapse-" + std::to_string(k);
  c.expected = 1;
  // C_k in angular order starting at the tangency point
  std::vector<std::pair<double, std::size_t>> order;
  const double r = 1.0 / k;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x.circle_index[i] != k && x.circle_index[i] != 0) continue;
    const auto p = x.net.point(i);
    order.emplace_back(x.circle_index[i] == 0 ? -4.0 : std::atan2(p[1], p[0] - r), i);
  }
  std::sort(order.begin(), order.end());
  std::vector<double> coords;
  for (const auto& [angle, i] : order) {
    const auto p = x.net.point(i);
    c.loop.push_back(z_index_at(pair, p));
    coords.insert(coords.end(), p.begin(), p.end());
  }
  const double center[2] = {r, 0.0};
  c.rings = ring_witness(coords, center, 2.0 * pair.y->resolution() * (1.0 - 1e-9));
  return c;
}

}  // namespace

Certificate build_negative_certificate(const MapFamily& fam, std::optional<std::size_t> n, const std::string& variant) {
  if (n && (*n < 1 || *n > fam.n_max)) throw Error(ErrorKind::beyond_truncation, "n is beyond the truncation");
  const MapSample phi = n ? fam.member(*n) : fam.limit;
  const double eps = fam.codomain->resolution();
  if (fam.name == "sine-eopen" && n) {
    return path_certificate(fam.pair, phi, reciprocal_point(fam.pair, *n), reciprocal_point(fam.pair, *n + 1));
  }
  if ((fam.name == "pathcomp" || fam.name == "sine-eclosed") && !n) {
    if (variant == "path-component")
      return path_certificate(fam.pair, phi, reciprocal_point(fam.pair, 1),
                              z_index_at(fam.pair, std::vector<double>{0.0}));
    if (!variant.empty() && variant != "crossing") throw Error(ErrorKind::unknown_name, "unknown obstruction " + variant);
    return crossing_certificate(fam, phi, Region{1, Region::Op::abs_ge, 1.0 - 2.0 * eps});
  }
  if (fam.name == "comb" && !n) return crossing_certificate(fam, phi, Region{1, Region::Op::le, 2.0 * eps});
  if (fam.name == "ndagger-eopen" && n) {
    // phi_n(1) = 1/(n+1) and nothing else takes that value
    return ClopenCertificate{*n + 1, {reciprocal_point(fam.pair, 1)}};
  }
  if (fam.name == "hawaii" && n) return winding_certificate(fam, *n);
  throw Error(ErrorKind::refused, fam.name + (n ? " phi_" + std::to_string(*n) : std::string(" limit")) +
                                      " has no obstruction recipe");
}

Certificate build_positive_certificate(const MapFamily& family, std::optional<std::size_t> n) {
  return PositiveCertificate{explicit_extension(family, n), 0.0};
}

}  // namespace extenlab
