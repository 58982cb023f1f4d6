#include "extenlab/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "extenlab/error.hpp"

namespace extenlab::io {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::parse_error, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object()) bad(std::string("expected an object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

template <class T>
T get(const json& j, const char* key) {
  try {
    return field(j, key).get<T>();
  } catch (const json::exception& e) {
    bad(std::string("field '") + key + "': " + e.what());
  }
}

std::size_t index_value(const json& j) {
  if (!j.is_number_unsigned()) bad("expected a non-negative integer index");
  return j.get<std::size_t>();
}

std::vector<std::size_t> index_list(const json& j, const char* key) {
  const json& a = field(j, key);
  if (!a.is_array()) bad(std::string("field '") + key + "' must be an array");
  std::vector<std::size_t> out;
  out.reserve(a.size());
  for (const auto& v : a) out.push_back(index_value(v));
  return out;
}

double number(const json& j) {
  if (!j.is_number()) bad("expected a number");
  return j.get<double>();
}

json rows_of(const std::vector<double>& flat, std::size_t dim) {
  json out = json::array();
  for (std::size_t i = 0; dim > 0 && i < flat.size() / dim; ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < dim; ++k) row.push_back(flat[i * dim + k]);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<double> flat_of(const json& rows, std::size_t dim, const char* what) {
  if (!rows.is_array()) bad(std::string(what) + " must be an array of points");
  std::vector<double> out;
  out.reserve(rows.size() * dim);
  for (const auto& row : rows) {
    if (!row.is_array() || row.size() != dim)
      bad(std::string(what) + " rows must have " + std::to_string(dim) + " coordinates");
    for (const auto& v : row) out.push_back(number(v));
  }
  return out;
}

Dyadic resolution_of(const json& j) {
  try {
    if (j.is_string()) return Dyadic::parse(j.get<std::string>());
    if (j.is_number()) return Dyadic::from_value(j.get<double>());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::not_dyadic) throw;
    bad(e.what());
  }
  bad("resolution must be \"2^-k\" or an exact power of two");
}

std::string_view retraction_kind_name(Retraction::Kind k) {
  switch (k) {
    case Retraction::Kind::clamp_interval: return "clamp-interval";
    case Retraction::Kind::clamp_disk: return "clamp-disk";
    case Retraction::Kind::radial: return "radial";
    case Retraction::Kind::collapse: return "collapse";
  }
  return "";
}

Retraction::Kind retraction_kind(const std::string& s) {
  if (s == "clamp-interval") return Retraction::Kind::clamp_interval;
  if (s == "clamp-disk") return Retraction::Kind::clamp_disk;
  if (s == "radial") return Retraction::Kind::radial;
  if (s == "collapse") return Retraction::Kind::collapse;
  bad("unknown retraction kind '" + s + "'");
}

std::string_view op_name(Region::Op op) {
  switch (op) {
    case Region::Op::le: return "le";
    case Region::Op::ge: return "ge";
    case Region::Op::abs_ge: return "abs_ge";
  }
  return "";
}

Region::Op op_of(const std::string& s) {
  if (s == "le") return Region::Op::le;
  if (s == "ge") return Region::Op::ge;
  if (s == "abs_ge") return Region::Op::abs_ge;
  bad("unknown region op '" + s + "'");
}

MapSample values_map(const json& j, std::shared_ptr<const Net> domain, SpacePtr codomain) {
  const std::size_t dim = codomain->net.dimension();
  MapSample m{std::move(domain), codomain, flat_of(field(j, "values"), dim, "values"), modulus_from_json(field(j, "modulus"))};
  if (m.values.size() != m.size() * dim)
    bad("values has " + std::to_string(m.values.size() / dim) + " rows for a domain of " + std::to_string(m.size()) +
        " points");
  return m;
}

json values_json(const MapSample& m) {
  json j;
  j["values"] = rows_of(m.values, m.dimension());
  j["modulus"] = to_json(m.modulus);
  return j;
}

std::string fmt(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

// --- nets and spaces ---------------------------------------------------------

json to_json(const Net& net) {
  json j;
  j["dimension"] = net.dimension();
  j["points"] = rows_of(net.coords(), net.dimension());
  j["resolution"] = net.resolution();
  const Metric& m = net.metric();
  if (m.is_euclidean() && m.blocks[0] == net.dimension()) {
    j["metric"] = "euclidean";
  } else if (m.kind == Metric::Kind::blocks) {
    j["metric"] = {{"blocks", m.blocks}};
  } else if (m.kind == Metric::Kind::cone) {
    j["metric"] = {{"cone", m.blocks}};
  } else {
    const std::size_t n = net.size();
    json rows = json::array();
    for (std::size_t i = 0; i < n; ++i)
      rows.push_back(std::vector<double>(m.matrix.begin() + static_cast<std::ptrdiff_t>(i * n),
                                         m.matrix.begin() + static_cast<std::ptrdiff_t>((i + 1) * n)));
    j["metric"] = {{"matrix", rows}};
  }
  return j;
}

Net net_from_json(const json& j) {
  const std::size_t dim = get<std::size_t>(j, "dimension");
  if (dim == 0) bad("dimension must be >= 1");
  std::vector<double> coords = flat_of(field(j, "points"), dim, "points");
  const double resolution = number(field(j, "resolution"));
  if (!(resolution > 0.0)) bad("resolution must be > 0");
  const json& mj = field(j, "metric");
  Metric metric;
  if (mj.is_string()) {
    if (mj.get<std::string>() != "euclidean") bad("metric must be \"euclidean\" or an object");
    metric = Metric::euclidean(dim);
  } else if (mj.is_object() && mj.contains("blocks")) {
    metric = Metric::max_of(get<std::vector<std::size_t>>(mj, "blocks"));
  } else if (mj.is_object() && mj.contains("cone")) {
    metric = Metric::cone_over(get<std::vector<std::size_t>>(mj, "cone"));
  } else if (mj.is_object() && mj.contains("matrix")) {
    const std::size_t n = coords.size() / dim;
    metric = Metric::explicit_matrix(flat_of(mj["matrix"], n, "matrix"));
    if (metric.matrix.size() != n * n) bad("distance matrix must be square of the net size");
  } else {
    bad("unrecognised metric");
  }
  try {
    return Net(dim, std::move(coords), resolution, std::move(metric));
  } catch (const Error& e) {
    bad(e.what());
  }
}

json to_json(const Modulus& m) {
  if (m.kind() == Modulus::Kind::lipschitz) return {{"lipschitz", m.lipschitz_constant()}};
  json steps = json::array();
  for (const auto& [r, b] : m.table()) steps.push_back({r, b});
  return {{"steps", steps}};
}

Modulus modulus_from_json(const json& j) {
  try {
    if (j.is_object() && j.contains("lipschitz")) return Modulus::lipschitz(number(j["lipschitz"]));
    if (j.is_object() && j.contains("steps")) {
      std::vector<std::pair<double, double>> table;
      for (const auto& e : j["steps"]) {
        if (!e.is_array() || e.size() != 2) bad("steps entries must be [radius, bound]");
        table.emplace_back(number(e[0]), number(e[1]));
      }
      return Modulus::step(std::move(table));
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::parse_error) throw;
    bad(e.what());
  }
  bad("modulus must be {lipschitz: L} or {steps: [[r, b], ...]}");
}

json to_json(const AnnotatedSpace& s) {
  json j;
  j["name"] = s.name;
  if (s.catalog) {
    j["parameters"] = json::object();
    for (const auto& [k, v] : s.catalog->parameters) j["parameters"][k] = v;
    j["resolution"] = s.catalog->resolution.str();
    if (s.catalog->name != s.name) j["catalog"] = s.catalog->name;
    return j;
  }
  j["net"] = to_json(s.net);
  j["path_components"] = s.path_components;
  j["component_names"] = s.component_names;
  j["connectivity_threshold"] = s.connectivity_threshold;
  json clopen;
  clopen["atom_of"] = s.clopen.atom_of;
  clopen["atom_count"] = s.clopen.atom_count;
  clopen["tails"] = json::array();
  for (const auto& t : s.clopen.tails) clopen["tails"].push_back({{"limit_atom", t.limit_atom}, {"atoms", t.atoms}});
  j["clopen_atoms"] = clopen;
  j["retractions"] = json::array();
  for (const Retraction& r : s.retractions) {
    json rj;
    rj["name"] = r.name;
    rj["kind"] = retraction_kind_name(r.kind);
    rj["center"] = r.center;
    rj["radius"] = r.radius;
    rj["lo"] = r.lo;
    rj["hi"] = r.hi;
    rj["reach"] = r.reach;
    rj["circle"] = r.circle;
    j["retractions"].push_back(rj);
  }
  j["basepoints"] = json::object();
  for (const auto& [k, v] : s.basepoints) j["basepoints"][k] = v;
  if (!s.circle_index.empty()) j["circle_index"] = s.circle_index;
  j["convex"] = s.convex;
  return j;
}

SpacePtr space_from_json(const json& j) {
  if (!j.is_object()) bad("a space must be a JSON object");
  if (!j.contains("net")) {
    CatalogRef ref;
    ref.name = j.contains("catalog") ? get<std::string>(j, "catalog") : get<std::string>(j, "name");
    if (j.contains("parameters")) {
      if (!j["parameters"].is_object()) bad("parameters must be an object");
      for (const auto& [k, v] : j["parameters"].items()) ref.parameters[k] = number(v);
    }
    ref.resolution = resolution_of(field(j, "resolution"));
    return make_space(ref);
  }
  auto s = std::make_shared<AnnotatedSpace>();
  s->name = j.value("name", std::string("user"));
  s->net = net_from_json(j["net"]);
  s->path_components = index_list(j, "path_components");
  if (j.contains("component_names")) {
    s->component_names = get<std::vector<std::string>>(j, "component_names");
  } else {
    const std::size_t k = s->path_components.empty()
                              ? 0
                              : *std::max_element(s->path_components.begin(), s->path_components.end()) + 1;
    for (std::size_t c = 0; c < k; ++c) s->component_names.push_back("component-" + std::to_string(c));
  }
  s->connectivity_threshold = j.value("connectivity_threshold", 1.0);
  const json& cj = field(j, "clopen_atoms");
  s->clopen.atom_of = index_list(cj, "atom_of");
  s->clopen.atom_count = cj.contains("atom_count")
                             ? get<std::size_t>(cj, "atom_count")
                             : (s->clopen.atom_of.empty()
                                    ? 0
                                    : *std::max_element(s->clopen.atom_of.begin(), s->clopen.atom_of.end()) + 1);
  for (const auto a : s->clopen.atom_of)
    if (a >= s->clopen.atom_count) bad("clopen atom id out of range");
  if (cj.contains("tails"))
    for (const auto& t : cj["tails"]) {
      ClopenStructure::Tail tail{index_value(field(t, "limit_atom")), index_list(t, "atoms")};
      if (tail.limit_atom >= s->clopen.atom_count) bad("tail limit atom out of range");
      for (const auto a : tail.atoms)
        if (a >= s->clopen.atom_count) bad("tail atom out of range");
      s->clopen.tails.push_back(std::move(tail));
    }
  if (j.contains("retractions"))
    for (const auto& rj : j["retractions"]) {
      Retraction r;
      r.name = get<std::string>(rj, "name");
      r.kind = retraction_kind(get<std::string>(rj, "kind"));
      r.center = rj.value("center", std::vector<double>{});
      r.radius = rj.value("radius", 1.0);
      r.lo = rj.value("lo", 0.0);
      r.hi = rj.value("hi", 1.0);
      r.reach = rj.value("reach", 1.0);
      r.circle = rj.value("circle", 0);
      if ((r.kind != Retraction::Kind::clamp_interval) && r.center.size() != s->net.dimension())
        bad("retraction '" + r.name + "' needs a center of the net's dimension");
      s->retractions.push_back(std::move(r));
    }
  if (j.contains("basepoints"))
    for (const auto& [k, v] : j["basepoints"].items()) {
      s->basepoints[k] = index_value(v);
      if (s->basepoints[k] >= s->net.size()) bad("basepoint '" + k + "' out of range");
    }
  if (j.contains("circle_index")) s->circle_index = get<std::vector<int>>(j, "circle_index");
  s->convex = j.value("convex", false);
  const auto problems = check_space_invariants(*s);
  if (!problems.empty()) bad("space '" + s->name + "' violates its invariants: " + problems.front());
  return s;
}

json to_json(const SpacePair& pair) {
  json j;
  j["space"] = to_json(*pair.y);
  j["z_indices"] = pair.z;
  return j;
}

SpacePair pair_from_json(const json& j) {
  SpacePtr y = space_from_json(field(j, "space"));
  std::vector<std::size_t> z = index_list(j, "z_indices");
  for (const auto i : z)
    if (i >= y->size()) bad("z index " + std::to_string(i) + " out of range");
  try {
    return SpacePair::make(std::move(y), std::move(z));
  } catch (const Error& e) {
    bad(e.what());
  }
}

// --- maps and problems ----------------------------------------------------------

json map_to_json(const MapSample& f, const json& domain_ref, const AnnotatedSpace& codomain) {
  json j;
  j["domain"] = domain_ref;
  j["codomain"] = to_json(codomain);
  const json v = values_json(f);
  j["values"] = v["values"];
  j["modulus"] = v["modulus"];
  return j;
}

MapSample map_from_json(const json& j) {
  const json& d = field(j, "domain");
  const SpacePtr codomain = space_from_json(field(j, "codomain"));
  if (d.contains("pair")) {
    const SpacePair pair = pair_from_json(d["pair"]);
    const std::string on = d.value("on", std::string("z"));
    if (on == "z") return values_map(j, pair.z_net, codomain);
    if (on == "y") return values_map(j, pair.y_net(), codomain);
    bad("domain 'on' must be \"z\" or \"y\"");
  }
  const SpacePtr y = space_from_json(field(d, "space"));
  return values_map(j, std::shared_ptr<const Net>(y, &y->net), codomain);
}

json to_json(const Problem& p) {
  json j;
  j["pair"] = to_json(p.pair);
  j["codomain"] = to_json(*p.phi.codomain);
  j["phi"] = values_json(p.phi);
  return j;
}

Problem problem_from_json(const json& j) {
  SpacePair pair = pair_from_json(field(j, "pair"));
  const SpacePtr codomain = space_from_json(field(j, "codomain"));
  MapSample phi = values_map(field(j, "phi"), pair.z_net, codomain);
  return {std::move(pair), std::move(phi)};
}

// --- certificates and verdicts -----------------------------------------------

json to_json(const Certificate& cert) {
  json j;
  j["kind"] = certificate_kind(cert);
  std::visit(
      [&](const auto& c) {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, PositiveCertificate>) {
          j["tolerance"] = c.tolerance;
          j["extension"] = values_json(c.extension);
        } else if constexpr (std::is_same_v<T, PathComponentCertificate>) {
          j["z1"] = c.z1;
          j["z2"] = c.z2;
          j["y_path"] = c.y_path;
          j["x_labels"] = c.x_labels;
        } else if constexpr (std::is_same_v<T, ClopenCertificate>) {
          j["k"] = c.k;
          j["trace"] = c.trace;
        } else if constexpr (std::is_same_v<T, MandatoryCrossingCertificate>) {
          j["brackets"] = json::array();
          for (const auto& [a, b] : c.brackets) j["brackets"].push_back({a, b});
          j["region"] = {{"axis", c.region.axis}, {"op", op_name(c.region.op)}, {"threshold", c.region.threshold}};
          j["z0"] = c.z0;
          j["separation"] = c.separation;
        } else {
          j["loop"] = c.loop;
          j["rings"] = json::array();
          for (const auto& ring : c.rings) j["rings"].push_back(rows_of(ring, 2));
          j["retraction"] = c.retraction;
          j["expected"] = c.expected;
        }
      },
      cert);
  return j;
}

Certificate certificate_from_json(const json& j, const Problem& problem) {
  const std::string kind = get<std::string>(j, "kind");
  if (kind == "positive") {
    PositiveCertificate c{values_map(field(j, "extension"), problem.pair.y_net(), problem.phi.codomain),
                          number(field(j, "tolerance"))};
    return c;
  }
  if (kind == "path-component") {
    PathComponentCertificate c;
    c.z1 = index_value(field(j, "z1"));
    c.z2 = index_value(field(j, "z2"));
    c.y_path = index_list(j, "y_path");
    const auto labels = index_list(j, "x_labels");
    if (labels.size() != 2) bad("x_labels must hold two labels");
    c.x_labels = {labels[0], labels[1]};
    return c;
  }
  if (kind == "clopen") {
    ClopenCertificate c;
    c.k = index_value(field(j, "k"));
    c.trace = index_list(j, "trace");
    return c;
  }
  if (kind == "mandatory-crossing") {
    MandatoryCrossingCertificate c;
    const json& br = field(j, "brackets");
    if (!br.is_array()) bad("brackets must be an array");
    for (const auto& b : br) {
      if (!b.is_array() || b.size() != 2) bad("each bracket must be [a, b]");
      c.brackets.emplace_back(index_value(b[0]), index_value(b[1]));
    }
    const json& r = field(j, "region");
    c.region.axis = index_value(field(r, "axis"));
    c.region.op = op_of(get<std::string>(r, "op"));
    c.region.threshold = number(field(r, "threshold"));
    c.z0 = index_value(field(j, "z0"));
    c.separation = number(field(j, "separation"));
    return c;
  }
  if (kind == "winding") {
    WindingCertificate c;
    c.loop = index_list(j, "loop");
    const json& rings = field(j, "rings");
    if (!rings.is_array()) bad("rings must be an array");
    for (const auto& ring : rings) c.rings.push_back(flat_of(ring, 2, "ring"));
    c.retraction = get<std::string>(j, "retraction");
    c.expected = get<int>(j, "expected");
    return c;
  }
  bad("unknown certificate kind '" + kind + "'");
}

json to_json(const Verdict& v) {
  json j;
  j["status"] = to_string(v.status);
  j["kind"] = v.kind;
  j["epsilon"] = v.epsilon;
  j["margins"] = {{"margin", v.margin}};
  j["trace"] = json::array();
  for (const auto& t : v.trace) j["trace"].push_back({{"check", t.check}, {"passed", t.passed}, {"detail", t.detail}});
  return j;
}

// --- reports -------------------------------------------------------------------

json to_json(const Report& r, bool timings) {
  json j;
  j["example"] = r.example;
  j["anchor"] = r.anchor;
  j["resolution"] = r.resolution.str();
  j["epsilon"] = r.resolution.value();
  j["n_max"] = r.n_max;
  j["rows"] = json::array();
  for (const auto& row : r.rows) {
    json rj;
    rj["label"] = row.label;
    rj["n"] = row.n ? json(*row.n) : json(nullptr);
    rj["sup"] = row.sup ? json(*row.sup) : json(nullptr);
    rj["sup_upper"] = row.sup_upper ? json(*row.sup_upper) : json(nullptr);
    rj["kind"] = row.kind;
    rj["status"] = to_string(row.status);
    rj["margin"] = row.margin;
    rj["note"] = row.note;
    j["rows"].push_back(rj);
  }
  j["checks"] = json::array();
  for (const auto& c : r.checks) j["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  j["conclusion"] = r.conclusion;
  j["verified"] = r.verified();
  if (timings) j["seconds"] = r.seconds;
  return j;
}

std::string report_text(const Report& r, bool timings) {
  std::ostringstream out;
  out << r.example << " (" << r.anchor << ")\n";
  out << "resolution " << r.resolution.str() << ", n-max " << r.n_max << "\n\n";
  char line[256];
  std::snprintf(line, sizeof line, "%-12s %6s  %-14s %-14s %-18s %-20s %s\n", "row", "n", "sup", "sup-upper", "kind",
                "verdict", "margin");
  out << line;
  for (const auto& row : r.rows) {
    std::snprintf(line, sizeof line, "%-12s %6s  %-14s %-14s %-18s %-20s %s\n", row.label.c_str(),
                  row.n ? std::to_string(*row.n).c_str() : "-", row.sup ? fmt(*row.sup, 8).c_str() : "-",
                  row.sup_upper ? fmt(*row.sup_upper, 8).c_str() : "-", row.kind.c_str(),
                  to_string(row.status).c_str(), fmt(row.margin, 8).c_str());
    out << line;
    if (!row.note.empty()) out << "    " << row.note << "\n";
  }
  if (!r.checks.empty()) out << "\n";
  for (const auto& c : r.checks) out << (c.passed ? "[ok]   " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
  out << "\n" << (r.verified() ? "VERIFIED" : "NOT VERIFIED") << ": " << r.conclusion << "\n";
  if (timings) out << "time " << fmt(r.seconds, 4) << " s\n";
  return out.str();
}

std::string report_csv(const Report& r) {
  std::ostringstream out;
  out << "label,n,sup,sup_upper,kind,status,margin\n";
  for (const auto& row : r.rows) {
    out << row.label << ',' << (row.n ? std::to_string(*row.n) : "") << ',' << (row.sup ? fmt(*row.sup, 17) : "")
        << ',' << (row.sup_upper ? fmt(*row.sup_upper, 17) : "") << ',' << row.kind << ',' << to_string(row.status)
        << ',' << fmt(row.margin, 17) << '\n';
  }
  return out.str();
}

std::string svg_sketch(const AnnotatedSpace& space, const std::vector<Overlay>& overlays, const std::string& title) {
  if (space.net.dimension() != 2) throw Error(ErrorKind::invalid_argument, "SVG sketches need a planar space");
  double lo_x = std::numeric_limits<double>::infinity(), lo_y = lo_x, hi_x = -lo_x, hi_y = -lo_x;
  auto grow = [&](std::span<const double> p) {
    lo_x = std::min(lo_x, p[0]);
    hi_x = std::max(hi_x, p[0]);
    lo_y = std::min(lo_y, p[1]);
    hi_y = std::max(hi_y, p[1]);
  };
  for (std::size_t i = 0; i < space.size(); ++i) grow(space.net.point(i));
  for (const auto& o : overlays)
    for (std::size_t i = 0; i < o.map->size(); ++i) grow(o.map->value(i));
  const double size = 600.0, pad = 30.0;
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9});
  const double scale = (size - 2 * pad) / span;
  auto px = [&](double x) { return fmt(pad + (x - lo_x) * scale, 6); };
  auto py = [&](double y) { return fmt(size - pad - (y - lo_y) * scale, 6); };
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\"" << size + 20 << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << pad << "\" y=\"18\" font-family=\"monospace\" font-size=\"13\">" << xml_escape(title)
      << "</text>\n";
  out << "<g fill=\"#9a9a9a\">\n";
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto p = space.net.point(i);
    out << "<circle cx=\"" << px(p[0]) << "\" cy=\"" << py(p[1]) << "\" r=\"0.8\"/>\n";
  }
  out << "</g>\n";
  for (const auto& o : overlays) {
    out << "<g fill=\"" << xml_escape(o.color) << "\">\n";
    for (std::size_t i = 0; i < o.map->size(); ++i) {
      const auto p = o.map->value(i);
      out << "<circle cx=\"" << px(p[0]) << "\" cy=\"" << py(p[1]) << "\" r=\"2.2\"/>\n";
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

// --- files -----------------------------------------------------------------------

std::filesystem::path resolve_data_path(const std::filesystem::path& path) {
  if (path.is_absolute() || std::filesystem::exists(path)) return path;
  if (const char* dir = std::getenv("EXTENLAB_DATA_DIR"); dir && *dir) {
    const auto candidate = std::filesystem::path(dir) / path;
    if (std::filesystem::exists(candidate)) return candidate;
  }
  return path;
}

json read_json_file(const std::filesystem::path& path) {
  const auto resolved = resolve_data_path(path);
  std::ifstream in(resolved);
  if (!in) bad("cannot open '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    bad("'" + path.string() + "': " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::invalid_argument, "cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error(ErrorKind::invalid_argument, "write to '" + path.string() + "' failed");
}

}  // namespace extenlab::io
