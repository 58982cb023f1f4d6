#include "extenlab/examples.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <set>

#include "extenlab/error.hpp"
#include "extenlab/locator.hpp"

namespace extenlab {

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> on_circle(double angle) { return {std::cos(angle), std::sin(angle)}; }

std::vector<double> rotate(std::span<const double> p, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {c * p[0] - s * p[1], s * p[0] + c * p[1]};
}

double chord(std::span<const double> a, std::span<const double> b) { return std::hypot(a[0] - b[0], a[1] - b[1]); }

std::string first_failure(const Verdict& v) {
  for (const auto& t : v.trace)
    if (!t.passed) return t.check + ": " + t.detail;
  return {};
}

ReportRow certify(const std::string& label, std::optional<std::size_t> n, const SpacePair& pair, const MapSample& phi,
                  const Certificate& cert, const MapSample* limit) {
  const Verdict v = check_certificate(pair, phi, cert);
  ReportRow row;
  row.label = label;
  row.n = n;
  if (limit) {
    const SupBound b = sup_distance_bound(phi, *limit);
    row.sup = b.value;
    row.sup_upper = b.upper;
  }
  row.kind = certificate_kind(cert);
  row.status = v.status;
  row.margin = v.margin;
  row.note = first_failure(v);
  return row;
}

ReportRow failed_row(const std::string& label, std::optional<std::size_t> n, const std::string& kind, const Error& e) {
  ReportRow row;
  row.label = label;
  row.n = n;
  row.kind = kind;
  row.status = e.kind() == ErrorKind::refused || e.kind() == ErrorKind::extension_failure ||
                       e.kind() == ErrorKind::epsilon_too_large || e.kind() == ErrorKind::diameter_too_large
                   ? VerdictStatus::refuted
                   : VerdictStatus::inconsistent_input;
  row.note = e.what();
  return row;
}

void add_check(Report& r, const std::string& name, bool passed, const std::string& detail) {
  r.checks.push_back({name, passed, detail});
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

void check_sup_decreasing(Report& r) {
  double previous = std::numeric_limits<double>::infinity();
  bool ok = true;
  std::size_t rows = 0;
  for (const auto& row : r.rows) {
    if (!row.n || !row.sup) continue;
    ok = ok && *row.sup < previous;
    previous = *row.sup;
    ++rows;
  }
  add_check(r, "sup-decreasing", ok, "sup distance to the limit strictly decreases over " + std::to_string(rows) + " rows");
}

void check_refusal(Report& r, const MapFamily& fam, std::optional<std::size_t> n) {
  const std::string what = n ? "phi_" + std::to_string(*n) : std::string("limit");
  try {
    (void)explicit_extension(fam, n);
    add_check(r, "no-positive", false, "an explicit extension was offered for " + what);
  } catch (const Error& e) {
    add_check(r, "no-positive", e.kind() == ErrorKind::refused, "explicit extension refused for " + what);
  }
}

// --- catalog-family examples ------------------------------------------------

struct FamilyPlan {
  std::string family;
  bool members_extend;
  bool limit_extends;
  std::string limit_variant;
};

Report family_example(Report rep, const FamilyPlan& plan, std::size_t blocks = 12) {
  const MapFamily fam = example_family(plan.family, rep.resolution, blocks);
  if (rep.n_max > fam.n_max)
    throw Error(ErrorKind::beyond_truncation,
                "n-max " + std::to_string(rep.n_max) + " exceeds the truncation " + std::to_string(fam.n_max));
  for (std::size_t n = 1; n <= rep.n_max; ++n) {
    const MapSample phi = fam.member(n);
    const std::string label = "phi_" + std::to_string(n);
    try {
      const Certificate cert =
          plan.members_extend ? build_positive_certificate(fam, n) : build_negative_certificate(fam, n);
      rep.rows.push_back(certify(label, n, fam.pair, phi, cert, &fam.limit));
    } catch (const Error& e) {
      rep.rows.push_back(failed_row(label, n, plan.members_extend ? "positive" : "obstruction", e));
    }
  }
  try {
    const Certificate cert = plan.limit_extends ? build_positive_certificate(fam, std::nullopt)
                                                : build_negative_certificate(fam, std::nullopt, plan.limit_variant);
    rep.rows.push_back(certify("limit", std::nullopt, fam.pair, fam.limit, cert, nullptr));
  } catch (const Error& e) {
    rep.rows.push_back(failed_row("limit", std::nullopt, plan.limit_extends ? "positive" : "obstruction", e));
  }
  check_sup_decreasing(rep);
  if (!plan.members_extend && rep.n_max >= 1) check_refusal(rep, fam, 1);
  if (!plan.limit_extends) check_refusal(rep, fam, std::nullopt);
  return rep;
}

Report sine_not_eclosed(Report rep) {
  rep = family_example(std::move(rep), {"sine-eclosed", true, false, "crossing"});
  // the same limit, refuted a second way: its two ends land in different path components
  const MapFamily fam = example_family("pathcomp", rep.resolution);
  try {
    const Certificate cert = build_negative_certificate(fam, std::nullopt, "path-component");
    rep.rows.push_back(certify("limit", std::nullopt, fam.pair, fam.limit, cert, nullptr));
  } catch (const Error& e) {
    rep.rows.push_back(failed_row("limit", std::nullopt, "path-component", e));
  }
  rep.conclusion =
      "each phi_n extends along the curve, the limit does not: a path from (1,0) to (0,0) would have to leave the "
      "curve's path component, and every chain between consecutive x_k reaches |y| = 1";
  return rep;
}

Report ndagger_eclosed(Report rep) {
  rep = family_example(std::move(rep), {"ndagger-eclosed", true, true, ""}, rep.n_max + 2);
  const MapFamily fam = example_family("ndagger-eclosed", rep.resolution, rep.n_max + 2);
  const ClopenStructure& clopen = fam.pair.y->clopen;
  std::map<double, std::vector<std::size_t>, std::greater<>> preimage;
  for (std::size_t i = 0; i < fam.pair.z.size(); ++i)
    if (fam.limit.value(i)[0] != 0.0) preimage[fam.limit.value(i)[0]].push_back(fam.pair.z[i]);
  bool traces = true;
  std::vector<std::vector<std::size_t>> atom_sets;
  for (const auto& [value, points] : preimage) {
    traces = traces && clopen.trace_is_clopen(fam.pair.z, points);
    std::set<std::size_t> atoms;
    for (const std::size_t p : points) atoms.insert(clopen.atom_of[p]);
    atom_sets.emplace_back(atoms.begin(), atoms.end());
  }
  add_check(rep, "clopen-intersection", traces, "each preimage of a value 1/m is the trace of a clopen set");
  const auto disjoint = disjointify(clopen, atom_sets);
  std::set<std::size_t> before, after;
  bool pairwise = true;
  for (const auto& s : atom_sets) before.insert(s.begin(), s.end());
  for (const auto& s : disjoint)
    for (const std::size_t a : s) pairwise = after.insert(a).second && pairwise;
  add_check(rep, "disjointify", pairwise && before == after,
            std::to_string(disjoint.size()) + " pairwise disjoint clopen sets with the same union");
  rep.conclusion =
      "each phi_n and the limit extend: every preimage is the trace of a clopen union of blocks, and the "
      "disjointified blocks carry the extension";
  return rep;
}

// --- ANR constructions ------------------------------------------------------

Report anr_eopen(Report rep) {
  const Dyadic res = rep.resolution;
  const SpacePair base = make_pair("interval-endpoints", res);
  const SpacePtr x = make_space("circle", res);
  const SpacePtr nd = make_space("ndagger", res);
  const SpacePtr ytil = product(base.y, nd);
  const std::size_t ny = base.y->size(), last = ny - 1;
  const std::size_t cutoff = ndagger_cutoff(res);
  if (rep.n_max > cutoff) throw Error(ErrorKind::beyond_truncation, "n-max exceeds the N truncation");

  // phi_k rotates the limit by 3/k; the limit extends along the quarter arc
  auto member = [&](std::size_t k, double t) { return on_circle(kPi / 2.0 * t + 3.0 / static_cast<double>(k)); };
  auto limit_ext = [&](double t) { return on_circle(kPi / 2.0 * t); };

  std::vector<std::pair<std::size_t, std::vector<double>>> rows;
  std::map<std::size_t, std::size_t> slice_of;  // k -> N index
  for (std::size_t f = 0; f < nd->size(); ++f) {
    const double t = nd->net.point(f)[0];
    if (t == 0.0) {
      for (std::size_t i = 0; i < ny; ++i) rows.emplace_back(f * ny + i, limit_ext(base.y->net.point(i)[0]));
      continue;
    }
    const auto k = static_cast<std::size_t>(std::llround(1.0 / t));
    slice_of[k] = f;
    rows.emplace_back(f * ny, member(k, 0.0));
    rows.emplace_back(f * ny + last, member(k, 1.0));
  }
  std::sort(rows.begin(), rows.end());
  std::vector<std::size_t> z;
  std::vector<double> values;
  for (const auto& [i, v] : rows) {
    z.push_back(i);
    values.insert(values.end(), v.begin(), v.end());
  }
  const SpacePair pair = SpacePair::make(ytil, z);
  const MapSample phitil{pair.z_net, x, values, Modulus::lipschitz(3.0 + kPi / 2.0)};
  add_check(rep, "glued-modulus", check_modulus(phitil, 0.0), "phi~ on (N x Z) u ({0} x Y) is (3 + pi/2)-Lipschitz");

  const PartialExtension partial = dugundji_partial(pair, phitil, "radial");
  std::size_t first = 0;
  for (std::size_t k = cutoff; k >= 1; --k) {
    const std::size_t f = slice_of.at(k);
    const bool ok = std::all_of(partial.ok.begin() + static_cast<std::ptrdiff_t>(f * ny),
                                partial.ok.begin() + static_cast<std::ptrdiff_t>((f + 1) * ny), [](char c) { return c != 0; });
    if (!ok) break;
    first = k;
  }
  add_check(rep, "first-n", first != 0 && first <= rep.n_max,
            first == 0 ? "the neighbourhood extension misses every slice"
                       : "neighbourhood extension covers {1/k} x Y for all k >= " + std::to_string(first));

  const MapSample limit{base.z_net, x, [&] {
                          auto a = limit_ext(0.0), b = limit_ext(1.0);
                          a.insert(a.end(), b.begin(), b.end());
                          return a;
                        }(),
                        Modulus::lipschitz(std::sqrt(2.0))};
  if (first != 0)
    for (std::size_t k = first; k <= rep.n_max; ++k) {
      auto v = member(k, 0.0), w = member(k, 1.0);
      v.insert(v.end(), w.begin(), w.end());
      const MapSample phi{base.z_net, x, v, Modulus::lipschitz(std::sqrt(2.0))};
      const std::size_t f = slice_of.at(k);
      MapSample ext{base.y_net(), x,
                    std::vector<double>(partial.values.begin() + static_cast<std::ptrdiff_t>(2 * f * ny),
                                        partial.values.begin() + static_cast<std::ptrdiff_t>(2 * (f + 1) * ny)),
                    Modulus::lipschitz(partial.lipschitz)};
      rep.rows.push_back(certify("phi_" + std::to_string(k), k, base, phi, PositiveCertificate{ext, 0.0}, &limit));
    }
  check_sup_decreasing(rep);
  rep.conclusion = "restricting one extension of phi~ over a neighbourhood of (N x Z) u ({0} x Y) to the slices "
                   "{1/k} x Y extends phi_k for every k >= " +
                   std::to_string(first) + " (empirical first n)";
  return rep;
}

Report eop_homotopy(Report rep) {
  const Dyadic res = rep.resolution;
  const SpacePtr y = make_space("circle", res);
  const SpacePtr times = make_space("interval", res, {{"ndagger", 1.0}});
  const SpacePtr ytil = product(y, times);
  const std::size_t ny = y->size();
  const std::size_t cutoff = ndagger_cutoff(res);
  if (rep.n_max > cutoff) throw Error(ErrorKind::beyond_truncation, "n-max exceeds the N truncation");
  // phi_k rotates the identity of the circle by 3/k
  auto time_index = [&](double t) -> std::optional<std::size_t> {
    if (t == 0.0) return 0;
    const auto k = static_cast<std::size_t>(std::llround(1.0 / t));
    if (k >= 1 && 1.0 / static_cast<double>(k) == t) return k;
    return std::nullopt;
  };
  auto target = [&](std::size_t k, std::size_t i) {
    const auto p = y->net.point(i);
    return k == 0 ? std::vector<double>(p.begin(), p.end()) : rotate(p, 3.0 / static_cast<double>(k));
  };

  std::optional<MapSample> psi;
  std::vector<std::size_t> kept;
  std::size_t first = 0;
  for (std::size_t n = 1; n <= rep.n_max && !psi; ++n) {
    kept.clear();
    for (std::size_t f = 0; f < times->size(); ++f)
      if (times->net.point(f)[0] <= 1.0 / static_cast<double>(n))
        for (std::size_t i = 0; i < ny; ++i) kept.push_back(f * ny + i);
    const SpacePtr sub = subspace(ytil, kept, "cylinder");
    std::vector<std::size_t> z;
    std::vector<double> values;
    for (std::size_t q = 0; q < kept.size(); ++q) {
      const std::size_t f = kept[q] / ny, i = kept[q] % ny;
      if (const auto k = time_index(times->net.point(f)[0])) {
        z.push_back(q);
        const auto v = target(*k, i);
        values.insert(values.end(), v.begin(), v.end());
      }
    }
    const SpacePair pair = SpacePair::make(sub, z);
    const MapSample f{pair.z_net, y, values, Modulus::lipschitz(4.0)};
    std::vector<double> base_values;
    for (const std::size_t q : kept) {
      const auto p = y->net.point(q % ny);
      base_values.insert(base_values.end(), p.begin(), p.end());
    }
    const MapSample base{pair.y_net(), y, base_values, Modulus::lipschitz(1.0)};
    try {
      psi = dugundji_extend_relative(pair, f, base, "radial");
      first = n;
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::extension_failure) throw;
    }
  }
  add_check(rep, "first-n", psi.has_value(),
            psi ? "homotopy on [0, 1/" + std::to_string(first) + "] x Y found" : "no n up to n-max succeeded");
  if (!psi) {
    rep.conclusion = "no homotopy found within n-max";
    return rep;
  }
  const double eps = res.value();
  add_check(rep, "homotopy-modulus", check_modulus(*psi, 2.0 * eps), "psi passes its modulus check with slack 2eps");

  // slice identities psi_{1/k} = phi_k and psi_0 = phi, exactly on net points
  std::map<std::size_t, std::vector<double>> slices;
  for (std::size_t q = 0; q < kept.size(); ++q) {
    const std::size_t f = kept[q] / ny, i = kept[q] % ny;
    const auto k = time_index(times->net.point(f)[0]);
    if (!k) continue;
    auto& s = slices[*k];
    if (s.empty()) s.assign(2 * ny, 0.0);
    std::copy_n(psi->value(q).begin(), 2, s.begin() + static_cast<std::ptrdiff_t>(2 * i));
  }
  auto exact = [&](std::size_t k) {
    const auto& s = slices.at(k);
    for (std::size_t i = 0; i < ny; ++i) {
      const auto v = target(k, i);
      if (s[2 * i] != v[0] || s[2 * i + 1] != v[1]) return false;
    }
    return true;
  };
  add_check(rep, "slice-0", exact(0), "psi_0 = phi on every net point");
  const auto ynet = std::make_shared<const Net>(y->net);
  const MapSample phi = inclusion_map(ynet, y);
  for (std::size_t k = first; k <= rep.n_max; ++k) {
    ReportRow row;
    row.label = "psi_1/" + std::to_string(k);
    row.n = k;
    MapSample phik{ynet, y, {}, Modulus::lipschitz(1.0)};
    for (std::size_t i = 0; i < ny; ++i) {
      const auto v = target(k, i);
      phik.values.insert(phik.values.end(), v.begin(), v.end());
    }
    const SupBound b = sup_distance_bound(phik, phi);
    row.sup = b.value;
    row.sup_upper = b.upper;
    row.kind = "slice-identity";
    const bool ok = exact(k);
    row.status = ok ? VerdictStatus::verified : VerdictStatus::refuted;
    row.note = ok ? "" : "slice differs from phi_k";
    rep.rows.push_back(row);
  }
  check_sup_decreasing(rep);
  rep.conclusion = "a homotopy psi on [0, 1/" + std::to_string(first) +
                   "] x Y with psi_0 = phi and psi_{1/k} = phi_k for all k >= " + std::to_string(first) +
                   " (empirical first n)";
  return rep;
}

Report anr_eclosed(Report rep) {
  const Dyadic res = rep.resolution;
  const double eps = res.value();
  const SpacePair pair = make_pair("interval-ndagger", res);
  const SpacePtr x = make_space("circle", res);
  const SpacePtr y = pair.y;
  const auto ynet = pair.y_net();
  if (rep.n_max > ndagger_cutoff(res)) throw Error(ErrorKind::beyond_truncation, "n-max exceeds the N truncation");
  // phi(t) = e^{i pi (1 - t)} on N; phi_n freezes it below 1/n
  auto value_n = [](std::optional<std::size_t> n, double t) {
    const double s = n ? std::max(t, 1.0 / static_cast<double>(*n)) : t;
    return on_circle(kPi * (1.0 - s));
  };
  auto sample = [&](std::shared_ptr<const Net> domain, std::optional<std::size_t> n) {
    MapSample m{domain, x, {}, Modulus::lipschitz(kPi)};
    for (std::size_t i = 0; i < domain->size(); ++i) {
      const auto v = value_n(n, domain->point(i)[0]);
      m.values.insert(m.values.end(), v.begin(), v.end());
    }
    return m;
  };
  const MapSample phi = sample(pair.z_net, std::nullopt);
  std::optional<std::size_t> chosen;
  for (std::size_t n = 1; n <= rep.n_max; ++n) {
    const MapSample phin = sample(pair.z_net, n);
    rep.rows.push_back(certify("phi_" + std::to_string(n), n, pair, phin, PositiveCertificate{sample(ynet, n), 0.0}, &phi));
    if (!chosen && sup_distance(phin, phi) < 0.5) chosen = n;
  }
  check_sup_decreasing(rep);
  add_check(rep, "close-member", chosen.has_value(), chosen ? "phi_" + std::to_string(*chosen) + " is within 1/2 of phi"
                                                             : "no phi_n within 1/2 of phi");
  if (!chosen) {
    rep.conclusion = "no member close enough to glue";
    return rep;
  }
  try {
    // neighbourhood extension of phi, a closed neighbourhood V of Z inside it,
    // a homotopy on V from phibar_n to it, and the Urysohn-weighted glue
    const PartialExtension hat = dugundji_partial(pair, phi, "radial");
    const SubsetLocator to_z(y->net, pair.z);
    std::vector<double> dz(y->size());
    double bad = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < y->size(); ++i) {
      dz[i] = to_z.nearest(i).second;
      if (!hat.ok[i]) bad = std::min(bad, dz[i]);
    }
    const double rho = std::min(bad / 2.0, 4.0 * eps);
    std::vector<std::size_t> v;
    for (std::size_t i = 0; i < y->size(); ++i)
      if (dz[i] <= rho) v.push_back(i);
    const auto vnet = std::make_shared<const Net>(y->net.subset(v));
    const MapSample phibar = sample(ynet, *chosen);
    MapSample from{vnet, x, {}, phibar.modulus}, to{vnet, x, {}, Modulus::lipschitz(hat.lipschitz)};
    for (const std::size_t i : v) {
      from.values.insert(from.values.end(), phibar.value(i).begin(), phibar.value(i).end());
      to.values.insert(to.values.end(), hat.values.begin() + static_cast<std::ptrdiff_t>(2 * i),
                       hat.values.begin() + static_cast<std::ptrdiff_t>(2 * i + 2));
    }
    const Homotopy psi = homotopy_between(from, to, HomotopyMode::geodesic_circle, Dyadic(8));
    const MapSample f = urysohn(ynet, pair.z, v);
    const MapSample glued = glue_homotopy_extension(pair, v, phibar, psi, f);
    rep.rows.push_back(certify("limit", std::nullopt, pair, phi, PositiveCertificate{glued, 0.0}, nullptr));
    add_check(rep, "restriction-exact", sup_distance(restrict(glued, pair), phi) == 0.0,
              "glued extension equals phi on every Z net point");
    add_check(rep, "glued-modulus", check_modulus(glued, 4.0 * eps), "glued extension passes check_modulus with slack 4eps");
    add_check(rep, "neighbourhood", true,
              "V = {d(y, Z) <= " + num(rho) + "}, " + std::to_string(v.size()) + " net points, Urysohn Lipschitz " +
                  num(f.modulus.lipschitz_constant()));
  } catch (const Error& e) {
    rep.rows.push_back(failed_row("limit", std::nullopt, "positive", e));
  }
  rep.conclusion = "the limit extends: phibar_" + std::to_string(*chosen) +
                   " outside V, and on V the homotopy to the neighbourhood extension evaluated at the Urysohn time";
  return rep;
}

Report loc_ext(Report rep) {
  const Dyadic res = rep.resolution;
  const double target = 0.5;
  if (rep.n_max < 2) throw Error(ErrorKind::invalid_argument, "loc-ext needs at least two blocks");
  std::vector<SpacePair> parts(rep.n_max, make_pair("interval-endpoints", res));
  const OpcPair opc = opc_pair(parts);
  const SpacePair& pair = opc.pair;
  const SpacePtr x = make_space("circle", res);
  // block k: one end at angle 0, the other at 2^-(k+2); infinity at angle 0
  std::map<std::size_t, std::vector<double>> assigned;
  for (std::size_t k = 0; k < rep.n_max; ++k) {
    const auto& idx = opc.layout.block_indices[k];
    assigned[idx.front()] = on_circle(0.0);
    assigned[idx.back()] = on_circle(std::ldexp(1.0, -static_cast<int>(k + 3)));
  }
  assigned[opc.layout.infinity] = on_circle(0.0);
  MapSample phi{pair.z_net, x, {}, {}};
  for (const std::size_t zi : pair.z) {
    const auto& v = assigned.at(zi);
    phi.values.insert(phi.values.end(), v.begin(), v.end());
  }
  double lip = 0.0;
  for (std::size_t a = 0; a < pair.z.size(); ++a)
    for (std::size_t b = a + 1; b < pair.z.size(); ++b)
      lip = std::max(lip, phi.value_distance(a, b) / pair.z_net->distance(a, b));
  phi.modulus = Modulus::lipschitz(lip * (1.0 + 1e-9));
  try {
    const MapSample ext = small_diameter_extend(pair, phi, target);
    double previous = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < rep.n_max; ++k) {
      const auto& idx = opc.layout.block_indices[k];
      double diam = 0.0;
      for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t b = a + 1; b < idx.size(); ++b) diam = std::max(diam, ext.value_distance(idx[a], idx[b]));
      ReportRow row;
      row.label = "block " + std::to_string(k + 1);
      row.n = k + 1;
      row.sup = diam;
      row.kind = "diameter";
      const bool ok = diam <= target && diam < previous;
      row.status = ok ? VerdictStatus::verified : VerdictStatus::refuted;
      row.margin = target - diam;
      row.note = ok ? "" : "diameter not below the previous block's or the target";
      rep.rows.push_back(row);
      previous = diam;
    }
    rep.rows.push_back(certify("limit", std::nullopt, pair, phi, PositiveCertificate{ext, 0.0}, nullptr));
    add_check(rep, "target", value_diameter(ext) < target, "diam of the whole extension " + num(value_diameter(ext)) +
                                                               " < " + num(target));
  } catch (const Error& e) {
    rep.rows.push_back(failed_row("limit", std::nullopt, "positive", e));
  }
  rep.conclusion =
      "on the one-point compactification of the blocks, one small-diameter extension restricts to extensions of each "
      "block map whose diameters shrink to 0; this is the positive direction of the argument, whose contradiction "
      "step is not finitely checkable";
  return rep;
}

Report cone_contraction_example(Report rep) {
  const Dyadic res = rep.resolution;
  const double eps = res.value();
  const double target = 0.5;
  const SpacePtr x = make_space("circle", res);
  std::vector<std::size_t> arc;
  for (std::size_t i = 0; i < x->size(); ++i) {
    const auto p = x->net.point(i);
    if (std::abs(std::atan2(p[1], p[0])) <= 0.1) arc.push_back(i);
  }
  const SpacePtr v = subspace(x, arc, "arc");
  const double origin_point[2] = {1.0, 0.0};
  const auto p = v->index_of(origin_point);
  if (!p) throw Error(ErrorKind::inconsistent_input, "basepoint (1,0) missing from the arc");
  try {
    const Homotopy h = cone_contraction(x, v, *p, target);
    const std::size_t times = h.time_count(), nv = v->size();
    const auto pp = v->net.point(*p);
    bool fixed = true, start = true, end = true;
    double worst = 0.0;
    std::vector<double> reach(times, 0.0);
    for (std::size_t k = 0; k < times; ++k) {
      const auto at_p = h.value(k, *p);
      fixed = fixed && at_p[0] == pp[0] && at_p[1] == pp[1];
      for (std::size_t i = 0; i < nv; ++i) {
        const auto val = h.value(k, i);
        reach[k] = std::max(reach[k], chord(val, pp));
        if (k == 0) start = start && val[0] == v->net.point(i)[0] && val[1] == v->net.point(i)[1];
        if (k + 1 == times) end = end && val[0] == pp[0] && val[1] == pp[1];
      }
      worst = std::max(worst, reach[k]);
    }
    add_check(rep, "rel-p", fixed, "p is fixed at all " + std::to_string(times) + " slices");
    add_check(rep, "slice-0", start, "slice 0 is the inclusion of V");
    add_check(rep, "slice-1", end, "the last slice is constant p");
    add_check(rep, "target", worst <= target, "all values within " + num(worst) + " of p");
    add_check(rep, "homotopy-modulus", check_modulus(h.map, 2.0 * eps), "homotopy passes check_modulus with slack 2eps");
    std::set<std::size_t> sampled{0, (times - 1) / 4, (times - 1) / 2, 3 * (times - 1) / 4, times - 1};
    for (const std::size_t k : sampled) {
      ReportRow row;
      row.label = "t=" + num(h.time(k));
      row.sup = reach[k];
      row.kind = "rel-p";
      const auto at_p = h.value(k, *p);
      const bool ok = at_p[0] == pp[0] && at_p[1] == pp[1] && reach[k] <= target;
      row.status = ok ? VerdictStatus::verified : VerdictStatus::refuted;
      row.margin = target - reach[k];
      rep.rows.push_back(row);
    }
  } catch (const Error& e) {
    rep.rows.push_back(failed_row("contraction", std::nullopt, "rel-p", e));
  }
  rep.conclusion = "the arc V contracts to p inside the circle rel p, through values within the target of p, by "
                   "extending identity-on-base and spike-to-p over the cone";
  return rep;
}

Report equiconnected(Report rep) {
  const Dyadic res = rep.resolution;
  const double target = 1.0;
  const SpacePtr y = make_space("interval", res);
  const SpacePtr x = make_space("circle", res);
  const auto ynet = std::make_shared<const Net>(y->net);
  MapSample phi0{ynet, x, {}, Modulus::lipschitz(kPi / 4.0)};
  MapSample phi1{ynet, x, {}, Modulus::lipschitz(kPi / 4.0 + 0.6)};
  for (std::size_t i = 0; i < y->size(); ++i) {
    const double t = y->net.point(i)[0];
    const auto a = on_circle(kPi / 4.0 * t);
    const auto b = on_circle(kPi / 4.0 * t + 0.6 * std::max(0.0, t - 0.5));
    phi0.values.insert(phi0.values.end(), a.begin(), a.end());
    phi1.values.insert(phi1.values.end(), b.begin(), b.end());
  }
  std::vector<std::size_t> coincide;
  for (std::size_t i = 0; i < y->size(); ++i)
    if (phi0.value(i)[0] == phi1.value(i)[0] && phi0.value(i)[1] == phi1.value(i)[1]) coincide.push_back(i);
  try {
    const Homotopy h = equiconnect_homotopy(phi0, phi1, target);
    const std::size_t times = h.time_count();
    bool fixed = true;
    for (std::size_t k = 0; k < times; ++k)
      for (const std::size_t i : coincide) fixed = fixed && h.value(k, i)[0] == phi0.value(i)[0] && h.value(k, i)[1] == phi0.value(i)[1];
    std::vector<MapSample> slices;
    for (std::size_t k = 0; k < times; ++k) slices.push_back(h.slice(k));
    double spread = 0.0;
    for (std::size_t a = 0; a < times; ++a)
      for (std::size_t b = a + 1; b < times; ++b) spread = std::max(spread, sup_distance(slices[a], slices[b]));
    add_check(rep, "coincidence-fixed", fixed,
              std::to_string(coincide.size()) + " coincidence points fixed at all " + std::to_string(times) + " slices");
    add_check(rep, "pairwise-close", spread <= target, "max sup distance between slices " + num(spread));
    add_check(rep, "endpoints", slices.front().values == phi0.values && slices.back().values == phi1.values,
              "slice 0 = phi0 and slice 1 = phi1 exactly");
    std::set<std::size_t> sampled{0, (times - 1) / 4, (times - 1) / 2, 3 * (times - 1) / 4, times - 1};
    for (const std::size_t k : sampled) {
      ReportRow row;
      row.label = "t=" + num(h.time(k));
      row.sup = sup_distance(slices[k], phi0);
      row.kind = "coincidence-fixed";
      bool ok = true;
      for (const std::size_t i : coincide) ok = ok && h.value(k, i)[0] == phi0.value(i)[0] && h.value(k, i)[1] == phi0.value(i)[1];
      row.status = ok ? VerdictStatus::verified : VerdictStatus::refuted;
      row.margin = target - *row.sup;
      rep.rows.push_back(row);
    }
  } catch (const Error& e) {
    rep.rows.push_back(failed_row("homotopy", std::nullopt, "coincidence-fixed", e));
  }
  rep.conclusion = "close maps into the circle are joined by a homotopy that fixes their coincidence set and keeps "
                   "every two slices within the target";
  return rep;
}

const std::vector<ExampleInfo>& catalog() {
  static const std::vector<ExampleInfo> entries = {
      {"sine-not-eclosed", "topologist's sine curve (not e-closed); generic path-component non-closure instance",
       "x_k = (1/k, 0) on the curve converge to (0,0) on the segment; each phi_n extends, the limit does not", Dyadic(8),
       15},
      {"sine-not-eopen", "topologist's sine curve (not e-open)",
       "the inclusion of N x {0} extends, the nearby phi_n split across path components", Dyadic(8), 15},
      {"comb", "infinite comb", "phi_n(1/k) = (1/k, 1) for k <= n extend; the limit does not", Dyadic(8), 20},
      {"ndagger-not-eopen", "N-dagger with phi_n(1/k) = n + k",
       "no phi_n extends to [0,1]; the constant limit does", Dyadic(8), 20},
      {"ndagger-eclosed", "N-dagger is e-closed (clopen intersection property)",
       "extendible maps on an opc of intervals converge to an extendible limit", Dyadic(6), 10},
      {"hawaii", "Hawaiian earring", "phi_n collapses circles C_1..C_n; none extends, the constant limit does",
       Dyadic(8), 10},
      {"anr-eopen", "ANRs are e-open (N x Y construction)",
       "one neighbourhood extension over N x Y yields extensions of phi_k for all large k", Dyadic(6), 16},
      {"eop-homotopy", "convergent sequences in an ANR are eventually homotopic along the sequence",
       "a homotopy psi with psi_{1/k} = phi_k for all large k", Dyadic(6), 16},
      {"anr-eclosed", "ANRs are e-closed (Urysohn gluing)",
       "the limit of extendible maps into the circle extends by gluing a homotopy", Dyadic(6), 10},
      {"loc-ext", "small maps have small extensions (one-point compactification)",
       "block extensions on an opc have diameters shrinking to 0", Dyadic(6), 8},
      {"cone-contraction", "small balls contract rel a point (spiked base of a cone)",
       "an arc of the circle contracts to p rel p within the target", Dyadic(6), 1},
      {"equiconnected", "ANRs are locally equiconnected",
       "close maps are homotopic rel their coincidence set through close maps", Dyadic(6), 1},
  };
  return entries;
}

}  // namespace

bool Report::verified() const {
  if (rows.empty()) return false;
  for (const auto& r : rows)
    if (r.status != VerdictStatus::verified) return false;
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

int Report::exit_code() const {
  if (verified()) return 0;
  for (const auto& r : rows)
    if (r.status == VerdictStatus::invalid_certificate || r.status == VerdictStatus::inconsistent_input) return 4;
  return 2;
}

std::vector<ExampleInfo> list_examples() { return catalog(); }

const ExampleInfo& example_info(const std::string& name) {
  const std::string key = name == "pathcomp" ? "sine-not-eclosed" : name;
  for (const auto& e : catalog())
    if (e.name == key) return e;
  throw Error(ErrorKind::unknown_name, "no example named '" + name + "'");
}

Report run_example(const std::string& name, const ExampleParams& params) {
  const ExampleInfo& info = example_info(name);
  Report rep;
  rep.example = info.name;
  rep.anchor = info.anchor;
  rep.resolution = params.resolution.value_or(info.default_resolution);
  rep.n_max = params.n_max.value_or(info.default_n_max);
  if (rep.resolution.exponent() < 1 || rep.resolution.exponent() > 14)
    throw Error(ErrorKind::invalid_argument, "resolution must lie between 2^-1 and 2^-14");
  if (rep.n_max < 1) throw Error(ErrorKind::invalid_argument, "n-max must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const std::string& key = info.name;
  if (key == "sine-not-eclosed") {
    rep = sine_not_eclosed(std::move(rep));
  } else if (key == "sine-not-eopen") {
    rep = family_example(std::move(rep), {"sine-eopen", false, true, ""});
    rep.conclusion = "the inclusion extends, yet each nearby phi_n sends (1/n,0) and (1/(n+1),0), joined in Y, to "
                     "different path components of X";
  } else if (key == "comb") {
    rep = family_example(std::move(rep), {"comb", true, false, ""});
    rep.conclusion = "each phi_n extends by tooth traversals; the limit does not: every chain between consecutive "
                     "tooth tips dips to the base, while phi(0) = (0,1) stays away from it";
  } else if (key == "ndagger-not-eopen") {
    rep = family_example(std::move(rep), {"ndagger-eopen", false, true, ""});
    rep.conclusion = "phi_n^-1(n+1) = {1} is not the trace of a clopen subset of [0,1], so no phi_n extends; the "
                     "constant limit does";
  } else if (key == "ndagger-eclosed") {
    rep = ndagger_eclosed(std::move(rep));
  } else if (key == "hawaii") {
    rep = family_example(std::move(rep), {"hawaii", false, true, ""});
    rep.conclusion = "C_{n+1} bounds a disk in Y, yet r_{n+1} o phi_n winds once around it, so no phi_n extends; the "
                     "constant limit does";
  } else if (key == "anr-eopen") {
    rep = anr_eopen(std::move(rep));
  } else if (key == "eop-homotopy") {
    rep = eop_homotopy(std::move(rep));
  } else if (key == "anr-eclosed") {
    rep = anr_eclosed(std::move(rep));
  } else if (key == "loc-ext") {
    rep = loc_ext(std::move(rep));
  } else if (key == "cone-contraction") {
    rep = cone_contraction_example(std::move(rep));
  } else if (key == "equiconnected") {
    rep = equiconnected(std::move(rep));
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace extenlab
