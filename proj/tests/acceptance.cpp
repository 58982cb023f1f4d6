// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "extenlab/certificates.hpp"
#include "extenlab/error.hpp"
#include "extenlab/examples.hpp"
#include "extenlab/graph.hpp"
#include "extenlab/io.hpp"
#include "extenlab/map.hpp"
#include "extenlab/space.hpp"
#include "oracles.hpp"

using namespace extenlab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

/// Collects failed requirements of one criterion.
struct Tally {
  std::vector<std::string> failures;
  void require(bool ok, const std::string& what) {
    if (!ok && failures.size() < 8) failures.push_back(what);
  }
};

const ReportRow* find_row(const Report& r, const std::string& label) {
  for (const auto& row : r.rows)
    if (row.label == label) return &row;
  return nullptr;
}

const ReportCheck* find_check(const Report& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

void require_check(Tally& t, const Report& r, const std::string& name) {
  const ReportCheck* c = find_check(r, name);
  t.require(c && c->passed, r.example + ": check " + name);
}

void require_members(Tally& t, const Report& r, const std::string& kind, std::size_t count) {
  std::size_t seen = 0;
  for (const auto& row : r.rows) {
    if (!row.n) continue;
    ++seen;
    t.require(row.kind == kind && row.status == VerdictStatus::verified, r.example + ": row " + row.label);
  }
  t.require(seen == count, r.example + ": " + std::to_string(seen) + " member rows");
}

void require_limit(Tally& t, const Report& r, const std::string& kind) {
  bool found = false;
  for (const auto& row : r.rows)
    if (!row.n && row.kind == kind) found = found || row.status == VerdictStatus::verified;
  t.require(found, r.example + ": limit " + kind);
}

bool verifies(const MapFamily& fam, std::optional<std::size_t> n, const Certificate& cert) {
  const MapSample phi = n ? fam.member(*n) : fam.limit;
  return check_certificate(fam.pair, phi, cert).status == VerdictStatus::verified;
}

// --- criteria --------------------------------------------------------------

void comb(Tally& t) {
  const Dyadic res(8);
  const Report r = run_example("comb", {res, 20});
  require_members(t, r, "positive", 20);
  const ReportRow* limit = find_row(r, "limit");
  t.require(limit && limit->kind == "mandatory-crossing" && limit->status == VerdictStatus::verified,
            "limit crossing verified");
  t.require(limit && limit->margin >= 1.0 - 6.0 / 256.0, "limit margin >= 1 - 6eps");

  const MapFamily fam = example_family("comb", res);
  for (std::size_t n = 1; n <= 20; ++n) {
    const Certificate cert = build_positive_certificate(fam, n);
    t.require(std::get<PositiveCertificate>(cert).tolerance == 0.0, "tolerance 0 for phi_" + std::to_string(n));
    t.require(verifies(fam, n, cert), "positive phi_" + std::to_string(n));
    t.require(sup_distance(fam.member(n), fam.limit) == 1.0 / static_cast<double>(n + 1),
              "sup = 1/(n+1) for n = " + std::to_string(n));
  }
  t.require(r.verified(), "comb report verified");
}

void sine(Tally& t) {
  const Dyadic res(8);
  const double eps = res.value();
  const Report closed = run_example("sine-not-eclosed", {res, 15});
  require_members(t, closed, "positive", 15);
  require_limit(t, closed, "mandatory-crossing");
  const MapFamily fc = example_family("sine-eclosed", res);
  const Certificate crossing = build_negative_certificate(fc, std::nullopt);
  const auto* mc = std::get_if<MandatoryCrossingCertificate>(&crossing);
  t.require(mc && mc->region.op == Region::Op::abs_ge && mc->region.threshold == 1.0 - 2.0 * eps,
            "crossing region |y| >= 1 - 2eps");
  t.require(verifies(fc, std::nullopt, crossing), "crossing verified");

  const Report open = run_example("sine-not-eopen", {res, 15});
  require_members(t, open, "path-component", 15);
  require_limit(t, open, "positive");
  const MapFamily fo = example_family("sine-eopen", res);
  const Certificate pos = build_positive_certificate(fo, std::nullopt);
  const auto& ext = std::get<PositiveCertificate>(pos).extension;
  t.require(ext.values == fo.pair.y->net.coords(), "limit extension is the identity of Y");
  t.require(verifies(fo, std::nullopt, pos), "identity extension verified");
  t.require(closed.verified() && open.verified(), "sine reports verified");
}

void ndagger(Tally& t) {
  const Report open = run_example("ndagger-not-eopen", {Dyadic(8), 20});
  require_members(t, open, "clopen", 20);
  require_limit(t, open, "positive");
  const Report closed = run_example("ndagger-eclosed", {});
  require_limit(t, closed, "positive");
  require_check(t, closed, "clopen-intersection");
  require_check(t, closed, "disjointify");
  t.require(open.verified() && closed.verified(), "ndagger reports verified");
}

void hawaii(Tally& t) {
  const Dyadic res(8);
  const Report r = run_example("hawaii", {res, 10});
  require_members(t, r, "winding", 10);
  require_limit(t, r, "positive");
  const MapFamily fam = example_family("hawaii", res);
  for (std::size_t n = 1; n <= 10; ++n) {
    const Certificate cert = build_negative_certificate(fam, n);
    const auto* w = std::get_if<WindingCertificate>(&cert);
    t.require(w && w->expected == 1 && w->retraction == "collapse-" + std::to_string(n + 1),
              "winding of r_{n+1} o phi_n is 1 for n = " + std::to_string(n));
    t.require(verifies(fam, n, cert), "winding verified for n = " + std::to_string(n));
  }
}

void anr(Tally& t) {
  struct Case {
    std::string name;
    std::vector<std::string> checks;
  };
  const std::vector<Case> cases{
      {"anr-eclosed", {"restriction-exact", "glued-modulus"}},
      {"anr-eopen", {"first-n", "glued-modulus"}},
      {"eop-homotopy", {"first-n", "slice-0", "homotopy-modulus"}},
      {"loc-ext", {"target"}},
      {"cone-contraction", {"rel-p", "slice-0", "slice-1", "homotopy-modulus"}},
      {"equiconnected", {"coincidence-fixed", "pairwise-close", "endpoints"}},
  };
  for (const auto& c : cases) {
    const auto start = Clock::now();
    const Report r = run_example(c.name);
    const double took = seconds_since(start);
    t.require(took < 20.0, c.name + " took " + std::to_string(took) + " s");
    t.require(r.verified(), c.name + " verified");
    for (const auto& name : c.checks) require_check(t, r, name);
    if (c.name == "anr-eclosed") {
      const ReportCheck* m = find_check(r, "glued-modulus");
      t.require(m && m->detail.find("4eps") != std::string::npos, "anr-eclosed slack 4eps");
    }
    if (c.name == "eop-homotopy")
      for (const auto& row : r.rows)
        if (row.n) t.require(row.kind == "slice-identity" && row.status == VerdictStatus::verified, row.label);
    if (c.name == "loc-ext") {
      double previous = 1e9;
      for (const auto& row : r.rows) {
        if (row.kind != "diameter") continue;
        t.require(row.sup && *row.sup < previous && *row.sup <= 0.5, "loc-ext " + row.label);
        previous = row.sup.value_or(previous);
      }
    }
    if (c.name == "cone-contraction" || c.name == "equiconnected")
      for (const auto& row : r.rows) t.require(row.status == VerdictStatus::verified, c.name + " " + row.label);
  }
}

void oracles(Tally& t) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  // Crossing checker against chain enumeration on thinned combs.
  const Dyadic res(4);
  const double eps = res.value();
  const auto comb_space = make_space("comb", res);
  const auto pair = make_pair("interval-ndagger", res);
  auto y_at = [&](double x) {
    for (std::size_t i = 0; i < pair.y->size(); ++i)
      if (pair.y->net.point(i)[0] == x) return i;
    throw Error(ErrorKind::invalid_argument, "no such point");
  };
  int agree = 0, verified = 0;
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < comb_space->size() && kept.size() < 200; ++i)
      if (comb_space->net.point(i)[1] == 1.0 || u(rng) < 0.8) kept.push_back(i);
    const auto x = subspace(comb_space, kept);
    MapSample phi{pair.z_net, x, {}, Modulus::lipschitz(1.0)};
    for (std::size_t i = 0; i < pair.z_net->size(); ++i)
      phi.values.insert(phi.values.end(), {pair.z_net->point(i)[0], 1.0});

    MandatoryCrossingCertificate c;
    c.region = Region{1, Region::Op::le, 0.05 + 0.6 * u(rng)};
    c.z0 = y_at(0.0);
    c.separation = 4 * eps * (0.5 + 2.0 * u(rng));
    const std::size_t brackets = 1 + static_cast<std::size_t>(u(rng) * 4);
    for (std::size_t j = 1; j <= brackets; ++j) c.brackets.emplace_back(y_at(1.0 / (j + 1)), y_at(1.0 / j));

    const std::size_t n = x->size();
    const std::vector<double> d = oracle::matrix(x->net);
    std::vector<char> keep(n);
    double to_region = std::numeric_limits<double>::infinity();
    const std::vector<double> top0{0.0, 1.0};
    for (std::size_t i = 0; i < n; ++i) {
      const bool inside = x->net.point(i)[1] <= c.region.threshold;
      keep[i] = !inside;
      if (inside) to_region = std::min(to_region, oracle::euclid(x->net.point(i), top0));
    }
    auto anchors = [&](double px) {
      std::vector<std::size_t> out;
      const std::vector<double> p{px, 1.0};
      for (std::size_t i = 0; i < n; ++i)
        if (keep[i] && oracle::euclid(x->net.point(i), p) <= eps) out.push_back(i);
      return out;
    };
    bool expect = to_region >= c.separation && c.separation > 4 * eps;
    for (const auto& [a, b] : c.brackets)
      expect = expect && !oracle::chain_exists(d, n, 2 * eps, keep, anchors(pair.y->net.point(a)[0]),
                                               anchors(pair.y->net.point(b)[0]));
    const bool got = check_certificate(pair, phi, c).status == VerdictStatus::verified;
    agree += got == expect;
    verified += got;
  }
  t.require(agree == 25, "crossing agreement " + std::to_string(agree) + "/25");
  t.require(verified > 0 && verified < 25, "crossing instances cover both verdicts");

  // Widest path against exhaustive search.
  int matches = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4 + static_cast<std::size_t>(trial % 17);
    Net net(2, oracle::random_points(rng, n, 2), 0.05, Metric::euclidean(2));
    std::vector<double> h(n);
    for (auto& v : h) v = u(rng);
    const double scale = 0.25 + 0.2 * u(rng);
    const std::size_t s = static_cast<std::size_t>(u(rng) * n) % n, e = static_cast<std::size_t>(u(rng) * n) % n;
    const double got = widest_path_value(build_epsilon_graph(net, scale), s, e, h);
    matches += got == oracle::widest_path(oracle::matrix(net), n, scale, s, e, h);
  }
  t.require(matches == 100, "widest path agreement " + std::to_string(matches) + "/100");
}

std::string run_cli(const std::string& args) {
  std::string out;
  FILE* p = popen((std::string(EXTENLAB_CLI_PATH) + " " + args + " 2>/dev/null").c_str(), "r");
  if (!p) return out;
  char buf[4096];
  std::size_t got;
  while ((got = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
  pclose(p);
  return out;
}

void invariants(Tally& t) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  // Sup-distance metric axioms on random maps into the disk.
  const auto disk = make_space("disk", Dyadic(4));
  const auto interval = make_space("interval", Dyadic(5));
  const std::shared_ptr<const Net> dnet(interval, &interval->net);
  auto random_map = [&] {
    MapSample f{dnet, disk, {}, Modulus::lipschitz(100.0)};
    for (std::size_t i = 0; i < dnet->size(); ++i) {
      const double r = std::sqrt(std::abs(u(rng))), a = M_PI * u(rng);
      f.values.insert(f.values.end(), {r * std::cos(a), r * std::sin(a)});
    }
    return f;
  };
  int good = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const MapSample f = random_map(), g = random_map(), h = random_map();
    const double fg = sup_distance(f, g), gf = sup_distance(g, f), fh = sup_distance(f, h), gh = sup_distance(g, h);
    double brute = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) brute = std::max(brute, oracle::euclid(f.value(i), g.value(i)));
    good += sup_distance(f, f) == 0.0 && fg == gf && fg > 0.0 && fh <= fg + gh + 1e-12 && fg == brute;
  }
  t.require(good == 1000, "sup metric axioms " + std::to_string(good) + "/1000");

  for (const auto& name : catalog_names())
    for (int k = 4; k <= 10; ++k) {
      const auto problems = check_space_invariants(*make_space(name, Dyadic(k)));
      t.require(problems.empty(), name + " at 2^-" + std::to_string(k) + ": " +
                                      (problems.empty() ? std::string() : problems.front()));
    }

  // Certificate serialization round-trips.
  struct Case {
    std::string family;
    std::optional<std::size_t> n;
    bool negative;
    std::string variant;
  };
  const std::vector<Case> cases{{"comb", std::nullopt, true, ""},   {"comb", 4, false, ""},
                                {"sine-eopen", 3, true, ""},         {"sine-eopen", std::nullopt, false, ""},
                                {"ndagger-eopen", 5, true, ""},      {"hawaii", 3, true, ""},
                                {"pathcomp", std::nullopt, true, "path-component"},
                                {"ndagger-eclosed", 2, false, ""}};
  for (const auto& c : cases) {
    const MapFamily fam = example_family(c.family, Dyadic(6), 6);
    const MapSample phi = c.n ? fam.member(*c.n) : fam.limit;
    const Certificate cert =
        c.negative ? build_negative_certificate(fam, c.n, c.variant) : build_positive_certificate(fam, c.n);
    const io::Problem problem = io::problem_from_json(io::json::parse(io::to_json(io::Problem{fam.pair, phi}).dump()));
    const std::string text = io::to_json(cert).dump();
    const Certificate back = io::certificate_from_json(io::json::parse(text), problem);
    const Verdict a = check_certificate(fam.pair, phi, cert), b = check_certificate(problem.pair, problem.phi, back);
    t.require(io::to_json(back).dump() == text && io::to_json(a).dump() == io::to_json(b).dump() &&
                  a.status == VerdictStatus::verified,
              "round trip " + c.family);
  }

  // CLI determinism.
  for (const std::string args : {"example run hawaii --format json", "example run comb --epsilon 2^-6 --format csv",
                                 "space info sine --epsilon 2^-6"}) {
    const std::string first = run_cli(args), second = run_cli(args);
    t.require(!first.empty() && first == second, "byte-identical CLI output for '" + args + "'");
  }
}

}  // namespace

int main() {
  struct Criterion {
    int number;
    std::string title;
    double budget;
    std::function<void(Tally&)> body;
  };
  const std::vector<Criterion> criteria{
      {1, "comb at 2^-8, n = 1..20", 10.0, comb},
      {2, "sine curve runs at 2^-8, n <= 15", 15.0, sine},
      {3, "N-dagger runs", 5.0, ndagger},
      {4, "Hawaiian earring at 2^-8, n <= 10", 10.0, hawaii},
      {5, "ANR constructions", 6 * 20.0, anr},
      {6, "oracle equivalence", 1e9, oracles},
      {7, "metric and invariant suites", 1e9, invariants},
  };
  const auto suite_start = Clock::now();
  bool all = true;
  for (const auto& c : criteria) {
    Tally t;
    const auto start = Clock::now();
    try {
      c.body(t);
    } catch (const std::exception& e) {
      t.require(false, std::string("exception: ") + e.what());
    }
    const double took = seconds_since(start);
    t.require(took < c.budget, "runtime " + std::to_string(took) + " s over budget");
    if (c.number == 7) {
      const double total = seconds_since(suite_start);
      t.require(total < 120.0, "full suite " + std::to_string(total) + " s over 120 s");
    }
    std::ostringstream line;
    line << "criterion " << c.number << ": " << (t.failures.empty() ? "PASS" : "FAIL") << "  " << c.title << " ("
         << std::fixed;
    line.precision(2);
    line << took << " s)";
    for (const auto& f : t.failures) line << "\n    " << f;
    std::cout << line.str() << std::endl;
    all = all && t.failures.empty();
  }
  return all ? 0 : 1;
}
