#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "extenlab/certificates.hpp"
#include "extenlab/error.hpp"
#include "extenlab/map.hpp"
#include "extenlab/space.hpp"
#include "oracles.hpp"

using namespace extenlab;

namespace {

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::invalid_argument;
}

VerdictStatus status(const SpacePair& pair, const MapSample& phi, const Certificate& c) {
  return check_certificate(pair, phi, c).status;
}

std::size_t y_at(const SpacePair& pair, double x) {
  std::vector<double> p(pair.y->net.dimension(), 0.0);
  p[0] = x;
  return *pair.y->index_of(p);
}

}  // namespace

TEST_CASE("positive certificates for the extendible instances") {
  const Dyadic res(6);
  const auto comb = example_family("comb", res);
  const Verdict v = check_certificate(comb.pair, comb.member(2), build_positive_certificate(comb, 2));
  CHECK(v.status == VerdictStatus::verified);
  CHECK(v.kind == "positive");
  for (const std::string name : {"pathcomp", "comb"})
    for (std::size_t n = 1; n <= 6; ++n) {
      const auto fam = example_family(name, res);
      CHECK(status(fam.pair, fam.member(n), build_positive_certificate(fam, n)) == VerdictStatus::verified);
    }
  for (const std::string name : {"sine-eopen", "ndagger-eopen"}) {
    const auto fam = example_family(name, res);
    CHECK(status(fam.pair, fam.limit, build_positive_certificate(fam, std::nullopt)) == VerdictStatus::verified);
  }
  const auto hawaii = example_family("hawaii", Dyadic(5));
  CHECK(status(hawaii.pair, hawaii.limit, build_positive_certificate(hawaii, std::nullopt)) == VerdictStatus::verified);
}

TEST_CASE("negative certificates follow the obstruction recipes") {
  const Dyadic res(6);
  const auto comb = example_family("comb", res);
  const Certificate cc = build_negative_certificate(comb, std::nullopt);
  const auto& crossing = std::get<MandatoryCrossingCertificate>(cc);
  CHECK(crossing.separation == 1.0 - 2.0 * res.value());
  CHECK(crossing.brackets.front() == std::pair{y_at(comb.pair, 0.5), y_at(comb.pair, 1.0)});
  const Verdict vc = check_certificate(comb.pair, comb.limit, cc);
  CHECK(vc.status == VerdictStatus::verified);
  CHECK(vc.margin == doctest::Approx(1.0 - 6.0 * res.value()));

  const auto nd = example_family("ndagger-eopen", res);
  const Certificate nc = build_negative_certificate(nd, 3);
  const auto& clopen = std::get<ClopenCertificate>(nc);
  CHECK(clopen.k == 4);
  CHECK(clopen.trace == std::vector<std::size_t>{y_at(nd.pair, 1.0)});
  CHECK(status(nd.pair, nd.member(3), nc) == VerdictStatus::verified);

  const auto sine = example_family("sine-eopen", res);
  const Certificate sc = build_negative_certificate(sine, 2);
  const auto& path = std::get<PathComponentCertificate>(sc);
  CHECK(path.z1 == y_at(sine.pair, 0.5));
  CHECK(path.z2 == y_at(sine.pair, 1.0 / 3));
  const auto& x = *sine.codomain;
  CHECK(x.component_names[path.x_labels[0]] == "curve");
  CHECK(x.component_names[path.x_labels[1]] == "segment");
  CHECK(status(sine.pair, sine.member(2), sc) == VerdictStatus::verified);

  const auto hawaii = example_family("hawaii", Dyadic(5));
  const Certificate hc = build_negative_certificate(hawaii, 1);
  const auto& winding = std::get<WindingCertificate>(hc);
  CHECK(winding.retraction == "collapse-2");
  CHECK(winding.expected == 1);
  CHECK(status(hawaii.pair, hawaii.member(1), hc) == VerdictStatus::verified);

  const auto pc = example_family("pathcomp", res);
  CHECK(status(pc.pair, pc.limit, build_negative_certificate(pc, std::nullopt)) == VerdictStatus::verified);
  CHECK(status(pc.pair, pc.limit, build_negative_certificate(pc, std::nullopt, "path-component")) ==
        VerdictStatus::verified);
}

TEST_CASE("instances the recipes do not cover are refused") {
  const Dyadic res(5);
  CHECK(kind_of([&] { build_negative_certificate(example_family("comb", res), 2); }) == ErrorKind::refused);
  CHECK(kind_of([&] { build_negative_certificate(example_family("hawaii", res), std::nullopt); }) == ErrorKind::refused);
  CHECK(kind_of([&] { build_negative_certificate(example_family("sine-eopen", res), std::nullopt); }) ==
        ErrorKind::refused);
  CHECK(kind_of([&] { build_negative_certificate(example_family("ndagger-eclosed", res, 5), 1); }) ==
        ErrorKind::refused);
}

TEST_CASE("soundness drill: obstructions do not verify against extendible maps") {
  const Dyadic res(6);
  // a crossing certificate with J brackets is a statement at resolution eps:
  // it refutes every phi_n with n < J, and J grows as eps shrinks
  const auto comb = example_family("comb", res);
  const auto cc = std::get<MandatoryCrossingCertificate>(build_negative_certificate(comb, std::nullopt));
  const std::size_t brackets = cc.brackets.size();
  REQUIRE(brackets >= 3);
  for (std::size_t n = 1; n < brackets; ++n) CHECK(status(comb.pair, comb.member(n), cc) == VerdictStatus::refuted);
  const auto fine = example_family("comb", Dyadic(8));
  CHECK(std::get<MandatoryCrossingCertificate>(build_negative_certificate(fine, std::nullopt)).brackets.size() >
        brackets);

  const auto pc = example_family("pathcomp", res);
  const auto pcc = std::get<MandatoryCrossingCertificate>(build_negative_certificate(pc, std::nullopt, "crossing"));
  for (std::size_t n = 1; n < pcc.brackets.size(); ++n) CHECK(status(pc.pair, pc.member(n), pcc) == VerdictStatus::refuted);
  const Certificate ppath = build_negative_certificate(pc, std::nullopt, "path-component");
  for (std::size_t n = 1; n <= 10; ++n) CHECK(status(pc.pair, pc.member(n), ppath) == VerdictStatus::refuted);

  const auto sine = example_family("sine-eopen", res);
  for (std::size_t n = 1; n <= 6; ++n)
    CHECK(status(sine.pair, sine.limit, build_negative_certificate(sine, n)) != VerdictStatus::verified);

  const auto nd = example_family("ndagger-eopen", res);
  for (std::size_t n = 1; n <= 6; ++n)
    CHECK(status(nd.pair, nd.limit, build_negative_certificate(nd, n)) != VerdictStatus::verified);

  const auto hawaii = example_family("hawaii", Dyadic(5));
  for (std::size_t n = 1; n <= 4; ++n)
    CHECK(status(hawaii.pair, hawaii.limit, build_negative_certificate(hawaii, n)) != VerdictStatus::verified);

  // and no positive certificate built for one member passes for another
  const Certificate p3 = build_positive_certificate(comb, 3);
  CHECK(status(comb.pair, comb.member(4), p3) == VerdictStatus::refuted);
  CHECK(status(comb.pair, comb.limit, p3) == VerdictStatus::refuted);
}

TEST_CASE("tampered certificates are rejected") {
  const Dyadic res(6);
  const double eps = res.value();
  const auto comb = example_family("comb", res);
  const auto base = std::get<MandatoryCrossingCertificate>(build_negative_certificate(comb, std::nullopt));
  {
    auto c = base;
    c.separation = 1.0;
    CHECK(status(comb.pair, comb.limit, c) == VerdictStatus::refuted);
  }
  {
    auto c = base;
    c.separation = 4 * eps;
    CHECK(status(comb.pair, comb.limit, c) == VerdictStatus::refuted);
  }
  {
    auto c = base;
    c.region = Region{0, Region::Op::ge, 0.95};  // the base joins the teeth outside this region
    c.separation = 0.5;
    CHECK(status(comb.pair, comb.limit, c) == VerdictStatus::refuted);
  }
  {
    auto c = base;
    std::swap(c.brackets[0], c.brackets[1]);
    CHECK(status(comb.pair, comb.limit, c) == VerdictStatus::refuted);
  }
  {
    auto c = base;
    c.brackets[0].first = comb.pair.y->size() - 2;  // not a Z point
    if (comb.pair.contains(c.brackets[0].first)) c.brackets[0].first = 1;
    CHECK(status(comb.pair, comb.limit, c) == VerdictStatus::invalid_certificate);
  }
  {
    auto c = base;
    c.brackets.clear();
    CHECK(status(comb.pair, comb.limit, c) == VerdictStatus::invalid_certificate);
  }
  {
    auto c = base;
    c.region.axis = 7;
    CHECK(status(comb.pair, comb.limit, c) == VerdictStatus::invalid_certificate);
  }

  auto positive = std::get<PositiveCertificate>(build_positive_certificate(comb, 2));
  positive.extension.values[2 * comb.pair.z[3]] += 0.25;
  CHECK(status(comb.pair, comb.member(2), positive) == VerdictStatus::refuted);
  positive.tolerance = -1.0;
  CHECK(status(comb.pair, comb.member(2), positive) == VerdictStatus::invalid_certificate);

  const auto hawaii = example_family("hawaii", Dyadic(5));
  const auto wbase = std::get<WindingCertificate>(build_negative_certificate(hawaii, 2));
  {
    auto c = wbase;
    c.expected = 2;
    CHECK(status(hawaii.pair, hawaii.member(2), c) == VerdictStatus::refuted);
  }
  {
    auto c = wbase;
    c.expected = 0;
    CHECK(status(hawaii.pair, hawaii.member(2), c) == VerdictStatus::invalid_certificate);
  }
  {
    auto c = wbase;
    c.rings.erase(c.rings.begin() + 1, c.rings.end() - 1);  // one giant step to the centre
    CHECK(status(hawaii.pair, hawaii.member(2), c) == VerdictStatus::refuted);
  }
  {
    auto c = wbase;
    c.retraction = "collapse-4";
    CHECK(status(hawaii.pair, hawaii.member(2), c) == VerdictStatus::refuted);
  }
  {
    auto c = wbase;
    c.retraction = "clamp";
    CHECK(status(hawaii.pair, hawaii.member(2), c) == VerdictStatus::invalid_certificate);
  }

  const auto sine = example_family("sine-eopen", res);
  const auto pbase = std::get<PathComponentCertificate>(build_negative_certificate(sine, 3));
  {
    auto c = pbase;
    c.y_path.erase(c.y_path.begin() + 1, c.y_path.begin() + static_cast<std::ptrdiff_t>(c.y_path.size() / 2));
    CHECK(status(sine.pair, sine.member(3), c) == VerdictStatus::refuted);
  }
  {
    auto c = pbase;
    std::swap(c.x_labels[0], c.x_labels[1]);
    CHECK(status(sine.pair, sine.member(3), c) == VerdictStatus::refuted);
  }
  {
    auto c = pbase;
    c.y_path.clear();
    CHECK(status(sine.pair, sine.member(3), c) == VerdictStatus::invalid_certificate);
  }

  const auto nd = example_family("ndagger-eopen", res);
  auto cl = std::get<ClopenCertificate>(build_negative_certificate(nd, 3));
  cl.k = 5;
  CHECK(status(nd.pair, nd.member(3), cl) == VerdictStatus::refuted);
  cl.k = 0;
  CHECK(status(nd.pair, nd.member(3), cl) == VerdictStatus::invalid_certificate);
}

TEST_CASE("mismatched maps are inconsistent input") {
  const auto comb = example_family("comb", Dyadic(6));
  const auto other = example_family("comb", Dyadic(5));
  const Certificate c = build_negative_certificate(comb, std::nullopt);
  CHECK(status(comb.pair, other.limit, c) == VerdictStatus::inconsistent_input);
}

TEST_CASE("crossing checker agrees with a brute-force chain search on thinned combs") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Dyadic res(4);
  const double eps = res.value();
  const auto comb = make_space("comb", res);
  const auto pair = make_pair("interval-ndagger", res);
  int verified = 0, refuted = 0;
  for (int trial = 0; trial < 25; ++trial) {
    std::vector<std::size_t> kept;
    for (std::size_t i = 0; i < comb->size(); ++i)
      if (comb->net.point(i)[1] == 1.0 || u(rng) < 0.8) kept.push_back(i);
    const auto x = subspace(comb, kept);
    MapSample phi{pair.z_net, x, {}, Modulus::lipschitz(1.0)};
    for (std::size_t i = 0; i < pair.z_net->size(); ++i) phi.values.insert(phi.values.end(), {pair.z_net->point(i)[0], 1.0});

    MandatoryCrossingCertificate c;
    c.region = Region{1, Region::Op::le, 0.05 + 0.6 * u(rng)};
    c.z0 = y_at(pair, 0.0);
    c.separation = 4 * eps * (0.5 + 2.0 * u(rng));
    const std::size_t brackets = 1 + static_cast<std::size_t>(u(rng) * 4);
    for (std::size_t j = 1; j <= brackets; ++j) c.brackets.emplace_back(y_at(pair, 1.0 / (j + 1)), y_at(pair, 1.0 / j));

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
    const Verdict v = check_certificate(pair, phi, c);
    CAPTURE(trial);
    CHECK((v.status == VerdictStatus::verified) == expect);
    CHECK(v.status != VerdictStatus::inconsistent_input);
    (expect ? verified : refuted) += 1;
  }
  CHECK(verified > 0);
  CHECK(refuted > 0);
}

TEST_CASE("chain separation helper") {
  const Net line(1, {0.0, 0.1, 0.2, 0.3, 0.4}, 0.05, Metric::euclidean(1));
  const std::vector<char> all(5, 1), gap{1, 1, 0, 1, 1};
  const std::vector<double> a{0.0}, b{0.4};
  CHECK_FALSE(chain_separated(line, 0.11, all, a, b));
  CHECK(chain_separated(line, 0.11, gap, a, b));
  CHECK(anchors_near(line, a, 0.15, {}).size() == 2);
}

TEST_CASE("ring witnesses contract a loop in small steps") {
  std::vector<double> loop;
  for (int j = 0; j < 32; ++j) loop.insert(loop.end(), {std::cos(j * M_PI / 16), std::sin(j * M_PI / 16)});
  const std::vector<double> c{0.0, 0.0};
  const auto rings = ring_witness(loop, c, 0.25);
  REQUIRE(rings.size() >= 2);
  CHECK(rings.front() == loop);
  for (std::size_t i = 0; i < 32; ++i) {
    CHECK(rings.back()[2 * i] == 0.0);
    CHECK(rings.back()[2 * i + 1] == 0.0);
  }
  for (std::size_t k = 0; k + 1 < rings.size(); ++k)
    for (std::size_t i = 0; i < 32; ++i) {
      const std::size_t j = (i + 1) % 32;
      CHECK(std::hypot(rings[k][2 * i] - rings[k + 1][2 * j], rings[k][2 * i + 1] - rings[k + 1][2 * j + 1]) <= 0.25);
    }
  CHECK(kind_of([&] { ring_witness(loop, c, 0.1); }) == ErrorKind::loop_too_coarse);
}
