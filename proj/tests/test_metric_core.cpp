#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "extenlab/dyadic.hpp"
#include "extenlab/error.hpp"
#include "extenlab/graph.hpp"
#include "extenlab/kernels.hpp"
#include "extenlab/locator.hpp"
#include "extenlab/modulus.hpp"
#include "extenlab/net.hpp"
#include "oracles.hpp"

using namespace extenlab;

namespace {

Net random_net(std::mt19937_64& rng, std::size_t n, std::size_t dim, double resolution = 0.05) {
  return Net(dim, oracle::random_points(rng, n, dim), resolution, Metric::euclidean(dim));
}

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

}  // namespace

TEST_CASE("dyadic resolutions parse exactly") {
  CHECK(Dyadic::parse("2^-8").exponent() == 8);
  CHECK(Dyadic::parse("2^-8").value() == 1.0 / 256.0);
  CHECK(Dyadic::parse("0.25").exponent() == 2);
  CHECK(Dyadic::parse("1").exponent() == 0);
  CHECK(Dyadic(10).str() == "2^-10");
  CHECK(Dyadic::from_value(0.0078125) == Dyadic(7));
  CHECK(kind_of([] { Dyadic::parse("0.3"); }) == ErrorKind::not_dyadic);
  CHECK(kind_of([] { Dyadic::from_value(3.0); }) == ErrorKind::not_dyadic);
  CHECK(kind_of([] { Dyadic::parse("2^-x"); }) != ErrorKind::refused);
  CHECK(is_dyadic(0.5));
  CHECK_FALSE(is_dyadic(0.1));
}

TEST_CASE("net distances agree with direct formulas") {
  std::mt19937_64 rng(11);
  const Net e = random_net(rng, 60, 3);
  for (std::size_t i = 0; i < e.size(); ++i)
    for (std::size_t j = 0; j < e.size(); ++j) CHECK(e.distance(i, j) == doctest::Approx(oracle::euclid(e.point(i), e.point(j))).epsilon(1e-14));

  const std::vector<std::size_t> blocks{2, 1};
  const Net m(3, oracle::random_points(rng, 40, 3), 0.1, Metric::max_of(blocks));
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j)
      CHECK(m.distance(i, j) == doctest::Approx(oracle::max_blocks(blocks, m.point(i), m.point(j))).epsilon(1e-14));

  CHECK_THROWS_AS(Net(2, {0.0, 0.0, 1.0}, 0.1, Metric::euclidean(2)), Error);
  CHECK_THROWS_AS(Net(2, {0.0, 0.0}, 0.0, Metric::euclidean(2)), Error);
  CHECK_THROWS_AS(Net(1, {0.0, 1.0}, 0.1, Metric::explicit_matrix({0, 1, 1})), Error);
}

TEST_CASE("matrix nets validate symmetry and triangle inequality") {
  Net good(1, {0, 1, 2}, 0.5, Metric::explicit_matrix({0, 1, 2, 1, 0, 1, 2, 1, 0}));
  CHECK_NOTHROW(good.validate());
  Net asym(1, {0, 1}, 0.5, Metric::explicit_matrix({0, 1, 2, 0}));
  CHECK_THROWS_AS(asym.validate(), Error);
  Net tri(1, {0, 1, 2}, 0.5, Metric::explicit_matrix({0, 1, 5, 1, 0, 1, 5, 1, 0}));
  CHECK_THROWS_AS(tri.validate(), Error);
  const Net sub = good.subset(std::vector<std::size_t>{0, 2});
  CHECK(sub.size() == 2);
  CHECK(sub.distance(0, 1) == 2.0);
}

TEST_CASE("cone metric satisfies the metric axioms") {
  std::mt19937_64 rng(5);
  std::vector<double> coords = oracle::random_points(rng, 50, 3);
  for (std::size_t i = 0; i < 50; i += 7) coords[3 * i + 2] = 1.0;  // apex copies
  const Net c(3, coords, 0.1, Metric::cone_over({2}));
  for (std::size_t i = 0; i < c.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) {
      CHECK(c.distance(i, j) == c.distance(j, i));
      CHECK(c.distance(i, j) >= 0.0);
      for (std::size_t k = 0; k < c.size(); k += 5) CHECK(c.distance(i, k) <= c.distance(i, j) + c.distance(j, k) + 1e-12);
    }
  CHECK(c.distance(0, 7) == 0.0);  // both at the apex level
}

TEST_CASE("neighbour index finds exactly the points within the radius") {
  std::mt19937_64 rng(7);
  for (const std::size_t dim : {1u, 2u, 3u}) {
    const Net net = random_net(rng, 300, dim);
    const double r = 0.12;
    const NeighborIndex index(net, r);
    for (std::size_t i = 0; i < net.size(); i += 3) {
      std::set<std::size_t> got, want;
      index.for_each_within(i, [&](std::size_t j, double d) {
        got.insert(j);
        CHECK(d == net.distance(i, j));
      });
      for (std::size_t j = 0; j < net.size(); ++j)
        if (j != i && net.distance(i, j) <= r) want.insert(j);
      CHECK(got == want);
      const auto hit = index.nearest(net.point(i));
      REQUIRE(hit.has_value());
      CHECK(hit->second == 0.0);
    }
  }
}

TEST_CASE("subset locator matches brute-force nearest points") {
  std::mt19937_64 rng(8);
  const Net net = random_net(rng, 400, 2, 0.02);
  std::vector<std::size_t> subset;
  for (std::size_t i = 0; i < net.size(); i += 9) subset.push_back(i);
  const SubsetLocator loc(net, subset);
  for (std::size_t y = 0; y < net.size(); ++y) {
    double best = std::numeric_limits<double>::infinity();
    for (const std::size_t s : subset) best = std::min(best, net.distance(y, s));
    CHECK(loc.nearest(y).second == best);
    std::vector<std::pair<std::size_t, double>> ball;
    loc.within(y, 0.2, ball);
    std::size_t expect = 0;
    for (const std::size_t s : subset) expect += net.distance(y, s) <= 0.2;
    CHECK(ball.size() == expect);
  }
  std::vector<std::size_t> a{0, 1, 2}, b{3, 4};
  double d = std::numeric_limits<double>::infinity();
  for (auto i : a)
    for (auto j : b) d = std::min(d, net.distance(i, j));
  CHECK(set_distance(net, a, b) == d);
}

TEST_CASE("serial and parallel kernels agree") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 5; ++trial) {
    const Net net = random_net(rng, 500, 2);
    const double scale = 0.04 + 0.02 * trial;
    const auto s = kernels::serial::epsilon_adjacency(net, scale);
    const auto p = kernels::parallel::epsilon_adjacency(net, scale);
    CHECK(s.offsets == p.offsets);
    CHECK(s.targets == p.targets);

    const Metric out = Metric::euclidean(2);
    std::vector<double> f(net.size() * 2), g(net.size() * 2);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < net.size(); ++i) {
      f[2 * i] = std::sin(3 * net.point(i)[0]) + 0.01 * u(rng);
      f[2 * i + 1] = net.point(i)[1];
      g[2 * i] = u(rng);
      g[2 * i + 1] = u(rng);
    }
    const kernels::ValueView fv{f, 2, &out}, gv{g, 2, &out};
    CHECK(kernels::serial::sup_distance(fv, gv) == kernels::parallel::sup_distance(fv, gv));
    for (const double L : {0.5, 3.0, 50.0}) {
      const auto a = kernels::serial::modulus_scan(net, fv, Modulus::lipschitz(L), 0.01);
      const auto b = kernels::parallel::modulus_scan(net, fv, Modulus::lipschitz(L), 0.01);
      CHECK(a.excess == doctest::Approx(b.excess).epsilon(1e-12));
      CHECK((a.excess <= 0.0) == (b.excess <= 0.0));
    }
    const auto step = Modulus::step({{0.05, 0.2}, {0.5, 1.0}, {10.0, 3.0}});
    const auto a = kernels::serial::modulus_scan(net, fv, step, 0.0);
    const auto b = kernels::parallel::modulus_scan(net, fv, step, 0.0);
    CHECK((a.excess <= 0.0) == (b.excess <= 0.0));
    CHECK(a.excess == doctest::Approx(b.excess).epsilon(1e-12));
  }
}

TEST_CASE("graph components equal DFS components and refine with scale") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    const Net net = random_net(rng, 150, 2);
    const auto d = oracle::matrix(net);
    Labeling previous;
    for (const double scale : {0.03, 0.06, 0.1, 0.2}) {
      const EpsilonGraph g = build_epsilon_graph(net, scale);
      const Labeling labels = graph_components(g);
      CHECK(labels == oracle::components(d, net.size(), scale));
      CHECK(labels == components_at_scale(net, scale));
      if (!previous.empty())  // same label at a finer scale implies same label now
        for (std::size_t i = 0; i < net.size(); ++i)
          for (std::size_t j = i + 1; j < net.size(); ++j)
            if (previous[i] == previous[j]) CHECK(labels[i] == labels[j]);
      previous = labels;
    }
    std::vector<char> keep(net.size());
    for (auto& k : keep) k = rng() % 3 != 0;
    const EpsilonGraph g = build_epsilon_graph(net, 0.1);
    const Labeling sub = graph_components(g, keep);
    const auto want = oracle::components(d, net.size(), 0.1, keep);
    CHECK(sub == want);
  }
}

TEST_CASE("widest path matches exhaustive search") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 5 + trial % 16;
    const Net net = random_net(rng, n, 2);
    const auto d = oracle::matrix(net);
    std::vector<double> h(n);
    for (auto& v : h) v = std::uniform_real_distribution<double>(0, 1)(rng);
    const double scale = 0.3;
    const EpsilonGraph g = build_epsilon_graph(net, scale);
    for (std::size_t s = 0; s < n; s += 2)
      for (std::size_t t = 1; t < n; t += 3) {
        const double w = widest_path_value(g, s, t, h);
        CHECK(w == oracle::widest_path(d, n, scale, s, t, h));
        CHECK(w == widest_path_value(g, t, s, h));
        CHECK(widest_path_value(build_epsilon_graph(net, 0.4), s, t, h) >= w);
      }
  }
}

TEST_CASE("bfs paths are shortest chains through allowed vertices") {
  std::mt19937_64 rng(23);
  const Net net = random_net(rng, 200, 2);
  const EpsilonGraph g = build_epsilon_graph(net, 0.1);
  std::vector<char> allow(net.size(), 1);
  const auto labels = graph_components(g);
  for (std::size_t t = 1; t < net.size(); t += 17) {
    const auto path = bfs_path(g, 0, t, allow);
    CHECK(path.empty() == (labels[0] != labels[t]));
    for (std::size_t k = 0; k + 1 < path.size(); ++k) CHECK(g.has_edge(path[k], path[k + 1]));
  }
  allow[0] = 0;
  CHECK(bfs_path(g, 0, 5, allow).empty());
}

TEST_CASE("union find merges and reports representatives") {
  UnionFind uf(6);
  CHECK(uf.unite(0, 1));
  CHECK(uf.unite(2, 3));
  CHECK_FALSE(uf.unite(1, 0));
  CHECK(uf.unite(1, 3));
  CHECK(uf.find(0) == uf.find(2));
  CHECK(uf.find(4) != uf.find(5));
}

TEST_CASE("moduli of continuity") {
  const Modulus l = Modulus::lipschitz(2.0);
  CHECK(l(0.25) == 0.5);
  CHECK(l(0.0) == 0.0);
  CHECK(l.lipschitz_envelope() == 2.0);
  const Modulus s = Modulus::step({{0.1, 0.0}, {1.0, 2.0}});
  CHECK(s(0.05) == 0.0);
  CHECK(s(0.5) == 2.0);
  CHECK(std::isinf(s(2.0)));
  CHECK(std::isinf(s.lipschitz_envelope()) == false);
  const Modulus lc = Modulus::locally_constant(0.2, 1.0);
  CHECK(lc(0.19) == 0.0);
  CHECK(lc(0.2) == 1.0);
  CHECK_THROWS_AS(Modulus::step({{1.0, 1.0}, {0.5, 2.0}}), Error);
  CHECK_THROWS_AS(Modulus::lipschitz(-1.0), Error);
}
