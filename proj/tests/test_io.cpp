#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "extenlab/certificates.hpp"
#include "extenlab/error.hpp"
#include "extenlab/examples.hpp"
#include "extenlab/io.hpp"
#include "extenlab/map.hpp"
#include "extenlab/space.hpp"

using namespace extenlab;
using extenlab::io::json;

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

// Serialize, parse the text back, rebuild.
json through_text(const json& j) { return json::parse(j.dump()); }

}  // namespace

TEST_CASE("nets round-trip for every metric kind") {
  const Net e(2, {0.0, 0.0, 0.3, 0.4, 1.0, 1.0 / 3.0}, 0.125, Metric::euclidean(2));
  const Net b(3, {0.0, 0.0, 0.1, 0.5, 0.25, 0.7}, 0.25, Metric::max_of({2, 1}));
  const Net c(2, {0.0, 0.0, 1.0, 0.5, 0.0, 1.0}, 0.5, Metric::cone_over({1}));
  const Net m(1, {0.0, 1.0}, 0.5, Metric::explicit_matrix({0.0, 2.0, 2.0, 0.0}));
  for (const Net* net : {&e, &b, &c, &m}) {
    const Net back = io::net_from_json(through_text(io::to_json(*net)));
    CHECK(back.coords() == net->coords());
    CHECK(back.metric() == net->metric());
    CHECK(back.resolution() == net->resolution());
  }
}

TEST_CASE("moduli round-trip") {
  const Modulus l = Modulus::lipschitz(2.5);
  const Modulus s = Modulus::step({{0.1, 0.2}, {1.0, 2.0}});
  for (const Modulus* m : {&l, &s}) {
    const Modulus back = io::modulus_from_json(through_text(io::to_json(*m)));
    for (const double r : {0.0, 0.05, 0.1, 0.5, 1.0, 3.0}) CHECK(back(r) == (*m)(r));
  }
}

TEST_CASE("catalog and explicit spaces round-trip") {
  for (const auto& name : catalog_names()) {
    const auto s = make_space(name, Dyadic(4));
    const json j = io::to_json(*s);
    CHECK(j.contains("resolution"));
    const auto back = io::space_from_json(through_text(j));
    CHECK(back->net.coords() == s->net.coords());
    CHECK(back->path_components == s->path_components);
    CHECK(back->clopen == s->clopen);
  }
  std::vector<SpacePtr> blocks{make_space("interval", Dyadic(3)), make_space("two-point", Dyadic(3))};
  const auto opc = opc_disjoint_union(blocks).space;
  const auto back = io::space_from_json(through_text(io::to_json(*opc)));
  CHECK(back->net.coords() == opc->net.coords());
  CHECK(back->path_components == opc->path_components);
  CHECK(back->component_names == opc->component_names);
  CHECK(back->clopen == opc->clopen);
  CHECK(back->basepoints == opc->basepoints);

  const auto c = cone(make_space("interval", Dyadic(3)));
  const auto cback = io::space_from_json(through_text(io::to_json(*c)));
  CHECK(cback->net.metric() == c->net.metric());
}

TEST_CASE("explicit spaces breaking the invariants are rejected") {
  const auto s = make_space("interval", Dyadic(3));
  json j = io::to_json(*subspace(s, std::vector<std::size_t>{0, 1, 2}));
  j["path_components"] = json::array({0, 0});
  CHECK_THROWS_AS(io::space_from_json(j), Error);
  CHECK(kind_of([] { io::space_from_json(json{{"name", "moebius"}, {"resolution", "2^-4"}}); }) ==
        ErrorKind::unknown_name);
  CHECK(kind_of([] { io::space_from_json(json{{"name", "comb"}, {"resolution", "0.3"}}); }) == ErrorKind::not_dyadic);
}

TEST_CASE("problems and certificates round-trip and re-verify identically") {
  struct Case {
    std::string family;
    std::optional<std::size_t> n;
    int resolution;
    bool negative;
    std::string variant;
  };
  const std::vector<Case> cases{
      {"comb", std::nullopt, 6, true, ""},        {"comb", 3, 6, false, ""},
      {"sine-eopen", 2, 5, true, ""},             {"sine-eopen", std::nullopt, 5, false, ""},
      {"ndagger-eopen", 3, 5, true, ""},          {"hawaii", 2, 4, true, ""},
      {"pathcomp", std::nullopt, 5, true, "path-component"}, {"ndagger-eclosed", 2, 5, false, ""},
  };
  for (const auto& c : cases) {
    CAPTURE(c.family);
    const auto fam = example_family(c.family, Dyadic(c.resolution), 6);
    const MapSample phi = c.n ? fam.member(*c.n) : fam.limit;
    const Certificate cert =
        c.negative ? build_negative_certificate(fam, c.n, c.variant) : build_positive_certificate(fam, c.n);
    const Verdict original = check_certificate(fam.pair, phi, cert);
    REQUIRE(original.status == VerdictStatus::verified);

    const json pj = through_text(io::to_json(io::Problem{fam.pair, phi}));
    const io::Problem problem = io::problem_from_json(pj);
    const json cj = through_text(io::to_json(cert));
    const Certificate back = io::certificate_from_json(cj, problem);
    const Verdict again = check_certificate(problem.pair, problem.phi, back);
    CHECK(again.status == original.status);
    CHECK(again.margin == original.margin);
    CHECK(io::to_json(again).dump() == io::to_json(original).dump());
    CHECK(io::to_json(back).dump() == cj.dump());
    CHECK(io::to_json(problem).dump() == pj.dump());
  }
}

TEST_CASE("malformed certificates are parse errors") {
  const auto fam = example_family("comb", Dyadic(5));
  const io::Problem problem{fam.pair, fam.limit};
  CHECK(kind_of([&] { io::certificate_from_json(json{{"kind", "telepathy"}}, problem); }) != ErrorKind::refused);
  CHECK_THROWS_AS(io::certificate_from_json(json{{"kind", "mandatory-crossing"}}, problem), Error);
  CHECK_THROWS_AS(io::certificate_from_json(json::array(), problem), Error);
}

TEST_CASE("reports serialize without timings unless asked") {
  const Report r = run_example("ndagger-eclosed", {Dyadic(5), 3});
  const json j = io::to_json(r);
  CHECK_FALSE(j.contains("seconds"));
  CHECK(io::to_json(r, true).contains("seconds"));
  CHECK(j["verified"] == true);
  CHECK(j["rows"].size() == r.rows.size());
  const std::string text = io::report_text(r);
  CHECK(text.find("VERIFIED") != std::string::npos);
  const std::string csv = io::report_csv(r);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(r.rows.size() + 1));
}

TEST_CASE("svg sketches are well formed") {
  const auto fam = example_family("comb", Dyadic(5));
  const MapSample m = fam.member(2);
  const std::string svg = io::svg_sketch(*fam.codomain, {{&m, "blue"}}, "comb");
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("data files resolve through EXTENLAB_DATA_DIR") {
  const auto dir = std::filesystem::temp_directory_path() / "extenlab-io-test";
  std::filesystem::create_directories(dir);
  io::write_text_file(dir / "x.json", "{\"a\": 1}");
  setenv("EXTENLAB_DATA_DIR", dir.c_str(), 1);
  CHECK(io::read_json_file("x.json")["a"] == 1);
  io::write_text_file(dir / "bad.json", "{");
  CHECK(kind_of([] { io::read_json_file("bad.json"); }) == ErrorKind::parse_error);
  CHECK(kind_of([] { io::read_json_file("missing-file.json"); }) == ErrorKind::parse_error);
  unsetenv("EXTENLAB_DATA_DIR");
  std::filesystem::remove_all(dir);
}
