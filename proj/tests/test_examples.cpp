#include <doctest.h>

#include <set>

#include "extenlab/error.hpp"
#include "extenlab/examples.hpp"
#include "extenlab/io.hpp"

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

const ReportRow* limit_row(const Report& r) {
  for (const auto& row : r.rows)
    if (!row.n) return &row;
  return nullptr;
}

}  // namespace

TEST_CASE("twelve examples with distinct names") {
  const auto all = list_examples();
  CHECK(all.size() == 12);
  std::set<std::string> names;
  for (const auto& e : all) {
    names.insert(e.name);
    CHECK_FALSE(e.anchor.empty());
    CHECK(e.default_n_max >= 1);
  }
  CHECK(names.size() == 12);
  CHECK(example_info("pathcomp").name == "sine-not-eclosed");
  CHECK(kind_of([] { example_info("klein-bottle"); }) == ErrorKind::unknown_name);
}

TEST_CASE("every example verifies at its defaults") {
  for (const auto& e : list_examples()) {
    CAPTURE(e.name);
    const Report r = run_example(e.name);
    CHECK(r.verified());
    CHECK(r.exit_code() == 0);
    CHECK(r.resolution == e.default_resolution);
    CHECK_FALSE(r.rows.empty());
    for (const auto& row : r.rows) {
      CAPTURE(row.label);
      CHECK(row.status == VerdictStatus::verified);
    }
    for (const auto& check : r.checks) {
      CAPTURE(check.name);
      CHECK(check.passed);
    }
  }
}

TEST_CASE("comb table matches 1/(n+1) and the limit is obstructed") {
  const Report r = run_example("comb", {Dyadic(8), 20});
  CHECK(r.verified());
  std::size_t members = 0;
  for (const auto& row : r.rows) {
    if (!row.n) continue;
    ++members;
    CHECK(row.sup == 1.0 / static_cast<double>(*row.n + 1));
    CHECK(row.kind == "positive");
  }
  CHECK(members == 20);
  const ReportRow* limit = limit_row(r);
  REQUIRE(limit != nullptr);
  CHECK(limit->kind == "mandatory-crossing");
  CHECK(limit->margin >= 1.0 - 6.0 / 256.0);
}

TEST_CASE("sup columns strictly decrease") {
  for (const std::string name : {"sine-not-eclosed", "sine-not-eopen", "comb", "ndagger-not-eopen", "hawaii"}) {
    CAPTURE(name);
    const Report r = run_example(name, {Dyadic(6), 8});
    double previous = 1e9;
    for (const auto& row : r.rows) {
      if (!row.n || !row.sup) continue;
      CHECK(*row.sup < previous);
      previous = *row.sup;
    }
  }
}

TEST_CASE("runs are deterministic") {
  for (const std::string name : {"comb", "hawaii", "anr-eclosed", "loc-ext"}) {
    const std::string a = io::to_json(run_example(name, {Dyadic(6), 4})).dump();
    const std::string b = io::to_json(run_example(name, {Dyadic(6), 4})).dump();
    CHECK(a == b);
  }
}

TEST_CASE("obstruction margins grow under refinement") {
  for (const std::string name : {"comb", "sine-not-eclosed"}) {
    CAPTURE(name);
    const Report coarse = run_example(name, {Dyadic(6), 4});
    const Report fine = run_example(name, {Dyadic(8), 4});
    const ReportRow* a = limit_row(coarse);
    const ReportRow* b = limit_row(fine);
    REQUIRE(a != nullptr);
    REQUIRE(b != nullptr);
    CHECK(b->margin > a->margin);
  }
}

TEST_CASE("bad parameters are rejected up front") {
  CHECK(kind_of([] { run_example("nonesuch"); }) == ErrorKind::unknown_name);
  CHECK(kind_of([] { run_example("comb", {Dyadic(20), std::nullopt}); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { run_example("comb", {Dyadic(4), 0}); }) == ErrorKind::invalid_argument);
  CHECK(kind_of([] { run_example("comb", {Dyadic(4), 1000}); }) == ErrorKind::beyond_truncation);
}
