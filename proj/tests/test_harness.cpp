#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>
#include <string>

#include "causal_lab/errors.hpp"
#include "causal_lab/scenario.hpp"

using namespace clab;
using namespace clab::harness;
using json = nlohmann::json;

namespace {

namespace fs = std::filesystem;

const fs::path kScenarioDir = CAUSAL_LAB_SCENARIO_DIR;

std::string validation_message(const json& j) {
  try {
    (void)parse_scenario(j);
  } catch (const LabError& e) {
    CHECK(e.code() == ErrorCode::ValidationError);
    return e.what();
  }
  FAIL("expected a ValidationError");
  return {};
}

json tiny() {
  return json::parse(R"({
    "name": "tiny", "seed": 5, "model": "mink2",
    "causet": {"sprinkle": {"density": 12}},
    "slices": {"levels": [0.5]},
    "checks": [{"name": "order_axioms"}, {"name": "commutant", "params": {"family": "convex"}},
               {"name": "generation", "expect": "report"}]
  })");
}

fs::path temp_dir(const std::string& tag) {
  const fs::path d = fs::temp_directory_path() / ("causal_lab_" + tag);
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_CASE("validation errors name the offending field") {
  json j = tiny();
  j["checks"][1]["name"] = "no_such_check";
  CHECK(validation_message(j).find("checks[1].name") != std::string::npos);

  j = tiny();
  j["causet"]["sprinkle"]["density"] = -1;
  CHECK(validation_message(j).find("causet.sprinkle.density") != std::string::npos);

  j = tiny();
  j["bogus"] = 1;
  CHECK(validation_message(j).find("bogus") != std::string::npos);

  j = tiny();
  j["checks"][0]["expect"] = "maybe";
  CHECK(validation_message(j).find("checks[0].expect") != std::string::npos);

  j = tiny();
  j["checks"].push_back({{"name", "bridge"}});
  CHECK(validation_message(j).find("needs a marked point") != std::string::npos);

  j = tiny();
  j["model"] = "mink7";
  CHECK(validation_message(j).find("model") != std::string::npos);
}

TEST_CASE("malformed JSON is a parse error with a position") {
  const fs::path d = temp_dir("parse");
  io::write_atomic(d / "bad.json", "{\"name\": \"x\",\n  \"checks\": [\n");
  try {
    (void)load_scenario(d / "bad.json");
    FAIL("expected ParseError");
  } catch (const LabError& e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("line") != std::string::npos);
  }
}

TEST_CASE("causet json round trip") {
  const auto c = causet::sprinkle(continuum::SpacetimeModel::minkowski(1, continuum::Window::unit_box(1)), 20.0, 9);
  const auto back = io::causet_from_json(io::causet_to_json(c));
  CHECK(back.order() == c.order());
  CHECK(back.size() == c.size());
  CHECK(io::causet_to_json(back) == io::causet_to_json(c));

  const json cyclic = {{"n", 2}, {"edges", {{0, 1}, {1, 0}}}};
  try {
    (void)io::causet_from_json(cyclic);
    FAIL("expected CycleDetected");
  } catch (const LabError& e) {
    CHECK(e.code() == ErrorCode::CycleDetected);
  }
  CHECK_THROWS_AS(io::causet_from_json(json{{"edges", "x"}}), LabError);
}

TEST_CASE("algebra json round trip") {
  const auto a = duality::algebra_of_sites(7, BitSet(7, {1, 4, 6}));
  CHECK(io::algebra_from_json(io::algebra_to_json(a)) == a);
  const auto e = duality::AlgebraBasis::everything(5);
  CHECK(io::algebra_from_json(io::algebra_to_json(e)) == e);
}

TEST_CASE("surface csv has one row per grid point") {
  const auto grid = continuum::SpatialGrid::with_spacing(1, -1.0, 1.0, 0.5);
  const auto tau = continuum::SurfaceFunction::from_closure(
      grid, [](const continuum::Spatial& y) { return y[0] * 0.25; }, continuum::Regularity::Smooth);
  const std::string csv = io::surface_csv(tau);
  CHECK(csv.rfind("k,y0,tau\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == grid.size() + 1);
}

TEST_CASE("atomic writes replace the target") {
  const fs::path d = temp_dir("atomic");
  io::write_atomic(d / "out.txt", "first");
  io::write_atomic(d / "out.txt", "second");
  CHECK(io::read_file(d / "out.txt") == "second");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(d)) ++files;
  CHECK(files == 1);
}

TEST_CASE("scenario runs are deterministic across job counts") {
  const Scenario s = parse_scenario(tiny());
  const auto one = run_scenario(s, {false, 1});
  const auto four = run_scenario(s, {false, 4});
  CHECK(one.ok);
  CHECK(diff_reports(one.report, four.report).empty());
  CHECK(one.report["summary"]["checks"] == 3);
  CHECK(one.report["provenance"]["seed"] == 5);
}

TEST_CASE("report diff ignores timing and locates changes") {
  json a = {{"x", 1}, {"wall_ms", 3.0}, {"checks", {{{"holds", true}, {"wall_ms", 1.0}}}}};
  json b = a;
  b["wall_ms"] = 9.0;
  b["checks"][0]["wall_ms"] = 2.0;
  CHECK(diff_reports(a, b).empty());
  b["checks"][0]["holds"] = false;
  const json d = diff_reports(a, b);
  REQUIRE(d.size() == 1);
  CHECK(d[0]["path"].get<std::string>().find("holds") != std::string::npos);
}

TEST_CASE("fail-fast skips the remaining checks") {
  json j = tiny();
  j["checks"][0]["expect"] = "must-fail";
  const auto r = run_scenario(parse_scenario(j), {true, 1});
  CHECK_FALSE(r.ok);
  CHECK(r.report["summary"]["skipped"] == 2);
}

TEST_CASE("check errors become report entries") {
  json j = tiny();
  j["checks"] = json::array({{{"name", "haag"}, {"params", {{"family", "slices:9"}}}}});
  const auto r = run_scenario(parse_scenario(j));
  CHECK_FALSE(r.ok);
  CHECK(r.report["checks"][0].contains("error"));
}

TEST_CASE("every registered check is exercised by a shipped scenario") {
  std::set<std::string> used;
  for (const auto& e : fs::directory_iterator(kScenarioDir)) {
    if (e.path().extension() != ".json") continue;
    const Scenario s = load_scenario(e.path());
    for (const auto& c : s.checks) used.insert(c.name);
  }
  for (const auto& [name, info] : check_registry()) {
    CAPTURE(name);
    CHECK(used.count(name) == 1);
    CHECK_FALSE(info.operations.empty());
  }
}

TEST_CASE("shipped scenarios meet their expectations") {
  for (const auto& e : fs::directory_iterator(kScenarioDir)) {
    if (e.path().extension() != ".json") continue;
    CAPTURE(e.path().filename().string());
    const auto r = run_scenario(load_scenario(e.path()));
    CHECK(r.ok);
  }
}
