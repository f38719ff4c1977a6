#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "causal_lab/families.hpp"
#include "causal_lab/io.hpp"

namespace clab::harness {

using json = io::json;

inline constexpr const char* kArtifactVersion = "0.1.0";

enum class Expectation { MustHold, MustFail, Report };

std::string_view to_string(Expectation e);

struct CheckSpec {
  std::string name;
  Expectation expect = Expectation::MustHold;
  json params = json::object();
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 0;
  json model = json::object();
  json causet = json::object();
  json slices = json::object();
  json marked_point;  // null when absent
  json families = json::object();
  json tolerances = json::object();
  json budgets = json::object();
  std::vector<CheckSpec> checks;
};

/// Throws ValidationError naming the offending field ("checks[2].name: ...").
Scenario parse_scenario(const json& j);
/// Throws ParseError (with line/column) or ValidationError.
Scenario load_scenario(const std::filesystem::path& path);

/// Everything a check may read; built once per scenario and shared
/// read-only across concurrent checks.
struct Context {
  continuum::SpacetimeModel model = continuum::SpacetimeModel::minkowski(1, continuum::Window::unit_box(1));
  causet::Causet c;
  std::vector<causet::Slice> slices;
  std::optional<std::size_t> p;
  causet::FamilySpec family_spec;
  std::vector<causet::DiamondSpec> diamonds;  // Kr over the slice list
  std::optional<causet::PuncturedFamilies> punctured;
  double grid_h = 0.05;
  double eps = 0.1;
  std::size_t samples = 1000;
};

Context build_context(const Scenario& s);

continuum::SpacetimeModel parse_model(const json& j);

struct Outcome {
  bool holds = false;
  json details = json::object();
};

using CheckFn = std::function<Outcome(const Context&, const json& params, std::mt19937_64& rng)>;

struct CheckInfo {
  CheckFn run;
  std::vector<std::string> operations;  // library operations the check exercises
  bool needs_point = false;
};

/// Name -> check. Every name maps to one operation family of the library.
const std::map<std::string, CheckInfo>& check_registry();

struct RunOptions {
  bool fail_fast = false;
  unsigned jobs = 1;
};

struct RunResult {
  json report;
  bool ok = false;  // every executed check met its expectation and none was skipped
};

RunResult run_scenario(const Scenario& s, const RunOptions& options = {});

/// Field-wise differences between two reports, ignoring "wall_ms" keys.
/// Each entry is {"path", "a", "b"}.
json diff_reports(const json& a, const json& b);

/// Directory from CAUSAL_LAB_OUT, or the current directory.
std::filesystem::path default_output_dir();

}  // namespace clab::harness
