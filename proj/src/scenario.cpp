#include "causal_lab/scenario.hpp"

#include <chrono>
#include <cstdlib>
#include <future>
#include <set>

#include "causal_lab/errors.hpp"

namespace clab::harness {

std::string_view to_string(Expectation e) {
  switch (e) {
    case Expectation::MustHold: return "must-hold";
    case Expectation::MustFail: return "must-fail";
    case Expectation::Report: return "report";
  }
  return "must-hold";
}

namespace {

[[noreturn]] void invalid(const std::string& path, const std::string& what) {
  fail(ErrorCode::ValidationError, path + ": " + what);
}

const json& object_field(const json& j, const char* key, const std::string& path) {
  const json& v = j.at(key);
  if (!v.is_object()) invalid(path + "." + key, "expected an object");
  return v;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) invalid(path, "expected a number");
  return j.get<double>();
}

continuum::Event event_from(const json& j, int dim, const std::string& path) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(dim) + 1) {
    invalid(path, "expected [t, x1..x" + std::to_string(dim) + "]");
  }
  continuum::Event e;
  e.t = number(j[0], path + "[0]");
  for (int k = 0; k < dim; ++k) {
    e.x[static_cast<std::size_t>(k)] = number(j[static_cast<std::size_t>(k) + 1], path + "[" + std::to_string(k + 1) + "]");
  }
  return e;
}

const std::set<std::string> kTopLevel{"name",     "seed",       "model",   "causet", "slices", "marked_point",
                                      "families", "tolerances", "budgets", "checks", "description"};

}  // namespace

continuum::SpacetimeModel parse_model(const json& j) {
  if (j.is_null()) return continuum::SpacetimeModel::minkowski(1, continuum::Window::unit_box(1));
  json spec = j;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "mink2") {
      spec = {{"dim", 1}};
    } else if (s == "mink3") {
      spec = {{"dim", 2}};
    } else if (s == "mink4") {
      spec = {{"dim", 3}};
    } else {
      invalid("model", "unknown model '" + s + "' (mink2, mink3, mink4)");
    }
  }
  if (!spec.is_object()) invalid("model", "expected an object or a model name");
  const int dim = spec.value("dim", 1);
  if (dim < 1 || dim > continuum::kMaxSpatialDim) invalid("model.dim", "must lie in 1..3");
  continuum::Window w = continuum::Window::unit_box(dim);
  if (spec.contains("window")) {
    const json& win = object_field(spec, "window", "model");
    if (win.contains("t")) {
      w.t_lo = number(win["t"].at(0), "model.window.t[0]");
      w.t_hi = number(win["t"].at(1), "model.window.t[1]");
    }
    if (win.contains("x")) {
      for (int k = 0; k < dim; ++k) {
        w.x_lo[static_cast<std::size_t>(k)] = number(win["x"].at(0), "model.window.x[0]");
        w.x_hi[static_cast<std::size_t>(k)] = number(win["x"].at(1), "model.window.x[1]");
      }
    }
    if (w.t_hi <= w.t_lo || w.x_hi[0] <= w.x_lo[0]) invalid("model.window", "empty window");
  }
  const std::string kind = spec.value("kind", std::string("minkowski"));
  if (kind == "minkowski") return continuum::SpacetimeModel::minkowski(dim, w);
  if (kind == "excised") {
    if (!spec.contains("p")) invalid("model.p", "excised model needs the excision point");
    return continuum::SpacetimeModel::excised_minkowski(dim, w, event_from(spec["p"], dim, "model.p"));
  }
  invalid("model.kind", "unknown kind '" + kind + "'");
}

namespace {

Scenario parse_scenario_fields(const json& j) {
  if (!j.is_object()) invalid("$", "scenario must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (kTopLevel.count(key) == 0) invalid(key, "unknown field");
  }
  Scenario s;
  if (!j.contains("name") || !j["name"].is_string()) invalid("name", "required string");
  s.name = j["name"].get<std::string>();
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) invalid("seed", "expected a non-negative integer");
    s.seed = j["seed"].get<std::uint64_t>();
  }
  s.model = j.value("model", json());
  parse_model(s.model);
  for (const char* key : {"causet", "slices", "families", "tolerances", "budgets"}) {
    if (!j.contains(key)) continue;
    object_field(j, key, "$");
  }
  s.causet = j.value("causet", json::object());
  s.slices = j.value("slices", json::object());
  s.marked_point = j.value("marked_point", json());
  s.families = j.value("families", json::object());
  s.tolerances = j.value("tolerances", json::object());
  s.budgets = j.value("budgets", json::object());

  const int sources = static_cast<int>(s.causet.contains("sprinkle")) + static_cast<int>(s.causet.contains("events")) +
                      static_cast<int>(s.causet.contains("edges"));
  if (sources > 1) invalid("causet", "give exactly one of sprinkle, events, edges");
  if (s.causet.contains("sprinkle")) {
    const json& sp = s.causet["sprinkle"];
    if (!sp.is_object() || !sp.contains("density") || number(sp["density"], "causet.sprinkle.density") <= 0.0) {
      invalid("causet.sprinkle.density", "required positive number");
    }
  }
  if (s.tolerances.contains("grid_h") && number(s.tolerances["grid_h"], "tolerances.grid_h") <= 0.0) {
    invalid("tolerances.grid_h", "must be positive");
  }
  if (s.tolerances.contains("eps") && number(s.tolerances["eps"], "tolerances.eps") <= 0.0) {
    invalid("tolerances.eps", "must be positive");
  }

  if (!j.contains("checks") || !j["checks"].is_array() || j["checks"].empty()) {
    invalid("checks", "required non-empty array");
  }
  const auto& registry = check_registry();
  for (std::size_t i = 0; i < j["checks"].size(); ++i) {
    const json& cj = j["checks"][i];
    const std::string path = "checks[" + std::to_string(i) + "]";
    if (!cj.is_object()) invalid(path, "expected an object");
    CheckSpec c;
    if (!cj.contains("name") || !cj["name"].is_string()) invalid(path + ".name", "required string");
    c.name = cj["name"].get<std::string>();
    const auto it = registry.find(c.name);
    if (it == registry.end()) invalid(path + ".name", "unknown check '" + c.name + "'");
    const std::string expect = cj.value("expect", std::string("must-hold"));
    if (expect == "must-hold") {
      c.expect = Expectation::MustHold;
    } else if (expect == "must-fail") {
      c.expect = Expectation::MustFail;
    } else if (expect == "report") {
      c.expect = Expectation::Report;
    } else {
      invalid(path + ".expect", "must be must-hold, must-fail or report");
    }
    c.params = cj.value("params", json::object());
    if (!c.params.is_object()) invalid(path + ".params", "expected an object");
    if (it->second.needs_point && s.marked_point.is_null() && !c.params.contains("p")) {
      invalid(path, "check '" + c.name + "' needs a marked point");
    }
    s.checks.push_back(std::move(c));
  }
  return s;
}

}  // namespace

Scenario parse_scenario(const json& j) {
  try {
    return parse_scenario_fields(j);
  } catch (const json::exception& e) {
    fail(ErrorCode::ValidationError, e.what());
  }
}

Scenario load_scenario(const std::filesystem::path& path) { return parse_scenario(io::read_json(path)); }

namespace {

double squared_distance(const continuum::Event& a, const continuum::Event& b, int dim) {
  double d = (a.t - b.t) * (a.t - b.t);
  for (int k = 0; k < dim; ++k) {
    const double dx = a.x[static_cast<std::size_t>(k)] - b.x[static_cast<std::size_t>(k)];
    d += dx * dx;
  }
  return d;
}

causet::FamilySpec family_spec(const Scenario& s, const std::vector<double>& levels) {
  const json& fj = s.families;
  causet::FamilySpec spec;
  spec.levels = levels.empty() ? std::vector<double>{0.25, 0.5, 0.75} : levels;
  spec.diamonds.exhaustive_limit = fj.value("exhaustive_limit", std::size_t{12});
  spec.diamonds.sample_budget = fj.value("sample_budget", std::size_t{64});
  spec.diamonds.max_base = fj.value("max_base", std::size_t{6});
  spec.diamonds.seed = s.seed;
  spec.p_compatible = fj.value("p_compatible", true);
  return spec;
}

}  // namespace

Context build_context(const Scenario& s) {
  Context ctx;
  ctx.model = parse_model(s.model);
  const int dim = ctx.model.dim();

  const json& cj = s.causet;
  if (cj.contains("events")) {
    std::vector<continuum::Event> events;
    for (std::size_t i = 0; i < cj["events"].size(); ++i) {
      events.push_back(event_from(cj["events"][i], dim, "causet.events[" + std::to_string(i) + "]"));
    }
    ctx.c = causet::from_events(ctx.model, std::move(events), s.seed);
  } else if (cj.contains("edges")) {
    ctx.c = io::causet_from_json(cj);
  } else if (cj.contains("sprinkle")) {
    const json& sp = cj["sprinkle"];
    ctx.c = causet::sprinkle(ctx.model, sp["density"].get<double>(), sp.value("seed", s.seed));
  }
  const std::size_t n = ctx.c.size();

  if (s.slices.contains("antichains")) {
    for (std::size_t i = 0; i < s.slices["antichains"].size(); ++i) {
      try {
        ctx.slices.push_back(causet::make_slice(ctx.c, io::ids_from_json(s.slices["antichains"][i], n)));
      } catch (const LabError& e) {
        invalid("slices.antichains[" + std::to_string(i) + "]", e.what());
      }
    }
  }
  std::vector<double> levels = s.slices.value("levels", std::vector<double>{});
  if (!s.slices.contains("levels") && !s.slices.contains("antichains")) levels = {0.25, 0.5, 0.75};
  for (double t : levels) {
    if (auto a = causet::level_slice(ctx.c, t)) {
      bool seen = false;
      for (const auto& b : ctx.slices) seen = seen || b.points == a->points;
      if (!seen) ctx.slices.push_back(std::move(*a));
    }
  }

  const json& mp = s.marked_point;
  if (mp.is_object()) {
    if (mp.contains("id")) {
      const auto id = mp["id"].get<std::size_t>();
      if (id >= n) invalid("marked_point.id", "out of range");
      ctx.p = id;
    } else if (mp.contains("nearest")) {
      if (!ctx.c.has_coords()) invalid("marked_point.nearest", "causet has no coordinates");
      const continuum::Event target = event_from(mp["nearest"], dim, "marked_point.nearest");
      double best = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double d = squared_distance(ctx.c.coords()[i], target, dim);
        if (!ctx.p || d < best) {
          ctx.p = i;
          best = d;
        }
      }
    } else if (mp.contains("through_slice")) {
      // Points with a Cauchy slice through them, by id or by distance to
      // `near`; the k-th is marked and its families are kept.
      const json& ts = mp["through_slice"];
      if (!ts.is_boolean() && !ts.is_number_unsigned()) invalid("marked_point.through_slice", "expected true or an index");
      const std::size_t want = ts.is_boolean() ? 0 : ts.get<std::size_t>();
      std::vector<std::size_t> order(n);
      for (std::size_t i = 0; i < n; ++i) order[i] = i;
      if (mp.contains("near")) {
        if (!ctx.c.has_coords()) invalid("marked_point.near", "causet has no coordinates");
        const continuum::Event target = event_from(mp["near"], dim, "marked_point.near");
        std::vector<double> dist(n);
        for (std::size_t i = 0; i < n; ++i) dist[i] = squared_distance(ctx.c.coords()[i], target, dim);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
      }
      const causet::FamilySpec spec = family_spec(s, levels);
      std::size_t seen = 0;
      for (std::size_t i : order) {
        auto f = causet::build_punctured_families(ctx.c, i, spec);
        if (f.through_point_cauchy == 0) continue;
        if (seen++ == want) {
          ctx.p = i;
          ctx.punctured = std::move(f);
          break;
        }
      }
      if (!ctx.p) invalid("marked_point.through_slice", "not enough points lie on a Cauchy slice");
    } else {
      invalid("marked_point", "expected id, nearest or through_slice");
    }
  } else if (!mp.is_null()) {
    invalid("marked_point", "expected an object");
  }

  ctx.family_spec = family_spec(s, levels);
  for (const auto& a : ctx.slices) {
    const auto ds = causet::diamonds_on_slice(ctx.c, a, ctx.family_spec.diamonds);
    ctx.diamonds.insert(ctx.diamonds.end(), ds.begin(), ds.end());
  }
  if (ctx.p && !ctx.punctured) ctx.punctured = causet::build_punctured_families(ctx.c, *ctx.p, ctx.family_spec);

  ctx.grid_h = s.tolerances.value("grid_h", 0.05);
  ctx.eps = s.tolerances.value("eps", 0.1);
  ctx.samples = s.budgets.value("samples", std::size_t{1000});
  return ctx;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

json run_one(const Context& ctx, const Scenario& s, std::size_t index) {
  const CheckSpec& spec = s.checks[index];
  std::mt19937_64 rng(splitmix64(s.seed ^ splitmix64(index + 1)));
  json out;
  out["index"] = index;
  out["name"] = spec.name;
  out["expect"] = to_string(spec.expect);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    Outcome o = check_registry().at(spec.name).run(ctx, spec.params, rng);
    out["holds"] = o.holds;
    out["details"] = std::move(o.details);
    out["satisfied"] = spec.expect == Expectation::Report || (spec.expect == Expectation::MustHold) == o.holds;
  } catch (const LabError& e) {
    out["holds"] = false;
    out["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
    out["satisfied"] = spec.expect == Expectation::Report;
  } catch (const json::exception& e) {
    out["holds"] = false;
    out["error"] = {{"code", to_string(ErrorCode::ValidationError)}, {"message", std::string("params: ") + e.what()}};
    out["satisfied"] = spec.expect == Expectation::Report;
  }
  out["wall_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

}  // namespace

RunResult run_scenario(const Scenario& s, const RunOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const Context ctx = build_context(s);

  std::vector<json> results(s.checks.size());
  std::vector<bool> ran(s.checks.size(), false);
  const std::size_t jobs = std::max(1u, options.jobs);
  bool stop = false;
  for (std::size_t start = 0; start < s.checks.size() && !stop; start += jobs) {
    const std::size_t end = std::min(s.checks.size(), start + jobs);
    if (jobs == 1) {
      results[start] = run_one(ctx, s, start);
    } else {
      std::vector<std::future<json>> pending;
      for (std::size_t i = start; i < end; ++i) {
        pending.push_back(std::async(std::launch::async, [&, i] { return run_one(ctx, s, i); }));
      }
      for (std::size_t i = start; i < end; ++i) results[i] = pending[i - start].get();
    }
    for (std::size_t i = start; i < end; ++i) {
      ran[i] = true;
      if (options.fail_fast && !results[i]["satisfied"].get<bool>()) stop = true;
    }
  }

  RunResult r;
  json checks = json::array();
  std::size_t satisfied = 0;
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < s.checks.size(); ++i) {
    if (!ran[i]) {
      ++skipped;
      checks.push_back({{"index", i}, {"name", s.checks[i].name}, {"skipped", true}});
      continue;
    }
    if (results[i]["satisfied"].get<bool>()) ++satisfied;
    checks.push_back(std::move(results[i]));
  }
  r.ok = skipped == 0 && satisfied == s.checks.size();

  json& rep = r.report;
  rep["artifact"] = {{"name", "causal-lab"}, {"version", kArtifactVersion}};
  rep["scenario"] = s.name;
  rep["provenance"] = {{"seed", s.seed},
                       {"grid_h", ctx.grid_h},
                       {"eps", ctx.eps},
                       {"budgets", {{"samples", ctx.samples},
                                    {"diamond_exhaustive_limit", ctx.family_spec.diamonds.exhaustive_limit},
                                    {"diamond_sample_budget", ctx.family_spec.diamonds.sample_budget}}}};
  json setup;
  setup["model"] = {{"kind", continuum::to_string(ctx.model.kind())}, {"dim", ctx.model.dim()}};
  setup["n"] = ctx.c.size();
  setup["slices"] = json::array();
  for (const auto& a : ctx.slices) setup["slices"].push_back(io::ids_to_json(a.points));
  setup["diamonds"] = ctx.diamonds.size();
  if (ctx.p) {
    setup["marked_point"] = *ctx.p;
    const auto& f = *ctx.punctured;
    setup["punctured"] = {{"ambient_slices", f.ambient_slices.size()},
                          {"excision_slices", f.excision_slices.size()},
                          {"fam_a", f.fam_a.size()},
                          {"fam_b", f.fam_b.size()},
                          {"shared", f.shared.size()}};
  }
  rep["setup"] = std::move(setup);
  rep["checks"] = std::move(checks);
  rep["summary"] = {{"checks", s.checks.size()}, {"satisfied", satisfied}, {"skipped", skipped}, {"ok", r.ok}};
  rep["wall_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

namespace {

void diff_into(const json& a, const json& b, const std::string& path, json& out) {
  if (a.is_object() && b.is_object()) {
    std::set<std::string> keys;
    for (const auto& [k, _] : a.items()) keys.insert(k);
    for (const auto& [k, _] : b.items()) keys.insert(k);
    for (const std::string& k : keys) {
      if (k == "wall_ms") continue;
      const json na = a.contains(k) ? a[k] : json();
      const json nb = b.contains(k) ? b[k] : json();
      diff_into(na, nb, path + "/" + k, out);
    }
    return;
  }
  if (a.is_array() && b.is_array() && a.size() == b.size()) {
    for (std::size_t i = 0; i < a.size(); ++i) diff_into(a[i], b[i], path + "/" + std::to_string(i), out);
    return;
  }
  if (a != b) out.push_back({{"path", path.empty() ? "/" : path}, {"a", a}, {"b", b}});
}

}  // namespace

json diff_reports(const json& a, const json& b) {
  json out = json::array();
  diff_into(a, b, "", out);
  return out;
}

std::filesystem::path default_output_dir() {
  if (const char* env = std::getenv("CAUSAL_LAB_OUT"); env != nullptr && *env != '\0') return env;
  return std::filesystem::current_path();
}

}  // namespace clab::harness
