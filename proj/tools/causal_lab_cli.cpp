// causal-lab: scenario runner and thin per-operation subcommands.
//
// Exit codes: 0 ok, 1 a check missed its expectation (or report-diff found
// differences), 2 usage, parse or validation error.

#include <cstdlib>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "causal_lab/errors.hpp"
#include "causal_lab/families.hpp"
#include "causal_lab/io.hpp"
#include "causal_lab/scenario.hpp"

namespace {

using clab::ErrorCode;
using clab::LabError;
using json = clab::io::json;
namespace causet = clab::causet;
namespace harness = clab::harness;
namespace io = clab::io;

constexpr int kOk = 0;
constexpr int kCheckFailed = 1;
constexpr int kUsage = 2;

struct Common {
  std::uint64_t seed = 0;
  double density = 0.0;
  std::string model = "mink2";
  double grid_h = 0.05;
  std::string out;
  std::string format = "json";
};

void add_common(CLI::App& app, Common& c) {
  app.add_option("--seed", c.seed, "RNG seed");
  app.add_option("--density", c.density, "sprinkling density");
  app.add_option("--model", c.model, "mink2 | mink3 | mink4")->capture_default_str();
  app.add_option("--grid-h", c.grid_h, "continuum grid spacing")->capture_default_str();
  app.add_option("--out", c.out, "output file (stdout when absent)");
  app.add_option("--format", c.format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
}

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    io::write_atomic(c.out, text);
  }
}

std::string ids_csv(const clab::BitSet& s) {
  std::string out;
  s.for_each([&](std::size_t i) {
    if (!out.empty()) out += ',';
    out += std::to_string(i);
  });
  return out;
}

std::vector<std::size_t> parse_ids(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoul(item));
    } catch (const std::exception&) {
      clab::fail(ErrorCode::ParseError, "bad point id '" + item + "'");
    }
  }
  return out;
}

json ids_json(const std::string& text) {
  json out = json::array();
  for (std::size_t i : parse_ids(text)) out.push_back(i);
  return out;
}

/// Scenario skeleton shared by the per-operation subcommands.
json base_scenario(const Common& c, const std::string& causet_path, const std::vector<double>& levels) {
  json s;
  s["name"] = "cli";
  s["seed"] = c.seed;
  s["tolerances"] = {{"grid_h", c.grid_h}};
  if (!causet_path.empty()) {
    json cj = io::read_json(causet_path);
    const int dim = cj.value("dim", 1);
    s["model"] = "mink" + std::to_string((dim < 1 ? 1 : dim) + 1);
    s["causet"] = std::move(cj);
  } else {
    s["model"] = c.model;
    if (c.density <= 0.0) clab::fail(ErrorCode::ValidationError, "give --causet or a positive --density");
    s["causet"] = {{"sprinkle", {{"density", c.density}, {"seed", c.seed}}}};
  }
  if (!levels.empty()) s["slices"] = {{"levels", levels}};
  return s;
}

int print_report(const Common& c, const harness::RunResult& r) {
  emit(c, r.report.dump(2));
  return r.ok ? kOk : kCheckFailed;
}

// --- subcommands ------------------------------------------------------------

void add_run(CLI::App& parent) {
  struct Opts {
    std::vector<std::string> scenarios;
    std::string out;
    unsigned jobs = 1;
    bool fail_fast = false;
  };
  auto o = std::make_shared<Opts>();
  auto* app = parent.add_subcommand("run", "run scenario files, one report per scenario");
  app->add_option("scenarios", o->scenarios, "scenario JSON files")->required();
  app->add_option("--out", o->out, "report directory (default $CAUSAL_LAB_OUT or cwd)");
  app->add_option("--jobs", o->jobs, "concurrent checks per scenario")->check(CLI::PositiveNumber);
  app->add_flag("--fail-fast", o->fail_fast, "stop after the first unmet expectation");
  app->callback([o] {
    const std::filesystem::path dir = o->out.empty() ? harness::default_output_dir() : std::filesystem::path(o->out);
    bool all_ok = true;
    for (const auto& path : o->scenarios) {
      const harness::Scenario s = harness::load_scenario(path);
      const harness::RunResult r = harness::run_scenario(s, {o->fail_fast, o->jobs});
      const auto target = dir / (s.name + ".report.json");
      io::write_atomic(target, r.report.dump(2) + "\n");
      const auto& sum = r.report["summary"];
      std::cout << (r.ok ? "OK   " : "FAIL ") << s.name << "  " << sum["satisfied"] << "/" << sum["checks"]
                << " satisfied  -> " << target.string() << '\n';
      if (!r.ok) {
        for (const auto& ch : r.report["checks"]) {
          if (ch.value("skipped", false)) {
            std::cout << "     skipped " << ch["name"].get<std::string>() << '\n';
          } else if (!ch["satisfied"].get<bool>()) {
            std::cout << "     unmet   " << ch["name"].get<std::string>() << " (expect " << ch["expect"].get<std::string>()
                      << ")\n";
          }
        }
      }
      all_ok = all_ok && r.ok;
    }
    throw CLI::RuntimeError(all_ok ? kOk : kCheckFailed);
  });
}

void add_sprinkle(CLI::App& parent) {
  auto c = std::make_shared<Common>();
  auto* app = parent.add_subcommand("sprinkle", "Poisson sprinkling into the unit window");
  add_common(*app, *c);
  app->callback([c] {
    if (c->density <= 0.0) clab::fail(ErrorCode::ValidationError, "--density must be positive");
    const auto model = harness::parse_model(c->model);
    const auto cs = causet::sprinkle(model, c->density, c->seed);
    emit(*c, c->format == "csv" ? io::relation_csv(cs) : io::causet_to_json(cs).dump(2));
  });
}

void add_slice(CLI::App& parent) {
  auto c = std::make_shared<Common>();
  auto causet_path = std::make_shared<std::string>();
  auto levels = std::make_shared<std::vector<double>>();
  auto through = std::make_shared<long long>(-1);
  auto* app = parent.add_subcommand("slice", "Cauchy slices at level times, optionally pushed through a point");
  add_common(*app, *c);
  app->add_option("--causet", *causet_path, "causet JSON (otherwise sprinkle)");
  app->add_option("--level", *levels, "coordinate time of a level slice (repeatable)");
  app->add_option("--through", *through, "point id the slices must contain");
  app->callback([=] {
    const auto s = harness::parse_scenario(
        [&] {
          json j = base_scenario(*c, *causet_path, levels->empty() ? std::vector<double>{0.5} : *levels);
          j["checks"] = json::array({{{"name", "cauchy_slices"}}});
          return j;
        }());
    const auto ctx = harness::build_context(s);
    if (*through >= static_cast<long long>(ctx.c.size())) clab::fail(ErrorCode::InvalidArgument, "--through out of range");
    json out = json::array();
    std::string csv;
    for (const auto& a : ctx.slices) {
      causet::Slice slice = a;
      json entry;
      if (*through >= 0) {
        const auto r = causet::slice_through_point(ctx.c, a, static_cast<std::size_t>(*through));
        slice = r.slice;
        entry["method"] = r.method;
      }
      entry["points"] = io::ids_to_json(slice.points);
      entry["maximal"] = slice.maximal;
      entry["cauchy"] = causet::is_cauchy_slice(ctx.c, slice.points);
      out.push_back(std::move(entry));
      csv += ids_csv(slice.points) + '\n';
    }
    emit(*c, c->format == "csv" ? csv : out.dump(2));
  });
}

void add_excise(CLI::App& parent) {
  auto c = std::make_shared<Common>();
  auto causet_path = std::make_shared<std::string>();
  auto p = std::make_shared<std::size_t>(0);
  auto* app = parent.add_subcommand("excise", "remove J(p) and mark the boundary");
  add_common(*app, *c);
  app->add_option("--causet", *causet_path, "causet JSON")->required();
  app->add_option("--p", *p, "excised point id")->required();
  app->callback([=] {
    const auto cs = io::causet_from_json(io::read_json(*causet_path));
    if (*p >= cs.size()) clab::fail(ErrorCode::InvalidArgument, "--p out of range");
    const auto e = causet::excise(cs, *p);
    if (c->format == "csv") {
      emit(*c, io::relation_csv(e.causet));
      return;
    }
    json out = io::causet_to_json(e.causet);
    out["to_ambient"] = e.to_ambient;
    out["excised_point"] = e.excised_point;
    emit(*c, out.dump(2));
  });
}

void add_diamonds(CLI::App& parent) {
  auto c = std::make_shared<Common>();
  auto causet_path = std::make_shared<std::string>();
  auto levels = std::make_shared<std::vector<double>>();
  auto* app = parent.add_subcommand("diamonds", "diamonds D(B) over admissible bases of level slices");
  add_common(*app, *c);
  app->add_option("--causet", *causet_path, "causet JSON (otherwise sprinkle)");
  app->add_option("--level", *levels, "coordinate time of a level slice (repeatable)");
  app->callback([=] {
    json j = base_scenario(*c, *causet_path, *levels);
    j["checks"] = json::array({{{"name", "diamonds"}}});
    const auto ctx = harness::build_context(harness::parse_scenario(j));
    json out = json::array();
    std::string csv = "slice,base,span\n";
    for (std::size_t k = 0; k < ctx.slices.size(); ++k) {
      for (const auto& d : ctx.diamonds) {
        if (d.slice.points != ctx.slices[k].points) continue;
        json entry = io::diamond_to_json(d);
        entry["slice_index"] = k;
        out.push_back(std::move(entry));
        csv += std::to_string(k) + ",\"" + ids_csv(d.base) + "\",\"" + ids_csv(d.span) + "\"\n";
      }
    }
    emit(*c, c->format == "csv" ? csv : out.dump(2));
  });
}

struct CheckOpts {
  Common common;
  std::string causet;
  std::vector<double> levels;
  long long p = -1;
  std::string d1;
  std::string family;
  std::string params = "{}";
  std::string expect = "must-hold";
  unsigned jobs = 1;
};

void add_check_options(CLI::App& app, CheckOpts& o) {
  add_common(app, o.common);
  app.add_option("--causet", o.causet, "causet JSON (otherwise sprinkle)");
  app.add_option("--level", o.levels, "coordinate time of a level slice (repeatable)");
  app.add_option("--p", o.p, "marked point id");
  app.add_option("--d1", o.d1, "comma-separated point ids of D1");
  app.add_option("--family", o.family, "diamonds | convex | slices:K | fam_a | fam_b | shared | ambient");
  app.add_option("--params", o.params, "extra check parameters as a JSON object");
  app.add_option("--expect", o.expect, "must-hold | must-fail | report")->capture_default_str();
}

int run_single_check(const CheckOpts& o, const std::string& name) {
  json j = base_scenario(o.common, o.causet, o.levels);
  json params;
  try {
    params = json::parse(o.params);
  } catch (const json::parse_error& e) {
    clab::fail(ErrorCode::ParseError, std::string("--params: ") + e.what());
  }
  if (!o.d1.empty()) params["d1"] = ids_json(o.d1);
  if (!o.family.empty()) params["family"] = o.family;
  if (o.p >= 0) j["marked_point"] = {{"id", o.p}};
  j["checks"] = json::array({{{"name", name}, {"expect", o.expect}, {"params", params}}});
  return print_report(o.common, harness::run_scenario(harness::parse_scenario(j), {false, o.jobs}));
}

void add_check(CLI::App& parent) {
  auto o = std::make_shared<CheckOpts>();
  auto name = std::make_shared<std::string>();
  auto* app = parent.add_subcommand("check", "run one named check and print its report");
  std::vector<std::string> names;
  for (const auto& [k, _] : harness::check_registry()) names.push_back(k);
  app->add_option("name", *name, "check name")->required()->check(CLI::IsMember(names));
  add_check_options(*app, *o);
  app->callback([=] { throw CLI::RuntimeError(run_single_check(*o, *name)); });
}

void add_bridge(CLI::App& parent) {
  auto o = std::make_shared<CheckOpts>();
  auto* app = parent.add_subcommand("bridge", "compare complement algebras from famA and famB around p");
  add_check_options(*app, *o);
  app->callback([=] {
    if (o->p < 0) clab::fail(ErrorCode::ValidationError, "bridge needs --p");
    throw CLI::RuntimeError(run_single_check(*o, "bridge"));
  });
}

void add_report_diff(CLI::App& parent) {
  auto a = std::make_shared<std::string>();
  auto b = std::make_shared<std::string>();
  auto* app = parent.add_subcommand("report-diff", "field-wise report comparison ignoring timings");
  app->add_option("a", *a, "first report")->required();
  app->add_option("b", *b, "second report")->required();
  app->callback([=] {
    const json d = harness::diff_reports(io::read_json(*a), io::read_json(*b));
    std::cout << d.dump(2) << '\n';
    throw CLI::RuntimeError(d.empty() ? kOk : kCheckFailed);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"causal-lab: causal-set and Pauli-net duality experiments"};
  app.require_subcommand(1);
  add_run(app);
  add_report_diff(app);
  for (CLI::App* parent : {&app, app.add_subcommand("causet", "causal-set operations")}) {
    add_sprinkle(*parent);
    add_slice(*parent);
    add_excise(*parent);
    add_diamonds(*parent);
  }
  for (CLI::App* parent : {&app, app.add_subcommand("duality", "duality checks")}) {
    add_check(*parent);
    add_bridge(*parent);
  }
  app.get_subcommand("causet")->require_subcommand(1);
  app.get_subcommand("duality")->require_subcommand(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::RuntimeError& e) {
    return e.get_exit_code();
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  } catch (const LabError& e) {
    std::cerr << "causal-lab: " << e.what() << '\n';
    return kUsage;
  } catch (const json::exception& e) {
    std::cerr << "causal-lab: " << e.what() << '\n';
    return kUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "causal-lab: " << e.what() << '\n';
    return kUsage;
  }
  return kOk;
}
