#include "updcheck/fixtures/fixtures.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "updcheck/analysis/impact.hpp"
#include "updcheck/error.hpp"
#include "updcheck/metrics/metrics.hpp"
#include "updcheck/mutation/mutation.hpp"
#include "updcheck/runtime/test_runner.hpp"

#ifndef UPDCHECK_FIXTURES_DIR
#define UPDCHECK_FIXTURES_DIR "fixtures"
#endif

namespace updcheck::fixtures {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

constexpr std::string_view kProvenance[] = {"worked-example", "trivial", "derived"};
constexpr std::string_view kKinds[] = {"check-update", "test", "coverage", "bench"};

template <typename E, std::size_t N>
E lookup(const std::string_view (&names)[N], const std::string& s, const std::string& what) {
  auto it = std::find(std::begin(names), std::end(names), s);
  if (it == std::end(names)) {
    throw Error(ErrorKind::CorruptFixture, "unknown " + what + " '" + s + "'");
  }
  return static_cast<E>(it - std::begin(names));
}

Scenario scenario_from(const json& j) {
  Scenario s;
  s.name = j.at("name").get<std::string>();
  s.kind = lookup<ScenarioKind>(kKinds, j.at("kind").get<std::string>(), "scenario kind");
  s.project = j.at("project").get<std::string>();
  s.provenance = lookup<Provenance>(kProvenance, j.at("provenance").get<std::string>(),
                                    "provenance");
  s.expect = j.at("expect");
  if (s.kind == ScenarioKind::CheckUpdate) {
    s.package = j.at("package").get<std::string>();
    s.to = j.at("to").get<std::string>();
  }
  if (j.contains("with")) {
    for (const auto& [pkg, v] : j["with"].items()) {
      s.with[pkg] = registry::parse_version(v.get<std::string>());
    }
  }
  return s;
}

std::optional<double> ratio_of(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

ordered_json ratio_value(const std::optional<double>& r) {
  return r ? ordered_json(*r) : ordered_json(nullptr);
}

}  // namespace

std::string_view to_string(Provenance p) { return kProvenance[static_cast<int>(p)]; }
std::string_view to_string(ScenarioKind k) { return kKinds[static_cast<int>(k)]; }

const registry::Project& FixtureCase::project(const std::string& p) const {
  auto it = projects.find(p);
  if (it == projects.end()) {
    throw Error(ErrorKind::CorruptFixture, "fixture " + name + " has no project '" + p + "'");
  }
  return it->second;
}

fs::path fixtures_root() {
  if (const char* env = std::getenv("UPDCHECK_FIXTURES"); env && *env) return env;
  return UPDCHECK_FIXTURES_DIR;
}

std::vector<std::string> list_fixtures(const fs::path& root) {
  std::vector<std::string> out;
  if (!fs::is_directory(root)) return out;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory() && fs::exists(e.path() / "expected.json")) {
      out.push_back(e.path().filename().string());
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

FixtureCase load_fixture(const std::string& name, const fs::path& root) {
  fs::path dir = root / name;
  if (!fs::is_directory(dir) || !fs::exists(dir / "expected.json")) {
    throw Error(ErrorKind::UnknownFixture, "no fixture named '" + name + "' in " + root.string());
  }
  json j;
  try {
    std::ifstream in(dir / "expected.json");
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::CorruptFixture, name + "/expected.json: " + e.what());
  }

  try {
    FixtureCase c{name,
                  j.value("description", ""),
                  dir,
                  registry::Registry(dir / "registry"),
                  {},
                  {},
                  {}};
    for (const auto& [pkg, versions] : j.at("packages").items()) {
      std::vector<registry::Version> expected;
      for (const auto& v : versions) expected.push_back(registry::parse_version(v.get<std::string>()));
      std::sort(expected.begin(), expected.end());
      if (c.registry.list_versions(pkg) != expected) {
        throw Error(ErrorKind::CorruptFixture,
                    "registry snapshot of " + name + " does not match the versions listed for " +
                        pkg);
      }
      for (const auto& v : expected) c.registry.record(pkg, v);  // digest check
      c.packages[pkg] = std::move(expected);
    }
    if (c.registry.list_packages().size() != c.packages.size()) {
      throw Error(ErrorKind::CorruptFixture,
                  "registry snapshot of " + name + " holds unlisted packages");
    }
    for (const auto& p : j.at("projects")) {
      std::string pname = p.get<std::string>();
      c.projects.emplace(pname, registry::load_project(dir / "projects" / pname));
    }
    for (const auto& s : j.at("scenarios")) {
      Scenario sc = scenario_from(s);
      c.project(sc.project);
      c.scenarios.push_back(std::move(sc));
    }
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::CorruptFixture, name + "/expected.json: " + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::CorruptFixture) throw;
    throw Error(ErrorKind::CorruptFixture, "fixture " + name + ": " + e.what());
  }
}

namespace {

void expect_eq(const ordered_json& actual, const json& expect, const char* key,
               std::ostringstream& detail) {
  if (!expect.contains(key)) return;
  if (json(actual[key]) != expect[key]) {
    detail << key << ": expected " << expect[key].dump() << ", got " << actual[key].dump() << "; ";
  }
}

ordered_json check_update_actual(const FixtureCase& c, const Scenario& s) {
  analysis::UpdateReport r = analysis::analyze_update(c.project(s.project), c.registry, s.package,
                                                      registry::parse_version(s.to));
  ordered_json a;
  a["verdict"] = std::string(analysis::to_string(r.verdict));
  a["impacted"] = ordered_json::array();
  a["stacks"] = ordered_json::array();
  for (const auto& i : r.impacts) {
    a["impacted"].push_back(i.function);
    a["stacks"].push_back(i.path.stack);
  }
  a["changed_functions"] = r.changes.changes.size();
  return a;
}

ordered_json test_actual(const FixtureCase& c, const Scenario& s) {
  registry::ResolveOptions opts;
  opts.pins = s.with;
  registry::Workspace ws = registry::open_workspace(c.project(s.project), c.registry, opts);
  runtime::TestRun run = runtime::run_tests(*ws.model);
  ordered_json a;
  a["all_passed"] = run.all_passed();
  a["failed"] = ordered_json::array();
  for (const auto& t : run.results) {
    if (t.status != runtime::TestStatus::Pass) a["failed"].push_back(t.name);
  }
  return a;
}

ordered_json coverage_actual(const FixtureCase& c, const Scenario& s) {
  registry::Workspace ws = registry::open_workspace(c.project(s.project), c.registry);
  runtime::TestRun run = runtime::run_tests(*ws.model);
  metrics::CoverageReport r =
      metrics::dependency_coverage(analysis::build_call_graph(*ws.model), run.trace, ws.tree);
  ordered_json a;
  a["direct_ratio"] = ratio_value(r.direct.ratio);
  a["transitive_ratio"] = ratio_value(r.transitive.ratio);
  return a;
}

ordered_json bench_actual(const FixtureCase& c, const Scenario& s) {
  mutation::BenchmarkRun run = mutation::run_benchmark(c.project(s.project), c.registry);
  ordered_json a;
  a["mutants"] = run.outcomes.size();
  a["static_score"] = ratio_value(run.report.static_analyzer.score);
  a["test_score"] = ratio_value(run.report.test_suite.score);
  return a;
}

}  // namespace

ScenarioOutcome run_scenario(const FixtureCase& c, const Scenario& s) {
  ScenarioOutcome o;
  o.scenario = s.name;
  std::ostringstream detail;
  try {
    switch (s.kind) {
      case ScenarioKind::CheckUpdate:
        o.actual = check_update_actual(c, s);
        for (const char* k : {"verdict", "impacted", "stacks", "changed_functions"}) {
          expect_eq(o.actual, s.expect, k, detail);
        }
        break;
      case ScenarioKind::Test:
        o.actual = test_actual(c, s);
        for (const char* k : {"all_passed", "failed"}) expect_eq(o.actual, s.expect, k, detail);
        break;
      case ScenarioKind::Coverage:
        o.actual = coverage_actual(c, s);
        for (const char* k : {"direct_ratio", "transitive_ratio"}) {
          expect_eq(o.actual, s.expect, k, detail);
        }
        break;
      case ScenarioKind::Bench:
        o.actual = bench_actual(c, s);
        for (const char* k : {"mutants", "static_score", "test_score"}) {
          expect_eq(o.actual, s.expect, k, detail);
        }
        if (s.expect.contains("test_score_below")) {
          auto t = ratio_of(json(o.actual["test_score"]));
          double bound = s.expect["test_score_below"].get<double>();
          if (!t || !(*t < bound)) {
            detail << "test_score: expected below " << bound << ", got "
                   << o.actual["test_score"].dump() << "; ";
          }
        }
        break;
    }
  } catch (const Error& e) {
    detail << "error: " << e.what();
  }
  o.detail = detail.str();
  o.passed = o.detail.empty();
  return o;
}

std::vector<ScenarioOutcome> run_scenarios(const FixtureCase& c) {
  std::vector<ScenarioOutcome> out;
  for (const auto& s : c.scenarios) out.push_back(run_scenario(c, s));
  return out;
}

}  // namespace updcheck::fixtures
