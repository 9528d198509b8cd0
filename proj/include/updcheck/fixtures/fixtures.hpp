#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "updcheck/registry/registry.hpp"
#include "updcheck/registry/workspace.hpp"

namespace updcheck::fixtures {

/// Where an expected value comes from: a worked example reproduced as code,
/// a value that holds by construction, or one computed by hand from the
/// fixture sources.
enum class Provenance { WorkedExample, Trivial, Derived };
std::string_view to_string(Provenance p);

enum class ScenarioKind { CheckUpdate, Test, Coverage, Bench };
std::string_view to_string(ScenarioKind k);

/// One expectation recorded in a fixture's expected.json.
///
///   check-update: package, to        expect {verdict, impacted?}
///   test:         with? (pins)       expect {all_passed, failed?}
///   coverage:                        expect {direct_ratio, transitive_ratio?}
///   bench:                           expect {static_score, test_score_below?}
struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::Test;
  std::string project;
  std::string package;
  std::string to;
  std::map<std::string, registry::Version> with;
  nlohmann::json expect;
  Provenance provenance = Provenance::Derived;
};

struct FixtureCase {
  std::string name;
  std::string description;
  std::filesystem::path dir;
  registry::Registry registry;
  std::map<std::string, std::vector<registry::Version>> packages;
  std::map<std::string, registry::Project> projects;
  std::vector<Scenario> scenarios;

  const registry::Project& project(const std::string& name) const;
};

/// The corpus directory: $UPDCHECK_FIXTURES if set, else the copy in the
/// source tree.
std::filesystem::path fixtures_root();
std::vector<std::string> list_fixtures(const std::filesystem::path& root = fixtures_root());

/// Loads `<root>/<name>/`: the registry snapshot under registry/, the client
/// projects under projects/, and expected.json. Throws UnknownFixture when
/// the directory is missing, CorruptFixture when expected.json disagrees
/// with the snapshot or is malformed.
FixtureCase load_fixture(const std::string& name,
                         const std::filesystem::path& root = fixtures_root());

struct ScenarioOutcome {
  std::string scenario;
  bool passed = false;
  std::string detail;  // mismatch description, empty on success
  nlohmann::ordered_json actual;
};

ScenarioOutcome run_scenario(const FixtureCase& c, const Scenario& s);
std::vector<ScenarioOutcome> run_scenarios(const FixtureCase& c);

}  // namespace updcheck::fixtures
