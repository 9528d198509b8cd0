#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "updcheck/analysis/callgraph.hpp"
#include "updcheck/registry/resolver.hpp"
#include "updcheck/runtime/test_runner.hpp"

namespace updcheck::metrics {

/// Recorded / declared dependency functions. `ratio` is null when nothing
/// is declared.
struct CoverageSection {
  std::set<std::string> declared;
  std::set<std::string> recorded;
  std::optional<double> ratio;
  std::size_t recorded_call_pairs = 0;  // distinct traced (caller, callee) into declared

  friend bool operator==(const CoverageSection&, const CoverageSection&) = default;
};

struct PackageCoverage {
  std::string package;
  std::string version;
  minilang::Origin origin = minilang::Origin::DirectDep;
  CoverageSection section;

  friend bool operator==(const PackageCoverage&, const PackageCoverage&) = default;
};

struct CoverageReport {
  std::string client;
  /// Callees of direct call sites from client code.
  CoverageSection direct;
  /// Every dependency function reachable from client code, any depth.
  CoverageSection transitive;
  std::vector<PackageCoverage> per_dependency;  // sorted by package

  friend bool operator==(const CoverageReport&, const CoverageReport&) = default;
};

/// Throws Error(MismatchedProgram) when the trace names functions absent
/// from the graph.
CoverageReport dependency_coverage(const analysis::CallGraph& cg, const runtime::TraceLog& trace,
                                   const registry::DependencyTree& tree);

struct MutantRecord {
  std::string id;
  std::string function;
  std::string op;
  bool detected_by_tests = false;
  bool detected_by_static = false;

  friend bool operator==(const MutantRecord&, const MutantRecord&) = default;
};

struct ToolScore {
  int detected = 0;
  int all = 0;
  std::optional<double> score;

  friend bool operator==(const ToolScore&, const ToolScore&) = default;
};

struct DetectionReport {
  ToolScore test_suite;
  ToolScore static_analyzer;
  std::vector<MutantRecord> records;  // sorted by id

  friend bool operator==(const DetectionReport&, const DetectionReport&) = default;
};

DetectionReport detection_score(std::vector<MutantRecord> records);

std::string coverage_json(const CoverageReport& r);
CoverageReport coverage_from_json(std::string_view text);
std::string render_coverage(const CoverageReport& r);

}  // namespace updcheck::metrics
