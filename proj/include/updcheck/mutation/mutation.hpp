#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "updcheck/analysis/impact.hpp"
#include "updcheck/metrics/metrics.hpp"
#include "updcheck/registry/workspace.hpp"
#include "updcheck/runtime/test_runner.hpp"

namespace updcheck::mutation {

enum class Operator { ABS, AOR, LCR, ROR, UOI };
std::string_view to_string(Operator op);
/// Parses "ABS,AOR,..." (case-insensitive). Throws Error(Io) on unknown names.
std::set<Operator> parse_operators(std::string_view list);
const std::set<Operator>& all_operators();

/// One syntactic fault in one function. The expression at pre-order
/// position `node_index` of the function body is replaced by `mutated`.
struct Mutant {
  std::string id;  // "m0001", ...
  std::string package;
  std::string target_function;
  std::string file;
  Operator op = Operator::ABS;
  int node_index = 0;
  minilang::Span span;
  std::string original_fragment;
  std::string mutated_fragment;
  minilang::Expr replacement;  // the new node

  /// The target package's sources with this one edit applied, regenerated
  /// through the pretty-printer. Filled by materialize().
  std::vector<minilang::SourceFile> mutated_library;
};

/// Every mutant of `fn` for the chosen operators, in node order. Ids are
/// left empty.
std::vector<Mutant> generate_mutants(const minilang::FunctionInfo& fn,
                                     const minilang::SemanticModel& model,
                                     const std::set<Operator>& ops = all_operators());

/// Applies the mutant to a copy of `sources` and re-parses the printed
/// result. Throws Error(Io) if the target node is missing.
std::vector<minilang::SourceFile> materialize(const Mutant& m,
                                              const std::vector<minilang::SourceFile>& sources);

struct MutantOutcome {
  Mutant mutant;
  bool killed = false;
  std::string kill_reason;  // first failing test and its message
  analysis::Verdict verdict = analysis::Verdict::Safe;
  std::size_t changed_functions = 0;
  std::set<analysis::ChangeKind> kinds;
};

struct BenchmarkOptions {
  std::set<Operator> operators = all_operators();
  int jobs = 1;
  runtime::Limits limits;
};

struct BenchmarkRun {
  std::string project;
  std::vector<std::string> covered_functions;  // dependency functions the tests invoked
  std::vector<MutantOutcome> outcomes;         // sorted by id
  int excluded = 0;                            // mutants rejected by the checker
  metrics::DetectionReport report;
};

/// Mutates every dependency function the baseline tests invoke, then checks
/// each mutant against the test suite and against static impact analysis.
/// Throws Error(RedBaseline) if the unmodified tests do not all pass.
BenchmarkRun run_benchmark(const registry::Project& project, const registry::Registry& reg,
                           const BenchmarkOptions& opts = {});

std::string benchmark_json(const BenchmarkRun& run);
std::string benchmark_csv(const BenchmarkRun& run);

}  // namespace updcheck::mutation
