#pragma once

#include <optional>
#include <string>
#include <vector>

#include "updcheck/analysis/callgraph.hpp"
#include "updcheck/analysis/diffing.hpp"
#include "updcheck/registry/workspace.hpp"

namespace updcheck::analysis {

/// A call stack from a client root down to a changed function. `dispatch`
/// and `sites` describe the edge into stack[i + 1].
struct ImpactPath {
  std::vector<std::string> stack;
  std::vector<Dispatch> dispatch;
  std::vector<CallSite> sites;

  friend bool operator==(const ImpactPath&, const ImpactPath&) = default;
};

enum class Verdict { Safe, Unsafe, Unused };
std::string_view to_string(Verdict v);

struct Impact {
  std::string function;
  std::set<ChangeKind> kinds;
  ImpactPath path;                 // shortest, lexicographically least
  std::vector<ImpactPath> all;     // filled when all paths were requested

  friend bool operator==(const Impact&, const Impact&) = default;
};

struct UpdateReport {
  std::string client;
  std::string library;
  registry::Version old_version;
  registry::Version new_version;
  Verdict verdict = Verdict::Safe;
  std::vector<Impact> impacts;  // sorted by function; non-empty iff Unsafe
  ChangeSet changes;
  std::optional<double> runtime_ms;

  friend bool operator==(const UpdateReport&, const UpdateReport&) = default;
};

/// Shortest path by edge count from any root to `target`; ties go to the
/// lexicographically smallest node sequence. Throws Error(Unreachable).
ImpactPath shortest_impact_path(const CallGraph& cg, const std::vector<std::string>& roots,
                                std::string_view target);

/// Simple paths from roots to `target`, in lexicographic order, at most
/// `limit` of them.
std::vector<ImpactPath> all_impact_paths(const CallGraph& cg,
                                         const std::vector<std::string>& roots,
                                         std::string_view target, std::size_t limit = 1000);

struct AssessOptions {
  bool all_paths = false;
  std::size_t path_limit = 1000;
};

/// Verdict for applying `changes` to the package `changes.library` inside
/// the program `cg` was built from. Fills verdict and impacts only.
UpdateReport assess_impact(const CallGraph& cg, const std::vector<std::string>& roots,
                           const ChangeSet& changes, const AssessOptions& opts = {});

struct AnalyzeOptions {
  AssessOptions assess;
  bool timings = false;
};

/// Full pipeline: resolve the project, diff the installed and target
/// versions of `library`, build the call graph and assess reachability.
/// Throws UnknownPackage, UnknownVersion or ResolutionFailure.
UpdateReport analyze_update(const registry::Project& project, const registry::Registry& reg,
                            const std::string& library, const registry::Version& to,
                            const AnalyzeOptions& opts = {});

std::string report_json(const UpdateReport& r);
UpdateReport report_from_json(std::string_view text);

}  // namespace updcheck::analysis
