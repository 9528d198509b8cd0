#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "updcheck/minilang/semantic.hpp"

namespace updcheck::analysis {

using minilang::Origin;

enum class Dispatch { Static, Interface };
std::string_view to_string(Dispatch d);

struct CallGraphNode {
  std::string id;  // qualified function name
  std::string package;
  std::string version;
  Origin origin = Origin::Client;
};

struct CallSite {
  std::string file;  // package-relative
  int line = 0;
  int column = 0;

  friend auto operator<=>(const CallSite&, const CallSite&) = default;
};

struct CallEdge {
  std::string from;
  std::string to;
  Dispatch dispatch = Dispatch::Static;
  CallSite site;

  friend auto operator<=>(const CallEdge&, const CallEdge&) = default;
};

/// Class-hierarchy-analysis call graph over every non-test function of a
/// program. Calls into the builtin `std` package are omitted.
class CallGraph {
 public:
  CallGraph() = default;
  CallGraph(std::vector<CallGraphNode> nodes, std::vector<CallEdge> edges);

  const std::map<std::string, CallGraphNode>& nodes() const { return nodes_; }
  /// Sorted by (from, to, dispatch, site).
  const std::vector<CallEdge>& edges() const { return edges_; }
  const CallGraphNode* node(std::string_view id) const;
  bool has_edge(std::string_view from, std::string_view to) const;
  const std::set<std::string>& successors(std::string_view id) const;
  /// Sorted ids of client-origin nodes.
  std::vector<std::string> client_roots() const;

 private:
  std::map<std::string, CallGraphNode> nodes_;
  std::vector<CallEdge> edges_;
  std::map<std::string, std::set<std::string>, std::less<>> succ_;
};

CallGraph build_call_graph(const minilang::SemanticModel& model);

/// (caller, callee) pairs of the graph whose caller is client code and whose
/// callee belongs to a direct dependency.
std::set<std::pair<std::string, std::string>> direct_call_sites(const CallGraph& cg);

struct ReachableDeps {
  std::set<std::string> direct;
  std::set<std::string> transitive;
};

/// Every node forward-reachable from `roots` (roots included).
std::set<std::string> reachable(const CallGraph& cg, const std::vector<std::string>& roots);

/// Dependency-owned nodes reachable from `roots`, split by origin.
ReachableDeps reachable_dependency_functions(const CallGraph& cg,
                                             const std::vector<std::string>& roots);

std::string callgraph_json(const CallGraph& cg);
CallGraph callgraph_from_json(std::string_view text);

}  // namespace updcheck::analysis
