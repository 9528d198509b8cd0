#include "updcheck/analysis/callgraph.hpp"

#include <algorithm>
#include <deque>

#include <json.hpp>

#include "updcheck/error.hpp"

namespace updcheck::analysis {

using namespace minilang;

std::string_view to_string(Dispatch d) {
  return d == Dispatch::Static ? "static" : "interface";
}

CallGraph::CallGraph(std::vector<CallGraphNode> nodes, std::vector<CallEdge> edges)
    : edges_(std::move(edges)) {
  for (auto& n : nodes) {
    std::string id = n.id;
    nodes_.emplace(std::move(id), std::move(n));
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  for (const auto& e : edges_) {
    if (!nodes_.count(e.from) || !nodes_.count(e.to)) {
      throw Error(ErrorKind::MismatchedProgram,
                  "call edge " + e.from + " -> " + e.to + " references an unknown function");
    }
    succ_[e.from].insert(e.to);
  }
}

const CallGraphNode* CallGraph::node(std::string_view id) const {
  auto it = nodes_.find(std::string(id));
  return it == nodes_.end() ? nullptr : &it->second;
}

bool CallGraph::has_edge(std::string_view from, std::string_view to) const {
  auto it = succ_.find(from);
  return it != succ_.end() && it->second.count(std::string(to));
}

const std::set<std::string>& CallGraph::successors(std::string_view id) const {
  static const std::set<std::string> none;
  auto it = succ_.find(id);
  return it == succ_.end() ? none : it->second;
}

std::vector<std::string> CallGraph::client_roots() const {
  std::vector<std::string> out;
  for (const auto& [id, n] : nodes_) {
    if (n.origin == Origin::Client) out.push_back(id);
  }
  return out;
}

CallGraph build_call_graph(const SemanticModel& model) {
  std::vector<CallGraphNode> nodes;
  std::vector<CallEdge> edges;
  for (const FunctionInfo* f : model.functions()) {
    if (f->in_test_file) continue;
    nodes.push_back({f->qualified_name, f->package->name, f->package->version,
                     f->package->origin});
  }
  auto is_node = [](const FunctionInfo* f) { return f && !f->in_test_file; };

  for (const FunctionInfo* f : model.functions()) {
    if (f->in_test_file) continue;
    for_each_expr(f->decl->body, [&](const Expr& e) {
      CallSite site{f->file, e.span.line, e.span.column};
      if (e.as<CallExpr>()) {
        const ExprInfo& info = model.info(e);
        if (is_node(info.target)) {
          edges.push_back({f->qualified_name, info.target->qualified_name, Dispatch::Static, site});
        }
      } else if (const auto* mc = e.as<MethodCallExpr>()) {
        const Type& recv = model.type_of(*mc->receiver);
        std::set<std::string> targets;
        for (const ClassInfo* c : model.subtypes_of(recv)) {
          auto it = c->vtable.find(mc->method);
          if (it != c->vtable.end() && is_node(it->second)) targets.insert(it->second->qualified_name);
        }
        bool via_interface = model.interface_named(recv.name) != nullptr || targets.size() > 1;
        for (const auto& t : targets) {
          edges.push_back({f->qualified_name, t,
                           via_interface ? Dispatch::Interface : Dispatch::Static, site});
        }
      }
    });
  }
  return CallGraph(std::move(nodes), std::move(edges));
}

std::set<std::pair<std::string, std::string>> direct_call_sites(const CallGraph& cg) {
  std::set<std::pair<std::string, std::string>> out;
  for (const auto& e : cg.edges()) {
    if (cg.node(e.from)->origin == Origin::Client &&
        cg.node(e.to)->origin == Origin::DirectDep) {
      out.insert({e.from, e.to});
    }
  }
  return out;
}

std::set<std::string> reachable(const CallGraph& cg, const std::vector<std::string>& roots) {
  std::set<std::string> seen;
  std::deque<std::string> queue;
  for (const auto& r : roots) {
    if (cg.node(r) && seen.insert(r).second) queue.push_back(r);
  }
  while (!queue.empty()) {
    std::string cur = std::move(queue.front());
    queue.pop_front();
    for (const auto& s : cg.successors(cur)) {
      if (seen.insert(s).second) queue.push_back(s);
    }
  }
  return seen;
}

ReachableDeps reachable_dependency_functions(const CallGraph& cg,
                                             const std::vector<std::string>& roots) {
  ReachableDeps out;
  for (const auto& id : reachable(cg, roots)) {
    switch (cg.node(id)->origin) {
      case Origin::DirectDep: out.direct.insert(id); break;
      case Origin::TransitiveDep: out.transitive.insert(id); break;
      case Origin::Client: break;
    }
  }
  return out;
}

namespace {

Origin origin_from(const std::string& s) {
  if (s == "client") return Origin::Client;
  if (s == "direct-dep") return Origin::DirectDep;
  if (s == "transitive-dep") return Origin::TransitiveDep;
  throw Error(ErrorKind::MismatchedProgram, "unknown origin '" + s + "'");
}

}  // namespace

std::string callgraph_json(const CallGraph& cg) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  auto nodes = nlohmann::ordered_json::array();
  for (const auto& [id, n] : cg.nodes()) {
    nodes.push_back({{"id", id},
                     {"package", n.package},
                     {"version", n.version},
                     {"origin", std::string(to_string(n.origin))}});
  }
  j["nodes"] = nodes;
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : cg.edges()) {
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"dispatch", std::string(to_string(e.dispatch))},
                     {"site", {{"file", e.site.file}, {"line", e.site.line},
                               {"column", e.site.column}}}});
  }
  j["edges"] = edges;
  return j.dump(2) + "\n";
}

CallGraph callgraph_from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text);
  std::vector<CallGraphNode> nodes;
  for (const auto& n : j.at("nodes")) {
    nodes.push_back({n.at("id"), n.at("package"), n.at("version"),
                     origin_from(n.at("origin").get<std::string>())});
  }
  std::vector<CallEdge> edges;
  for (const auto& e : j.at("edges")) {
    const auto& s = e.at("site");
    edges.push_back({e.at("from"), e.at("to"),
                     e.at("dispatch") == "static" ? Dispatch::Static : Dispatch::Interface,
                     {s.at("file"), s.at("line"), s.value("column", 0)}});
  }
  return CallGraph(std::move(nodes), std::move(edges));
}

}  // namespace updcheck::analysis
