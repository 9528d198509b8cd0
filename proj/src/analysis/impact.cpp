#include "updcheck/analysis/impact.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>

#include "updcheck/analysis/serialize.hpp"
#include "updcheck/error.hpp"

namespace updcheck::analysis {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Safe: return "Safe";
    case Verdict::Unsafe: return "Unsafe";
    case Verdict::Unused: return "Unused";
  }
  return "Safe";
}

namespace {

std::map<std::string, std::set<std::string>> predecessors(const CallGraph& cg) {
  std::map<std::string, std::set<std::string>> pred;
  for (const auto& e : cg.edges()) pred[e.to].insert(e.from);
  return pred;
}

// Edge-count distance to `target` for every node that reaches it.
std::map<std::string, int> distance_to(const CallGraph& cg, const std::string& target) {
  auto pred = predecessors(cg);
  std::map<std::string, int> dist{{target, 0}};
  std::deque<std::string> queue{target};
  while (!queue.empty()) {
    std::string cur = queue.front();
    queue.pop_front();
    for (const auto& p : pred[cur]) {
      if (dist.emplace(p, dist[cur] + 1).second) queue.push_back(p);
    }
  }
  return dist;
}

ImpactPath annotate(const CallGraph& cg, std::vector<std::string> stack) {
  ImpactPath p;
  for (std::size_t i = 0; i + 1 < stack.size(); ++i) {
    auto it = std::lower_bound(cg.edges().begin(), cg.edges().end(), stack[i],
                               [](const CallEdge& e, const std::string& from) { return e.from < from; });
    while (it->to != stack[i + 1]) ++it;
    p.dispatch.push_back(it->dispatch);
    p.sites.push_back(it->site);
  }
  p.stack = std::move(stack);
  return p;
}

}  // namespace

ImpactPath shortest_impact_path(const CallGraph& cg, const std::vector<std::string>& roots,
                                std::string_view target_view) {
  std::string target(target_view);
  if (!cg.node(target)) {
    throw Error(ErrorKind::Unreachable, "'" + target + "' is not in the call graph");
  }
  auto dist = distance_to(cg, target);
  std::vector<std::string> sorted_roots = roots;
  std::sort(sorted_roots.begin(), sorted_roots.end());
  const std::string* best = nullptr;
  for (const auto& r : sorted_roots) {
    auto it = dist.find(r);
    if (it != dist.end() && cg.node(r) && (!best || it->second < dist[*best])) best = &r;
  }
  if (!best) throw Error(ErrorKind::Unreachable, "'" + target + "' is unreachable from the roots");

  std::vector<std::string> stack{*best};
  while (stack.back() != target) {
    int want = dist[stack.back()] - 1;
    for (const auto& s : cg.successors(stack.back())) {  // ascending
      auto it = dist.find(s);
      if (it != dist.end() && it->second == want) {
        stack.push_back(s);
        break;
      }
    }
  }
  return annotate(cg, std::move(stack));
}

std::vector<ImpactPath> all_impact_paths(const CallGraph& cg,
                                         const std::vector<std::string>& roots,
                                         std::string_view target_view, std::size_t limit) {
  std::string target(target_view);
  std::vector<ImpactPath> out;
  if (!cg.node(target)) return out;
  auto dist = distance_to(cg, target);
  std::vector<std::string> sorted_roots = roots;
  std::sort(sorted_roots.begin(), sorted_roots.end());
  sorted_roots.erase(std::unique(sorted_roots.begin(), sorted_roots.end()), sorted_roots.end());

  std::vector<std::string> stack;
  std::set<std::string> on_stack;
  auto dfs = [&](auto&& self, const std::string& n) -> void {
    if (out.size() >= limit) return;
    stack.push_back(n);
    on_stack.insert(n);
    if (n == target) {
      out.push_back(annotate(cg, stack));
    } else {
      for (const auto& s : cg.successors(n)) {
        if (dist.count(s) && !on_stack.count(s)) self(self, s);
      }
    }
    on_stack.erase(n);
    stack.pop_back();
  };
  for (const auto& r : sorted_roots) {
    if (dist.count(r) && cg.node(r)) dfs(dfs, r);
  }
  return out;
}

UpdateReport assess_impact(const CallGraph& cg, const std::vector<std::string>& roots,
                           const ChangeSet& changes, const AssessOptions& opts) {
  UpdateReport r;
  r.library = changes.library;
  r.old_version = changes.old_version;
  r.new_version = changes.new_version;
  r.changes = changes;

  auto reached = reachable(cg, roots);
  bool uses_library = std::any_of(reached.begin(), reached.end(), [&](const std::string& id) {
    return cg.node(id)->package == changes.library;
  });
  if (!uses_library) {
    r.verdict = Verdict::Unused;
    return r;
  }
  for (const auto& c : changes.changes) {
    if (c.kinds == std::set<ChangeKind>{ChangeKind::Added}) continue;
    if (!reached.count(c.function)) continue;
    Impact imp{c.function, c.kinds, shortest_impact_path(cg, roots, c.function), {}};
    if (opts.all_paths) imp.all = all_impact_paths(cg, roots, c.function, opts.path_limit);
    r.impacts.push_back(std::move(imp));
  }
  r.verdict = r.impacts.empty() ? Verdict::Safe : Verdict::Unsafe;
  return r;
}

UpdateReport analyze_update(const registry::Project& project, const registry::Registry& reg,
                            const std::string& library, const registry::Version& to,
                            const AnalyzeOptions& opts) {
  auto start = std::chrono::steady_clock::now();
  registry::Workspace ws = registry::open_workspace(project, reg);
  if (!ws.tree.contains(library) || library == ws.tree.root) {
    throw Error(ErrorKind::UnknownPackage,
                "'" + library + "' is not in the dependency tree of " + project.manifest.name);
  }
  registry::Version from = ws.tree.nodes.at(library);
  reg.manifest(library, to);  // UnknownVersion

  registry::ResolveOptions pinned;
  pinned.pins[library] = to;
  try {
    registry::resolve(project.manifest, reg, pinned);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::UnresolvableDependency && e.kind() != ErrorKind::DependencyCycle) {
      throw;
    }
    throw Error(ErrorKind::ResolutionFailure,
                "cannot resolve " + project.manifest.name + " with " + library + "@" + to.str() +
                    ": " + e.what());
  }

  ChangeSet cs = diff_library(library, from, to, reg.sources(library, from),
                              reg.sources(library, to));
  CallGraph cg = build_call_graph(*ws.model);
  UpdateReport r = assess_impact(cg, cg.client_roots(), cs, opts.assess);
  r.client = project.manifest.name;
  if (opts.timings) {
    r.runtime_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  }
  return r;
}

namespace {

nlohmann::ordered_json path_value(const ImpactPath& p) {
  auto frames = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < p.stack.size(); ++i) {
    nlohmann::ordered_json f;
    f["function"] = p.stack[i];
    if (i == 0) {
      f["dispatch"] = nullptr;
      f["site"] = nullptr;
    } else {
      f["dispatch"] = std::string(to_string(p.dispatch[i - 1]));
      const auto& s = p.sites[i - 1];
      f["site"] = {{"file", s.file}, {"line", s.line}, {"column", s.column}};
    }
    frames.push_back(f);
  }
  return frames;
}

ImpactPath path_from(const nlohmann::json& frames) {
  ImpactPath p;
  for (std::size_t i = 0; i < frames.size(); ++i) {
    const auto& f = frames[i];
    p.stack.push_back(f.at("function").get<std::string>());
    if (i > 0) {
      p.dispatch.push_back(f.at("dispatch") == "static" ? Dispatch::Static : Dispatch::Interface);
      const auto& s = f.at("site");
      p.sites.push_back({s.at("file"), s.at("line"), s.at("column")});
    }
  }
  return p;
}

}  // namespace

std::string report_json(const UpdateReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["client"] = r.client;
  j["library"] = r.library;
  j["old_version"] = r.old_version.str();
  j["new_version"] = r.new_version.str();
  j["verdict"] = std::string(to_string(r.verdict));
  auto impacts = nlohmann::ordered_json::array();
  for (const auto& imp : r.impacts) {
    nlohmann::ordered_json i;
    i["function"] = imp.function;
    auto kinds = nlohmann::ordered_json::array();
    for (auto k : imp.kinds) kinds.push_back(std::string(to_string(k)));
    i["kinds"] = kinds;
    i["stack"] = path_value(imp.path);
    if (!imp.all.empty()) {
      auto all = nlohmann::ordered_json::array();
      for (const auto& p : imp.all) all.push_back(path_value(p));
      i["all_paths"] = all;
    }
    impacts.push_back(i);
  }
  j["impacts"] = impacts;
  std::size_t reachable_changed = r.impacts.size();
  j["summary"] = {{"changed_functions", r.changes.changes.size()},
                  {"reachable_changed_functions", reachable_changed}};
  j["changeset"] = changeset_value(r.changes);
  if (r.runtime_ms) j["runtime_ms"] = *r.runtime_ms;
  return j.dump(2) + "\n";
}

UpdateReport report_from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text);
  UpdateReport r;
  r.client = j.at("client").get<std::string>();
  r.library = j.at("library").get<std::string>();
  r.old_version = registry::parse_version(j.at("old_version").get<std::string>());
  r.new_version = registry::parse_version(j.at("new_version").get<std::string>());
  std::string v = j.at("verdict").get<std::string>();
  r.verdict = v == "Unsafe" ? Verdict::Unsafe : v == "Unused" ? Verdict::Unused : Verdict::Safe;
  for (const auto& i : j.at("impacts")) {
    Impact imp;
    imp.function = i.at("function").get<std::string>();
    for (const auto& k : i.at("kinds")) imp.kinds.insert(change_kind_from(k.get<std::string>()));
    imp.path = path_from(i.at("stack"));
    if (i.contains("all_paths")) {
      for (const auto& p : i["all_paths"]) imp.all.push_back(path_from(p));
    }
    r.impacts.push_back(std::move(imp));
  }
  r.changes = changeset_from(j.at("changeset"));
  if (j.contains("runtime_ms")) r.runtime_ms = j["runtime_ms"].get<double>();
  return r;
}

}  // namespace updcheck::analysis
