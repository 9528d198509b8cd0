#include "updcheck/registry/resolver.hpp"

#include <algorithm>
#include <deque>

#include <json.hpp>

#include "updcheck/error.hpp"

namespace updcheck::registry {

namespace {

struct Requirement {
  std::string requirer;
  VersionRange range;
};

class Solver {
 public:
  Solver(const Manifest& root, const Registry& reg, const ResolveOptions& opts)
      : root_(root), reg_(reg), opts_(opts) {
    for (const auto& d : root.dependencies) {
      if (d.name == root.name) cycle(root.name, root.name);
      constraints_[d.name].push_back({root.name, d.range});
    }
  }

  bool solve() {
    const std::string* next = nullptr;
    for (const auto& [name, reqs] : constraints_) {
      if (!reqs.empty() && !chosen_.count(name)) {
        next = &name;
        break;
      }
    }
    if (!next) return true;
    const std::string name = *next;

    for (const Version& cand : candidates(name)) {
      const Manifest& m = manifest(name, cand);
      bool ok = true;
      for (const auto& d : m.dependencies) {
        if (d.name == root_.name) cycle(name, d.name);
        auto it = chosen_.find(d.name);
        if (it != chosen_.end() && !pinned(d.name) && !satisfies(it->second, d.range)) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      chosen_[name] = cand;
      for (const auto& d : m.dependencies) constraints_[d.name].push_back({name, d.range});
      if (solve()) return true;
      for (const auto& d : m.dependencies) constraints_[d.name].pop_back();
      chosen_.erase(name);
    }
    if (failed_.empty()) {
      failed_ = name;
      failed_reqs_ = constraints_[name];
    }
    return false;
  }

  [[noreturn]] void fail() const {
    std::string msg = "no version of '" + failed_ + "' satisfies";
    bool first = true;
    for (const auto& r : failed_reqs_) {
      msg += first ? " " : ", ";
      first = false;
      msg += r.requirer + " requires \"" + r.range.str() + "\"";
    }
    if (reg_.list_versions(failed_).empty()) msg += " (package not in registry)";
    throw Error(ErrorKind::UnresolvableDependency, msg);
  }

  DependencyTree tree() {
    DependencyTree t;
    t.root = root_.name;
    t.root_version = root_.version;
    t.nodes[root_.name] = root_.version;
    for (const auto& [name, v] : chosen_) t.nodes[name] = v;
    for (const auto& d : root_.dependencies) t.edges.insert({root_.name, d.name});
    for (const auto& [name, v] : chosen_) {
      for (const auto& d : manifest(name, v).dependencies) t.edges.insert({name, d.name});
    }
    check_acyclic(t);
    std::deque<std::string> queue{root_.name};
    t.depth[root_.name] = 0;
    while (!queue.empty()) {
      std::string cur = queue.front();
      queue.pop_front();
      for (auto it = t.edges.lower_bound({cur, ""}); it != t.edges.end() && it->first == cur;
           ++it) {
        if (!t.depth.count(it->second)) {
          t.depth[it->second] = t.depth[cur] + 1;
          queue.push_back(it->second);
        }
      }
    }
    return t;
  }

 private:
  [[noreturn]] static void cycle(const std::string& from, const std::string& to) {
    throw Error(ErrorKind::DependencyCycle,
                "dependency cycle: " + from + " depends on " + to);
  }

  bool pinned(const std::string& name) const { return opts_.pins.count(name) > 0; }

  std::vector<Version> candidates(const std::string& name) const {
    std::vector<Version> all = reg_.list_versions(name);
    if (auto pin = opts_.pins.find(name); pin != opts_.pins.end()) {
      if (std::find(all.begin(), all.end(), pin->second) == all.end()) {
        throw Error(all.empty() ? ErrorKind::UnknownPackage : ErrorKind::UnknownVersion,
                    name + "@" + pin->second.str() + " is not in the registry");
      }
      return {pin->second};
    }
    std::vector<Version> out;
    const auto& reqs = constraints_.at(name);
    for (auto it = all.rbegin(); it != all.rend(); ++it) {
      if (std::all_of(reqs.begin(), reqs.end(),
                      [&](const Requirement& r) { return satisfies(*it, r.range); })) {
        out.push_back(*it);
      }
    }
    return out;
  }

  const Manifest& manifest(const std::string& name, const Version& v) {
    std::string key = name + "@" + v.str();
    auto it = manifests_.find(key);
    if (it == manifests_.end()) it = manifests_.emplace(key, reg_.manifest(name, v)).first;
    return it->second;
  }

  void check_acyclic(const DependencyTree& t) const {
    std::map<std::string, int> state;  // 1 = on stack, 2 = done
    std::vector<std::string> stack;
    auto visit = [&](auto&& self, const std::string& n) -> void {
      state[n] = 1;
      stack.push_back(n);
      for (auto it = t.edges.lower_bound({n, ""}); it != t.edges.end() && it->first == n; ++it) {
        int s = state[it->second];
        if (s == 1) {
          std::string path;
          auto pos = std::find(stack.begin(), stack.end(), it->second);
          for (; pos != stack.end(); ++pos) path += *pos + " -> ";
          throw Error(ErrorKind::DependencyCycle, "dependency cycle: " + path + it->second);
        }
        if (s == 0) self(self, it->second);
      }
      stack.pop_back();
      state[n] = 2;
    };
    visit(visit, t.root);
  }

  const Manifest& root_;
  const Registry& reg_;
  const ResolveOptions& opts_;
  std::map<std::string, std::vector<Requirement>> constraints_;
  std::map<std::string, Version> chosen_;
  std::map<std::string, Manifest> manifests_;
  std::string failed_;
  std::vector<Requirement> failed_reqs_;
};

}  // namespace

std::vector<std::string> DependencyTree::direct() const {
  std::vector<std::string> out;
  for (auto it = edges.lower_bound({root, ""}); it != edges.end() && it->first == root; ++it) {
    out.push_back(it->second);
  }
  return out;
}

std::string DependencyTree::id(std::string_view name) const {
  auto it = nodes.find(std::string(name));
  if (it == nodes.end()) return std::string(name);
  return it->first + "@" + it->second.str();
}

DependencyTree resolve(const Manifest& m, const Registry& reg, const ResolveOptions& opts) {
  Solver solver(m, reg, opts);
  if (!solver.solve()) solver.fail();
  return solver.tree();
}

std::string tree_json(const DependencyTree& t) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["root"] = t.id(t.root);
  nlohmann::ordered_json nodes = nlohmann::ordered_json::array();
  for (const auto& [name, v] : t.nodes) {
    auto d = t.depth.find(name);
    nodes.push_back({{"name", name},
                     {"version", v.str()},
                     {"depth", d == t.depth.end() ? -1 : d->second}});
  }
  j["nodes"] = nodes;
  nlohmann::ordered_json edges = nlohmann::ordered_json::array();
  for (const auto& [from, to] : t.edges) edges.push_back({{"from", from}, {"to", to}});
  j["edges"] = edges;
  return j.dump(2) + "\n";
}

}  // namespace updcheck::registry
