#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "updcheck/registry/registry.hpp"

namespace updcheck::registry {

/// Resolved package graph of a project, one version per package name.
struct DependencyTree {
  std::string root;
  Version root_version;
  std::map<std::string, Version> nodes;  // includes the root
  std::set<std::pair<std::string, std::string>> edges;  // depends-on, by name
  std::map<std::string, int> depth;  // shortest distance from the root

  bool contains(std::string_view name) const { return nodes.count(std::string(name)) > 0; }
  std::vector<std::string> direct() const;
  std::string id(std::string_view name) const;  // "name@version"
};

struct ResolveOptions {
  /// Forces a package to an exact version regardless of the ranges that
  /// constrain it, the way an update bot replaces one requirement.
  std::map<std::string, Version> pins;
};

/// Chooses, for every package reachable from `m`, the highest registry
/// version satisfying all ranges placed on it by the chosen requirers.
/// Throws UnresolvableDependency or DependencyCycle.
DependencyTree resolve(const Manifest& m, const Registry& reg, const ResolveOptions& opts = {});

std::string tree_json(const DependencyTree& t);

}  // namespace updcheck::registry
