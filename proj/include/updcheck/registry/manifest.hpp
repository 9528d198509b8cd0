#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "updcheck/registry/version.hpp"

namespace updcheck::registry {

struct Dependency {
  std::string name;
  VersionRange range;
};

/// Contents of `manifest.json`.
struct Manifest {
  std::string name;
  Version version;
  std::vector<Dependency> dependencies;  // sorted by name
  std::vector<std::string> sources;
  std::vector<std::string> tests;

  const Dependency* dependency(std::string_view name) const;
};

/// Parses and validates manifest JSON. Throws Error(InvalidManifest).
Manifest parse_manifest(std::string_view json_text);
Manifest load_manifest(const std::filesystem::path& file);
std::string manifest_json(const Manifest& m);

bool valid_package_name(std::string_view name);

}  // namespace updcheck::registry
