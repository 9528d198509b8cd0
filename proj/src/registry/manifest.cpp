#include "updcheck/registry/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "updcheck/error.hpp"

namespace updcheck::registry {

namespace {

[[noreturn]] void invalid(const std::string& msg) {
  throw Error(ErrorKind::InvalidManifest, "invalid manifest: " + msg);
}

bool safe_relative(const std::string& p) {
  if (p.empty() || p.front() == '/') return false;
  std::filesystem::path path(p);
  return std::none_of(path.begin(), path.end(),
                      [](const auto& part) { return part == ".."; });
}

std::vector<std::string> path_list(const nlohmann::json& j, const char* key) {
  std::vector<std::string> out;
  if (!j.contains(key)) return out;
  if (!j[key].is_array()) invalid(std::string("'") + key + "' must be an array");
  for (const auto& e : j[key]) {
    if (!e.is_string()) invalid(std::string("'") + key + "' entries must be strings");
    std::string p = e.get<std::string>();
    if (!safe_relative(p)) invalid("path '" + p + "' must be relative and stay inside the package");
    if (std::find(out.begin(), out.end(), p) != out.end()) {
      invalid("path '" + p + "' listed twice");
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace

bool valid_package_name(std::string_view name) {
  if (name.empty() || !(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) {
    return false;
  }
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

const Dependency* Manifest::dependency(std::string_view dep) const {
  for (const auto& d : dependencies) {
    if (d.name == dep) return &d;
  }
  return nullptr;
}

Manifest parse_manifest(std::string_view json_text) {
  // Duplicate keys would otherwise silently keep the last value.
  std::vector<std::set<std::string>> open_objects;
  std::string duplicate;
  auto track = [&](int, nlohmann::json::parse_event_t event, nlohmann::json& parsed) {
    using E = nlohmann::json::parse_event_t;
    if (event == E::object_start) open_objects.emplace_back();
    if (event == E::object_end) open_objects.pop_back();
    if (event == E::key && !open_objects.back().insert(parsed.get<std::string>()).second) {
      duplicate = parsed.get<std::string>();
    }
    return true;
  };
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text, track);
  } catch (const nlohmann::json::parse_error& e) {
    invalid(e.what());
  }
  if (!duplicate.empty()) invalid("key '" + duplicate + "' appears twice");
  if (!j.is_object()) invalid("top level must be an object");
  if (!j.contains("name") || !j["name"].is_string()) invalid("missing string 'name'");
  if (!j.contains("version") || !j["version"].is_string()) invalid("missing string 'version'");

  Manifest m;
  m.name = j["name"].get<std::string>();
  if (!valid_package_name(m.name) || m.name == "std") {
    invalid("'" + m.name + "' is not a valid package name");
  }
  m.version = parse_version(j["version"].get<std::string>());
  if (j.contains("dependencies")) {
    const auto& deps = j["dependencies"];
    if (!deps.is_object()) invalid("'dependencies' must be an object");
    std::set<std::string> seen;
    for (const auto& [name, range] : deps.items()) {
      if (!range.is_string()) invalid("range for '" + name + "' must be a string");
      if (name == m.name) invalid("package '" + name + "' depends on itself");
      if (!valid_package_name(name)) invalid("'" + name + "' is not a valid package name");
      if (!seen.insert(name).second) invalid("duplicate dependency '" + name + "'");
      m.dependencies.push_back({name, parse_range(range.get<std::string>())});
    }
    std::sort(m.dependencies.begin(), m.dependencies.end(),
              [](const Dependency& a, const Dependency& b) { return a.name < b.name; });
  }
  m.sources = path_list(j, "sources");
  m.tests = path_list(j, "tests");
  return m;
}

Manifest load_manifest(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw Error(ErrorKind::InvalidManifest, "cannot read manifest " + file.string());
  }
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_manifest(ss.str());
}

std::string manifest_json(const Manifest& m) {
  nlohmann::ordered_json j;
  j["name"] = m.name;
  j["version"] = m.version.str();
  nlohmann::ordered_json deps = nlohmann::ordered_json::object();
  for (const auto& d : m.dependencies) deps[d.name] = d.range.str();
  j["dependencies"] = deps;
  j["sources"] = m.sources;
  j["tests"] = m.tests;
  return j.dump(2) + "\n";
}

}  // namespace updcheck::registry
