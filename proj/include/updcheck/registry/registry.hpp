#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "updcheck/minilang/semantic.hpp"
#include "updcheck/registry/manifest.hpp"

namespace updcheck::registry {

struct VersionRecord {
  std::string name;
  Version version;
  std::string digest;  // sha256 over manifest and files
  std::filesystem::path path;
};

/// Directory-backed package store laid out as
/// `<root>/<package>/<version>/{manifest.json, <sources...>, content.sha256}`.
/// Releases are immutable once published.
class Registry {
 public:
  /// Opens an existing registry. Throws Error(Io) when `root` is missing.
  explicit Registry(std::filesystem::path root);

  /// Creates the directory if needed and opens it.
  static Registry init(const std::filesystem::path& root);

  const std::filesystem::path& root() const { return root_; }

  /// Copies the manifest and every listed file of `package_dir` into the
  /// registry. Throws VersionAlreadyPublished or InvalidManifest.
  VersionRecord publish(const std::filesystem::path& package_dir) const;

  std::vector<std::string> list_packages() const;
  /// Published versions, ascending. Empty for unknown packages.
  std::vector<Version> list_versions(std::string_view package) const;
  bool has(std::string_view package, const Version& v) const;

  std::filesystem::path package_dir(std::string_view package, const Version& v) const;
  /// Throws UnknownPackage / UnknownVersion.
  Manifest manifest(std::string_view package, const Version& v) const;
  /// Verifies the stored digest, then reads and parses the release's
  /// sources (and tests when asked).
  std::vector<minilang::SourceFile> sources(std::string_view package, const Version& v,
                                            bool with_tests = false) const;
  VersionRecord record(std::string_view package, const Version& v) const;

 private:
  std::filesystem::path package_dir_of(std::string_view package, const Version& v) const;

  std::filesystem::path root_;
};

/// Content digest of a package directory as the registry stores it.
std::string content_digest(const std::filesystem::path& dir, const Manifest& m);

/// Reads and parses a list of package-relative MiniLang files.
std::vector<minilang::SourceFile> read_sources(const std::filesystem::path& dir,
                                               const std::vector<std::string>& files);

}  // namespace updcheck::registry
