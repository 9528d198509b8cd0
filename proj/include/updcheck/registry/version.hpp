#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace updcheck::registry {

struct Version {
  std::uint64_t major = 0;
  std::uint64_t minor = 0;
  std::uint64_t patch = 0;

  friend auto operator<=>(const Version&, const Version&) = default;
  friend bool operator==(const Version&, const Version&) = default;

  std::string str() const;
};

/// Parses `MAJOR.MINOR.PATCH`. Throws Error(InvalidManifest) otherwise.
Version parse_version(std::string_view text);

enum class CompareOp { Ge, Gt, Le, Lt, Eq };

struct Comparator {
  CompareOp op;
  Version version;

  bool matches(const Version& v) const;
  std::string str() const;
  friend bool operator==(const Comparator&, const Comparator&) = default;
};

/// Conjunction of comparators; the empty range admits every version.
struct VersionRange {
  std::vector<Comparator> comparators;

  bool empty() const { return comparators.empty(); }
  std::string str() const;
  friend bool operator==(const VersionRange&, const VersionRange&) = default;
};

/// Parses space-separated comparators such as ">=1.0.0 <1.5.0". A bare
/// version means `==`. Throws Error(InvalidManifest) on malformed input.
VersionRange parse_range(std::string_view text);

bool satisfies(const Version& v, const VersionRange& r);

/// Range admitting exactly the versions both inputs admit.
VersionRange intersect(const VersionRange& a, const VersionRange& b);

}  // namespace updcheck::registry
