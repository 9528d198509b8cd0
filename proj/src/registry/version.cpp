#include "updcheck/registry/version.hpp"

#include <algorithm>
#include <charconv>

#include "updcheck/error.hpp"

namespace updcheck::registry {

std::string Version::str() const {
  return std::to_string(major) + "." + std::to_string(minor) + "." +
         std::to_string(patch);
}

Version parse_version(std::string_view text) {
  Version v;
  std::uint64_t* parts[] = {&v.major, &v.minor, &v.patch};
  const char* p = text.data();
  const char* end = text.data() + text.size();
  for (int i = 0; i < 3; ++i) {
    if (p == end || *p < '0' || *p > '9') {
      throw Error(ErrorKind::InvalidManifest,
                  "malformed version '" + std::string(text) + "'");
    }
    auto [next, ec] = std::from_chars(p, end, *parts[i]);
    if (ec != std::errc()) {
      throw Error(ErrorKind::InvalidManifest,
                  "malformed version '" + std::string(text) + "'");
    }
    p = next;
    if (i < 2) {
      if (p == end || *p != '.') {
        throw Error(ErrorKind::InvalidManifest,
                    "malformed version '" + std::string(text) + "'");
      }
      ++p;
    }
  }
  if (p != end) {
    throw Error(ErrorKind::InvalidManifest,
                "malformed version '" + std::string(text) + "'");
  }
  return v;
}

bool Comparator::matches(const Version& v) const {
  switch (op) {
    case CompareOp::Ge: return v >= version;
    case CompareOp::Gt: return v > version;
    case CompareOp::Le: return v <= version;
    case CompareOp::Lt: return v < version;
    case CompareOp::Eq: return v == version;
  }
  return false;
}

std::string Comparator::str() const {
  static constexpr const char* names[] = {">=", ">", "<=", "<", "=="};
  return names[static_cast<int>(op)] + version.str();
}

std::string VersionRange::str() const {
  std::string out;
  for (const auto& c : comparators) {
    if (!out.empty()) out += ' ';
    out += c.str();
  }
  return out;
}

VersionRange parse_range(std::string_view text) {
  VersionRange r;
  std::size_t pos = 0;
  while (pos < text.size()) {
    if (text[pos] == ' ' || text[pos] == '\t') {
      ++pos;
      continue;
    }
    std::size_t end = text.find_first_of(" \t", pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view tok = text.substr(pos, end - pos);
    pos = end;

    Comparator c{CompareOp::Eq, {}};
    static constexpr std::pair<std::string_view, CompareOp> prefixes[] = {
        {">=", CompareOp::Ge}, {"<=", CompareOp::Le}, {"==", CompareOp::Eq},
        {">", CompareOp::Gt},  {"<", CompareOp::Lt},  {"=", CompareOp::Eq}};
    for (const auto& [prefix, op] : prefixes) {
      if (tok.starts_with(prefix)) {
        c.op = op;
        tok.remove_prefix(prefix.size());
        break;
      }
    }
    c.version = parse_version(tok);
    r.comparators.push_back(c);
  }
  return r;
}

bool satisfies(const Version& v, const VersionRange& r) {
  return std::all_of(r.comparators.begin(), r.comparators.end(),
                     [&](const Comparator& c) { return c.matches(v); });
}

VersionRange intersect(const VersionRange& a, const VersionRange& b) {
  VersionRange out = a;
  for (const auto& c : b.comparators) {
    if (std::find(out.comparators.begin(), out.comparators.end(), c) ==
        out.comparators.end()) {
      out.comparators.push_back(c);
    }
  }
  return out;
}

}  // namespace updcheck::registry
