#include "updcheck/registry/registry.hpp"

#include <fcntl.h>
#include <openssl/evp.h>
#include <sys/file.h>
#include <unistd.h>

#include <algorithm>
#include <fstream>
#include <memory>
#include <sstream>

#include "updcheck/error.hpp"
#include "updcheck/minilang/parser.hpp"

namespace fs = std::filesystem;

namespace updcheck::registry {

namespace {

constexpr const char* kDigestFile = "content.sha256";

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& data) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  out << data;
  if (!out) throw Error(ErrorKind::Io, "cannot write " + p.string());
}

// Exclusive advisory lock on a package directory for the duration of a
// publish.
class PackageLock {
 public:
  explicit PackageLock(const fs::path& file) {
    fs::create_directories(file.parent_path());
    fd_ = ::open(file.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0 || ::flock(fd_, LOCK_EX) != 0) {
      throw Error(ErrorKind::Io, "cannot lock " + file.string());
    }
  }
  ~PackageLock() {
    if (fd_ >= 0) {
      ::flock(fd_, LOCK_UN);
      ::close(fd_);
    }
  }
  PackageLock(const PackageLock&) = delete;
  PackageLock& operator=(const PackageLock&) = delete;

 private:
  int fd_ = -1;
};

struct DigestCtx {
  DigestCtx() : ctx(EVP_MD_CTX_new()) { EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr); }
  ~DigestCtx() { EVP_MD_CTX_free(ctx); }
  void update(std::string_view s) {
    EVP_DigestUpdate(ctx, s.data(), s.size());
    EVP_DigestUpdate(ctx, "\0", 1);
  }
  std::string hex() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
      out += digits[md[i] >> 4];
      out += digits[md[i] & 15];
    }
    return out;
  }
  EVP_MD_CTX* ctx;
};

}  // namespace

std::string content_digest(const fs::path& dir, const Manifest& m) {
  std::vector<std::string> files = m.sources;
  files.insert(files.end(), m.tests.begin(), m.tests.end());
  std::sort(files.begin(), files.end());
  DigestCtx d;
  d.update(manifest_json(m));
  for (const auto& f : files) {
    d.update(f);
    d.update(read_file(dir / f));
  }
  return d.hex();
}

std::vector<minilang::SourceFile> read_sources(const fs::path& dir,
                                               const std::vector<std::string>& files) {
  std::vector<minilang::SourceFile> out;
  for (const auto& f : files) {
    std::string text = read_file(dir / f);
    out.push_back({f, std::make_shared<const minilang::ModuleAst>(minilang::parse(text, f))});
  }
  return out;
}

Registry::Registry(fs::path root) : root_(std::move(root)) {
  if (!fs::is_directory(root_)) {
    throw Error(ErrorKind::Io, "registry directory " + root_.string() + " does not exist");
  }
}

Registry Registry::init(const fs::path& root) {
  fs::create_directories(root);
  return Registry(root);
}

VersionRecord Registry::publish(const fs::path& package_dir) const {
  Manifest m = load_manifest(package_dir / "manifest.json");
  for (const auto& f : m.sources) {
    if (!fs::is_regular_file(package_dir / f)) {
      throw Error(ErrorKind::InvalidManifest, "invalid manifest: missing source " + f);
    }
  }
  for (const auto& f : m.tests) {
    if (!fs::is_regular_file(package_dir / f)) {
      throw Error(ErrorKind::InvalidManifest, "invalid manifest: missing test file " + f);
    }
  }
  // Every file must parse and belong to the manifest's package.
  std::vector<std::string> all = m.sources;
  all.insert(all.end(), m.tests.begin(), m.tests.end());
  for (const auto& sf : read_sources(package_dir, all)) {
    if (sf.ast->package_name != m.name) {
      throw Error(ErrorKind::InvalidManifest,
                  "invalid manifest: " + sf.path + " declares package '" +
                      sf.ast->package_name + "', expected '" + m.name + "'");
    }
  }

  PackageLock lock(root_ / m.name / ".lock");
  fs::path dest = package_dir_of(m.name, m.version);
  if (fs::exists(dest)) {
    throw Error(ErrorKind::VersionAlreadyPublished,
                m.name + "@" + m.version.str() + " is already published");
  }
  fs::path staging = root_ / m.name / (".staging-" + m.version.str());
  fs::remove_all(staging);
  write_file(staging / "manifest.json", manifest_json(m));
  for (const auto& f : all) write_file(staging / f, read_file(package_dir / f));
  std::string digest = content_digest(staging, m);
  write_file(staging / kDigestFile, digest + "\n");
  fs::rename(staging, dest);
  return {m.name, m.version, digest, dest};
}

fs::path Registry::package_dir_of(std::string_view package, const Version& v) const {
  return root_ / std::string(package) / v.str();
}

std::vector<std::string> Registry::list_packages() const {
  std::vector<std::string> out;
  for (const auto& e : fs::directory_iterator(root_)) {
    std::string name = e.path().filename().string();
    if (e.is_directory() && valid_package_name(name)) out.push_back(name);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Version> Registry::list_versions(std::string_view package) const {
  std::vector<Version> out;
  if (!valid_package_name(package)) return out;
  fs::path dir = root_ / std::string(package);
  if (!fs::is_directory(dir)) return out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_directory() || !fs::exists(e.path() / "manifest.json")) continue;
    try {
      out.push_back(parse_version(e.path().filename().string()));
    } catch (const Error&) {
      // staging and other non-release directories
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool Registry::has(std::string_view package, const Version& v) const {
  auto vs = list_versions(package);
  return std::find(vs.begin(), vs.end(), v) != vs.end();
}

fs::path Registry::package_dir(std::string_view package, const Version& v) const {
  if (list_versions(package).empty()) {
    throw Error(ErrorKind::UnknownPackage,
                "package '" + std::string(package) + "' is not in the registry");
  }
  if (!has(package, v)) {
    throw Error(ErrorKind::UnknownVersion,
                std::string(package) + "@" + v.str() + " is not in the registry");
  }
  return package_dir_of(package, v);
}

Manifest Registry::manifest(std::string_view package, const Version& v) const {
  Manifest m = load_manifest(package_dir(package, v) / "manifest.json");
  if (m.name != package || m.version != v) {
    throw Error(ErrorKind::InvalidManifest,
                "registry entry " + std::string(package) + "@" + v.str() +
                    " holds a manifest for " + m.name + "@" + m.version.str());
  }
  return m;
}

VersionRecord Registry::record(std::string_view package, const Version& v) const {
  fs::path dir = package_dir(package, v);
  Manifest m = manifest(package, v);
  std::string digest = content_digest(dir, m);
  if (fs::exists(dir / kDigestFile)) {
    std::string stored = read_file(dir / kDigestFile);
    while (!stored.empty() && (stored.back() == '\n' || stored.back() == ' ')) {
      stored.pop_back();
    }
    if (stored != digest) {
      throw Error(ErrorKind::Io, std::string(package) + "@" + v.str() +
                                     " does not match its content digest");
    }
  }
  return {m.name, m.version, digest, dir};
}

std::vector<minilang::SourceFile> Registry::sources(std::string_view package,
                                                    const Version& v,
                                                    bool with_tests) const {
  VersionRecord rec = record(package, v);
  Manifest m = manifest(package, v);
  std::vector<std::string> files = m.sources;
  if (with_tests) files.insert(files.end(), m.tests.begin(), m.tests.end());
  return read_sources(rec.path, files);
}

}  // namespace updcheck::registry
