#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "updcheck/minilang/parser.hpp"
#include "updcheck/minilang/semantic.hpp"

namespace updcheck::testing {

using Files = std::vector<std::pair<std::string, std::string>>;

inline std::vector<minilang::SourceFile> parse_files(const Files& files) {
  std::vector<minilang::SourceFile> out;
  for (const auto& [path, text] : files) {
    out.push_back({path, std::make_shared<const minilang::ModuleAst>(minilang::parse(text, path))});
  }
  return out;
}

struct PackageSpec {
  std::string name;
  minilang::Origin origin = minilang::Origin::DirectDep;
  Files sources;
  Files tests;
  std::string version = "1.0.0";
};

/// In-memory program; the first package should be the client.
inline minilang::Program make_program(const std::vector<PackageSpec>& pkgs) {
  minilang::Program p;
  for (const auto& s : pkgs) {
    p.packages.push_back({s.name, s.version, s.origin, parse_files(s.sources), parse_files(s.tests)});
  }
  return p;
}

inline std::shared_ptr<const minilang::SemanticModel> check(const std::vector<PackageSpec>& pkgs) {
  return minilang::SemanticModel::check(make_program(pkgs));
}

// The worked example as in-memory sources, shared by several test files.
inline const char* kP1v1 = R"(package p1;
class A {
    static fn a() -> int { return 0; }
    static fn v(a: int) -> bool {
        if (a > 0) { return true; }
        return false;
    }
}
)";
inline const char* kP1v2 = R"(package p1;
class A {
    static fn a() -> int { return 1; }
    static fn v(a: int) -> bool {
        if (a == 0) { return true; }
        return false;
    }
}
)";
inline const char* kP2v1 = R"(package p2;
import p1;
class B {
    static fn b() -> int {
        var y: int = 1;
        if (A.v(y)) { y = y + 2; }
        var x: int = A.a();
        if (x > 0) { return 0; }
        return x + y;
    }
    static fn z() -> bool { return false; }
}
)";
inline const char* kP2v2 = R"(package p2;
import p1;
class B {
    static fn b() -> int {
        var y: int = 1;
        if (A.v(y)) { y = y + 2; }
        var x: int = A.a();
        if (x > 0) { return 0; }
        return x + y;
    }
    static fn z() -> bool { return make_false(); }
    static fn make_false() -> bool { return false; }
}
)";
inline const char* kClient = R"(package client;
import p2;
class Main {
    static fn main() -> int {
        var total: int = B.b();
        if (B.z()) { total = 0; }
        return total;
    }
}
)";
inline const char* kClientTest = R"(package client;
fn test_b() { assert Main.main() == 3; }
)";

inline std::vector<PackageSpec> listing(const char* p1 = kP1v1, const char* p2 = kP2v1) {
  return {{"client", minilang::Origin::Client, {{"src/Main.ml0", kClient}},
           {{"test/main_test.ml0", kClientTest}}},
          {"p2", minilang::Origin::DirectDep, {{"src/B.ml0", p2}}},
          {"p1", minilang::Origin::TransitiveDep, {{"src/A.ml0", p1}}}};
}

}  // namespace updcheck::testing
