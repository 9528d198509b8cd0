#include <doctest.h>

#include <memory>

#include "updcheck/error.hpp"
#include "updcheck/minilang/parser.hpp"
#include "updcheck/minilang/printer.hpp"
#include "updcheck/minilang/semantic.hpp"

using namespace updcheck;
using namespace updcheck::minilang;

namespace {

const char* kP1 = R"(package p1;

class A {
    static fn a() -> int {
        return 0;
    }

    static fn v(a: int) -> bool {
        if (a > 0) {
            return true;
        }
        return false;
    }
}
)";

Program program_of(std::initializer_list<std::pair<const char*, const char*>> pkgs) {
  Program p;
  bool first = true;
  for (auto [name, src] : pkgs) {
    PackageUnit u;
    u.name = name;
    u.version = "1.0.0";
    u.origin = first ? Origin::Client : Origin::DirectDep;
    u.sources.push_back({"src/main.ml0", std::make_shared<const ModuleAst>(parse(src))});
    p.packages.push_back(std::move(u));
    first = false;
  }
  return p;
}

}  // namespace

TEST_CASE("method of a class gets a package-qualified name") {
  ModuleAst m = parse(kP1);
  REQUIRE(m.classes.size() == 1);
  const FunctionDecl& a = m.classes[0].methods[0];
  CHECK(a.qualified_name == "p1.A.a");
  REQUIRE(a.body.size() == 1);
  const auto* ret = a.body[0].as<ReturnStmt>();
  REQUIRE(ret);
  REQUIRE(ret->value);
  REQUIRE(ret->value->as<IntLit>());
  CHECK(ret->value->as<IntLit>()->value == 0);
}

TEST_CASE("module with only a package clause") {
  ModuleAst m = parse("package p;");
  CHECK(m.package_name == "p");
  CHECK(m.classes.empty());
  CHECK(m.interfaces.empty());
  CHECK(m.functions.empty());
  CHECK(m.imports.empty());
}

TEST_CASE("comments and whitespace do not reach the AST") {
  ModuleAst a = parse("package p; fn f(x: int) -> int { return x + 1; }");
  ModuleAst b = parse(R"(
    // leading comment
    package p;   /* block
                    comment */
    fn f(x: int) -> int {
        return x   +   1; // trailing
    }
  )");
  CHECK(structurally_equal(a, b));
}

TEST_CASE("pretty printer keeps both declarations and round-trips") {
  ModuleAst m = parse(kP1);
  std::string text = pretty_print(m);
  CHECK(text.find("fn a()") != std::string::npos);
  CHECK(text.find("fn v(a: int)") != std::string::npos);
  CHECK(structurally_equal(parse(text), m));
}

TEST_CASE("printer inserts parentheses only where precedence requires") {
  ModuleAst m = parse(R"(package p;
fn f(a: int, b: int, c: bool) -> int {
    var x: int = (a + b) * (a - b) - -a;
    var y: int = a - (b - a);
    var z: bool = (a < b) == c;
    var w: bool = !(c && c) || c ^ (c || c);
    return abs(x + y) % (a / b);
})");
  std::string text = pretty_print(m);
  CHECK(text.find("(a + b) * (a - b) - -a") != std::string::npos);
  CHECK(text.find("a - (b - a)") != std::string::npos);
  CHECK(text.find("a < b == c") != std::string::npos);
  CHECK(text.find("c ^ (c || c)") != std::string::npos);
  CHECK(structurally_equal(parse(text), m));
}

TEST_CASE("else-if chains round-trip") {
  ModuleAst m = parse(R"(package p;
fn sign(x: int) -> int {
    if (x > 0) { return 1; } else if (x < 0) { return -1; } else { return 0; }
})");
  CHECK(structurally_equal(parse(pretty_print(m)), m));
}

TEST_CASE("statement spans lie within the enclosing function") {
  ModuleAst m = parse(kP1);
  for (const auto* f : m.all_functions()) {
    for (const auto& s : f->body) {
      CHECK(f->span <= s.span);
      CHECK(s.span <= f->end);
    }
  }
}

TEST_CASE("receiver calls and static calls are told apart by scope") {
  ModuleAst m = parse(R"(package p;
interface I { fn m() -> int; }
fn f(i: I) -> int { return i.m() + g(); }
fn g() -> int { return 1; })");
  const auto& ret = *m.functions[0].body[0].as<ReturnStmt>()->value;
  const auto* sum = ret.as<BinaryExpr>();
  REQUIRE(sum);
  CHECK(sum->lhs->as<MethodCallExpr>());
  CHECK(sum->rhs->as<CallExpr>());
}

TEST_CASE("syntax errors carry line and column") {
  try {
    parse("package p;\nfn f() {\n  return 1 +;\n}");
    FAIL("expected SyntaxError");
  } catch (const SyntaxError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 13);
  }
  CHECK_THROWS_AS(parse("package p; fn f() { x.y; }"), SyntaxError);
  CHECK_THROWS_AS(parse("package p; fn f() { 1 = 2; }"), SyntaxError);
  CHECK_THROWS_AS(parse("package p; fn f() -> bool { return 1 < 2 < 3; }"), SyntaxError);
  CHECK_THROWS_AS(parse("package p; import p;"), SyntaxError);
  CHECK_THROWS_AS(parse("package p; fn f() { return 99999999999999999999; }"), SyntaxError);
  CHECK_THROWS_AS(parse("package p; /* open"), SyntaxError);
}

TEST_CASE("duplicate definitions are rejected") {
  CHECK_THROWS_AS(parse("package p; fn f() {} fn f() {}"), DuplicateDefinition);
  CHECK_THROWS_AS(parse("package p; class C {} fn C() {}"), DuplicateDefinition);
  CHECK_THROWS_AS(parse("package p; import q; import q;"), DuplicateDefinition);
  CHECK_THROWS_AS(parse("package p; fn f(a: int, a: int) {}"), DuplicateDefinition);
  CHECK_THROWS_AS(parse("package p; fn f(a: int) { var a: int = 1; }"), DuplicateDefinition);
  CHECK_THROWS_AS(parse("package p; class C { var x: int; fn x() {} }"), DuplicateDefinition);
}

TEST_CASE("checker resolves static calls across imported packages") {
  auto model = SemanticModel::check(program_of({
      {"client", "package client; import p1; fn run() -> bool { return A.v(A.a()); }"},
      {"p1", kP1},
  }));
  const FunctionInfo* run = model->function("client.run");
  REQUIRE(run);
  const auto& call = *run->decl->body[0].as<ReturnStmt>()->value;
  CHECK(model->info(call).target == model->function("p1.A.v"));
  CHECK(model->type_of(call).is_bool());
  CHECK(model->function("p1.A.a")->package->name == "p1");
}

TEST_CASE("checker rejects ill-typed programs") {
  auto reject = [](const char* src) {
    CHECK_THROWS_AS(SemanticModel::check(program_of({{"p", src}})), TypeError);
  };
  reject("package p; fn f() -> int { return true; }");
  reject("package p; fn f() -> int { var x: int = 1; }");
  reject("package p; fn f() -> bool { return 1 && true; }");
  reject("package p; fn f() -> bool { return true < false; }");
  reject("package p; fn f() { if (1) { } }");
  reject("package p; fn f() { g(); }");
  reject("package p; fn f() { y = 1; }");
  reject("package p; fn f(x: int) { x = true; }");
  reject("package p; class C { fn m() {} } fn f() { C.m(); }");
  reject("package p; interface I { fn m() -> int; } class C implements I { fn m() -> bool { return true; } }");
  reject("package p; interface I { fn m(); } class C implements I { }");
  reject("package p; class C extends D {} class D extends C {}");
  reject("package p; class C { var x: int; } fn f(c: C) -> bool { return c.y; }");
  reject("package p; fn f() { var x: int = std.nope(1); }");
  reject("package p; fn f() { return 1; }");
}

TEST_CASE("test functions must be static, parameterless and void") {
  Program p = program_of({{"client", "package client; fn helper() {}"}});
  p.packages[0].tests.push_back(
      {"tests/t.ml0", std::make_shared<const ModuleAst>(
                          parse("package client; fn test_x(a: int) {}"))});
  CHECK_THROWS_AS(SemanticModel::check(p), TypeError);
}

TEST_CASE("class hierarchy: inheritance, overriding and interface subtypes") {
  auto model = SemanticModel::check(program_of({{"p", R"(package p;
interface Shape { fn area() -> int; }
class Square implements Shape {
    var side: int;
    fn area() -> int { return self.side * self.side; }
}
class Cube extends Square {
    fn area() -> int { return 6 * self.side * self.side; }
}
class Circle implements Shape {
    fn area() -> int { return 3; }
}
fn total(s: Shape) -> int { return s.area(); }
)"}}));
  const ClassInfo* cube = model->class_named("p.Cube");
  REQUIRE(cube);
  CHECK(cube->field_slot("side") == 0);
  CHECK(cube->vtable.at("area")->qualified_name == "p.Cube.area");
  auto subs = model->subtypes_of(Type::object("p.Shape"));
  REQUIRE(subs.size() == 3);
  CHECK(subs[0]->qualified_name == "p.Circle");
  CHECK(subs[1]->qualified_name == "p.Cube");
  CHECK(subs[2]->qualified_name == "p.Square");
}
