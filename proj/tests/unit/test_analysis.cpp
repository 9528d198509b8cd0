#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "support/programs.hpp"
#include "updcheck/analysis/callgraph.hpp"
#include "updcheck/analysis/diffing.hpp"
#include "updcheck/analysis/impact.hpp"
#include "updcheck/error.hpp"

using namespace updcheck;
using namespace updcheck::analysis;
using updcheck::testing::check;
using updcheck::testing::listing;
using updcheck::testing::parse_files;
using minilang::Origin;
using registry::Version;

namespace {

using Pairs = std::set<std::pair<std::string, std::string>>;

Pairs edge_pairs(const CallGraph& cg) {
  Pairs out;
  for (const auto& e : cg.edges()) out.insert({e.from, e.to});
  return out;
}

ChangeSet diff_texts(const char* old_text, const char* new_text) {
  return diff_library("p", Version{1, 0, 0}, Version{2, 0, 0},
                      parse_files({{"src/p.ml0", old_text}}), parse_files({{"src/p.ml0", new_text}}));
}

std::set<ChangeKind> kinds_of(const ChangeSet& cs, std::string_view fn) {
  const FunctionChange* c = cs.find(fn);
  REQUIRE(c);
  return c->kinds;
}

// Random layered graph: client nodes c0..c2 and library nodes d0..dn, edges
// only from lower to higher layer so every graph is acyclic.
CallGraph random_graph(std::mt19937& rng, int lib_nodes, double density) {
  std::vector<CallGraphNode> nodes;
  std::vector<std::string> order;
  for (int i = 0; i < 3; ++i) {
    nodes.push_back({"client.c" + std::to_string(i), "client", "1.0.0", Origin::Client});
    order.push_back(nodes.back().id);
  }
  for (int i = 0; i < lib_nodes; ++i) {
    nodes.push_back({"lib.d" + std::to_string(i), "lib", "1.0.0", Origin::DirectDep});
    order.push_back(nodes.back().id);
  }
  std::bernoulli_distribution coin(density);
  std::vector<CallEdge> edges;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (coin(rng)) edges.push_back({order[i], order[j], Dispatch::Static, {"f", int(i), int(j)}});
    }
  }
  return CallGraph(nodes, edges);
}

// Every simple path from any root to `target`, by plain DFS over the edge list.
std::vector<std::vector<std::string>> brute_paths(const CallGraph& cg,
                                                  const std::vector<std::string>& roots,
                                                  const std::string& target) {
  std::vector<std::vector<std::string>> out;
  std::vector<std::string> stack;
  std::function<void(const std::string&)> go = [&](const std::string& n) {
    if (std::find(stack.begin(), stack.end(), n) != stack.end()) return;
    stack.push_back(n);
    if (n == target) out.push_back(stack);
    for (const auto& e : cg.edges()) {
      if (e.from == n) go(e.to);
    }
    stack.pop_back();
  };
  for (const auto& r : roots) go(r);
  return out;
}

ChangeSet changes_of(const std::vector<std::string>& fns) {
  ChangeSet cs{"lib", Version{1, 0, 0}, Version{1, 1, 0}, {}};
  for (const auto& f : fns) cs.changes.push_back({f, {ChangeKind::DataFlow}, {}});
  std::sort(cs.changes.begin(), cs.changes.end(),
            [](const auto& a, const auto& b) { return a.function < b.function; });
  return cs;
}

}  // namespace

TEST_CASE("call graph of the worked example") {
  auto model = check(listing());
  CallGraph cg = build_call_graph(*model);
  Pairs pairs = edge_pairs(cg);
  for (auto [from, to] : std::vector<std::pair<const char*, const char*>>{
           {"client.Main.main", "p2.B.b"},
           {"client.Main.main", "p2.B.z"},
           {"p2.B.b", "p1.A.v"},
           {"p2.B.b", "p1.A.a"}}) {
    CHECK(pairs.count({from, to}));
  }
  CHECK(pairs.size() == 4);
  // Test functions are not nodes; every declared function is, reachable or not.
  CHECK_FALSE(cg.node("client.test_b"));
  CHECK(cg.node("p1.A.a")->origin == Origin::TransitiveDep);
  CHECK(cg.node("p2.B.z")->version == "1.0.0");

  CHECK(direct_call_sites(cg) == Pairs{{"client.Main.main", "p2.B.b"}, {"client.Main.main", "p2.B.z"}});
  auto deps = reachable_dependency_functions(cg, cg.client_roots());
  CHECK(deps.direct == std::set<std::string>{"p2.B.b", "p2.B.z"});
  CHECK(deps.transitive == std::set<std::string>{"p1.A.a", "p1.A.v"});
  CHECK(reachable_dependency_functions(cg, {}).direct.empty());

  auto updated = check(listing(testing::kP1v1, testing::kP2v2));
  CallGraph cg2 = build_call_graph(*updated);
  CHECK(reachable_dependency_functions(cg2, cg2.client_roots()).direct.count("p2.B.make_false"));
}

TEST_CASE("call sites are recorded on edges") {
  auto model = check(listing());
  CallGraph cg = build_call_graph(*model);
  auto it = std::find_if(cg.edges().begin(), cg.edges().end(),
                         [](const CallEdge& e) { return e.to == "p1.A.a"; });
  REQUIRE(it != cg.edges().end());
  CHECK(it->site.file == "src/B.ml0");
  CHECK(it->site.line == 7);
  CHECK(it->dispatch == Dispatch::Static);
}

TEST_CASE("interface calls link to every implementation") {
  auto model = check({{"client", Origin::Client, {{"src/m.ml0", R"(package client;
import lib;
fn run() -> int {
    var c: C1 = new C1();
    var i: I = c;
    return i.m();
})"}}},
                      {"lib", Origin::DirectDep, {{"src/l.ml0", R"(package lib;
interface I { fn m() -> int; }
class C1 implements I { fn m() -> int { return 1; } }
class C2 implements I { fn m() -> int { return 2; } }
class C3 { fn m() -> int { return 3; } }
)"}}}});
  CallGraph cg = build_call_graph(*model);
  std::vector<CallEdge> from_run;
  for (const auto& e : cg.edges()) {
    if (e.from == "client.run") from_run.push_back(e);
  }
  REQUIRE(from_run.size() == 2);
  CHECK(from_run[0].to == "lib.C1.m");
  CHECK(from_run[1].to == "lib.C2.m");
  for (const auto& e : from_run) {
    CHECK(e.dispatch == Dispatch::Interface);
    CHECK(e.site == from_run[0].site);
  }
  CHECK(direct_call_sites(cg).size() == 2);
}

TEST_CASE("virtual calls on a class cover its overriding subclasses") {
  auto model = check({{"client", Origin::Client, {{"src/m.ml0", R"(package client;
class Base { fn f() -> int { return 0; } }
class Mid extends Base { fn f() -> int { return 1; } }
class Leaf extends Mid { }
class Other extends Base { fn f() -> int { return 2; } }
fn call(m: Mid) -> int { return m.f(); }
fn call_base(b: Base) -> int { return b.f(); }
)"}}}});
  CallGraph cg = build_call_graph(*model);
  Pairs p = edge_pairs(cg);
  CHECK(p.count({"client.call", "client.Mid.f"}));
  CHECK_FALSE(p.count({"client.call", "client.Base.f"}));
  CHECK_FALSE(p.count({"client.call", "client.Other.f"}));
  CHECK(p.count({"client.call_base", "client.Base.f"}));
  CHECK(p.count({"client.call_base", "client.Mid.f"}));
  CHECK(p.count({"client.call_base", "client.Other.f"}));
}

TEST_CASE("packages that never call each other share no edges") {
  auto model = check({{"client", Origin::Client, {{"src/m.ml0", "package client; fn f() -> int { return g(); } fn g() -> int { return 1; }"}}},
                      {"lib", Origin::DirectDep, {{"src/l.ml0", "package lib; fn h() -> int { return k(); } fn k() -> int { return 2; }"}}}});
  CallGraph cg = build_call_graph(*model);
  for (const auto& e : cg.edges()) {
    CHECK(cg.node(e.from)->package == cg.node(e.to)->package);
  }
  CHECK(direct_call_sites(cg).empty());
}

TEST_CASE("call graph does not depend on file order") {
  const char* a = "package lib; fn f() -> int { return g(); }";
  const char* b = "package lib; fn g() -> int { return std.max(1, 2); }";
  auto m1 = check({{"client", Origin::Client, {{"src/c.ml0", "package client; import lib; fn r() -> int { return f(); }"}}},
                   {"lib", Origin::DirectDep, {{"src/a.ml0", a}, {"src/b.ml0", b}}}});
  auto m2 = check({{"client", Origin::Client, {{"src/c.ml0", "package client; import lib; fn r() -> int { return f(); }"}}},
                   {"lib", Origin::DirectDep, {{"src/b.ml0", b}, {"src/a.ml0", a}}}});
  CHECK(callgraph_json(build_call_graph(*m1)) == callgraph_json(build_call_graph(*m2)));
  // Builtins are not nodes.
  CHECK(edge_pairs(build_call_graph(*m1)).size() == 2);
}

TEST_CASE("reachability equals the transitive closure of the edge list") {
  // Diamond through interface dispatch, checked against Warshall's closure.
  auto model = check({{"client", Origin::Client, {{"src/m.ml0", R"(package client;
import top;
fn main() -> int { return T.go(new Left()) + T.go(new Right()); }
)"}}},
                      {"top", Origin::DirectDep, {{"src/t.ml0", R"(package top;
import base;
interface Side { fn val() -> int; }
class Left implements Side { fn val() -> int { return Base.shared() + 1; } }
class Right implements Side { fn val() -> int { return Base.shared() * 2; } }
class T { static fn go(s: Side) -> int { return s.val(); } }
)"}}},
                      {"base", Origin::TransitiveDep, {{"src/b.ml0", R"(package base;
class Base {
    static fn shared() -> int { return leaf(); }
    static fn leaf() -> int { return 7; }
    static fn unused() -> int { return 0; }
}
)"}}}});
  CallGraph cg = build_call_graph(*model);

  std::vector<std::string> ids;
  for (const auto& [id, n] : cg.nodes()) ids.push_back(id);
  std::size_t n = ids.size();
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  auto idx = [&](const std::string& s) {
    return std::size_t(std::find(ids.begin(), ids.end(), s) - ids.begin());
  };
  for (std::size_t i = 0; i < n; ++i) reach[i][i] = true;
  for (const auto& e : cg.edges()) reach[idx(e.from)][idx(e.to)] = true;
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (reach[i][k] && reach[k][j]) reach[i][j] = true;

  auto got = reachable(cg, {"client.main"});
  std::set<std::string> expected;
  for (std::size_t j = 0; j < n; ++j) {
    if (reach[idx("client.main")][j]) expected.insert(ids[j]);
  }
  CHECK(got == expected);
  CHECK_FALSE(got.count("base.Base.unused"));
  auto deps = reachable_dependency_functions(cg, {"client.main"});
  CHECK(deps.transitive == std::set<std::string>{"base.Base.leaf", "base.Base.shared"});
}

TEST_CASE("call graph JSON round-trips") {
  auto model = check(listing());
  CallGraph cg = build_call_graph(*model);
  std::string text = callgraph_json(cg);
  CHECK(callgraph_json(callgraph_from_json(text)) == text);
  CHECK(text.find("\"schema_version\": 1") != std::string::npos);
}

TEST_CASE("call graph rejects dangling edges") {
  CHECK_THROWS_AS(CallGraph({{"a", "p", "1.0.0", Origin::Client}}, {{"a", "b", Dispatch::Static, {}}}),
                  Error);
}

// ---- diffing

TEST_CASE("worked example changes are classified per function") {
  auto p1 = diff_library("p1", Version{1, 0, 0}, Version{2, 0, 0},
                         parse_files({{"src/A.ml0", testing::kP1v1}}),
                         parse_files({{"src/A.ml0", testing::kP1v2}}));
  CHECK(p1.changes.size() == 2);
  CHECK(kinds_of(p1, "p1.A.a") == std::set{ChangeKind::DataFlow});
  CHECK(kinds_of(p1, "p1.A.v") == std::set{ChangeKind::BranchCondition});

  auto p2 = diff_library("p2", Version{1, 0, 0}, Version{2, 0, 0},
                         parse_files({{"src/B.ml0", testing::kP2v1}}),
                         parse_files({{"src/B.ml0", testing::kP2v2}}));
  CHECK(p2.changes.size() == 2);
  CHECK(kinds_of(p2, "p2.B.z") == std::set{ChangeKind::ControlFlowPath});
  CHECK(kinds_of(p2, "p2.B.make_false") == std::set{ChangeKind::Added});
}

TEST_CASE("identical or reformatted sources give an empty change set") {
  CHECK(diff_texts(testing::kP1v1, testing::kP1v1).empty());
  CHECK(diff_texts("package p; fn f(x: int) -> int { return x + 1; }",
                   "package p;\n// a comment\nfn f(x: int) -> int {\n    return x+1;   /* note */\n}\n")
            .empty());
}

TEST_CASE("statement-level edits") {
  const char* base = R"(package p;
fn f(x: int) -> int {
    var a: int = x + 1;
    var b: int = x * 2;
    return a + b;
})";
  SUBCASE("moving a statement") {
    auto cs = diff_texts(base, R"(package p;
fn f(x: int) -> int {
    var b: int = x * 2;
    var a: int = x + 1;
    return a + b;
})");
    CHECK(kinds_of(cs, "p.f") == std::set{ChangeKind::ControlFlowMove});
  }
  SUBCASE("inserting an if") {
    auto cs = diff_texts(base, R"(package p;
fn f(x: int) -> int {
    var a: int = x + 1;
    if (a > 3) { return 0; }
    var b: int = x * 2;
    return a + b;
})");
    CHECK(kinds_of(cs, "p.f") == std::set{ChangeKind::ControlFlowPath});
    CHECK(cs.find("p.f")->edits.size() == 1);
    CHECK(cs.find("p.f")->edits[0].op == EditOp::Insert);
  }
  SUBCASE("deleting a plain statement") {
    auto cs = diff_texts(base, R"(package p;
fn f(x: int) -> int {
    var a: int = x + 1;
    return a;
})");
    CHECK(kinds_of(cs, "p.f").count(ChangeKind::DataFlow));
  }
  SUBCASE("inserting a call") {
    auto cs = diff_texts(R"(package p;
fn g() -> int { return 1; }
fn f(x: int) -> int { return x; })",
                         R"(package p;
fn g() -> int { return 1; }
fn f(x: int) -> int { return x + g(); })");
    CHECK(kinds_of(cs, "p.f") == std::set{ChangeKind::ControlFlowPath});
  }
  SUBCASE("while condition") {
    auto cs = diff_texts("package p; fn f(x: int) { while (x > 0) { x = x - 1; } }",
                         "package p; fn f(x: int) { while (x >= 0) { x = x - 1; } }");
    CHECK(kinds_of(cs, "p.f") == std::set{ChangeKind::BranchCondition});
  }
  SUBCASE("signature change") {
    auto cs = diff_texts("package p; fn f(x: int) -> int { return x; }",
                         "package p; fn f(x: bool) -> int { return 1; }");
    CHECK(kinds_of(cs, "p.f").count(ChangeKind::SignatureChanged));
    CHECK(cs.changes.size() == 1);
  }
  SUBCASE("removed function") {
    auto cs = diff_texts("package p; fn f() {} fn g() {}", "package p; fn f() {}");
    CHECK(kinds_of(cs, "p.g") == std::set{ChangeKind::Removed});
  }
}

TEST_CASE("change kinds are recomputable from the edits and membership is symmetric") {
  const std::vector<const char*> versions = {
      testing::kP2v1, testing::kP2v2,
      R"(package p2;
import p1;
class B {
    static fn b() -> int {
        var x: int = A.a();
        var y: int = 1;
        while (y < 3) { y = y + 1; }
        return x - y;
    }
    private static fn helper(k: int) -> bool { return k == 2 || !(k < 0); }
}
)",
      R"(package p2;
import p1;
class B {
    static fn b() -> int { return 3; }
    static fn z() -> bool { return true && false; }
}
)"};
  for (const char* a : versions) {
    for (const char* b : versions) {
      auto ab = diff_library("p2", Version{1, 0, 0}, Version{2, 0, 0}, parse_files({{"f", a}}),
                             parse_files({{"f", b}}));
      auto ba = diff_library("p2", Version{2, 0, 0}, Version{1, 0, 0}, parse_files({{"f", b}}),
                             parse_files({{"f", a}}));
      std::set<std::string> fa, fb;
      for (const auto& c : ab.changes) {
        fa.insert(c.function);
        CHECK_FALSE(c.kinds.empty());
        CHECK(classify(c.edits) == c.kinds);
        if (c.kinds.count(ChangeKind::Added) || c.kinds.count(ChangeKind::Removed)) {
          CHECK(c.kinds.size() == 1);
        }
        if (c.kinds == std::set{ChangeKind::Added}) {
          CHECK(kinds_of(ba, c.function) == std::set{ChangeKind::Removed});
        }
      }
      for (const auto& c : ba.changes) fb.insert(c.function);
      CHECK(fa == fb);
      CHECK(changeset_from_json(changeset_json(ab)) == ab);
      CHECK(std::is_sorted(ab.changes.begin(), ab.changes.end(),
                           [](const auto& x, const auto& y) { return x.function < y.function; }));
    }
  }
}

// ---- impact

TEST_CASE("worked example verdicts") {
  auto model = check(listing());
  CallGraph cg = build_call_graph(*model);
  auto roots = cg.client_roots();
  auto p1 = diff_library("p1", Version{1, 0, 0}, Version{2, 0, 0},
                         parse_files({{"src/A.ml0", testing::kP1v1}}),
                         parse_files({{"src/A.ml0", testing::kP1v2}}));
  UpdateReport r = assess_impact(cg, roots, p1);
  CHECK(r.verdict == Verdict::Unsafe);
  REQUIRE(r.impacts.size() == 2);
  CHECK(r.impacts[0].path.stack == std::vector<std::string>{"client.Main.main", "p2.B.b", "p1.A.a"});
  CHECK(r.impacts[1].path.stack == std::vector<std::string>{"client.Main.main", "p2.B.b", "p1.A.v"});
  CHECK(r.impacts[0].path.dispatch == std::vector{Dispatch::Static, Dispatch::Static});

  auto p2 = diff_library("p2", Version{1, 0, 0}, Version{2, 0, 0},
                         parse_files({{"src/B.ml0", testing::kP2v1}}),
                         parse_files({{"src/B.ml0", testing::kP2v2}}));
  UpdateReport r2 = assess_impact(cg, roots, p2);
  CHECK(r2.verdict == Verdict::Unsafe);
  REQUIRE(r2.impacts.size() == 1);
  CHECK(r2.impacts[0].function == "p2.B.z");

  // client2 calls nothing in p2 and only an unchanged function of p1.
  auto model2 = check({{"client2", Origin::Client, {{"src/m.ml0", "package client2; import p1; fn main() -> bool { return A.v(3); }"}}},
                       {"p1", Origin::DirectDep, {{"src/A.ml0", testing::kP1v1}}}});
  CallGraph cg2 = build_call_graph(*model2);
  auto only_a = p1;
  only_a.changes.erase(only_a.changes.begin() + 1);  // keep p1.A.a
  CHECK(assess_impact(cg2, cg2.client_roots(), only_a).verdict == Verdict::Safe);
  CHECK(assess_impact(cg2, cg2.client_roots(), p1).verdict == Verdict::Unsafe);

  auto nouse = check({{"c", Origin::Client, {{"src/m.ml0", "package c; fn main() -> int { return 1; }"}}},
                      {"p1", Origin::DirectDep, {{"src/A.ml0", testing::kP1v1}}}});
  CallGraph cg3 = build_call_graph(*nouse);
  CHECK(assess_impact(cg3, cg3.client_roots(), p1).verdict == Verdict::Unused);
}

TEST_CASE("report JSON round-trips") {
  auto model = check(listing());
  CallGraph cg = build_call_graph(*model);
  auto p1 = diff_library("p1", Version{1, 0, 0}, Version{2, 0, 0},
                         parse_files({{"src/A.ml0", testing::kP1v1}}),
                         parse_files({{"src/A.ml0", testing::kP1v2}}));
  AssessOptions opts;
  opts.all_paths = true;
  UpdateReport r = assess_impact(cg, cg.client_roots(), p1, opts);
  r.client = "client";
  CHECK(report_from_json(report_json(r)) == r);
  r.runtime_ms = 1.5;
  CHECK(report_from_json(report_json(r)) == r);
}

TEST_CASE("shortest impact path on small graphs") {
  CallGraph cg({{"c.main", "c", "1.0.0", Origin::Client},
                {"l.x", "l", "1.0.0", Origin::DirectDep},
                {"l.y", "l", "1.0.0", Origin::DirectDep},
                {"l.t", "l", "1.0.0", Origin::DirectDep}},
               {{"c.main", "l.y", Dispatch::Static, {}},
                {"c.main", "l.x", Dispatch::Interface, {}},
                {"l.x", "l.t", Dispatch::Static, {}},
                {"l.y", "l.t", Dispatch::Static, {}}});
  auto p = shortest_impact_path(cg, {"c.main"}, "l.t");
  CHECK(p.stack == std::vector<std::string>{"c.main", "l.x", "l.t"});
  CHECK(p.dispatch == std::vector{Dispatch::Interface, Dispatch::Static});
  CHECK(shortest_impact_path(cg, {"c.main"}, "c.main").stack == std::vector<std::string>{"c.main"});
  CHECK_THROWS_AS(shortest_impact_path(cg, {"l.y"}, "l.x"), Error);
  CHECK(all_impact_paths(cg, {"c.main"}, "l.t").size() == 2);
  CHECK(all_impact_paths(cg, {"c.main"}, "l.t", 1).size() == 1);
}

TEST_CASE("shortest path and path enumeration agree with brute force") {
  std::mt19937 rng(20240611);
  for (int round = 0; round < 150; ++round) {
    CallGraph cg = random_graph(rng, 2 + round % 7, 0.35);
    auto roots = cg.client_roots();
    for (const auto& [id, n] : cg.nodes()) {
      auto paths = brute_paths(cg, roots, id);
      if (paths.empty()) {
        CHECK_THROWS_AS(shortest_impact_path(cg, roots, id), Error);
        continue;
      }
      auto best = *std::min_element(paths.begin(), paths.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
      });
      CHECK(shortest_impact_path(cg, roots, id).stack == best);
      std::sort(paths.begin(), paths.end());
      paths.erase(std::unique(paths.begin(), paths.end()), paths.end());
      auto all = all_impact_paths(cg, roots, id);
      std::vector<std::vector<std::string>> stacks;
      for (const auto& p : all) stacks.push_back(p.stack);
      CHECK(stacks == paths);
    }
  }
}

TEST_CASE("verdicts are monotone in the change set and follow reachability") {
  std::mt19937 rng(77);
  for (int round = 0; round < 200; ++round) {
    CallGraph cg = random_graph(rng, 6, 0.3);
    auto roots = cg.client_roots();
    auto live = reachable(cg, roots);
    bool used = std::any_of(live.begin(), live.end(),
                            [&](const std::string& id) { return cg.node(id)->package == "lib"; });

    std::vector<std::string> lib;
    for (const auto& [id, n] : cg.nodes()) {
      if (n.package == "lib") lib.push_back(id);
    }
    std::vector<std::string> small, large;
    std::bernoulli_distribution coin(0.3);
    for (const auto& f : lib) {
      bool in_small = coin(rng);
      if (in_small) small.push_back(f);
      if (in_small || coin(rng)) large.push_back(f);
    }
    Verdict vs = assess_impact(cg, roots, changes_of(small)).verdict;
    Verdict vl = assess_impact(cg, roots, changes_of(large)).verdict;
    if (vs == Verdict::Unsafe) CHECK(vl == Verdict::Unsafe);

    bool hit = std::any_of(small.begin(), small.end(), [&](const auto& f) { return live.count(f); });
    Verdict expected = !used ? Verdict::Unused : hit ? Verdict::Unsafe : Verdict::Safe;
    CHECK(vs == expected);
    CHECK(assess_impact(cg, roots, changes_of({})).verdict != Verdict::Unsafe);
  }
}

TEST_CASE("added functions alone never make an update unsafe, removed ones do") {
  CallGraph cg({{"c.main", "c", "1.0.0", Origin::Client}, {"l.f", "l", "1.0.0", Origin::DirectDep}},
               {{"c.main", "l.f", Dispatch::Static, {}}});
  ChangeSet added{"l", Version{1, 0, 0}, Version{1, 1, 0}, {{"l.g", {ChangeKind::Added}, {}}}};
  CHECK(assess_impact(cg, {"c.main"}, added).verdict == Verdict::Safe);
  ChangeSet removed{"l", Version{1, 0, 0}, Version{2, 0, 0}, {{"l.f", {ChangeKind::Removed}, {}}}};
  auto r = assess_impact(cg, {"c.main"}, removed);
  CHECK(r.verdict == Verdict::Unsafe);
  CHECK(r.impacts.at(0).kinds == std::set{ChangeKind::Removed});
}
