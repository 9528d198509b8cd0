#include <doctest.h>

#include <algorithm>
#include <sstream>

#include <json.hpp>

#include "support/programs.hpp"
#include "support/scratch.hpp"
#include "updcheck/analysis/impact.hpp"
#include "updcheck/cli/cli.hpp"
#include "updcheck/fixtures/fixtures.hpp"
#include "updcheck/metrics/metrics.hpp"
#include "updcheck/mutation/mutation.hpp"

using namespace updcheck;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult invoke(std::vector<std::string> args) {
  std::vector<const char*> argv{"updcheck"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> in(const std::string& fixture, const std::string& project,
                            std::vector<std::string> rest) {
  fs::path dir = fixtures::fixtures_root() / fixture;
  std::vector<std::string> args{"--registry", (dir / "registry").string(), "--project",
                                (dir / "projects" / project).string()};
  args.insert(args.end(), rest.begin(), rest.end());
  return args;
}

const fixtures::FixtureCase& listing1() {
  static const fixtures::FixtureCase c = fixtures::load_fixture("listing1");
  return c;
}

metrics::CoverageReport coverage_of(const registry::Project& p, const registry::Registry& reg) {
  auto ws = registry::open_workspace(p, reg);
  auto run = runtime::run_tests(*ws.model);
  return metrics::dependency_coverage(analysis::build_call_graph(*ws.model), run.trace, ws.tree);
}

}  // namespace

TEST_CASE("every fixture loads and all of its scenarios hold") {
  auto names = fixtures::list_fixtures(fixtures::fixtures_root());
  CHECK(names == std::vector<std::string>{"dispatch", "listing1", "unused_dep", "weak_test"});
  for (const auto& name : names) {
    auto c = fixtures::load_fixture(name);
    CHECK_FALSE(c.scenarios.empty());
    for (const auto& o : fixtures::run_scenarios(c)) {
      INFO(name << "/" << o.scenario << ": " << o.detail);
      CHECK(o.passed);
    }
  }
}

TEST_CASE("fixture loading errors") {
  try {
    fixtures::load_fixture("no_such_fixture");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::UnknownFixture);
  }

  testing::TempDir tmp;
  fs::copy(fixtures::fixtures_root() / "unused_dep", tmp / "unused_dep",
           fs::copy_options::recursive);
  CHECK_NOTHROW(fixtures::load_fixture("unused_dep", tmp.path()));

  auto expect_corrupt = [&] {
    try {
      fixtures::load_fixture("unused_dep", tmp.path());
      FAIL("expected CorruptFixture");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::CorruptFixture);
    }
  };

  // A tampered registry source no longer matches its recorded digest.
  fs::path src;
  for (const auto& e : fs::recursive_directory_iterator(tmp / "unused_dep" / "registry")) {
    if (e.path().extension() == ".ml0") src = e.path();
  }
  REQUIRE_FALSE(src.empty());
  std::string original;
  {
    std::ifstream f(src);
    original.assign(std::istreambuf_iterator<char>(f), {});
  }
  testing::write_text(src, original + "\n// edited\n");
  expect_corrupt();
  testing::write_text(src, original);
  CHECK_NOTHROW(fixtures::load_fixture("unused_dep", tmp.path()));

  // Listed versions must match the snapshot.
  fs::path expected = tmp / "unused_dep" / "expected.json";
  auto j = nlohmann::json::parse(std::ifstream(expected));
  j["packages"]["util"].push_back("9.9.9");
  testing::write_text(expected, j.dump(2));
  expect_corrupt();

  testing::write_text(expected, "{ not json");
  expect_corrupt();
}

TEST_CASE("dependency coverage of the worked example projects") {
  const auto& c = listing1();
  auto full = coverage_of(c.project("client"), c.registry);
  CHECK(full.direct.ratio == 1.0);
  CHECK(full.direct.declared == std::set<std::string>{"p2.B.b", "p2.B.z"});
  CHECK(full.transitive.ratio == 1.0);

  auto single = coverage_of(c.project("client_single"), c.registry);
  CHECK(single.direct.ratio == 0.5);
  CHECK(single.direct.recorded == std::set<std::string>{"p2.B.b"});
  CHECK(single.transitive.ratio == 0.75);

  auto none = coverage_of(c.project("client_nouse"), c.registry);
  CHECK_FALSE(none.direct.ratio);
  CHECK_FALSE(none.transitive.ratio);

  CHECK(metrics::coverage_from_json(metrics::coverage_json(single)) == single);
}

TEST_CASE("direct coverage ignores the internals of transitive dependencies") {
  const auto& c = listing1();
  registry::ResolveOptions pin;
  pin.pins["p1"] = registry::Version{2, 0, 0};
  auto ws = registry::open_workspace(c.project("client_single"), c.registry, pin);
  auto run = runtime::run_tests(*ws.model);
  auto r = metrics::dependency_coverage(analysis::build_call_graph(*ws.model), run.trace, ws.tree);
  CHECK(r.direct == coverage_of(c.project("client_single"), c.registry).direct);
}

TEST_CASE("a trace from another program is rejected") {
  const auto& c = listing1();
  auto ws = registry::open_workspace(c.project("client"), c.registry);
  runtime::TraceLog trace;
  trace.edges.insert({"client.Main.main", "p9.Gone.f"});
  trace.invoked.insert("p9.Gone.f");
  try {
    metrics::dependency_coverage(analysis::build_call_graph(*ws.model), trace, ws.tree);
    FAIL("expected MismatchedProgram");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MismatchedProgram);
  }
}

TEST_CASE("benchmark on the worked example") {
  const auto& c = listing1();
  mutation::BenchmarkOptions opts;
  opts.operators = {mutation::Operator::AOR};
  auto run = mutation::run_benchmark(c.project("client"), c.registry, opts);
  CHECK(run.covered_functions ==
        std::vector<std::string>{"p1.A.a", "p1.A.v", "p2.B.b", "p2.B.z"});
  const mutation::MutantOutcome* times = nullptr;
  for (const auto& o : run.outcomes) {
    if (o.mutant.target_function == "p2.B.b" && o.mutant.original_fragment == "x + y" &&
        o.mutant.mutated_fragment == "x * y") {
      times = &o;
    }
  }
  REQUIRE(times);
  CHECK(times->killed);
  CHECK(times->kill_reason.rfind("client.test_b", 0) == 0);
  CHECK(times->verdict == analysis::Verdict::Unsafe);
  CHECK(times->kinds == std::set{analysis::ChangeKind::DataFlow});
  CHECK(run.report.static_analyzer.score == 1.0);

  // Worker count does not change the result.
  opts.jobs = 3;
  CHECK(mutation::benchmark_json(mutation::run_benchmark(c.project("client"), c.registry, opts)) ==
        mutation::benchmark_json(run));
  std::string csv = mutation::benchmark_csv(run);
  CHECK(csv.rfind("id,package,function,operator,", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(run.outcomes.size()) + 1);
}

TEST_CASE("benchmark edge cases") {
  auto weak = fixtures::load_fixture("weak_test");
  auto run = mutation::run_benchmark(weak.project("client"), weak.registry);
  CHECK(run.report.test_suite.detected == 0);
  CHECK(run.report.static_analyzer.detected == run.report.static_analyzer.all);

  auto unused = fixtures::load_fixture("unused_dep");
  auto none = mutation::run_benchmark(unused.project("app"), unused.registry);
  CHECK(none.outcomes.empty());
  CHECK_FALSE(none.report.test_suite.score);
  CHECK_FALSE(none.report.static_analyzer.score);

  testing::TempDir tmp;
  testing::write_package(tmp / "red", "red", "1.0.0", {{"p2", ">=1.0.0 <2.0.0"}},
                         {{"src/Main.ml0", "package red;\nimport p2;\nfn main() -> int { return B.b(); }\n"},
                          {"test/t.ml0", "package red;\nfn test_main() { assert main() == 4; }\n"}});
  try {
    mutation::run_benchmark(registry::load_project(tmp / "red"), listing1().registry);
    FAIL("expected RedBaseline");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::RedBaseline);
  }
}

TEST_CASE("check-update exit codes and reports") {
  auto unsafe = invoke(in("listing1", "client", {"check-update", "p1", "--to", "2.0.0"}));
  CHECK(unsafe.code == 1);
  CHECK(unsafe.out.rfind("UNSAFE", 0) == 0);
  auto main_at = unsafe.out.find("client.Main.main");
  auto b_at = unsafe.out.find("p2.B.b", main_at);
  auto a_at = unsafe.out.find("p1.A.a", b_at);
  CHECK(main_at != std::string::npos);
  CHECK(b_at != std::string::npos);
  CHECK(a_at != std::string::npos);

  auto safe = invoke(in("listing1", "client2", {"check-update", "p1", "--to", "2.0.0"}));
  CHECK(safe.code == 0);
  CHECK(safe.out.rfind("SAFE", 0) == 0);
  CHECK(std::count(safe.out.begin(), safe.out.end(), '\n') == 1);

  auto self = invoke(in("listing1", "client", {"check-update", "p1", "--to", "1.0.0"}));
  CHECK(self.code == 0);

  auto unused = invoke(in("listing1", "client_nouse", {"check-update", "p2", "--to", "2.0.0"}));
  CHECK(unused.code == 2);
  CHECK(unused.out.find("p2") != std::string::npos);

  auto json = invoke(in("listing1", "client", {"check-update", "p1", "--to", "2.0.0", "--json"}));
  CHECK(json.code == 1);
  auto report = analysis::report_from_json(json.out);
  CHECK(report.verdict == analysis::Verdict::Unsafe);
  CHECK(report.impacts.size() == 2);
  CHECK(cli::render_report(report, cli::Format::Text) == unsafe.out);
}

TEST_CASE("other subcommands") {
  CHECK(invoke(in("listing1", "client", {"test"})).code == 0);
  auto red = invoke(in("listing1", "client", {"test", "--with", "p1@2.0.0"}));
  CHECK(red.code == 1);
  CHECK(red.out.find("client.test_b") != std::string::npos);

  auto cov = invoke(in("listing1", "client_single", {"coverage", "--json"}));
  CHECK(cov.code == 0);
  CHECK(nlohmann::json::parse(cov.out)["direct"]["ratio"] == 0.5);

  auto diff = invoke(in("listing1", "client", {"diff", "p1", "1.0.0", "2.0.0", "--json"}));
  CHECK(diff.code == 0);
  CHECK(nlohmann::json::parse(diff.out)["changes"].size() == 2);

  auto cg = invoke(in("listing1", "client", {"callgraph", "export", "--json"}));
  CHECK(cg.code == 0);
  CHECK_NOTHROW(analysis::callgraph_from_json(cg.out));

  auto list = invoke(in("listing1", "client", {"registry", "list", "--json"}));
  CHECK(list.code == 0);
  CHECK(list.out.find("p1") != std::string::npos);
}

TEST_CASE("command line errors") {
  CHECK(invoke({}).code == cli::kUsageError);
  CHECK(invoke({"frobnicate"}).code == cli::kUsageError);
  CHECK(invoke(in("listing1", "client", {"check-update", "p1"})).code == cli::kUsageError);
  CHECK(invoke(in("listing1", "client", {"check-update", "zz", "--to", "1.0.0"})).code == 66);
  CHECK(invoke(in("listing1", "client", {"check-update", "p1", "--to", "7.0.0"})).code == 66);
  CHECK(invoke(in("listing1", "client", {"check-update", "p1", "--to", "two"})).code == 65);
  CHECK(invoke(in("listing1", "client", {"bench", "--operators", "XYZ"})).code == cli::kUsageError);
  auto missing = invoke({"--registry", "/nonexistent/registry", "--project",
                      (fixtures::fixtures_root() / "listing1/projects/client").string(), "test"});
  CHECK(missing.code == 66);
  CHECK_FALSE(missing.err.empty());

  CHECK(cli::exit_code_for(ErrorKind::DependencyCycle) == 67);
  CHECK(cli::exit_code_for(ErrorKind::RedBaseline) == 68);
  CHECK(cli::exit_code_for(ErrorKind::Type) == 65);
}
