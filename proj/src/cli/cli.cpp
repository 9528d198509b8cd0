#include "updcheck/cli/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "updcheck/analysis/callgraph.hpp"
#include "updcheck/analysis/diffing.hpp"
#include "updcheck/metrics/metrics.hpp"
#include "updcheck/mutation/mutation.hpp"
#include "updcheck/registry/workspace.hpp"
#include "updcheck/runtime/test_runner.hpp"

namespace updcheck::cli {

using analysis::Verdict;
using nlohmann::ordered_json;

namespace {

void write_stack(std::ostream& out, const analysis::ImpactPath& p) {
  std::size_t width = 0;
  for (const auto& f : p.stack) width = std::max(width, f.size());
  for (std::size_t i = 0; i < p.stack.size(); ++i) {
    out << "    " << (i == 0 ? "   " : "-> ");
    if (i == 0) {
      out << p.stack[i];
    } else {
      const auto& s = p.sites[i - 1];
      // The call site lives in the caller's package.
      const std::string& caller = p.stack[i - 1];
      out << std::left << std::setw(static_cast<int>(width)) << p.stack[i] << "  ["
          << analysis::to_string(p.dispatch[i - 1]) << "] " << caller.substr(0, caller.find('.'))
          << "/" << s.file << ":" << s.line << ":" << s.column;
    }
    out << "\n";
  }
}

void write_fragments(std::ostream& out, const analysis::FunctionChange& c) {
  auto lines = [&](const std::string& text, char mark) {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) out << "    " << mark << " " << line << "\n";
  };
  for (const auto& e : c.edits) {
    out << "    @@ " << analysis::to_string(e.op) << " " << e.node_kind << "\n";
    lines(e.old_text, '-');
    lines(e.new_text, '+');
  }
}

std::string kinds_text(const std::set<analysis::ChangeKind>& kinds) {
  std::string s;
  for (auto k : kinds) {
    if (!s.empty()) s += ", ";
    s += analysis::to_string(k);
  }
  return s;
}

}  // namespace

std::string render_report(const analysis::UpdateReport& r, Format format) {
  if (format == Format::Json) return analysis::report_json(r);
  std::ostringstream out;
  std::string update = r.library + " " + r.old_version.str() + " -> " + r.new_version.str();
  switch (r.verdict) {
    case Verdict::Safe:
      out << "SAFE: " << update << " changes " << r.changes.changes.size()
          << " function(s), none reachable from " << r.client << "\n";
      break;
    case Verdict::Unused:
      out << "UNUSED: " << r.client << " depends on " << r.library
          << " but never calls it; " << update << " cannot affect it\n";
      break;
    case Verdict::Unsafe:
      out << "UNSAFE: " << update << " affects " << r.client << " through " << r.impacts.size()
          << " reachable changed function(s)\n";
      for (std::size_t i = 0; i < r.impacts.size(); ++i) {
        const auto& imp = r.impacts[i];
        out << "\n[" << i + 1 << "] " << imp.function << " (" << kinds_text(imp.kinds) << ")\n";
        out << "  call stack:\n";
        write_stack(out, imp.path);
        if (imp.all.size() > 1) {
          out << "  " << imp.all.size() << " paths in total\n";
        }
        if (const auto* c = r.changes.find(imp.function)) {
          out << "  diff:\n";
          write_fragments(out, *c);
        }
      }
      break;
  }
  if (r.runtime_ms) out << "analysis took " << std::fixed << std::setprecision(1) << *r.runtime_ms << " ms\n";
  return out.str();
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax:
    case ErrorKind::DuplicateDefinition:
    case ErrorKind::Type:
    case ErrorKind::InvalidManifest:
    case ErrorKind::VersionAlreadyPublished:
    case ErrorKind::MismatchedProgram:
    case ErrorKind::CorruptFixture:
      return 65;
    case ErrorKind::UnknownPackage:
    case ErrorKind::UnknownVersion:
    case ErrorKind::UnknownFixture:
    case ErrorKind::Io:
      return 66;
    case ErrorKind::UnresolvableDependency:
    case ErrorKind::DependencyCycle:
    case ErrorKind::ResolutionFailure:
      return 67;
    case ErrorKind::RedBaseline:
      return 68;
    case ErrorKind::Unreachable:
      return 70;
  }
  return 70;
}

namespace {

struct Globals {
  std::string registry;
  std::string project = ".";
  int verbosity = 0;
};

class Session {
 public:
  Session(const Globals& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err) {}

  registry::Registry open_registry() const {
    if (g_.registry.empty()) {
      throw Error(ErrorKind::Io, "no registry given: pass --registry or set UPDCHECK_REGISTRY");
    }
    return registry::Registry(g_.registry);
  }

  registry::Project project() const { return registry::load_project(g_.project); }

  registry::Workspace workspace(const registry::Registry& reg,
                                const registry::ResolveOptions& opts = {}) const {
    registry::Workspace ws = registry::open_workspace(project(), reg, opts);
    if (g_.verbosity > 0) {
      err_ << "resolved " << ws.tree.root << "@" << ws.tree.root_version.str() << ":";
      for (const auto& [name, v] : ws.tree.nodes) {
        if (name != ws.tree.root) err_ << " " << name << "@" << v.str();
      }
      err_ << "\n";
    }
    return ws;
  }

  std::ostream& out() const { return out_; }
  std::ostream& err() const { return err_; }
  int verbosity() const { return g_.verbosity; }

 private:
  const Globals& g_;
  std::ostream& out_;
  std::ostream& err_;
};

std::pair<std::string, registry::Version> package_at(const std::string& spec) {
  auto at = spec.find('@');
  if (at == std::string::npos || at == 0) {
    throw CLI::ValidationError("--with", "expected <package>@<version>, got '" + spec + "'");
  }
  return {spec.substr(0, at), registry::parse_version(spec.substr(at + 1))};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Io, "cannot write " + path);
  f << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Checks whether a dependency update can affect a MiniLang project."};
  app.name("updcheck");
  app.require_subcommand(1, 1);
  app.fallthrough();

  Globals g;
  if (const char* env = std::getenv("UPDCHECK_REGISTRY")) g.registry = env;
  app.add_option("--registry", g.registry, "Registry directory (default: $UPDCHECK_REGISTRY)");
  app.add_option("--project", g.project, "Project directory")->capture_default_str();
  app.add_flag("-v,--verbose", g.verbosity, "Print progress to stderr; repeat for more");

  Session session(g, out, err);
  std::function<int()> action;

  // registry publish | list
  auto* reg_cmd = app.add_subcommand("registry", "Manage the local package registry");
  reg_cmd->require_subcommand(1, 1);
  auto* publish = reg_cmd->add_subcommand("publish", "Publish a package directory");
  std::string publish_dir;
  bool publish_init = false, publish_json = false;
  publish->add_option("dir", publish_dir, "Package directory with manifest.json")->required();
  publish->add_flag("--init", publish_init, "Create the registry if it does not exist");
  publish->add_flag("--json", publish_json, "Emit JSON");
  publish->callback([&] {
    action = [&] {
      if (g.registry.empty()) {
        throw Error(ErrorKind::Io, "no registry given: pass --registry or set UPDCHECK_REGISTRY");
      }
      registry::Registry reg = publish_init ? registry::Registry::init(g.registry)
                                            : registry::Registry(g.registry);
      registry::VersionRecord rec = reg.publish(publish_dir);
      if (publish_json) {
        ordered_json j{{"schema_version", 1},
                       {"name", rec.name},
                       {"version", rec.version.str()},
                       {"digest", rec.digest}};
        out << j.dump(2) << "\n";
      } else {
        out << "published " << rec.name << "@" << rec.version.str() << " sha256:" << rec.digest
            << "\n";
      }
      return 0;
    };
  });

  auto* list = reg_cmd->add_subcommand("list", "List packages, or the versions of one package");
  std::string list_pkg;
  bool list_json = false;
  list->add_option("package", list_pkg, "Package name");
  list->add_flag("--json", list_json, "Emit JSON");
  list->callback([&] {
    action = [&] {
      registry::Registry reg = session.open_registry();
      std::vector<std::string> names;
      if (list_pkg.empty()) {
        names = reg.list_packages();
      } else if (reg.list_versions(list_pkg).empty()) {
        throw Error(ErrorKind::UnknownPackage, "unknown package '" + list_pkg + "'");
      } else {
        names.push_back(list_pkg);
      }
      ordered_json pkgs = ordered_json::array();
      for (const auto& n : names) {
        ordered_json versions = ordered_json::array();
        if (!list_json) out << n;
        for (const auto& v : reg.list_versions(n)) {
          if (list_pkg.empty()) {
            versions.push_back(v.str());
            if (!list_json) out << " " << v.str();
          } else {
            auto rec = reg.record(n, v);
            versions.push_back({{"version", v.str()}, {"digest", rec.digest}});
            if (!list_json) out << "\n  " << v.str() << "  sha256:" << rec.digest;
          }
        }
        if (!list_json) out << "\n";
        pkgs.push_back({{"name", n}, {"versions", versions}});
      }
      if (list_json) {
        out << ordered_json{{"schema_version", 1}, {"packages", pkgs}}.dump(2) << "\n";
      }
      return 0;
    };
  });

  // test
  auto* test = app.add_subcommand("test", "Run the project's tests");
  std::vector<std::string> test_with;
  std::string trace_path;
  bool test_json = false, test_timings = false;
  test->add_option("--with", test_with, "Pin a dependency, e.g. --with p2@2.0.0 (repeatable)");
  test->add_option("--trace", trace_path, "Write the recorded call trace to this file");
  test->add_flag("--json", test_json, "Emit JSON");
  test->add_flag("--timings", test_timings, "Include wall-clock timings");
  test->callback([&] {
    action = [&] {
      registry::ResolveOptions opts;
      for (const auto& w : test_with) opts.pins.insert(package_at(w));
      registry::Registry reg = session.open_registry();
      registry::Workspace ws = session.workspace(reg, opts);
      runtime::RunOptions ro;
      ro.timings = test_timings;
      runtime::TestRun run = runtime::run_tests(*ws.model, ro);
      if (!trace_path.empty()) write_file(trace_path, runtime::trace_json(run.trace, ws.model.get()));
      if (test_json) {
        out << runtime::test_run_json(run);
      } else {
        for (const auto& r : run.results) {
          out << (r.status == runtime::TestStatus::Pass   ? "PASS  "
                  : r.status == runtime::TestStatus::Fail ? "FAIL  "
                                                          : "ERROR ")
              << r.name;
          if (!r.message.empty()) out << ": " << r.message;
          if (r.runtime_ms) out << " (" << std::fixed << std::setprecision(2) << *r.runtime_ms << " ms)";
          out << "\n";
          if (session.verbosity() > 0 && !r.output.empty()) out << r.output;
        }
        out << run.results.size() << " tests: " << run.passed() << " passed, " << run.failed()
            << " failed, " << run.errors() << " errors\n";
      }
      return run.all_passed() ? 0 : 1;
    };
  });

  // coverage
  auto* coverage = app.add_subcommand("coverage", "Dependency coverage of the project's tests");
  bool coverage_json = false;
  coverage->add_flag("--json", coverage_json, "Emit JSON");
  coverage->callback([&] {
    action = [&] {
      registry::Registry reg = session.open_registry();
      registry::Workspace ws = session.workspace(reg);
      runtime::TestRun run = runtime::run_tests(*ws.model);
      auto cg = analysis::build_call_graph(*ws.model);
      auto report = metrics::dependency_coverage(cg, run.trace, ws.tree);
      out << (coverage_json ? metrics::coverage_json(report) : metrics::render_coverage(report));
      return 0;
    };
  });

  // check-update
  auto* check = app.add_subcommand("check-update", "Decide whether updating a dependency is safe");
  std::string check_pkg, check_to;
  bool check_json = false, check_all = false, check_timings = false;
  check->add_option("package", check_pkg, "Dependency to update")->required();
  check->add_option("--to", check_to, "Target version")->required();
  check->add_flag("--json", check_json, "Emit JSON");
  check->add_flag("--all-paths", check_all, "List every call path, not only the shortest");
  check->add_flag("--timings", check_timings, "Include the analysis time");
  check->callback([&] {
    action = [&] {
      registry::Registry reg = session.open_registry();
      analysis::AnalyzeOptions opts;
      opts.assess.all_paths = check_all;
      opts.timings = check_timings;
      auto report = analysis::analyze_update(session.project(), reg, check_pkg,
                                             registry::parse_version(check_to), opts);
      out << render_report(report, check_json ? Format::Json : Format::Text);
      switch (report.verdict) {
        case Verdict::Safe: return 0;
        case Verdict::Unsafe: return 1;
        case Verdict::Unused: return 2;
      }
      return 1;
    };
  });

  // diff
  auto* diff = app.add_subcommand("diff", "Function-level changes between two releases");
  std::string diff_pkg, diff_from, diff_to;
  bool diff_json = false;
  diff->add_option("package", diff_pkg)->required();
  diff->add_option("from", diff_from)->required();
  diff->add_option("to", diff_to)->required();
  diff->add_flag("--json", diff_json, "Emit JSON");
  diff->callback([&] {
    action = [&] {
      registry::Registry reg = session.open_registry();
      auto from = registry::parse_version(diff_from);
      auto to = registry::parse_version(diff_to);
      auto cs = analysis::diff_library(diff_pkg, from, to, reg.sources(diff_pkg, from),
                                       reg.sources(diff_pkg, to));
      out << (diff_json ? analysis::changeset_json(cs) : analysis::render_changeset(cs));
      return 0;
    };
  });

  // callgraph export
  auto* cg_cmd = app.add_subcommand("callgraph", "Call graph of the resolved project");
  cg_cmd->require_subcommand(1, 1);
  auto* exp = cg_cmd->add_subcommand("export", "Print nodes and edges");
  bool cg_json = false;
  exp->add_flag("--json", cg_json, "Emit JSON");
  exp->callback([&] {
    action = [&] {
      registry::Registry reg = session.open_registry();
      registry::Workspace ws = session.workspace(reg);
      auto cg = analysis::build_call_graph(*ws.model);
      if (cg_json) {
        out << analysis::callgraph_json(cg);
      } else {
        for (const auto& [id, n] : cg.nodes()) {
          out << "node " << id << " " << n.package << "@" << n.version << " "
              << minilang::to_string(n.origin) << "\n";
        }
        for (const auto& e : cg.edges()) {
          out << "edge " << e.from << " -> " << e.to << " [" << analysis::to_string(e.dispatch)
              << "] " << e.site.file << ":" << e.site.line << ":" << e.site.column << "\n";
        }
      }
      return 0;
    };
  });

  // bench
  auto* bench = app.add_subcommand("bench", "Mutation benchmark: tests versus static analysis");
  std::string bench_ops = "ABS,AOR,LCR,ROR,UOI", bench_out, bench_csv;
  int bench_jobs = 1;
  bool bench_json = false;
  bench->add_option("--operators", bench_ops, "Comma-separated mutation operators")
      ->capture_default_str()
      ->check(CLI::Validator(
          [](std::string& s) {
            try {
              mutation::parse_operators(s);
              return std::string();
            } catch (const Error& e) {
              return std::string(e.what());
            }
          },
          "OPERATORS"));
  bench->add_option("--jobs", bench_jobs, "Worker threads")->check(CLI::PositiveNumber);
  bench->add_flag("--json", bench_json, "Emit JSON on stdout");
  bench->add_option("--out", bench_out, "Also write the JSON report to this file");
  bench->add_option("--csv", bench_csv, "Write one CSV row per mutant to this file");
  bench->callback([&] {
    action = [&] {
      registry::Registry reg = session.open_registry();
      mutation::BenchmarkOptions opts;
      opts.operators = mutation::parse_operators(bench_ops);
      opts.jobs = bench_jobs;
      auto run = mutation::run_benchmark(session.project(), reg, opts);
      std::string json = mutation::benchmark_json(run);
      if (!bench_out.empty()) write_file(bench_out, json);
      if (!bench_csv.empty()) write_file(bench_csv, mutation::benchmark_csv(run));
      if (bench_json) {
        out << json;
      } else {
        auto score = [](const metrics::ToolScore& t) {
          std::ostringstream s;
          s << t.detected << "/" << t.all;
          if (t.score) s << " (" << std::fixed << std::setprecision(3) << *t.score << ")";
          return s.str();
        };
        out << "project " << run.project << ": " << run.covered_functions.size()
            << " covered dependency functions, " << run.outcomes.size() << " mutants";
        if (run.excluded > 0) out << " (" << run.excluded << " rejected by the checker)";
        out << "\n  test suite:      " << score(run.report.test_suite)
            << "\n  static analysis: " << score(run.report.static_analyzer) << "\n";
      }
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    return kUsageError;
  }

  try {
    return action();
  } catch (const CLI::ParseError& e) {
    err << "updcheck: " << e.what() << "\n";
    return kUsageError;
  } catch (const Error& e) {
    err << "updcheck: " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "updcheck: " << e.what() << "\n";
    return 70;
  }
}

}  // namespace updcheck::cli
