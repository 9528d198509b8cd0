#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "updcheck/analysis/callgraph.hpp"
#include "updcheck/analysis/diffing.hpp"
#include "updcheck/analysis/impact.hpp"
#include "updcheck/error.hpp"
#include "updcheck/metrics/metrics.hpp"
#include "updcheck/minilang/parser.hpp"
#include "updcheck/minilang/printer.hpp"
#include "updcheck/mutation/mutation.hpp"
#include "updcheck/registry/workspace.hpp"
#include "updcheck/runtime/test_runner.hpp"

namespace py = pybind11;
using namespace updcheck;

namespace {

// Results cross the boundary as the same JSON the CLI prints.
py::object loads(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

registry::Workspace workspace(const std::string& project, const std::string& reg,
                              const std::map<std::string, std::string>& with = {}) {
  registry::ResolveOptions opts;
  for (const auto& [pkg, v] : with) opts.pins[pkg] = registry::parse_version(v);
  return registry::open_workspace(registry::load_project(project), registry::Registry(reg), opts);
}

std::vector<minilang::SourceFile> one_file(const std::string& text, const std::string& path) {
  return {{path, std::make_shared<const minilang::ModuleAst>(minilang::parse(text, path))}};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dependency update impact analysis for MiniLang projects.";

  static py::exception<Error> error(m, "UpdcheckError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object cls = error;
      py::object exc = cls(e.what());
      exc.attr("kind") = to_string(e.kind());
      PyErr_SetObject(cls.ptr(), exc.ptr());
    }
  });

  m.def(
      "format_source",
      [](const std::string& text, const std::string& path) {
        return minilang::pretty_print(minilang::parse(text, path));
      },
      py::arg("text"), py::arg("path") = "<input>", "Parses MiniLang source and pretty-prints it.");

  m.def(
      "satisfies",
      [](const std::string& version, const std::string& range) {
        return registry::satisfies(registry::parse_version(version), registry::parse_range(range));
      },
      py::arg("version"), py::arg("range"));

  m.def(
      "diff_sources",
      [](const std::string& old_text, const std::string& new_text, const std::string& library,
         const std::string& path) {
        registry::Version v{0, 0, 0};
        return loads(analysis::changeset_json(analysis::diff_library(
            library, v, v, one_file(old_text, path), one_file(new_text, path))));
      },
      py::arg("old"), py::arg("new"), py::arg("library") = "lib", py::arg("path") = "src/lib.ml0",
      "Change set between two versions of one source file.");

  m.def(
      "check_update",
      [](const std::string& project, const std::string& reg, const std::string& package,
         const std::string& to, bool all_paths) {
        analysis::AnalyzeOptions opts;
        opts.assess.all_paths = all_paths;
        return loads(analysis::report_json(
            analysis::analyze_update(registry::load_project(project), registry::Registry(reg),
                                     package, registry::parse_version(to), opts)));
      },
      py::arg("project"), py::arg("registry"), py::arg("package"), py::arg("to"),
      py::arg("all_paths") = false);

  m.def(
      "run_tests",
      [](const std::string& project, const std::string& reg,
         const std::map<std::string, std::string>& with) {
        auto ws = workspace(project, reg, with);
        return loads(runtime::test_run_json(runtime::run_tests(*ws.model)));
      },
      py::arg("project"), py::arg("registry"), py::arg("with_") = std::map<std::string, std::string>{},
      "Runs the project's tests, optionally with packages pinned as {name: version}.");

  m.def(
      "coverage",
      [](const std::string& project, const std::string& reg) {
        auto ws = workspace(project, reg);
        auto run = runtime::run_tests(*ws.model);
        return loads(metrics::coverage_json(
            metrics::dependency_coverage(analysis::build_call_graph(*ws.model), run.trace, ws.tree)));
      },
      py::arg("project"), py::arg("registry"));

  m.def(
      "callgraph",
      [](const std::string& project, const std::string& reg) {
        auto ws = workspace(project, reg);
        return loads(analysis::callgraph_json(analysis::build_call_graph(*ws.model)));
      },
      py::arg("project"), py::arg("registry"));

  m.def(
      "bench",
      [](const std::string& project, const std::string& reg, const std::optional<std::string>& ops,
         int jobs) {
        mutation::BenchmarkOptions opts;
        if (ops) opts.operators = mutation::parse_operators(*ops);
        opts.jobs = jobs;
        py::gil_scoped_release release;
        std::string out = mutation::benchmark_json(
            mutation::run_benchmark(registry::load_project(project), registry::Registry(reg), opts));
        py::gil_scoped_acquire acquire;
        return loads(out);
      },
      py::arg("project"), py::arg("registry"), py::arg("operators") = py::none(), py::arg("jobs") = 1);
}
