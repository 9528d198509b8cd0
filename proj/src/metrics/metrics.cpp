#include "updcheck/metrics/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "updcheck/error.hpp"

namespace updcheck::metrics {

using analysis::CallGraph;
using minilang::Origin;

namespace {

CoverageSection section(std::set<std::string> declared, const runtime::TraceLog& trace) {
  CoverageSection s;
  s.declared = std::move(declared);
  for (const auto& fn : trace.invoked) {
    if (s.declared.count(fn)) s.recorded.insert(fn);
  }
  for (const auto& [from, to] : trace.edges) {
    if (s.declared.count(to)) ++s.recorded_call_pairs;
  }
  if (!s.declared.empty()) {
    s.ratio = static_cast<double>(s.recorded.size()) / static_cast<double>(s.declared.size());
  }
  return s;
}

Origin origin_from(const std::string& s) {
  if (s == "direct-dep") return Origin::DirectDep;
  if (s == "transitive-dep") return Origin::TransitiveDep;
  return Origin::Client;
}

}  // namespace

CoverageReport dependency_coverage(const CallGraph& cg, const runtime::TraceLog& trace,
                                   const registry::DependencyTree& tree) {
  for (const auto& fn : trace.invoked) {
    if (!cg.node(fn)) {
      throw Error(ErrorKind::MismatchedProgram,
                  "trace references '" + fn + "', which is not in the call graph");
    }
  }
  for (const auto& [from, to] : trace.edges) {
    if (!cg.has_edge(from, to)) {
      throw Error(ErrorKind::MismatchedProgram,
                  "traced call " + from + " -> " + to + " is not in the call graph");
    }
  }

  CoverageReport r;
  r.client = tree.root;
  std::set<std::string> direct;
  for (const auto& [caller, callee] : analysis::direct_call_sites(cg)) direct.insert(callee);
  r.direct = section(std::move(direct), trace);

  auto reach = analysis::reachable_dependency_functions(cg, cg.client_roots());
  std::set<std::string> all = reach.direct;
  all.insert(reach.transitive.begin(), reach.transitive.end());
  r.transitive = section(all, trace);

  auto direct_deps = tree.direct();
  for (const auto& [name, version] : tree.nodes) {
    if (name == tree.root) continue;
    std::set<std::string> mine;
    for (const auto& id : all) {
      if (cg.node(id)->package == name) mine.insert(id);
    }
    Origin origin = std::find(direct_deps.begin(), direct_deps.end(), name) != direct_deps.end()
                        ? Origin::DirectDep
                        : Origin::TransitiveDep;
    r.per_dependency.push_back({name, version.str(), origin, section(std::move(mine), trace)});
  }
  return r;
}

DetectionReport detection_score(std::vector<MutantRecord> records) {
  DetectionReport r;
  std::sort(records.begin(), records.end(),
            [](const MutantRecord& a, const MutantRecord& b) { return a.id < b.id; });
  for (const auto& m : records) {
    ++r.test_suite.all;
    ++r.static_analyzer.all;
    r.test_suite.detected += m.detected_by_tests;
    r.static_analyzer.detected += m.detected_by_static;
  }
  for (ToolScore* t : {&r.test_suite, &r.static_analyzer}) {
    if (t->all > 0) t->score = static_cast<double>(t->detected) / t->all;
  }
  r.records = std::move(records);
  return r;
}

namespace {

nlohmann::ordered_json section_value(const CoverageSection& s) {
  nlohmann::ordered_json j;
  j["declared"] = s.declared;
  j["recorded"] = s.recorded;
  j["ratio"] = s.ratio ? nlohmann::ordered_json(*s.ratio) : nlohmann::ordered_json(nullptr);
  j["recorded_call_pairs"] = s.recorded_call_pairs;
  return j;
}

CoverageSection section_from(const nlohmann::json& j) {
  CoverageSection s;
  s.declared = j.at("declared").get<std::set<std::string>>();
  s.recorded = j.at("recorded").get<std::set<std::string>>();
  if (!j.at("ratio").is_null()) s.ratio = j["ratio"].get<double>();
  s.recorded_call_pairs = j.at("recorded_call_pairs").get<std::size_t>();
  return s;
}

std::string ratio_text(const CoverageSection& s) {
  if (!s.ratio) return "n/a (no dependency use)";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.1f%% (%zu/%zu)", *s.ratio * 100.0, s.recorded.size(),
                s.declared.size());
  return buf;
}

}  // namespace

std::string coverage_json(const CoverageReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["client"] = r.client;
  j["direct"] = section_value(r.direct);
  j["transitive"] = section_value(r.transitive);
  auto per = nlohmann::ordered_json::array();
  for (const auto& p : r.per_dependency) {
    nlohmann::ordered_json e;
    e["package"] = p.package;
    e["version"] = p.version;
    e["origin"] = std::string(minilang::to_string(p.origin));
    auto sec = section_value(p.section);
    for (auto& [k, v] : sec.items()) e[k] = v;
    per.push_back(e);
  }
  j["per_dependency"] = per;
  return j.dump(2) + "\n";
}

CoverageReport coverage_from_json(std::string_view text) {
  auto j = nlohmann::json::parse(text);
  CoverageReport r;
  r.client = j.at("client").get<std::string>();
  r.direct = section_from(j.at("direct"));
  r.transitive = section_from(j.at("transitive"));
  for (const auto& e : j.at("per_dependency")) {
    r.per_dependency.push_back({e.at("package").get<std::string>(),
                                e.at("version").get<std::string>(),
                                origin_from(e.at("origin").get<std::string>()), section_from(e)});
  }
  return r;
}

std::string render_coverage(const CoverageReport& r) {
  std::ostringstream out;
  out << "dependency coverage for " << r.client << "\n";
  out << "  direct:     " << ratio_text(r.direct) << "\n";
  out << "  transitive: " << ratio_text(r.transitive) << "\n";
  for (const auto& p : r.per_dependency) {
    out << "  " << p.package << "@" << p.version << " (" << minilang::to_string(p.origin)
        << "): " << ratio_text(p.section) << "\n";
    for (const auto& fn : p.section.declared) {
      out << "    " << (p.section.recorded.count(fn) ? "+ " : "- ") << fn << "\n";
    }
  }
  return out.str();
}

}  // namespace updcheck::metrics
