#include "updcheck/registry/workspace.hpp"

#include <algorithm>

#include "updcheck/error.hpp"

namespace updcheck::registry {

namespace {

void check_package(const std::vector<minilang::SourceFile>& files, const std::string& name) {
  for (const auto& f : files) {
    if (f.ast->package_name != name) {
      throw Error(ErrorKind::InvalidManifest, "invalid manifest: " + f.path +
                                                  " declares package '" +
                                                  f.ast->package_name + "', expected '" +
                                                  name + "'");
    }
  }
}

}  // namespace

Project load_project(const std::filesystem::path& dir) {
  Project p;
  p.dir = dir;
  p.manifest = load_manifest(dir / "manifest.json");
  p.sources = read_sources(dir, p.manifest.sources);
  p.tests = read_sources(dir, p.manifest.tests);
  check_package(p.sources, p.manifest.name);
  check_package(p.tests, p.manifest.name);
  return p;
}

minilang::Program assemble_program(const Project& project, const DependencyTree& tree,
                                   const Registry& reg) {
  minilang::Program prog;
  prog.packages.push_back({project.manifest.name, project.manifest.version.str(),
                           minilang::Origin::Client, project.sources, project.tests});
  std::vector<std::string> direct = tree.direct();
  for (const auto& [name, v] : tree.nodes) {
    if (name == tree.root) continue;
    bool is_direct = std::find(direct.begin(), direct.end(), name) != direct.end();
    prog.packages.push_back({name, v.str(),
                             is_direct ? minilang::Origin::DirectDep
                                       : minilang::Origin::TransitiveDep,
                             reg.sources(name, v), {}});
  }
  return prog;
}

Workspace open_workspace(const Project& project, const Registry& reg,
                         const ResolveOptions& opts) {
  Workspace ws;
  ws.tree = resolve(project.manifest, reg, opts);
  ws.model = minilang::SemanticModel::check(assemble_program(project, ws.tree, reg));
  return ws;
}

}  // namespace updcheck::registry
