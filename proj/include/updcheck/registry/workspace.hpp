#pragma once

#include <filesystem>
#include <memory>

#include "updcheck/minilang/semantic.hpp"
#include "updcheck/registry/resolver.hpp"

namespace updcheck::registry {

/// A client project directory: a manifest plus its sources and tests.
struct Project {
  std::filesystem::path dir;
  Manifest manifest;
  std::vector<minilang::SourceFile> sources;
  std::vector<minilang::SourceFile> tests;
};

/// Reads and parses a project. Files must declare the manifest's package.
Project load_project(const std::filesystem::path& dir);

/// Client package plus every node of `tree` fetched from the registry, with
/// origins assigned from the tree's shape. Dependency test files are not
/// loaded.
minilang::Program assemble_program(const Project& project, const DependencyTree& tree,
                                   const Registry& reg);

/// resolve + assemble + check in one step.
struct Workspace {
  DependencyTree tree;
  std::shared_ptr<const minilang::SemanticModel> model;
};

Workspace open_workspace(const Project& project, const Registry& reg,
                         const ResolveOptions& opts = {});

}  // namespace updcheck::registry
