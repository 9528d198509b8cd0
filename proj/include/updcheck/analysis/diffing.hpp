#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "updcheck/minilang/semantic.hpp"
#include "updcheck/registry/version.hpp"

namespace updcheck::analysis {

enum class ChangeKind {
  DataFlow,
  ControlFlowMove,
  ControlFlowPath,
  BranchCondition,
  Added,
  Removed,
  SignatureChanged,
};
std::string_view to_string(ChangeKind k);
ChangeKind change_kind_from(std::string_view s);

enum class EditOp { Insert, Delete, Update, Move };
std::string_view to_string(EditOp op);

/// Where an edit sits inside its function: a whole statement, an expression
/// of a plain statement, an If/While/Assert condition, the signature, or the
/// function itself (added or removed).
enum class Region { Statement, Data, Condition, Signature, Function };
std::string_view to_string(Region r);

struct Edit {
  EditOp op = EditOp::Update;
  std::string node_kind;  // "Return", "Binary", "Call", ...
  Region region = Region::Data;
  bool touches_call = false;  // the edited subtree adds, drops or swaps a call
  std::optional<minilang::Span> old_span;
  std::optional<minilang::Span> new_span;
  std::string old_text;
  std::string new_text;

  friend bool operator==(const Edit&, const Edit&) = default;
};

struct FunctionChange {
  std::string function;
  std::set<ChangeKind> kinds;
  std::vector<Edit> edits;

  friend bool operator==(const FunctionChange&, const FunctionChange&) = default;
};

struct ChangeSet {
  std::string library;
  registry::Version old_version;
  registry::Version new_version;
  std::vector<FunctionChange> changes;  // sorted by function name

  const FunctionChange* find(std::string_view function) const;
  bool empty() const { return changes.empty(); }

  friend bool operator==(const ChangeSet&, const ChangeSet&) = default;
};

ChangeKind classify(const Edit& e);
std::set<ChangeKind> classify(const std::vector<Edit>& edits);

/// Edit script between two function bodies with the same name.
std::vector<Edit> diff_functions(const minilang::FunctionDecl& old_fn,
                                 const minilang::FunctionDecl& new_fn);

/// Matches functions across the two versions by qualified name and diffs
/// each pair. Identical functions produce no entry.
ChangeSet diff_library(std::string library, registry::Version old_version,
                       registry::Version new_version,
                       const std::vector<minilang::SourceFile>& old_sources,
                       const std::vector<minilang::SourceFile>& new_sources);

std::string changeset_json(const ChangeSet& cs);
ChangeSet changeset_from_json(std::string_view text);
/// Per-function text report, one block per change.
std::string render_changeset(const ChangeSet& cs);

}  // namespace updcheck::analysis
