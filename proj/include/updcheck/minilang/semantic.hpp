#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "updcheck/minilang/ast.hpp"

namespace updcheck::minilang {

/// Where a package sits relative to the project under analysis.
enum class Origin { Client, DirectDep, TransitiveDep };

std::string_view to_string(Origin origin);

struct SourceFile {
  std::string path;  // relative to the package root
  std::shared_ptr<const ModuleAst> ast;
};

struct PackageUnit {
  std::string name;
  std::string version;
  Origin origin = Origin::Client;
  std::vector<SourceFile> sources;
  std::vector<SourceFile> tests;
};

/// A client package together with every package of its resolved dependency
/// tree. Cheap to copy: modules are shared.
struct Program {
  std::vector<PackageUnit> packages;

  const PackageUnit* find(std::string_view name) const;
  PackageUnit* find(std::string_view name);
  const PackageUnit* client() const;
};

struct Type {
  enum class Kind { Void, Int, Bool, Object };

  Kind kind = Kind::Void;
  std::string name;  // qualified class or interface name for objects

  static Type void_() { return {}; }
  static Type int_() { return {Kind::Int, {}}; }
  static Type bool_() { return {Kind::Bool, {}}; }
  static Type object(std::string qname) { return {Kind::Object, std::move(qname)}; }

  bool is_int() const { return kind == Kind::Int; }
  bool is_bool() const { return kind == Kind::Bool; }
  bool is_object() const { return kind == Kind::Object; }
  std::string str() const;

  friend bool operator==(const Type&, const Type&) = default;
};

struct ClassInfo;
struct InterfaceInfo;

struct FunctionInfo {
  std::string qualified_name;
  const FunctionDecl* decl = nullptr;
  const PackageUnit* package = nullptr;
  std::string file;  // package-relative source path
  bool in_test_file = false;
  const ClassInfo* owner = nullptr;
  std::vector<Type> param_types;
  Type return_type;

  bool is_instance_method() const { return owner && !decl->is_static; }
  /// Declared in the client package outside its test files.
  bool is_client_source() const {
    return package->origin == Origin::Client && !in_test_file;
  }
};

struct MethodSignature {
  std::vector<Type> param_types;
  Type return_type;

  friend bool operator==(const MethodSignature&, const MethodSignature&) = default;
};

struct ClassInfo {
  std::string qualified_name;
  const ClassDecl* decl = nullptr;
  const PackageUnit* package = nullptr;
  const ClassInfo* superclass = nullptr;
  std::vector<const InterfaceInfo*> interfaces;  // declared directly
  std::vector<std::pair<std::string, Type>> fields;  // inherited fields first
  std::map<std::string, const FunctionInfo*> methods;  // declared here
  std::map<std::string, const FunctionInfo*> vtable;   // instance methods, resolved

  int field_slot(std::string_view name) const;
  bool is_subclass_of(const ClassInfo& other) const;  // reflexive
  bool implements(const InterfaceInfo& iface) const;  // through superclasses too
};

struct InterfaceInfo {
  std::string qualified_name;
  const InterfaceDecl* decl = nullptr;
  const PackageUnit* package = nullptr;
  std::map<std::string, MethodSignature> methods;
};

enum class Builtin { Print, Min, Max };

/// Facts the checker records for one expression node.
struct ExprInfo {
  Type type;
  const FunctionInfo* target = nullptr;   // CallExpr: resolved callee
  std::optional<Builtin> builtin;          // CallExpr into `std`
  const ClassInfo* new_class = nullptr;    // NewExpr
  int field_slot = -1;                     // FieldAccessExpr
};

/// Name resolution and type information for a whole Program. Built by
/// check(), immutable afterwards; share it through shared_ptr.
class SemanticModel {
 public:
  /// Type checks every package. Throws TypeError or DuplicateDefinition.
  static std::shared_ptr<const SemanticModel> check(Program program);

  SemanticModel(const SemanticModel&) = delete;
  SemanticModel& operator=(const SemanticModel&) = delete;

  const Program& program() const { return program_; }

  /// All functions sorted by qualified name, test files included.
  const std::vector<const FunctionInfo*>& functions() const { return sorted_functions_; }
  const FunctionInfo* function(std::string_view qualified_name) const;
  const std::vector<const ClassInfo*>& classes() const { return sorted_classes_; }
  const ClassInfo* class_named(std::string_view qualified_name) const;
  const InterfaceInfo* interface_named(std::string_view qualified_name) const;

  /// Checker facts for an expression of this model's program. The node must
  /// belong to one of the program's modules.
  const ExprInfo& info(const Expr& e) const;
  const Type& type_of(const Expr& e) const { return info(e).type; }

  /// Concrete classes whose instances may be the value of a static type.
  std::vector<const ClassInfo*> subtypes_of(const Type& t) const;

 private:
  SemanticModel() = default;
  friend class Checker;

  Program program_;
  std::deque<FunctionInfo> function_store_;
  std::deque<ClassInfo> class_store_;
  std::deque<InterfaceInfo> interface_store_;
  std::map<std::string, const FunctionInfo*, std::less<>> functions_;
  std::map<std::string, const ClassInfo*, std::less<>> classes_;
  std::map<std::string, const InterfaceInfo*, std::less<>> interfaces_;
  std::vector<const FunctionInfo*> sorted_functions_;
  std::vector<const ClassInfo*> sorted_classes_;
  std::unordered_map<const Expr*, ExprInfo> exprs_;
};

}  // namespace updcheck::minilang
