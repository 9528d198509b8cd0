#include "updcheck/minilang/ast.hpp"

#include "updcheck/error.hpp"

namespace updcheck {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::DuplicateDefinition: return "DuplicateDefinition";
    case ErrorKind::Type: return "TypeError";
    case ErrorKind::InvalidManifest: return "InvalidManifest";
    case ErrorKind::VersionAlreadyPublished: return "VersionAlreadyPublished";
    case ErrorKind::UnresolvableDependency: return "UnresolvableDependency";
    case ErrorKind::DependencyCycle: return "DependencyCycle";
    case ErrorKind::UnknownPackage: return "UnknownPackage";
    case ErrorKind::UnknownVersion: return "UnknownVersion";
    case ErrorKind::ResolutionFailure: return "ResolutionFailure";
    case ErrorKind::MismatchedProgram: return "MismatchedProgram";
    case ErrorKind::Unreachable: return "Unreachable";
    case ErrorKind::RedBaseline: return "RedBaseline";
    case ErrorKind::UnknownFixture: return "UnknownFixture";
    case ErrorKind::CorruptFixture: return "CorruptFixture";
    case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

}  // namespace updcheck

namespace updcheck::minilang {

std::string_view to_string(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
    case BinaryOp::Mod: return "%";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
    case BinaryOp::Xor: return "^";
  }
  return "?";
}

std::string_view to_string(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Not: return "!";
    case UnaryOp::Abs: return "abs";
  }
  return "?";
}

bool is_arithmetic(BinaryOp op) {
  return op == BinaryOp::Add || op == BinaryOp::Sub || op == BinaryOp::Mul ||
         op == BinaryOp::Div || op == BinaryOp::Mod;
}

bool is_relational(BinaryOp op) {
  return op == BinaryOp::Lt || op == BinaryOp::Le || op == BinaryOp::Gt ||
         op == BinaryOp::Ge || op == BinaryOp::Eq || op == BinaryOp::Ne;
}

bool is_logical(BinaryOp op) {
  return op == BinaryOp::And || op == BinaryOp::Or || op == BinaryOp::Xor;
}

std::vector<const FunctionDecl*> ModuleAst::all_functions() const {
  std::vector<const FunctionDecl*> out;
  for (const auto& f : functions) out.push_back(&f);
  for (const auto& c : classes) {
    for (const auto& m : c.methods) out.push_back(&m);
  }
  return out;
}

namespace {

bool equal_args(const std::vector<Expr>& a, const std::vector<Expr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!structurally_equal(a[i], b[i])) return false;
  }
  return true;
}

bool equal_params(const std::vector<Param>& a, const std::vector<Param>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].name != b[i].name || a[i].type != b[i].type) return false;
  }
  return true;
}

}  // namespace

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, IntLit> || std::is_same_v<T, BoolLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          return x.op == y.op && structurally_equal(*x.lhs, *y.lhs) &&
                 structurally_equal(*x.rhs, *y.rhs);
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          return x.op == y.op && structurally_equal(*x.operand, *y.operand);
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          return x.callee == y.callee && equal_args(x.args, y.args);
        } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
          return x.method == y.method &&
                 structurally_equal(*x.receiver, *y.receiver) &&
                 equal_args(x.args, y.args);
        } else if constexpr (std::is_same_v<T, NewExpr>) {
          return x.class_name == y.class_name;
        } else {
          static_assert(std::is_same_v<T, FieldAccessExpr>);
          return x.field == y.field && structurally_equal(*x.object, *y.object);
        }
      },
      a.node);
}

bool structurally_equal(const Stmt& a, const Stmt& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, VarDeclStmt>) {
          return x.name == y.name && x.type == y.type &&
                 structurally_equal(x.init, y.init);
        } else if constexpr (std::is_same_v<T, AssignStmt>) {
          return structurally_equal(x.target, y.target) &&
                 structurally_equal(x.value, y.value);
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          if (!structurally_equal(x.condition, y.condition) ||
              !structurally_equal(x.then_block, y.then_block) ||
              x.else_block.has_value() != y.else_block.has_value()) {
            return false;
          }
          return !x.else_block || structurally_equal(*x.else_block, *y.else_block);
        } else if constexpr (std::is_same_v<T, WhileStmt>) {
          return structurally_equal(x.condition, y.condition) &&
                 structurally_equal(x.body, y.body);
        } else if constexpr (std::is_same_v<T, ReturnStmt>) {
          if (x.value.has_value() != y.value.has_value()) return false;
          return !x.value || structurally_equal(*x.value, *y.value);
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          return structurally_equal(x.expr, y.expr);
        } else {
          static_assert(std::is_same_v<T, AssertStmt>);
          return structurally_equal(x.condition, y.condition);
        }
      },
      a.node);
}

bool structurally_equal(const Block& a, const Block& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!structurally_equal(a[i], b[i])) return false;
  }
  return true;
}

bool structurally_equal(const FunctionDecl& a, const FunctionDecl& b) {
  return a.name == b.name && a.qualified_name == b.qualified_name &&
         a.owner == b.owner && equal_params(a.params, b.params) &&
         a.return_type == b.return_type && a.visibility == b.visibility &&
         a.is_static == b.is_static && structurally_equal(a.body, b.body);
}

bool structurally_equal(const ModuleAst& a, const ModuleAst& b) {
  if (a.package_name != b.package_name || a.imports != b.imports ||
      a.classes.size() != b.classes.size() ||
      a.interfaces.size() != b.interfaces.size() ||
      a.functions.size() != b.functions.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    if (!structurally_equal(a.functions[i], b.functions[i])) return false;
  }
  for (std::size_t i = 0; i < a.interfaces.size(); ++i) {
    const auto& x = a.interfaces[i];
    const auto& y = b.interfaces[i];
    if (x.name != y.name || x.methods.size() != y.methods.size()) return false;
    for (std::size_t j = 0; j < x.methods.size(); ++j) {
      if (x.methods[j].name != y.methods[j].name ||
          x.methods[j].return_type != y.methods[j].return_type ||
          !equal_params(x.methods[j].params, y.methods[j].params)) {
        return false;
      }
    }
  }
  for (std::size_t i = 0; i < a.classes.size(); ++i) {
    const auto& x = a.classes[i];
    const auto& y = b.classes[i];
    if (x.name != y.name || x.superclass != y.superclass ||
        x.interfaces != y.interfaces || x.fields.size() != y.fields.size() ||
        x.methods.size() != y.methods.size()) {
      return false;
    }
    for (std::size_t j = 0; j < x.fields.size(); ++j) {
      if (x.fields[j].name != y.fields[j].name ||
          x.fields[j].type != y.fields[j].type) {
        return false;
      }
    }
    for (std::size_t j = 0; j < x.methods.size(); ++j) {
      if (!structurally_equal(x.methods[j], y.methods[j])) return false;
    }
  }
  return true;
}

std::string_view kind_name(const Expr& e) {
  static constexpr std::string_view names[] = {
      "IntLit", "BoolLit", "Var", "Binary", "Unary",
      "Call", "MethodCall", "New", "FieldAccess"};
  return names[e.node.index()];
}

std::string_view kind_name(const Stmt& s) {
  static constexpr std::string_view names[] = {
      "VarDecl", "Assign", "If", "While", "Return", "ExprStmt", "Assert"};
  return names[s.node.index()];
}

bool contains_call(const Expr& e) {
  if (e.as<CallExpr>() || e.as<MethodCallExpr>()) return true;
  bool found = false;
  for_each_child(e, [&](const Expr& c) { found = found || contains_call(c); });
  return found;
}

}  // namespace updcheck::minilang
