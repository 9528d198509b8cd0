#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "updcheck/minilang/box.hpp"

namespace updcheck::minilang {

struct Span {
  int line = 0;
  int column = 0;

  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span&, const Span&) = default;
};

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or, Xor };
enum class UnaryOp { Neg, Not, Abs };

std::string_view to_string(BinaryOp op);
std::string_view to_string(UnaryOp op);
bool is_arithmetic(BinaryOp op);
bool is_relational(BinaryOp op);  // includes == and !=
bool is_logical(BinaryOp op);

struct Expr;

struct IntLit {
  std::int64_t value = 0;
};
struct BoolLit {
  bool value = false;
};
struct VarRef {
  std::string name;
};
struct BinaryExpr {
  BinaryOp op;
  Box<Expr> lhs;
  Box<Expr> rhs;
};
struct UnaryExpr {
  UnaryOp op;
  Box<Expr> operand;
};
// Call without a receiver value: free function or static method. The callee
// is the dotted path as written (`f`, `B.b`, `p1.A.a`); the checker resolves
// it to a fully qualified function.
struct CallExpr {
  std::string callee;
  std::vector<Expr> args;
};
// Dynamically dispatched call on a receiver value.
struct MethodCallExpr {
  Box<Expr> receiver;
  std::string method;
  std::vector<Expr> args;
};
struct NewExpr {
  std::string class_name;
};
struct FieldAccessExpr {
  Box<Expr> object;
  std::string field;
};

struct Expr {
  using Node = std::variant<IntLit, BoolLit, VarRef, BinaryExpr, UnaryExpr,
                            CallExpr, MethodCallExpr, NewExpr, FieldAccessExpr>;
  Node node;
  Span span;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <typename T>
  T* as() {
    return std::get_if<T>(&node);
  }
};

struct Stmt;
using Block = std::vector<Stmt>;

struct VarDeclStmt {
  std::string name;
  std::string type;
  Expr init;
};
struct AssignStmt {
  Expr target;  // VarRef or FieldAccessExpr
  Expr value;
};
struct IfStmt {
  Expr condition;
  Block then_block;
  std::optional<Block> else_block;
};
struct WhileStmt {
  Expr condition;
  Block body;
};
struct ReturnStmt {
  std::optional<Expr> value;
};
struct ExprStmt {
  Expr expr;
};
struct AssertStmt {
  Expr condition;
};

struct Stmt {
  using Node = std::variant<VarDeclStmt, AssignStmt, IfStmt, WhileStmt,
                            ReturnStmt, ExprStmt, AssertStmt>;
  Node node;
  Span span;

  template <typename T>
  const T* as() const {
    return std::get_if<T>(&node);
  }
  template <typename T>
  T* as() {
    return std::get_if<T>(&node);
  }
};

enum class Visibility { Public, Private };

struct Param {
  std::string name;
  std::string type;
};

struct FunctionDecl {
  std::string name;
  std::string qualified_name;  // package.Class.name or package.name
  std::string owner;           // enclosing class, empty for free functions
  std::vector<Param> params;
  std::string return_type = "void";
  Block body;
  Visibility visibility = Visibility::Public;
  bool is_static = false;  // methods only
  Span span;               // `fn` keyword
  Span end;                // closing brace

  bool is_method() const { return !owner.empty(); }
  bool is_test() const { return name.starts_with("test_"); }
};

struct FieldDecl {
  std::string name;
  std::string type;
  Span span;
};

struct ClassDecl {
  std::string name;
  std::optional<std::string> superclass;
  std::vector<std::string> interfaces;
  std::vector<FieldDecl> fields;
  std::vector<FunctionDecl> methods;
  Span span;
};

struct MethodSig {
  std::string name;
  std::vector<Param> params;
  std::string return_type = "void";
  Span span;
};

struct InterfaceDecl {
  std::string name;
  std::vector<MethodSig> methods;
  Span span;
};

struct ModuleAst {
  std::string package_name;
  std::vector<std::string> imports;
  std::vector<ClassDecl> classes;
  std::vector<InterfaceDecl> interfaces;
  std::vector<FunctionDecl> functions;

  // Free functions followed by methods in declaration order.
  std::vector<const FunctionDecl*> all_functions() const;
};

// Structural equality: compares everything except source positions.
bool structurally_equal(const Expr& a, const Expr& b);
bool structurally_equal(const Stmt& a, const Stmt& b);
bool structurally_equal(const Block& a, const Block& b);
bool structurally_equal(const FunctionDecl& a, const FunctionDecl& b);
bool structurally_equal(const ModuleAst& a, const ModuleAst& b);

std::string_view kind_name(const Expr& e);
std::string_view kind_name(const Stmt& s);

// Visits every direct child expression of `e`, left to right.
template <typename F>
void for_each_child(const Expr& e, F&& f) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BinaryExpr>) {
          f(*n.lhs);
          f(*n.rhs);
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          f(*n.operand);
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          for (const auto& a : n.args) f(a);
        } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
          f(*n.receiver);
          for (const auto& a : n.args) f(a);
        } else if constexpr (std::is_same_v<T, FieldAccessExpr>) {
          f(*n.object);
        }
      },
      e.node);
}

template <typename F>
void for_each_child(Expr& e, F&& f) {
  std::visit(
      [&](auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, BinaryExpr>) {
          f(*n.lhs);
          f(*n.rhs);
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          f(*n.operand);
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          for (auto& a : n.args) f(a);
        } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
          f(*n.receiver);
          for (auto& a : n.args) f(a);
        } else if constexpr (std::is_same_v<T, FieldAccessExpr>) {
          f(*n.object);
        }
      },
      e.node);
}

// True when `e` or any sub-expression is a call (static or dispatched).
bool contains_call(const Expr& e);

// Pre-order walk over `e` and all of its sub-expressions.
template <typename F>
void walk(const Expr& e, F&& f) {
  f(e);
  for_each_child(e, [&](const Expr& c) { walk(c, f); });
}

// Calls `f` on every expression node of a block, statement by statement in
// source order, descending into nested blocks. Assignment targets included.
template <typename F>
void for_each_expr(const Block& b, F&& f) {
  for (const Stmt& s : b) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarDeclStmt>) {
            walk(n.init, f);
          } else if constexpr (std::is_same_v<T, AssignStmt>) {
            walk(n.target, f);
            walk(n.value, f);
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            walk(n.condition, f);
            for_each_expr(n.then_block, f);
            if (n.else_block) for_each_expr(*n.else_block, f);
          } else if constexpr (std::is_same_v<T, WhileStmt>) {
            walk(n.condition, f);
            for_each_expr(n.body, f);
          } else if constexpr (std::is_same_v<T, ReturnStmt>) {
            if (n.value) walk(*n.value, f);
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            walk(n.expr, f);
          } else {
            walk(n.condition, f);
          }
        },
        s.node);
  }
}

}  // namespace updcheck::minilang
