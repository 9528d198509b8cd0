#include "updcheck/minilang/printer.hpp"

#include <sstream>

namespace updcheck::minilang {
namespace {

// Binding strength; higher binds tighter. Mirrors the parser's levels.
int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::Xor: return 2;
    case BinaryOp::And: return 3;
    case BinaryOp::Eq:
    case BinaryOp::Ne: return 4;
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 5;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 6;
    case BinaryOp::Mul:
    case BinaryOp::Div:
    case BinaryOp::Mod: return 7;
  }
  return 0;
}

constexpr int kUnary = 8;
constexpr int kPostfix = 9;

int precedence(const Expr& e) {
  if (const auto* b = e.as<BinaryExpr>()) return precedence(b->op);
  if (const auto* u = e.as<UnaryExpr>()) {
    // abs(..) is written with its own parentheses and behaves like a primary.
    return u->op == UnaryOp::Abs ? kPostfix : kUnary;
  }
  return kPostfix;
}

void print(std::ostream& os, const Expr& e);

void print_wrapped(std::ostream& os, const Expr& e, bool wrap) {
  if (wrap) os << '(';
  print(os, e);
  if (wrap) os << ')';
}

void print_args(std::ostream& os, const std::vector<Expr>& args) {
  os << '(';
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) os << ", ";
    print(os, args[i]);
  }
  os << ')';
}

void print(std::ostream& os, const Expr& e) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, IntLit>) {
          os << n.value;
        } else if constexpr (std::is_same_v<T, BoolLit>) {
          os << (n.value ? "true" : "false");
        } else if constexpr (std::is_same_v<T, VarRef>) {
          os << n.name;
        } else if constexpr (std::is_same_v<T, BinaryExpr>) {
          int p = precedence(n.op);
          // Relational operators do not chain, so both sides need parens at
          // equal precedence; the others are left associative.
          bool non_assoc = p == 5;
          print_wrapped(os, *n.lhs, non_assoc ? precedence(*n.lhs) <= p
                                              : precedence(*n.lhs) < p);
          os << ' ' << to_string(n.op) << ' ';
          print_wrapped(os, *n.rhs, precedence(*n.rhs) <= p);
        } else if constexpr (std::is_same_v<T, UnaryExpr>) {
          if (n.op == UnaryOp::Abs) {
            os << "abs(";
            print(os, *n.operand);
            os << ')';
          } else {
            os << to_string(n.op);
            print_wrapped(os, *n.operand, precedence(*n.operand) < kUnary);
          }
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          os << n.callee;
          print_args(os, n.args);
        } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
          print_wrapped(os, *n.receiver, precedence(*n.receiver) < kPostfix);
          os << '.' << n.method;
          print_args(os, n.args);
        } else if constexpr (std::is_same_v<T, NewExpr>) {
          os << "new " << n.class_name << "()";
        } else {
          print_wrapped(os, *n.object, precedence(*n.object) < kPostfix);
          os << '.' << n.field;
        }
      },
      e.node);
}

void pad(std::ostream& os, int indent) {
  for (int i = 0; i < indent; ++i) os << "    ";
}

void print_block(std::ostream& os, const Block& b, int indent);

void print(std::ostream& os, const Stmt& s, int indent) {
  pad(os, indent);
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, VarDeclStmt>) {
          os << "var " << n.name << ": " << n.type << " = ";
          print(os, n.init);
          os << ";\n";
        } else if constexpr (std::is_same_v<T, AssignStmt>) {
          print(os, n.target);
          os << " = ";
          print(os, n.value);
          os << ";\n";
        } else if constexpr (std::is_same_v<T, IfStmt>) {
          const IfStmt* cur = &n;
          for (;;) {
            os << "if (";
            print(os, cur->condition);
            os << ") ";
            print_block(os, cur->then_block, indent);
            if (!cur->else_block) break;
            const Block& eb = *cur->else_block;
            if (eb.size() == 1 && eb.front().template as<IfStmt>()) {
              os << " else ";
              cur = eb.front().template as<IfStmt>();
              continue;
            }
            os << " else ";
            print_block(os, eb, indent);
            break;
          }
          os << '\n';
        } else if constexpr (std::is_same_v<T, WhileStmt>) {
          os << "while (";
          print(os, n.condition);
          os << ") ";
          print_block(os, n.body, indent);
          os << '\n';
        } else if constexpr (std::is_same_v<T, ReturnStmt>) {
          os << "return";
          if (n.value) {
            os << ' ';
            print(os, *n.value);
          }
          os << ";\n";
        } else if constexpr (std::is_same_v<T, ExprStmt>) {
          print(os, n.expr);
          os << ";\n";
        } else {
          os << "assert ";
          print(os, n.condition);
          os << ";\n";
        }
      },
      s.node);
}

void print_block(std::ostream& os, const Block& b, int indent) {
  os << "{\n";
  for (const auto& s : b) print(os, s, indent + 1);
  pad(os, indent);
  os << '}';
}

void print_params(std::ostream& os, const std::vector<Param>& params) {
  os << '(';
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) os << ", ";
    os << params[i].name << ": " << params[i].type;
  }
  os << ')';
}

void print(std::ostream& os, const FunctionDecl& f, int indent) {
  pad(os, indent);
  if (f.visibility == Visibility::Private) os << "private ";
  if (f.is_static) os << "static ";
  os << "fn " << f.name;
  print_params(os, f.params);
  if (f.return_type != "void") os << " -> " << f.return_type;
  os << ' ';
  print_block(os, f.body, indent);
  os << '\n';
}

}  // namespace

std::string print_expr(const Expr& e) {
  std::ostringstream os;
  print(os, e);
  return os.str();
}

std::string print_stmt(const Stmt& s, int indent) {
  std::ostringstream os;
  print(os, s, indent);
  return os.str();
}

std::string print_function(const FunctionDecl& f, int indent) {
  std::ostringstream os;
  print(os, f, indent);
  return os.str();
}

std::string pretty_print(const ModuleAst& m) {
  std::ostringstream os;
  os << "package " << m.package_name << ";\n";
  for (const auto& imp : m.imports) os << "import " << imp << ";\n";
  for (const auto& i : m.interfaces) {
    os << "\ninterface " << i.name << " {\n";
    for (const auto& sig : i.methods) {
      os << "    fn " << sig.name;
      print_params(os, sig.params);
      if (sig.return_type != "void") os << " -> " << sig.return_type;
      os << ";\n";
    }
    os << "}\n";
  }
  for (const auto& c : m.classes) {
    os << "\nclass " << c.name;
    if (c.superclass) os << " extends " << *c.superclass;
    if (!c.interfaces.empty()) {
      os << " implements ";
      for (std::size_t i = 0; i < c.interfaces.size(); ++i) {
        if (i) os << ", ";
        os << c.interfaces[i];
      }
    }
    os << " {\n";
    for (const auto& f : c.fields) {
      os << "    var " << f.name << ": " << f.type << ";\n";
    }
    for (const auto& meth : c.methods) print(os, meth, 1);
    os << "}\n";
  }
  for (const auto& f : m.functions) {
    os << '\n';
    print(os, f, 0);
  }
  return os.str();
}

}  // namespace updcheck::minilang
