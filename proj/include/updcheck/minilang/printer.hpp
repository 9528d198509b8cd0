#pragma once

#include <string>

#include "updcheck/minilang/ast.hpp"

namespace updcheck::minilang {

/// Renders a module as canonical MiniLang source. Parentheses are emitted
/// only where precedence requires them, so parse(pretty_print(m)) is
/// structurally equal to m.
std::string pretty_print(const ModuleAst& module);

std::string print_expr(const Expr& e);
std::string print_stmt(const Stmt& s, int indent = 0);
std::string print_function(const FunctionDecl& f, int indent = 0);

}  // namespace updcheck::minilang
