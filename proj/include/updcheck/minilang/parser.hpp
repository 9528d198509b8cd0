#pragma once

#include <string_view>

#include "updcheck/minilang/ast.hpp"

namespace updcheck::minilang {

/// Parses one MiniLang source file. Comments and whitespace are dropped;
/// every node keeps its (line, column) start position.
///
/// Throws SyntaxError on malformed input and DuplicateDefinition when a name
/// is declared twice in one namespace (top level, class body, parameter list
/// or the visible local scopes of a function). Type errors are reported later
/// by the checker, which needs the whole program.
ModuleAst parse(std::string_view source, std::string_view file = {});

}  // namespace updcheck::minilang
