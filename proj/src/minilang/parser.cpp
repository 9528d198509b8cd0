#include "updcheck/minilang/parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <set>
#include <string>
#include <vector>

#include "updcheck/error.hpp"

namespace updcheck::minilang {
namespace {

enum class Tok { Ident, Keyword, Int, Punct, End };

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

constexpr std::array kKeywords = {
    "package", "import", "class",  "interface", "extends", "implements",
    "var",     "fn",     "static", "private",   "if",      "else",
    "while",   "return", "assert", "true",      "false",   "new",
    "abs",     "self",   "int",    "bool"};

bool is_keyword(std::string_view s) {
  return std::find(kKeywords.begin(), kKeywords.end(), s) != kKeywords.end();
}

class Lexer {
 public:
  Lexer(std::string_view src, std::string_view file) : src_(src), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_trivia();
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", line_, col_});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < src_.size() ? src_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (pos_ < src_.size()) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < src_.size() && peek() != '\n') advance();
      } else if (c == '/' && peek(1) == '*') {
        int line = line_, col = col_;
        advance();
        advance();
        while (pos_ < src_.size() && !(peek() == '*' && peek(1) == '/')) {
          advance();
        }
        if (pos_ >= src_.size()) {
          throw SyntaxError(std::string(file_), line, col,
                            "unterminated block comment");
        }
        advance();
        advance();
      } else {
        return;
      }
    }
  }

  Token next() {
    int line = line_, col = col_;
    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') {
        advance();
      }
      std::string text(src_.substr(start, pos_ - start));
      return {is_keyword(text) ? Tok::Keyword : Tok::Ident, text, line, col};
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) advance();
      if (std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_') {
        throw SyntaxError(std::string(file_), line, col,
                          "malformed integer literal");
      }
      return {Tok::Int, std::string(src_.substr(start, pos_ - start)), line, col};
    }
    static constexpr std::array kTwo = {"->", "==", "!=", "<=", ">=", "&&", "||"};
    for (const char* p : kTwo) {
      if (c == p[0] && peek(1) == p[1]) {
        advance();
        advance();
        return {Tok::Punct, p, line, col};
      }
    }
    static constexpr std::string_view kOne = "{}();,.:=<>+-*/%^!";
    if (kOne.find(c) != std::string_view::npos) {
      advance();
      return {Tok::Punct, std::string(1, c), line, col};
    }
    throw SyntaxError(std::string(file_), line, col,
                      std::string("unexpected character '") + c + "'");
  }

  std::string_view src_;
  std::string_view file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> toks, std::string_view file)
      : toks_(std::move(toks)), file_(file) {}

  ModuleAst module() {
    ModuleAst m;
    expect_keyword("package");
    m.package_name = ident("package name");
    expect(";");
    while (at_keyword("import")) {
      const Token& t = take();
      std::string name = ident("package name");
      if (name == m.package_name) {
        throw SyntaxError(file(), t.line, t.column,
                          "package '" + name + "' imports itself");
      }
      if (std::find(m.imports.begin(), m.imports.end(), name) !=
          m.imports.end()) {
        throw DuplicateDefinition(file(), t.line, t.column,
                                  "duplicate import of '" + name + "'");
      }
      m.imports.push_back(name);
      expect(";");
    }
    package_ = m.package_name;
    std::set<std::string> top_names;
    auto claim = [&](const std::string& name, const Token& at) {
      if (!top_names.insert(name).second) {
        throw DuplicateDefinition(file(), at.line, at.column,
                                  "'" + name + "' is already defined in package " +
                                      m.package_name);
      }
    };
    while (cur().kind != Tok::End) {
      const Token& at = cur();
      if (at_keyword("class")) {
        m.classes.push_back(class_decl());
        claim(m.classes.back().name, at);
      } else if (at_keyword("interface")) {
        m.interfaces.push_back(interface_decl());
        claim(m.interfaces.back().name, at);
      } else if (at_keyword("fn") || at_keyword("private")) {
        m.functions.push_back(function_decl("", /*in_class=*/false));
        claim(m.functions.back().name, at);
      } else {
        fail("expected 'class', 'interface' or 'fn'");
      }
    }
    return m;
  }

 private:
  // ---- token helpers -----------------------------------------------------
  const Token& cur() const { return toks_[pos_]; }
  const Token& lookahead(std::size_t n) const {
    return toks_[std::min(pos_ + n, toks_.size() - 1)];
  }
  const Token& take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
  std::string file() const { return std::string(file_); }
  Span here() const { return {cur().line, cur().column}; }

  [[noreturn]] void fail(const std::string& what) const {
    const Token& t = cur();
    std::string found = t.kind == Tok::End ? "end of file" : "'" + t.text + "'";
    throw SyntaxError(file(), t.line, t.column, what + ", found " + found);
  }

  bool at(std::string_view punct) const {
    return cur().kind == Tok::Punct && cur().text == punct;
  }
  bool at_keyword(std::string_view kw) const {
    return cur().kind == Tok::Keyword && cur().text == kw;
  }
  bool accept(std::string_view punct) {
    if (!at(punct)) return false;
    take();
    return true;
  }
  void expect(std::string_view punct) {
    if (!accept(punct)) fail("expected '" + std::string(punct) + "'");
  }
  void expect_keyword(std::string_view kw) {
    if (!at_keyword(kw)) fail("expected '" + std::string(kw) + "'");
    take();
  }
  std::string ident(const char* what) {
    if (cur().kind != Tok::Ident) fail(std::string("expected ") + what);
    return take().text;
  }

  // ---- declarations ------------------------------------------------------
  std::string type_name() {
    if (at_keyword("int") || at_keyword("bool")) return take().text;
    std::string name = ident("type name");
    while (at(".") && lookahead(1).kind == Tok::Ident) {
      take();
      name += "." + take().text;
    }
    return name;
  }

  std::vector<Param> params() {
    std::vector<Param> out;
    expect("(");
    if (!at(")")) {
      do {
        const Token& at_tok = cur();
        Param p;
        p.name = ident("parameter name");
        expect(":");
        p.type = type_name();
        for (const auto& q : out) {
          if (q.name == p.name) {
            throw DuplicateDefinition(file(), at_tok.line, at_tok.column,
                                      "duplicate parameter '" + p.name + "'");
          }
        }
        out.push_back(std::move(p));
      } while (accept(","));
    }
    expect(")");
    return out;
  }

  std::string return_type() {
    if (accept("->")) return type_name();
    return "void";
  }

  ClassDecl class_decl() {
    ClassDecl c;
    c.span = here();
    expect_keyword("class");
    c.name = ident("class name");
    if (at_keyword("extends")) {
      take();
      c.superclass = type_name();
    }
    if (at_keyword("implements")) {
      take();
      do {
        c.interfaces.push_back(type_name());
      } while (accept(","));
    }
    expect("{");
    std::set<std::string> names;
    while (!at("}")) {
      const Token& t = cur();
      if (at_keyword("var")) {
        take();
        FieldDecl f;
        f.span = {t.line, t.column};
        f.name = ident("field name");
        expect(":");
        f.type = type_name();
        expect(";");
        if (!names.insert(f.name).second) {
          throw DuplicateDefinition(file(), t.line, t.column,
                                    "duplicate member '" + f.name + "' in class " +
                                        c.name);
        }
        c.fields.push_back(std::move(f));
      } else if (at_keyword("fn") || at_keyword("static") ||
                 at_keyword("private")) {
        c.methods.push_back(function_decl(c.name, /*in_class=*/true));
        if (!names.insert(c.methods.back().name).second) {
          throw DuplicateDefinition(file(), t.line, t.column,
                                    "duplicate member '" + c.methods.back().name +
                                        "' in class " + c.name);
        }
      } else {
        fail("expected 'var' or 'fn' in class body");
      }
    }
    expect("}");
    return c;
  }

  InterfaceDecl interface_decl() {
    InterfaceDecl d;
    d.span = here();
    expect_keyword("interface");
    d.name = ident("interface name");
    expect("{");
    std::set<std::string> names;
    while (!at("}")) {
      MethodSig s;
      s.span = here();
      expect_keyword("fn");
      s.name = ident("method name");
      s.params = params();
      s.return_type = return_type();
      expect(";");
      if (!names.insert(s.name).second) {
        throw DuplicateDefinition(file(), s.span.line, s.span.column,
                                  "duplicate method '" + s.name +
                                      "' in interface " + d.name);
      }
      d.methods.push_back(std::move(s));
    }
    expect("}");
    return d;
  }

  FunctionDecl function_decl(const std::string& owner, bool in_class) {
    FunctionDecl f;
    f.owner = owner;
    if (at_keyword("private")) {
      take();
      f.visibility = Visibility::Private;
    }
    if (in_class && at_keyword("static")) {
      take();
      f.is_static = true;
    }
    f.span = here();
    expect_keyword("fn");
    f.name = ident("function name");
    f.qualified_name =
        owner.empty() ? package_ + "." + f.name : package_ + "." + owner + "." + f.name;
    f.params = params();
    f.return_type = return_type();

    scopes_.clear();
    scopes_.emplace_back();
    if (in_class && !f.is_static) scopes_.back().push_back("self");
    for (const auto& p : f.params) scopes_.back().push_back(p.name);
    f.body = block(/*new_scope=*/false);
    f.end = last_end_;
    scopes_.clear();
    return f;
  }

  // ---- statements --------------------------------------------------------
  bool is_local(const std::string& name) const {
    for (const auto& s : scopes_) {
      if (std::find(s.begin(), s.end(), name) != s.end()) return true;
    }
    return false;
  }

  Block block(bool new_scope = true) {
    expect("{");
    if (new_scope) scopes_.emplace_back();
    Block b;
    while (!at("}")) {
      if (cur().kind == Tok::End) fail("expected '}'");
      b.push_back(statement());
    }
    last_end_ = here();
    take();
    if (new_scope) scopes_.pop_back();
    return b;
  }

  Stmt statement() {
    Span span = here();
    if (at_keyword("var")) {
      take();
      const Token& name_tok = cur();
      VarDeclStmt d;
      d.name = ident("variable name");
      expect(":");
      d.type = type_name();
      expect("=");
      d.init = expression();
      expect(";");
      if (is_local(d.name)) {
        throw DuplicateDefinition(file(), name_tok.line, name_tok.column,
                                  "'" + d.name + "' is already declared");
      }
      scopes_.back().push_back(d.name);
      return {std::move(d), span};
    }
    if (at_keyword("if")) return if_statement();
    if (at_keyword("while")) {
      take();
      WhileStmt w;
      expect("(");
      w.condition = expression();
      expect(")");
      w.body = block();
      return {std::move(w), span};
    }
    if (at_keyword("return")) {
      take();
      ReturnStmt r;
      if (!at(";")) r.value = expression();
      expect(";");
      return {std::move(r), span};
    }
    if (at_keyword("assert")) {
      take();
      AssertStmt a{expression()};
      expect(";");
      return {std::move(a), span};
    }
    Expr e = expression();
    if (accept("=")) {
      if (!e.as<VarRef>() && !e.as<FieldAccessExpr>()) {
        throw SyntaxError(file(), span.line, span.column,
                          "left side of assignment must be a variable or field");
      }
      AssignStmt a{std::move(e), expression()};
      expect(";");
      return {std::move(a), span};
    }
    expect(";");
    return {ExprStmt{std::move(e)}, span};
  }

  Stmt if_statement() {
    Span span = here();
    expect_keyword("if");
    IfStmt s;
    expect("(");
    s.condition = expression();
    expect(")");
    s.then_block = block();
    if (at_keyword("else")) {
      take();
      if (at_keyword("if")) {
        Block b;
        b.push_back(if_statement());
        s.else_block = std::move(b);
      } else {
        s.else_block = block();
      }
    }
    return {std::move(s), span};
  }

  // ---- expressions -------------------------------------------------------
  Expr expression() { return binary(0); }

  struct Level {
    std::array<std::pair<const char*, BinaryOp>, 4> ops;
    int count;
    bool chain;
  };

  static const Level& level(int i) {
    using B = BinaryOp;
    static const std::array<Level, 7> levels = {{
        {{{{"||", B::Or}}}, 1, true},
        {{{{"^", B::Xor}}}, 1, true},
        {{{{"&&", B::And}}}, 1, true},
        {{{{"==", B::Eq}, {"!=", B::Ne}}}, 2, true},
        {{{{"<", B::Lt}, {"<=", B::Le}, {">", B::Gt}, {">=", B::Ge}}}, 4, false},
        {{{{"+", B::Add}, {"-", B::Sub}}}, 2, true},
        {{{{"*", B::Mul}, {"/", B::Div}, {"%", B::Mod}}}, 3, true},
    }};
    return levels[i];
  }

  Expr binary(int lvl) {
    if (lvl == 7) return unary();
    Expr lhs = binary(lvl + 1);
    const Level& L = level(lvl);
    for (;;) {
      std::optional<BinaryOp> op;
      for (int i = 0; i < L.count; ++i) {
        if (at(L.ops[i].first)) op = L.ops[i].second;
      }
      if (!op) return lhs;
      take();
      Span span = lhs.span;
      Expr rhs = binary(lvl + 1);
      lhs = Expr{BinaryExpr{*op, std::move(lhs), std::move(rhs)}, span};
      if (!L.chain) {
        for (int i = 0; i < L.count; ++i) {
          if (at(L.ops[i].first)) fail("comparison operators do not chain");
        }
        return lhs;
      }
    }
  }

  Expr unary() {
    Span span = here();
    if (accept("-")) return {UnaryExpr{UnaryOp::Neg, unary()}, span};
    if (accept("!")) return {UnaryExpr{UnaryOp::Not, unary()}, span};
    if (at_keyword("abs")) {
      take();
      expect("(");
      Expr inner = expression();
      expect(")");
      return postfix({UnaryExpr{UnaryOp::Abs, std::move(inner)}, span});
    }
    return postfix(primary());
  }

  std::vector<Expr> args() {
    std::vector<Expr> out;
    expect("(");
    if (!at(")")) {
      do {
        out.push_back(expression());
      } while (accept(","));
    }
    expect(")");
    return out;
  }

  Expr postfix(Expr e) {
    while (at(".")) {
      take();
      Span span = e.span;
      std::string name = ident("member name");
      if (at("(")) {
        auto call_args = args();
        e = Expr{MethodCallExpr{std::move(e), name, std::move(call_args)}, span};
      } else {
        e = Expr{FieldAccessExpr{std::move(e), name}, span};
      }
    }
    return e;
  }

  Expr primary() {
    Span span = here();
    const Token& t = cur();
    if (t.kind == Tok::Int) {
      std::int64_t value = 0;
      auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
      if (ec != std::errc()) {
        throw SyntaxError(file(), t.line, t.column, "integer literal out of range");
      }
      take();
      return {IntLit{value}, span};
    }
    if (at_keyword("true") || at_keyword("false")) {
      bool v = take().text == "true";
      return {BoolLit{v}, span};
    }
    if (at_keyword("self")) {
      if (!is_local("self")) {
        throw SyntaxError(file(), t.line, t.column,
                          "'self' used outside an instance method");
      }
      take();
      return {VarRef{"self"}, span};
    }
    if (at_keyword("new")) {
      take();
      NewExpr n{type_name()};
      expect("(");
      expect(")");
      return {std::move(n), span};
    }
    if (accept("(")) {
      Expr inner = expression();
      expect(")");
      return inner;
    }
    if (t.kind == Tok::Ident) {
      std::string name = take().text;
      if (is_local(name)) return {VarRef{name}, span};
      // A chain that does not start at a local names a package, class or
      // free function and must end in a call.
      std::string path = name;
      while (at(".") && lookahead(1).kind == Tok::Ident) {
        take();
        path += "." + take().text;
      }
      if (at("(")) return {CallExpr{path, args()}, span};
      if (path != name) fail("expected '(' after qualified name '" + path + "'");
      return {VarRef{name}, span};
    }
    fail("expected expression");
  }

  std::vector<Token> toks_;
  std::string_view file_;
  std::size_t pos_ = 0;
  std::string package_;
  std::vector<std::vector<std::string>> scopes_;
  Span last_end_;
};

}  // namespace

ModuleAst parse(std::string_view source, std::string_view file) {
  Parser p(Lexer(source, file).run(), file);
  return p.module();
}

}  // namespace updcheck::minilang
