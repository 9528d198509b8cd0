#include <algorithm>
#include <functional>
#include <set>

#include "updcheck/error.hpp"
#include "updcheck/minilang/semantic.hpp"

namespace updcheck::minilang {

std::string_view to_string(Origin origin) {
  switch (origin) {
    case Origin::Client: return "client";
    case Origin::DirectDep: return "direct-dep";
    case Origin::TransitiveDep: return "transitive-dep";
  }
  return "?";
}

std::string Type::str() const {
  switch (kind) {
    case Kind::Void: return "void";
    case Kind::Int: return "int";
    case Kind::Bool: return "bool";
    case Kind::Object: return name;
  }
  return "?";
}

const PackageUnit* Program::find(std::string_view name) const {
  for (const auto& p : packages) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

PackageUnit* Program::find(std::string_view name) {
  for (auto& p : packages) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const PackageUnit* Program::client() const {
  for (const auto& p : packages) {
    if (p.origin == Origin::Client) return &p;
  }
  return nullptr;
}

int ClassInfo::field_slot(std::string_view name) const {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (fields[i].first == name) return static_cast<int>(i);
  }
  return -1;
}

bool ClassInfo::is_subclass_of(const ClassInfo& other) const {
  for (const ClassInfo* c = this; c; c = c->superclass) {
    if (c == &other) return true;
  }
  return false;
}

bool ClassInfo::implements(const InterfaceInfo& iface) const {
  for (const ClassInfo* c = this; c; c = c->superclass) {
    for (const auto* i : c->interfaces) {
      if (i == &iface) return true;
    }
  }
  return false;
}

const FunctionInfo* SemanticModel::function(std::string_view qname) const {
  auto it = functions_.find(qname);
  return it == functions_.end() ? nullptr : it->second;
}

const ClassInfo* SemanticModel::class_named(std::string_view qname) const {
  auto it = classes_.find(qname);
  return it == classes_.end() ? nullptr : it->second;
}

const InterfaceInfo* SemanticModel::interface_named(std::string_view qname) const {
  auto it = interfaces_.find(qname);
  return it == interfaces_.end() ? nullptr : it->second;
}

const ExprInfo& SemanticModel::info(const Expr& e) const {
  auto it = exprs_.find(&e);
  if (it == exprs_.end()) {
    throw std::logic_error("expression does not belong to this program");
  }
  return it->second;
}

std::vector<const ClassInfo*> SemanticModel::subtypes_of(const Type& t) const {
  std::vector<const ClassInfo*> out;
  if (!t.is_object()) return out;
  if (const ClassInfo* base = class_named(t.name)) {
    for (const auto* c : sorted_classes_) {
      if (c->is_subclass_of(*base)) out.push_back(c);
    }
  } else if (const InterfaceInfo* iface = interface_named(t.name)) {
    for (const auto* c : sorted_classes_) {
      if (c->implements(*iface)) out.push_back(c);
    }
  }
  return out;
}

namespace {

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    std::size_t dot = path.find('.', start);
    out.push_back(path.substr(start, dot - start));
    if (dot == std::string::npos) return out;
    start = dot + 1;
  }
}

bool definitely_returns(const Block& b);

bool definitely_returns(const Stmt& s) {
  if (s.as<ReturnStmt>()) return true;
  if (const auto* i = s.as<IfStmt>()) {
    return i->else_block && definitely_returns(i->then_block) &&
           definitely_returns(*i->else_block);
  }
  return false;
}

bool definitely_returns(const Block& b) {
  return std::any_of(b.begin(), b.end(),
                     [](const Stmt& s) { return definitely_returns(s); });
}

}  // namespace

class Checker {
 public:
  explicit Checker(SemanticModel& model) : m_(model) {}

  void run() {
    collect();
    resolve_hierarchy();
    resolve_signatures();
    for (auto& c : m_.class_store_) layout(c);
    check_conformance();
    for (auto& f : m_.function_store_) check_body(f);

    for (const auto& [name, f] : m_.functions_) m_.sorted_functions_.push_back(f);
    for (const auto& [name, c] : m_.classes_) m_.sorted_classes_.push_back(c);
  }

 private:
  struct Ctx {
    const PackageUnit* pkg = nullptr;
    const ModuleAst* module = nullptr;
    std::string file;
  };

  struct PackageSymbols {
    std::map<std::string, ClassInfo*> classes;
    std::map<std::string, InterfaceInfo*> interfaces;
    std::map<std::string, FunctionInfo*> functions;
  };

  struct Local {
    std::string name;
    Type type;
  };

  struct FnScope {
    const Ctx* ctx;
    const FunctionInfo* fn;
    std::vector<std::vector<Local>> scopes;
  };

  [[noreturn]] void error(const Ctx& ctx, Span at, const std::string& msg) const {
    throw TypeError(ctx.pkg->name + "/" + ctx.file, at.line, at.column, msg);
  }

  // ---- symbol collection -------------------------------------------------
  void collect() {
    std::set<std::string> seen_packages;
    for (const auto& pkg : m_.program_.packages) {
      if (pkg.name == "std") {
        throw TypeError(pkg.name, 0, 0, "package name 'std' is reserved");
      }
      if (!seen_packages.insert(pkg.name).second) {
        throw TypeError(pkg.name, 0, 0, "package '" + pkg.name + "' appears twice");
      }
    }
    for (const auto& pkg : m_.program_.packages) {
      auto& syms = symbols_[pkg.name];
      auto add_file = [&](const SourceFile& sf, bool is_test) {
        const ModuleAst& mod = *sf.ast;
        ctx_store_.push_back({&pkg, &mod, sf.path});
        const Ctx* ctx = &ctx_store_.back();
        if (mod.package_name != pkg.name) {
          error(*ctx, {1, 1},
                "file declares package '" + mod.package_name +
                    "' but belongs to package '" + pkg.name + "'");
        }
        for (const auto& imp : mod.imports) {
          if (!m_.program_.find(imp) && imp != "std") {
            error(*ctx, {1, 1}, "import of unknown package '" + imp + "'");
          }
        }
        auto claim = [&](const std::string& name, Span at) {
          if (syms.classes.count(name) || syms.interfaces.count(name) ||
              syms.functions.count(name)) {
            throw DuplicateDefinition(pkg.name + "/" + sf.path, at.line, at.column,
                                      "'" + name + "' is already defined in package " +
                                          pkg.name);
          }
        };
        for (const auto& iface : mod.interfaces) {
          claim(iface.name, iface.span);
          auto& info = m_.interface_store_.emplace_back();
          info.qualified_name = pkg.name + "." + iface.name;
          info.decl = &iface;
          info.package = &pkg;
          syms.interfaces[iface.name] = &info;
          m_.interfaces_[info.qualified_name] = &info;
          interface_ctx_[&info] = ctx;
        }
        for (const auto& cls : mod.classes) {
          claim(cls.name, cls.span);
          auto& info = m_.class_store_.emplace_back();
          info.qualified_name = pkg.name + "." + cls.name;
          info.decl = &cls;
          info.package = &pkg;
          syms.classes[cls.name] = &info;
          m_.classes_[info.qualified_name] = &info;
          class_ctx_[&info] = ctx;
          for (const auto& meth : cls.methods) {
            auto& f = add_function(meth, pkg, sf.path, is_test, ctx);
            f.owner = &info;
            info.methods[meth.name] = &f;
          }
        }
        for (const auto& fn : mod.functions) {
          claim(fn.name, fn.span);
          auto& f = add_function(fn, pkg, sf.path, is_test, ctx);
          syms.functions[fn.name] = &f;
        }
      };
      for (const auto& sf : pkg.sources) add_file(sf, false);
      for (const auto& sf : pkg.tests) add_file(sf, true);
    }
  }

  FunctionInfo& add_function(const FunctionDecl& decl, const PackageUnit& pkg,
                             const std::string& file, bool is_test, const Ctx* ctx) {
    auto& f = m_.function_store_.emplace_back();
    f.qualified_name = decl.qualified_name;
    f.decl = &decl;
    f.package = &pkg;
    f.file = file;
    f.in_test_file = is_test;
    m_.functions_[f.qualified_name] = &f;
    function_ctx_[&f] = ctx;
    return f;
  }

  // ---- type names --------------------------------------------------------
  struct TypeRef {
    ClassInfo* cls = nullptr;
    InterfaceInfo* iface = nullptr;
  };

  bool visible_package(const Ctx& ctx, const std::string& name) const {
    if (name == ctx.pkg->name) return true;
    const auto& imps = ctx.module->imports;
    return std::find(imps.begin(), imps.end(), name) != imps.end();
  }

  TypeRef lookup_in(const std::string& pkg, const std::string& name) {
    TypeRef r;
    auto it = symbols_.find(pkg);
    if (it == symbols_.end()) return r;
    if (auto c = it->second.classes.find(name); c != it->second.classes.end()) {
      r.cls = c->second;
    }
    if (auto i = it->second.interfaces.find(name); i != it->second.interfaces.end()) {
      r.iface = i->second;
    }
    return r;
  }

  TypeRef find_type(const Ctx& ctx, const std::string& name, Span at) {
    auto segs = split_path(name);
    if (segs.size() == 2) {
      if (!visible_package(ctx, segs[0])) {
        error(ctx, at, "package '" + segs[0] + "' is not imported");
      }
      return lookup_in(segs[0], segs[1]);
    }
    if (segs.size() != 1) return {};
    TypeRef local = lookup_in(ctx.pkg->name, name);
    if (local.cls || local.iface) return local;
    TypeRef found;
    std::string found_in;
    for (const auto& imp : ctx.module->imports) {
      TypeRef r = lookup_in(imp, name);
      if (!r.cls && !r.iface) continue;
      if (found.cls || found.iface) {
        error(ctx, at, "type '" + name + "' is ambiguous between packages '" +
                           found_in + "' and '" + imp + "'");
      }
      found = r;
      found_in = imp;
    }
    return found;
  }

  Type resolve_type(const Ctx& ctx, const std::string& name, Span at,
                    bool allow_void = false) {
    if (name == "int") return Type::int_();
    if (name == "bool") return Type::bool_();
    if (name == "void" && allow_void) return Type::void_();
    TypeRef r = find_type(ctx, name, at);
    if (r.cls) return Type::object(r.cls->qualified_name);
    if (r.iface) return Type::object(r.iface->qualified_name);
    error(ctx, at, "unknown type '" + name + "'");
  }

  // ---- hierarchy ---------------------------------------------------------
  void resolve_hierarchy() {
    for (auto& c : m_.class_store_) {
      const Ctx& ctx = *class_ctx_.at(&c);
      if (c.decl->superclass) {
        TypeRef r = find_type(ctx, *c.decl->superclass, c.decl->span);
        if (!r.cls) {
          error(ctx, c.decl->span,
                "superclass '" + *c.decl->superclass + "' is not a known class");
        }
        c.superclass = r.cls;
      }
      for (const auto& iname : c.decl->interfaces) {
        TypeRef r = find_type(ctx, iname, c.decl->span);
        if (!r.iface) {
          error(ctx, c.decl->span, "'" + iname + "' is not a known interface");
        }
        if (std::find(c.interfaces.begin(), c.interfaces.end(), r.iface) !=
            c.interfaces.end()) {
          error(ctx, c.decl->span, "interface '" + iname + "' listed twice");
        }
        c.interfaces.push_back(r.iface);
      }
    }
    for (auto& c : m_.class_store_) {
      std::set<const ClassInfo*> seen;
      for (const ClassInfo* k = &c; k; k = k->superclass) {
        if (!seen.insert(k).second) {
          error(*class_ctx_.at(&c), c.decl->span,
                "class hierarchy of '" + c.qualified_name + "' is cyclic");
        }
      }
    }
  }

  std::vector<Type> param_types(const Ctx& ctx, const std::vector<Param>& ps, Span at) {
    std::vector<Type> out;
    for (const auto& p : ps) out.push_back(resolve_type(ctx, p.type, at));
    return out;
  }

  void resolve_signatures() {
    for (auto& i : m_.interface_store_) {
      const Ctx& ctx = *interface_ctx_.at(&i);
      for (const auto& sig : i.decl->methods) {
        i.methods[sig.name] = {param_types(ctx, sig.params, sig.span),
                               resolve_type(ctx, sig.return_type, sig.span, true)};
      }
    }
    for (auto& f : m_.function_store_) {
      const Ctx& ctx = *function_ctx_.at(&f);
      f.param_types = param_types(ctx, f.decl->params, f.decl->span);
      f.return_type = resolve_type(ctx, f.decl->return_type, f.decl->span, true);
      if (f.in_test_file && f.decl->is_test() &&
          f.decl->visibility == Visibility::Public &&
          (f.is_instance_method() || !f.param_types.empty() ||
           f.return_type.kind != Type::Kind::Void)) {
        error(ctx, f.decl->span,
              "test function '" + f.qualified_name +
                  "' must be static, take no parameters and return nothing");
      }
    }
  }

  void layout(ClassInfo& c) {
    if (laid_out_.count(&c)) return;
    const Ctx& ctx = *class_ctx_.at(&c);
    if (c.superclass) {
      auto* super = const_cast<ClassInfo*>(c.superclass);
      layout(*super);
      c.fields = super->fields;
      c.vtable = super->vtable;
    }
    for (const auto& fd : c.decl->fields) {
      if (c.field_slot(fd.name) >= 0) {
        error(ctx, fd.span, "field '" + fd.name + "' shadows an inherited field");
      }
      c.fields.emplace_back(fd.name, resolve_type(ctx, fd.type, fd.span));
    }
    for (const auto& [name, f] : c.methods) {
      const ClassInfo* ancestor = c.superclass;
      const FunctionInfo* inherited = nullptr;
      for (; ancestor && !inherited; ancestor = ancestor->superclass) {
        auto it = ancestor->methods.find(name);
        if (it != ancestor->methods.end()) inherited = it->second;
      }
      if (inherited) {
        bool both_instance = f->is_instance_method() && inherited->is_instance_method();
        if (!both_instance || inherited->param_types != f->param_types ||
            inherited->return_type != f->return_type) {
          error(ctx, f->decl->span,
                "method '" + f->qualified_name + "' does not match the inherited '" +
                    inherited->qualified_name + "'");
        }
      }
      if (f->is_instance_method()) c.vtable[name] = f;
    }
    laid_out_.insert(&c);
  }

  void check_conformance() {
    for (auto& c : m_.class_store_) {
      const Ctx& ctx = *class_ctx_.at(&c);
      for (const auto* iface : c.interfaces) {
        for (const auto& [name, sig] : iface->methods) {
          auto it = c.vtable.find(name);
          if (it == c.vtable.end()) {
            error(ctx, c.decl->span,
                  "class '" + c.qualified_name + "' does not implement '" +
                      iface->qualified_name + "." + name + "'");
          }
          MethodSignature have{it->second->param_types, it->second->return_type};
          if (!(have == sig)) {
            error(ctx, it->second->decl->span,
                  "'" + it->second->qualified_name + "' does not match the signature of '" +
                      iface->qualified_name + "." + name + "'");
          }
        }
      }
    }
  }

  // ---- bodies --------------------------------------------------------------
  bool assignable(const Type& from, const Type& to) const {
    if (from.kind != to.kind) return false;
    if (!to.is_object()) return true;
    if (from.name == to.name) return true;
    const ClassInfo* src = m_.class_named(from.name);
    if (!src) return false;
    if (const ClassInfo* dst = m_.class_named(to.name)) return src->is_subclass_of(*dst);
    if (const InterfaceInfo* dst = m_.interface_named(to.name)) return src->implements(*dst);
    return false;
  }

  void expect_type(const FnScope& fs, const Expr& e, const Type& have, const Type& want,
                   const char* what) {
    if (!assignable(have, want)) {
      error(*fs.ctx, e.span,
            std::string(what) + ": expected " + want.str() + ", found " + have.str());
    }
  }

  const Local* find_local(const FnScope& fs, const std::string& name) const {
    for (auto s = fs.scopes.rbegin(); s != fs.scopes.rend(); ++s) {
      for (const auto& l : *s) {
        if (l.name == name) return &l;
      }
    }
    return nullptr;
  }

  void check_body(const FunctionInfo& f) {
    FnScope fs{function_ctx_.at(&f), &f, {}};
    fs.scopes.emplace_back();
    if (f.is_instance_method()) {
      fs.scopes.back().push_back({"self", Type::object(f.owner->qualified_name)});
    }
    for (std::size_t i = 0; i < f.param_types.size(); ++i) {
      fs.scopes.back().push_back({f.decl->params[i].name, f.param_types[i]});
    }
    block(fs, f.decl->body, /*new_scope=*/false);
    if (f.return_type.kind != Type::Kind::Void && !definitely_returns(f.decl->body)) {
      error(*fs.ctx, f.decl->end,
            "function '" + f.qualified_name + "' may finish without returning a value");
    }
  }

  void block(FnScope& fs, const Block& b, bool new_scope = true) {
    if (new_scope) fs.scopes.emplace_back();
    for (const auto& s : b) stmt(fs, s);
    if (new_scope) fs.scopes.pop_back();
  }

  void stmt(FnScope& fs, const Stmt& s) {
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarDeclStmt>) {
            Type t = resolve_type(*fs.ctx, n.type, s.span);
            expect_type(fs, n.init, expr(fs, n.init), t, "initializer");
            if (find_local(fs, n.name)) {
              throw DuplicateDefinition(fs.ctx->pkg->name + "/" + fs.ctx->file,
                                        s.span.line, s.span.column,
                                        "'" + n.name + "' is already declared");
            }
            fs.scopes.back().push_back({n.name, t});
          } else if constexpr (std::is_same_v<T, AssignStmt>) {
            if (const auto* v = n.target.template as<VarRef>(); v && v->name == "self") {
              error(*fs.ctx, n.target.span, "cannot assign to 'self'");
            }
            Type target = expr(fs, n.target);
            expect_type(fs, n.value, expr(fs, n.value), target, "assignment");
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            expect_type(fs, n.condition, expr(fs, n.condition), Type::bool_(), "condition");
            block(fs, n.then_block);
            if (n.else_block) block(fs, *n.else_block);
          } else if constexpr (std::is_same_v<T, WhileStmt>) {
            expect_type(fs, n.condition, expr(fs, n.condition), Type::bool_(), "condition");
            block(fs, n.body);
          } else if constexpr (std::is_same_v<T, ReturnStmt>) {
            const Type& want = fs.fn->return_type;
            if (!n.value) {
              if (want.kind != Type::Kind::Void) {
                error(*fs.ctx, s.span, "missing return value");
              }
            } else {
              if (want.kind == Type::Kind::Void) {
                error(*fs.ctx, s.span, "void function returns a value");
              }
              expect_type(fs, *n.value, expr(fs, *n.value), want, "return value");
            }
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            expr(fs, n.expr);
          } else {
            expect_type(fs, n.condition, expr(fs, n.condition), Type::bool_(), "assertion");
          }
        },
        s.node);
  }

  void check_args(FnScope& fs, const Expr& call, const std::vector<Expr>& args,
                  const std::vector<Type>& params, const std::string& callee) {
    if (args.size() != params.size()) {
      error(*fs.ctx, call.span,
            "'" + callee + "' expects " + std::to_string(params.size()) +
                " argument(s), got " + std::to_string(args.size()));
    }
    for (std::size_t i = 0; i < args.size(); ++i) {
      expect_type(fs, args[i], expr(fs, args[i]), params[i], "argument");
    }
  }

  void check_access(const FnScope& fs, const Expr& at, const FunctionInfo& target) {
    if (target.decl->visibility == Visibility::Private &&
        target.package != fs.fn->package) {
      error(*fs.ctx, at.span, "'" + target.qualified_name + "' is private");
    }
  }

  const FunctionInfo* find_static(const ClassInfo* c, const std::string& name) {
    for (; c; c = c->superclass) {
      auto it = c->methods.find(name);
      if (it != c->methods.end()) return it->second;
    }
    return nullptr;
  }

  const FunctionInfo* resolve_callee(FnScope& fs, const Expr& e, const std::string& path,
                                     std::optional<Builtin>& builtin) {
    const Ctx& ctx = *fs.ctx;
    auto segs = split_path(path);
    auto free_fn = [&](const std::string& pkg, const std::string& name) -> const FunctionInfo* {
      auto it = symbols_.find(pkg);
      if (it == symbols_.end()) return nullptr;
      auto f = it->second.functions.find(name);
      return f == it->second.functions.end() ? nullptr : f->second;
    };
    auto static_in = [&](const ClassInfo* cls, const std::string& name) {
      const FunctionInfo* f = find_static(cls, name);
      if (!f) {
        error(ctx, e.span, "class '" + cls->qualified_name + "' has no method '" + name + "'");
      }
      if (f->is_instance_method()) {
        error(ctx, e.span, "instance method '" + f->qualified_name +
                               "' needs a receiver");
      }
      return f;
    };
    if (segs.size() == 1) {
      if (fs.fn->owner) {
        if (const FunctionInfo* f = find_static(fs.fn->owner, segs[0])) {
          if (f->is_instance_method()) {
            error(ctx, e.span, "instance method '" + f->qualified_name +
                                   "' needs a receiver (use self." + segs[0] + "())");
          }
          return f;
        }
      }
      if (const FunctionInfo* f = free_fn(ctx.pkg->name, segs[0])) return f;
      const FunctionInfo* found = nullptr;
      for (const auto& imp : ctx.module->imports) {
        if (const FunctionInfo* f = free_fn(imp, segs[0])) {
          if (found) {
            error(ctx, e.span, "call to '" + segs[0] + "' is ambiguous");
          }
          found = f;
        }
      }
      if (!found) error(ctx, e.span, "unknown function '" + path + "'");
      return found;
    }
    if (segs.size() == 2) {
      TypeRef r = segs[0].find('.') == std::string::npos ? lookup_visible_class(ctx, segs[0])
                                                         : TypeRef{};
      if (r.cls) return static_in(r.cls, segs[1]);
      if (segs[0] == "std") {
        static const std::map<std::string, Builtin> builtins = {
            {"print", Builtin::Print}, {"min", Builtin::Min}, {"max", Builtin::Max}};
        auto it = builtins.find(segs[1]);
        if (it == builtins.end()) error(ctx, e.span, "unknown function '" + path + "'");
        builtin = it->second;
        return nullptr;
      }
      if (visible_package(ctx, segs[0])) {
        if (const FunctionInfo* f = free_fn(segs[0], segs[1])) return f;
      }
      error(ctx, e.span, "unknown function '" + path + "'");
    }
    if (segs.size() == 3) {
      if (!visible_package(ctx, segs[0])) {
        error(ctx, e.span, "package '" + segs[0] + "' is not imported");
      }
      TypeRef r = lookup_in(segs[0], segs[1]);
      if (!r.cls) error(ctx, e.span, "unknown class '" + segs[0] + "." + segs[1] + "'");
      return static_in(r.cls, segs[2]);
    }
    error(ctx, e.span, "malformed callee '" + path + "'");
  }

  TypeRef lookup_visible_class(const Ctx& ctx, const std::string& name) {
    TypeRef r = find_type(ctx, name, {});
    return r.cls ? r : TypeRef{};
  }

  Type expr(FnScope& fs, const Expr& e) {
    ExprInfo info;
    const Ctx& ctx = *fs.ctx;
    std::visit(
        [&](const auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            info.type = Type::int_();
          } else if constexpr (std::is_same_v<T, BoolLit>) {
            info.type = Type::bool_();
          } else if constexpr (std::is_same_v<T, VarRef>) {
            const Local* l = find_local(fs, n.name);
            if (!l) error(ctx, e.span, "unknown variable '" + n.name + "'");
            info.type = l->type;
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            Type l = expr(fs, *n.lhs);
            Type r = expr(fs, *n.rhs);
            auto bad = [&] {
              error(ctx, e.span,
                    "operator '" + std::string(to_string(n.op)) + "' cannot take " +
                        l.str() + " and " + r.str());
            };
            if (is_arithmetic(n.op)) {
              if (!l.is_int() || !r.is_int()) bad();
              info.type = Type::int_();
            } else if (n.op == BinaryOp::Eq || n.op == BinaryOp::Ne) {
              if (!((l.is_int() && r.is_int()) || (l.is_bool() && r.is_bool()))) bad();
              info.type = Type::bool_();
            } else if (is_relational(n.op)) {
              if (!l.is_int() || !r.is_int()) bad();
              info.type = Type::bool_();
            } else {
              if (!l.is_bool() || !r.is_bool()) bad();
              info.type = Type::bool_();
            }
          } else if constexpr (std::is_same_v<T, UnaryExpr>) {
            Type t = expr(fs, *n.operand);
            bool ok = n.op == UnaryOp::Not ? t.is_bool() : t.is_int();
            if (!ok) {
              error(ctx, e.span, "operator '" + std::string(to_string(n.op)) +
                                     "' cannot take " + t.str());
            }
            info.type = t;
          } else if constexpr (std::is_same_v<T, CallExpr>) {
            std::optional<Builtin> builtin;
            const FunctionInfo* target = resolve_callee(fs, e, n.callee, builtin);
            if (builtin) {
              std::vector<Type> params =
                  *builtin == Builtin::Print ? std::vector<Type>{Type::int_()}
                                             : std::vector<Type>{Type::int_(), Type::int_()};
              check_args(fs, e, n.args, params, n.callee);
              info.builtin = builtin;
              info.type = *builtin == Builtin::Print ? Type::void_() : Type::int_();
            } else {
              check_access(fs, e, *target);
              check_args(fs, e, n.args, target->param_types, target->qualified_name);
              info.target = target;
              info.type = target->return_type;
            }
          } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
            Type recv = expr(fs, *n.receiver);
            if (!recv.is_object()) {
              error(ctx, e.span, "cannot call method '" + n.method + "' on " + recv.str());
            }
            if (const ClassInfo* c = m_.class_named(recv.name)) {
              auto it = c->vtable.find(n.method);
              if (it == c->vtable.end()) {
                error(ctx, e.span, "'" + recv.name + "' has no instance method '" +
                                       n.method + "'");
              }
              check_access(fs, e, *it->second);
              check_args(fs, e, n.args, it->second->param_types, it->second->qualified_name);
              info.type = it->second->return_type;
            } else {
              const InterfaceInfo* i = m_.interface_named(recv.name);
              auto it = i->methods.find(n.method);
              if (it == i->methods.end()) {
                error(ctx, e.span, "'" + recv.name + "' has no method '" + n.method + "'");
              }
              check_args(fs, e, n.args, it->second.param_types,
                         recv.name + "." + n.method);
              info.type = it->second.return_type;
            }
          } else if constexpr (std::is_same_v<T, NewExpr>) {
            TypeRef r = find_type(ctx, n.class_name, e.span);
            if (!r.cls) error(ctx, e.span, "'" + n.class_name + "' is not a class");
            info.new_class = r.cls;
            info.type = Type::object(r.cls->qualified_name);
          } else {
            Type obj = expr(fs, *n.object);
            const ClassInfo* c = obj.is_object() ? m_.class_named(obj.name) : nullptr;
            if (!c) error(ctx, e.span, obj.str() + " has no fields");
            info.field_slot = c->field_slot(n.field);
            if (info.field_slot < 0) {
              error(ctx, e.span, "'" + obj.name + "' has no field '" + n.field + "'");
            }
            info.type = c->fields[info.field_slot].second;
          }
        },
        e.node);
    Type t = info.type;
    m_.exprs_[&e] = std::move(info);
    return t;
  }

  SemanticModel& m_;
  std::deque<Ctx> ctx_store_;
  std::map<std::string, PackageSymbols> symbols_;
  std::map<const ClassInfo*, const Ctx*> class_ctx_;
  std::map<const InterfaceInfo*, const Ctx*> interface_ctx_;
  std::map<const FunctionInfo*, const Ctx*> function_ctx_;
  std::set<const ClassInfo*> laid_out_;
};

std::shared_ptr<const SemanticModel> SemanticModel::check(Program program) {
  std::shared_ptr<SemanticModel> model(new SemanticModel());
  model->program_ = std::move(program);
  Checker(*model).run();
  return model;
}

}  // namespace updcheck::minilang
