#include "updcheck/analysis/diffing.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "updcheck/analysis/serialize.hpp"
#include "updcheck/error.hpp"
#include "updcheck/minilang/printer.hpp"

namespace updcheck::analysis {

using namespace minilang;

namespace {

constexpr std::string_view kKindNames[] = {"DataFlow",        "ControlFlowMove", "ControlFlowPath",
                                           "BranchCondition", "Added",           "Removed",
                                           "SignatureChanged"};

}  // namespace

std::string_view to_string(ChangeKind k) { return kKindNames[static_cast<int>(k)]; }

ChangeKind change_kind_from(std::string_view s) {
  for (int i = 0; i < 7; ++i) {
    if (kKindNames[i] == s) return static_cast<ChangeKind>(i);
  }
  throw Error(ErrorKind::MismatchedProgram, "unknown change kind '" + std::string(s) + "'");
}

std::string_view to_string(EditOp op) {
  static constexpr std::string_view names[] = {"insert", "delete", "update", "move"};
  return names[static_cast<int>(op)];
}

std::string_view to_string(Region r) {
  static constexpr std::string_view names[] = {"statement", "data", "condition", "signature",
                                               "function"};
  return names[static_cast<int>(r)];
}

const FunctionChange* ChangeSet::find(std::string_view function) const {
  for (const auto& c : changes) {
    if (c.function == function) return &c;
  }
  return nullptr;
}

ChangeKind classify(const Edit& e) {
  if (e.op == EditOp::Move) return ChangeKind::ControlFlowMove;
  switch (e.region) {
    case Region::Function:
      return e.op == EditOp::Insert ? ChangeKind::Added : ChangeKind::Removed;
    case Region::Signature:
      return ChangeKind::SignatureChanged;
    case Region::Statement: {
      static const std::set<std::string> control = {"If", "While", "Return", "Assert", "Else"};
      if (e.touches_call || control.count(e.node_kind)) return ChangeKind::ControlFlowPath;
      return ChangeKind::DataFlow;
    }
    case Region::Data:
      return e.touches_call ? ChangeKind::ControlFlowPath : ChangeKind::DataFlow;
    case Region::Condition:
      return e.touches_call ? ChangeKind::ControlFlowPath : ChangeKind::BranchCondition;
  }
  return ChangeKind::DataFlow;
}

std::set<ChangeKind> classify(const std::vector<Edit>& edits) {
  std::set<ChangeKind> out;
  for (const auto& e : edits) out.insert(classify(e));
  return out;
}

namespace {

std::multiset<std::string> callees(const Expr& e) {
  std::multiset<std::string> out;
  walk(e, [&](const Expr& n) {
    if (const auto* c = n.as<CallExpr>()) out.insert(c->callee);
    if (const auto* m = n.as<MethodCallExpr>()) out.insert("." + m->method);
  });
  return out;
}

bool block_has_call(const Block& b) {
  bool found = false;
  for_each_expr(b, [&](const Expr& e) {
    found = found || e.as<CallExpr>() || e.as<MethodCallExpr>();
  });
  return found;
}

bool stmt_has_call(const Stmt& s) { return block_has_call(Block{s}); }

// Node label: everything about an expression node except its children.
bool same_label(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const T& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, IntLit> || std::is_same_v<T, BoolLit>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, VarRef>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<T, BinaryExpr> || std::is_same_v<T, UnaryExpr>) {
          return x.op == y.op;
        } else if constexpr (std::is_same_v<T, CallExpr>) {
          return x.callee == y.callee && x.args.size() == y.args.size();
        } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
          return x.method == y.method && x.args.size() == y.args.size();
        } else if constexpr (std::is_same_v<T, NewExpr>) {
          return x.class_name == y.class_name;
        } else {
          return x.field == y.field;
        }
      },
      a.node);
}

std::vector<const Expr*> children(const Expr& e) {
  std::vector<const Expr*> out;
  for_each_child(e, [&](const Expr& c) { out.push_back(&c); });
  return out;
}

class Differ {
 public:
  std::vector<Edit> edits;

  void expr(const Expr& a, const Expr& b, Region region) {
    if (structurally_equal(a, b)) return;
    if (same_label(a, b)) {
      // Descend only when a single child differs; several differing
      // children (a wrapped operand, say) read better as one update here.
      auto ca = children(a);
      auto cb = children(b);
      std::vector<std::size_t> differing;
      for (std::size_t i = 0; i < ca.size(); ++i) {
        if (!structurally_equal(*ca[i], *cb[i])) differing.push_back(i);
      }
      if (differing.size() == 1) {
        expr(*ca[differing[0]], *cb[differing[0]], region);
        return;
      }
    }
    Edit e;
    e.op = EditOp::Update;
    e.node_kind = std::string(kind_name(a));
    e.region = region;
    e.touches_call = callees(a) != callees(b);
    e.old_span = a.span;
    e.new_span = b.span;
    e.old_text = print_expr(a);
    e.new_text = print_expr(b);
    edits.push_back(std::move(e));
  }

  void stmt_edit(EditOp op, const Stmt* a, const Stmt* b, std::string kind) {
    Edit e;
    e.op = op;
    e.node_kind = std::move(kind);
    e.region = Region::Statement;
    if (a) {
      e.old_span = a->span;
      e.old_text = trim(print_stmt(*a));
    }
    if (b) {
      e.new_span = b->span;
      e.new_text = trim(print_stmt(*b));
    }
    e.touches_call = (a && stmt_has_call(*a)) || (b && stmt_has_call(*b));
    edits.push_back(std::move(e));
  }

  void block_edit(EditOp op, const Block& blk, Span at, bool old_side) {
    Edit e;
    e.op = op;
    e.node_kind = "Else";
    e.region = Region::Statement;
    std::string text;
    for (const auto& s : blk) text += trim(print_stmt(s)) + "\n";
    (old_side ? e.old_span : e.new_span) = at;
    (old_side ? e.old_text : e.new_text) = "else {\n" + text + "}";
    e.touches_call = block_has_call(blk);
    edits.push_back(std::move(e));
  }

  void stmt(const Stmt& a, const Stmt& b) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          const T& y = std::get<T>(b.node);
          if constexpr (std::is_same_v<T, VarDeclStmt>) {
            if (x.name != y.name || x.type != y.type) {
              stmt_edit(EditOp::Update, &a, &b, "VarDecl");
            } else {
              expr(x.init, y.init, Region::Data);
            }
          } else if constexpr (std::is_same_v<T, AssignStmt>) {
            expr(x.target, y.target, Region::Data);
            expr(x.value, y.value, Region::Data);
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            expr(x.condition, y.condition, Region::Condition);
            block(x.then_block, y.then_block);
            if (x.else_block && y.else_block) {
              block(*x.else_block, *y.else_block);
            } else if (x.else_block) {
              block_edit(EditOp::Delete, *x.else_block, a.span, true);
            } else if (y.else_block) {
              block_edit(EditOp::Insert, *y.else_block, b.span, false);
            }
          } else if constexpr (std::is_same_v<T, WhileStmt>) {
            expr(x.condition, y.condition, Region::Condition);
            block(x.body, y.body);
          } else if constexpr (std::is_same_v<T, ReturnStmt>) {
            if (x.value && y.value) {
              expr(*x.value, *y.value, Region::Data);
            } else if (x.value || y.value) {
              stmt_edit(EditOp::Update, &a, &b, "Return");
            }
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            expr(x.expr, y.expr, Region::Data);
          } else {
            expr(x.condition, y.condition, Region::Condition);
          }
        },
        a.node);
  }

  void block(const Block& a, const Block& b) {
    // Anchors: longest common subsequence of structurally equal statements.
    auto eq = [&](std::size_t i, std::size_t j) { return structurally_equal(Block{a[i]}, Block{b[j]}); };
    auto anchors = lcs(a.size(), b.size(), eq);
    std::vector<bool> used_a(a.size()), used_b(b.size());
    for (auto [i, j] : anchors) used_a[i] = used_b[j] = true;

    // Equal statements left over on both sides changed position.
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (used_a[i]) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (!used_b[j] && eq(i, j)) {
          used_a[i] = used_b[j] = true;
          stmt_edit(EditOp::Move, &a[i], &b[j], std::string(kind_name(a[i])));
          break;
        }
      }
    }

    // Within each gap between anchors, align the rest by statement kind.
    std::size_t pa = 0, pb = 0;
    anchors.push_back({a.size(), b.size()});
    for (auto [ai, bj] : anchors) {
      std::vector<std::size_t> ga, gb;
      for (; pa < ai; ++pa) {
        if (!used_a[pa]) ga.push_back(pa);
      }
      for (; pb < bj; ++pb) {
        if (!used_b[pb]) gb.push_back(pb);
      }
      auto same_kind = [&](std::size_t i, std::size_t j) {
        return a[ga[i]].node.index() == b[gb[j]].node.index();
      };
      auto pairs = lcs(ga.size(), gb.size(), same_kind);
      std::vector<bool> pa_used(ga.size()), pb_used(gb.size());
      for (auto [i, j] : pairs) {
        pa_used[i] = pb_used[j] = true;
      }
      // Emit in old-position order, interleaving deletes and updates.
      std::size_t next_pair = 0;
      for (std::size_t i = 0; i < ga.size(); ++i) {
        if (pa_used[i]) {
          auto [pi, pj] = pairs[next_pair++];
          stmt(a[ga[pi]], b[gb[pj]]);
        } else {
          stmt_edit(EditOp::Delete, &a[ga[i]], nullptr, std::string(kind_name(a[ga[i]])));
        }
      }
      for (std::size_t j = 0; j < gb.size(); ++j) {
        if (!pb_used[j]) {
          stmt_edit(EditOp::Insert, nullptr, &b[gb[j]], std::string(kind_name(b[gb[j]])));
        }
      }
      pa = ai + 1;
      pb = bj + 1;
    }
  }

 private:
  static std::string trim(std::string s) {
    while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
    std::size_t start = s.find_first_not_of(' ');
    return start == std::string::npos ? std::string() : s.substr(start);
  }

  template <typename Eq>
  static std::vector<std::pair<std::size_t, std::size_t>> lcs(std::size_t n, std::size_t m,
                                                              Eq&& eq) {
    std::vector<std::vector<int>> t(n + 1, std::vector<int>(m + 1, 0));
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t j = m; j-- > 0;) {
        t[i][j] = eq(i, j) ? t[i + 1][j + 1] + 1 : std::max(t[i + 1][j], t[i][j + 1]);
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> out;
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
      if (eq(i, j) && t[i][j] == t[i + 1][j + 1] + 1) {
        out.push_back({i++, j++});
      } else if (t[i + 1][j] >= t[i][j + 1]) {
        ++i;
      } else {
        ++j;
      }
    }
    return out;
  }
};

Edit function_edit(EditOp op, const FunctionDecl& f) {
  Edit e;
  e.op = op;
  e.node_kind = "Function";
  e.region = Region::Function;
  (op == EditOp::Insert ? e.new_span : e.old_span) = f.span;
  (op == EditOp::Insert ? e.new_text : e.old_text) = print_function(f);
  while (!e.old_text.empty() && e.old_text.back() == '\n') e.old_text.pop_back();
  while (!e.new_text.empty() && e.new_text.back() == '\n') e.new_text.pop_back();
  return e;
}

std::string signature_text(const FunctionDecl& f) {
  std::string s;
  if (f.visibility == Visibility::Private) s += "private ";
  if (f.is_static) s += "static ";
  s += "fn " + f.name + "(";
  for (std::size_t i = 0; i < f.params.size(); ++i) {
    if (i) s += ", ";
    s += f.params[i].name + ": " + f.params[i].type;
  }
  s += ")";
  if (f.return_type != "void") s += " -> " + f.return_type;
  return s;
}

std::map<std::string, const FunctionDecl*> index(const std::vector<SourceFile>& sources) {
  std::map<std::string, const FunctionDecl*> out;
  for (const auto& sf : sources) {
    for (const FunctionDecl* f : sf.ast->all_functions()) out[f->qualified_name] = f;
  }
  return out;
}

}  // namespace

std::vector<Edit> diff_functions(const FunctionDecl& old_fn, const FunctionDecl& new_fn) {
  Differ d;
  auto types = [](const FunctionDecl& f) {
    std::vector<std::string> t;
    for (const auto& p : f.params) t.push_back(p.type);
    return t;
  };
  if (types(old_fn) != types(new_fn) || old_fn.return_type != new_fn.return_type ||
      old_fn.is_static != new_fn.is_static || old_fn.visibility != new_fn.visibility) {
    Edit e;
    e.op = EditOp::Update;
    e.node_kind = "Signature";
    e.region = Region::Signature;
    e.old_span = old_fn.span;
    e.new_span = new_fn.span;
    e.old_text = signature_text(old_fn);
    e.new_text = signature_text(new_fn);
    d.edits.push_back(std::move(e));
  }
  d.block(old_fn.body, new_fn.body);
  return d.edits;
}

ChangeSet diff_library(std::string library, registry::Version old_version,
                       registry::Version new_version, const std::vector<SourceFile>& old_sources,
                       const std::vector<SourceFile>& new_sources) {
  ChangeSet cs{std::move(library), old_version, new_version, {}};
  auto olds = index(old_sources);
  auto news = index(new_sources);
  std::set<std::string> names;
  for (const auto& [n, f] : olds) names.insert(n);
  for (const auto& [n, f] : news) names.insert(n);
  for (const auto& name : names) {
    auto o = olds.find(name);
    auto n = news.find(name);
    std::vector<Edit> edits;
    if (o == olds.end()) {
      edits.push_back(function_edit(EditOp::Insert, *n->second));
    } else if (n == news.end()) {
      edits.push_back(function_edit(EditOp::Delete, *o->second));
    } else {
      edits = diff_functions(*o->second, *n->second);
    }
    if (edits.empty()) continue;
    FunctionChange fc{name, classify(edits), std::move(edits)};
    cs.changes.push_back(std::move(fc));
  }
  return cs;
}

namespace {

nlohmann::ordered_json span_value(const std::optional<Span>& s) {
  if (!s) return nullptr;
  return {{"line", s->line}, {"column", s->column}};
}

std::optional<Span> span_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return Span{j.at("line").get<int>(), j.at("column").get<int>()};
}

template <typename E, std::size_t N>
E enum_from(const std::string& s, const std::string_view (&names)[N]) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  throw Error(ErrorKind::MismatchedProgram, "unknown value '" + s + "'");
}

constexpr std::string_view kOpNames[] = {"insert", "delete", "update", "move"};
constexpr std::string_view kRegionNames[] = {"statement", "data", "condition", "signature",
                                             "function"};

}  // namespace

nlohmann::ordered_json function_change_value(const FunctionChange& fc) {
  nlohmann::ordered_json j;
  j["function"] = fc.function;
  auto kinds = nlohmann::ordered_json::array();
  for (auto k : fc.kinds) kinds.push_back(std::string(to_string(k)));
  j["kinds"] = kinds;
  auto edits = nlohmann::ordered_json::array();
  for (const auto& e : fc.edits) {
    edits.push_back({{"op", std::string(to_string(e.op))},
                     {"node_kind", e.node_kind},
                     {"region", std::string(to_string(e.region))},
                     {"touches_call", e.touches_call},
                     {"old_span", span_value(e.old_span)},
                     {"new_span", span_value(e.new_span)},
                     {"old", e.old_text},
                     {"new", e.new_text}});
  }
  j["edits"] = edits;
  return j;
}

FunctionChange function_change_from(const nlohmann::json& j) {
  FunctionChange fc;
  fc.function = j.at("function").get<std::string>();
  for (const auto& k : j.at("kinds")) fc.kinds.insert(change_kind_from(k.get<std::string>()));
  for (const auto& e : j.at("edits")) {
    Edit ed;
    ed.op = enum_from<EditOp>(e.at("op").get<std::string>(), kOpNames);
    ed.node_kind = e.at("node_kind").get<std::string>();
    ed.region = enum_from<Region>(e.at("region").get<std::string>(), kRegionNames);
    ed.touches_call = e.at("touches_call").get<bool>();
    ed.old_span = span_from(e.at("old_span"));
    ed.new_span = span_from(e.at("new_span"));
    ed.old_text = e.at("old").get<std::string>();
    ed.new_text = e.at("new").get<std::string>();
    fc.edits.push_back(std::move(ed));
  }
  return fc;
}

nlohmann::ordered_json changeset_value(const ChangeSet& cs) {
  nlohmann::ordered_json j;
  j["library"] = cs.library;
  j["old_version"] = cs.old_version.str();
  j["new_version"] = cs.new_version.str();
  auto changes = nlohmann::ordered_json::array();
  for (const auto& c : cs.changes) changes.push_back(function_change_value(c));
  j["changes"] = changes;
  return j;
}

ChangeSet changeset_from(const nlohmann::json& j) {
  ChangeSet cs;
  cs.library = j.at("library").get<std::string>();
  cs.old_version = registry::parse_version(j.at("old_version").get<std::string>());
  cs.new_version = registry::parse_version(j.at("new_version").get<std::string>());
  for (const auto& c : j.at("changes")) cs.changes.push_back(function_change_from(c));
  return cs;
}

std::string changeset_json(const ChangeSet& cs) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  auto body = changeset_value(cs);
  for (auto& [k, v] : body.items()) j[k] = v;
  return j.dump(2) + "\n";
}

ChangeSet changeset_from_json(std::string_view text) {
  return changeset_from(nlohmann::json::parse(text));
}

std::string render_changeset(const ChangeSet& cs) {
  std::ostringstream out;
  out << "diff " << cs.library << " " << cs.old_version.str() << " -> " << cs.new_version.str()
      << ": " << cs.changes.size() << " changed function" << (cs.changes.size() == 1 ? "" : "s")
      << "\n";
  for (const auto& c : cs.changes) {
    out << "\n" << c.function << " [";
    bool first = true;
    for (auto k : c.kinds) {
      out << (first ? "" : ", ") << to_string(k);
      first = false;
    }
    out << "]\n";
    for (const auto& e : c.edits) {
      out << "  " << to_string(e.op) << " " << e.node_kind;
      const auto& at = e.new_span ? e.new_span : e.old_span;
      if (at) out << " @" << at->line << ":" << at->column;
      out << "\n";
      auto lines = [&](const std::string& text, char mark) {
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);) out << "    " << mark << " " << line << "\n";
      };
      lines(e.old_text, '-');
      lines(e.new_text, '+');
    }
  }
  return out.str();
}

}  // namespace updcheck::analysis
