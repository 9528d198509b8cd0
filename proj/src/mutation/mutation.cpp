#include "updcheck/mutation/mutation.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "updcheck/error.hpp"
#include "updcheck/minilang/parser.hpp"
#include "updcheck/minilang/printer.hpp"

namespace updcheck::mutation {

using namespace minilang;

std::string_view to_string(Operator op) {
  static constexpr std::string_view names[] = {"ABS", "AOR", "LCR", "ROR", "UOI"};
  return names[static_cast<int>(op)];
}

const std::set<Operator>& all_operators() {
  static const std::set<Operator> all = {Operator::ABS, Operator::AOR, Operator::LCR,
                                         Operator::ROR, Operator::UOI};
  return all;
}

std::set<Operator> parse_operators(std::string_view list) {
  std::set<Operator> out;
  std::string item;
  auto flush = [&] {
    if (item.empty()) return;
    bool found = false;
    for (Operator op : all_operators()) {
      if (to_string(op) == item) {
        out.insert(op);
        found = true;
      }
    }
    if (!found) throw Error(ErrorKind::Io, "unknown mutation operator '" + item + "'");
    item.clear();
  };
  for (char c : list) {
    if (c == ',' || c == ' ') {
      flush();
    } else {
      item += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
  }
  flush();
  return out;
}

namespace {

// Pre-order list of every expression node of a block, flagged when it lies
// inside an assignment target. Shared by generation and materialization so
// node indices agree.
template <typename E>
struct Site {
  E* expr;
  bool lvalue;
};

template <typename E>
void collect_expr(E& e, bool lvalue, std::vector<Site<E>>& out) {
  out.push_back({&e, lvalue});
  for_each_child(e, [&](E& c) { collect_expr(c, lvalue, out); });
}

template <typename B, typename E>
void collect_block(B& block, std::vector<Site<E>>& out) {
  for (auto& s : block) {
    std::visit(
        [&](auto& n) {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarDeclStmt>) {
            collect_expr(n.init, false, out);
          } else if constexpr (std::is_same_v<T, AssignStmt>) {
            collect_expr(n.target, true, out);
            collect_expr(n.value, false, out);
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            collect_expr(n.condition, false, out);
            collect_block(n.then_block, out);
            if (n.else_block) collect_block(*n.else_block, out);
          } else if constexpr (std::is_same_v<T, WhileStmt>) {
            collect_expr(n.condition, false, out);
            collect_block(n.body, out);
          } else if constexpr (std::is_same_v<T, ReturnStmt>) {
            if (n.value) collect_expr(*n.value, false, out);
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            collect_expr(n.expr, false, out);
          } else {
            collect_expr(n.condition, false, out);
          }
        },
        s.node);
  }
}

Expr binary(BinaryOp op, const Expr& l, const Expr& r, Span at) {
  return Expr{BinaryExpr{op, Box<Expr>(l), Box<Expr>(r)}, at};
}
Expr unary(UnaryOp op, const Expr& x, Span at) { return Expr{UnaryExpr{op, Box<Expr>(x)}, at}; }

constexpr BinaryOp kArithmetic[] = {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div,
                                    BinaryOp::Mod};
constexpr BinaryOp kRelational[] = {BinaryOp::Lt, BinaryOp::Le, BinaryOp::Gt,
                                    BinaryOp::Ge, BinaryOp::Eq, BinaryOp::Ne};
constexpr BinaryOp kLogical[] = {BinaryOp::And, BinaryOp::Or, BinaryOp::Xor};

template <std::size_t N>
void swap_ops(const Expr& e, const BinaryExpr& b, const BinaryOp (&ops)[N],
              std::vector<Expr>& out) {
  for (BinaryOp op : ops) {
    if (op != b.op) out.push_back(binary(op, *b.lhs, *b.rhs, e.span));
  }
}

std::vector<Expr> replacements(const Expr& e, const SemanticModel& model, Operator op) {
  std::vector<Expr> out;
  const Type& t = model.type_of(e);
  const auto* b = e.as<BinaryExpr>();
  switch (op) {
    case Operator::ABS:
      if (t.is_int()) {
        out.push_back(unary(UnaryOp::Abs, e, e.span));
        out.push_back(unary(UnaryOp::Neg, unary(UnaryOp::Abs, e, e.span), e.span));
        // Replacing a call by a constant would delete the call, which is a
        // control-flow change rather than a fault in a value.
        const auto* lit = e.as<IntLit>();
        if (!contains_call(e) && (!lit || lit->value != 0)) out.push_back(Expr{IntLit{0}, e.span});
      }
      break;
    case Operator::AOR:
      if (b && is_arithmetic(b->op)) swap_ops(e, *b, kArithmetic, out);
      break;
    case Operator::LCR:
      if (b && is_logical(b->op)) swap_ops(e, *b, kLogical, out);
      break;
    case Operator::ROR:
      if (b && is_relational(b->op) && model.type_of(*b->lhs).is_int()) {
        swap_ops(e, *b, kRelational, out);
      }
      break;
    case Operator::UOI:
      if (e.as<VarRef>() && t.is_int()) {
        out.push_back(binary(BinaryOp::Add, e, Expr{IntLit{1}, e.span}, e.span));
        out.push_back(binary(BinaryOp::Sub, e, Expr{IntLit{1}, e.span}, e.span));
      }
      if (t.is_bool()) out.push_back(unary(UnaryOp::Not, e, e.span));
      break;
  }
  return out;
}

FunctionDecl* find_function(ModuleAst& m, const std::string& qname) {
  for (auto& f : m.functions) {
    if (f.qualified_name == qname) return &f;
  }
  for (auto& c : m.classes) {
    for (auto& f : c.methods) {
      if (f.qualified_name == qname) return &f;
    }
  }
  return nullptr;
}

}  // namespace

std::vector<Mutant> generate_mutants(const FunctionInfo& fn, const SemanticModel& model,
                                     const std::set<Operator>& ops) {
  std::vector<Site<const Expr>> sites;
  collect_block(fn.decl->body, sites);
  std::vector<Mutant> out;
  for (std::size_t i = 0; i < sites.size(); ++i) {
    if (sites[i].lvalue) continue;
    const Expr& e = *sites[i].expr;
    for (Operator op : ops) {
      for (Expr& r : replacements(e, model, op)) {
        Mutant m;
        m.package = fn.package->name;
        m.target_function = fn.qualified_name;
        m.file = fn.file;
        m.op = op;
        m.node_index = static_cast<int>(i);
        m.span = e.span;
        m.original_fragment = print_expr(e);
        m.mutated_fragment = print_expr(r);
        m.replacement = std::move(r);
        out.push_back(std::move(m));
      }
    }
  }
  return out;
}

std::vector<SourceFile> materialize(const Mutant& m, const std::vector<SourceFile>& sources) {
  std::vector<SourceFile> out;
  bool applied = false;
  for (const auto& sf : sources) {
    if (sf.path != m.file) {
      out.push_back(sf);
      continue;
    }
    ModuleAst copy = *sf.ast;
    FunctionDecl* f = find_function(copy, m.target_function);
    if (f) {
      std::vector<Site<Expr>> sites;
      collect_block(f->body, sites);
      if (m.node_index >= 0 && static_cast<std::size_t>(m.node_index) < sites.size()) {
        *sites[m.node_index].expr = m.replacement;
        applied = true;
      }
    }
    std::string text = pretty_print(copy);
    out.push_back({sf.path, std::make_shared<const ModuleAst>(parse(text, sf.path))});
  }
  if (!applied) {
    throw Error(ErrorKind::Io, "mutant " + m.id + " does not match " + m.target_function);
  }
  return out;
}

namespace {

// Runs `task(i)` for i in [0, n) on `jobs` threads; rethrows the first
// exception after all workers stop.
template <typename F>
void parallel_for(std::size_t n, int jobs, F&& task) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  int threads = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace

BenchmarkRun run_benchmark(const registry::Project& project, const registry::Registry& reg,
                           const BenchmarkOptions& opts) {
  BenchmarkRun run;
  run.project = project.manifest.name;
  registry::Workspace ws = registry::open_workspace(project, reg);
  const SemanticModel& model = *ws.model;

  runtime::RunOptions base_opts;
  base_opts.limits = opts.limits;
  runtime::TestRun baseline = runtime::run_tests(model, base_opts);
  if (!baseline.all_passed()) {
    throw Error(ErrorKind::RedBaseline,
                "baseline tests of " + run.project + " do not pass (" +
                    std::to_string(baseline.failed()) + " failed, " +
                    std::to_string(baseline.errors()) + " errors)");
  }

  std::vector<Mutant> mutants;
  for (const auto& fn : baseline.trace.invoked) {
    const FunctionInfo* f = model.function(fn);
    if (!f || f->package->origin == Origin::Client) continue;
    run.covered_functions.push_back(fn);
    for (auto& m : generate_mutants(*f, model, opts.operators)) mutants.push_back(std::move(m));
  }
  for (std::size_t i = 0; i < mutants.size(); ++i) {
    char id[16];
    std::snprintf(id, sizeof id, "m%04zu", i + 1);
    mutants[i].id = id;
  }

  analysis::CallGraph cg = analysis::build_call_graph(model);
  std::vector<std::string> roots = cg.client_roots();
  runtime::RunOptions mutant_opts;
  mutant_opts.limits = opts.limits;
  mutant_opts.trace = false;

  std::vector<std::optional<MutantOutcome>> slots(mutants.size());
  parallel_for(mutants.size(), opts.jobs, [&](std::size_t i) {
    Mutant& m = mutants[i];
    const PackageUnit* unit = model.program().find(m.package);
    Program mutated = model.program();
    std::shared_ptr<const SemanticModel> mutated_model;
    try {
      m.mutated_library = materialize(m, unit->sources);
      mutated.find(m.package)->sources = m.mutated_library;
      mutated_model = SemanticModel::check(std::move(mutated));
    } catch (const SourceError&) {
      return;  // excluded from the denominator
    }
    MutantOutcome o;
    runtime::TestRun r = runtime::run_tests(*mutated_model, mutant_opts);
    for (const auto& t : r.results) {
      if (t.status != runtime::TestStatus::Pass) {
        o.killed = true;
        o.kill_reason = t.name + ": " + t.message;
        break;
      }
    }
    registry::Version v = registry::parse_version(unit->version);
    analysis::ChangeSet cs =
        analysis::diff_library(m.package, v, v, unit->sources, m.mutated_library);
    o.changed_functions = cs.changes.size();
    for (const auto& c : cs.changes) o.kinds.insert(c.kinds.begin(), c.kinds.end());
    o.verdict = analysis::assess_impact(cg, roots, cs).verdict;
    m.mutated_library.clear();
    o.mutant = std::move(m);
    slots[i] = std::move(o);
  });

  std::vector<metrics::MutantRecord> records;
  for (auto& s : slots) {
    if (!s) {
      ++run.excluded;
      continue;
    }
    records.push_back({s->mutant.id, s->mutant.target_function,
                       std::string(to_string(s->mutant.op)), s->killed,
                       s->verdict == analysis::Verdict::Unsafe});
    run.outcomes.push_back(std::move(*s));
  }
  run.report = metrics::detection_score(std::move(records));
  return run;
}

namespace {

nlohmann::ordered_json score_value(const metrics::ToolScore& s) {
  return {{"detected", s.detected},
          {"all", s.all},
          {"score", s.score ? nlohmann::ordered_json(*s.score) : nlohmann::ordered_json(nullptr)}};
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string benchmark_json(const BenchmarkRun& run) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["project"] = run.project;
  j["covered_functions"] = run.covered_functions;
  j["excluded_mutants"] = run.excluded;
  j["detection"] = {{"test_suite", score_value(run.report.test_suite)},
                    {"static_analyzer", score_value(run.report.static_analyzer)}};
  auto mutants = nlohmann::ordered_json::array();
  for (const auto& o : run.outcomes) {
    const Mutant& m = o.mutant;
    auto kinds = nlohmann::ordered_json::array();
    for (auto k : o.kinds) kinds.push_back(std::string(analysis::to_string(k)));
    mutants.push_back({{"id", m.id},
                       {"package", m.package},
                       {"function", m.target_function},
                       {"operator", std::string(to_string(m.op))},
                       {"file", m.file},
                       {"line", m.span.line},
                       {"column", m.span.column},
                       {"node_index", m.node_index},
                       {"original", m.original_fragment},
                       {"mutated", m.mutated_fragment},
                       {"detected_by_tests", o.killed},
                       {"kill_reason", o.kill_reason},
                       {"detected_by_static", o.verdict == analysis::Verdict::Unsafe},
                       {"verdict", std::string(analysis::to_string(o.verdict))},
                       {"changed_functions", o.changed_functions},
                       {"kinds", kinds}});
  }
  j["mutants"] = mutants;
  return j.dump(2) + "\n";
}

std::string benchmark_csv(const BenchmarkRun& run) {
  std::ostringstream out;
  out << "id,package,function,operator,file,line,column,original,mutated,detected_by_tests,"
         "detected_by_static,verdict,kill_reason\n";
  for (const auto& o : run.outcomes) {
    const Mutant& m = o.mutant;
    out << m.id << ',' << m.package << ',' << m.target_function << ',' << to_string(m.op) << ','
        << csv_field(m.file) << ',' << m.span.line << ',' << m.span.column << ','
        << csv_field(m.original_fragment) << ',' << csv_field(m.mutated_fragment) << ','
        << (o.killed ? "true" : "false") << ','
        << (o.verdict == analysis::Verdict::Unsafe ? "true" : "false") << ','
        << analysis::to_string(o.verdict) << ',' << csv_field(o.kill_reason) << '\n';
  }
  return out.str();
}

}  // namespace updcheck::mutation
