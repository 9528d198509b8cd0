#include "updcheck/runtime/interpreter.hpp"

#include <algorithm>
#include <limits>

#include "updcheck/minilang/printer.hpp"

namespace updcheck::runtime {

using namespace minilang;

std::string to_string(const Value& v) {
  switch (v.kind) {
    case Value::Kind::Void: return "void";
    case Value::Kind::Int: return std::to_string(v.i);
    case Value::Kind::Bool: return v.b ? "true" : "false";
    case Value::Kind::Null: return "null";
    case Value::Kind::Object: return "object#" + std::to_string(v.obj);
  }
  return "?";
}

std::string_view to_string(FaultKind k) {
  static constexpr std::string_view names[] = {"assertion-failed", "division-by-zero",
                                               "fuel-exhausted",   "stack-overflow",
                                               "null-dereference", "operand-type"};
  return names[static_cast<int>(k)];
}

Fault::Fault(FaultKind kind, std::string message, std::string file, Span span)
    : std::runtime_error(std::move(message)), kind_(kind), file_(std::move(file)), span_(span) {}

namespace {

std::int64_t wrap_add(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) + static_cast<std::uint64_t>(b));
}
std::int64_t wrap_sub(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) - static_cast<std::uint64_t>(b));
}
std::int64_t wrap_mul(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(b));
}
std::int64_t wrap_neg(std::int64_t a) { return wrap_sub(0, a); }

constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();

struct Object {
  const ClassInfo* cls;
  std::vector<Value> fields;
};

struct Frame {
  const FunctionInfo* fn;
  std::optional<Value> self;
  std::vector<std::pair<const std::string*, Value>> locals;
  std::optional<Value> result;  // set once a return statement ran

  Value* find(const std::string& name) {
    for (auto& [n, v] : locals) {
      if (*n == name) return &v;
    }
    return nullptr;
  }
  void bind(const std::string& name, Value v) {
    if (Value* slot = find(name)) {
      *slot = v;
    } else {
      locals.push_back({&name, v});
    }
  }
};

}  // namespace

struct Interpreter::Impl {
  const SemanticModel& model;
  Limits limits;
  CallObserver* observer;
  std::vector<Object> heap;
  std::vector<Frame*> frames;
  std::int64_t steps = 0;
  std::string output;

  [[noreturn]] void fault(FaultKind k, const std::string& msg, Span at) const {
    throw Fault(k, msg, frames.empty() ? std::string() : frames.back()->fn->file, at);
  }

  void tick(Span at) {
    if (++steps > limits.fuel) {
      fault(FaultKind::FuelExhausted,
            "fuel exhausted after " + std::to_string(limits.fuel) + " steps", at);
    }
  }

  std::int64_t as_int(const Value& v, Span at) const {
    if (v.kind != Value::Kind::Int) fault(FaultKind::OperandType, "expected int, got " + to_string(v), at);
    return v.i;
  }
  bool as_bool(const Value& v, Span at) const {
    if (v.kind != Value::Kind::Bool) {
      fault(FaultKind::OperandType, "expected bool, got " + to_string(v), at);
    }
    return v.b;
  }
  Object& as_object(const Value& v, Span at) {
    if (v.kind == Value::Kind::Null) fault(FaultKind::NullDereference, "null dereference", at);
    if (v.kind != Value::Kind::Object) {
      fault(FaultKind::OperandType, "expected object, got " + to_string(v), at);
    }
    return heap[v.obj];
  }

  Value invoke(const FunctionInfo& fn, std::optional<Value> self, std::vector<Value> args,
               Span at) {
    if (static_cast<int>(frames.size()) >= limits.max_depth) {
      fault(FaultKind::StackOverflow,
            "call depth exceeded " + std::to_string(limits.max_depth), at);
    }
    if (args.size() != fn.decl->params.size()) {
      fault(FaultKind::OperandType, "wrong number of arguments to " + fn.qualified_name, at);
    }
    Frame frame{&fn, self, {}, std::nullopt};
    frame.locals.reserve(args.size() + 4);
    for (std::size_t i = 0; i < args.size(); ++i) frame.bind(fn.decl->params[i].name, args[i]);
    if (observer) observer->enter(fn);
    frames.push_back(&frame);
    struct Pop {
      Impl* self;
      ~Pop() {
        self->frames.pop_back();
        if (self->observer) self->observer->leave();
      }
    } pop{this};
    exec_block(fn.decl->body);
    if (fn.return_type.kind == Type::Kind::Void) return Value{};
    if (!frame.result) {
      fault(FaultKind::OperandType, fn.qualified_name + " finished without returning", fn.decl->end);
    }
    return *frame.result;
  }

  // Returns true when the enclosing function has returned.
  bool exec_block(const Block& b) {
    for (const Stmt& s : b) {
      if (exec(s)) return true;
    }
    return false;
  }

  bool exec(const Stmt& s) {
    tick(s.span);
    Frame& f = *frames.back();
    return std::visit(
        [&](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, VarDeclStmt>) {
            Value v = eval(n.init);
            f.bind(n.name, v);
            return false;
          } else if constexpr (std::is_same_v<T, AssignStmt>) {
            Value v = eval(n.value);
            if (const auto* var = n.target.template as<VarRef>()) {
              Value* slot = f.find(var->name);
              if (!slot) fault(FaultKind::OperandType, "unbound variable " + var->name, s.span);
              *slot = v;
            } else {
              const auto& fa = std::get<FieldAccessExpr>(n.target.node);
              Value objv = eval(*fa.object);
              Object& obj = as_object(objv, n.target.span);
              obj.fields.at(model.info(n.target).field_slot) = v;
            }
            return false;
          } else if constexpr (std::is_same_v<T, IfStmt>) {
            if (as_bool(eval(n.condition), n.condition.span)) return exec_block(n.then_block);
            if (n.else_block) return exec_block(*n.else_block);
            return false;
          } else if constexpr (std::is_same_v<T, WhileStmt>) {
            while (as_bool(eval(n.condition), n.condition.span)) {
              if (exec_block(n.body)) return true;
              tick(s.span);
            }
            return false;
          } else if constexpr (std::is_same_v<T, ReturnStmt>) {
            f.result = n.value ? eval(*n.value) : Value{};
            return true;
          } else if constexpr (std::is_same_v<T, ExprStmt>) {
            eval(n.expr);
            return false;
          } else {
            if (!as_bool(eval(n.condition), n.condition.span)) {
              fault(FaultKind::AssertionFailed, "assertion failed: " + print_expr(n.condition),
                    s.span);
            }
            return false;
          }
        },
        s.node);
  }

  std::vector<Value> eval_args(const std::vector<Expr>& args) {
    std::vector<Value> out;
    out.reserve(args.size());
    for (const auto& a : args) out.push_back(eval(a));
    return out;
  }

  Value eval(const Expr& e) {
    tick(e.span);
    return std::visit(
        [&](const auto& n) -> Value {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, IntLit>) {
            return Value::int_(n.value);
          } else if constexpr (std::is_same_v<T, BoolLit>) {
            return Value::bool_(n.value);
          } else if constexpr (std::is_same_v<T, VarRef>) {
            Frame& f = *frames.back();
            if (n.name == "self" && f.self) return *f.self;
            Value* v = f.find(n.name);
            if (!v) fault(FaultKind::OperandType, "unbound variable " + n.name, e.span);
            return *v;
          } else if constexpr (std::is_same_v<T, BinaryExpr>) {
            return binary(n, e.span);
          } else if constexpr (std::is_same_v<T, UnaryExpr>) {
            Value v = eval(*n.operand);
            switch (n.op) {
              case UnaryOp::Not: return Value::bool_(!as_bool(v, e.span));
              case UnaryOp::Neg: return Value::int_(wrap_neg(as_int(v, e.span)));
              case UnaryOp::Abs: {
                std::int64_t x = as_int(v, e.span);
                return Value::int_(x < 0 ? wrap_neg(x) : x);
              }
            }
            return v;
          } else if constexpr (std::is_same_v<T, CallExpr>) {
            const ExprInfo& info = model.info(e);
            std::vector<Value> args = eval_args(n.args);
            if (info.builtin) return builtin(*info.builtin, args, e.span);
            return invoke(*info.target, std::nullopt, std::move(args), e.span);
          } else if constexpr (std::is_same_v<T, MethodCallExpr>) {
            Value recv = eval(*n.receiver);
            std::vector<Value> args = eval_args(n.args);
            Object& obj = as_object(recv, n.receiver->span);
            auto it = obj.cls->vtable.find(n.method);
            if (it == obj.cls->vtable.end()) {
              fault(FaultKind::OperandType,
                    obj.cls->qualified_name + " has no method " + n.method, e.span);
            }
            return invoke(*it->second, recv, std::move(args), e.span);
          } else if constexpr (std::is_same_v<T, NewExpr>) {
            const ClassInfo* cls = model.info(e).new_class;
            heap.push_back({cls, std::vector<Value>(cls->fields.size(), Value::null())});
            return Value::object(static_cast<std::uint32_t>(heap.size() - 1));
          } else {
            Value objv = eval(*n.object);
            Object& obj = as_object(objv, e.span);
            return obj.fields.at(model.info(e).field_slot);
          }
        },
        e.node);
  }

  Value builtin(Builtin b, const std::vector<Value>& args, Span at) {
    switch (b) {
      case Builtin::Print:
        output += std::to_string(as_int(args.at(0), at)) + "\n";
        return Value{};
      case Builtin::Min:
        return Value::int_(std::min(as_int(args.at(0), at), as_int(args.at(1), at)));
      case Builtin::Max:
        return Value::int_(std::max(as_int(args.at(0), at), as_int(args.at(1), at)));
    }
    return Value{};
  }

  Value binary(const BinaryExpr& n, Span at) {
    // Logical connectives short-circuit; ^ always evaluates both sides.
    if (n.op == BinaryOp::And) {
      if (!as_bool(eval(*n.lhs), at)) return Value::bool_(false);
      return Value::bool_(as_bool(eval(*n.rhs), at));
    }
    if (n.op == BinaryOp::Or) {
      if (as_bool(eval(*n.lhs), at)) return Value::bool_(true);
      return Value::bool_(as_bool(eval(*n.rhs), at));
    }
    Value l = eval(*n.lhs);
    Value r = eval(*n.rhs);
    switch (n.op) {
      case BinaryOp::Xor: return Value::bool_(as_bool(l, at) != as_bool(r, at));
      case BinaryOp::Eq:
      case BinaryOp::Ne: {
        if (l.kind != r.kind || (l.kind != Value::Kind::Int && l.kind != Value::Kind::Bool)) {
          fault(FaultKind::OperandType, "cannot compare " + to_string(l) + " and " + to_string(r), at);
        }
        bool eq = l == r;
        return Value::bool_(n.op == BinaryOp::Eq ? eq : !eq);
      }
      default: break;
    }
    std::int64_t a = as_int(l, at);
    std::int64_t b = as_int(r, at);
    switch (n.op) {
      case BinaryOp::Add: return Value::int_(wrap_add(a, b));
      case BinaryOp::Sub: return Value::int_(wrap_sub(a, b));
      case BinaryOp::Mul: return Value::int_(wrap_mul(a, b));
      case BinaryOp::Div:
        if (b == 0) fault(FaultKind::DivisionByZero, "division by zero", at);
        return Value::int_(a == kMin && b == -1 ? kMin : a / b);
      case BinaryOp::Mod:
        if (b == 0) fault(FaultKind::DivisionByZero, "division by zero", at);
        return Value::int_(b == -1 ? 0 : a % b);
      case BinaryOp::Lt: return Value::bool_(a < b);
      case BinaryOp::Le: return Value::bool_(a <= b);
      case BinaryOp::Gt: return Value::bool_(a > b);
      case BinaryOp::Ge: return Value::bool_(a >= b);
      default: break;
    }
    fault(FaultKind::OperandType, "unsupported operator", at);
  }
};

Interpreter::Interpreter(const SemanticModel& model, Limits limits, CallObserver* observer)
    : impl_(std::make_unique<Impl>(Impl{model, limits, observer, {}, {}, 0, {}})) {}

Interpreter::~Interpreter() = default;

Value Interpreter::call(const FunctionInfo& fn, std::vector<Value> args) {
  return impl_->invoke(fn, std::nullopt, std::move(args), fn.decl->span);
}

std::int64_t Interpreter::steps() const { return impl_->steps; }
const std::string& Interpreter::output() const { return impl_->output; }

}  // namespace updcheck::runtime
