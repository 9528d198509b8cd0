#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "updcheck/minilang/semantic.hpp"

namespace updcheck::runtime {

/// A MiniLang value. Objects are indices into the interpreter's heap; a
/// field that was never assigned holds `Null`.
struct Value {
  enum class Kind { Void, Int, Bool, Null, Object };

  Kind kind = Kind::Void;
  std::int64_t i = 0;
  bool b = false;
  std::uint32_t obj = 0;

  static Value int_(std::int64_t v) { return {Kind::Int, v, false, 0}; }
  static Value bool_(bool v) { return {Kind::Bool, 0, v, 0}; }
  static Value null() { return {Kind::Null, 0, false, 0}; }
  static Value object(std::uint32_t idx) { return {Kind::Object, 0, false, idx}; }

  friend bool operator==(const Value&, const Value&) = default;
};

std::string to_string(const Value& v);

enum class FaultKind { AssertionFailed, DivisionByZero, FuelExhausted, StackOverflow,
                       NullDereference, OperandType };
std::string_view to_string(FaultKind k);

/// Abnormal termination of an evaluation.
class Fault : public std::runtime_error {
 public:
  Fault(FaultKind kind, std::string message, std::string file, minilang::Span span);
  FaultKind kind() const { return kind_; }
  const std::string& file() const { return file_; }
  minilang::Span span() const { return span_; }

 private:
  FaultKind kind_;
  std::string file_;
  minilang::Span span_;
};

/// Receives call events for tracing.
class CallObserver {
 public:
  virtual ~CallObserver() = default;
  virtual void enter(const minilang::FunctionInfo& callee) = 0;
  virtual void leave() = 0;
};

struct Limits {
  std::int64_t fuel = 10'000'000;  // evaluation steps per top-level call
  int max_depth = 2000;            // nested calls
};

/// Big-step evaluator over a checked program. One instance per test: the
/// heap lives as long as the interpreter.
class Interpreter {
 public:
  Interpreter(const minilang::SemanticModel& model, Limits limits = {},
              CallObserver* observer = nullptr);
  ~Interpreter();
  Interpreter(const Interpreter&) = delete;
  Interpreter& operator=(const Interpreter&) = delete;

  /// Calls a static method or free function. Throws Fault.
  Value call(const minilang::FunctionInfo& fn, std::vector<Value> args);

  std::int64_t steps() const;
  /// Text written by std.print, one value per line.
  const std::string& output() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace updcheck::runtime
