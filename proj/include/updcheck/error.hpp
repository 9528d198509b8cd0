#pragma once

#include <stdexcept>
#include <string>

namespace updcheck {

enum class ErrorKind {
  Syntax,
  DuplicateDefinition,
  Type,
  InvalidManifest,
  VersionAlreadyPublished,
  UnresolvableDependency,
  DependencyCycle,
  UnknownPackage,
  UnknownVersion,
  ResolutionFailure,
  MismatchedProgram,
  Unreachable,
  RedBaseline,
  UnknownFixture,
  CorruptFixture,
  Io,
};

const char* to_string(ErrorKind kind);

/// Base of every error the toolkit reports. Callers that need to map
/// failures to exit codes switch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

/// An error tied to a position in a source file.
class SourceError : public Error {
 public:
  SourceError(ErrorKind kind, std::string file, int line, int column,
              const std::string& message)
      : Error(kind, format(file, line, column, message)),
        file_(std::move(file)),
        line_(line),
        column_(column) {}

  const std::string& file() const { return file_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  static std::string format(const std::string& file, int line, int column,
                            const std::string& message) {
    std::string where = file.empty() ? "<input>" : file;
    return where + ":" + std::to_string(line) + ":" + std::to_string(column) +
           ": " + message;
  }

  std::string file_;
  int line_;
  int column_;
};

class SyntaxError : public SourceError {
 public:
  SyntaxError(std::string file, int line, int column, const std::string& msg)
      : SourceError(ErrorKind::Syntax, std::move(file), line, column, msg) {}
};

class DuplicateDefinition : public SourceError {
 public:
  DuplicateDefinition(std::string file, int line, int column,
                      const std::string& msg)
      : SourceError(ErrorKind::DuplicateDefinition, std::move(file), line,
                    column, msg) {}
};

class TypeError : public SourceError {
 public:
  TypeError(std::string file, int line, int column, const std::string& msg)
      : SourceError(ErrorKind::Type, std::move(file), line, column, msg) {}
};

}  // namespace updcheck
