#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace quorum {

// Stable machine-readable error classes, reported by the CLI on failure.
enum class ErrorClass {
  Usage,
  Config,
  Io,
  Schema,
  Parse,
  Transport,
  Validation,
};

const char* to_string(ErrorClass cls);

class Error : public std::runtime_error {
 public:
  Error(ErrorClass cls, const std::string& message)
      : std::runtime_error(message), cls_(cls) {}

  ErrorClass error_class() const { return cls_; }

 private:
  ErrorClass cls_;
};

// Configuration problems. Carries every violation found, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> violations)
      : Error(ErrorClass::Config, join(violations)), violations_(std::move(violations)) {}

  explicit ConfigError(const std::string& message)
      : Error(ErrorClass::Config, message), violations_{message} {}

  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& vs) {
    std::string out;
    for (const auto& v : vs) {
      if (!out.empty()) out += "; ";
      out += v;
    }
    return out;
  }

  std::vector<std::string> violations_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string& message) : Error(ErrorClass::Io, message) {}
};

class SchemaError : public Error {
 public:
  explicit SchemaError(const std::string& message) : Error(ErrorClass::Schema, message) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& message) : Error(ErrorClass::Parse, message) {}
};

// No extraction rule matched an answer letter in the model output.
class NoOptionFound : public ParseError {
 public:
  explicit NoOptionFound(const std::string& message) : ParseError(message) {}
};

class TransportError : public Error {
 public:
  TransportError(const std::string& message, int attempts = 1)
      : Error(ErrorClass::Transport, message), attempts_(attempts) {}

  int attempts() const { return attempts_; }

 private:
  int attempts_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& message) : Error(ErrorClass::Validation, message) {}
};

}  // namespace quorum
