#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace vital {

/// Base of every error raised by the library. `kind()` is a stable,
/// machine-readable tag that the CLI echoes in its error objects.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual std::string_view kind() const noexcept = 0;
};

/// Input data violates a schema or integrity rule (non-finite samples,
/// duplicate ids, mismatched prediction sets).
class IntegrityError : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "integrity"; }
};

/// Invalid configuration or violated precondition on parameters.
class ConfigError : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "config"; }
};

/// Out-of-order or duplicate window appended to a memory log.
class OrderingError : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "ordering"; }
};

/// Malformed serialized input. `line()` is 1-based; 0 when not line oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::string_view kind() const noexcept override { return "parse"; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// An external backend did not answer in time.
class BackendTimeout : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "backend_timeout"; }
};

/// An external backend answered with a transport or protocol failure.
class BackendError : public Error {
 public:
  using Error::Error;
  std::string_view kind() const noexcept override { return "backend"; }
};

}  // namespace vital
