#pragma once

#include <stdexcept>
#include <string>

namespace uvms {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonUnitAxis : public Error {
 public:
  using Error::Error;
};

class JointLimitError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

class ClutchInactive : public Error {
 public:
  ClutchInactive() : Error("clutch is not active") {}
};

class OutOfOrderTimestamp : public Error {
 public:
  using Error::Error;
};

class MalformedMessage : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Raised while reading an input log; `line()` is 1-based.
class CorruptLog : public Error {
 public:
  CorruptLog(std::size_t line, const std::string& what)
      : Error("corrupt log at line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class VersionMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace uvms
