#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace crn {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed DSL input. Line and column are 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, std::size_t column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column),
        detail_(message) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string detail_;
};

class DuplicateNameError : public Error {
 public:
  explicit DuplicateNameError(const std::string& name)
      : Error("duplicate name '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class NegativeRateError : public Error {
 public:
  explicit NegativeRateError(const std::string& reaction)
      : Error("reaction '" + reaction + "' has a negative rate constant"), reaction_(reaction) {}
  const std::string& reaction() const noexcept { return reaction_; }

 private:
  std::string reaction_;
};

/// Kinetic-table JSON that does not match the schema. `pointer` is an RFC 6901 JSON pointer.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& pointer, const std::string& reason)
      : Error(pointer + ": " + reason), pointer_(pointer), reason_(reason) {}
  const std::string& pointer() const noexcept { return pointer_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string pointer_;
  std::string reason_;
};

/// A file could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

class GridOutOfRangeError : public Error {
 public:
  using Error::Error;
};

class InstabilityError : public Error {
 public:
  using Error::Error;
};

class AllRatesZeroError : public Error {
 public:
  AllRatesZeroError() : Error("no reaction can fire from the initial state") {}
};

class UnsupportedSbmlFeatureError : public Error {
 public:
  explicit UnsupportedSbmlFeatureError(const std::string& feature)
      : Error("unsupported SBML feature: " + feature), feature_(feature) {}
  const std::string& feature() const noexcept { return feature_; }

 private:
  std::string feature_;
};

class UnknownFixtureError : public Error {
 public:
  explicit UnknownFixtureError(const std::string& name) : Error("unknown fixture '" + name + "'") {}
};

/// A network with Error-severity validation issues reached a stage that needs an admissible one.
class InadmissibleNetworkError : public Error {
 public:
  using Error::Error;
};

class EmptySelectionError : public Error {
 public:
  EmptySelectionError() : Error("no species selected for plotting") {}
};

}  // namespace crn
