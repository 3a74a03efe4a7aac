#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cfw {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Parse failure. Carries the byte offset into the input and the set of
/// tokens that would have been accepted at that point.
class SyntaxError : public Error {
public:
  SyntaxError(std::size_t position, std::vector<std::string> expected,
              const std::string& found);
  std::size_t position() const { return position_; }
  const std::vector<std::string>& expected() const { return expected_; }

private:
  std::size_t position_;
  std::vector<std::string> expected_;
};

/// An atom token does not name any declared measurement or outcome.
class UnknownAtomError : public Error {
public:
  UnknownAtomError(std::size_t position, const std::string& name)
      : Error("unknown atom '" + name + "' at offset " +
              std::to_string(position)),
        position_(position) {}
  std::size_t position() const { return position_; }

private:
  std::size_t position_;
};

class CapacityError : public Error {
public:
  using Error::Error;
};

class DimensionError : public Error {
public:
  using Error::Error;
};

class SolveFailure : public Error {
public:
  using Error::Error;
};

/// Configuration file is syntactically or semantically invalid. Line and
/// column are 1-based; column 0 means "whole line".
class ConfigError : public Error {
public:
  ConfigError(int line, int column, const std::string& message)
      : Error("config error at line " + std::to_string(line) + ":" +
              std::to_string(column) + ": " + message),
        line_(line), column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

private:
  int line_;
  int column_;
};

class NotRudimentaryError : public Error {
public:
  using Error::Error;
};

class BadIndexError : public Error {
public:
  using Error::Error;
};

class ShapeMismatchError : public Error {
public:
  using Error::Error;
};

class SearchIncompleteError : public Error {
public:
  using Error::Error;
};

class EmptyStartError : public Error {
public:
  using Error::Error;
};

}  // namespace cfw
