#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ltlfsynth {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed formula text. Line and column are 1-based.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message,
             std::vector<std::string> expected = {});

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::vector<std::string> expected_;
};

/// A proposition is used where the surrounding alphabet does not declare it.
class AlphabetMismatch : public Error {
 public:
  using Error::Error;
};

/// Use of a reserved identifier (`alive`, `a_term`).
class ReservedName : public Error {
 public:
  using Error::Error;
};

/// Structurally invalid model or malformed model file.
class ModelError : public Error {
 public:
  using Error::Error;
};

/// Caller passed parameters outside an operation's domain.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// A configured size cap was exceeded.
class ResourceLimit : public Error {
 public:
  using Error::Error;
};

/// A brute-force oracle was asked to enumerate more than its budget allows.
class BudgetExceeded : public ResourceLimit {
 public:
  using ResourceLimit::ResourceLimit;
};

/// Value iteration hit its iteration cap before the residual dropped below epsilon.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, double residual)
      : Error(message), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace ltlfsynth
