#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace polcov {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file. Carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what),
        file_(std::move(file)),
        line_(line) {}

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

/// Input is well-formed but violates a schema or domain constraint.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A statistic is undefined for the given data (zero marginals, empty slice, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

}  // namespace polcov
