#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace warpcurv {

// Base for every error raised by the library. CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: expression syntax, unknown names, bad family strings.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::string source, std::size_t position)
      : Error(message), source_(std::move(source)), position_(position) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t position() const noexcept { return position_; }

  // Two-line rendering: the offending input and a caret under `position`.
  std::string caret() const {
    return source_ + "\n" + std::string(position_, ' ') + "^";
  }

 private:
  std::string source_;
  std::size_t position_;
};

// Invalid configuration: family parameters, grids, tolerances.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A point outside the domain of a function or chart.
class DomainError : public Error {
 public:
  using Error::Error;
};

// NaN/Inf produced where a finite value is required.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace warpcurv
