#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pfl {

/// Malformed input document. Carries the 1-based line/column of the fault.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what + " (line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ")"),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Well-formed input that violates a domain invariant. `field()` is a path such
/// as `links[0].mass_kg`.
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

/// The robot model cannot support the requested computation (singular mass
/// matrix, unknown link, DOF mismatch).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A request the assessment procedure deliberately does not cover.
class UnsupportedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pfl
