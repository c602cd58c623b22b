#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace swe {

/// Base of all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid user-supplied parameters (intervals, edge lengths, CLI config).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed mesh or config file. Carries the 1-based line number (0 if unknown).
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Connectivity or geometry that violates the mesh invariants.
class MeshError : public Error {
 public:
  using Error::Error;
};

/// Linear solver breakdown, singular element blocks, eigensolver failure.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace swe
