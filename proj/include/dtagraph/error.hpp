#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dtagraph {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text. `line()` is 1-based, 0 when not line oriented.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0)
      : Error(line == 0 ? what : what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// A value violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Dataset records reference each other inconsistently.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// I/O or remote-resource failure.
class IoError : public Error {
 public:
  using Error::Error;
};

/// A remote resource does not exist (e.g. unknown accession).
class NotFoundError : public IoError {
 public:
  using IoError::IoError;
};

/// A metric is mathematically undefined for the given input.
class UndefinedMetric : public Error {
 public:
  using Error::Error;
};

/// Training produced a non-finite loss.
class TrainingDiverged : public Error {
 public:
  using Error::Error;
};

}  // namespace dtagraph
