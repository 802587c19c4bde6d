#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gait {

// Base class for everything this library throws on bad input or bad state.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text. line_no is 1-based and refers to the offending line
// of the document being parsed.
struct ParseError : Error {
  std::size_t line_no;
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_no(line) {}
};

// Not enough observations to carry out the requested computation.
struct InsufficientDataError : Error {
  using Error::Error;
};

// The optimizer hit its iteration cap before reaching the tolerance.
struct ConvergenceError : Error {
  using Error::Error;
};

}  // namespace gait
