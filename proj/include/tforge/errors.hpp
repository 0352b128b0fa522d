#pragma once

#include <stdexcept>
#include <string>

namespace tforge {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Syntax error while parsing an expression. offset is 1-based byte position.
struct ParseError : Error {
  ParseError(std::size_t off, const std::string& msg)
      : Error("parse error at offset " + std::to_string(off) + ": " + msg), offset(off) {}
  std::size_t offset;
};

// Domain violation while evaluating an expression (ln of non-positive value,
// division by zero, ...). subexpr names the offending subexpression.
struct EvalError : Error {
  EvalError(const std::string& msg, const std::string& sub)
      : Error(msg + " in '" + sub + "'"), subexpr(sub) {}
  std::string subexpr;
};

// Bad metric, degenerate tetrad, point outside domain, malformed geometry file.
struct GeometryError : Error {
  using Error::Error;
};

// Algebraic misuse: mixed metric contexts, non-invertible elements,
// non-convergent series, ideal solve failures.
struct AlgebraError : Error {
  using Error::Error;
};

}  // namespace tforge
