#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cknet {

enum class ErrorKind {
  SingularMatrix,
  NonRealImage,
  DegenerateAngle,
  DegenerateQuad,
  DegenerateEvolution,
  DegenerateFrame,
  IncompatibleField,
  NegativeRadicand,
  NonConcircular,
  CoincidentVertices,
  ZeroEdge,
  InvalidStep,
  NoSolution,
  ParseError,
  DimensionMismatch,
  InvariantViolation,
  IoError,
};

std::string_view to_string(ErrorKind kind);

/// Exception carrying a machine-readable kind. Every failure raised by the
/// library is one of these; callers dispatch on kind().
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Numerical degeneracies (as opposed to bad input or violated invariants).
bool is_numerical(ErrorKind kind);

}  // namespace cknet
