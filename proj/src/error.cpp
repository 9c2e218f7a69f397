#include "cknet/error.hpp"

namespace cknet {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularMatrix: return "SingularMatrix";
    case ErrorKind::NonRealImage: return "NonRealImage";
    case ErrorKind::DegenerateAngle: return "DegenerateAngle";
    case ErrorKind::DegenerateQuad: return "DegenerateQuad";
    case ErrorKind::DegenerateEvolution: return "DegenerateEvolution";
    case ErrorKind::DegenerateFrame: return "DegenerateFrame";
    case ErrorKind::IncompatibleField: return "IncompatibleField";
    case ErrorKind::NegativeRadicand: return "NegativeRadicand";
    case ErrorKind::NonConcircular: return "NonConcircular";
    case ErrorKind::CoincidentVertices: return "CoincidentVertices";
    case ErrorKind::ZeroEdge: return "ZeroEdge";
    case ErrorKind::InvalidStep: return "InvalidStep";
    case ErrorKind::NoSolution: return "NoSolution";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::InvariantViolation: return "InvariantViolation";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::SingularMatrix:
    case ErrorKind::NonRealImage:
    case ErrorKind::DegenerateAngle:
    case ErrorKind::DegenerateQuad:
    case ErrorKind::DegenerateEvolution:
    case ErrorKind::DegenerateFrame:
    case ErrorKind::NegativeRadicand:
    case ErrorKind::NonConcircular:
    case ErrorKind::CoincidentVertices:
    case ErrorKind::ZeroEdge:
    case ErrorKind::InvalidStep:
    case ErrorKind::NoSolution:
      return true;
    default:
      return false;
  }
}

}  // namespace cknet
