#pragma once

#include <stdexcept>
#include <string>

namespace cfsail {

enum class ErrorKind {
  InvalidOperator,     // |det| != 1
  NonSquarefree,       // polynomial shares a factor with its derivative
  NotTotallyReal,      // characteristic polynomial has complex roots
  Reducible,           // characteristic polynomial has a rational root
  ZeroRay,             // integer angle of a zero vector
  DegenerateSpan,      // points do not span 3-space
  Unbounded,           // input does not bound a polytope
  Dependent,           // vectors are linearly dependent
  BasisNotFound,       // unit search budget exhausted
  SeedOutsideOrthant,  // seed vector lies on an eigenplane
  InconsistentGluing,  // identifications do not close up into a torus
  ParamOutOfRange,     // proposition parameter outside its validity range
  UnsupportedFormat,   // unknown rendering format
  InvalidInput,        // malformed user input
  LimitExceeded,       // internal search limit hit
};

inline const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidOperator: return "InvalidOperator";
    case ErrorKind::NonSquarefree: return "NonSquarefree";
    case ErrorKind::NotTotallyReal: return "NotTotallyReal";
    case ErrorKind::Reducible: return "Reducible";
    case ErrorKind::ZeroRay: return "ZeroRay";
    case ErrorKind::DegenerateSpan: return "DegenerateSpan";
    case ErrorKind::Unbounded: return "Unbounded";
    case ErrorKind::Dependent: return "Dependent";
    case ErrorKind::BasisNotFound: return "BasisNotFound";
    case ErrorKind::SeedOutsideOrthant: return "SeedOutsideOrthant";
    case ErrorKind::InconsistentGluing: return "InconsistentGluing";
    case ErrorKind::ParamOutOfRange: return "ParamOutOfRange";
    case ErrorKind::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::LimitExceeded: return "LimitExceeded";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Process exit code for an error: 2 for bad input, 3 for exhausted limits
/// and failed constructions.
inline int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::BasisNotFound:
    case ErrorKind::LimitExceeded:
    case ErrorKind::InconsistentGluing:
      return 3;
    default:
      return 2;
  }
}

}  // namespace cfsail
