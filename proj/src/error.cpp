#include "mnls/error.hpp"

namespace mnls {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::AsymmetricInput: return "AsymmetricInput";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::SupercriticalExponent: return "SupercriticalExponent";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::NoSolutionFound: return "NoSolutionFound";
    case ErrorKind::InvalidPartition: return "InvalidPartition";
    case ErrorKind::EmptyCandidates: return "EmptyCandidates";
    case ErrorKind::EmptySelection: return "EmptySelection";
    case ErrorKind::RegimeViolation: return "RegimeViolation";
    case ErrorKind::NotCritical: return "NotCritical";
    case ErrorKind::NonFiniteField: return "NonFiniteField";
    case ErrorKind::NotABlowupRun: return "NotABlowupRun";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace mnls
