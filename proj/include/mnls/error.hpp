#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mnls {

enum class ErrorKind {
  AsymmetricInput,
  NonFinite,
  InvalidArgument,
  SupercriticalExponent,
  NoConvergence,
  NoSolutionFound,
  InvalidPartition,
  EmptyCandidates,
  EmptySelection,
  RegimeViolation,
  NotCritical,
  NonFiniteField,
  NotABlowupRun,
  ConfigError,
  IoError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace mnls
