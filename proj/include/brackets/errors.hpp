#pragma once

#include <stdexcept>
#include <string>

namespace brackets {

enum class ErrorKind {
  MissingAssignment,
  ZeroPivot,
  SingularSystem,
  IndexCollision,
  UnknownFunction,
  UnknownRepresentation,
  ParseError,
  UndeclaredParameter,
  NotHypergeometric,
  NonConverged,
  OutsideRegion,
  NoDescent,
  GrowthDetected,
  DomainError,
  EndpointSingular,
  UnsupportedModulus,
  BoundaryNotAsserted,
  CorpusFormatError,
  MethodFails,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace brackets
