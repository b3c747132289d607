#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace anthro {

enum class ErrorCode {
  InvalidArgument,
  NonManifoldEdge,
  DegenerateSection,
  ParseError,
  MissingJoint,
  NotWatertight,
  InvalidParams,
  NoSection,
  AmbiguousSection,
  EmptyRegion,
  AxillaNotFound,
  CrotchNotFound,
  TooFewPoints,
  DegenerateCloud,
  ZeroVariance,
  TooFewSamples,
  IdMismatch,
  MissingFold,
  SchemaVersion,
  IoError,
  BuildFailed,
};

std::string_view to_string(ErrorCode code);

// Every recoverable failure in the library is reported as an Error carrying a
// machine-readable code; the message is for humans.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

private:
  ErrorCode code_;
};

}  // namespace anthro
