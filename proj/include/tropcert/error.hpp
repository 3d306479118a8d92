#pragma once

#include <stdexcept>
#include <string>

namespace tropcert {

enum class ErrorCode {
  ArithmeticOverflow = 1,
  InfeasiblePolyhedron,
  InvalidArgument,
  InvalidIndexPair,
  InvalidQuadruple,
  UnsupportedBodyCount,
  ZeroCoefficient,
  EmptyHypersurface,
  AmbientMismatch,
  DistinctValuationsRequired,
  OracleTooLarge,
  SchemaMismatch,
  DigestMismatch,
  Io,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown by Checked64 on any overflow; callers rerun the enclosing
// operation with big integers.
class ArithmeticOverflow : public Error {
 public:
  ArithmeticOverflow() : Error(ErrorCode::ArithmeticOverflow, "64-bit integer overflow") {}
};

}  // namespace tropcert
