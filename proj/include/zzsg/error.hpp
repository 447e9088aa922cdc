#pragma once

#include <stdexcept>
#include <string>

namespace zzsg {

enum class ErrorKind {
  MixedParameterFamilies,
  NotScalarDegree,
  NonNilpotentRemainder,
  DegreeMismatch,
  WeightMismatch,
  OutsideWindow,
  InhomogeneousDegree,
  InhomogeneousWeight,
  UnknownSymbol,
  UnsupportedAtom,
  NonTermination,
  UnresolvedGenerator,
  SyntaxError,
  ConfigError,
  VelocityOutOfRange,
  CFLViolation,
  NonFiniteValue,
  InconsistentSystem,
  InvalidArgument,
  GoldenMismatch,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace zzsg
