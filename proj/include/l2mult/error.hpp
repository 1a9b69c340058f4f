#pragma once

#include <stdexcept>
#include <string>

namespace l2mult {

enum class ErrorKind {
  ClosureTooLarge,
  NumericalDegeneracy,
  NotIntegral,
  NotAnAction,
  CannotInduce,
  CrossCheckFailed,
  HNotNormalizing,
  UnsupportedFamily,
  ChainBroken,
  NotHermitian,
  MomentMismatch,
  BoundViolated,
  NotAComplex,
  NotFree,
  CharacterMismatch,
  InvalidArgument,
  ParseError,
  ConfigInvalid,
  IoError,
};

const char* to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` identifies the failure.
/// `level()` carries the chain level for ChainBroken and is -1 otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, int level = -1);

  ErrorKind kind() const { return kind_; }
  int level() const { return level_; }

 private:
  ErrorKind kind_;
  int level_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message, int level = -1);

}  // namespace l2mult
