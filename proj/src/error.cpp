#include "l2mult/error.hpp"

namespace l2mult {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ClosureTooLarge: return "ClosureTooLarge";
    case ErrorKind::NumericalDegeneracy: return "NumericalDegeneracy";
    case ErrorKind::NotIntegral: return "NotIntegral";
    case ErrorKind::NotAnAction: return "NotAnAction";
    case ErrorKind::CannotInduce: return "CannotInduce";
    case ErrorKind::CrossCheckFailed: return "CrossCheckFailed";
    case ErrorKind::HNotNormalizing: return "HNotNormalizing";
    case ErrorKind::UnsupportedFamily: return "UnsupportedFamily";
    case ErrorKind::ChainBroken: return "ChainBroken";
    case ErrorKind::NotHermitian: return "NotHermitian";
    case ErrorKind::MomentMismatch: return "MomentMismatch";
    case ErrorKind::BoundViolated: return "BoundViolated";
    case ErrorKind::NotAComplex: return "NotAComplex";
    case ErrorKind::NotFree: return "NotFree";
    case ErrorKind::CharacterMismatch: return "CharacterMismatch";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::ConfigInvalid: return "ConfigInvalid";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, int level)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message),
      kind_(kind),
      level_(level) {}

void fail(ErrorKind kind, const std::string& message, int level) {
  throw Error(kind, message, level);
}

}  // namespace l2mult
