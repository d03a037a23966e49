#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nhcech {

enum class ErrorCode {
  MalformedSimplex,
  DimensionMismatch,
  NotASubspace,
  NonPrimeModulus,
  InvalidSystem,
  EmptyIndexSet,
  BadIndexSet,
  IncompatibleFamily,
  NotSimplicial,
  NotSubcomplex,
  NotBinary,
  WrongField,
  NonAbelianRank,
  IncompatibleData,
  InvalidRefinement,
  ParseError,
  UnknownCommand,
  UnknownGallery,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedSimplex: return "MalformedSimplex";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotASubspace: return "NotASubspace";
    case ErrorCode::NonPrimeModulus: return "NonPrimeModulus";
    case ErrorCode::InvalidSystem: return "InvalidSystem";
    case ErrorCode::EmptyIndexSet: return "EmptyIndexSet";
    case ErrorCode::BadIndexSet: return "BadIndexSet";
    case ErrorCode::IncompatibleFamily: return "IncompatibleFamily";
    case ErrorCode::NotSimplicial: return "NotSimplicial";
    case ErrorCode::NotSubcomplex: return "NotSubcomplex";
    case ErrorCode::NotBinary: return "NotBinary";
    case ErrorCode::WrongField: return "WrongField";
    case ErrorCode::NonAbelianRank: return "NonAbelianRank";
    case ErrorCode::IncompatibleData: return "IncompatibleData";
    case ErrorCode::InvalidRefinement: return "InvalidRefinement";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::UnknownCommand: return "UnknownCommand";
    case ErrorCode::UnknownGallery: return "UnknownGallery";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace nhcech
