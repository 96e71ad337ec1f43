#ifndef STKIT_ERROR_HPP
#define STKIT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace stkit {

// One code per failure condition the library can report. The C API maps
// these 1:1 onto stk_status values.
enum class ErrorCode {
  NotRiff,
  UnsupportedFormat,
  Truncated,
  BadFactor,
  SilentSignal,
  BadFrame,
  NotANumber,
  TooLarge,
  DegenerateLabels,
  Infeasible,
  EmptyCorpus,
  EmptySide,
  TooFew,
  EmptyReference,
  LengthMismatch,
  MalformedLine,
  IdMismatch,
  MissingScore,
  GridEmpty,
  RefMismatch,
  InvalidArgument,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NotRiff: return "NotRiff";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::BadFactor: return "BadFactor";
    case ErrorCode::SilentSignal: return "SilentSignal";
    case ErrorCode::BadFrame: return "BadFrame";
    case ErrorCode::NotANumber: return "NotANumber";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::DegenerateLabels: return "DegenerateLabels";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptySide: return "EmptySide";
    case ErrorCode::TooFew: return "TooFew";
    case ErrorCode::EmptyReference: return "EmptyReference";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MalformedLine: return "MalformedLine";
    case ErrorCode::IdMismatch: return "IdMismatch";
    case ErrorCode::MissingScore: return "MissingScore";
    case ErrorCode::GridEmpty: return "GridEmpty";
    case ErrorCode::RefMismatch: return "RefMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace stkit

#endif  // STKIT_ERROR_HPP
