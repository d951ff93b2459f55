#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mmcheck {

enum class ErrorKind {
  Syntax,
  DuplicateValue,
  UnsourcedRead,
  AmbiguousRf,
  DanglingRef,
  InvalidDp,
  UnknownModel,
  PreconditionViolated,
  NotAPermutation,
  InternalWitnessInvalid,
  KTooLarge,
  KTooLargeForOracle,
  SearchSpaceTooLarge,
  NotThreeSat,
  MalformedDimacs,
  TooManyVars,
  NoAlternativeWriter,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Syntax: return "SyntaxError";
    case ErrorKind::DuplicateValue: return "DuplicateValue";
    case ErrorKind::UnsourcedRead: return "UnsourcedRead";
    case ErrorKind::AmbiguousRf: return "AmbiguousRf";
    case ErrorKind::DanglingRef: return "DanglingRef";
    case ErrorKind::InvalidDp: return "InvalidDp";
    case ErrorKind::UnknownModel: return "UnknownModel";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NotAPermutation: return "NotAPermutation";
    case ErrorKind::InternalWitnessInvalid: return "InternalWitnessInvalid";
    case ErrorKind::KTooLarge: return "KTooLarge";
    case ErrorKind::KTooLargeForOracle: return "KTooLargeForOracle";
    case ErrorKind::SearchSpaceTooLarge: return "SearchSpaceTooLarge";
    case ErrorKind::NotThreeSat: return "NotThreeSat";
    case ErrorKind::MalformedDimacs: return "MalformedDimacs";
    case ErrorKind::TooManyVars: return "TooManyVars";
    case ErrorKind::NoAlternativeWriter: return "NoAlternativeWriter";
  }
  return "Error";
}

// Resource errors map to a distinct CLI exit code.
constexpr bool is_resource_error(ErrorKind kind) {
  return kind == ErrorKind::KTooLarge || kind == ErrorKind::KTooLargeForOracle ||
         kind == ErrorKind::SearchSpaceTooLarge || kind == ErrorKind::TooManyVars;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::size_t line = 0)
      : std::runtime_error(format(kind, message, line)), kind_(kind), line_(line) {}

  ErrorKind kind() const noexcept { return kind_; }

  /// 1-based source line for parse errors, 0 when not applicable.
  std::size_t line() const noexcept { return line_; }

 private:
  static std::string format(ErrorKind kind, const std::string& message, std::size_t line) {
    std::string out(to_string(kind));
    if (line != 0) {
      out += " (line " + std::to_string(line) + ")";
    }
    out += ": ";
    out += message;
    return out;
  }

  ErrorKind kind_;
  std::size_t line_;
};

}  // namespace mmcheck
