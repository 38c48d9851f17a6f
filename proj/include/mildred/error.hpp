#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mildred {

/// Failure categories surfaced by the library. The CLI maps these onto exit codes.
enum class Errc {
  DivisionByZero,
  NotCoprime,
  EmptyRHS,
  InternalInconsistency,
  ZeroDifferential,
  NoRootOfUnity,
  NoLogarithmicTwist,
  NotDivisible,
  PreconditionViolated,
  MalformedGraph,
  ExceptionalInput,
  BoundsTooLarge,
  HasseArfViolation,
  InsufficientPrecision,
  DegreeTooLarge,
  NonIntegralGenus,
  SignatureViolation,
  GenusNotZero,
  PSylowNotCyclicOrderP,
  ParseError,
  UnknownSubcommand,
  Overflow,
};

inline std::string_view to_string(Errc c) {
  switch (c) {
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::NotCoprime: return "NotCoprime";
    case Errc::EmptyRHS: return "EmptyRHS";
    case Errc::InternalInconsistency: return "InternalInconsistency";
    case Errc::ZeroDifferential: return "ZeroDifferential";
    case Errc::NoRootOfUnity: return "NoRootOfUnity";
    case Errc::NoLogarithmicTwist: return "NoLogarithmicTwist";
    case Errc::NotDivisible: return "NotDivisible";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::MalformedGraph: return "MalformedGraph";
    case Errc::ExceptionalInput: return "ExceptionalInput";
    case Errc::BoundsTooLarge: return "BoundsTooLarge";
    case Errc::HasseArfViolation: return "HasseArfViolation";
    case Errc::InsufficientPrecision: return "InsufficientPrecision";
    case Errc::DegreeTooLarge: return "DegreeTooLarge";
    case Errc::NonIntegralGenus: return "NonIntegralGenus";
    case Errc::SignatureViolation: return "SignatureViolation";
    case Errc::GenusNotZero: return "GenusNotZero";
    case Errc::PSylowNotCyclicOrderP: return "PSylowNotCyclicOrderP";
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownSubcommand: return "UnknownSubcommand";
    case Errc::Overflow: return "Overflow";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, Errc code, const std::string& what) {
  if (!cond) fail(code, what);
}

}  // namespace mildred
