#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace idem {

enum class ErrorKind {
  NotPositive,
  NotSquareFree,
  AlphaIsOneModFourZero,
  RingMismatch,
  NotDivisible,
  DivisionByZero,
  ModuliNotCoprime,
  ZeroHasNoFactorization,
  GcdNotOne,
  BudgetExhausted,
  AllGeneratorsZero,
  NotInIdeal,
  ZeroIdeal,
  NotInSL2,
  NotIdempotent,
  NotUnimodular,
  ChainBroken,
  PreconditionViolated,
  NoUnimodularSolutionInBudget,
  NotPrincipalWitness,
  PipelineInvariantViolated,
  VerificationFailed,
  ParseError,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::NotPositive: return "NotPositive";
    case ErrorKind::NotSquareFree: return "NotSquareFree";
    case ErrorKind::AlphaIsOneModFourZero: return "AlphaIsOneModFourZero";
    case ErrorKind::RingMismatch: return "RingMismatch";
    case ErrorKind::NotDivisible: return "NotDivisible";
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::ModuliNotCoprime: return "ModuliNotCoprime";
    case ErrorKind::ZeroHasNoFactorization: return "ZeroHasNoFactorization";
    case ErrorKind::GcdNotOne: return "GcdNotOne";
    case ErrorKind::BudgetExhausted: return "BudgetExhausted";
    case ErrorKind::AllGeneratorsZero: return "AllGeneratorsZero";
    case ErrorKind::NotInIdeal: return "NotInIdeal";
    case ErrorKind::ZeroIdeal: return "ZeroIdeal";
    case ErrorKind::NotInSL2: return "NotInSL2";
    case ErrorKind::NotIdempotent: return "NotIdempotent";
    case ErrorKind::NotUnimodular: return "NotUnimodular";
    case ErrorKind::ChainBroken: return "ChainBroken";
    case ErrorKind::PreconditionViolated: return "PreconditionViolated";
    case ErrorKind::NoUnimodularSolutionInBudget: return "NoUnimodularSolutionInBudget";
    case ErrorKind::NotPrincipalWitness: return "NotPrincipalWitness";
    case ErrorKind::PipelineInvariantViolated: return "PipelineInvariantViolated";
    case ErrorKind::VerificationFailed: return "VerificationFailed";
    case ErrorKind::ParseError: return "ParseError";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this exception; `kind()`
/// is stable and meant for dispatch, `what()` is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

inline void require(bool condition, ErrorKind kind, const std::string& message) {
  if (!condition) fail(kind, message);
}

}  // namespace idem
