#pragma once

#include <stdexcept>
#include <string>

namespace vlmc {

enum class ErrorCode {
  InvalidAlphabet,
  InvalidWord,
  NotSaturated,
  NotAntichain,
  LeafBudgetExceeded,
  InternalWord,
  NoContextPrefix,
  InfiniteAlphaLisSet,
  InvalidModel,
  InvalidPolicy,
  Assumption1Violated,
  Assumption2Violated,
  NotStochastic,
  Reducible,
  NoConvergence,
  InconclusiveEntry,
  InconclusiveSum,
  Unsupported,
  RunCapExceeded,
  SyntaxError,
  SemanticError,
  InternalConsistency,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library. `witness()` carries the offending
/// word, pair or location when the error has one.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string witness = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& witness() const noexcept { return witness_; }

 private:
  ErrorCode code_;
  std::string witness_;
};

}  // namespace vlmc
