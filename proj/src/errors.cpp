#include "vlmc/errors.hpp"

namespace vlmc {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidAlphabet: return "InvalidAlphabet";
    case ErrorCode::InvalidWord: return "InvalidWord";
    case ErrorCode::NotSaturated: return "NotSaturated";
    case ErrorCode::NotAntichain: return "NotAntichain";
    case ErrorCode::LeafBudgetExceeded: return "LeafBudgetExceeded";
    case ErrorCode::InternalWord: return "InternalWord";
    case ErrorCode::NoContextPrefix: return "NoContextPrefix";
    case ErrorCode::InfiniteAlphaLisSet: return "InfiniteAlphaLisSet";
    case ErrorCode::InvalidModel: return "InvalidModel";
    case ErrorCode::InvalidPolicy: return "InvalidPolicy";
    case ErrorCode::Assumption1Violated: return "Assumption1Violated";
    case ErrorCode::Assumption2Violated: return "Assumption2Violated";
    case ErrorCode::NotStochastic: return "NotStochastic";
    case ErrorCode::Reducible: return "Reducible";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::InconclusiveEntry: return "InconclusiveEntry";
    case ErrorCode::InconclusiveSum: return "InconclusiveSum";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::RunCapExceeded: return "RunCapExceeded";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SemanticError: return "SemanticError";
    case ErrorCode::InternalConsistency: return "InternalConsistency";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message, std::string witness)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      witness_(std::move(witness)) {}

}  // namespace vlmc
