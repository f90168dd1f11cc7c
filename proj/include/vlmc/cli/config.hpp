#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "vlmc/model.hpp"
#include "vlmc/series.hpp"

namespace vlmc::cli {

struct ModelConfig {
  ProbabilizedTree model;
  std::optional<Word> init;
  SeriesPolicy policy;
  std::optional<std::uint64_t> seed;
};

/// Parses the JSON model format described in docs/model-config.md. Throws
/// SyntaxError ("line L, column C") or SemanticError (JSON pointer of the
/// offending field) as vlmc::Error, with the location as witness.
ModelConfig parse_model_config(std::string_view text);

/// Canonical form: sorted keys, two-space indent, every default spelled out.
/// parse_model_config(emit_model_config(c)) emits the same bytes again.
std::string emit_model_config(const ModelConfig& config);

/// FNV-1a 64 of the canonical form, as 16 hex digits.
std::string fingerprint(const ModelConfig& config);

}  // namespace vlmc::cli
