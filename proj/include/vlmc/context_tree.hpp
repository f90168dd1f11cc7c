#pragma once

#include <cstddef>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "vlmc/words.hpp"

namespace vlmc {

inline constexpr std::size_t kDefaultLeafBudget = 1'000'000;

enum class NodeKind { Internal, Leaf, External };

const char* to_string(NodeKind kind) noexcept;

/// Decomposition w = prefix · alpha · lis where lis is the longest internal
/// proper suffix of w.
struct AlphaLis {
  Letter alpha{};
  Word lis;
  Word prefix;

  /// The α-lis itself, alpha followed by lis.
  Word word() const { return alpha + lis; }
};

/// Saturated context tree. Either an explicit finite tree given by its
/// leaves, or a comb family whose contexts are α^k β (α ≠ β, k ≥ 1) with one
/// infinite branch α^∞ per letter. Infinite branches are never materialized;
/// comb queries are answered in closed form. Immutable after construction.
class ContextTree {
 public:
  enum class Kind { Explicit, Comb };

  /// Throws NotAntichain, NotSaturated, InvalidWord or LeafBudgetExceeded.
  static ContextTree make_explicit(const Alphabet& alphabet, std::vector<Word> leaves,
                                   std::size_t leaf_budget = kDefaultLeafBudget);
  static ContextTree make_comb(const Alphabet& alphabet);

  Kind kind() const noexcept { return kind_; }
  bool is_comb() const noexcept { return kind_ == Kind::Comb; }
  const Alphabet& alphabet() const noexcept { return alphabet_; }

  /// Leaves in canonical order (explicit trees only; empty for combs).
  const std::vector<Word>& leaves() const noexcept { return leaves_; }
  /// Internal nodes in canonical order (explicit trees only).
  const std::vector<Word>& internal_nodes() const noexcept { return internal_; }
  /// Longest leaf length; nullopt for combs.
  std::optional<std::size_t> height() const noexcept;

  NodeKind classify(std::string_view w) const;
  bool is_internal(std::string_view w) const { return classify(w) == NodeKind::Internal; }

  /// Finite contexts of exactly `length` letters, canonical order.
  std::vector<Word> contexts_of_length(std::size_t length) const;

 private:
  ContextTree(Kind kind, Alphabet alphabet) : kind_(kind), alphabet_(std::move(alphabet)) {}

  Kind kind_;
  Alphabet alphabet_;
  std::vector<Word> leaves_;
  std::vector<Word> internal_;
  std::unordered_set<Word> leaf_set_;
  std::unordered_set<Word> internal_set_;
  std::size_t height_ = 0;
};

ContextTree build_explicit_tree(const Alphabet& alphabet, std::vector<Word> leaves,
                                std::size_t leaf_budget = kDefaultLeafBudget);

NodeKind classify_word(const ContextTree& tree, std::string_view w);

/// The unique context c with w = c⋯. Throws InternalWord when w is internal
/// and NoContextPrefix when no stored context prefixes w.
Word pref(const ContextTree& tree, std::string_view w);

/// Throws InvalidWord on the empty word.
AlphaLis alpha_lis(const ContextTree& tree, std::string_view w);

struct AlphaLisSet {
  std::vector<Word> members;  // canonical order
  bool finite = true;
};

AlphaLisSet alpha_lis_set(const ContextTree& tree);

struct StabilityReport {
  bool stable = true;
  /// A word αw in the tree whose suffix w is not.
  std::optional<Word> witness;
};

/// Checks that αw ∈ T implies w ∈ T, and cross-checks it against "αc is
/// non-internal for every finite context c". Disagreement between the two
/// throws InternalConsistency.
StabilityReport is_stable(const ContextTree& tree);

}  // namespace vlmc
