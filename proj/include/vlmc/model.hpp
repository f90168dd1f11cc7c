#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "vlmc/context_tree.hpp"
#include "vlmc/tail_rule.hpp"

namespace vlmc {

/// Transition law of the contexts α^k β of one comb branch: persist with
/// probability q_k, otherwise switch to γ ≠ α with weight switch_weights[γ].
struct PairRule {
  TailRule persist;
  /// Indexed by alphabet position; the run letter α carries weight 0.
  std::vector<double> switch_weights;

  bool operator==(const PairRule& other) const = default;
};

/// Probability that the comb context α^k β (alphabet indices) emits `letter`.
inline double comb_probability(const PairRule& rule, std::size_t alpha, std::size_t k,
                               std::size_t letter) {
  const double q = rule.persist.persist(k);
  return letter == alpha ? q : (1.0 - q) * rule.switch_weights[letter];
}

/// Context tree endowed with one distribution over the alphabet per
/// context. Explicit trees carry a table; comb families carry a PairRule per
/// ordered letter pair (α, β), α ≠ β. Immutable after construction.
class ProbabilizedTree {
 public:
  /// `q` maps every leaf to its distribution in alphabet order. Entries may
  /// be zero (reported by validate_non_null); each row must sum to 1 within
  /// 1e-12. Throws InvalidModel.
  static ProbabilizedTree explicit_model(ContextTree tree, std::map<Word, std::vector<double>> q);

  /// `rules` maps the two-letter word αβ (run letter first) to its rule.
  /// Every ordered pair must be present. Switch weights must sum to 1 and be
  /// positive unless `nullable`. Throws InvalidModel.
  static ProbabilizedTree comb_model(const Alphabet& alphabet, std::map<Word, PairRule> rules,
                                     bool nullable = false);

  const ContextTree& tree() const noexcept { return tree_; }
  const Alphabet& alphabet() const noexcept { return tree_.alphabet(); }
  bool is_comb() const noexcept { return tree_.is_comb(); }
  bool nullable() const noexcept { return nullable_; }
  bool stable() const noexcept { return stable_; }

  /// q_c(letter) for a finite context c; throws InvalidWord if c is not one.
  double q(std::string_view context, Letter letter) const;
  std::vector<double> distribution(std::string_view context) const;

  /// Rule of the comb branch α^k β, by alphabet indices.
  const PairRule& rule(std::size_t alpha, std::size_t beta) const;
  const PairRule& rule(Letter alpha, Letter beta) const;
  const std::map<Word, PairRule>& rules() const noexcept { return rule_map_; }

  const std::map<Word, std::vector<double>>& table() const noexcept { return table_; }

 private:
  explicit ProbabilizedTree(ContextTree tree) : tree_(std::move(tree)) {}

  ContextTree tree_;
  bool nullable_ = false;
  bool stable_ = true;
  std::map<Word, std::vector<double>> table_;
  std::unordered_map<Word, std::size_t> table_row_;
  std::vector<std::vector<double>> rows_;
  std::map<Word, PairRule> rule_map_;
  std::vector<std::optional<PairRule>> rules_;  // alpha * |A| + beta
};

inline constexpr double kZeroProbability = 1e-15;

struct NonNullReport {
  bool pass = true;
  /// (context, letter) pairs whose probability is below 1e-15. For comb
  /// branches the first offending run length is listed.
  std::vector<std::pair<Word, Letter>> zeros;
};

NonNullReport validate_non_null(const ProbabilizedTree& model);

}  // namespace vlmc
