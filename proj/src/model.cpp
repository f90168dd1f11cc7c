#include "vlmc/model.hpp"

#include <cmath>

#include "vlmc/errors.hpp"

namespace vlmc {

namespace {

constexpr double kSumTolerance = 1e-12;

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

}  // namespace

ProbabilizedTree ProbabilizedTree::explicit_model(ContextTree tree,
                                                  std::map<Word, std::vector<double>> q) {
  if (tree.is_comb()) throw Error(ErrorCode::InvalidModel, "explicit_model needs an explicit tree");
  ProbabilizedTree model(std::move(tree));
  const auto& alphabet = model.alphabet();
  for (const auto& [context, dist] : q) {
    if (model.tree_.classify(context) != NodeKind::Leaf) {
      throw Error(ErrorCode::InvalidModel, "'" + context + "' is not a context of the tree", context);
    }
    if (dist.size() != alphabet.size()) {
      throw Error(ErrorCode::InvalidModel,
                  "distribution of '" + context + "' needs one entry per letter", context);
    }
    for (double p : dist) {
      if (!(p >= 0.0 && p <= 1.0)) {
        throw Error(ErrorCode::InvalidModel, "probabilities of '" + context + "' must lie in [0, 1]",
                    context);
      }
    }
    if (std::abs(sum(dist) - 1.0) > kSumTolerance) {
      throw Error(ErrorCode::InvalidModel, "distribution of '" + context + "' does not sum to 1",
                  context);
    }
  }
  for (const auto& leaf : model.tree_.leaves()) {
    if (!q.count(leaf)) {
      throw Error(ErrorCode::InvalidModel, "context '" + leaf + "' has no distribution", leaf);
    }
  }
  model.table_ = std::move(q);
  for (const auto& [context, dist] : model.table_) {
    model.table_row_.emplace(context, model.rows_.size());
    model.rows_.push_back(dist);
  }
  model.stable_ = is_stable(model.tree_).stable;
  return model;
}

ProbabilizedTree ProbabilizedTree::comb_model(const Alphabet& alphabet,
                                              std::map<Word, PairRule> rules, bool nullable) {
  ProbabilizedTree model(ContextTree::make_comb(alphabet));
  model.nullable_ = nullable;
  const std::size_t n = alphabet.size();
  model.rules_.assign(n * n, std::nullopt);
  for (auto& [pair, rule] : rules) {
    if (pair.size() != 2 || pair[0] == pair[1]) {
      throw Error(ErrorCode::InvalidModel, "comb rules are keyed by two distinct letters", pair);
    }
    alphabet.validate(pair);
    const std::size_t a = alphabet.index(pair[0]);
    const std::size_t b = alphabet.index(pair[1]);
    if (rule.switch_weights.size() != n) {
      throw Error(ErrorCode::InvalidModel, "switch weights of '" + pair + "' need one entry per letter",
                  pair);
    }
    if (rule.switch_weights[a] != 0.0) {
      throw Error(ErrorCode::InvalidModel,
                  "switch weights of '" + pair + "' must give the run letter weight 0", pair);
    }
    for (std::size_t g = 0; g < n; ++g) {
      if (g == a) continue;
      const double w = rule.switch_weights[g];
      if (!(w >= 0.0 && w <= 1.0) || (!nullable && !(w > 0.0))) {
        throw Error(ErrorCode::InvalidModel,
                    nullable ? "switch weights must lie in [0, 1]"
                             : "switch weights must be positive for a non-null model",
                    pair);
      }
    }
    if (std::abs(sum(rule.switch_weights) - 1.0) > kSumTolerance) {
      throw Error(ErrorCode::InvalidModel, "switch weights of '" + pair + "' do not sum to 1", pair);
    }
    model.rules_[a * n + b] = rule;
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a != b && !model.rules_[a * n + b]) {
        const Word pair{alphabet.symbol(a), alphabet.symbol(b)};
        throw Error(ErrorCode::InvalidModel, "missing comb rule for '" + pair + "'", pair);
      }
    }
  }
  model.rule_map_ = std::move(rules);
  model.stable_ = true;
  return model;
}

double ProbabilizedTree::q(std::string_view context, Letter letter) const {
  const std::size_t l = alphabet().index(letter);
  if (!is_comb()) {
    const auto it = table_row_.find(Word(context));
    if (it == table_row_.end()) {
      throw Error(ErrorCode::InvalidWord, "'" + Word(context) + "' is not a context", Word(context));
    }
    return rows_[it->second][l];
  }
  if (tree_.classify(context) != NodeKind::Leaf) {
    throw Error(ErrorCode::InvalidWord, "'" + Word(context) + "' is not a context", Word(context));
  }
  const std::size_t a = alphabet().index(context.front());
  const std::size_t b = alphabet().index(context.back());
  return comb_probability(rule(a, b), a, context.size() - 1, l);
}

std::vector<double> ProbabilizedTree::distribution(std::string_view context) const {
  std::vector<double> out;
  out.reserve(alphabet().size());
  for (Letter c : alphabet().symbols()) out.push_back(q(context, c));
  return out;
}

const PairRule& ProbabilizedTree::rule(std::size_t alpha, std::size_t beta) const {
  if (!is_comb()) throw Error(ErrorCode::InvalidModel, "pair rules exist only on comb models");
  const std::size_t n = alphabet().size();
  if (alpha >= n || beta >= n || alpha == beta) {
    throw Error(ErrorCode::InvalidModel, "comb rules are indexed by distinct letters");
  }
  return *rules_[alpha * n + beta];
}

const PairRule& ProbabilizedTree::rule(Letter alpha, Letter beta) const {
  return rule(alphabet().index(alpha), alphabet().index(beta));
}

NonNullReport validate_non_null(const ProbabilizedTree& model) {
  NonNullReport report;
  const auto& alphabet = model.alphabet();
  if (!model.is_comb()) {
    for (const auto& [context, dist] : model.table()) {
      for (std::size_t l = 0; l < dist.size(); ++l) {
        if (dist[l] < kZeroProbability) report.zeros.emplace_back(context, alphabet.symbol(l));
      }
    }
  } else {
    for (const auto& [pair, rule] : model.rules()) {
      const std::size_t a = alphabet.index(pair[0]);
      // First run length at which switching becomes impossible.
      std::optional<std::size_t> frozen_at;
      if (const auto* t = std::get_if<Table>(&rule.persist.kind())) {
        for (std::size_t k = 1; k <= t->entries.size(); ++k) {
          if (1.0 - t->entries[k - 1] < kZeroProbability) {
            frozen_at = k;
            break;
          }
        }
        if (!frozen_at && rule.persist.decay() == TailDecay::Frozen) {
          frozen_at = t->entries.size() + 1;
        }
      }
      for (std::size_t g = 0; g < alphabet.size(); ++g) {
        if (g == a) continue;
        if (rule.switch_weights[g] < kZeroProbability) {
          report.zeros.emplace_back(pair, alphabet.symbol(g));
        } else if (frozen_at) {
          report.zeros.emplace_back(Word(*frozen_at, pair[0]) + pair[1], alphabet.symbol(g));
        }
      }
    }
  }
  report.pass = report.zeros.empty();
  return report;
}

}  // namespace vlmc
