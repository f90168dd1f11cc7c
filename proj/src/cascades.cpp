#include "vlmc/cascades.hpp"

#include <cmath>

#include "vlmc/errors.hpp"

namespace vlmc {

double cascade(const ProbabilizedTree& model, std::string_view w) {
  const AlphaLis decomposition = alpha_lis(model.tree(), w);
  const std::size_t ell = decomposition.prefix.size();
  if (model.is_comb()) {
    // Walk from the oldest suffix towards w, tracking the leading run of
    // each suffix w[i..] so that pref(w[i..]) = w[i]^run · w[i + run].
    const auto& alphabet = model.alphabet();
    double product = 1.0;
    std::size_t run = 0;
    for (std::size_t i = w.size() - 1; i >= 1; --i) {
      run = (i + 1 < w.size() && w[i] == w[i + 1]) ? run + 1 : 1;
      if (i <= ell) {
        const std::size_t a = alphabet.index(w[i]);
        const PairRule& rule = model.rule(a, alphabet.index(w[i + run]));
        product *= comb_probability(rule, a, run, alphabet.index(w[i - 1]));
      }
    }
    return product;
  }
  double product = 1.0;
  for (std::size_t i = 1; i <= ell; ++i) {
    product *= model.q(pref(model.tree(), w.substr(i)), w[i - 1]);
  }
  return product;
}

double comb_switch_mass(const PairRule& rule, std::size_t gamma) {
  return rule.switch_weights[gamma] * (1.0 - rule.persist.tail_limit());
}

std::vector<Word> contexts_with_alpha_lis(const ProbabilizedTree& model,
                                          std::string_view alpha_lis_word) {
  std::vector<Word> out;
  for (const auto& leaf : model.tree().leaves()) {
    if (alpha_lis(model.tree(), leaf).word() == alpha_lis_word) out.push_back(leaf);
  }
  return out;
}

namespace {

struct CombPair {
  std::size_t alpha;
  std::size_t beta;
};

CombPair comb_pair(const ProbabilizedTree& model, std::string_view word) {
  const auto& alphabet = model.alphabet();
  if (word.size() != 2 || word[0] == word[1]) {
    throw Error(ErrorCode::InvalidWord, "'" + Word(word) + "' is not an alpha-lis of the comb",
                Word(word));
  }
  return {alphabet.index(word[0]), alphabet.index(word[1])};
}

void require_alpha_lis(const ProbabilizedTree& model, std::string_view word) {
  const auto set = alpha_lis_set(model.tree());
  for (const auto& member : set.members) {
    if (member == word) return;
  }
  throw Error(ErrorCode::InvalidWord, "'" + Word(word) + "' is not an alpha-lis of the tree",
              Word(word));
}

}  // namespace

CascadeSeriesResult kappa(const ProbabilizedTree& model, std::string_view alpha_lis_word,
                          const SeriesPolicy& policy) {
  policy.validate();
  if (model.is_comb()) {
    const auto [a, b] = comb_pair(model, alpha_lis_word);
    const TailRule& persist = model.rule(a, b).persist;
    const double sum = persist.tail_sum_from(1);
    if (std::isinf(sum)) {
      return CascadeSeriesResult::divergent(persist.vanishes()
                                                ? "power tail with exponent <= 1"
                                                : "run tail does not vanish");
    }
    auto result = CascadeSeriesResult::closed_form(sum, "sum of the run tail");
    result.last_term = persist.tail(1);
    return result;
  }
  require_alpha_lis(model, alpha_lis_word);
  double sum = 0.0;
  std::size_t terms = 0;
  for (const auto& c : contexts_with_alpha_lis(model, alpha_lis_word)) {
    sum += cascade(model, c);
    ++terms;
  }
  return CascadeSeriesResult::finite_sum(sum, terms);
}

CascadeSeriesResult q_entry(const ProbabilizedTree& model, std::string_view row,
                            std::string_view col, const SeriesPolicy& policy) {
  policy.validate();
  if (model.is_comb()) {
    const auto [x, y] = comb_pair(model, row);
    const auto [alpha, s] = comb_pair(model, col);
    // Contexts starting with s and having α-lis x y are x^m y, so s = x.
    if (s != x) return CascadeSeriesResult::closed_form(0.0, "structural zero");
    return CascadeSeriesResult::closed_form(comb_switch_mass(model.rule(x, y), alpha),
                                            "switch weight times exit mass");
  }
  require_alpha_lis(model, row);
  require_alpha_lis(model, col);
  const Letter alpha = col.front();
  const std::string_view s = col.substr(1);
  double sum = 0.0;
  std::size_t terms = 0;
  for (const auto& c : contexts_with_alpha_lis(model, row)) {
    if (!is_prefix(s, c)) continue;
    sum += cascade(model, alpha + c);
    ++terms;
  }
  return CascadeSeriesResult::finite_sum(sum, terms);
}

bool cascade_terms_vanish(const ProbabilizedTree& model) {
  if (!model.is_comb()) return true;
  for (const auto& [pair, rule] : model.rules()) {
    if (!rule.persist.vanishes()) return false;
  }
  return true;
}

}  // namespace vlmc
