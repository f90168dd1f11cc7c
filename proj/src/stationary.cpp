#include "vlmc/stationary.hpp"

#include <algorithm>
#include <cmath>

#include "vlmc/errors.hpp"
#include "vlmc/linalg.hpp"

namespace vlmc {

const char* to_string(VerdictKind kind) noexcept {
  switch (kind) {
    case VerdictKind::UniqueProbability: return "UniqueProbability";
    case VerdictKind::SigmaFiniteOnly: return "SigmaFiniteOnly";
    case VerdictKind::NoInvariantMeasure: return "NoInvariantMeasure";
    case VerdictKind::Unsupported: return "Unsupported";
  }
  return "?";
}

Eigen::Index QMatrix::position(std::string_view alpha_lis_word) const {
  for (std::size_t i = 0; i < index.size(); ++i) {
    if (index[i] == alpha_lis_word) return static_cast<Eigen::Index>(i);
  }
  throw Error(ErrorCode::InvalidWord, "'" + Word(alpha_lis_word) + "' is not in S",
              Word(alpha_lis_word));
}

namespace {

std::vector<Word> supported_index(const ProbabilizedTree& model) {
  const auto stability = is_stable(model.tree());
  if (!stability.stable) {
    throw Error(ErrorCode::Unsupported,
                "the context tree is not stable (witness '" + *stability.witness + "')",
                *stability.witness);
  }
  auto set = alpha_lis_set(model.tree());
  if (!set.finite) throw Error(ErrorCode::Unsupported, "the alpha-lis set is infinite");
  return std::move(set.members);
}

}  // namespace

QMatrix build_q_matrix(const ProbabilizedTree& model, const SeriesPolicy& policy) {
  QMatrix q;
  q.index = supported_index(model);
  const auto n = static_cast<Eigen::Index>(q.index.size());
  q.entries = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& row = q.index[static_cast<std::size_t>(i)];
      const auto& col = q.index[static_cast<std::size_t>(j)];
      const auto entry = q_entry(model, row, col, policy);
      if (!entry.converged()) {
        throw Error(ErrorCode::InconclusiveEntry,
                    "Q entry (" + row + ", " + col + ") is " + to_string(entry.status),
                    row + "," + col);
      }
      q.entries(i, j) = entry.value;
    }
  }
  return q;
}

StationaryMeasure::StationaryMeasure(ProbabilizedTree model, std::vector<Word> index,
                                     Eigen::VectorXd base, std::vector<double> kappas,
                                     double normalization, double residual)
    : model_(std::move(model)),
      index_(std::move(index)),
      base_(std::move(base)),
      kappas_(std::move(kappas)),
      normalization_(normalization),
      residual_(residual) {}

std::optional<double> StationaryMeasure::base(std::string_view alpha_lis_word) const {
  for (std::size_t i = 0; i < index_.size(); ++i) {
    if (index_[i] == alpha_lis_word) return base_(static_cast<Eigen::Index>(i));
  }
  return std::nullopt;
}

StationarityVerdict stationarity_verdict(const ProbabilizedTree& model,
                                         const SeriesPolicy& policy) {
  StationarityVerdict verdict;
  std::vector<Word> index;
  try {
    index = supported_index(model);
  } catch (const Error& e) {
    verdict.reason = e.what();
    return verdict;
  }
  if (!cascade_terms_vanish(model)) {
    verdict.outcome = VerdictKind::NoInvariantMeasure;
    verdict.reason = "some run tail does not vanish, so cascade terms do not tend to 0";
    return verdict;
  }
  if (const auto report = validate_non_null(model); !report.pass) {
    const auto& [context, letter] = report.zeros.front();
    verdict.reason = "model is not non-null: q_" + context + "(" + letter + ") = 0";
    return verdict;
  }

  std::vector<double> kappas;
  bool divergent = false;
  for (const auto& alpha_lis_word : index) {
    const auto k = kappa(model, alpha_lis_word, policy);
    if (k.inconclusive()) {
      verdict.reason = "cascade series of " + alpha_lis_word + " is inconclusive";
      verdict.inconclusive = true;
      return verdict;
    }
    if (k.diverges()) {
      divergent = true;
      if (verdict.reason.empty()) verdict.reason = "cascade series of " + alpha_lis_word + " diverges";
    }
    kappas.push_back(k.value);
  }
  if (divergent) {
    if (model.is_comb()) {
      verdict.outcome = VerdictKind::SigmaFiniteOnly;
    } else {
      verdict.reason = "divergent cascade series on a finite tree";
    }
    return verdict;
  }

  try {
    const QMatrix q = build_q_matrix(model, policy);
    const Eigen::VectorXd v = solve_left_fixed(q.entries);
    const double residual = fixed_vector_residual(v, q.entries);
    double z = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) z += kappas[static_cast<std::size_t>(i)] * v(i);
    verdict.measure.emplace(model, q.index, v / z, std::move(kappas), z, residual);
    verdict.outcome = VerdictKind::UniqueProbability;
    verdict.reason = "stable, non-null, finite alpha-lis set, all cascade series converge";
  } catch (const Error& e) {
    verdict.outcome = VerdictKind::Unsupported;
    verdict.reason = e.what();
    verdict.inconclusive = e.code() == ErrorCode::InconclusiveEntry;
  }
  return verdict;
}

namespace {

// π(αsℛ) for an α-lis outside S: Σ casc(αc) π(α-lis(c)ℛ) over contexts c = s⋯.
double expand_alpha_lis(const StationaryMeasure& measure, Letter alpha, std::string_view s) {
  const ProbabilizedTree& model = measure.model();
  if (!model.is_comb()) {
    double sum = 0.0;
    for (const auto& c : model.tree().leaves()) {
      if (!is_prefix(s, c)) continue;
      sum += cascade(model, alpha + c) * *measure.base(alpha_lis(model.tree(), c).word());
    }
    return sum;
  }
  // Comb: s = ε or s = x^m, and the contexts extending s are x^k y, k ≥ m.
  const auto& alphabet = model.alphabet();
  const std::size_t a = alphabet.index(alpha);
  const std::size_t m = std::max<std::size_t>(s.size(), 1);
  double sum = 0.0;
  for (std::size_t x = 0; x < alphabet.size(); ++x) {
    if (!s.empty() && alphabet.symbol(x) != s.front()) continue;
    for (std::size_t y = 0; y < alphabet.size(); ++y) {
      if (y == x) continue;
      const PairRule& rule = model.rule(x, y);
      const double lim = rule.persist.tail_limit();
      const double mass = a == x ? rule.persist.tail_sum_from(m + 1)
                                 : rule.switch_weights[a] * (rule.persist.tail(m) - lim);
      if (mass == 0.0) continue;
      if (std::isinf(mass)) {
        throw Error(ErrorCode::InconclusiveSum, "cylinder expansion diverges");
      }
      sum += mass * *measure.base(Word{alphabet.symbol(x), alphabet.symbol(y)});
    }
  }
  return sum;
}

}  // namespace

double pi_cylinder(const StationaryMeasure& measure, std::string_view w, const SeriesPolicy& policy) {
  policy.validate();
  if (w.empty()) return 1.0;
  const ProbabilizedTree& model = measure.model();
  const AlphaLis decomposition = alpha_lis(model.tree(), w);
  const double casc = cascade(model, w);
  if (const auto direct = measure.base(decomposition.word())) return casc * *direct;
  return casc * expand_alpha_lis(measure, decomposition.alpha, decomposition.lis);
}

}  // namespace vlmc
