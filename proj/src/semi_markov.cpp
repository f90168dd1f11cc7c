#include "vlmc/semi_markov.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "vlmc/cascades.hpp"
#include "vlmc/errors.hpp"

namespace vlmc {

double kernel_dim1(const DoubleCombModel& model, Letter alpha, Letter beta, std::size_t k) {
  if (k == 0) return 0.0;
  if (alpha == beta) {
    throw Error(ErrorCode::InvalidWord, "a run switches to the other direction", Word{alpha, beta});
  }
  model.rule(beta);
  const TailRule& rule = model.rule(alpha);
  return rule.tail(k) * (1.0 - rule.persist(k));
}

double kernel_dim2(const QuadCombModel& model, std::string_view from, std::string_view to,
                   std::size_t k) {
  const ProbabilizedTree& vlmc = model.vlmc();
  const Alphabet& a = vlmc.alphabet();
  for (auto bend : {from, to}) {
    if (bend.size() != 2 || bend[0] == bend[1]) {
      throw Error(ErrorCode::InvalidWord, "'" + Word(bend) + "' is not a bend", Word(bend));
    }
    a.validate(bend);
  }
  if (k == 0 || from[1] != to[0]) return 0.0;
  const std::size_t beta = a.index(from[0]);
  const std::size_t alpha = a.index(from[1]);
  const PairRule& rule = vlmc.rule(alpha, beta);
  return rule.persist.tail(k) * comb_probability(rule, alpha, k, a.index(to[1]));
}

double kernel_alpha_lis(const ProbabilizedTree& model, std::string_view source,
                        std::string_view target, std::size_t k) {
  if (k == 0) return 0.0;
  if (source.empty() || target.empty()) {
    throw Error(ErrorCode::InvalidWord, "alpha-lis words are non-empty");
  }
  const Letter beta = target.front();
  const std::string_view t = target.substr(1);
  if (model.is_comb()) {
    const Alphabet& a = model.alphabet();
    if (source.size() != 2 || target.size() != 2 || source[0] == source[1] || target[0] == target[1]) {
      throw Error(ErrorCode::InvalidWord, "comb alpha-lis words are two distinct letters");
    }
    // c = α^k x with α-lis α x = source, and c must start with t.
    if (source[0] != t.front()) return 0.0;
    const std::size_t alpha = a.index(source[0]);
    const PairRule& rule = model.rule(alpha, a.index(source[1]));
    return rule.persist.tail(k) * comb_probability(rule, alpha, k, a.index(beta));
  }
  const std::size_t length = source.size() + k - 1;
  double sum = 0.0;
  for (const auto& c : model.tree().contexts_of_length(length)) {
    if (!is_prefix(t, c) || alpha_lis(model.tree(), c).word() != source) continue;
    sum += cascade(model, beta + c);
  }
  return sum;
}

CascadeSeriesResult expected_sojourn(const ProbabilizedTree& model, std::string_view alpha_lis_word,
                                     const SeriesPolicy& policy) {
  return kappa(model, alpha_lis_word, policy);
}

std::vector<Word> MrcPath::semi_markov(std::size_t last_step) const {
  std::vector<Word> z;
  z.reserve(last_step + 1);
  std::size_t n = 0;
  for (std::size_t j = 0; j <= last_step; ++j) {
    while (n + 1 < jumps.size() && jumps[n + 1] <= j) ++n;
    z.push_back(states[n]);
  }
  return z;
}

MrcPath extract_mrc_letters(const LetterTrace& trace, const ContextTree& tree) {
  MrcPath path;
  path.states.push_back(alpha_lis(tree, trace.contexts.front()).word());
  path.sojourns.push_back(0);
  path.jumps.push_back(0);
  for (std::size_t k = 1; k < trace.contexts.size(); ++k) {
    if (trace.contexts[k].size() > trace.contexts[k - 1].size()) continue;
    path.states.push_back(alpha_lis(tree, trace.contexts[k]).word());
    path.sojourns.push_back(k - path.jumps.back());
    path.jumps.push_back(k);
  }
  return path;
}

MrcPath extract_mrc_bends(const Walk1DTrace& trace) {
  MrcPath path;
  path.states.push_back("ud");
  path.sojourns.push_back(0);
  path.jumps.push_back(0);
  for (std::size_t n = 1; n < trace.breaks.size(); ++n) {
    const std::size_t b = trace.breaks[n];
    const Letter previous = n == 1 ? 'd' : trace.letters[trace.breaks[n - 1] - 1];
    path.states.push_back(Word{previous, trace.letters[b - 1]});
    path.sojourns.push_back(b - trace.breaks[n - 1]);
    path.jumps.push_back(b);
  }
  return path;
}

MrcPath extract_mrc_bends(const Walk2DTrace& trace) {
  return MrcPath{trace.bends, trace.sojourns, trace.breaks};
}

DiagramReport check_diagram(const MrcPath& letters_view, const MrcPath& walk_view,
                            std::size_t last_step) {
  DiagramReport report;
  const std::size_t common = std::min(letters_view.states.size(), walk_view.states.size());
  report.jumps_compared = common;
  auto fail = [&](std::size_t n, std::string detail) {
    report.consistent = false;
    report.first_mismatch = n;
    report.detail = std::move(detail);
  };
  for (std::size_t n = 0; n < common; ++n) {
    if (letters_view.states[n] != reversed(walk_view.states[n])) {
      fail(n, "J^V_" + std::to_string(n) + " = " + letters_view.states[n] + " but J^W_" +
                  std::to_string(n) + " = " + walk_view.states[n]);
      return report;
    }
    if (letters_view.sojourns[n] != walk_view.sojourns[n]) {
      fail(n, "sojourn T_" + std::to_string(n) + " differs: " +
                  std::to_string(letters_view.sojourns[n]) + " vs " +
                  std::to_string(walk_view.sojourns[n]));
      return report;
    }
  }
  if (letters_view.states.size() != walk_view.states.size()) {
    fail(common, "jump counts differ: " + std::to_string(letters_view.states.size()) + " vs " +
                     std::to_string(walk_view.states.size()));
    return report;
  }
  const auto zv = letters_view.semi_markov(last_step);
  const auto zw = walk_view.semi_markov(last_step);
  for (std::size_t j = 0; j <= last_step; ++j) {
    if (zv[j] != reversed(zw[j])) {
      fail(j, "Z^V_" + std::to_string(j) + " = " + zv[j] + " but Z^W_" + std::to_string(j) +
                  " = " + zw[j]);
      return report;
    }
  }
  report.detail = "all identities hold";
  return report;
}

void MrcKernel::validate(double tol) const {
  if (p.size() != states.size()) throw Error(ErrorCode::InvalidModel, "kernel shape mismatch");
  for (std::size_t a = 0; a < states.size(); ++a) {
    if (p[a].size() != states.size()) throw Error(ErrorCode::InvalidModel, "kernel shape mismatch");
    double total = 0.0;
    for (const auto& row : p[a]) {
      for (double v : row) {
        if (!(v >= 0.0)) {
          throw Error(ErrorCode::InvalidModel, "negative kernel entry from " + states[a], states[a]);
        }
        total += v;
      }
    }
    if (std::abs(total - 1.0) > tol) {
      throw Error(ErrorCode::InvalidModel,
                  "kernel mass from " + states[a] + " is " + std::to_string(total), states[a]);
    }
  }
}

std::size_t MrcKernel::index(std::string_view state) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] == state) return i;
  }
  throw Error(ErrorCode::InvalidWord, "'" + Word(state) + "' is not a kernel state", Word(state));
}

MrcKernel alpha_lis_kernel(const ProbabilizedTree& model) {
  if (model.is_comb()) {
    throw Error(ErrorCode::Unsupported, "comb sojourns are unbounded; use tabulate_kernel");
  }
  MrcKernel kernel;
  kernel.states = alpha_lis_set(model.tree()).members;
  const std::size_t height = *model.tree().height();
  for (const auto& a : kernel.states) {
    auto& rows = kernel.p.emplace_back();
    for (const auto& b : kernel.states) {
      auto& row = rows.emplace_back();
      for (std::size_t k = 1; a.size() + k - 1 <= height; ++k) {
        row.push_back(kernel_alpha_lis(model, a, b, k));
      }
    }
  }
  return kernel;
}

MrcPath simulate_semi_markov(const MrcKernel& kernel, std::string_view initial, std::size_t jumps,
                             std::uint64_t seed, std::uint64_t stream) {
  MrcPath path;
  std::size_t state = kernel.index(initial);
  path.states.push_back(kernel.states[state]);
  path.sojourns.push_back(0);
  path.jumps.push_back(0);
  CounterRng rng(seed, stream);
  for (std::size_t n = 0; n < jumps; ++n) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    std::size_t chosen_b = 0;
    std::size_t chosen_k = 0;
    bool found = false;
    for (std::size_t b = 0; b < kernel.states.size() && !found; ++b) {
      const auto& row = kernel.p[state][b];
      for (std::size_t k = 0; k < row.size(); ++k) {
        if (row[k] <= 0.0) continue;
        chosen_b = b;
        chosen_k = k + 1;
        cumulative += row[k];
        if (u < cumulative) {
          found = true;
          break;
        }
      }
    }
    if (chosen_k == 0) {
      throw Error(ErrorCode::InvalidModel, "state " + kernel.states[state] + " has no exit",
                  kernel.states[state]);
    }
    state = chosen_b;
    path.states.push_back(kernel.states[state]);
    path.sojourns.push_back(chosen_k);
    path.jumps.push_back(path.jumps.back() + chosen_k);
  }
  return path;
}

KernelSlice tabulate_kernel(const ProbabilizedTree& model, std::string_view source,
                            std::size_t k_max) {
  const auto set = alpha_lis_set(model.tree());
  if (std::find(set.members.begin(), set.members.end(), source) == set.members.end()) {
    throw Error(ErrorCode::InvalidWord, "'" + Word(source) + "' is not an alpha-lis of the tree",
                Word(source));
  }
  KernelSlice slice;
  slice.source.assign(source);
  slice.k_max = k_max;
  for (const auto& target : set.members) {
    for (std::size_t k = 1; k <= k_max; ++k) {
      slice.entries.push_back({target, k, kernel_alpha_lis(model, source, target, k)});
    }
  }
  if (model.is_comb()) {
    const Alphabet& a = model.alphabet();
    slice.remainder = model.rule(a.index(source[0]), a.index(source[1])).persist.tail(k_max + 1);
  } else {
    const std::size_t height = *model.tree().height();
    for (const auto& target : set.members) {
      for (std::size_t k = k_max + 1; source.size() + k - 1 <= height; ++k) {
        slice.remainder += kernel_alpha_lis(model, source, target, k);
      }
    }
  }
  return slice;
}

void write_kernel_csv(std::ostream& out, const KernelSlice& slice) {
  out << "source,target,k,probability\n";
  for (const auto& e : slice.entries) {
    out << slice.source << ',' << e.target << ',' << e.k << ',' << e.probability << '\n';
  }
  out << slice.source << ",*,>" << slice.k_max << ',' << slice.remainder << '\n';
}

}  // namespace vlmc
