#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vlmc/model.hpp"
#include "vlmc/rng.hpp"

namespace vlmc {

inline constexpr std::size_t kDefaultHistoryCap = 10'000'000;

/// Inverse-CDF draw over indices 0..n-1 with probabilities prob(i), using
/// one uniform. Every sampler in the library goes through this routine so
/// that the generic and the comb fast paths consume randomness identically.
template <typename ProbFn>
std::size_t draw_index(double u, std::size_t n, ProbFn&& prob) {
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double p = prob(i);
    if (p <= 0.0) continue;
    last_positive = i;
    cumulative += p;
    if (u < cumulative) return i;
  }
  return last_positive;
}

/// Current state of a VLMC: the retained history and its cached context.
class VlmcState {
 public:
  /// Throws InternalWord when `init` is internal (it has no pref).
  VlmcState(const ProbabilizedTree& model, const Word& init,
            std::size_t history_cap = kDefaultHistoryCap);

  /// Retained history, newest letter first; at most history_cap letters.
  Word history() const;
  const Word& context() const noexcept { return context_; }
  /// Letters emitted since construction.
  std::size_t steps() const noexcept { return steps_; }

 private:
  friend Letter step(const ProbabilizedTree& model, VlmcState& state, CounterRng& rng);

  std::string past_;  // oldest letter first, so appends are cheap
  Word context_;
  std::size_t steps_ = 0;
  std::size_t cap_;
};

/// Draws the next letter from q_{pref(state)} and updates the state. On
/// stable trees the context follows incrementally as pref(α · context);
/// otherwise it is recomputed from the retained history.
Letter step(const ProbabilizedTree& model, VlmcState& state, CounterRng& rng);

/// Emitted letters X_1..X_n in time order, plus the contexts C_0..C_n.
struct LetterTrace {
  Word init;
  std::string letters;
  std::vector<Word> contexts;
};

/// Deterministic in (model, init, n, seed, stream).
LetterTrace simulate_letters(const ProbabilizedTree& model, const Word& init, std::size_t n,
                             std::uint64_t seed, std::uint64_t stream = 0);

/// Runs until `jumps` steps have a context no longer than the previous one
/// (the renewal times of the α-lis chain).
LetterTrace simulate_letters_until_jumps(const ProbabilizedTree& model, const Word& init,
                                         std::size_t jumps, std::uint64_t seed,
                                         std::uint64_t stream = 0);

/// Columns: step,letter,context_length,context (context newest letter first).
void write_letter_trace_csv(std::ostream& out, const LetterTrace& trace);

/// Comb context α^k β held as alphabet indices.
struct CombContext {
  std::size_t run = 0;       // α
  std::size_t previous = 1;  // β
  std::size_t length = 1;    // k

  static CombContext from_word(const Alphabet& alphabet, std::string_view context);
  Word word(const Alphabet& alphabet) const;

  void advance(std::size_t letter) noexcept {
    if (letter == run) {
      ++length;
    } else {
      previous = run;
      run = letter;
      length = 1;
    }
  }
};

/// One step of a comb model without materializing words; consumes the same
/// randomness as step() and returns the drawn letter index.
inline std::size_t step_comb(const ProbabilizedTree& model, CombContext& context, CounterRng& rng) {
  const PairRule& rule = model.rule(context.run, context.previous);
  const double u = rng.uniform();
  const std::size_t letter = draw_index(u, model.alphabet().size(), [&](std::size_t i) {
    return comb_probability(rule, context.run, context.length, i);
  });
  context.advance(letter);
  return letter;
}

/// Lengths of `runs` successive runs of a comb, each started afresh from
/// the context α β (so the first letter α already counts) and censored at
/// `censor`: a run still going after `censor` letters is reported as
/// `censor`. All runs share one stream.
std::vector<std::size_t> sample_run_lengths(const ProbabilizedTree& model, Letter alpha,
                                            Letter beta, std::size_t runs, std::size_t censor,
                                            std::uint64_t seed, std::uint64_t stream = 0);

}  // namespace vlmc
