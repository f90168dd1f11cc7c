#include "vlmc/process.hpp"

#include <algorithm>
#include <ostream>

#include "vlmc/errors.hpp"

namespace vlmc {

VlmcState::VlmcState(const ProbabilizedTree& model, const Word& init, std::size_t history_cap)
    : past_(reversed(init)), context_(pref(model.tree(), init)), cap_(std::max<std::size_t>(history_cap, 1)) {}

Word VlmcState::history() const { return reversed(past_); }

Letter step(const ProbabilizedTree& model, VlmcState& state, CounterRng& rng) {
  const auto& alphabet = model.alphabet();
  const double u = rng.uniform();
  std::size_t index = 0;
  if (model.is_comb()) {
    const auto ctx = CombContext::from_word(alphabet, state.context_);
    const PairRule& rule = model.rule(ctx.run, ctx.previous);
    index = draw_index(u, alphabet.size(), [&](std::size_t i) {
      return comb_probability(rule, ctx.run, ctx.length, i);
    });
  } else {
    index = draw_index(u, alphabet.size(), [&](std::size_t i) {
      return model.q(state.context_, alphabet.symbol(i));
    });
  }
  const Letter letter = alphabet.symbol(index);

  state.past_.push_back(letter);
  ++state.steps_;
  if (state.past_.size() > 2 * state.cap_) state.past_.erase(0, state.past_.size() - state.cap_);

  if (model.stable()) {
    state.context_ = pref(model.tree(), letter + state.context_);
  } else {
    // Explicit trees: the context is a prefix of the newest `height` letters.
    const std::size_t window = std::min(state.past_.size(), *model.tree().height());
    const Word recent(state.past_.rbegin(), state.past_.rbegin() + static_cast<std::ptrdiff_t>(window));
    if (model.tree().is_internal(recent)) {
      throw Error(ErrorCode::NoContextPrefix, "retained history is too short to find a context",
                  recent);
    }
    state.context_ = pref(model.tree(), recent);
  }
  return letter;
}

LetterTrace simulate_letters(const ProbabilizedTree& model, const Word& init, std::size_t n,
                             std::uint64_t seed, std::uint64_t stream) {
  LetterTrace trace;
  trace.init = init;
  VlmcState state(model, init);
  CounterRng rng(seed, stream);
  trace.letters.reserve(n);
  trace.contexts.reserve(n + 1);
  trace.contexts.push_back(state.context());
  for (std::size_t i = 0; i < n; ++i) {
    trace.letters.push_back(step(model, state, rng));
    trace.contexts.push_back(state.context());
  }
  return trace;
}

LetterTrace simulate_letters_until_jumps(const ProbabilizedTree& model, const Word& init,
                                         std::size_t jumps, std::uint64_t seed,
                                         std::uint64_t stream) {
  LetterTrace trace;
  trace.init = init;
  VlmcState state(model, init);
  CounterRng rng(seed, stream);
  trace.contexts.push_back(state.context());
  for (std::size_t seen = 0; seen < jumps;) {
    trace.letters.push_back(step(model, state, rng));
    if (state.context().size() <= trace.contexts.back().size()) ++seen;
    trace.contexts.push_back(state.context());
  }
  return trace;
}

void write_letter_trace_csv(std::ostream& out, const LetterTrace& trace) {
  out << "step,letter,context_length,context\n";
  for (std::size_t i = 0; i < trace.letters.size(); ++i) {
    const Word& c = trace.contexts[i + 1];
    out << (i + 1) << ',' << trace.letters[i] << ',' << c.size() << ',' << c << '\n';
  }
}

CombContext CombContext::from_word(const Alphabet& alphabet, std::string_view context) {
  if (context.size() < 2 || context.front() == context.back()) {
    throw Error(ErrorCode::InvalidWord, "'" + Word(context) + "' is not a comb context",
                Word(context));
  }
  for (std::size_t i = 1; i + 1 < context.size(); ++i) {
    if (context[i] != context.front()) {
      throw Error(ErrorCode::InvalidWord, "'" + Word(context) + "' is not a comb context",
                  Word(context));
    }
  }
  return CombContext{alphabet.index(context.front()), alphabet.index(context.back()),
                     context.size() - 1};
}

Word CombContext::word(const Alphabet& alphabet) const {
  return Word(length, alphabet.symbol(run)) + alphabet.symbol(previous);
}

std::vector<std::size_t> sample_run_lengths(const ProbabilizedTree& model, Letter alpha,
                                            Letter beta, std::size_t runs, std::size_t censor,
                                            std::uint64_t seed, std::uint64_t stream) {
  if (!model.is_comb()) throw Error(ErrorCode::InvalidModel, "run sampling needs a comb model");
  const auto& alphabet = model.alphabet();
  const CombContext start{alphabet.index(alpha), alphabet.index(beta), 1};
  if (start.run == start.previous) {
    throw Error(ErrorCode::InvalidWord, "a run starts after a different letter");
  }
  CounterRng rng(seed, stream);
  std::vector<std::size_t> lengths;
  lengths.reserve(runs);
  for (std::size_t i = 0; i < runs; ++i) {
    CombContext context = start;
    std::size_t length = 1;
    while (length < censor && step_comb(model, context, rng) == start.run) ++length;
    lengths.push_back(length);
  }
  return lengths;
}

}  // namespace vlmc
