#include <doctest.h>

#include <cmath>
#include <sstream>

#include "support/fixtures.hpp"
#include "vlmc/errors.hpp"
#include "vlmc/prw2d.hpp"
#include "vlmc/process.hpp"
#include "vlmc/rng.hpp"

using namespace vlmc;

TEST_CASE("philox4x32-10 known answers") {
  using Block = std::array<std::uint32_t, 4>;
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == Block{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(philox4x32_10({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        Block{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(philox4x32_10({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        Block{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are independent and reproducible") {
  CounterRng a(7, 0), b(7, 0), c(7, 1);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    differs |= x != c();
  }
  CHECK(differs);
  CounterRng u(3);
  for (int i = 0; i < 1000; ++i) {
    const double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("draw_index skips zero entries") {
  const std::vector<double> p{0.0, 0.25, 0.0, 0.75};
  auto prob = [&](std::size_t i) { return p[i]; };
  CHECK(draw_index(0.0, 4, prob) == 1);
  CHECK(draw_index(0.3, 4, prob) == 3);
  CHECK(draw_index(0.999999, 4, prob) == 3);
}

TEST_CASE("validate_non_null") {
  CHECK(validate_non_null(fixture::double_comb(Geometric{0.5}, Geometric{0.5})).pass);
  CHECK(validate_non_null(QuadCombModel::drrw(Geometric{0.4}).vlmc()).pass);
  auto q = fixture::uniform_table({"1", "00", "01"}, 2);
  q["00"] = {1.0, 0.0};
  const auto report = validate_non_null(fixture::explicit_model("01", {"1", "00", "01"}, q));
  CHECK_FALSE(report.pass);
  REQUIRE(report.zeros.size() == 1);
  CHECK(report.zeros[0] == std::pair<Word, Letter>{"00", '1'});
}

TEST_CASE("one comb step") {
  const auto model = fixture::double_comb(Geometric{0.7}, Geometric{0.5});
  CHECK(model.q("ud", 'u') == doctest::Approx(0.7));
  // Find a seed whose first draw is u.
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    VlmcState state(model, "ud");
    CounterRng rng(seed);
    const Letter x = step(model, state, rng);
    CHECK(state.context() == (x == 'u' ? "uud" : "du"));
    CHECK(state.steps() == 1);
    CHECK(state.history() == Word(1, x) + "ud");
  }
}

TEST_CASE("nine-leaf tree context after drawing 0 from 10") {
  auto q = fixture::uniform_table(fixture::kNineLeaves, 2);
  q["10"] = {1.0, 0.0};
  auto model = ProbabilizedTree::explicit_model(build_explicit_tree(Alphabet("01"), fixture::kNineLeaves),
                                                {q.begin(), q.end()});
  VlmcState state(model, "10");
  CounterRng rng(1);
  CHECK(step(model, state, rng) == '0');
  CHECK(state.context() == "010");
}

TEST_CASE("simulate_letters") {
  const auto comb = fixture::double_comb(Geometric{0.5}, Geometric{0.5});
  SUBCASE("empty trace") {
    const auto trace = simulate_letters(comb, "du", 0, 1);
    CHECK(trace.letters.empty());
    CHECK(trace.contexts == std::vector<Word>{"du"});
  }
  SUBCASE("internal init") {
    try {
      simulate_letters(comb, "uu", 5, 1);
      FAIL("expected InternalWord");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InternalWord);
    }
  }
  SUBCASE("symmetric comb emits fair letters") {
    const auto trace = simulate_letters(comb, "du", 1'000'000, 42);
    const double freq = static_cast<double>(std::count(trace.letters.begin(), trace.letters.end(), 'u')) / 1e6;
    CHECK(std::abs(freq - 0.5) < 0.002);
  }
  SUBCASE("quadruple comb starts from en") {
    const auto trace = simulate_letters(QuadCombModel::drrw(Geometric{0.5}).vlmc(), "en", 10, 3);
    CHECK(trace.contexts.front() == "en");
  }
  SUBCASE("determinism") {
    CHECK(simulate_letters(comb, "du", 5000, 9).letters == simulate_letters(comb, "du", 5000, 9).letters);
    CHECK(simulate_letters(comb, "du", 5000, 9).letters != simulate_letters(comb, "du", 5000, 10).letters);
  }
}

TEST_CASE("incremental context equals pref of the history") {
  std::mt19937_64 gen(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto leaves = oracle::random_stable_leaves("01", 5, gen);
    const auto model = fixture::explicit_model("01", leaves, oracle::random_non_null(leaves, 2, gen));
    const Word init = leaves.front();
    const auto trace = simulate_letters(model, init, 10'000, static_cast<std::uint64_t>(trial));
    Word history = init;
    for (std::size_t i = 0; i < trace.letters.size(); ++i) {
      history.insert(history.begin(), trace.letters[i]);
      if (history.size() > 16) history.resize(16);
      CHECK(trace.contexts[i + 1] == oracle::leaf_pref(leaves, history));
    }
  }
  const auto comb = fixture::double_comb(Polynomial{1.5}, Geometric{0.3});
  const auto trace = simulate_letters(comb, "du", 10'000, 5);
  Word history = "du";
  for (std::size_t i = 0; i < trace.letters.size(); ++i) {
    history.insert(history.begin(), trace.letters[i]);
    CHECK(trace.contexts[i + 1] == pref(comb.tree(), history));
  }
}

TEST_CASE("non-stable trees recompute the context from history") {
  const std::vector<Word> leaves{"1", "00", "010", "011"};
  const auto model = fixture::explicit_model("01", leaves, fixture::uniform_table(leaves, 2));
  CHECK_FALSE(model.stable());
  const auto trace = simulate_letters(model, "1", 2000, 8);
  Word history = "1";
  for (std::size_t i = 0; i < trace.letters.size(); ++i) {
    history.insert(history.begin(), trace.letters[i]);
    CHECK(trace.contexts[i + 1] == oracle::leaf_pref(leaves, history));
  }
}

TEST_CASE("one-step draws match the context distribution") {
  std::mt19937_64 gen(3);
  const auto q = oracle::random_non_null(fixture::kNineLeaves, 2, gen);
  const auto model = fixture::nine_leaf_model(q);
  for (const Word& c : {Word("0011"), Word("10")}) {
    std::size_t ones = 0;
    const std::size_t n = 100'000;
    for (std::size_t i = 0; i < n; ++i) {
      VlmcState state(model, c);
      CounterRng rng(99, i);
      ones += step(model, state, rng) == '1';
    }
    const double p = q.at(c)[1];
    CHECK(std::abs(static_cast<double>(ones) / n - p) < 4 * oracle::binomial_se(p, n));
  }
}

TEST_CASE("history cap keeps the newest letters") {
  const auto comb = fixture::double_comb(Geometric{0.5}, Geometric{0.5});
  VlmcState state(comb, "du", 8);
  CounterRng rng(4);
  Word expected = "du";
  for (int i = 0; i < 50; ++i) expected.insert(expected.begin(), step(comb, state, rng));
  CHECK(state.history().size() <= 16);
  CHECK(expected.compare(0, state.history().size(), state.history()) == 0);
}

TEST_CASE("letter trace csv") {
  const auto comb = fixture::double_comb(Geometric{0.5}, Geometric{0.5});
  std::ostringstream out;
  write_letter_trace_csv(out, simulate_letters(comb, "du", 3, 1));
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "step,letter,context_length,context");
  int rows = 0;
  while (std::getline(in, line)) ++rows;
  CHECK(rows == 3);
}
