#include <doctest.h>

#include <sstream>

#include "support/fixtures.hpp"
#include "vlmc/errors.hpp"
#include "vlmc/prw2d.hpp"
#include "vlmc/stationary.hpp"

using namespace vlmc;

namespace {

QuadCombModel biased() {
  std::map<Word, PairRule> rules;
  for (Letter a : compass().symbols()) {
    for (Letter b : compass().symbols()) {
      if (a == b) continue;
      std::vector<double> w(4, 0.0);
      double total = 0.0;
      for (std::size_t g = 0; g < 4; ++g) {
        if (compass().symbol(g) == a) continue;
        w[g] = compass().symbol(g) == 'e' ? 0.8 : 0.1;
        total += w[g];
      }
      for (auto& x : w) x /= total;
      rules.emplace(Word{a, b}, PairRule{a == 'e' ? TailRule(Polynomial{1.5}) : TailRule(Geometric{0.4}), w});
    }
  }
  return QuadCombModel(ProbabilizedTree::comb_model(compass(), rules));
}

}  // namespace

TEST_CASE("direction steps") {
  CHECK(direction_step('n') == Point2(0, 1));
  CHECK(direction_step('e') == Point2(1, 0));
  CHECK(direction_step('w') == Point2(-1, 0));
  CHECK(direction_step('s') == Point2(0, -1));
}

TEST_CASE("DRRW bend kernel") {
  const auto kernel = build_bend_kernel(QuadCombModel::drrw(Polynomial{1.2}));
  CHECK(kernel.states.size() == 12);
  for (std::size_t i = 0; i < 12; ++i) {
    int nonzero = 0;
    for (std::size_t j = 0; j < 12; ++j) {
      const double p = kernel.p(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (kernel.states[i][1] != kernel.states[j][0]) {
        CHECK(p == 0.0);
      } else {
        CHECK(p == doctest::Approx(1.0 / 3).epsilon(1e-15));
        ++nonzero;
      }
    }
    CHECK(nonzero == 3);
  }
  const Eigen::VectorXd pi = bend_stationary(kernel);
  for (Eigen::Index i = 0; i < 12; ++i) CHECK(std::abs(pi(i) - 1.0 / 12) < 1e-12);
}

TEST_CASE("bend kernel equals Q after index reversal") {
  const auto model = biased();
  const auto kernel = build_bend_kernel(model);
  const auto q = build_q_matrix(model.vlmc());
  for (const auto& from : kernel.states) {
    for (const auto& to : kernel.states) {
      const Word qr(from.rbegin(), from.rend());
      const Word qc(to.rbegin(), to.rend());
      CHECK(kernel.p(kernel.position(from), kernel.position(to)) == q.entries(q.position(qr), q.position(qc)));
    }
  }
  // π_J is Q's fixed vector reindexed.
  const Eigen::VectorXd pi = bend_stationary(kernel);
  const auto verdict = stationarity_verdict(model.vlmc());
  REQUIRE(verdict.measure);
  const Eigen::VectorXd base = verdict.measure->base() / verdict.measure->base().sum();
  for (const auto& bend : kernel.states) {
    const Word r(bend.rbegin(), bend.rend());
    CHECK(pi(kernel.position(bend)) == doctest::Approx(base(q.position(r))).epsilon(1e-12));
  }
}

TEST_CASE("frozen runs violate the kernel assumption") {
  try {
    build_bend_kernel(QuadCombModel::drrw(Table{{0.5}, Geometric{1.0}}));
    FAIL("expected Assumption2Violated");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Assumption2Violated);
  }
}

TEST_CASE("fixture walk") {
  const auto t = walk2d_from_letters("ne", "eeennnw");
  CHECK(t.breaks == std::vector<std::size_t>{0, 4, 7});
  CHECK(t.bends == std::vector<Word>{"ne", "en", "nw"});
  CHECK(t.sojourns == std::vector<std::size_t>{0, 4, 3});
  CHECK(t.skeleton.back() == t.positions[7]);
  CHECK(t.positions[7] == Point2(2, 3));
  CHECK(t.bend_at(3) == "ne");
  CHECK(t.bend_at(4) == "en");
  CHECK(letters_from_walk2d(t.positions) == "eeennnw");
}

TEST_CASE("simulated walks") {
  const auto model = QuadCombModel::drrw(Geometric{0.5});
  const auto one = simulate_prw2(model, 1, 2);
  CHECK(one.positions[1].cwiseAbs().sum() == 1);
  CHECK(one.init_bend == "ne");

  const auto t = simulate_prw2(model, 1'000'000, 8);
  for (std::size_t n = 0; n < t.skeleton.size(); ++n) CHECK(t.skeleton[n] == t.positions[t.breaks[n]]);
  std::map<char, double> counts;
  for (char x : t.letters) counts[x] += 1;
  for (auto [letter, c] : counts) CHECK(std::abs(c / 1e6 - 0.25) < 4 * oracle::binomial_se(0.25, 1e6) * 2);

  const auto j = simulate_prw2_jumps(model, 100, 4);
  CHECK(j.breaks.size() == 101);
  CHECK(simulate_prw2(model, 5000, 8).letters == simulate_prw2(model, 5000, 8).letters);
}

TEST_CASE("dichotomy diagnostic") {
  const auto report = return_prob_diagnostic(QuadCombModel::drrw(Geometric{0.5}), 200, 400, 3, 2);
  CHECK(report.p_hat[0] == 1.0);
  for (std::size_t n = 1; n < report.partial_sums.size(); ++n) {
    CHECK(report.partial_sums[n] >= report.partial_sums[n - 1]);
    CHECK(report.wilson_lo[n] <= report.p_hat[n]);
    CHECK(report.p_hat[n] <= report.wilson_hi[n]);
  }
  const auto again = return_prob_diagnostic(QuadCombModel::drrw(Geometric{0.5}), 200, 400, 3, 1);
  CHECK(again.returns == report.returns);
  CHECK(report.min_norm.size() == 400);
}

TEST_CASE("wilson interval") {
  const auto [lo, hi] = wilson_interval(0, 100);
  CHECK(lo == 0.0);
  CHECK(hi == doctest::Approx(0.03699).epsilon(1e-3));
  const auto [lo2, hi2] = wilson_interval(50, 100);
  CHECK(lo2 == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(hi2 == doctest::Approx(0.5962).epsilon(1e-3));
}

TEST_CASE("walk csv") {
  std::ostringstream out;
  write_walk2d_csv(out, walk2d_from_letters("ne", "en"));
  CHECK(out.str() == "n,letter,x,y,is_breaking,bend\n1,e,1,0,0,ne\n2,n,1,1,1,en\n");
}
