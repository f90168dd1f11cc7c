#include <doctest.h>

#include <cmath>
#include <numeric>
#include <sstream>

#include "support/fixtures.hpp"
#include "vlmc/errors.hpp"
#include "vlmc/prw1d.hpp"
#include "vlmc/stationary.hpp"

using namespace vlmc;

TEST_CASE("persistence tails") {
  const DoubleCombModel geo(Geometric{0.3}, Polynomial{1.5});
  for (std::size_t n = 1; n <= 30; ++n) {
    CHECK(persistence_tail(geo, 'u', n) == doctest::Approx(std::pow(0.3, n - 1)).epsilon(1e-13));
    CHECK(persistence_tail(geo, 'd', n) == doctest::Approx(std::pow(static_cast<double>(n), -1.5)).epsilon(1e-13));
    CHECK(persistence_tail(geo, 'd', n) ==
          doctest::Approx(oracle::tail_by_product([](std::size_t k) { return std::pow(k / (k + 1.0), 1.5); }, n))
              .epsilon(1e-13));
  }
  const DoubleCombModel table(Table{{0.9, 0.1, 0.5}, Polynomial{2.0}}, Geometric{0.5});
  for (std::size_t n = 1; n <= 20; ++n) {
    CHECK(persistence_tail(table, 'u', n) ==
          doctest::Approx(oracle::tail_by_product([&](std::size_t k) { return table.up().persist(k); }, n))
              .epsilon(1e-13));
  }
}

TEST_CASE("hurwitz zeta against riemann zeta and partial sums") {
  for (double s : {1.1, 1.5, 2.0, 3.0, 7.5}) {
    CHECK(hurwitz_zeta(s, 1.0) == doctest::Approx(std::riemann_zeta(s)).epsilon(1e-12));
    double head = 0.0;
    for (int k = 1; k < 10; ++k) head += std::pow(k, -s);
    CHECK(hurwitz_zeta(s, 10.0) == doctest::Approx(std::riemann_zeta(s) - head).epsilon(1e-10));
  }
}

TEST_CASE("theta") {
  CHECK(theta(DoubleCombModel(Geometric{0.5}, Geometric{0.5}), 'u') == 2.0);
  CHECK(std::abs(theta(DoubleCombModel(Polynomial{2.0}, Geometric{0.5}), 'u') - M_PI * M_PI / 6) < 1e-12);
  CHECK(std::isinf(theta(DoubleCombModel(Polynomial{0.5}, Geometric{0.5}), 'u')));
  CHECK_THROWS_AS(theta(DoubleCombModel(Table{{0.5}, Geometric{1.0}}, Geometric{0.5}), 'u'), Error);
}

TEST_CASE("erickson J") {
  const auto both = drift_report(DoubleCombModel(Polynomial{0.5}, Polynomial{0.5}));
  CHECK(both.j_ud.diverges());
  CHECK(both.j_du.diverges());
  const auto mixed = drift_report(DoubleCombModel(Polynomial{0.5}, Polynomial{0.8}));
  CHECK(mixed.j_ud.diverges());
  CHECK(mixed.j_du.converged());
  const auto geo = drift_report(DoubleCombModel(Geometric{0.5}, Geometric{0.5}));
  CHECK(geo.j_ud.converged());
  CHECK(geo.j_du.converged());
  // Brute-force partial sum of J_{u|d} for the geometric case.
  double j = 0.0, denom = 0.0;
  for (std::size_t n = 1; n <= 200; ++n) {
    denom += std::pow(0.5, n - 1);
    j += n * (std::pow(0.5, n - 1) - std::pow(0.5, n)) / denom;
  }
  CHECK(geo.j_ud.value == doctest::Approx(j).epsilon(1e-10));
}

TEST_CASE("classification table") {
  auto c = classify(DoubleCombModel(Geometric{0.5}, Geometric{0.5}));
  CHECK(c.verdict == Verdict1D::Recurrent);
  CHECK(c.rule_fired == "d_S = 0");
  CHECK(c.warnings.empty());

  c = classify(DoubleCombModel(Geometric{0.9}, Geometric{0.5}));
  CHECK(c.verdict == Verdict1D::DriftingPlusInfinity);
  CHECK(c.rule_fired == "d_S > 0");
  CHECK(c.drift.theta_u == doctest::Approx(10.0));
  CHECK(c.drift.d_s == doctest::Approx(2.0 / 3));

  c = classify(DoubleCombModel(Geometric{0.5}, Geometric{0.9}));
  CHECK(c.verdict == Verdict1D::DriftingMinusInfinity);

  c = classify(DoubleCombModel(Polynomial{0.5}, Geometric{0.5}));
  CHECK(c.verdict == Verdict1D::DriftingPlusInfinity);
  CHECK(c.drift.d_s == 1.0);

  c = classify(DoubleCombModel(Polynomial{0.5}, Polynomial{0.5}));
  CHECK(c.verdict == Verdict1D::Recurrent);
  CHECK(c.rule_fired == "J_u|d = J_d|u = inf");

  c = classify(DoubleCombModel(Polynomial{0.5}, Polynomial{0.8}));
  CHECK(c.verdict == Verdict1D::DriftingPlusInfinity);
  c = classify(DoubleCombModel(Polynomial{0.8}, Polynomial{0.5}));
  CHECK(c.verdict == Verdict1D::DriftingMinusInfinity);
}

TEST_CASE("nearly equal theta gives a warning") {
  const auto c = classify(DoubleCombModel(Polynomial{2.0}, Table{{std::pow(0.5, 2.0)}, Polynomial{2.0}}));
  CHECK(c.verdict == Verdict1D::Recurrent);
  CHECK_FALSE(c.warnings.empty());
}

TEST_CASE("classify rejects frozen runs") {
  // A frozen run never switches, so the model is null before anything else.
  try {
    classify(DoubleCombModel(Table{{0.5}, Geometric{1.0}}, Geometric{0.5}));
    FAIL("expected InvalidModel");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidModel);
  }
}

TEST_CASE("unique probability iff both theta finite") {
  const std::vector<TailRule> rules{Geometric{0.4}, Polynomial{0.7}, Polynomial{1.3}, Table{{0.9}, Polynomial{3.0}}};
  for (const auto& up : rules) {
    for (const auto& down : rules) {
      const DoubleCombModel comb(up, down);
      const bool finite = std::isfinite(theta(comb, 'u')) && std::isfinite(theta(comb, 'd'));
      CHECK((stationarity_verdict(comb.vlmc()).outcome == VerdictKind::UniqueProbability) == finite);
    }
  }
}

TEST_CASE("walk from letters") {
  const auto t = walk1d_from_letters("dduuudu");
  CHECK(t.positions == std::vector<std::int64_t>{0, -1, -2, -1, 0, 1, 0, 1});
  // X_0 = d, so the first d-run is X_0..X_2 and the first u-run X_3..X_5.
  CHECK(t.breaks == std::vector<std::size_t>{0, 3, 6, 7});
  CHECK(t.tau_d == std::vector<std::size_t>{3, 1});
  CHECK(t.tau_u == std::vector<std::size_t>{3});
  CHECK(t.skeleton == std::vector<std::int64_t>{0, t.positions[6]});
  CHECK(t.is_breaking(3));
  CHECK_FALSE(t.is_breaking(4));
  CHECK(letters_from_walk1d(t.positions) == "dduuudu");
}

TEST_CASE("simulated walks") {
  const DoubleCombModel sym(Geometric{0.5}, Geometric{0.5});
  const auto one = simulate_prw1(sym, 1, 3);
  CHECK(std::abs(one.positions[1]) == 1);

  const auto t = simulate_prw1(sym, 1'000'000, 17);
  for (std::size_t n = 0; n < t.skeleton.size(); ++n) CHECK(t.skeleton[n] == t.positions[t.breaks[2 * n]]);
  for (std::size_t n = 1; n < t.breaks.size(); ++n) {
    CHECK(std::abs(t.positions[t.breaks[n]] - t.positions[t.breaks[n] - 1]) == 1);
  }
  const double mean_u = std::accumulate(t.tau_u.begin(), t.tau_u.end(), 0.0) / static_cast<double>(t.tau_u.size());
  CHECK(std::abs(mean_u - 2.0) < 0.04);

  // Lag-1 autocorrelation of the u-runs.
  const auto& x = t.tau_u;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    den += (x[i] - mean_u) * (x[i] - mean_u);
    if (i + 1 < x.size()) num += (x[i] - mean_u) * (x[i + 1] - mean_u);
  }
  CHECK(std::abs(num / den) < 4.0 / std::sqrt(static_cast<double>(x.size())));

  const DoubleCombModel drift(Geometric{0.9}, Geometric{0.5});
  CHECK(std::abs(static_cast<double>(simulate_prw1(drift, 1'000'000, 5).positions.back()) / 1e6 - 2.0 / 3) < 0.02);
  CHECK(simulate_prw1_position(drift, 100'000, 5) == simulate_prw1(drift, 100'000, 5).positions.back());
}

TEST_CASE("run cap") {
  const DoubleCombModel slow(Polynomial{0.05}, Geometric{0.5});
  try {
    simulate_prw1(slow, 1'000'000, 1, 0, 10);
    FAIL("expected RunCapExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RunCapExceeded);
  }
}

TEST_CASE("walk csv") {
  std::ostringstream out;
  write_walk1d_csv(out, walk1d_from_letters("du"));
  CHECK(out.str() == "n,X,S,is_breaking\n1,-1,-1,0\n2,1,0,1\n");
}
