// Acceptance checks: one PASS/FAIL line per criterion.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "vlmc/cascades.hpp"
#include "vlmc/errors.hpp"
#include "vlmc/prw1d.hpp"
#include "vlmc/prw2d.hpp"
#include "vlmc/semi_markov.hpp"
#include "vlmc/stationary.hpp"

using namespace vlmc;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto start = Clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(Clock::now() - start).count();
  if (budget_s > 0 && secs > budget_s) {
    o.pass = false;
    o.detail += " (over the " + std::to_string(static_cast<int>(budget_s)) + " s budget)";
  }
  if (!o.pass) ++failures;
  std::printf("[%s] %d %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

double oracle_sup_error(const std::string& alphabet, const std::vector<std::string>& leaves,
                        const oracle::Table& q) {
  std::size_t h = 0;
  for (const auto& leaf : leaves) h = std::max(h, leaf.size());
  const auto cylinders = oracle::order_h_cylinders(alphabet, leaves, q, h);
  const auto verdict = stationarity_verdict(fixture::explicit_model(alphabet, leaves, q));
  if (verdict.outcome != VerdictKind::UniqueProbability) return INFINITY;
  double sup = 0.0;
  for (const auto& [w, mass] : cylinders) sup = std::max(sup, std::abs(pi_cylinder(*verdict.measure, w) - mass));
  return sup;
}

Outcome oracle_equivalence() {
  std::mt19937_64 gen(20260101);
  double sup = 0.0;
  int models = 0;
  for (int i = 0; i < 20; ++i, ++models) {
    sup = std::max(sup, oracle_sup_error("01", fixture::kNineLeaves,
                                         oracle::random_non_null(fixture::kNineLeaves, 2, gen)));
  }
  std::size_t tallest = 0;
  for (int i = 0; i < 10; ++i, ++models) {
    const auto leaves = oracle::random_stable_leaves("01", 5, gen);
    for (const auto& l : leaves) tallest = std::max(tallest, l.size());
    sup = std::max(sup, oracle_sup_error("01", leaves, oracle::random_non_null(leaves, 2, gen)));
  }
  return {sup <= 1e-10, std::to_string(models) + " models, tallest random tree " + std::to_string(tallest) +
                            ", sup error " + fmt(sup) + " (tol 1e-10)"};
}

QuadCombModel biased_quad(const TailRule& e_rule, const TailRule& other) {
  std::map<Word, PairRule> rules;
  for (Letter a : compass().symbols()) {
    for (Letter b : compass().symbols()) {
      if (a == b) continue;
      std::vector<double> w(4, 0.0);
      for (std::size_t g = 0; g < 4; ++g) {
        const Letter c = compass().symbol(g);
        if (c == a) continue;
        if (a == 'e') w[g] = c == 'w' ? 0.1 : 0.45;
        else w[g] = c == 'e' ? 0.8 : 0.1;
      }
      rules.emplace(Word{a, b}, PairRule{a == 'e' ? e_rule : other, w});
    }
  }
  return QuadCombModel(ProbabilizedTree::comb_model(compass(), rules));
}

Outcome q_stochastic_and_pq() {
  double worst_row = 0.0;
  std::size_t mismatches = 0, compared = 0;
  const std::vector<TailRule> tails{Geometric{0.3}, Geometric{0.8}, Polynomial{1.5}, Polynomial{3.0}};
  for (const auto& up : tails) {
    for (const auto& down : tails) {
      const auto q = build_q_matrix(fixture::double_comb(up, down));
      worst_row = std::max(worst_row, (q.entries.rowwise().sum().array() - 1.0).abs().maxCoeff());
    }
  }
  std::vector<QuadCombModel> quads{QuadCombModel::drrw(Geometric{0.5}), QuadCombModel::drrw(Polynomial{1.5}),
                                   QuadCombModel::drrw({TailRule(Geometric{0.2}), TailRule(Polynomial{2.0}),
                                                        TailRule(Geometric{0.7}), TailRule(Polynomial{1.1})}),
                                   biased_quad(Geometric{0.9}, Geometric{0.5}),
                                   biased_quad(Polynomial{1.2}, Geometric{0.4})};
  for (const auto& model : quads) {
    const auto q = build_q_matrix(model.vlmc());
    worst_row = std::max(worst_row, (q.entries.rowwise().sum().array() - 1.0).abs().maxCoeff());
    const auto p = build_bend_kernel(model);
    for (const auto& from : p.states) {
      for (const auto& to : p.states) {
        // P(βα; αγ) against Q_{αβ,γα}.
        const Word row(from.rbegin(), from.rend());
        const Word col(to.rbegin(), to.rend());
        ++compared;
        if (p.p(p.position(from), p.position(to)) != q.entries(q.position(row), q.position(col))) ++mismatches;
      }
    }
  }
  return {worst_row <= 1e-9 && mismatches == 0,
          "max |row sum - 1| " + fmt(worst_row) + " (tol 1e-9), P/Q mismatches " + std::to_string(mismatches) +
              " of " + std::to_string(compared) + " (tol 0)"};
}

Outcome tail_law() {
  const std::size_t runs = 100'000;
  const std::vector<std::pair<std::string, TailRule>> rules{
      {"Geometric(0.3)", Geometric{0.3}}, {"Geometric(0.5)", Geometric{0.5}}, {"Geometric(0.8)", Geometric{0.8}},
      {"Polynomial(0.5)", Polynomial{0.5}}, {"Polynomial(1.5)", Polynomial{1.5}}, {"Polynomial(2)", Polynomial{2.0}}};
  double worst_z = 0.0;
  std::string worst;
  bool pass = true;
  std::uint64_t stream = 0;
  for (const auto& [name, rule] : rules) {
    const auto model = fixture::double_comb(rule, Geometric{0.5});
    const auto lengths = sample_run_lengths(model, 'u', 'd', runs, 21, 3, stream++);
    for (std::size_t n = 1; n <= 20; ++n) {
      std::size_t hits = 0;
      for (auto l : lengths) hits += l >= n;
      const double analytic = oracle::tail_by_product([&](std::size_t k) { return rule.persist(k); }, n);
      const double empirical = static_cast<double>(hits) / runs;
      const double se = oracle::binomial_se(analytic, runs);
      const double dev = std::abs(empirical - analytic);
      if (se == 0.0 ? dev != 0.0 : dev > 4 * se) pass = false;
      const double z = se > 0 ? dev / se : 0.0;
      if (z > worst_z) {
        worst_z = z;
        worst = name + " n=" + std::to_string(n);
      }
    }
  }
  return {pass, "6 rules x 1e5 runs, n <= 20, worst deviation " + fmt(worst_z) + " SE at " + worst + " (tol 4 SE)"};
}

Outcome classifier() {
  std::ostringstream d;
  bool pass = true;
  const auto a = classify(DoubleCombModel(Geometric{0.5}, Geometric{0.5}));
  pass &= a.verdict == Verdict1D::Recurrent;
  d << "(a) " << to_string(a.verdict) << " [" << a.rule_fired << "]";

  const DoubleCombModel drift(Geometric{0.9}, Geometric{0.5});
  const auto b = classify(drift);
  double mean = 0.0;
  const std::size_t n = 1'000'000;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    mean += static_cast<double>(simulate_prw1_position(drift, n, seed)) / static_cast<double>(n);
  }
  mean /= 100.0;
  pass &= b.verdict == Verdict1D::DriftingPlusInfinity && std::abs(mean - 2.0 / 3.0) <= 0.02;
  d << "; (b) " << to_string(b.verdict) << " [" << b.rule_fired << "], mean S_N/N " << fmt(mean)
    << " vs 2/3 (tol 0.02)";

  const auto c = classify(DoubleCombModel(Polynomial{0.5}, Polynomial{0.5}));
  pass &= c.verdict == Verdict1D::Recurrent && c.drift.j_ud.diverges() && c.drift.j_du.diverges();
  d << "; (c) " << to_string(c.verdict) << " [" << c.rule_fired << "]";

  const auto e = classify(DoubleCombModel(Polynomial{0.5}, Polynomial{0.8}));
  pass &= e.verdict == Verdict1D::DriftingPlusInfinity && e.drift.j_ud.diverges() && e.drift.j_du.converged();
  d << "; (d) " << to_string(e.verdict) << " [" << e.rule_fired << "]";
  return {pass, d.str()};
}

Outcome kappa_sojourn() {
  const auto geo = fixture::double_comb(Geometric{0.5}, Geometric{0.5});
  const auto k = kappa(geo, "ud");
  const auto trace = simulate_letters_until_jumps(geo, "du", 100'000, 11);
  const auto path = extract_mrc_letters(trace, geo.tree());
  double total = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i + 1 < path.states.size(); ++i) {
    if (path.states[i] != "ud") continue;
    total += static_cast<double>(path.sojourns[i + 1]);
    ++count;
  }
  const double mean = total / static_cast<double>(count);
  const auto poly = kappa(fixture::double_comb(Polynomial{2.0}, Geometric{0.5}), "ud");
  const double zeta2 = M_PI * M_PI / 6.0;
  const bool pass = k.converged() && k.analytic && k.value == 2.0 && std::abs(mean / 2.0 - 1.0) <= 0.02 &&
                    poly.converged() && std::abs(poly.value - zeta2) <= 1e-6;
  return {pass, "kappa_ud " + fmt(k.value) + (k.analytic ? " (analytic)" : "") + ", mean sojourn " + fmt(mean) + " (rel. error " + fmt(std::abs(mean / 2.0 - 1.0)) + ")" +
                    " over " + std::to_string(count) + " ud-jumps (tol 2%), Polynomial(2) error " +
                    fmt(std::abs(poly.value - zeta2)) + " (tol 1e-6)"};
}

Outcome nine_leaf_identity() {
  std::mt19937_64 gen(53);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const auto q = oracle::random_non_null(fixture::kNineLeaves, 2, gen);
    const double expected = q.at("10")[0] * q.at("010")[0] * q.at("0010")[1] +
                            q.at("10")[1] * q.at("110")[0] * q.at("0110")[1];
    const double got = kernel_alpha_lis(fixture::nine_leaf_model(q), "10", "10", 3);
    worst = std::max(worst, std::abs(got - expected));
  }
  return {worst <= 1e-15, "50 probabilizations, max |difference| " + fmt(worst) + " (tol 1e-15)"};
}

Outcome diagram() {
  const DoubleCombModel comb(Polynomial{1.5}, Geometric{0.6});
  const auto quad = biased_quad(Polynomial{1.2}, Geometric{0.4});
  std::size_t bad = 0, traces = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto v1 = simulate_letters_until_jumps(comb.vlmc(), "du", 1000, seed);
    const auto r1 = check_diagram(extract_mrc_letters(v1, comb.vlmc().tree()),
                                  extract_mrc_bends(walk1d_from_letters(v1.letters)), v1.letters.size());
    const auto v2 = simulate_letters_until_jumps(quad.vlmc(), "en", 1000, seed);
    const auto r2 = check_diagram(extract_mrc_letters(v2, quad.vlmc().tree()),
                                  extract_mrc_bends(walk2d_from_letters("ne", v2.letters)), v2.letters.size());
    traces += 2;
    bad += !(r1.consistent && r1.jumps_compared >= 1000);
    bad += !(r2.consistent && r2.jumps_compared >= 1000);
  }
  return {bad == 0, std::to_string(traces) + " traces of 1e3 jumps, " + std::to_string(bad) + " inconsistent"};
}

Outcome internal_chain() {
  const auto model = biased_quad(Polynomial{2.5}, Geometric{0.4});
  const auto kernel = build_bend_kernel(model);
  const Eigen::VectorXd pi = bend_stationary(kernel);
  const std::size_t jumps = 100'000;
  const auto trace = simulate_prw2_jumps(model, jumps, 8);
  const auto m = static_cast<Eigen::Index>(kernel.states.size());
  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(m, m);
  for (std::size_t n = 0; n < jumps; ++n) {
    counts(kernel.position(trace.bends[n]), kernel.position(trace.bends[n + 1])) += 1.0;
  }
  double worst_t = 0.0;
  bool pass = true;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double visits = counts.row(i).sum();
    for (Eigen::Index j = 0; j < m; ++j) {
      const double p = kernel.p(i, j);
      const double se = oracle::binomial_se(p, visits);
      const double dev = std::abs(counts(i, j) / visits - p);
      if (se == 0.0 ? dev != 0.0 : dev > 4 * se) pass = false;
      if (se > 0) worst_t = std::max(worst_t, dev / se);
    }
  }
  Eigen::VectorXd occupation = Eigen::VectorXd::Zero(m);
  for (std::size_t n = 1; n <= jumps; ++n) occupation(kernel.position(trace.bends[n])) += 1.0;
  occupation /= static_cast<double>(jumps);
  const Eigen::VectorXd sigma = oracle::occupation_sigma(kernel.p, pi, static_cast<double>(jumps));
  double worst_o = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double z = std::abs(occupation(i) - pi(i)) / sigma(i);
    worst_o = std::max(worst_o, z);
    if (z > 4) pass = false;
  }
  const Eigen::VectorXd uniform = bend_stationary(build_bend_kernel(QuadCombModel::drrw(Polynomial{1.5})));
  const double drrw_dev = (uniform.array() - 1.0 / 12.0).abs().maxCoeff();
  pass &= drrw_dev <= 1e-12;
  return {pass, "1e5 jumps, worst transition deviation " + fmt(worst_t) + " sigma, worst occupation " +
                    fmt(worst_o) + " sigma (tol 4), DRRW |pi_J - 1/12| " + fmt(drrw_dev) + " (tol 1e-12)"};
}

Outcome verdict_grid() {
  struct Cell {
    const char* name;
    TailRule rule;
  };
  const std::vector<Cell> cells{{"G", Geometric{0.5}}, {"P", Polynomial{0.5}}, {"T", Table{{0.5}, Geometric{1.0}}}};
  std::ostringstream d;
  bool pass = true;
  for (const auto& up : cells) {
    for (const auto& down : cells) {
      // Assumption 1 and finiteness of Θ by brute-force tail products.
      auto tail = [](const TailRule& r, std::size_t n) {
        return oracle::tail_by_product([&](std::size_t k) { return r.persist(k); }, n);
      };
      const bool a1 = tail(up.rule, 100'000) < 1e-2 && tail(down.rule, 100'000) < 1e-2;
      auto theta_finite = [](const TailRule& r) {
        double head = 0.0, tail_part = 0.0, t = 1.0;
        for (std::size_t n = 1; n <= 20'000; ++n) {
          (n <= 10'000 ? head : tail_part) += t;
          t *= r.persist(n);
        }
        return tail_part < 1e-6 * head;
      };
      const bool finite = a1 && theta_finite(up.rule) && theta_finite(down.rule);
      const auto v = stationarity_verdict(fixture::double_comb(up.rule, down.rule)).outcome;
      const bool ok = (v == VerdictKind::UniqueProbability) == finite &&
                      (v == VerdictKind::SigmaFiniteOnly) == (a1 && !finite) &&
                      (v == VerdictKind::NoInvariantMeasure) == !a1;
      pass &= ok;
      d << up.name << down.name << "=" << to_string(v) << (ok ? "" : "(!)") << " ";
    }
  }
  return {pass, d.str()};
}

Outcome dichotomy() {
  const auto sym = return_prob_diagnostic(QuadCombModel::drrw(Geometric{0.5}), 1000, 10'000, 2024);
  const auto bias = return_prob_diagnostic(biased_quad(Geometric{0.9}, Geometric{0.5}), 1000, 10'000, 2024);
  bool pass = sym.p_hat[0] == 1.0 && bias.p_hat[0] == 1.0;
  for (const auto* r : {&sym, &bias}) {
    for (std::size_t n = 1; n < r->partial_sums.size(); ++n) pass &= r->partial_sums[n] >= r->partial_sums[n - 1];
  }
  pass &= sym.trend == "growing" && bias.trend == "plateauing";
  return {pass, "DRRW " + sym.trend + " (growth " + fmt(sym.last_decade_growth) + "), biased " + bias.trend +
                    " (growth " + fmt(bias.last_decade_growth) + "), threshold 1e-3"};
}

}  // namespace

int main() {
  report(1, "oracle equivalence", 10, oracle_equivalence);
  report(2, "Q stochasticity and P/Q identity", 0, q_stochastic_and_pq);
  report(3, "run tail law", 30, tail_law);
  report(4, "recurrence classifier", 60, classifier);
  report(5, "kappa is the expected sojourn", 0, kappa_sojourn);
  report(6, "nine-leaf kernel identity", 0, nine_leaf_identity);
  report(7, "diagram commutativity", 0, diagram);
  report(8, "bend chain", 0, internal_chain);
  report(9, "verdict equivalences", 0, verdict_grid);
  report(10, "dichotomy diagnostic", 300, dichotomy);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
