#include "vlmc/prw2d.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <thread>

#include "vlmc/cascades.hpp"
#include "vlmc/errors.hpp"
#include "vlmc/linalg.hpp"
#include "vlmc/process.hpp"

namespace vlmc {

const Alphabet& compass() {
  static const Alphabet alphabet("news");
  return alphabet;
}

Point2 direction_step(Letter direction) {
  switch (direction) {
    case 'n': return Point2(0, 1);
    case 'e': return Point2(1, 0);
    case 'w': return Point2(-1, 0);
    case 's': return Point2(0, -1);
    default: break;
  }
  throw Error(ErrorCode::InvalidWord, std::string("'") + direction + "' is not a compass direction",
              std::string(1, direction));
}

QuadCombModel::QuadCombModel(ProbabilizedTree model) : model_(std::move(model)) {
  if (!model_.is_comb() || !(model_.alphabet() == compass())) {
    throw Error(ErrorCode::InvalidModel,
                "a two-dimensional walk needs a comb over the alphabet {n, e, w, s}");
  }
}

QuadCombModel QuadCombModel::drrw(const TailRule& persist) {
  return drrw(std::array<TailRule, 4>{persist, persist, persist, persist});
}

QuadCombModel QuadCombModel::drrw(const std::array<TailRule, 4>& persist) {
  const Alphabet& a = compass();
  std::map<Word, PairRule> rules;
  for (std::size_t alpha = 0; alpha < 4; ++alpha) {
    std::vector<double> weights(4, 1.0 / 3.0);
    weights[alpha] = 0.0;
    for (std::size_t beta = 0; beta < 4; ++beta) {
      if (beta == alpha) continue;
      rules.emplace(Word{a.symbol(alpha), a.symbol(beta)}, PairRule{persist[alpha], weights});
    }
  }
  return QuadCombModel(ProbabilizedTree::comb_model(a, std::move(rules)));
}

Eigen::Index BendKernel::position(std::string_view bend) const {
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i] == bend) return static_cast<Eigen::Index>(i);
  }
  throw Error(ErrorCode::InvalidWord, "'" + Word(bend) + "' is not a bend", Word(bend));
}

BendKernel build_bend_kernel(const QuadCombModel& model, const SeriesPolicy& policy) {
  policy.validate();
  const ProbabilizedTree& vlmc = model.vlmc();
  const Alphabet& a = vlmc.alphabet();
  for (const auto& [pair, rule] : vlmc.rules()) {
    if (!rule.persist.vanishes()) {
      // pair is the context branch α β; its walk-order bend is β α.
      throw Error(ErrorCode::Assumption2Violated,
                  "runs after the bend " + reversed(pair) + " last forever with positive probability",
                  reversed(pair));
    }
  }
  BendKernel kernel;
  for (Letter x : a.symbols()) {
    for (Letter y : a.symbols()) {
      if (x != y) kernel.states.push_back(Word{x, y});
    }
  }
  sort_canonical(kernel.states, a);
  const auto n = static_cast<Eigen::Index>(kernel.states.size());
  kernel.p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Word& from = kernel.states[static_cast<std::size_t>(i)];  // β α
    const std::size_t beta = a.index(from[0]);
    const std::size_t alpha = a.index(from[1]);
    for (Eigen::Index j = 0; j < n; ++j) {
      const Word& to = kernel.states[static_cast<std::size_t>(j)];  // α γ
      if (to[0] != from[1]) continue;
      kernel.p(i, j) = comb_switch_mass(vlmc.rule(alpha, beta), a.index(to[1]));
    }
  }
  return kernel;
}

Eigen::VectorXd bend_stationary(const BendKernel& kernel) { return solve_left_fixed(kernel.p); }

const Word& Walk2DTrace::bend_at(std::size_t step) const {
  const auto it = std::upper_bound(breaks.begin(), breaks.end(), step);
  return bends[static_cast<std::size_t>(it - breaks.begin()) - 1];
}

bool Walk2DTrace::is_breaking(std::size_t step) const {
  return std::binary_search(breaks.begin(), breaks.end(), step);
}

Walk2DTrace walk2d_from_letters(std::string_view init_bend, std::string_view letters) {
  if (init_bend.size() != 2 || init_bend[0] == init_bend[1]) {
    throw Error(ErrorCode::InvalidWord, "'" + Word(init_bend) + "' is not a bend", Word(init_bend));
  }
  compass().validate(init_bend);
  Walk2DTrace trace;
  trace.init_bend.assign(init_bend);
  trace.letters.assign(letters);
  trace.positions.reserve(letters.size() + 1);
  trace.positions.push_back(Point2::Zero());
  trace.breaks.push_back(0);
  trace.bends.push_back(trace.init_bend);
  trace.sojourns.push_back(0);
  trace.skeleton.push_back(Point2::Zero());
  Letter previous = init_bend[1];
  Point2 s = Point2::Zero();
  for (std::size_t j = 1; j <= letters.size(); ++j) {
    const Letter x = letters[j - 1];
    s += direction_step(x);
    trace.positions.push_back(s);
    if (x != previous) {
      trace.bends.push_back(Word{previous, x});
      trace.sojourns.push_back(j - trace.breaks.back());
      trace.breaks.push_back(j);
      trace.skeleton.push_back(s);
      previous = x;
    }
  }
  return trace;
}

std::string letters_from_walk2d(const std::vector<Point2>& positions) {
  std::string letters;
  for (std::size_t j = 1; j < positions.size(); ++j) {
    const Point2 d = positions[j] - positions[j - 1];
    Letter x = 0;
    for (Letter c : compass().symbols()) {
      if (direction_step(c) == d) x = c;
    }
    if (x == 0) {
      throw Error(ErrorCode::InvalidWord, "step " + std::to_string(j) + " is not a unit lattice step");
    }
    letters.push_back(x);
  }
  return letters;
}

namespace {

// Draws letters from the bend ne until `done(steps, jumps)` holds.
template <typename Done>
std::string run_prw2(const QuadCombModel& model, std::uint64_t seed, std::uint64_t stream,
                     std::size_t run_cap, Done&& done) {
  const ProbabilizedTree& vlmc = model.vlmc();
  const Alphabet& a = vlmc.alphabet();
  CombContext context = CombContext::from_word(a, "en");
  CounterRng rng(seed, stream);
  std::string letters;
  std::size_t jumps = 0;
  while (!done(letters.size(), jumps)) {
    const std::size_t letter = step_comb(vlmc, context, rng);
    if (context.length == 1) ++jumps;
    if (context.length > run_cap) {
      throw Error(ErrorCode::RunCapExceeded, "a run exceeded " + std::to_string(run_cap) + " steps",
                  std::to_string(letters.size() + 1));
    }
    letters.push_back(a.symbol(letter));
  }
  return letters;
}

}  // namespace

Walk2DTrace simulate_prw2(const QuadCombModel& model, std::size_t n_steps, std::uint64_t seed,
                          std::uint64_t stream, std::size_t run_cap) {
  const auto letters = run_prw2(model, seed, stream, run_cap,
                                [&](std::size_t steps, std::size_t) { return steps >= n_steps; });
  return walk2d_from_letters("ne", letters);
}

Walk2DTrace simulate_prw2_jumps(const QuadCombModel& model, std::size_t jumps, std::uint64_t seed,
                                std::uint64_t stream, std::size_t run_cap) {
  const auto letters = run_prw2(model, seed, stream, run_cap,
                                [&](std::size_t, std::size_t seen) { return seen >= jumps; });
  return walk2d_from_letters("ne", letters);
}

void write_walk2d_csv(std::ostream& out, const Walk2DTrace& trace) {
  out << "n,letter,x,y,is_breaking,bend\n";
  std::size_t jump = 0;
  for (std::size_t n = 1; n < trace.positions.size(); ++n) {
    bool breaking = false;
    if (jump + 1 < trace.breaks.size() && trace.breaks[jump + 1] == n) {
      breaking = true;
      ++jump;
    }
    const Point2& p = trace.positions[n];
    out << n << ',' << trace.letters[n - 1] << ',' << p.x() << ',' << p.y() << ','
        << (breaking ? 1 : 0) << ',' << trace.bends[jump] << '\n';
  }
}

std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n, double z) {
  if (n == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

DichotomyReport return_prob_diagnostic(const QuadCombModel& model, std::size_t horizon,
                                       std::size_t trials, std::uint64_t seed, unsigned threads,
                                       std::size_t step_cap) {
  DichotomyReport report;
  report.horizon = horizon;
  report.trials = trials;
  report.seed = seed;
  report.min_norm.assign(trials, std::numeric_limits<double>::infinity());
  std::vector<unsigned char> censored(trials, 0);

  const ProbabilizedTree& vlmc = model.vlmc();
  const CombContext start = CombContext::from_word(vlmc.alphabet(), "en");
  std::vector<Point2> steps;
  for (Letter c : vlmc.alphabet().symbols()) steps.push_back(direction_step(c));

  auto run_trial = [&](std::size_t trial, std::vector<std::size_t>& returns) {
    CombContext context = start;
    CounterRng rng(seed, trial);
    Point2 s = Point2::Zero();
    std::size_t jumps = 0;
    std::size_t taken = 0;
    double best = std::numeric_limits<double>::infinity();
    while (jumps < horizon) {
      if (taken == step_cap) {
        censored[trial] = 1;
        break;
      }
      s += steps[step_comb(vlmc, context, rng)];
      ++taken;
      if (context.length != 1) continue;
      ++jumps;
      if (s.isZero()) ++returns[jumps];
      best = std::min(best, std::hypot(static_cast<double>(s.x()), static_cast<double>(s.y())));
    }
    report.min_norm[trial] = best;
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(trials, 1)));
  std::vector<std::vector<std::size_t>> partial(threads, std::vector<std::size_t>(horizon + 1, 0));
  std::atomic<std::size_t> next{0};
  auto worker = [&](unsigned id) {
    for (std::size_t t = next++; t < trials; t = next++) run_trial(t, partial[id]);
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned id = 0; id < threads; ++id) pool.emplace_back(worker, id);
    for (auto& th : pool) th.join();
  }

  report.returns.assign(horizon + 1, 0);
  for (const auto& counts : partial) {
    for (std::size_t n = 0; n <= horizon; ++n) report.returns[n] += counts[n];
  }
  report.returns[0] = trials;  // M_0 = S_0 = 0
  for (auto c : censored) report.censored_trials += c;

  double running = 0.0;
  for (std::size_t n = 0; n <= horizon; ++n) {
    const double p = trials ? static_cast<double>(report.returns[n]) / static_cast<double>(trials) : 0.0;
    const auto [lo, hi] = wilson_interval(report.returns[n], trials);
    running += p;
    report.p_hat.push_back(p);
    report.wilson_lo.push_back(lo);
    report.wilson_hi.push_back(hi);
    report.partial_sums.push_back(running);
  }
  report.last_decade_growth = report.partial_sums[horizon] - report.partial_sums[horizon / 10];
  report.trend = report.last_decade_growth < kPlateauThreshold ? "plateauing" : "growing";
  return report;
}

void write_dichotomy_csv(std::ostream& out, const DichotomyReport& report) {
  out << "n,p_hat,wilson_lo,wilson_hi,partial_sum\n";
  for (std::size_t n = 0; n < report.p_hat.size(); ++n) {
    out << n << ',' << report.p_hat[n] << ',' << report.wilson_lo[n] << ',' << report.wilson_hi[n]
        << ',' << report.partial_sums[n] << '\n';
  }
}

}  // namespace vlmc
