#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vlmc/model.hpp"
#include "vlmc/prw1d.hpp"
#include "vlmc/series.hpp"

namespace vlmc {

using Point2 = Eigen::Matrix<std::int64_t, 2, 1>;

/// Unit step of a direction letter: n = (0,1), e = (1,0), w = (−1,0), s = (0,−1).
Point2 direction_step(Letter direction);

/// Quadruple comb over {n, e, w, s}.
class QuadCombModel {
 public:
  /// Accepts a comb model over the alphabet {n, e, w, s}; throws InvalidModel.
  explicit QuadCombModel(ProbabilizedTree model);

  /// Directionally reinforced walk: every branch α^k β shares `persist` for
  /// its run direction and splits 1 − q_k uniformly over the 3 other letters.
  static QuadCombModel drrw(const TailRule& persist);
  /// Same with one rule per run direction, in the order n, e, w, s.
  static QuadCombModel drrw(const std::array<TailRule, 4>& persist);

  const ProbabilizedTree& vlmc() const noexcept { return model_; }

 private:
  ProbabilizedTree model_;
};

const Alphabet& compass();

/// Markov kernel of the bend chain. Bends are written in walk order: βα is a
/// step in direction β followed by one in direction α.
struct BendKernel {
  std::vector<Word> states;  // the 12 bends, canonical order
  Eigen::MatrixXd p;

  Eigen::Index position(std::string_view bend) const;
};

/// P(βα; αγ) = w_γ (1 − lim P(τ ≥ n)) for chained bends, 0 otherwise. Throws
/// Assumption2Violated when some run can last forever.
BendKernel build_bend_kernel(const QuadCombModel& model, const SeriesPolicy& policy = {});

/// Invariant law π_J of the bend chain. Throws NotStochastic, Reducible.
Eigen::VectorXd bend_stationary(const BendKernel& kernel);

/// Walk along X_1..X_N started from the bend X_{-1} X_0 (walk order), S_0 = 0.
struct Walk2DTrace {
  Word init_bend;
  std::string letters;               // X_1..X_N
  std::vector<Point2> positions;     // S_0..S_N
  std::vector<std::size_t> breaks;   // B_0 = 0, B_1, ... ≤ N
  std::vector<Word> bends;           // J_0 = init bend, J_n = X_{B_{n-1}} X_{B_n}
  std::vector<std::size_t> sojourns; // T_0 = 0, T_n = B_n − B_{n-1}
  std::vector<Point2> skeleton;      // M_n = S_{B_n}

  /// Z_j: bend in force at step j, i.e. J_n for B_n ≤ j < B_{n+1}.
  const Word& bend_at(std::size_t step) const;
  bool is_breaking(std::size_t step) const;
};

/// `init_bend` in walk order, e.g. "ne" for X_{-1} = n, X_0 = e.
Walk2DTrace walk2d_from_letters(std::string_view init_bend, std::string_view letters);

/// Letters of a lattice path with unit steps.
std::string letters_from_walk2d(const std::vector<Point2>& positions);

/// Deterministic in (model, n_steps, seed, stream); starts from the bend ne.
/// Throws RunCapExceeded.
Walk2DTrace simulate_prw2(const QuadCombModel& model, std::size_t n_steps, std::uint64_t seed,
                          std::uint64_t stream = 0, std::size_t run_cap = kDefaultRunCap);

/// Runs until `jumps` breaking times have been observed after B_0.
Walk2DTrace simulate_prw2_jumps(const QuadCombModel& model, std::size_t jumps, std::uint64_t seed,
                                std::uint64_t stream = 0, std::size_t run_cap = kDefaultRunCap);

/// Columns: n,letter,x,y,is_breaking,bend, one row per step n ≥ 1.
void write_walk2d_csv(std::ostream& out, const Walk2DTrace& trace);

inline constexpr double kPlateauThreshold = 1e-3;

struct DichotomyReport {
  std::size_t horizon = 0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> returns;   // #trials with M_n = 0, n = 0..N
  std::vector<double> p_hat;
  std::vector<double> wilson_lo;
  std::vector<double> wilson_hi;
  std::vector<double> partial_sums;   // Σ_{m ≤ n} p̂_m
  std::vector<double> min_norm;       // per trial, min_{1 ≤ n ≤ N} ‖M_n‖
  std::size_t censored_trials = 0;    // trials stopped by the step cap
  double last_decade_growth = 0.0;    // partial sum growth over (N/10, N]
  std::string trend;                  // "growing" or "plateauing"
};

/// Monte-Carlo estimate of P(M_n = 0), n ≤ N. Trial i uses stream i of
/// `seed`, so results do not depend on `threads`. A trial that exceeds
/// `step_cap` steps stops and counts as no return afterwards. The trend
/// label is "plateauing" when the partial sum grows by less than 1e-3 over
/// the last decade (N/10, N], "growing" otherwise; it is a diagnostic only.
DichotomyReport return_prob_diagnostic(const QuadCombModel& model, std::size_t horizon,
                                       std::size_t trials, std::uint64_t seed,
                                       unsigned threads = 0,
                                       std::size_t step_cap = 1'000'000'000);

/// Columns: n,p_hat,wilson_lo,wilson_hi,partial_sum.
void write_dichotomy_csv(std::ostream& out, const DichotomyReport& report);

/// Wilson score interval at 95% for k successes out of n.
std::pair<double, double> wilson_interval(std::size_t successes, std::size_t n, double z = 1.96);

}  // namespace vlmc
