#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "vlmc/model.hpp"
#include "vlmc/series.hpp"

namespace vlmc {

inline constexpr std::size_t kDefaultRunCap = 100'000'000;

/// Double comb over {d, u} = {−1, +1}. Each run switches to the opposite
/// letter with the whole mass 1 − q_k.
class DoubleCombModel {
 public:
  /// `up` drives the u-runs (contexts u^k d), `down` the d-runs.
  DoubleCombModel(TailRule up, TailRule down);
  /// Accepts a comb model over the alphabet {d, u}; throws InvalidModel.
  explicit DoubleCombModel(ProbabilizedTree model);

  const ProbabilizedTree& vlmc() const noexcept { return model_; }
  const TailRule& up() const { return model_.rule('u', 'd').persist; }
  const TailRule& down() const { return model_.rule('d', 'u').persist; }
  /// Rule of the runs in `direction` ('u' or 'd').
  const TailRule& rule(Letter direction) const;

 private:
  ProbabilizedTree model_;
};

/// P(τ^α ≥ n) = ∏_{k<n} q_{α^k β}(α).
double persistence_tail(const DoubleCombModel& model, Letter direction, std::size_t n);

/// Θ_α = E[τ^α], +∞ when the tail is not summable. Throws Assumption1Violated
/// when runs in that direction can last forever.
double theta(const DoubleCombModel& model, Letter direction);

/// J_{α|β} = Σ n P(τ^α = n) / Σ_{k ≤ n} P(τ^β ≥ k). The verdict comes from the
/// asymptotic class of both tails; convergent values are partial sums with
/// the rest estimated in remainder_bound.
CascadeSeriesResult erickson_j(const DoubleCombModel& model, Letter alpha, Letter beta,
                               const SeriesPolicy& policy = {});

struct DriftReport {
  double theta_u = 0.0;
  double theta_d = 0.0;
  /// Θ_u − Θ_d; NaN when both Θ are infinite.
  double d_m = 0.0;
  /// (Θ_u − Θ_d)/(Θ_u + Θ_d), ±1 when exactly one Θ is infinite, NaN when both are.
  double d_s = 0.0;
  CascadeSeriesResult j_ud;
  CascadeSeriesResult j_du;
};

DriftReport drift_report(const DoubleCombModel& model, const SeriesPolicy& policy = {});

enum class Verdict1D { Recurrent, DriftingPlusInfinity, DriftingMinusInfinity, Undecidable };
const char* to_string(Verdict1D verdict) noexcept;

struct Classification1D {
  Verdict1D verdict = Verdict1D::Undecidable;
  /// Cell of the recurrence table that produced the verdict, e.g. "d_S > 0".
  std::string rule_fired;
  std::string reason;
  std::vector<std::string> warnings;
  DriftReport drift;
};

/// Throws InvalidModel for a null model and Assumption1Violated when some
/// run can last forever. Reaching the "both J finite" cell throws
/// InternalConsistency.
Classification1D classify(const DoubleCombModel& model, const SeriesPolicy& policy = {});

/// Walk observed along X_1..X_N with S_0 = 0, started from X_{-1} = u, X_0 = d.
struct Walk1DTrace {
  std::string letters;                   // X_1..X_N
  std::vector<std::int64_t> positions;   // S_0..S_N
  std::vector<std::size_t> breaks;       // B_0 = 0, B_1, ... ≤ N
  std::vector<std::size_t> tau_d;        // completed d-runs, X_0 included in the first
  std::vector<std::size_t> tau_u;        // completed u-runs
  std::vector<std::int64_t> skeleton;    // M_n = S_{B_{2n}}

  bool is_breaking(std::size_t step) const;
};

/// Builds the trace of the letters X_1..X_N ∈ {d, u}; X_0 = d, X_{-1} = u.
Walk1DTrace walk1d_from_letters(std::string_view letters);

/// Increments of a trace, back as letters (the walk-to-letters utility).
std::string letters_from_walk1d(const std::vector<std::int64_t>& positions);

/// Deterministic in (model, n_steps, seed, stream). Throws RunCapExceeded.
Walk1DTrace simulate_prw1(const DoubleCombModel& model, std::size_t n_steps, std::uint64_t seed,
                          std::uint64_t stream = 0, std::size_t run_cap = kDefaultRunCap);

/// S_N alone, without storing the trace. Same letters as simulate_prw1.
std::int64_t simulate_prw1_position(const DoubleCombModel& model, std::size_t n_steps,
                                    std::uint64_t seed, std::uint64_t stream = 0,
                                    std::size_t run_cap = kDefaultRunCap);

/// Columns: n,X,S,is_breaking with X ∈ {−1, +1}, one row per step n ≥ 1.
void write_walk1d_csv(std::ostream& out, const Walk1DTrace& trace);

}  // namespace vlmc
