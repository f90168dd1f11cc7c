#pragma once

#include <cstddef>
#include <variant>
#include <vector>

namespace vlmc {

/// q_k = p for every run length k.
struct Geometric {
  double p = 0.5;
};

/// q_k = (k / (k + 1))^c, so the run tail telescopes to n^{-c}.
struct Polynomial {
  double c = 1.0;
};

/// q_k = entries[k - 1] for k ≤ K, then the fallback rule (absolute k).
/// A Geometric fallback may use p = 1, which freezes the run.
struct Table {
  std::vector<double> entries;
  std::variant<Geometric, Polynomial> fallback = Geometric{};
};

/// How the run tail P(τ ≥ n) behaves as n → ∞.
enum class TailDecay { Exponential, Power, Frozen };

/// Law of the persistence probabilities q_{α^k β}(α), k ≥ 1, of one comb
/// branch. All sums are closed-form.
class TailRule {
 public:
  using Kind = std::variant<Geometric, Polynomial, Table>;

  TailRule() : TailRule(Geometric{}) {}
  TailRule(Geometric g);   // NOLINT(google-explicit-constructor)
  TailRule(Polynomial p);  // NOLINT(google-explicit-constructor)
  TailRule(Table t);       // NOLINT(google-explicit-constructor)

  const Kind& kind() const noexcept { return kind_; }

  /// q_k, the probability to persist after k letters in the same direction.
  double persist(std::size_t k) const;

  /// P(τ ≥ n) = ∏_{k=1}^{n-1} q_k; equals 1 for n ≤ 1.
  double tail(std::size_t n) const;

  /// lim_{n→∞} P(τ ≥ n).
  double tail_limit() const;

  /// True when run lengths are almost surely finite.
  bool vanishes() const { return tail_limit() == 0.0; }

  /// Σ_{m ≥ n} P(τ ≥ m), +∞ when divergent.
  double tail_sum_from(std::size_t n) const;

  /// Σ_{n ≥ 1} P(τ ≥ n) = E[τ].
  double mean() const { return tail_sum_from(1); }

  TailDecay decay() const;
  /// Exponent c of the power-law tail; only meaningful for TailDecay::Power.
  double power_exponent() const;

  bool operator==(const TailRule& other) const;

 private:
  Kind kind_;
  std::vector<double> table_tails_;  // P(τ ≥ n) for n = 1..K+1
};

/// Hurwitz zeta Σ_{m ≥ 0} (m + a)^{-s}, for s > 1 and a > 0.
double hurwitz_zeta(double s, double a);

}  // namespace vlmc
