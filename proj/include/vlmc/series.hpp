#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <string>

namespace vlmc {

struct SeriesPolicy {
  std::size_t max_terms = 1'000'000;
  double abs_tol = 1e-12;
  double divergence_threshold = 1e9;

  /// Throws InvalidPolicy.
  void validate() const;
};

enum class SeriesStatus { Converged, Diverges, Inconclusive };

const char* to_string(SeriesStatus status) noexcept;

/// Outcome of summing a nonnegative series. `value` is the sum when
/// Converged, +∞ when Diverges and the partial sum when Inconclusive.
/// Converged is only ever produced by a closed form, a finite sum, or a
/// partial sum whose remainder is bounded below abs_tol; Diverges only by an
/// analytic argument.
struct CascadeSeriesResult {
  SeriesStatus status = SeriesStatus::Inconclusive;
  double value = 0.0;
  double last_term = 0.0;
  std::size_t terms_used = 0;
  bool analytic = false;
  /// Bound (or, for comparison-certified power tails, asymptotic estimate)
  /// on the part of the series not included in `value`.
  double remainder_bound = 0.0;
  std::string note;

  bool converged() const noexcept { return status == SeriesStatus::Converged; }
  bool diverges() const noexcept { return status == SeriesStatus::Diverges; }
  bool inconclusive() const noexcept { return status == SeriesStatus::Inconclusive; }

  static CascadeSeriesResult closed_form(double value, std::string note = {});
  static CascadeSeriesResult finite_sum(double value, std::size_t terms);
  static CascadeSeriesResult divergent(std::string note);
};

/// Sums term(1) + term(2) + ... until `remainder_after(N)` certifies that
/// the rest is below policy.abs_tol. `remainder_after` returns a rigorous
/// upper bound on Σ_{n > N} term(n), or NaN when it has none; without a
/// certificate the result is Inconclusive, never Converged.
CascadeSeriesResult sum_with_certificate(const std::function<double(std::size_t)>& term,
                                         const std::function<double(std::size_t)>& remainder_after,
                                         const SeriesPolicy& policy);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace vlmc
