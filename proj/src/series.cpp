#include "vlmc/series.hpp"

#include <cmath>

#include "vlmc/errors.hpp"

namespace vlmc {

void SeriesPolicy::validate() const {
  if (max_terms < 1) throw Error(ErrorCode::InvalidPolicy, "max_terms must be >= 1");
  if (!(abs_tol > 0.0)) throw Error(ErrorCode::InvalidPolicy, "abs_tol must be > 0");
  if (!(divergence_threshold > 0.0)) {
    throw Error(ErrorCode::InvalidPolicy, "divergence_threshold must be > 0");
  }
}

const char* to_string(SeriesStatus status) noexcept {
  switch (status) {
    case SeriesStatus::Converged: return "converged";
    case SeriesStatus::Diverges: return "diverges";
    case SeriesStatus::Inconclusive: return "inconclusive";
  }
  return "?";
}

CascadeSeriesResult CascadeSeriesResult::closed_form(double value, std::string note) {
  CascadeSeriesResult r;
  r.status = SeriesStatus::Converged;
  r.value = value;
  r.analytic = true;
  r.note = std::move(note);
  return r;
}

CascadeSeriesResult CascadeSeriesResult::finite_sum(double value, std::size_t terms) {
  CascadeSeriesResult r;
  r.status = SeriesStatus::Converged;
  r.value = value;
  r.terms_used = terms;
  r.analytic = true;
  r.note = "finite sum";
  return r;
}

CascadeSeriesResult CascadeSeriesResult::divergent(std::string note) {
  CascadeSeriesResult r;
  r.status = SeriesStatus::Diverges;
  r.value = kInfinity;
  r.analytic = true;
  r.note = std::move(note);
  return r;
}

CascadeSeriesResult sum_with_certificate(const std::function<double(std::size_t)>& term,
                                         const std::function<double(std::size_t)>& remainder_after,
                                         const SeriesPolicy& policy) {
  policy.validate();
  CascadeSeriesResult r;
  double partial = 0.0;
  double compensation = 0.0;
  for (std::size_t n = 1; n <= policy.max_terms; ++n) {
    const double t = term(n);
    // Kahan summation keeps long partial sums honest at the 1e-12 level.
    const double y = t - compensation;
    const double s = partial + y;
    compensation = (s - partial) - y;
    partial = s;
    r.last_term = t;
    r.terms_used = n;
    if (t < policy.abs_tol || (n & 1023u) == 0) {
      const double rest = remainder_after(n);
      if (std::isfinite(rest) && rest < policy.abs_tol && t < policy.abs_tol) {
        r.status = SeriesStatus::Converged;
        r.value = partial;
        r.remainder_bound = rest;
        r.note = "partial sum with certified remainder";
        return r;
      }
    }
  }
  r.status = SeriesStatus::Inconclusive;
  r.value = partial;
  r.note = partial > policy.divergence_threshold ? "partial sums exceed divergence threshold"
                                                 : "no remainder certificate within max_terms";
  return r;
}

}  // namespace vlmc
