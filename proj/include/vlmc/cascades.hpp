#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "vlmc/model.hpp"
#include "vlmc/series.hpp"

namespace vlmc {

/// casc(w): product of the transition probabilities that rebuild w letter by
/// letter from its α-lis. Equals 1 when w is its own α-lis.
double cascade(const ProbabilizedTree& model, std::string_view w);

/// Mass w_γ (1 − lim P(τ ≥ n)) of all the ways a comb branch α^k β ends its
/// run by switching to γ. Shared by the Q matrix and the bend kernel so that
/// both produce bit-identical entries.
double comb_switch_mass(const PairRule& rule, std::size_t gamma);

/// Finite contexts c with α-lis(c) = alpha_lis, by length then canonically
/// (explicit trees only).
std::vector<Word> contexts_with_alpha_lis(const ProbabilizedTree& model, std::string_view alpha_lis);

/// κ_{αs} = Σ casc(c) over the contexts c whose α-lis is αs. Combs use closed
/// forms and are flagged analytic; explicit trees give finite sums.
/// Throws InvalidWord when αs is not an α-lis of a context.
CascadeSeriesResult kappa(const ProbabilizedTree& model, std::string_view alpha_lis,
                          const SeriesPolicy& policy = {});

/// Q_{βt,αs} = Σ casc(αc) over the contexts c = s⋯ with α-lis(c) = βt.
CascadeSeriesResult q_entry(const ProbabilizedTree& model, std::string_view row,
                            std::string_view col, const SeriesPolicy& policy = {});

/// True when every cascade term of every comb branch tends to 0, i.e. no run
/// can last forever. Always true on explicit trees.
bool cascade_terms_vanish(const ProbabilizedTree& model);

}  // namespace vlmc
