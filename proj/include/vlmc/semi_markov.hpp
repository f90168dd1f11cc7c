#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vlmc/model.hpp"
#include "vlmc/process.hpp"
#include "vlmc/prw1d.hpp"
#include "vlmc/prw2d.hpp"
#include "vlmc/series.hpp"

namespace vlmc {

/// p_{α,β}(k) = P(τ^α = k): k − 1 persistences then the switch to β.
double kernel_dim1(const DoubleCombModel& model, Letter alpha, Letter beta, std::size_t k);

/// p_{βα,αγ}(k) for walk-order bends; 0 for non-chained pairs or k = 0.
double kernel_dim2(const QuadCombModel& model, std::string_view from, std::string_view to,
                   std::size_t k);

/// Σ casc(βc) over the contexts c = t⋯ with α-lis(c) = αs and
/// |c| = |αs| + k − 1, for source αs and target βt in S. Stable trees only.
double kernel_alpha_lis(const ProbabilizedTree& model, std::string_view source,
                        std::string_view target, std::size_t k);

/// E[T | J = αs] = κ_{αs}.
CascadeSeriesResult expected_sojourn(const ProbabilizedTree& model, std::string_view alpha_lis,
                                     const SeriesPolicy& policy = {});

/// Markov renewal path: states J_0..J_m, sojourns T_0 = 0, T_n = B_n − B_{n-1},
/// and jump times B_0 = 0 < B_1 < ... .
struct MrcPath {
  std::vector<Word> states;
  std::vector<std::size_t> sojourns;
  std::vector<std::size_t> jumps;

  /// Z_j = J_n for B_n ≤ j < B_{n+1}, for 0 ≤ j ≤ `last_step`.
  std::vector<Word> semi_markov(std::size_t last_step) const;
};

/// Jump at step k when the context does not grow, |C_k| ≤ |C_{k−1}|, and
/// J_n = α-lis(C_{B_n}).
MrcPath extract_mrc_letters(const LetterTrace& trace, const ContextTree& tree);
/// J_n = X_{B_{n−1}} X_{B_n} as walk-order bends, starting from u d.
MrcPath extract_mrc_bends(const Walk1DTrace& trace);
MrcPath extract_mrc_bends(const Walk2DTrace& trace);

struct DiagramReport {
  bool consistent = true;
  std::size_t jumps_compared = 0;
  std::optional<std::size_t> first_mismatch;
  std::string detail;
};

/// Checks J^V_n = reverse(J^W_n), equal sojourns and Z^V = reverse(Z^W) up
/// to `last_step`.
DiagramReport check_diagram(const MrcPath& letters_view, const MrcPath& walk_view,
                            std::size_t last_step);

/// Semi-Markov kernel on finitely many states with sojourns 1..K:
/// p[a][b][k − 1] = p_{a,b}(k).
struct MrcKernel {
  std::vector<Word> states;
  std::vector<std::vector<std::vector<double>>> p;

  /// Throws InvalidModel unless every row is a probability law within `tol`.
  void validate(double tol = 1e-9) const;
  std::size_t index(std::string_view state) const;
};

/// Kernel of the α-lis chain of an explicit stable tree (finite sojourns).
MrcKernel alpha_lis_kernel(const ProbabilizedTree& model);

/// Draws `jumps` transitions from `initial`; one uniform per jump,
/// cumulative over targets then sojourns.
MrcPath simulate_semi_markov(const MrcKernel& kernel, std::string_view initial, std::size_t jumps,
                             std::uint64_t seed, std::uint64_t stream = 0);

struct KernelEntry {
  Word target;
  std::size_t k = 0;
  double probability = 0.0;
};

struct KernelSlice {
  Word source;
  std::size_t k_max = 0;
  std::vector<KernelEntry> entries;  // targets canonical, then k
  /// Mass of all sojourns k > k_max, from the tail rule or by exact
  /// enumeration on explicit trees.
  double remainder = 0.0;
};

KernelSlice tabulate_kernel(const ProbabilizedTree& model, std::string_view source,
                            std::size_t k_max);

/// Columns: source,target,k,probability; the last row has target "*",
/// k ">K" and the remainder mass.
void write_kernel_csv(std::ostream& out, const KernelSlice& slice);

}  // namespace vlmc
