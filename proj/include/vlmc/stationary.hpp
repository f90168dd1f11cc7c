#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "vlmc/cascades.hpp"

namespace vlmc {

/// Matrix of cascade sums indexed by the α-lis set S in canonical order.
struct QMatrix {
  std::vector<Word> index;
  Eigen::MatrixXd entries;

  /// Position of an α-lis in `index`; throws InvalidWord when absent.
  Eigen::Index position(std::string_view alpha_lis) const;
};

/// Throws Unsupported (non-stable tree, infinite S) or InconclusiveEntry.
QMatrix build_q_matrix(const ProbabilizedTree& model, const SeriesPolicy& policy = {});

/// Stationary probability of a stable model with finite S, represented by
/// its masses π(αsℛ) on S. Cylinders of other words follow from cascades.
class StationaryMeasure {
 public:
  StationaryMeasure(ProbabilizedTree model, std::vector<Word> index, Eigen::VectorXd base,
                    std::vector<double> kappas, double normalization, double residual);

  const ProbabilizedTree& model() const noexcept { return model_; }
  const std::vector<Word>& index() const noexcept { return index_; }
  /// π(αsℛ), in the order of index().
  const Eigen::VectorXd& base() const noexcept { return base_; }
  /// π(αsℛ) of one α-lis; nullopt when αs is not in S.
  std::optional<double> base(std::string_view alpha_lis) const;
  const std::vector<double>& kappas() const noexcept { return kappas_; }
  /// Z = Σ κ_{αs} v_{αs} for the left-fixed vector v with Σ v = 1.
  double normalization() const noexcept { return normalization_; }
  /// ‖vQ − v‖∞ of the solved fixed vector.
  double residual() const noexcept { return residual_; }

 private:
  ProbabilizedTree model_;
  std::vector<Word> index_;
  Eigen::VectorXd base_;
  std::vector<double> kappas_;
  double normalization_;
  double residual_;
};

enum class VerdictKind { UniqueProbability, SigmaFiniteOnly, NoInvariantMeasure, Unsupported };
const char* to_string(VerdictKind kind) noexcept;

struct StationarityVerdict {
  VerdictKind outcome = VerdictKind::Unsupported;
  std::optional<StationaryMeasure> measure;  // set for UniqueProbability only
  std::string reason;
  /// Unsupported only because some series could not be certified.
  bool inconclusive = false;
};

/// Total: every failure is folded into the verdict.
StationarityVerdict stationarity_verdict(const ProbabilizedTree& model,
                                         const SeriesPolicy& policy = {});

/// π(wℛ) = casc(w) π(αsℛ), expanding π(αsℛ) over the contexts extending s
/// when αs is not in S. The empty word has mass 1. Throws InconclusiveSum.
double pi_cylinder(const StationaryMeasure& measure, std::string_view w,
                   const SeriesPolicy& policy = {});

}  // namespace vlmc
