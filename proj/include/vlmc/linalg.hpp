#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "vlmc/errors.hpp"

namespace vlmc {

inline constexpr double kStochasticTolerance = 1e-9;
inline constexpr double kFixedVectorResidual = 1e-12;
inline constexpr Eigen::Index kDirectSolveLimit = 64;

/// First row that is not a probability vector within `tol`, if any.
template <typename Derived>
std::optional<Eigen::Index> non_stochastic_row(const Eigen::MatrixBase<Derived>& m,
                                               typename Derived::Scalar tol = kStochasticTolerance) {
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    if (!m.row(i).allFinite() || (m.row(i).array() < 0).any() ||
        std::abs(m.row(i).sum() - 1) > tol) {
      return i;
    }
  }
  return std::nullopt;
}

/// States reachable from state 0 along positive entries, or along their
/// reverses when `reverse` is set.
template <typename Derived>
std::vector<bool> reachable_from_first(const Eigen::MatrixBase<Derived>& m, bool reverse = false) {
  const Eigen::Index n = m.rows();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  if (n == 0) return seen;
  std::vector<Eigen::Index> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const Eigen::Index i = stack.back();
    stack.pop_back();
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto entry = reverse ? m(j, i) : m(i, j);
      if (entry > 0 && !seen[static_cast<std::size_t>(j)]) {
        seen[static_cast<std::size_t>(j)] = true;
        stack.push_back(j);
      }
    }
  }
  return seen;
}

/// Indices cut off from state 0 in the support graph (one direction or the
/// other); empty when the matrix is irreducible.
template <typename Derived>
std::vector<Eigen::Index> reducible_block(const Eigen::MatrixBase<Derived>& m) {
  std::vector<Eigen::Index> block;
  for (bool reverse : {false, true}) {
    const auto seen = reachable_from_first(m, reverse);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      if (!seen[static_cast<std::size_t>(i)]) block.push_back(i);
    }
    if (!block.empty()) return block;
  }
  return block;
}

template <typename DerivedV, typename DerivedM>
typename DerivedM::Scalar fixed_vector_residual(const Eigen::MatrixBase<DerivedV>& v,
                                                const Eigen::MatrixBase<DerivedM>& m) {
  return (v.transpose() * m - v.transpose()).cwiseAbs().maxCoeff();
}

/// Unique probability vector v with v M = v, for a row-stochastic
/// irreducible M. Direct LU solve up to 64 states, lazy power iteration
/// above. Throws NotStochastic, Reducible or NoConvergence.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> solve_left_fixed(
    const Eigen::MatrixBase<Derived>& m, std::size_t max_iterations = 1'000'000) {
  using Scalar = typename Derived::Scalar;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw Error(ErrorCode::NotStochastic, "matrix is not square and non-empty");
  }
  if (const auto row = non_stochastic_row(m)) {
    throw Error(ErrorCode::NotStochastic, "row " + std::to_string(*row) + " sums to " +
                                              std::to_string(static_cast<double>(m.row(*row).sum())),
                std::to_string(*row));
  }
  if (const auto block = reducible_block(m); !block.empty()) {
    std::string witness;
    for (auto i : block) witness += (witness.empty() ? "" : ",") + std::to_string(i);
    throw Error(ErrorCode::Reducible, "states {" + witness + "} are not strongly connected to state 0",
                witness);
  }
  const Eigen::Index n = m.rows();
  Vector v;
  if (n <= kDirectSolveLimit) {
    Matrix a = m.transpose() - Matrix::Identity(n, n);
    a.row(n - 1).setOnes();
    Vector rhs = Vector::Zero(n);
    rhs(n - 1) = 1;
    v = a.fullPivLu().solve(rhs);
    v = v.cwiseMax(Scalar(0));
    v /= v.sum();
  } else {
    v = Vector::Constant(n, Scalar(1) / Scalar(n));
    std::size_t it = 0;
    for (; it < max_iterations; ++it) {
      Vector next = Scalar(0.5) * (v + (v.transpose() * m).transpose());
      next /= next.sum();
      const Scalar change = (next - v).cwiseAbs().maxCoeff();
      v.swap(next);
      if (change < Scalar(kFixedVectorResidual) / 10) break;
    }
    if (it == max_iterations) {
      throw Error(ErrorCode::NoConvergence,
                  "power iteration did not settle in " + std::to_string(max_iterations) + " iterations",
                  std::to_string(max_iterations));
    }
  }
  const Scalar residual = fixed_vector_residual(v, m);
  if (!(residual <= Scalar(kFixedVectorResidual))) {
    throw Error(ErrorCode::NoConvergence,
                "left-fixed vector residual " + std::to_string(static_cast<double>(residual)) +
                    " exceeds 1e-12");
  }
  return v;
}

}  // namespace vlmc
