#pragma once

#include <Eigen/Dense>

namespace optsplit {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Index = Eigen::Index;

// Probability rows must sum to one within this bound; inputs beyond it are
// rejected, never renormalized.
inline constexpr double kRowSumTol = 1e-12;

// Entrywise slack when certifying nonnegativity of M^{-1} and N.
inline constexpr double kNonnegTol = 1e-10;

}  // namespace optsplit
