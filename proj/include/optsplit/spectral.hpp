#pragma once

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "optsplit/types.hpp"

namespace optsplit {

// Largest size solved by the dense eigensolver; above it spectral_radius
// switches to power iteration.
inline constexpr Index kDenseEigCutoff = 256;

// Power iteration stops once successive Rayleigh-quotient estimates differ
// by less than this, or after 100*n iterations.
inline constexpr double kPowerIterTol = 1e-10;

namespace detail {

template <typename Derived>
void require_square_finite(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "spectral_radius requires a square matrix, got " << m.rows() << "x" << m.cols();
    throw std::invalid_argument(os.str());
  }
  if (!m.allFinite()) throw std::invalid_argument("spectral_radius requires finite entries");
}

}  // namespace detail

/// max |lambda_i| via the dense (QR) eigensolver.
template <typename Derived>
typename Derived::Scalar spectral_radius_dense(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_square_finite(m);
  if (m.rows() == 0) return Scalar(0);
  Eigen::EigenSolver<Matrix<Scalar>> solver(m.derived(), /*computeEigenvectors=*/false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

/// Power iteration on the entrywise absolute values |m|, started from a
/// random positive vector. Equals rho(m) whenever m is entrywise
/// nonnegative (the case throughout this library: iteration matrices of
/// regular splittings); in general it returns rho(|m|) >= rho(m).
template <typename Derived>
typename Derived::Scalar spectral_radius_power(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  detail::require_square_finite(m);
  const Index n = m.rows();
  if (n == 0) return Scalar(0);

  const Matrix<Scalar> b = m.cwiseAbs();

  // Fixed seed: the estimate must be reproducible run to run.
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unit(0.5, 1.5);
  Vector<Scalar> x(n);
  for (Index i = 0; i < n; ++i) x[i] = Scalar(unit(rng));
  x /= x.norm();

  Scalar estimate = Scalar(0);
  Scalar previous = std::numeric_limits<Scalar>::quiet_NaN();
  const Index max_iters = 100 * n;
  for (Index k = 0; k < max_iters; ++k) {
    const Vector<Scalar> y = b * x;
    estimate = x.dot(y);
    if (k > 0 && std::abs(estimate - previous) < Scalar(kPowerIterTol)) break;
    const Scalar norm = y.norm();
    if (norm == Scalar(0)) return Scalar(0);  // nilpotent direction exhausted
    x = y / norm;
    previous = estimate;
  }
  return estimate;
}

/// rho(m) = max |lambda_i|. Dense eigensolver up to kDenseEigCutoff,
/// power iteration beyond.
template <typename Derived>
typename Derived::Scalar spectral_radius(const Eigen::MatrixBase<Derived>& m) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << "spectral_radius requires a square matrix, got " << m.rows() << "x" << m.cols();
    throw std::invalid_argument(os.str());
  }
  return m.rows() <= kDenseEigCutoff ? spectral_radius_dense(m) : spectral_radius_power(m);
}

}  // namespace optsplit
