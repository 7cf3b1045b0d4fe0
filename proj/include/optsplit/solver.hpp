#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <Eigen/LU>

#include "optsplit/gating.hpp"
#include "optsplit/mdp.hpp"
#include "optsplit/splitting.hpp"
#include "optsplit/types.hpp"

namespace optsplit {

template <typename Scalar>
struct SolveConfig {
  Scalar tol = Scalar(1e-10);   // sup-norm residual threshold
  long max_iters = 100000;
  Vector<Scalar> v0;            // empty means start from zero
  bool record_iterates = false;
};

/// Outcome of a successive-approximation solve. residual_history[k] is
/// ||A v_k - r||_inf with v_0 the start vector; empirical_rate is the
/// geometric mean of the successive residual ratios over the final 20
/// iterations (0 when the history is too short to measure).
template <typename Scalar>
struct SolveReport {
  Vector<Scalar> v;
  long iterations = 0;
  std::vector<Scalar> residual_history;
  Scalar empirical_rate = Scalar(0);
  bool converged = false;
  bool diverged = false;
  Scalar rhs_norm = Scalar(0);           // ||r||_inf, noise floor for rate estimates
  std::vector<Vector<Scalar>> iterates;  // filled only when cfg.record_iterates
  double factor_seconds = 0.0;           // wall time of the LU factorization of M
  double iter_seconds = 0.0;             // wall time of the iteration loop
};

namespace detail {

// Geometric mean of the trailing residual ratios, restricted to the prefix
// of the history that sits above the round-off noise floor. `window` caps
// the number of ratios used.
template <typename Scalar>
Scalar trailing_rate(const std::vector<Scalar>& history, Scalar rhs_norm, std::size_t window) {
  const Scalar floor = Scalar(100) * std::numeric_limits<Scalar>::epsilon() * rhs_norm;
  std::size_t usable = 0;
  while (usable < history.size() && history[usable] > floor) ++usable;
  if (usable < 2) return Scalar(0);
  const std::size_t last = usable - 1;
  const std::size_t span = std::min(window, last);
  return std::pow(history[last] / history[last - span], Scalar(1) / Scalar(span));
}

}  // namespace detail

/// v_sigma = (I - gamma P_sigma)^{-1} r_sigma by dense LU: the ground
/// truth all iterative routes are checked against.
template <typename Scalar>
Vector<Scalar> direct_solve(const Mdp<Scalar>& mdp, const PolicyMatrix<Scalar>& policy) {
  const auto chain = induce_chain(mdp, policy);
  const Index n = mdp.n_states;
  Matrix<Scalar> a = Matrix<Scalar>::Identity(n, n) - mdp.gamma * chain.p_pi;
  Eigen::PartialPivLU<Matrix<Scalar>> lu(a);
  if (!(lu.rcond() > Scalar(1e-14))) {
    throw std::runtime_error("internal fault: I - gamma*P_sigma is numerically singular");
  }
  return lu.solve(chain.r_pi);
}

/// Runs v_{k+1} = M^{-1}(N v_k + r) with the LU of M factored once and
/// reused every sweep. Stops when ||A v_k - r||_inf <= cfg.tol, when
/// cfg.max_iters is exhausted (converged = false), or when the residual
/// exceeds 1e12 times its initial value (diverged = true).
template <typename Scalar>
SolveReport<Scalar> iterate_splitting(const Splitting<Scalar>& s, const Vector<Scalar>& r,
                                      const SolveConfig<Scalar>& cfg = {}) {
  if (!(cfg.tol > Scalar(0))) throw std::invalid_argument("tol must be > 0");
  if (cfg.max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  const Index n = s.size();
  if (r.size() != n) {
    std::ostringstream os;
    os << "right-hand side has " << r.size() << " entries, expected " << n;
    throw std::invalid_argument(os.str());
  }
  Vector<Scalar> v;
  if (cfg.v0.size() == 0) {
    v = Vector<Scalar>::Zero(n);
  } else if (cfg.v0.size() == n) {
    v = cfg.v0;
  } else {
    std::ostringstream os;
    os << "v0 has " << cfg.v0.size() << " entries, expected " << n;
    throw std::invalid_argument(os.str());
  }

  using Clock = std::chrono::steady_clock;
  SolveReport<Scalar> report;
  report.rhs_norm = r.size() > 0 ? r.template lpNorm<Eigen::Infinity>() : Scalar(0);

  const auto factor_start = Clock::now();
  const auto lu = detail::factor_m(s);
  report.factor_seconds = std::chrono::duration<double>(Clock::now() - factor_start).count();

  Scalar residual = (s.a * v - r).template lpNorm<Eigen::Infinity>();
  report.residual_history.push_back(residual);
  if (cfg.record_iterates) report.iterates.push_back(v);
  const Scalar initial_residual = residual;
  report.converged = residual <= cfg.tol;

  const auto loop_start = Clock::now();
  while (!report.converged && report.iterations < cfg.max_iters) {
    const Vector<Scalar> rhs = s.n * v + r;
    v = lu.solve(rhs);
    ++report.iterations;
    residual = (s.a * v - r).template lpNorm<Eigen::Infinity>();
    report.residual_history.push_back(residual);
    if (cfg.record_iterates) report.iterates.push_back(v);
    if (residual <= cfg.tol) {
      report.converged = true;
      break;
    }
    if (residual > Scalar(1e12) * initial_residual) {
      report.diverged = true;
      break;
    }
  }
  report.iter_seconds = std::chrono::duration<double>(Clock::now() - loop_start).count();
  report.v = std::move(v);
  report.empirical_rate = detail::trailing_rate(report.residual_history, report.rhs_norm, 20);
  return report;
}

/// One application of the generalized Bellman operator, L v = b + F v.
template <typename Scalar>
Vector<Scalar> apply_generalized_bellman(const GatingModels<Scalar>& models,
                                         const Vector<Scalar>& v) {
  if (v.size() != models.f.rows()) {
    std::ostringstream os;
    os << "v has " << v.size() << " entries, expected " << models.f.rows();
    throw std::invalid_argument(os.str());
  }
  return models.b + models.f * v;
}

/// The same operator in residual-correction form,
/// v + (I - gamma P_sharp)^{-1} (r_sigma - (I - gamma P_sigma) v);
/// algebraically identical to apply_generalized_bellman.
template <typename Scalar>
Vector<Scalar> richardson_step(const GatingModels<Scalar>& models, const Mdp<Scalar>& mdp,
                               const Vector<Scalar>& v) {
  if (v.size() != mdp.n_states) {
    std::ostringstream os;
    os << "v has " << v.size() << " entries, expected " << mdp.n_states;
    throw std::invalid_argument(os.str());
  }
  const auto chain = induce_chain(mdp, models.sigma);
  const Index n = mdp.n_states;
  Matrix<Scalar> a = Matrix<Scalar>::Identity(n, n) - mdp.gamma * chain.p_pi;
  const auto lu = detail::factor_continuation(mdp, models.p_sharp);
  return v + lu.solve(Vector<Scalar>(chain.r_pi - a * v));
}

/// Geometric mean of the last 20 successive residual ratios. Requires at
/// least 25 residuals above the round-off noise floor
/// (100 * machine epsilon * ||r||); approaches rho(M^{-1}N) as the
/// iteration count grows.
template <typename Scalar>
Scalar estimate_rate(const SolveReport<Scalar>& report) {
  const Scalar floor =
      Scalar(100) * std::numeric_limits<Scalar>::epsilon() * report.rhs_norm;
  std::size_t usable = 0;
  while (usable < report.residual_history.size() && report.residual_history[usable] > floor) {
    ++usable;
  }
  if (usable < 25) throw std::runtime_error("insufficient history");
  const std::size_t last = usable - 1;
  return std::pow(report.residual_history[last] / report.residual_history[last - 20],
                  Scalar(1) / Scalar(20));
}

using SolveConfigd = SolveConfig<double>;
using SolveReportd = SolveReport<double>;

}  // namespace optsplit
