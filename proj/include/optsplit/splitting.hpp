#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/LU>

#include "optsplit/gating.hpp"
#include "optsplit/mdp.hpp"
#include "optsplit/spectral.hpp"
#include "optsplit/types.hpp"

namespace optsplit {

/// Matrix splitting A = M - N of the policy-evaluation system
/// (I - gamma P_sigma) v = r_sigma. N is stored as m - a so the splitting
/// identity holds exactly in floating point; for options-induced
/// splittings it equals gamma P_bot to roundoff.
template <typename Scalar>
struct Splitting {
  Matrix<Scalar> a;
  Matrix<Scalar> m;
  Matrix<Scalar> n;
  std::string label;

  Index size() const { return a.rows(); }
};

/// Evidence that a splitting is regular: M^{-1} >= 0 and N >= 0 entrywise
/// (within kNonnegTol), plus the iteration radius rho(M^{-1} N).
template <typename Scalar>
struct RegularityReport {
  bool m_inverse_nonneg = false;
  Scalar m_inverse_min = Scalar(0);  // most negative entry of M^{-1}
  bool n_nonneg = false;
  Scalar n_min = Scalar(0);          // most negative entry of N
  Scalar rho = Scalar(0);
  bool is_regular = false;
};

/// Output of compare_rates: the two radii, the worst violation of the
/// entrywise hypothesis N_fine <= N_coarse, and whether the conclusion
/// rho_fine <= rho_coarse holds within 1e-9.
template <typename Scalar>
struct RateComparison {
  Scalar rho_coarse = Scalar(0);
  Scalar rho_fine = Scalar(0);
  Scalar max_n_excess = Scalar(0);  // max entry of N_fine - N_coarse
  bool ordered = false;
};

template <typename Scalar>
struct RateBound {
  Scalar rho = Scalar(0);
  Scalar upper_bound = Scalar(0);  // ||I - M^{-1}A||_inf
};

enum class ClassicMethod { Jacobi, GaussSeidel, Sor, Richardson };

namespace detail {

template <typename Scalar>
Eigen::PartialPivLU<Matrix<Scalar>> factor_m(const Splitting<Scalar>& s) {
  Eigen::PartialPivLU<Matrix<Scalar>> lu(s.m);
  if (!(lu.rcond() > Scalar(1e-14))) {
    throw std::runtime_error("singular M in splitting '" + s.label + "'");
  }
  return lu;
}

}  // namespace detail

/// The splitting induced by a set of options under gating execution:
/// A = I - gamma P_sigma, M = I - gamma P_sharp, N = gamma P_bot.
template <typename Scalar>
Splitting<Scalar> splitting_from_options(const GatingModels<Scalar>& models,
                                         const Mdp<Scalar>& mdp) {
  const Index n = mdp.n_states;
  const auto chain = induce_chain(mdp, models.sigma);
  Splitting<Scalar> s;
  s.a = Matrix<Scalar>::Identity(n, n) - mdp.gamma * chain.p_pi;
  s.m = Matrix<Scalar>::Identity(n, n) - mdp.gamma * models.p_sharp;
  s.n = s.m - s.a;
  s.label = "options";
  return s;
}

/// Classic splittings of A = I - gamma P_sigma. `param` is omega for SOR
/// (0 < omega < 2) and tau for Richardson (tau > 0); ignored otherwise.
template <typename Scalar>
Splitting<Scalar> classic_splitting(const Mdp<Scalar>& mdp, const PolicyMatrix<Scalar>& policy,
                                    ClassicMethod method, Scalar param = Scalar(1)) {
  const Index n = mdp.n_states;
  const auto chain = induce_chain(mdp, policy);
  Splitting<Scalar> s;
  s.a = Matrix<Scalar>::Identity(n, n) - mdp.gamma * chain.p_pi;

  switch (method) {
    case ClassicMethod::Jacobi:
      s.m = s.a.diagonal().asDiagonal();
      s.label = "jacobi";
      break;
    case ClassicMethod::GaussSeidel:
      s.m = s.a.template triangularView<Eigen::Lower>();
      s.label = "gauss-seidel";
      break;
    case ClassicMethod::Sor: {
      if (!(param > Scalar(0) && param < Scalar(2))) {
        std::ostringstream os;
        os << "sor requires 0 < omega < 2, got " << param;
        throw std::invalid_argument(os.str());
      }
      s.m = s.a.template triangularView<Eigen::StrictlyLower>();
      s.m += (s.a.diagonal() / param).asDiagonal();
      std::ostringstream os;
      os << "sor(" << param << ")";
      s.label = os.str();
      break;
    }
    case ClassicMethod::Richardson: {
      if (!(param > Scalar(0))) {
        std::ostringstream os;
        os << "richardson requires tau > 0, got " << param;
        throw std::invalid_argument(os.str());
      }
      s.m = Matrix<Scalar>::Identity(n, n) * (Scalar(1) / param);
      std::ostringstream os;
      os << "richardson(" << param << ")";
      s.label = os.str();
      break;
    }
  }
  s.n = s.m - s.a;
  return s;
}

/// Certifies regularity by explicitly forming M^{-1} and testing it, and
/// N, entrywise against -kNonnegTol; also computes rho(M^{-1} N).
template <typename Scalar>
RegularityReport<Scalar> check_regular(const Splitting<Scalar>& s) {
  const auto lu = detail::factor_m(s);
  const Matrix<Scalar> m_inverse = lu.inverse();

  RegularityReport<Scalar> report;
  report.m_inverse_min = m_inverse.minCoeff();
  report.n_min = s.n.size() > 0 ? s.n.minCoeff() : Scalar(0);
  report.m_inverse_nonneg = report.m_inverse_min >= Scalar(-kNonnegTol);
  report.n_nonneg = report.n_min >= Scalar(-kNonnegTol);
  const Matrix<Scalar> iteration = lu.solve(s.n);
  report.rho = spectral_radius(iteration);
  report.is_regular = report.m_inverse_nonneg && report.n_nonneg;
  return report;
}

/// The preconditioned system (M^{-1} A, M^{-1} r); same solution set as
/// A v = r.
template <typename Scalar>
std::pair<Matrix<Scalar>, Vector<Scalar>> preconditioned_system(const Splitting<Scalar>& s,
                                                                const Vector<Scalar>& r) {
  if (r.size() != s.a.rows()) {
    std::ostringstream os;
    os << "right-hand side has " << r.size() << " entries, expected " << s.a.rows();
    throw std::invalid_argument(os.str());
  }
  const auto lu = detail::factor_m(s);
  return {lu.solve(s.a), lu.solve(r)};
}

/// rho(M^{-1} N) together with the norm bound ||I - M^{-1} A||_inf that
/// dominates it.
template <typename Scalar>
RateBound<Scalar> rate_bound(const Splitting<Scalar>& s) {
  const auto lu = detail::factor_m(s);
  const Index n = s.size();
  Matrix<Scalar> residual_op = Matrix<Scalar>::Identity(n, n) - lu.solve(s.a);
  RateBound<Scalar> out;
  out.rho = spectral_radius(Matrix<Scalar>(lu.solve(s.n)));
  out.upper_bound = residual_op.cwiseAbs().rowwise().sum().maxCoeff();
  return out;
}

/// Compares the asymptotic rates of two regular splittings of the same A.
/// The entrywise hypothesis N_fine <= N_coarse (the comparison-theorem
/// premise; in the options case it follows from beta_fine <= beta_coarse
/// pointwise) is enforced, not assumed.
template <typename Scalar>
RateComparison<Scalar> compare_rates(const Splitting<Scalar>& coarse,
                                     const Splitting<Scalar>& fine) {
  if (coarse.a.rows() != fine.a.rows() || coarse.a.cols() != fine.a.cols() ||
      (coarse.a - fine.a).cwiseAbs().maxCoeff() > Scalar(kNonnegTol)) {
    throw std::invalid_argument("splittings solve different systems");
  }
  RateComparison<Scalar> cmp;
  cmp.max_n_excess = (fine.n - coarse.n).maxCoeff();
  if (cmp.max_n_excess > Scalar(kNonnegTol)) {
    std::ostringstream os;
    os << "comparison theorem hypothesis not met: fine N exceeds coarse N by "
       << cmp.max_n_excess;
    throw std::invalid_argument(os.str());
  }
  cmp.rho_coarse = check_regular(coarse).rho;
  cmp.rho_fine = check_regular(fine).rho;
  cmp.ordered = cmp.rho_fine <= cmp.rho_coarse + Scalar(1e-9);
  return cmp;
}

using Splittingd = Splitting<double>;
using RegularityReportd = RegularityReport<double>;

}  // namespace optsplit
