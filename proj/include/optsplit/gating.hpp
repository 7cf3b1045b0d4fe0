#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/LU>

#include "optsplit/mdp.hpp"
#include "optsplit/types.hpp"

namespace optsplit {

/// One option: intra-option policy pi_w and per-state termination
/// probabilities beta_w(s) in [0,1]. Options are available everywhere
/// (the initiation set is all of S).
template <typename Scalar>
struct OptionSpec {
  PolicyMatrix<Scalar> policy;
  Vector<Scalar> termination;
};

/// Policy over options mu(w|s), row-stochastic.
template <typename Scalar>
struct MetaPolicy {
  Matrix<Scalar> probs;

  Index n_states() const { return probs.rows(); }
  Index n_options() const { return probs.cols(); }
};

/// Gating-execution models: marginal policy sigma, continuation matrix
/// P_sharp, termination matrix P_bot, reward model b and transition model
/// F. P_sharp + P_bot = P_sigma; b and F solve
///   (I - gamma P_sharp) b = r_sigma,  (I - gamma P_sharp) F = gamma P_bot.
template <typename Scalar>
struct GatingModels {
  PolicyMatrix<Scalar> sigma;
  Matrix<Scalar> p_sharp;
  Matrix<Scalar> p_bot;
  Vector<Scalar> b;
  Matrix<Scalar> f;
};

namespace detail {

template <typename Scalar>
void check_option_dims(const Mdp<Scalar>& mdp, const std::vector<OptionSpec<Scalar>>& options,
                       const MetaPolicy<Scalar>& mu) {
  if (options.empty()) throw std::invalid_argument("option set is empty");
  if (mu.probs.rows() != mdp.n_states) {
    std::ostringstream os;
    os << "mu has " << mu.probs.rows() << " state rows, expected n_states = " << mdp.n_states;
    throw std::invalid_argument(os.str());
  }
  if (mu.probs.cols() != static_cast<Index>(options.size())) {
    std::ostringstream os;
    os << "mu has " << mu.probs.cols() << " option columns, expected " << options.size();
    throw std::invalid_argument(os.str());
  }
  for (std::size_t w = 0; w < options.size(); ++w) {
    const auto& opt = options[w];
    if (opt.policy.probs.rows() != mdp.n_states || opt.policy.probs.cols() != mdp.n_actions) {
      std::ostringstream os;
      os << "option " << w << " policy is " << opt.policy.probs.rows() << "x"
         << opt.policy.probs.cols() << ", expected " << mdp.n_states << "x" << mdp.n_actions;
      throw std::invalid_argument(os.str());
    }
    if (opt.termination.size() != mdp.n_states) {
      std::ostringstream os;
      os << "option " << w << " termination has " << opt.termination.size()
         << " states, expected " << mdp.n_states;
      throw std::invalid_argument(os.str());
    }
  }
}

// sum_w diag(mu_w) P_{pi_w} diag(weight_w), where weight_w is beta_w for
// the termination part and 1 - beta_w for the continuation part.
template <typename Scalar>
Matrix<Scalar> gated_transition(const Mdp<Scalar>& mdp,
                                const std::vector<OptionSpec<Scalar>>& options,
                                const MetaPolicy<Scalar>& mu, bool at_termination) {
  check_option_dims(mdp, options, mu);
  const Index n = mdp.n_states;
  Matrix<Scalar> out = Matrix<Scalar>::Zero(n, n);
  for (std::size_t w = 0; w < options.size(); ++w) {
    const Matrix<Scalar> chain = induce_chain(mdp, options[w].policy).p_pi;
    const Vector<Scalar> weight =
        at_termination ? options[w].termination
                       : Vector<Scalar>(Vector<Scalar>::Ones(n) - options[w].termination);
    const Matrix<Scalar> scaled = chain * weight.asDiagonal();
    out.noalias() += mu.probs.col(static_cast<Index>(w)).asDiagonal() * scaled;
  }
  return out;
}

// LU of I - gamma * P_sharp. Nonsingular by the M-matrix structure; a
// failed factorization is an internal fault, not a user error.
template <typename Scalar>
Eigen::PartialPivLU<Matrix<Scalar>> factor_continuation(const Mdp<Scalar>& mdp,
                                                        const Matrix<Scalar>& p_sharp) {
  const Index n = mdp.n_states;
  Matrix<Scalar> m = Matrix<Scalar>::Identity(n, n) - mdp.gamma * p_sharp;
  Eigen::PartialPivLU<Matrix<Scalar>> lu(m);
  if (!(lu.rcond() > Scalar(1e-14))) {
    throw std::runtime_error("internal fault: I - gamma*P_sharp is numerically singular");
  }
  return lu;
}

}  // namespace detail

/// sigma(a|s) = sum_w mu(w|s) pi_w(a|s). Row-stochastic by construction.
template <typename Scalar>
PolicyMatrix<Scalar> marginal_policy(const std::vector<OptionSpec<Scalar>>& options,
                                     const MetaPolicy<Scalar>& mu) {
  if (options.empty()) throw std::invalid_argument("option set is empty");
  const Index n = mu.probs.rows();
  const Index n_actions = options.front().policy.probs.cols();
  if (mu.probs.cols() != static_cast<Index>(options.size())) {
    std::ostringstream os;
    os << "mu has " << mu.probs.cols() << " option columns, expected " << options.size();
    throw std::invalid_argument(os.str());
  }
  PolicyMatrix<Scalar> sigma;
  sigma.probs = Matrix<Scalar>::Zero(n, n_actions);
  for (std::size_t w = 0; w < options.size(); ++w) {
    const auto& probs = options[w].policy.probs;
    if (probs.rows() != n || probs.cols() != n_actions) {
      std::ostringstream os;
      os << "option " << w << " policy is " << probs.rows() << "x" << probs.cols()
         << ", expected " << n << "x" << n_actions;
      throw std::invalid_argument(os.str());
    }
    sigma.probs.noalias() += mu.probs.col(static_cast<Index>(w)).asDiagonal() * probs;
  }
  return sigma;
}

/// P_sharp(s,s') = sum_w mu(w|s) sum_a pi_w(a|s) P(s'|s,a) (1 - beta_w(s')).
template <typename Scalar>
Matrix<Scalar> continuation_matrix(const Mdp<Scalar>& mdp,
                                   const std::vector<OptionSpec<Scalar>>& options,
                                   const MetaPolicy<Scalar>& mu) {
  return detail::gated_transition(mdp, options, mu, /*at_termination=*/false);
}

/// P_bot(s,s') = sum_w mu(w|s) sum_a pi_w(a|s) P(s'|s,a) beta_w(s').
template <typename Scalar>
Matrix<Scalar> termination_matrix(const Mdp<Scalar>& mdp,
                                  const std::vector<OptionSpec<Scalar>>& options,
                                  const MetaPolicy<Scalar>& mu) {
  return detail::gated_transition(mdp, options, mu, /*at_termination=*/true);
}

/// Reward model b = (I - gamma P_sharp)^{-1} r_sigma: expected discounted
/// reward accumulated until termination.
template <typename Scalar>
Vector<Scalar> reward_model(const Mdp<Scalar>& mdp, const std::vector<OptionSpec<Scalar>>& options,
                            const MetaPolicy<Scalar>& mu) {
  const auto sigma = marginal_policy(options, mu);
  const auto chain = induce_chain(mdp, sigma);
  const auto lu = detail::factor_continuation(mdp, continuation_matrix(mdp, options, mu));
  return lu.solve(chain.r_pi);
}

/// Transition model F = (I - gamma P_sharp)^{-1} (gamma P_bot): expected
/// discounted state occupancy at termination.
template <typename Scalar>
Matrix<Scalar> transition_model(const Mdp<Scalar>& mdp,
                                const std::vector<OptionSpec<Scalar>>& options,
                                const MetaPolicy<Scalar>& mu) {
  const auto lu = detail::factor_continuation(mdp, continuation_matrix(mdp, options, mu));
  Matrix<Scalar> rhs = mdp.gamma * termination_matrix(mdp, options, mu);
  return lu.solve(rhs);
}

/// Builds sigma, P_sharp, P_bot, b and F from one pass over the inputs.
/// The LU factorization of I - gamma P_sharp is shared between the b and F
/// solves (F alone needs n right-hand sides).
template <typename Scalar>
GatingModels<Scalar> build_gating_models(const Mdp<Scalar>& mdp,
                                         const std::vector<OptionSpec<Scalar>>& options,
                                         const MetaPolicy<Scalar>& mu) {
  detail::check_option_dims(mdp, options, mu);
  GatingModels<Scalar> models;
  models.sigma = marginal_policy(options, mu);
  models.p_sharp = continuation_matrix(mdp, options, mu);
  models.p_bot = termination_matrix(mdp, options, mu);
  const auto chain = induce_chain(mdp, models.sigma);
  const auto lu = detail::factor_continuation(mdp, models.p_sharp);
  models.b = lu.solve(chain.r_pi);
  Matrix<Scalar> rhs = mdp.gamma * models.p_bot;
  models.f = lu.solve(rhs);
  return models;
}

/// beta~ = c * beta for every option, policies and mu untouched. For
/// c in [0,1] the scaled set terminates pointwise no more often than the
/// original, which is exactly the hypothesis of the rate comparison.
template <typename Scalar>
std::vector<OptionSpec<Scalar>> scale_terminations(std::vector<OptionSpec<Scalar>> options,
                                                   Scalar c) {
  for (auto& w : options) w.termination *= c;
  return options;
}

/// Residuals of the defining equations, for diagnostics: how well b and F
/// satisfy their recursions when substituted back, and how far
/// P_sharp + P_bot is from P_sigma.
template <typename Scalar>
struct GatingResiduals {
  Scalar b_recursion;      // ||b - (r_sigma + gamma P_sharp b)||_inf
  Scalar f_recursion;      // max |F - (gamma P_bot + gamma P_sharp F)|
  Scalar exhaustiveness;   // max |P_sharp + P_bot - P_sigma|
};

template <typename Scalar>
GatingResiduals<Scalar> gating_residuals(const Mdp<Scalar>& mdp,
                                         const GatingModels<Scalar>& models) {
  const auto chain = induce_chain(mdp, models.sigma);
  GatingResiduals<Scalar> res;
  res.b_recursion =
      (models.b - (chain.r_pi + mdp.gamma * models.p_sharp * models.b)).template lpNorm<Eigen::Infinity>();
  res.f_recursion =
      (models.f - (mdp.gamma * models.p_bot + mdp.gamma * models.p_sharp * models.f))
          .cwiseAbs()
          .maxCoeff();
  res.exhaustiveness = (models.p_sharp + models.p_bot - chain.p_pi).cwiseAbs().maxCoeff();
  return res;
}

using OptionSpecd = OptionSpec<double>;
using MetaPolicyd = MetaPolicy<double>;
using GatingModelsd = GatingModels<double>;

}  // namespace optsplit
