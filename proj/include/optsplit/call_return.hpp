#pragma once

#include <Eigen/LU>

#include "optsplit/gating.hpp"
#include "optsplit/mdp.hpp"
#include "optsplit/splitting.hpp"
#include "optsplit/types.hpp"

namespace optsplit {

/// Per-option models under call-and-return execution. Termination is
/// evaluated at the successor state in both P_{w,sharp} and P_{w,bot}, so
/// P_{w,sharp} + P_{w,bot} = P_{pi_w}.
template <typename Scalar>
struct OptionModels {
  Matrix<Scalar> p_w_sharp;
  Matrix<Scalar> p_w_bot;
  Vector<Scalar> b_w;
  Matrix<Scalar> f_w;
  Vector<Scalar> r_w;  // r_w(s) = sum_a pi_w(a|s) r(s,a)
};

namespace detail {

template <typename Scalar>
void check_option_dims(const Mdp<Scalar>& mdp, const OptionSpec<Scalar>& w) {
  if (w.policy.probs.rows() != mdp.n_states || w.policy.probs.cols() != mdp.n_actions) {
    std::ostringstream os;
    os << "option policy is " << w.policy.probs.rows() << "x" << w.policy.probs.cols()
       << ", expected " << mdp.n_states << "x" << mdp.n_actions;
    throw std::invalid_argument(os.str());
  }
  if (w.termination.size() != mdp.n_states) {
    std::ostringstream os;
    os << "option termination has " << w.termination.size() << " states, expected "
       << mdp.n_states;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace detail

/// All call-and-return models of one option, with the LU of
/// I - gamma P_{w,sharp} shared between the b_w and F_w solves.
template <typename Scalar>
OptionModels<Scalar> option_models(const Mdp<Scalar>& mdp, const OptionSpec<Scalar>& w) {
  detail::check_option_dims(mdp, w);
  const Index n = mdp.n_states;
  const auto chain = induce_chain(mdp, w.policy);

  OptionModels<Scalar> models;
  models.r_w = chain.r_pi;
  const Vector<Scalar> keep_going = Vector<Scalar>::Ones(n) - w.termination;
  models.p_w_sharp = chain.p_pi * keep_going.asDiagonal();
  models.p_w_bot = chain.p_pi * w.termination.asDiagonal();

  const auto lu = detail::factor_continuation(mdp, models.p_w_sharp);
  models.b_w = lu.solve(models.r_w);
  Matrix<Scalar> rhs = mdp.gamma * models.p_w_bot;
  models.f_w = lu.solve(rhs);
  return models;
}

/// b_w = (I - gamma P_{w,sharp})^{-1} r_w.
template <typename Scalar>
Vector<Scalar> option_reward_model(const Mdp<Scalar>& mdp, const OptionSpec<Scalar>& w) {
  return option_models(mdp, w).b_w;
}

/// F_w = (I - gamma P_{w,sharp})^{-1} (gamma P_{w,bot}).
template <typename Scalar>
Matrix<Scalar> option_transition_model(const Mdp<Scalar>& mdp, const OptionSpec<Scalar>& w) {
  return option_models(mdp, w).f_w;
}

/// The splitting a single option induces on its own evaluation problem:
/// A = I - gamma P_{pi_w}, M = I - gamma P_{w,sharp}, N = gamma P_{w,bot}.
template <typename Scalar>
Splitting<Scalar> splitting_identity(const Mdp<Scalar>& mdp, const OptionSpec<Scalar>& w) {
  detail::check_option_dims(mdp, w);
  const Index n = mdp.n_states;
  const auto chain = induce_chain(mdp, w.policy);
  const Vector<Scalar> keep_going = Vector<Scalar>::Ones(n) - w.termination;

  Splitting<Scalar> s;
  s.a = Matrix<Scalar>::Identity(n, n) - mdp.gamma * chain.p_pi;
  s.m = Matrix<Scalar>::Identity(n, n) -
        mdp.gamma * Matrix<Scalar>(chain.p_pi * keep_going.asDiagonal());
  s.n = s.m - s.a;
  s.label = "call-return";
  return s;
}

using OptionModelsd = OptionModels<double>;

}  // namespace optsplit
