#pragma once

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "optsplit/types.hpp"

namespace optsplit {

/// Finite discounted MDP. `transition[a]` is the n x n matrix with
/// P(s'|s,a) at (s, s'); `reward(s, a)` is the immediate reward; `gamma`
/// is the discount in [0, 1).
template <typename Scalar>
struct Mdp {
  Index n_states = 0;
  Index n_actions = 0;
  std::vector<Matrix<Scalar>> transition;
  Matrix<Scalar> reward;
  Scalar gamma = Scalar(0);
};

/// Row-stochastic state-action table pi(a|s).
template <typename Scalar>
struct PolicyMatrix {
  Matrix<Scalar> probs;

  Index n_states() const { return probs.rows(); }
  Index n_actions() const { return probs.cols(); }
};

/// Markov chain induced by a policy: P_pi(s,s') and r_pi(s).
template <typename Scalar>
struct InducedChain {
  Matrix<Scalar> p_pi;
  Vector<Scalar> r_pi;
};

/// Diagnostic result of validate_mdp / validate_policy. Collects every
/// violated invariant instead of stopping at the first.
struct Validation {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

namespace detail {

inline std::string index_pair(Index i, Index j) {
  std::ostringstream os;
  os << "(" << i << "," << j << ")";
  return os.str();
}

template <typename Scalar>
void check_stochastic_rows(const Matrix<Scalar>& probs, const std::string& what,
                           std::vector<std::string>& out) {
  for (Index s = 0; s < probs.rows(); ++s) {
    Scalar row_sum = Scalar(0);
    for (Index j = 0; j < probs.cols(); ++j) {
      const Scalar p = probs(s, j);
      if (!(p >= Scalar(0))) {
        std::ostringstream os;
        os << what << " entry " << index_pair(s, j) << " is negative: " << p;
        out.push_back(os.str());
      }
      row_sum += p;
    }
    if (std::abs(row_sum - Scalar(1)) > Scalar(kRowSumTol)) {
      std::ostringstream os;
      os << what << " row " << s << " sums to " << row_sum;
      out.push_back(os.str());
    }
  }
}

}  // namespace detail

/// Reports every violated MDP invariant (negative probabilities, rows not
/// summing to one within 1e-12, gamma outside [0,1), shape mismatches).
/// Purely diagnostic; never throws.
template <typename Scalar>
Validation validate_mdp(const Mdp<Scalar>& mdp) {
  Validation result;
  auto& v = result.violations;

  if (mdp.n_states < 1) v.push_back("n_states must be >= 1");
  if (mdp.n_actions < 1) v.push_back("n_actions must be >= 1");
  if (!(mdp.gamma >= Scalar(0))) v.push_back("gamma must be >= 0");
  if (!(mdp.gamma < Scalar(1))) v.push_back("gamma must be < 1");

  if (static_cast<Index>(mdp.transition.size()) != mdp.n_actions) {
    std::ostringstream os;
    os << "transition has " << mdp.transition.size() << " action slices, expected "
       << mdp.n_actions;
    v.push_back(os.str());
    return result;
  }
  if (mdp.reward.rows() != mdp.n_states || mdp.reward.cols() != mdp.n_actions) {
    std::ostringstream os;
    os << "reward is " << mdp.reward.rows() << "x" << mdp.reward.cols() << ", expected "
       << mdp.n_states << "x" << mdp.n_actions;
    v.push_back(os.str());
  }

  for (Index a = 0; a < mdp.n_actions; ++a) {
    const Matrix<Scalar>& p = mdp.transition[a];
    if (p.rows() != mdp.n_states || p.cols() != mdp.n_states) {
      std::ostringstream os;
      os << "transition slice for action " << a << " is " << p.rows() << "x" << p.cols()
         << ", expected " << mdp.n_states << "x" << mdp.n_states;
      v.push_back(os.str());
      continue;
    }
    for (Index s = 0; s < mdp.n_states; ++s) {
      Scalar row_sum = Scalar(0);
      for (Index t = 0; t < mdp.n_states; ++t) {
        const Scalar prob = p(s, t);
        if (!(prob >= Scalar(0))) {
          std::ostringstream os;
          os << "transition entry (" << s << "," << a << "," << t << ") is negative: " << prob;
          v.push_back(os.str());
        }
        row_sum += prob;
      }
      if (std::abs(row_sum - Scalar(1)) > Scalar(kRowSumTol)) {
        std::ostringstream os;
        os << "row " << detail::index_pair(s, a) << " sums to " << row_sum;
        v.push_back(os.str());
      }
    }
  }
  if (!mdp.reward.allFinite()) v.push_back("reward has non-finite entries");
  return result;
}

/// Diagnostic counterpart of validate_mdp for a bare policy table.
template <typename Scalar>
Validation validate_policy(const PolicyMatrix<Scalar>& policy, const std::string& what = "policy") {
  Validation result;
  detail::check_stochastic_rows(policy.probs, what, result.violations);
  return result;
}

/// P_pi(s,s') = sum_a pi(a|s) P(s'|s,a) and r_pi(s) = sum_a pi(a|s) r(s,a).
template <typename Scalar>
InducedChain<Scalar> induce_chain(const Mdp<Scalar>& mdp, const PolicyMatrix<Scalar>& policy) {
  if (policy.probs.rows() != mdp.n_states) {
    std::ostringstream os;
    os << "policy has " << policy.probs.rows() << " state rows, expected n_states = "
       << mdp.n_states;
    throw std::invalid_argument(os.str());
  }
  if (policy.probs.cols() != mdp.n_actions) {
    std::ostringstream os;
    os << "policy has " << policy.probs.cols() << " action columns, expected n_actions = "
       << mdp.n_actions;
    throw std::invalid_argument(os.str());
  }

  InducedChain<Scalar> chain;
  chain.p_pi = Matrix<Scalar>::Zero(mdp.n_states, mdp.n_states);
  for (Index a = 0; a < mdp.n_actions; ++a) {
    chain.p_pi.noalias() += policy.probs.col(a).asDiagonal() * mdp.transition[a];
  }
  chain.r_pi = (policy.probs.cwiseProduct(mdp.reward)).rowwise().sum();
  return chain;
}

using Mdpd = Mdp<double>;
using PolicyMatrixd = PolicyMatrix<double>;
using InducedChaind = InducedChain<double>;

}  // namespace optsplit
