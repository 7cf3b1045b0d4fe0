#include "optsplit/bench/problem.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "optsplit/solver.hpp"
#include "optsplit/spectral.hpp"
#include "optsplit/splitting.hpp"

namespace optsplit::bench {

std::vector<std::string> validate_problem(const Problem& problem) {
  std::vector<std::string> findings = validate_mdp(problem.mdp).violations;
  if (!problem.has_options()) return findings;

  const Index n = problem.mdp.n_states;
  for (std::size_t w = 0; w < problem.options.size(); ++w) {
    const auto& opt = problem.options[w];
    std::ostringstream name;
    name << "option " << w;
    if (opt.policy.probs.rows() != n || opt.policy.probs.cols() != problem.mdp.n_actions) {
      findings.push_back(name.str() + " policy has wrong shape");
      continue;
    }
    auto policy_check = validate_policy(opt.policy, name.str() + " policy");
    findings.insert(findings.end(), policy_check.violations.begin(),
                    policy_check.violations.end());
    if (opt.termination.size() != n) {
      findings.push_back(name.str() + " termination has wrong length");
      continue;
    }
    for (Index s = 0; s < n; ++s) {
      const double beta = opt.termination[s];
      if (!(beta >= 0.0 && beta <= 1.0)) {
        std::ostringstream os;
        os << name.str() << " termination at state " << s << " is " << beta
           << ", outside [0,1]";
        findings.push_back(os.str());
      }
    }
  }
  if (problem.mu.probs.rows() != n ||
      problem.mu.probs.cols() != static_cast<Index>(problem.options.size())) {
    findings.push_back("mu has wrong shape");
  } else {
    auto mu_check = validate_policy(PolicyMatrixd{problem.mu.probs}, "mu");
    findings.insert(findings.end(), mu_check.violations.begin(), mu_check.violations.end());
  }
  if (!findings.empty()) return findings;

  // Inputs are sound; now check the derived models and the splitting.
  const auto models = build_gating_models(problem.mdp, problem.options, problem.mu);
  if (models.p_sharp.minCoeff() < -kNonnegTol) findings.push_back("P_sharp has negative entries");
  if (models.p_bot.minCoeff() < -kNonnegTol) findings.push_back("P_bot has negative entries");

  const Matrix<double> joint = models.p_sharp + models.p_bot;
  for (Index s = 0; s < n; ++s) {
    const double row_sum = joint.row(s).sum();
    if (std::abs(row_sum - 1.0) > 1e-10) {
      std::ostringstream os;
      os << "P_sharp + P_bot row " << s << " sums to " << row_sum;
      findings.push_back(os.str());
    }
  }

  const auto residuals = gating_residuals(problem.mdp, models);
  if (!(residuals.exhaustiveness <= 1e-12)) {
    std::ostringstream os;
    os << "P_sharp + P_bot deviates from P_sigma by " << residuals.exhaustiveness;
    findings.push_back(os.str());
  }
  if (!(residuals.b_recursion < 1e-9)) {
    std::ostringstream os;
    os << "reward model recursion residual is " << residuals.b_recursion;
    findings.push_back(os.str());
  }
  if (!(residuals.f_recursion < 1e-9)) {
    std::ostringstream os;
    os << "transition model recursion residual is " << residuals.f_recursion;
    findings.push_back(os.str());
  }

  const auto splitting = splitting_from_options(models, problem.mdp);
  const double identity_gap = (splitting.a - (splitting.m - splitting.n)).cwiseAbs().maxCoeff();
  if (!(identity_gap <= 1e-12)) {
    std::ostringstream os;
    os << "A - (M - N) deviates by " << identity_gap;
    findings.push_back(os.str());
  }
  const auto report = check_regular(splitting);
  if (!report.is_regular) {
    std::ostringstream os;
    os << "options splitting is not regular (min M^-1 entry " << report.m_inverse_min
       << ", min N entry " << report.n_min << ")";
    findings.push_back(os.str());
  }
  if (!(report.rho < 1.0)) {
    std::ostringstream os;
    os << "iteration radius is " << report.rho << ", expected < 1";
    findings.push_back(os.str());
  }
  return findings;
}

}  // namespace optsplit::bench
