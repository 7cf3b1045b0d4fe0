#pragma once

#include <string>
#include <vector>

#include "optsplit/gating.hpp"
#include "optsplit/mdp.hpp"

namespace optsplit::bench {

/// A benchmark problem: an MDP plus (optionally) an option set and the
/// policy over options. Problems without options can only be validated;
/// every solver route needs the options to derive the target policy sigma.
struct Problem {
  Mdpd mdp;
  std::vector<OptionSpecd> options;
  MetaPolicyd mu;

  bool has_options() const { return !options.empty(); }
};

/// Runs the full invariant suite on a problem: MDP stochasticity, option
/// and mu invariants, exhaustiveness of the gating models, the recursion
/// residuals of b and F, and regularity of the induced splitting.
/// Returns one finding per violation; empty means the problem is sound.
std::vector<std::string> validate_problem(const Problem& problem);

}  // namespace optsplit::bench
