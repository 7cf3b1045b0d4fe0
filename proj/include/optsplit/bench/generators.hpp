#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "optsplit/bench/problem.hpp"

namespace optsplit::bench {

/// Seeded random MDP: each (s, a) row places ceil(sparsity * n) nonzero
/// transitions on distinct successors and normalizes them; rewards are
/// uniform in [0, 1]. Identical arguments produce bitwise-identical MDPs.
Mdpd gen_random_mdp(Index n_states, Index n_actions, double gamma, std::uint64_t seed,
                    double sparsity = 1.0);

/// Random option set: row-stochastic intra-option policies and termination
/// probabilities uniform in [beta_lo, beta_hi].
std::vector<OptionSpecd> random_options(Index n_states, Index n_actions, Index n_options,
                                        std::mt19937_64& rng, double beta_lo = 0.0,
                                        double beta_hi = 1.0);

/// Random row-stochastic policy over options.
MetaPolicyd random_meta_policy(Index n_states, Index n_options, std::mt19937_64& rng);

/// Random MDP bundled with a random option set (n_options = 0 gives a bare
/// MDP). Deterministic in the seed.
Problem gen_random_problem(Index n_states, Index n_actions, double gamma, std::uint64_t seed,
                           double sparsity = 1.0, Index n_options = 3);

/// The four-rooms gridworld plus its metadata: indices of the four hallway
/// states and of the absorbing goal state.
struct FourRoomsProblem {
  Problem problem;
  std::vector<Index> hallways;
  Index goal = 0;
};

/// 11x11 four-rooms gridworld (104 free cells, row-major state ids).
/// Four stochastic movement actions (intended direction with probability
/// 0.9, otherwise uniform over the rest; bumping a wall stays put), reward
/// 1 at the absorbing south-east corner goal, 0 elsewhere. One option per
/// hallway with a shortest-path policy toward it; terminations are 1 at
/// hallway cells and 0 elsewhere; mu is uniform.
FourRoomsProblem gen_four_rooms(double gamma);

}  // namespace optsplit::bench
