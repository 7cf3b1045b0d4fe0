#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "optsplit/bench/problem.hpp"

namespace optsplit::bench {

/// Problem JSON layout: the MDP fields at top level
///   {"n_states": int, "n_actions": int, "gamma": float,
///    "transition": [[[float]]], "reward": [[float]]}
/// with row-major nesting (s, then a, then s'), plus an optional option
/// set {"options": [{"policy": [[float]], "termination": [float]}],
/// "mu": [[float]]}.
nlohmann::json problem_to_json(const Problem& problem);
Problem problem_from_json(const nlohmann::json& j);

Mdpd mdp_from_json(const nlohmann::json& j);
nlohmann::json mdp_to_json(const Mdpd& mdp);

/// File variants; failures are reported with the offending path.
Problem load_problem(const std::string& path);
void save_problem(const std::string& path, const Problem& problem);

nlohmann::json load_json(const std::string& path);

}  // namespace optsplit::bench
