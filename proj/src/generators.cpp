#include "optsplit/bench/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>

namespace optsplit::bench {

namespace {

// Draws `count` distinct indices from [0, n) by a partial Fisher-Yates
// shuffle; order of draws is deterministic in the rng state.
std::vector<Index> sample_distinct(Index n, Index count, std::mt19937_64& rng) {
  std::vector<Index> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), Index{0});
  for (Index i = 0; i < count; ++i) {
    std::uniform_int_distribution<Index> pick(i, n - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

Matrix<double> random_stochastic(Index rows, Index cols, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  Matrix<double> probs(rows, cols);
  for (Index s = 0; s < rows; ++s) {
    double total = 0.0;
    for (Index j = 0; j < cols; ++j) {
      probs(s, j) = weight(rng);
      total += probs(s, j);
    }
    probs.row(s) /= total;
  }
  return probs;
}

}  // namespace

Mdpd gen_random_mdp(Index n_states, Index n_actions, double gamma, std::uint64_t seed,
                    double sparsity) {
  if (n_states < 1) throw std::invalid_argument("n_states must be >= 1");
  if (n_actions < 1) throw std::invalid_argument("n_actions must be >= 1");
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in [0,1)");
  if (!(sparsity > 0.0 && sparsity <= 1.0)) {
    throw std::invalid_argument("sparsity must be in (0,1]");
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Index nnz = static_cast<Index>(std::ceil(sparsity * static_cast<double>(n_states)));

  Mdpd mdp;
  mdp.n_states = n_states;
  mdp.n_actions = n_actions;
  mdp.gamma = gamma;
  mdp.transition.assign(static_cast<std::size_t>(n_actions),
                        Matrix<double>::Zero(n_states, n_states));
  mdp.reward.resize(n_states, n_actions);

  for (Index s = 0; s < n_states; ++s) {
    for (Index a = 0; a < n_actions; ++a) {
      const auto successors = sample_distinct(n_states, nnz, rng);
      double total = 0.0;
      std::vector<double> weights(successors.size());
      for (std::size_t i = 0; i < successors.size(); ++i) {
        weights[i] = weight(rng);
        total += weights[i];
      }
      for (std::size_t i = 0; i < successors.size(); ++i) {
        mdp.transition[static_cast<std::size_t>(a)](s, successors[i]) = weights[i] / total;
      }
      mdp.reward(s, a) = unit(rng);
    }
  }
  return mdp;
}

std::vector<OptionSpecd> random_options(Index n_states, Index n_actions, Index n_options,
                                        std::mt19937_64& rng, double beta_lo, double beta_hi) {
  if (n_options < 1) throw std::invalid_argument("n_options must be >= 1");
  if (!(beta_lo >= 0.0 && beta_hi <= 1.0 && beta_lo <= beta_hi)) {
    throw std::invalid_argument("termination range must satisfy 0 <= lo <= hi <= 1");
  }
  std::uniform_real_distribution<double> beta(beta_lo, beta_hi);
  std::vector<OptionSpecd> options(static_cast<std::size_t>(n_options));
  for (auto& w : options) {
    w.policy.probs = random_stochastic(n_states, n_actions, rng);
    w.termination.resize(n_states);
    for (Index s = 0; s < n_states; ++s) w.termination[s] = beta(rng);
  }
  return options;
}

MetaPolicyd random_meta_policy(Index n_states, Index n_options, std::mt19937_64& rng) {
  MetaPolicyd mu;
  mu.probs = random_stochastic(n_states, n_options, rng);
  return mu;
}

Problem gen_random_problem(Index n_states, Index n_actions, double gamma, std::uint64_t seed,
                           double sparsity, Index n_options) {
  Problem problem;
  problem.mdp = gen_random_mdp(n_states, n_actions, gamma, seed, sparsity);
  if (n_options > 0) {
    std::mt19937_64 rng(seed ^ 0xa5a5a5a5a5a5a5a5ull);
    problem.options = random_options(n_states, n_actions, n_options, rng);
    problem.mu = random_meta_policy(n_states, n_options, rng);
  }
  return problem;
}

namespace {

// 11x11 interior of the canonical four-rooms map ('#' = wall). Hallways sit
// at (2,5), (5,1), (6,8) and (9,5); the goal is the south-east corner.
constexpr std::array<const char*, 11> kFourRoomsLayout = {
    ".....#.....",
    ".....#.....",
    "...........",
    ".....#.....",
    ".....#.....",
    "#.####.....",
    ".....###.##",
    ".....#.....",
    ".....#.....",
    "...........",
    ".....#.....",
};

constexpr Index kGridSize = 11;
constexpr std::array<std::pair<Index, Index>, 4> kHallwayCells = {
    {{2, 5}, {5, 1}, {6, 8}, {9, 5}}};
constexpr std::pair<Index, Index> kGoalCell = {10, 10};

// Row offsets for actions up, down, left, right.
constexpr std::array<Index, 4> kRowStep = {-1, 1, 0, 0};
constexpr std::array<Index, 4> kColStep = {0, 0, -1, 1};

bool is_free(Index row, Index col) {
  if (row < 0 || row >= kGridSize || col < 0 || col >= kGridSize) return false;
  return kFourRoomsLayout[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] != '#';
}

}  // namespace

FourRoomsProblem gen_four_rooms(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0)) throw std::invalid_argument("gamma must be in [0,1)");

  // Row-major ids over free cells.
  Matrix<Index> cell_id = Matrix<Index>::Constant(kGridSize, kGridSize, -1);
  std::vector<std::pair<Index, Index>> cells;
  for (Index row = 0; row < kGridSize; ++row) {
    for (Index col = 0; col < kGridSize; ++col) {
      if (is_free(row, col)) {
        cell_id(row, col) = static_cast<Index>(cells.size());
        cells.emplace_back(row, col);
      }
    }
  }
  const Index n = static_cast<Index>(cells.size());
  const Index n_actions = 4;
  const Index goal = cell_id(kGoalCell.first, kGoalCell.second);

  // Deterministic landing cell of `action` from (row, col): stay on walls.
  const auto move = [&](Index row, Index col, Index action) -> Index {
    const Index next_row = row + kRowStep[static_cast<std::size_t>(action)];
    const Index next_col = col + kColStep[static_cast<std::size_t>(action)];
    return is_free(next_row, next_col) ? cell_id(next_row, next_col) : cell_id(row, col);
  };

  Mdpd mdp;
  mdp.n_states = n;
  mdp.n_actions = n_actions;
  mdp.gamma = gamma;
  mdp.transition.assign(static_cast<std::size_t>(n_actions), Matrix<double>::Zero(n, n));
  mdp.reward = Matrix<double>::Zero(n, n_actions);

  for (Index s = 0; s < n; ++s) {
    const auto [row, col] = cells[static_cast<std::size_t>(s)];
    for (Index a = 0; a < n_actions; ++a) {
      auto& p = mdp.transition[static_cast<std::size_t>(a)];
      if (s == goal) {
        p(s, s) = 1.0;  // absorbing
        mdp.reward(s, a) = 1.0;
        continue;
      }
      for (Index executed = 0; executed < n_actions; ++executed) {
        const double prob = executed == a ? 0.9 : 0.1 / 3.0;
        p(s, move(row, col, executed)) += prob;
      }
    }
  }

  // One option per hallway: BFS distances over the deterministic move
  // graph, policy steps along any distance-decreasing action.
  FourRoomsProblem out;
  for (const auto& [hall_row, hall_col] : kHallwayCells) {
    out.hallways.push_back(cell_id(hall_row, hall_col));
  }
  out.goal = goal;

  Vector<double> termination = Vector<double>::Zero(n);
  for (const Index hall : out.hallways) termination[hall] = 1.0;

  for (const Index hall : out.hallways) {
    std::vector<Index> dist(static_cast<std::size_t>(n), -1);
    std::deque<Index> frontier;
    dist[static_cast<std::size_t>(hall)] = 0;
    frontier.push_back(hall);
    while (!frontier.empty()) {
      const Index s = frontier.front();
      frontier.pop_front();
      const auto [row, col] = cells[static_cast<std::size_t>(s)];
      for (Index a = 0; a < n_actions; ++a) {
        const Index t = move(row, col, a);
        if (dist[static_cast<std::size_t>(t)] < 0) {
          dist[static_cast<std::size_t>(t)] = dist[static_cast<std::size_t>(s)] + 1;
          frontier.push_back(t);
        }
      }
    }

    OptionSpecd option;
    option.termination = termination;
    option.policy.probs = Matrix<double>::Zero(n, n_actions);
    for (Index s = 0; s < n; ++s) {
      const auto [row, col] = cells[static_cast<std::size_t>(s)];
      Index toward = -1;
      if (dist[static_cast<std::size_t>(s)] > 0) {
        for (Index a = 0; a < n_actions; ++a) {
          const Index t = move(row, col, a);
          if (dist[static_cast<std::size_t>(t)] == dist[static_cast<std::size_t>(s)] - 1) {
            toward = a;
            break;
          }
        }
      }
      if (toward >= 0) {
        option.policy.probs(s, toward) = 1.0;
      } else {
        option.policy.probs.row(s).setConstant(1.0 / static_cast<double>(n_actions));
      }
    }
    out.problem.options.push_back(std::move(option));
  }

  out.problem.mdp = std::move(mdp);
  out.problem.mu.probs =
      Matrix<double>::Constant(n, static_cast<Index>(out.problem.options.size()),
                               1.0 / static_cast<double>(out.problem.options.size()));
  return out;
}

}  // namespace optsplit::bench
