#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "optsplit/bench/problem.hpp"
#include "optsplit/splitting.hpp"

namespace optsplit::bench {

/// A beta-sweep experiment: a problem (from file or generator), a grid of
/// scale factors c applied pointwise as beta~ = c * beta, solver settings,
/// and the CSV output path.
struct ExperimentSpec {
  std::string problem_file;  // non-empty: load this file
  std::string generator;     // otherwise: "random" or "four-rooms"
  std::uint64_t seed = 0;
  Index n_states = 64;
  Index n_actions = 4;
  Index n_options = 3;
  double gamma = 0.95;
  double sparsity = 1.0;
  std::vector<double> beta_grid;
  double tol = 1e-10;
  long max_iters = 100000;
  std::string out;
};

ExperimentSpec experiment_from_json(const nlohmann::json& j);
ExperimentSpec load_experiment(const std::string& path);

/// Builds the problem an ExperimentSpec refers to.
Problem materialize_problem(const ExperimentSpec& spec);

struct SweepRow {
  double c = 0;
  double rho = 0;
  double norm_bound = 0;
  long iterations = 0;
  double factor_ms = 0;
  double iter_ms = 0;
  double final_residual = 0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // sorted by c
  bool monotone = true;        // rho weakly increasing in c within 1e-9
};

/// One row per scale factor c, sorted by c: splitting for beta~ = c * beta,
/// its spectral radius and norm bound, and the cost of solving with it.
/// monotone reports whether the rho column is weakly increasing (a
/// violation is a finding, not an error).
SweepResult run_beta_sweep(const Problem& problem, std::vector<double> beta_grid, double tol,
                           long max_iters);

/// Columns: c, rho, norm_bound, iterations, factor_ms, iter_ms,
/// final_residual. All except the wall-time columns are deterministic for
/// a fixed problem and grid.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows);

/// Loads/generates the problem, runs the sweep, writes the CSV.
SweepResult run_beta_sweep(const ExperimentSpec& spec);

/// A solver selection for `solve` and `compare`: options(c) scales the
/// problem's terminations by c; jacobi / gauss_seidel / sor(omega) /
/// richardson(tau) split I - gamma P_sigma directly.
struct MethodSpec {
  enum class Kind { Options, Jacobi, GaussSeidel, Sor, Richardson };
  Kind kind = Kind::Options;
  double param = 1.0;
  std::string name = "options";
};

MethodSpec parse_method(const std::string& text);
std::vector<MethodSpec> parse_method_list(const std::string& text);  // comma-separated

/// The splitting a method induces on `problem` (whose options supply the
/// target policy sigma).
Splittingd build_method_splitting(const Problem& problem, const MethodSpec& method);

struct MethodRow {
  std::string method;
  double rho = 0;
  long iterations = 0;
  double final_residual = 0;
  double wall_ms = 0;
  double err_vs_oracle = 0;
  std::string status;  // "converged", "diverged" or "max-iters"
};

/// Runs every method on the same problem and reports each against the
/// direct-solve oracle. Diverging methods are flagged in their row; the
/// run continues.
std::vector<MethodRow> run_method_comparison(const Problem& problem,
                                             const std::vector<MethodSpec>& methods, double tol,
                                             long max_iters);

/// Columns: method, rho, iterations, final_residual, wall_ms,
/// err_vs_oracle, status.
void write_methods_csv(std::ostream& out, const std::vector<MethodRow>& rows);
void write_methods_csv(const std::string& path, const std::vector<MethodRow>& rows);

}  // namespace optsplit::bench
