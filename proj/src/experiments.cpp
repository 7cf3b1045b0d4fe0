#include "optsplit/bench/experiments.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "optsplit/bench/generators.hpp"
#include "optsplit/bench/io.hpp"
#include "optsplit/solver.hpp"

namespace optsplit::bench {

namespace {

// Shortest round-trippable decimal form; identical inputs must yield
// byte-identical CSV cells.
std::string fmt_full(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", x);
  return buffer;
}

std::string fmt_ms(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.4f", x);
  return buffer;
}

std::string fmt_param(double x) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%g", x);
  return buffer;
}

PolicyMatrixd target_policy(const Problem& problem) {
  if (!problem.has_options()) {
    throw std::runtime_error("problem has no options; cannot derive the target policy");
  }
  return marginal_policy(problem.options, problem.mu);
}

}  // namespace

ExperimentSpec experiment_from_json(const nlohmann::json& j) {
  ExperimentSpec spec;
  const auto& problem = j.at("problem");
  if (problem.contains("file")) {
    spec.problem_file = problem.at("file").get<std::string>();
  } else {
    spec.generator = problem.at("generator").get<std::string>();
    spec.seed = problem.value("seed", std::uint64_t{0});
    spec.n_states = problem.value("n_states", Index{64});
    spec.n_actions = problem.value("n_actions", Index{4});
    spec.n_options = problem.value("n_options", Index{3});
    spec.gamma = problem.value("gamma", 0.95);
    spec.sparsity = problem.value("sparsity", 1.0);
  }
  spec.beta_grid = j.at("beta_grid").get<std::vector<double>>();
  spec.tol = j.value("tol", 1e-10);
  spec.max_iters = j.value("max_iters", 100000L);
  spec.out = j.value("out", std::string{});
  return spec;
}

ExperimentSpec load_experiment(const std::string& path) {
  try {
    return experiment_from_json(load_json(path));
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed experiment file '" + path + "': " + e.what());
  }
}

Problem materialize_problem(const ExperimentSpec& spec) {
  if (!spec.problem_file.empty()) return load_problem(spec.problem_file);
  if (spec.generator == "random") {
    return gen_random_problem(spec.n_states, spec.n_actions, spec.gamma, spec.seed,
                              spec.sparsity, spec.n_options);
  }
  if (spec.generator == "four-rooms" || spec.generator == "four_rooms") {
    return gen_four_rooms(spec.gamma).problem;
  }
  throw std::invalid_argument("unknown generator '" + spec.generator + "'");
}

SweepResult run_beta_sweep(const Problem& problem, std::vector<double> beta_grid, double tol,
                           long max_iters) {
  if (beta_grid.empty()) throw std::invalid_argument("beta_grid must be nonempty");
  for (const double c : beta_grid) {
    if (!(c >= 0.0 && c <= 1.0)) {
      std::ostringstream os;
      os << "beta_grid entry " << c << " is outside [0,1]";
      throw std::invalid_argument(os.str());
    }
  }
  std::sort(beta_grid.begin(), beta_grid.end());

  const auto sigma = target_policy(problem);
  const auto chain = induce_chain(problem.mdp, sigma);

  SweepResult result;
  for (const double c : beta_grid) {
    const auto scaled = scale_terminations(problem.options, c);
    const auto models = build_gating_models(problem.mdp, scaled, problem.mu);
    const auto splitting = splitting_from_options(models, problem.mdp);
    const auto bound = rate_bound(splitting);

    SolveConfigd cfg;
    cfg.tol = tol;
    cfg.max_iters = max_iters;
    const auto report = iterate_splitting(splitting, chain.r_pi, cfg);

    SweepRow row;
    row.c = c;
    row.rho = bound.rho;
    row.norm_bound = bound.upper_bound;
    row.iterations = report.iterations;
    row.factor_ms = report.factor_seconds * 1e3;
    row.iter_ms = report.iterations > 0
                      ? report.iter_seconds * 1e3 / static_cast<double>(report.iterations)
                      : 0.0;
    row.final_residual = report.residual_history.back();
    result.rows.push_back(row);
  }
  for (std::size_t i = 1; i < result.rows.size(); ++i) {
    if (result.rows[i].rho < result.rows[i - 1].rho - 1e-9) result.monotone = false;
  }
  return result;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "c,rho,norm_bound,iterations,factor_ms,iter_ms,final_residual\n";
  for (const auto& row : rows) {
    out << fmt_full(row.c) << ',' << fmt_full(row.rho) << ',' << fmt_full(row.norm_bound)
        << ',' << row.iterations << ',' << fmt_ms(row.factor_ms) << ',' << fmt_ms(row.iter_ms)
        << ',' << fmt_full(row.final_residual) << '\n';
  }
}

void write_sweep_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_sweep_csv(out, rows);
}

SweepResult run_beta_sweep(const ExperimentSpec& spec) {
  const Problem problem = materialize_problem(spec);
  SweepResult result = run_beta_sweep(problem, spec.beta_grid, spec.tol, spec.max_iters);
  if (!spec.out.empty()) write_sweep_csv(spec.out, result.rows);
  return result;
}

MethodSpec parse_method(const std::string& text) {
  std::string base = text;
  double param = 1.0;
  const auto open = text.find('(');
  if (open != std::string::npos) {
    if (text.back() != ')') throw std::invalid_argument("malformed method '" + text + "'");
    base = text.substr(0, open);
    const std::string inside = text.substr(open + 1, text.size() - open - 2);
    try {
      std::size_t used = 0;
      param = std::stod(inside, &used);
      if (used != inside.size()) throw std::invalid_argument(inside);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed method parameter in '" + text + "'");
    }
  }

  MethodSpec method;
  method.param = param;
  if (base == "options") {
    if (!(param >= 0.0 && param <= 1.0)) {
      throw std::invalid_argument("options scale must be in [0,1], got '" + text + "'");
    }
    method.kind = MethodSpec::Kind::Options;
    method.name = "options(" + std::string(fmt_param(param)) + ")";
  } else if (base == "jacobi") {
    method.kind = MethodSpec::Kind::Jacobi;
    method.name = "jacobi";
  } else if (base == "gauss_seidel" || base == "gauss-seidel") {
    method.kind = MethodSpec::Kind::GaussSeidel;
    method.name = "gauss-seidel";
  } else if (base == "sor") {
    method.kind = MethodSpec::Kind::Sor;
    method.name = "sor(" + std::string(fmt_param(param)) + ")";
  } else if (base == "richardson") {
    method.kind = MethodSpec::Kind::Richardson;
    method.name = "richardson(" + std::string(fmt_param(param)) + ")";
  } else {
    throw std::invalid_argument("unknown method '" + text + "'");
  }
  return method;
}

std::vector<MethodSpec> parse_method_list(const std::string& text) {
  std::vector<MethodSpec> methods;
  std::string::size_type start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const std::string piece =
        comma == std::string::npos ? text.substr(start) : text.substr(start, comma - start);
    if (!piece.empty()) methods.push_back(parse_method(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (methods.empty()) throw std::invalid_argument("empty method list");
  return methods;
}

Splittingd build_method_splitting(const Problem& problem, const MethodSpec& method) {
  const auto sigma = target_policy(problem);
  Splittingd splitting;
  switch (method.kind) {
    case MethodSpec::Kind::Options: {
      const auto scaled = scale_terminations(problem.options, method.param);
      const auto models = build_gating_models(problem.mdp, scaled, problem.mu);
      splitting = splitting_from_options(models, problem.mdp);
      break;
    }
    case MethodSpec::Kind::Jacobi:
      splitting = classic_splitting(problem.mdp, sigma, ClassicMethod::Jacobi);
      break;
    case MethodSpec::Kind::GaussSeidel:
      splitting = classic_splitting(problem.mdp, sigma, ClassicMethod::GaussSeidel);
      break;
    case MethodSpec::Kind::Sor:
      splitting = classic_splitting(problem.mdp, sigma, ClassicMethod::Sor, method.param);
      break;
    case MethodSpec::Kind::Richardson:
      splitting = classic_splitting(problem.mdp, sigma, ClassicMethod::Richardson, method.param);
      break;
  }
  splitting.label = method.name;
  return splitting;
}

std::vector<MethodRow> run_method_comparison(const Problem& problem,
                                             const std::vector<MethodSpec>& methods, double tol,
                                             long max_iters) {
  const auto sigma = target_policy(problem);
  const auto chain = induce_chain(problem.mdp, sigma);
  const Vector<double> oracle = direct_solve(problem.mdp, sigma);

  std::vector<MethodRow> rows;
  for (const auto& method : methods) {
    const auto splitting = build_method_splitting(problem, method);
    const auto bound = rate_bound(splitting);

    SolveConfigd cfg;
    cfg.tol = tol;
    cfg.max_iters = max_iters;
    const auto report = iterate_splitting(splitting, chain.r_pi, cfg);

    MethodRow row;
    row.method = method.name;
    row.rho = bound.rho;
    row.iterations = report.iterations;
    row.final_residual = report.residual_history.back();
    row.wall_ms = (report.factor_seconds + report.iter_seconds) * 1e3;
    row.err_vs_oracle = (report.v - oracle).lpNorm<Eigen::Infinity>();
    row.status = report.diverged ? "diverged" : (report.converged ? "converged" : "max-iters");
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_methods_csv(std::ostream& out, const std::vector<MethodRow>& rows) {
  out << "method,rho,iterations,final_residual,wall_ms,err_vs_oracle,status\n";
  for (const auto& row : rows) {
    out << row.method << ',' << fmt_full(row.rho) << ',' << row.iterations << ','
        << fmt_full(row.final_residual) << ',' << fmt_ms(row.wall_ms) << ','
        << fmt_full(row.err_vs_oracle) << ',' << row.status << '\n';
  }
}

void write_methods_csv(const std::string& path, const std::vector<MethodRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  write_methods_csv(out, rows);
}

}  // namespace optsplit::bench
