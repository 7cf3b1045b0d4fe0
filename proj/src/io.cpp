#include "optsplit/bench/io.hpp"

#include <fstream>
#include <stdexcept>

namespace optsplit::bench {

using nlohmann::json;

namespace {

Matrix<double> matrix_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) {
    throw std::runtime_error(what + " must be a nonempty array of rows");
  }
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j.front().size());
  Matrix<double> m(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Index>(row.size()) != cols) {
      throw std::runtime_error(what + " rows have inconsistent lengths");
    }
    for (Index c = 0; c < cols; ++c) {
      m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
  }
  return m;
}

json matrix_to_json(const Matrix<double>& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Vector<double> vector_from_json(const json& j, const std::string& what) {
  if (!j.is_array()) throw std::runtime_error(what + " must be an array");
  Vector<double> v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i) v[i] = j.at(static_cast<std::size_t>(i)).get<double>();
  return v;
}

json vector_to_json(const Vector<double>& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

Mdpd mdp_from_json(const json& j) {
  Mdpd mdp;
  mdp.n_states = j.at("n_states").get<Index>();
  mdp.n_actions = j.at("n_actions").get<Index>();
  mdp.gamma = j.at("gamma").get<double>();

  const auto& transition = j.at("transition");
  if (static_cast<Index>(transition.size()) != mdp.n_states) {
    throw std::runtime_error("transition must have one block per state");
  }
  mdp.transition.assign(static_cast<std::size_t>(mdp.n_actions),
                        Matrix<double>::Zero(mdp.n_states, mdp.n_states));
  for (Index s = 0; s < mdp.n_states; ++s) {
    const auto& per_action = transition.at(static_cast<std::size_t>(s));
    if (static_cast<Index>(per_action.size()) != mdp.n_actions) {
      throw std::runtime_error("transition blocks must have one row per action");
    }
    for (Index a = 0; a < mdp.n_actions; ++a) {
      const auto& row = per_action.at(static_cast<std::size_t>(a));
      if (static_cast<Index>(row.size()) != mdp.n_states) {
        throw std::runtime_error("transition rows must have one entry per successor state");
      }
      for (Index t = 0; t < mdp.n_states; ++t) {
        mdp.transition[static_cast<std::size_t>(a)](s, t) =
            row.at(static_cast<std::size_t>(t)).get<double>();
      }
    }
  }
  mdp.reward = matrix_from_json(j.at("reward"), "reward");
  if (mdp.reward.rows() != mdp.n_states || mdp.reward.cols() != mdp.n_actions) {
    throw std::runtime_error("reward must be n_states x n_actions");
  }
  return mdp;
}

json mdp_to_json(const Mdpd& mdp) {
  json j;
  j["n_states"] = mdp.n_states;
  j["n_actions"] = mdp.n_actions;
  j["gamma"] = mdp.gamma;
  json transition = json::array();
  for (Index s = 0; s < mdp.n_states; ++s) {
    json per_action = json::array();
    for (Index a = 0; a < mdp.n_actions; ++a) {
      json row = json::array();
      for (Index t = 0; t < mdp.n_states; ++t) {
        row.push_back(mdp.transition[static_cast<std::size_t>(a)](s, t));
      }
      per_action.push_back(std::move(row));
    }
    transition.push_back(std::move(per_action));
  }
  j["transition"] = std::move(transition);
  j["reward"] = matrix_to_json(mdp.reward);
  return j;
}

Problem problem_from_json(const json& j) {
  Problem problem;
  problem.mdp = mdp_from_json(j);
  if (j.contains("options")) {
    if (!j.contains("mu")) throw std::runtime_error("options present but mu is missing");
    for (const auto& jw : j.at("options")) {
      OptionSpecd w;
      w.policy.probs = matrix_from_json(jw.at("policy"), "option policy");
      w.termination = vector_from_json(jw.at("termination"), "option termination");
      problem.options.push_back(std::move(w));
    }
    problem.mu.probs = matrix_from_json(j.at("mu"), "mu");
  } else if (j.contains("mu")) {
    throw std::runtime_error("mu present but options are missing");
  }
  return problem;
}

json problem_to_json(const Problem& problem) {
  json j = mdp_to_json(problem.mdp);
  if (problem.has_options()) {
    json options = json::array();
    for (const auto& w : problem.options) {
      json jw;
      jw["policy"] = matrix_to_json(w.policy.probs);
      jw["termination"] = vector_to_json(w.termination);
      options.push_back(std::move(jw));
    }
    j["options"] = std::move(options);
    j["mu"] = matrix_to_json(problem.mu.probs);
  }
  return j;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw std::runtime_error("cannot parse '" + path + "': " + e.what());
  }
  return j;
}

Problem load_problem(const std::string& path) {
  try {
    return problem_from_json(load_json(path));
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed problem file '" + path + "': " + e.what());
  }
}

void save_problem(const std::string& path, const Problem& problem) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << problem_to_json(problem).dump(2) << "\n";
}

}  // namespace optsplit::bench
