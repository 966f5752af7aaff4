#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "playbook/types.hpp"

namespace playbook {

/// Optimal assignment of raw slots (rows) to roles (columns).
struct Assignment {
  std::vector<int> permutation;  // permutation[slot] = role
  double cost = 0.0;
};

/// Minimum-cost assignment for a square cost matrix. Among equal-cost optima
/// the lexicographically smallest permutation is returned. Throws
/// std::invalid_argument on non-square or non-finite input.
Assignment hungarian(const Eigen::MatrixXd& cost);

/// Mean role positions per team side, learned by alternating per-play
/// assignment with role-mean updates over time-averaged player positions.
struct FormationTemplate {
  Eigen::MatrixX2d att_means;  // row per role
  Eigen::MatrixX2d def_means;  // row per role; role 0 is nearest its own goal line
  int iterations_run = 0;
  double final_cost = 0.0;           // meters^2
  std::vector<double> cost_history;  // assignment cost per iteration, non-increasing
};

FormationTemplate learn_template(const Dataset& dataset, int max_iters = 50, double tol = 1e-6);

/// Reassigns role_index values via minimum-cost matching of each player's
/// time-averaged position to the template role means. Trajectories are
/// otherwise untouched; aligning twice equals aligning once.
Play align_play(const Play& play, const FormationTemplate& tmpl);

/// align_play over every play.
Dataset align_dataset(const Dataset& dataset, const FormationTemplate& tmpl);

/// Mean position of each trajectory over its frames, one row per storage slot.
Eigen::MatrixX2d time_averaged_positions(const std::vector<AgentTrajectory>& team);

void save_template(const FormationTemplate& tmpl, const std::string& path);
FormationTemplate load_template(const std::string& path);

}  // namespace playbook
