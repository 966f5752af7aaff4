#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "playbook/deeptree.hpp"
#include "playbook/types.hpp"

namespace playbook {

/// One shot after tree assignment: codebook element, expected-goal value and
/// the two teams involved.
struct ScoredPlay {
  int element = 0;
  double q = 0.0;
  int att_team = 0;
  int def_team = 0;
};

enum class Side { Offensive, Defensive };

inline constexpr int kLeagueMean = -1;

/// Per-element mean expected-goal values. Elements with no supporting plays
/// are absent (supported == false), not zero.
struct StrategyDistribution {
  Side side = Side::Offensive;
  int team = kLeagueMean;
  Eigen::VectorXd values;
  Eigen::VectorXi shots;  // supporting play count per element
  bool supported(int element) const { return shots(element) > 0; }
};

/// Routes and scores every play. q is the tree's predicted goal probability;
/// with use_outcome the binary label is used instead.
std::vector<ScoredPlay> score_dataset(const DeepDecisionTree& tree, const Dataset& dataset,
                                      bool use_outcome = false);

/// League-wide mean value per element.
StrategyDistribution mean_strategy(const std::vector<ScoredPlay>& scored, int n_elements,
                                   Side side);

/// Per-team distribution: offensive filters plays the team attacked,
/// defensive the plays it conceded. Throws on a team with no plays at all.
StrategyDistribution team_strategy(const std::vector<ScoredPlay>& scored, int n_elements,
                                   int team, Side side);

/// Element-wise team minus league; absent wherever the team is absent.
StrategyDistribution relative_strategy(const StrategyDistribution& team_dist,
                                       const StrategyDistribution& mean_dist);

Eigen::VectorXi shot_frequency(const std::vector<ScoredPlay>& scored, int n_elements);

/// CSV rows (team|"LEAGUE", side, element, value, shots, supported).
void export_strategy_csv(const std::vector<StrategyDistribution>& dists,
                         const std::string& path);

}  // namespace playbook
