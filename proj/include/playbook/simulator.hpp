#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "playbook/strategy.hpp"
#include "playbook/types.hpp"

namespace playbook {

struct ShotEvent {
  double time_s = 0.0;
  int team = 0;
  int element = -1;  // codebook element; -1 when no tree was applied
  int goal = 0;
};

struct MatchResult {
  int match_id = 0;
  int home_team = 0;
  int away_team = 0;
  int home_goals = 0;
  int away_goals = 0;
  std::vector<ShotEvent> shots;  // ascending time
};

/// Groups plays into per-match shot sequences. Codebook elements are filled
/// from the tree when one is given.
std::vector<MatchResult> matches_from_dataset(const Dataset& dataset,
                                              const DeepDecisionTree* tree = nullptr);

/// Independent-Poisson season model: log theta_home = home + att_h + def_a,
/// log theta_away = att_a + def_h, with sum-to-zero attack/defence effects.
struct PoissonSeasonModel {
  double home = 0.0;
  std::vector<int> teams;  // sorted ids
  Eigen::VectorXd att;
  Eigen::VectorXd def;

  int index_of(int team) const;
  std::pair<double, double> thetas(int home_team, int away_team) const;
};

/// Penalized maximum likelihood under the sum-to-zero constraints (ridge on
/// att/def, lambda = 1e-3 by default); Newton iterations until the projected
/// gradient norm falls below 1e-9. The objective is convex, so any init_seed
/// (0 = zero start, otherwise a seeded random start) reaches the same
/// optimum. Throws on a disconnected schedule.
PoissonSeasonModel fit_poisson(const std::vector<MatchResult>& results, double ridge = 1e-3,
                               uint64_t init_seed = 0);

struct SimulationConfig {
  int n_runs = 1000;
  double match_length_s = 5400.0;
  double stoppage_max_s = 300.0;  // uniform stoppage per simulated match
  uint64_t rng_seed = 0;
};

struct ScorePrediction {
  double home = 0.0;
  double away = 0.0;
};

struct BhmPrediction {
  double theta_home = 0.0;
  double theta_away = 0.0;
  double mean_home = 0.0;  // Monte-Carlo means over n_runs
  double mean_away = 0.0;
};

BhmPrediction simulate_bhm(const PoissonSeasonModel& model, int home_team, int away_team,
                           const SimulationConfig& config);

/// Linear next-shot inter-arrival model: intercept + team indicators, plus
/// (is_home, goal difference, remaining time fraction) when with_context.
struct ShotClockModel {
  bool with_context = false;
  std::vector<int> teams;  // sorted ids; indicators for teams[1..]
  Eigen::VectorXd weights;
  bool ridge_fallback = false;

  /// Expected gap in seconds, clamped to >= 1.
  double predict_gap(int team, bool is_home, int goal_diff, double remaining_frac) const;
};

/// Ordinary least squares over the gaps between each team's consecutive
/// shots (kickoff to first shot included), context features taken at the gap
/// start. Rank-deficient designs fall back to a small ridge.
ShotClockModel fit_shot_clock(const std::vector<MatchResult>& results, bool with_context,
                              double match_length_s = 5400.0);

/// Per-team sampling tables for event-level simulation, assembled from the
/// strategy distributions: empirical shot-element frequencies, offensive
/// conversion values (league fallback where a team never used an element) and
/// defensive values relative to the league.
struct TeamProfiles {
  int n_elements = 0;
  std::vector<int> teams;  // sorted ids
  Eigen::MatrixXd shot_freq;
  Eigen::MatrixXd conversion;
  Eigen::MatrixXd def_relative;

  int index_of(int team) const;
};
TeamProfiles build_profiles(const std::vector<ScoredPlay>& scored, int n_elements);

enum class SimMode { M1, Context };

/// Event-loop Monte Carlo: each team's next shot arrives after an exponential
/// gap with the regression prediction as its mean (features frozen at kickoff
/// for M1, refreshed after every event for Context); the shot's element is
/// sampled from the team's frequencies and converts with probability
/// clamp(attack value + opponent defensive relative value, 0.01, 0.99).
/// Returns the average score over n_runs seeded, independent runs.
ScorePrediction simulate_match(const TeamProfiles& profiles, const ShotClockModel& clock,
                               int home_team, int away_team, const SimulationConfig& config,
                               SimMode mode);

/// Mean over matches of the two squared score errors averaged per match.
double evaluate_mse(const std::vector<ScorePrediction>& predictions,
                    const std::vector<std::pair<int, int>>& truths);

/// Score-only season drawn from the Poisson model over the given
/// (home, away) schedule; parameter-recovery oracle and demo helper.
std::vector<MatchResult> sample_season(const PoissonSeasonModel& model,
                                       const std::vector<std::pair<int, int>>& schedule,
                                       uint64_t seed);

}  // namespace playbook
