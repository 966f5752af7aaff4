#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "playbook/types.hpp"

namespace playbook {

/// Flattened play vector of length 2*tau*m. Roles are concatenated attacking
/// first then defending, each in ascending role_index, and each trajectory is
/// interleaved x1,y1,...,x_tau,y_tau. Entry 2*tau*r + 2*t is the x coordinate
/// of global role r at frame t.
Eigen::VectorXd flatten(const Play& play);

/// Column r of the result holds flatten(plays[r]).
Eigen::MatrixXd flatten_all(const Dataset& dataset);

/// Baseline feature vector of length 20: shot location, the 4 defenders
/// closest to it (goalkeeper excluded), the 4 closest attackers excluding the
/// shooter, and the goalkeeper, all at the final frame. The shot location is
/// the final-frame position of the attacking player nearest the centre of the
/// defended goal; distance ties break toward the lower role_index.
Eigen::VectorXd handcrafted_features(const Play& play, double pitch_length, double pitch_width);

struct SyntheticConfig {
  int n_teams = 6;
  int n_matches = 420;
  double shots_per_match_mean = 12.0;
  double goal_base_rate = 0.30;

  int tau = 100;
  int m = 22;
  double pitch_length = 105.0;
  double pitch_width = 68.0;
  double frame_rate_hz = 10.0;
  double match_length_s = 5400.0;

  /// Tracking noise applied as a whole-path offset per player plus a small
  /// per-frame jitter, in meters.
  double noise_std = 1.0;

  /// Weights over {free_kick, open_play, corner, counter}.
  std::vector<double> play_type_weights{0.15, 0.55, 0.15, 0.15};

  /// Additive goal-rate offset per motion archetype, one list per play type.
  /// All lists must have the same length (the archetype count).
  std::vector<std::vector<double>> archetype_rate_offsets{
      {0.55, -0.27, 0.05}, {0.55, -0.27, 0.05}, {0.55, -0.27, 0.05}, {0.55, -0.27, 0.05}};

  /// Lateral swing of attacking role 3's run per archetype step; this is the
  /// clusterable trajectory signal the archetype offsets reward.
  double role3_swing_m = 36.0;

  /// Continuous path variation of attacking role 5 with a linear effect on
  /// the goal rate; invisible at the final frame. Inactive when m/2 <= 5.
  double role5_shift_m = 16.0;
  double role5_rate_gain = 0.2;

  /// Per-team additive goal-rate offsets (attack adds, defence subtracts).
  /// Empty means an automatic symmetric spread of +-skill_spread.
  std::vector<double> team_attack_skill;
  std::vector<double> team_defence_skill;
  double skill_spread = 0.04;

  /// Shot timing: a team's expected gap between its shots scales linearly
  /// with its goal difference (trailing shoots sooner, leading later), drops
  /// late in the match, and drops for the home side.
  double trail_gap_factor = 0.25;
  double late_gap_factor = 0.25;
  double home_gap_advantage = 0.10;

  /// When true, each play's storage order and role labels are randomly
  /// permuted, as raw tracking feeds are; the alignment step undoes this.
  bool shuffle_roles = true;

  uint64_t rng_seed = 0;
};

/// Throws std::invalid_argument when rates or counts are out of range.
void validate_config(const SyntheticConfig& config);

/// Seeded synthetic season: matches are simulated as shot timelines whose
/// inter-arrival gaps react to score and clock, and every shot becomes a Play.
Dataset generate_synthetic(const SyntheticConfig& config);

/// Line-delimited JSON, one play per line, after a header line carrying
/// {tau, m, pitch, frame_rate}. Coordinates round-trip exactly.
void save_plays(const Dataset& dataset, const std::string& path);
Dataset load_plays(const std::string& path);

/// Seeded split at match granularity; plays of one match never straddle the
/// boundary. Returns (train, test).
std::pair<Dataset, Dataset> split_by_match(const Dataset& dataset, double train_frac,
                                           uint64_t seed);

}  // namespace playbook
