#pragma once

#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace playbook {

/// Raised by loaders when a file violates the expected schema; the CLI maps
/// it to its own exit code.
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class PlayType : int { FreeKick = 0, OpenPlay = 1, Corner = 2, CounterAttack = 3 };
inline constexpr int kNumPlayTypes = 4;

const char* to_wire(PlayType t);
PlayType play_type_from_wire(const std::string& s);

/// One player's path over the play window. Coordinates are meters with the
/// origin at the attacking team's left corner flag, attack direction
/// normalized left-to-right.
struct AgentTrajectory {
  int role_index = 0;
  Eigen::MatrixX2d points;  // one row per frame: (x, y)
};

/// Fixed-length window of all player trajectories ending at a shot.
struct Play {
  std::vector<AgentTrajectory> attacking;  // m/2 trajectories
  std::vector<AgentTrajectory> defending;  // m/2 trajectories
  int label = 0;                           // 1 iff the terminating shot scored
  PlayType play_type = PlayType::OpenPlay;
  int attacking_team = 0;
  int defending_team = 0;
  bool is_home = true;  // attacking team is the match's home side
  double shot_clock_s = 0.0;
  int match_id = 0;
};

struct Dataset {
  std::vector<Play> plays;
  int tau = 100;
  int m = 22;
  double pitch_length = 105.0;
  double pitch_width = 68.0;
  double frame_rate_hz = 10.0;
  std::set<int> team_ids;
};

/// Checks the play invariants: trajectory lengths, role permutations, finite
/// in-bounds coordinates. Throws SchemaError with `context` in the message.
void validate_play(const Play& play, int tau, int m, double pitch_length, double pitch_width,
                   const std::string& context = "");

void validate_dataset(const Dataset& dataset);

/// Trajectory of the given role, or nullptr.
const AgentTrajectory* find_role(const std::vector<AgentTrajectory>& team, int role_index);

/// Equality is role-wise: storage order of trajectories within a team does
/// not matter, only which path each role follows.
bool operator==(const Play& a, const Play& b);
bool operator==(const Dataset& a, const Dataset& b);

}  // namespace playbook
