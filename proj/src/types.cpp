#include "playbook/types.hpp"

#include <cmath>

namespace playbook {

const char* to_wire(PlayType t) {
  switch (t) {
    case PlayType::FreeKick:
      return "free_kick";
    case PlayType::OpenPlay:
      return "open_play";
    case PlayType::Corner:
      return "corner";
    case PlayType::CounterAttack:
      return "counter";
  }
  throw std::invalid_argument("unknown play type");
}

PlayType play_type_from_wire(const std::string& s) {
  if (s == "free_kick") return PlayType::FreeKick;
  if (s == "open_play") return PlayType::OpenPlay;
  if (s == "corner") return PlayType::Corner;
  if (s == "counter") return PlayType::CounterAttack;
  throw SchemaError("unknown play_type \"" + s + "\"");
}

namespace {

void validate_team(const std::vector<AgentTrajectory>& team, int half, int tau,
                   double pitch_length, double pitch_width, const std::string& side,
                   const std::string& context) {
  auto fail = [&](const std::string& msg) {
    throw SchemaError(context.empty() ? msg : context + ": " + msg);
  };
  if (static_cast<int>(team.size()) != half)
    fail(side + " side has " + std::to_string(team.size()) + " trajectories, expected " +
         std::to_string(half));
  std::vector<bool> seen(half, false);
  for (const AgentTrajectory& traj : team) {
    if (traj.role_index < 0 || traj.role_index >= half)
      fail(side + " role_index " + std::to_string(traj.role_index) + " out of range");
    if (seen[traj.role_index]) fail(side + " role_index " + std::to_string(traj.role_index) + " repeated");
    seen[traj.role_index] = true;
    if (traj.points.rows() != tau)
      fail(side + " role " + std::to_string(traj.role_index) + " has " +
           std::to_string(traj.points.rows()) + " frames, expected " + std::to_string(tau));
    for (Eigen::Index f = 0; f < traj.points.rows(); ++f) {
      const double x = traj.points(f, 0);
      const double y = traj.points(f, 1);
      if (!std::isfinite(x) || !std::isfinite(y))
        fail(side + " role " + std::to_string(traj.role_index) + " has non-finite coordinate");
      if (x < 0.0 || x > pitch_length || y < 0.0 || y > pitch_width)
        fail(side + " role " + std::to_string(traj.role_index) + " leaves the pitch at frame " +
             std::to_string(f));
    }
  }
}

}  // namespace

void validate_play(const Play& play, int tau, int m, double pitch_length, double pitch_width,
                   const std::string& context) {
  if (m <= 0 || m % 2 != 0) throw SchemaError("m must be positive and even");
  const int half = m / 2;
  validate_team(play.attacking, half, tau, pitch_length, pitch_width, "attacking", context);
  validate_team(play.defending, half, tau, pitch_length, pitch_width, "defending", context);
  if (play.label != 0 && play.label != 1)
    throw SchemaError((context.empty() ? "" : context + ": ") + "label must be 0 or 1");
}

void validate_dataset(const Dataset& dataset) {
  if (dataset.tau <= 0) throw SchemaError("tau must be positive");
  for (size_t i = 0; i < dataset.plays.size(); ++i)
    validate_play(dataset.plays[i], dataset.tau, dataset.m, dataset.pitch_length,
                  dataset.pitch_width, "play " + std::to_string(i));
}

const AgentTrajectory* find_role(const std::vector<AgentTrajectory>& team, int role_index) {
  for (const AgentTrajectory& traj : team)
    if (traj.role_index == role_index) return &traj;
  return nullptr;
}

namespace {

bool team_equal(const std::vector<AgentTrajectory>& a, const std::vector<AgentTrajectory>& b) {
  if (a.size() != b.size()) return false;
  for (const AgentTrajectory& ta : a) {
    const AgentTrajectory* tb = find_role(b, ta.role_index);
    if (tb == nullptr) return false;
    if (ta.points.rows() != tb->points.rows()) return false;
    if (ta.points != tb->points) return false;
  }
  return true;
}

}  // namespace

bool operator==(const Play& a, const Play& b) {
  return a.label == b.label && a.play_type == b.play_type &&
         a.attacking_team == b.attacking_team && a.defending_team == b.defending_team &&
         a.is_home == b.is_home && a.shot_clock_s == b.shot_clock_s && a.match_id == b.match_id &&
         team_equal(a.attacking, b.attacking) && team_equal(a.defending, b.defending);
}

bool operator==(const Dataset& a, const Dataset& b) {
  return a.tau == b.tau && a.m == b.m && a.pitch_length == b.pitch_length &&
         a.pitch_width == b.pitch_width && a.frame_rate_hz == b.frame_rate_hz &&
         a.team_ids == b.team_ids && a.plays == b.plays;
}

}  // namespace playbook
