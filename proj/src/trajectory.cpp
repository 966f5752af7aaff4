#include "playbook/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "playbook/rng.hpp"

namespace playbook {

Eigen::VectorXd flatten(const Play& play) {
  const int half = static_cast<int>(play.attacking.size());
  const int m = 2 * half;
  const Eigen::Index tau = play.attacking.empty() ? 0 : play.attacking.front().points.rows();
  Eigen::VectorXd out(2 * tau * m);
  auto put = [&](const std::vector<AgentTrajectory>& team, int base_role) {
    for (const AgentTrajectory& traj : team) {
      const Eigen::Index r = base_role + traj.role_index;
      for (Eigen::Index t = 0; t < tau; ++t) {
        out(2 * tau * r + 2 * t) = traj.points(t, 0);
        out(2 * tau * r + 2 * t + 1) = traj.points(t, 1);
      }
    }
  };
  put(play.attacking, 0);
  put(play.defending, half);
  return out;
}

Eigen::MatrixXd flatten_all(const Dataset& dataset) {
  const Eigen::Index d = 2 * static_cast<Eigen::Index>(dataset.tau) * dataset.m;
  Eigen::MatrixXd X(d, static_cast<Eigen::Index>(dataset.plays.size()));
  for (size_t i = 0; i < dataset.plays.size(); ++i) X.col(static_cast<Eigen::Index>(i)) = flatten(dataset.plays[i]);
  return X;
}

namespace {

Eigen::Vector2d final_pos(const AgentTrajectory& traj) {
  return traj.points.row(traj.points.rows() - 1).transpose();
}

/// Roles sorted by final-frame squared distance to `target`, ties toward the
/// lower role index.
std::vector<int> roles_by_distance(const std::vector<AgentTrajectory>& team,
                                   const Eigen::Vector2d& target, const std::vector<int>& roles) {
  std::vector<std::pair<double, int>> order;
  order.reserve(roles.size());
  for (int r : roles) {
    const AgentTrajectory* traj = find_role(team, r);
    order.emplace_back((final_pos(*traj) - target).squaredNorm(), r);
  }
  std::sort(order.begin(), order.end());
  std::vector<int> out;
  out.reserve(order.size());
  for (const auto& [d, r] : order) out.push_back(r);
  return out;
}

}  // namespace

Eigen::VectorXd handcrafted_features(const Play& play, double pitch_length, double pitch_width) {
  const int half = static_cast<int>(play.attacking.size());
  if (half < 5)
    throw std::invalid_argument("handcrafted features need at least 5 players per side");

  const Eigen::Vector2d goal_center(pitch_length, pitch_width / 2.0);

  int shooter = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < half; ++r) {
    const double d = (final_pos(*find_role(play.attacking, r)) - goal_center).squaredNorm();
    if (d < best) {
      best = d;
      shooter = r;
    }
  }
  const Eigen::Vector2d shot = final_pos(*find_role(play.attacking, shooter));

  std::vector<int> defender_roles;  // goalkeeper (defending role 0) excluded
  for (int r = 1; r < half; ++r) defender_roles.push_back(r);
  std::vector<int> attacker_roles;
  for (int r = 0; r < half; ++r)
    if (r != shooter) attacker_roles.push_back(r);

  const std::vector<int> near_def = roles_by_distance(play.defending, shot, defender_roles);
  const std::vector<int> near_att = roles_by_distance(play.attacking, shot, attacker_roles);

  Eigen::VectorXd out(20);
  out.segment<2>(0) = shot;
  for (int i = 0; i < 4; ++i)
    out.segment<2>(2 + 2 * i) = final_pos(*find_role(play.defending, near_def[i]));
  for (int i = 0; i < 4; ++i)
    out.segment<2>(10 + 2 * i) = final_pos(*find_role(play.attacking, near_att[i]));
  out.segment<2>(18) = final_pos(*find_role(play.defending, 0));
  return out;
}

// ---------------------------------------------------------------------------
// Synthetic generator
// ---------------------------------------------------------------------------

void validate_config(const SyntheticConfig& c) {
  auto bad = [](const std::string& msg) { throw std::invalid_argument("synthetic config: " + msg); };
  if (c.n_teams < 2) bad("n_teams must be >= 2");
  if (c.n_matches < 1) bad("n_matches must be >= 1");
  if (c.shots_per_match_mean <= 0) bad("shots_per_match_mean must be positive");
  if (c.goal_base_rate < 0 || c.goal_base_rate > 1) bad("goal_base_rate must be in [0,1]");
  if (c.tau < 1) bad("tau must be >= 1");
  if (c.m < 2 || c.m % 2 != 0) bad("m must be even and >= 2");
  if (c.pitch_length <= 0 || c.pitch_width <= 0) bad("pitch dimensions must be positive");
  if (c.match_length_s <= 0) bad("match_length_s must be positive");
  if (c.noise_std < 0) bad("noise_std must be non-negative");
  if (c.play_type_weights.size() != kNumPlayTypes) bad("play_type_weights needs 4 entries");
  double wsum = 0;
  for (double w : c.play_type_weights) {
    if (w < 0) bad("play_type_weights must be non-negative");
    wsum += w;
  }
  if (wsum <= 0) bad("play_type_weights must not all be zero");
  if (c.archetype_rate_offsets.size() != kNumPlayTypes) bad("archetype_rate_offsets needs 4 lists");
  const size_t k = c.archetype_rate_offsets.front().size();
  if (k == 0) bad("need at least one archetype per play type");
  for (const auto& v : c.archetype_rate_offsets)
    if (v.size() != k) bad("archetype lists must all have the same length");
  for (const auto* skills : {&c.team_attack_skill, &c.team_defence_skill})
    if (!skills->empty() && static_cast<int>(skills->size()) != c.n_teams)
      bad("team skill vectors must have n_teams entries");
  if (c.trail_gap_factor < 0 || c.trail_gap_factor >= 1) bad("trail_gap_factor must be in [0,1)");
  if (c.late_gap_factor < 0 || c.late_gap_factor >= 1) bad("late_gap_factor must be in [0,1)");
  if (c.home_gap_advantage < 0 || c.home_gap_advantage >= 1)
    bad("home_gap_advantage must be in [0,1)");
}

namespace {

struct Slots {
  Eigen::MatrixX2d attacking;  // row per role, ascending mean x
  Eigen::MatrixX2d defending;  // row per role, descending mean x (goalkeeper first)
};

/// Deterministic formation skeleton shared by every play type. Role order is
/// chosen so that time-averaged x positions are strictly ordered; the learned
/// formation template then reproduces these indices.
Slots formation_slots(int half, double L, double W) {
  Slots s;
  s.attacking.resize(half, 2);
  s.defending.resize(half, 2);
  s.attacking.row(0) << 0.05 * L, 0.50 * W;  // attacking goalkeeper
  s.defending.row(0) << 0.97 * L, 0.50 * W;  // defending goalkeeper
  for (int r = 1; r < half; ++r) {
    const double fr = half > 2 ? static_cast<double>(r - 1) / (half - 2) : 0.0;
    double ya = W * (0.50 + 0.40 * std::sin(r * 2.3998));
    double yd = W * (0.50 + 0.40 * std::sin((r + 2) * 2.3998));
    if (r == 3) ya = 0.50 * W;  // keep the role-3 run corridor central
    if (r == 4) ya = 0.12 * W;  // and its x-neighbour clear of that corridor
    if (r == 5) ya = 0.80 * W;
    s.attacking.row(r) << L * (0.32 + 0.58 * fr), ya;
    s.defending.row(r) << L * (0.90 - 0.42 * fr), yd;
  }
  return s;
}

double attacker_advance(PlayType t) {
  switch (t) {
    case PlayType::FreeKick: return 6.0;
    case PlayType::OpenPlay: return 12.0;
    case PlayType::Corner: return 2.0;
    case PlayType::CounterAttack: return 30.0;
  }
  return 0.0;
}

double defender_retreat(PlayType t) {
  switch (t) {
    case PlayType::FreeKick: return 3.0;
    case PlayType::OpenPlay: return 8.0;
    case PlayType::Corner: return 1.0;
    case PlayType::CounterAttack: return 25.0;
  }
  return 0.0;
}

/// Quadratic Bezier sampled over tau frames, with a per-play whole-path
/// offset and per-frame jitter, clamped to the pitch.
AgentTrajectory make_trajectory(int role, const Eigen::Vector2d& slot, double advance,
                                const Eigen::Vector2d& control_shift, int tau, double L, double W,
                                double noise_std, Rng& rng) {
  // Symmetric start/end around the slot keeps the time-averaged position at
  // the slot regardless of how far the role sweeps.
  const double margin = 2.0;
  const double adv = std::max(0.5, std::min({advance, 2.0 * (L - margin - slot.x()),
                                             2.0 * (slot.x() - margin)}));
  const Eigen::Vector2d offset(rng.normal(0.0, noise_std), rng.normal(0.0, noise_std));
  const Eigen::Vector2d start = slot + offset - Eigen::Vector2d(adv / 2.0, 0.0);
  const Eigen::Vector2d end = slot + offset + Eigen::Vector2d(adv / 2.0, 0.0);
  const Eigen::Vector2d control = slot + offset + control_shift;

  AgentTrajectory traj;
  traj.role_index = role;
  traj.points.resize(tau, 2);
  const double jitter = noise_std / 8.0;
  for (int i = 0; i < tau; ++i) {
    const double t = tau > 1 ? static_cast<double>(i) / (tau - 1) : 1.0;
    Eigen::Vector2d p = (1 - t) * (1 - t) * start + 2 * t * (1 - t) * control + t * t * end;
    p.x() = std::clamp(p.x() + rng.normal(0.0, jitter), 0.0, L);
    p.y() = std::clamp(p.y() + rng.normal(0.0, jitter), 0.0, W);
    traj.points.row(i) = p.transpose();
  }
  return traj;
}

std::vector<double> default_skills(int n_teams, double spread, int rotate) {
  std::vector<double> out(n_teams);
  for (int t = 0; t < n_teams; ++t) {
    const int k = (t + rotate) % n_teams;
    const double lin = n_teams > 1 ? 2.0 * k / (n_teams - 1) - 1.0 : 0.0;
    out[t] = spread * lin;
  }
  return out;
}

}  // namespace

Dataset generate_synthetic(const SyntheticConfig& config) {
  validate_config(config);
  Rng rng(config.rng_seed);

  const int half = config.m / 2;
  const double L = config.pitch_length;
  const double W = config.pitch_width;
  const Slots slots = formation_slots(half, L, W);
  const int n_archetypes = static_cast<int>(config.archetype_rate_offsets.front().size());
  const bool role5_active = half > 5 && config.role5_shift_m != 0.0;

  const std::vector<double> att_skill = config.team_attack_skill.empty()
                                            ? default_skills(config.n_teams, config.skill_spread, 0)
                                            : config.team_attack_skill;
  const std::vector<double> def_skill =
      config.team_defence_skill.empty()
          ? default_skills(config.n_teams, config.skill_spread, config.n_teams / 2)
          : config.team_defence_skill;

  Eigen::VectorXd type_weights(kNumPlayTypes);
  for (int i = 0; i < kNumPlayTypes; ++i) type_weights(i) = config.play_type_weights[i];

  // Double round robin schedule, cycled to n_matches.
  std::vector<std::pair<int, int>> schedule;
  for (int i = 0; i < config.n_teams; ++i)
    for (int j = 0; j < config.n_teams; ++j)
      if (i != j) schedule.emplace_back(i, j);

  Dataset out;
  out.tau = config.tau;
  out.m = config.m;
  out.pitch_length = L;
  out.pitch_width = W;
  out.frame_rate_hz = config.frame_rate_hz;
  for (int t = 0; t < config.n_teams; ++t) out.team_ids.insert(t);

  const double base_gap = 2.0 * config.match_length_s / config.shots_per_match_mean;

  for (int match = 0; match < config.n_matches; ++match) {
    const auto [home, away] = schedule[match % schedule.size()];
    int score_home = 0, score_away = 0;
    double now = 0.0;

    auto gap_mean = [&](int team) {
      const bool is_home = team == home;
      const int own = is_home ? score_home : score_away;
      const int opp = is_home ? score_away : score_home;
      const double remaining = 1.0 - now / config.match_length_s;
      // additive-linear context response (trailing shoots sooner, leading
      // later; gaps shrink late), floored away from zero
      double f = 1.0;
      if (is_home) f -= config.home_gap_advantage;
      f -= config.late_gap_factor * (1.0 - remaining);
      f += config.trail_gap_factor * (own - opp);
      return std::max(30.0, base_gap * std::max(0.08, f));
    };
    double next_home = rng.exponential(gap_mean(home));
    double next_away = rng.exponential(gap_mean(away));

    while (true) {
      const bool home_shoots = next_home <= next_away;
      const double tn = home_shoots ? next_home : next_away;
      if (tn > config.match_length_s) break;
      now = tn;
      const int att = home_shoots ? home : away;
      const int def = home_shoots ? away : home;

      const PlayType type = static_cast<PlayType>(rng.categorical(type_weights));
      const int archetype = rng.uniform_int(n_archetypes);
      const double u = rng.uniform(-1.0, 1.0);
      const double archetype_step =
          n_archetypes > 1 ? 2.0 * archetype / (n_archetypes - 1) - 1.0 : 0.0;

      double rate = config.goal_base_rate + config.archetype_rate_offsets[static_cast<int>(type)][archetype] +
                    att_skill[att] - def_skill[def];
      if (role5_active) rate += config.role5_rate_gain * u;
      rate = std::clamp(rate, 0.0, 1.0);

      Play play;
      play.play_type = type;
      play.attacking_team = att;
      play.defending_team = def;
      play.is_home = home_shoots;
      play.shot_clock_s = tn;
      play.match_id = match;
      play.label = rng.bernoulli(rate) ? 1 : 0;
      const double adv_a = attacker_advance(type);
      const double adv_d = defender_retreat(type);
      for (int r = 0; r < half; ++r) {
        Eigen::Vector2d shift = Eigen::Vector2d::Zero();
        if (r == 3) shift.y() = config.role3_swing_m * archetype_step;
        if (r == 5 && role5_active) shift.y() = config.role5_shift_m * u;
        play.attacking.push_back(make_trajectory(r, slots.attacking.row(r).transpose(),
                                                 r == 0 ? 1.0 : adv_a, shift, config.tau, L, W,
                                                 config.noise_std, rng));
      }
      for (int r = 0; r < half; ++r)
        play.defending.push_back(make_trajectory(r, slots.defending.row(r).transpose(),
                                                 r == 0 ? 0.5 : adv_d, Eigen::Vector2d::Zero(),
                                                 config.tau, L, W, config.noise_std, rng));

      if (config.shuffle_roles) {
        for (auto* team : {&play.attacking, &play.defending}) {
          std::vector<int> relabel(half);
          for (int r = 0; r < half; ++r) relabel[r] = r;
          rng.shuffle(relabel);
          for (int r = 0; r < half; ++r) (*team)[r].role_index = relabel[r];
          rng.shuffle(*team);
        }
      }

      if (play.label == 1) {
        if (home_shoots)
          ++score_home;
        else
          ++score_away;
      }
      out.plays.push_back(std::move(play));

      next_home = now + rng.exponential(gap_mean(home));
      next_away = now + rng.exponential(gap_mean(away));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Persistence (line-delimited JSON)
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json team_to_json(const std::vector<AgentTrajectory>& team) {
  json roles = json::array();
  for (size_t r = 0; r < team.size(); ++r) {
    const AgentTrajectory* traj = find_role(team, static_cast<int>(r));
    json points = json::array();
    for (Eigen::Index t = 0; t < traj->points.rows(); ++t)
      points.push_back(json::array({traj->points(t, 0), traj->points(t, 1)}));
    roles.push_back(std::move(points));
  }
  return roles;
}

std::vector<AgentTrajectory> team_from_json(const json& roles) {
  std::vector<AgentTrajectory> team;
  for (size_t r = 0; r < roles.size(); ++r) {
    AgentTrajectory traj;
    traj.role_index = static_cast<int>(r);
    const json& points = roles[r];
    traj.points.resize(static_cast<Eigen::Index>(points.size()), 2);
    for (size_t t = 0; t < points.size(); ++t) {
      traj.points(static_cast<Eigen::Index>(t), 0) = points[t].at(0).get<double>();
      traj.points(static_cast<Eigen::Index>(t), 1) = points[t].at(1).get<double>();
    }
    team.push_back(std::move(traj));
  }
  return team;
}

}  // namespace

void save_plays(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  json header = {{"tau", dataset.tau},
                 {"m", dataset.m},
                 {"pitch", {{"length", dataset.pitch_length}, {"width", dataset.pitch_width}}},
                 {"frame_rate", dataset.frame_rate_hz}};
  out << header.dump() << '\n';
  for (const Play& play : dataset.plays) {
    json j = {{"roles_att", team_to_json(play.attacking)},
              {"roles_def", team_to_json(play.defending)},
              {"label", play.label},
              {"play_type", to_wire(play.play_type)},
              {"att_team", play.attacking_team},
              {"def_team", play.defending_team},
              {"is_home", play.is_home},
              {"clock_s", play.shot_clock_s},
              {"match_id", play.match_id}};
    out << j.dump() << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

Dataset load_plays(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::string line;
  if (!std::getline(in, line) || line.empty())
    throw SchemaError(path + ": missing header line");

  Dataset dataset;
  try {
    const json header = json::parse(line);
    dataset.tau = header.at("tau").get<int>();
    dataset.m = header.at("m").get<int>();
    dataset.pitch_length = header.at("pitch").at("length").get<double>();
    dataset.pitch_width = header.at("pitch").at("width").get<double>();
    dataset.frame_rate_hz = header.at("frame_rate").get<double>();
  } catch (const json::exception& e) {
    throw SchemaError(path + " line 1 (header): " + e.what());
  }

  int line_no = 1;
  size_t play_index = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Play play;
    try {
      const json j = json::parse(line);
      play.attacking = team_from_json(j.at("roles_att"));
      play.defending = team_from_json(j.at("roles_def"));
      play.label = j.at("label").get<int>();
      play.play_type = play_type_from_wire(j.at("play_type").get<std::string>());
      play.attacking_team = j.at("att_team").get<int>();
      play.defending_team = j.at("def_team").get<int>();
      play.is_home = j.at("is_home").get<bool>();
      play.shot_clock_s = j.at("clock_s").get<double>();
      play.match_id = j.at("match_id").get<int>();
    } catch (const SchemaError&) {
      throw;
    } catch (const json::exception& e) {
      throw SchemaError(path + " line " + std::to_string(line_no) + ": " + e.what());
    }
    validate_play(play, dataset.tau, dataset.m, dataset.pitch_length, dataset.pitch_width,
                  path + " play " + std::to_string(play_index) + " (line " +
                      std::to_string(line_no) + ")");
    dataset.team_ids.insert(play.attacking_team);
    dataset.team_ids.insert(play.defending_team);
    dataset.plays.push_back(std::move(play));
    ++play_index;
  }
  return dataset;
}

std::pair<Dataset, Dataset> split_by_match(const Dataset& dataset, double train_frac,
                                           uint64_t seed) {
  if (train_frac < 0.0 || train_frac > 1.0)
    throw std::invalid_argument("train_frac must be in [0,1]");
  std::set<int> ids;
  for (const Play& p : dataset.plays) ids.insert(p.match_id);
  std::vector<int> order(ids.begin(), ids.end());
  Rng rng(seed);
  rng.shuffle(order);
  const size_t n_train = static_cast<size_t>(std::llround(train_frac * order.size()));
  std::set<int> train_ids(order.begin(), order.begin() + n_train);

  Dataset train = dataset, test = dataset;
  train.plays.clear();
  test.plays.clear();
  train.team_ids.clear();
  test.team_ids.clear();
  for (const Play& p : dataset.plays) {
    Dataset& dst = train_ids.count(p.match_id) ? train : test;
    dst.plays.push_back(p);
    dst.team_ids.insert(p.attacking_team);
    dst.team_ids.insert(p.defending_team);
  }
  return {std::move(train), std::move(test)};
}

}  // namespace playbook
