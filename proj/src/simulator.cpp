#include "playbook/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <set>

#include "playbook/codebook.hpp"
#include "playbook/rng.hpp"

namespace playbook {

std::vector<MatchResult> matches_from_dataset(const Dataset& dataset,
                                              const DeepDecisionTree* tree) {
  std::map<int, MatchResult> by_id;
  for (const Play& play : dataset.plays) {
    const int home = play.is_home ? play.attacking_team : play.defending_team;
    const int away = play.is_home ? play.defending_team : play.attacking_team;
    auto [it, inserted] = by_id.try_emplace(play.match_id);
    MatchResult& match = it->second;
    if (inserted) {
      match.match_id = play.match_id;
      match.home_team = home;
      match.away_team = away;
    } else if (match.home_team != home || match.away_team != away) {
      throw SchemaError("match " + std::to_string(play.match_id) +
                        " has inconsistent home/away teams");
    }
    ShotEvent ev;
    ev.time_s = play.shot_clock_s;
    ev.team = play.attacking_team;
    ev.element = tree != nullptr ? route_hard(*tree, play) : -1;
    ev.goal = play.label;
    match.shots.push_back(ev);
  }
  std::vector<MatchResult> out;
  out.reserve(by_id.size());
  for (auto& [id, match] : by_id) {
    std::stable_sort(match.shots.begin(), match.shots.end(),
                     [](const ShotEvent& a, const ShotEvent& b) { return a.time_s < b.time_s; });
    match.home_goals = 0;
    match.away_goals = 0;
    for (const ShotEvent& ev : match.shots) {
      if (ev.goal == 0) continue;
      if (ev.team == match.home_team)
        ++match.home_goals;
      else
        ++match.away_goals;
    }
    out.push_back(std::move(match));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Poisson season model
// ---------------------------------------------------------------------------

int PoissonSeasonModel::index_of(int team) const {
  const auto it = std::lower_bound(teams.begin(), teams.end(), team);
  if (it == teams.end() || *it != team)
    throw std::invalid_argument("unknown team " + std::to_string(team));
  return static_cast<int>(it - teams.begin());
}

std::pair<double, double> PoissonSeasonModel::thetas(int home_team, int away_team) const {
  const int h = index_of(home_team);
  const int a = index_of(away_team);
  return {std::exp(home + att(h) + def(a)), std::exp(att(a) + def(h))};
}

namespace {

std::vector<int> sorted_teams(const std::vector<MatchResult>& results) {
  std::set<int> ids;
  for (const MatchResult& match : results) {
    ids.insert(match.home_team);
    ids.insert(match.away_team);
  }
  return {ids.begin(), ids.end()};
}

void check_connected(const std::vector<MatchResult>& results, const std::vector<int>& teams) {
  std::map<int, int> parent;
  for (int t : teams) parent[t] = t;
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const MatchResult& match : results) parent[find(match.home_team)] = find(match.away_team);
  int components = 0;
  for (int t : teams)
    if (find(t) == t) ++components;
  if (components > 1)
    throw std::invalid_argument("fit_poisson: schedule is disconnected (" +
                                std::to_string(components) + " components)");
}

}  // namespace

PoissonSeasonModel fit_poisson(const std::vector<MatchResult>& results, double ridge,
                               uint64_t init_seed) {
  if (results.empty()) throw std::invalid_argument("fit_poisson: no matches");
  PoissonSeasonModel model;
  model.teams = sorted_teams(results);
  check_connected(results, model.teams);
  const int T = static_cast<int>(model.teams.size());
  const int P = 1 + 2 * T;  // [home, att..., def...]

  std::vector<std::pair<int, int>> idx;  // (home index, away index)
  idx.reserve(results.size());
  for (const MatchResult& match : results)
    idx.emplace_back(model.index_of(match.home_team), model.index_of(match.away_team));

  Eigen::VectorXd v = Eigen::VectorXd::Zero(P);
  if (init_seed != 0) {
    Rng rng(init_seed);
    for (int i = 0; i < P; ++i) v(i) = rng.normal(0.0, 0.3);
    // start on the constraint manifold
    v.segment(1, T).array() -= v.segment(1, T).mean();
    v.segment(1 + T, T).array() -= v.segment(1 + T, T).mean();
  }
  const auto objective = [&](const Eigen::VectorXd& p) {
    double obj = 0.0;
    for (size_t g = 0; g < results.size(); ++g) {
      const auto [h, a] = idx[g];
      const double log_t1 = p(0) + p(1 + h) + p(1 + T + a);
      const double log_t2 = p(1 + a) + p(1 + T + h);
      obj += std::exp(log_t1) - results[g].home_goals * log_t1;
      obj += std::exp(log_t2) - results[g].away_goals * log_t2;
    }
    obj += ridge * p.segment(1, 2 * T).squaredNorm();
    return obj;
  };

  // Constraints: sum(att) = 0, sum(def) = 0.
  Eigen::MatrixXd E = Eigen::MatrixXd::Zero(2, P);
  E.block(0, 1, 1, T).setOnes();
  E.block(1, 1 + T, 1, T).setOnes();

  double current = objective(v);
  for (int iter = 0; iter < 200; ++iter) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(P);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(P, P);
    for (size_t m = 0; m < results.size(); ++m) {
      const auto [h, a] = idx[m];
      const double t1 = std::exp(v(0) + v(1 + h) + v(1 + T + a));
      const double t2 = std::exp(v(1 + a) + v(1 + T + h));
      const int c1[3] = {0, 1 + h, 1 + T + a};
      const int c2[2] = {1 + a, 1 + T + h};
      const double r1 = t1 - results[m].home_goals;
      const double r2 = t2 - results[m].away_goals;
      for (int i : c1) g(i) += r1;
      for (int i : c2) g(i) += r2;
      for (int i : c1)
        for (int j : c1) H(i, j) += t1;
      for (int i : c2)
        for (int j : c2) H(i, j) += t2;
    }
    g.segment(1, 2 * T) += 2.0 * ridge * v.segment(1, 2 * T);
    H.block(1, 1, 2 * T, 2 * T).diagonal().array() += 2.0 * ridge;

    // Projected gradient on the constraint manifold.
    const Eigen::MatrixXd EEt = E * E.transpose();
    const Eigen::VectorXd g_proj = g - E.transpose() * EEt.ldlt().solve(E * g);
    if (g_proj.norm() < 1e-9) break;

    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(P + 2, P + 2);
    kkt.topLeftCorner(P, P) = H;
    kkt.topRightCorner(P, 2) = E.transpose();
    kkt.bottomLeftCorner(2, P) = E;
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(P + 2);
    rhs.head(P) = -g;
    const Eigen::VectorXd sol = kkt.fullPivLu().solve(rhs);
    Eigen::VectorXd step = sol.head(P);

    double scale = 1.0;
    for (int back = 0; back < 40; ++back) {
      const double candidate = objective(v + scale * step);
      if (candidate <= current + 1e-12) {
        v += scale * step;
        current = candidate;
        break;
      }
      scale *= 0.5;
    }
  }

  model.home = v(0);
  model.att = v.segment(1, T);
  model.def = v.segment(1 + T, T);
  return model;
}

BhmPrediction simulate_bhm(const PoissonSeasonModel& model, int home_team, int away_team,
                           const SimulationConfig& config) {
  if (config.n_runs < 1) throw std::invalid_argument("simulate_bhm: n_runs must be >= 1");
  BhmPrediction pred;
  std::tie(pred.theta_home, pred.theta_away) = model.thetas(home_team, away_team);
  double sum_home = 0.0, sum_away = 0.0;
  for (int run = 0; run < config.n_runs; ++run) {
    Rng rng(hash_combine(config.rng_seed, static_cast<uint64_t>(run)));
    sum_home += rng.poisson(pred.theta_home);
    sum_away += rng.poisson(pred.theta_away);
  }
  pred.mean_home = sum_home / config.n_runs;
  pred.mean_away = sum_away / config.n_runs;
  return pred;
}

// ---------------------------------------------------------------------------
// Shot clock regression
// ---------------------------------------------------------------------------

double ShotClockModel::predict_gap(int team, bool is_home, int goal_diff,
                                   double remaining_frac) const {
  const auto it = std::lower_bound(teams.begin(), teams.end(), team);
  if (it == teams.end() || *it != team)
    throw std::invalid_argument("unknown team " + std::to_string(team));
  const int ti = static_cast<int>(it - teams.begin());
  double gap = weights(0);
  if (ti > 0) gap += weights(ti);  // indicator column for teams[ti]
  if (with_context) {
    const Eigen::Index base = static_cast<Eigen::Index>(teams.size());
    gap += weights(base) * (is_home ? 1.0 : 0.0);
    gap += weights(base + 1) * goal_diff;
    gap += weights(base + 2) * remaining_frac;
  }
  return std::max(1.0, gap);
}

ShotClockModel fit_shot_clock(const std::vector<MatchResult>& results, bool with_context,
                              double match_length_s) {
  ShotClockModel model;
  model.with_context = with_context;
  model.teams = sorted_teams(results);
  const int T = static_cast<int>(model.teams.size());
  const int D = T + (with_context ? 3 : 0);  // intercept + (T-1) indicators + context

  struct Sample {
    int team_index;
    double gap, is_home, goal_diff, remaining;
    bool censored;  // open gap at the final whistle; duration is a lower bound
  };
  std::vector<Sample> samples;
  std::vector<int> per_team(T, 0);

  for (const MatchResult& match : results) {
    struct TeamState {
      double last_t = 0.0;
      int own_at_last = 0, opp_at_last = 0;
    };
    TeamState state_home, state_away;
    int home_score = 0, away_score = 0;
    for (const ShotEvent& ev : match.shots) {
      const bool home_shot = ev.team == match.home_team;
      TeamState& st = home_shot ? state_home : state_away;
      const auto it = std::lower_bound(model.teams.begin(), model.teams.end(), ev.team);
      const int ti = static_cast<int>(it - model.teams.begin());
      Sample s;
      s.team_index = ti;
      s.gap = ev.time_s - st.last_t;
      s.is_home = home_shot ? 1.0 : 0.0;
      s.goal_diff = st.own_at_last - st.opp_at_last;
      s.remaining = 1.0 - st.last_t / match_length_s;
      s.censored = false;
      samples.push_back(s);
      ++per_team[ti];
      if (ev.goal == 1) {
        if (home_shot)
          ++home_score;
        else
          ++away_score;
      }
      st.last_t = ev.time_s;
      st.own_at_last = home_shot ? home_score : away_score;
      st.opp_at_last = home_shot ? away_score : home_score;
    }
    // The gap that is still open at the final whistle would bias every fitted
    // gap short if dropped; keep it as a censored observation.
    for (const bool home_side : {true, false}) {
      const TeamState& st = home_side ? state_home : state_away;
      if (match_length_s - st.last_t <= 0.0) continue;
      const int team = home_side ? match.home_team : match.away_team;
      const auto it = std::lower_bound(model.teams.begin(), model.teams.end(), team);
      Sample s;
      s.team_index = static_cast<int>(it - model.teams.begin());
      s.gap = match_length_s - st.last_t;
      s.is_home = home_side ? 1.0 : 0.0;
      s.goal_diff = st.own_at_last - st.opp_at_last;
      s.remaining = 1.0 - st.last_t / match_length_s;
      s.censored = true;
      samples.push_back(s);
    }
  }

  for (int t = 0; t < T; ++t)
    if (per_team[t] < 10)
      throw std::invalid_argument("fit_shot_clock: team " + std::to_string(model.teams[t]) +
                                  " has only " + std::to_string(per_team[t]) +
                                  " inter-arrival observations (need 10)");

  const Eigen::Index n = static_cast<Eigen::Index>(samples.size());
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, D);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Sample& s = samples[i];
    X(i, 0) = 1.0;
    if (s.team_index > 0) X(i, s.team_index) = 1.0;
    if (with_context) {
      X(i, T) = s.is_home;
      X(i, T + 1) = s.goal_diff;
      X(i, T + 2) = s.remaining;
    }
    y(i) = s.gap;
  }

  // Censored-gap EM under the exponential view: a gap censored at duration c
  // has conditional mean c + predicted gap, so alternate OLS with that
  // imputation. The final solve is a plain least-squares fit of the imputed
  // sample. Iteration 0 fits the uncensored rows only.
  auto solve_ols = [&](const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    if (qr.rank() < D) {
      model.ridge_fallback = true;
      Eigen::MatrixXd normal = A.transpose() * A;
      normal.diagonal().array() += 1e-6;
      return Eigen::VectorXd(normal.ldlt().solve(A.transpose() * b));
    }
    return Eigen::VectorXd(qr.solve(b));
  };

  Eigen::Index n_uncensored = 0;
  for (const Sample& s : samples)
    if (!s.censored) ++n_uncensored;
  Eigen::MatrixXd Xu(n_uncensored, D);
  Eigen::VectorXd yu(n_uncensored);
  for (Eigen::Index i = 0, k = 0; i < n; ++i) {
    if (samples[i].censored) continue;
    Xu.row(k) = X.row(i);
    yu(k) = y(i);
    ++k;
  }
  model.weights = solve_ols(Xu, yu);
  if (n_uncensored < n) {
    for (int iter = 0; iter < 3; ++iter) {
      Eigen::VectorXd y_imputed = y;
      for (Eigen::Index i = 0; i < n; ++i)
        if (samples[i].censored)
          y_imputed(i) = y(i) + std::max(1.0, X.row(i).dot(model.weights));
      model.weights = solve_ols(X, y_imputed);
    }
  }
  return model;
}

// ---------------------------------------------------------------------------
// Event-level match simulation
// ---------------------------------------------------------------------------

int TeamProfiles::index_of(int team) const {
  const auto it = std::lower_bound(teams.begin(), teams.end(), team);
  if (it == teams.end() || *it != team)
    throw std::invalid_argument("unknown team " + std::to_string(team));
  return static_cast<int>(it - teams.begin());
}

TeamProfiles build_profiles(const std::vector<ScoredPlay>& scored, int n_elements) {
  if (scored.empty()) throw std::invalid_argument("build_profiles: no scored plays");
  TeamProfiles profiles;
  profiles.n_elements = n_elements;
  std::set<int> ids;
  for (const ScoredPlay& sp : scored) {
    ids.insert(sp.att_team);
    ids.insert(sp.def_team);
  }
  profiles.teams.assign(ids.begin(), ids.end());
  const int T = static_cast<int>(profiles.teams.size());

  const StrategyDistribution league_off = mean_strategy(scored, n_elements, Side::Offensive);
  const StrategyDistribution league_def = mean_strategy(scored, n_elements, Side::Defensive);
  double global_mean = 0.0;
  for (const ScoredPlay& sp : scored) global_mean += sp.q;
  global_mean /= static_cast<double>(scored.size());

  profiles.shot_freq = Eigen::MatrixXd::Zero(T, n_elements);
  profiles.conversion = Eigen::MatrixXd::Zero(T, n_elements);
  profiles.def_relative = Eigen::MatrixXd::Zero(T, n_elements);
  for (int t = 0; t < T; ++t) {
    const int team = profiles.teams[t];
    const StrategyDistribution off = team_strategy(scored, n_elements, team, Side::Offensive);
    const StrategyDistribution def = team_strategy(scored, n_elements, team, Side::Defensive);
    for (int j = 0; j < n_elements; ++j) {
      profiles.shot_freq(t, j) = off.shots(j);
      if (off.supported(j))
        profiles.conversion(t, j) = off.values(j);
      else if (league_off.supported(j))
        profiles.conversion(t, j) = league_off.values(j);
      else
        profiles.conversion(t, j) = global_mean;
      if (def.supported(j) && league_def.supported(j))
        profiles.def_relative(t, j) = def.values(j) - league_def.values(j);
    }
  }
  return profiles;
}

ScorePrediction simulate_match(const TeamProfiles& profiles, const ShotClockModel& clock,
                               int home_team, int away_team, const SimulationConfig& config,
                               SimMode mode) {
  if (config.n_runs < 1) throw std::invalid_argument("simulate_match: n_runs must be >= 1");
  const int hi = profiles.index_of(home_team);
  const int ai = profiles.index_of(away_team);
  if (profiles.shot_freq.row(hi).sum() <= 0.0 || profiles.shot_freq.row(ai).sum() <= 0.0)
    throw std::invalid_argument("simulate_match: team without any training shots");
  const Eigen::VectorXd freq_home = profiles.shot_freq.row(hi).transpose();
  const Eigen::VectorXd freq_away = profiles.shot_freq.row(ai).transpose();

  double total_home = 0.0, total_away = 0.0;
  for (int run = 0; run < config.n_runs; ++run) {
    Rng rng(hash_combine(config.rng_seed, static_cast<uint64_t>(run)));
    const double t_end = config.match_length_s + rng.uniform(0.0, config.stoppage_max_s);
    int score_home = 0, score_away = 0;
    double now = 0.0;

    const auto gap_for = [&](bool home_side) {
      int goal_diff = 0;
      double remaining = 1.0;
      if (mode == SimMode::Context) {
        goal_diff = home_side ? score_home - score_away : score_away - score_home;
        remaining = std::max(0.0, 1.0 - now / config.match_length_s);
      }
      const double mean = clock.predict_gap(home_side ? home_team : away_team, home_side,
                                            goal_diff, remaining);
      return rng.exponential(mean);
    };

    double next_home = gap_for(true);
    double next_away = gap_for(false);
    while (true) {
      const bool home_shoots = next_home <= next_away;
      const double tn = home_shoots ? next_home : next_away;
      if (tn > t_end) break;
      now = tn;
      const int att = home_shoots ? hi : ai;
      const int def = home_shoots ? ai : hi;
      const int element = rng.categorical(home_shoots ? freq_home : freq_away);
      // non-positive combined value means the shot cannot convert; positive
      // values are clamped away from the Bernoulli extremes
      const double raw = profiles.conversion(att, element) + profiles.def_relative(def, element);
      const double p_goal = raw <= 0.0 ? 0.0 : std::clamp(raw, 0.01, 0.99);
      if (rng.bernoulli(p_goal)) {
        if (home_shoots)
          ++score_home;
        else
          ++score_away;
      }
      next_home = now + gap_for(true);
      next_away = now + gap_for(false);
    }
    total_home += score_home;
    total_away += score_away;
  }
  return {total_home / config.n_runs, total_away / config.n_runs};
}

double evaluate_mse(const std::vector<ScorePrediction>& predictions,
                    const std::vector<std::pair<int, int>>& truths) {
  if (predictions.size() != truths.size())
    throw std::invalid_argument("evaluate_mse: length mismatch");
  if (predictions.empty()) throw std::invalid_argument("evaluate_mse: empty input");
  double total = 0.0;
  for (size_t i = 0; i < predictions.size(); ++i) {
    const double dh = predictions[i].home - truths[i].first;
    const double da = predictions[i].away - truths[i].second;
    total += (dh * dh + da * da) / 2.0;
  }
  return total / static_cast<double>(predictions.size());
}

std::vector<MatchResult> sample_season(const PoissonSeasonModel& model,
                                       const std::vector<std::pair<int, int>>& schedule,
                                       uint64_t seed) {
  std::vector<MatchResult> out;
  out.reserve(schedule.size());
  for (size_t g = 0; g < schedule.size(); ++g) {
    Rng rng(hash_combine(seed, static_cast<uint64_t>(g)));
    const auto [t1, t2] = model.thetas(schedule[g].first, schedule[g].second);
    MatchResult match;
    match.match_id = static_cast<int>(g);
    match.home_team = schedule[g].first;
    match.away_team = schedule[g].second;
    match.home_goals = rng.poisson(t1);
    match.away_goals = rng.poisson(t2);
    out.push_back(std::move(match));
  }
  return out;
}

}  // namespace playbook
