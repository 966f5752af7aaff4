// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Each criterion enforces its own tolerance and time budget.

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <sstream>

#include "playbook/alignment.hpp"
#include "playbook/codebook.hpp"
#include "playbook/deeptree.hpp"
#include "playbook/rng.hpp"
#include "playbook/simulator.hpp"
#include "playbook/strategy.hpp"
#include "playbook/trajectory.hpp"

namespace fs = std::filesystem;
using namespace playbook;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

using CheckFn = std::function<Outcome()>;

Play random_play(Rng& rng, int tau, int half, double L = 105.0, double W = 68.0) {
  Play play;
  for (auto* team : {&play.attacking, &play.defending}) {
    for (int r = 0; r < half; ++r) {
      AgentTrajectory traj;
      traj.role_index = r;
      traj.points.resize(tau, 2);
      for (int t = 0; t < tau; ++t) {
        traj.points(t, 0) = rng.uniform(0.0, L);
        traj.points(t, 1) = rng.uniform(0.0, W);
      }
      team->push_back(std::move(traj));
    }
  }
  return play;
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(4);
  ss << v;
  return ss.str();
}

// --- criterion 1 ------------------------------------------------------------

Outcome check_distortion_oracle() {
  Rng rng(101);
  const int m = 22, half = 11, tau = 100;
  double worst_rel = 0.0;
  for (int pair = 0; pair < 200; ++pair) {
    const Play a = random_play(rng, tau, half);
    const Play b = random_play(rng, tau, half);
    Eigen::VectorXd alpha(m);
    for (int l = 0; l < m; ++l) alpha(l) = rng.uniform(0.0, 2.0);
    alpha = project_to_scaled_simplex(alpha, m);

    const Eigen::VectorXd fa = flatten(a), fb = flatten(b);
    double naive = 0.0;
    for (int l = 0; l < m; ++l) {
      double role = 0.0;
      for (int t = 0; t < tau; ++t)
        for (int c = 0; c < 2; ++c) {
          const double diff = fa(2 * tau * l + 2 * t + c) - fb(2 * tau * l + 2 * t + c);
          role += diff * diff;
        }
      naive += alpha(l) * role;
    }
    const double got = weighted_distortion(a, b, {alpha});
    worst_rel = std::max(worst_rel, std::abs(got - naive) / std::max(1.0, std::abs(naive)));

    // uniform weights: exact equality with the per-role unweighted sum
    double unweighted = 0.0;
    for (int l = 0; l < m; ++l)
      unweighted += (fa.segment(l * 2 * tau, 2 * tau) - fb.segment(l * 2 * tau, 2 * tau)).squaredNorm();
    if (weighted_distortion(a, b, uniform_weights(m)) != unweighted)
      return {false, "uniform-alpha distortion differs from the unweighted value"};
  }
  if (worst_rel > 1e-9) return {false, "relative error " + fmt(worst_rel) + " > 1e-9"};
  return {true, "200 pairs, worst relative error " + fmt(worst_rel)};
}

// --- criterion 2 ------------------------------------------------------------

Outcome check_hungarian() {
  Rng rng(202);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + rng.uniform_int(6);
    Eigen::MatrixXd cost(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cost(i, j) = rng.uniform(0.0, 1.0);
    const Assignment got = hungarian(cost);

    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double total = 0.0;
      for (int i = 0; i < n; ++i) total += cost(i, perm[i]);
      best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    if (got.cost != best)
      return {false, "trial " + std::to_string(trial) + ": cost " + fmt(got.cost) +
                         " != brute force " + fmt(best)};
  }
  return {true, "500 matrices up to 7x7, exact agreement"};
}

// --- criterion 3 ------------------------------------------------------------

Outcome check_gradients() {
  Rng rng(303);
  const int tau = 2, half = 2, m = 4, d = 2 * tau * m;
  Dataset data;
  data.tau = tau;
  data.m = m;
  for (int i = 0; i < 5; ++i) {
    Play p = random_play(rng, tau, half);
    p.play_type = PlayType::OpenPlay;
    p.label = i % 2;
    data.plays.push_back(p);
  }
  const Eigen::VectorXd c0 = flatten(data.plays[0]);
  const Eigen::VectorXd c1 = flatten(data.plays[1]);

  DeepDecisionTree tree;
  tree.tau = tau;
  tree.m = m;
  tree.beta = 1.0 / weighted_distortion_flat(c0, c1, Eigen::VectorXd::Ones(m), 2 * tau);
  for (int pt = 0; pt < kNumPlayTypes; ++pt)
    tree.branches[pt].weights.alpha = Eigen::VectorXd::Ones(m);
  PlayTypeBranch& open = tree.branches[static_cast<int>(PlayType::OpenPlay)];
  TreeNode root, l0, l1;
  root.centroid = (c0 + c1) / 2;
  root.children = {1, 2};
  l0.centroid = c0;
  l0.leaf_id = 0;
  l1.centroid = c1;
  l1.leaf_id = 1;
  open.nodes = {root, l0, l1};
  for (int pt = 0, next = 2; pt < kNumPlayTypes; ++pt) {
    if (pt == static_cast<int>(PlayType::OpenPlay)) continue;
    TreeNode only;
    only.centroid = Eigen::VectorXd::Zero(d);
    only.leaf_id = next++;
    tree.branches[pt].nodes = {only};
  }
  Eigen::VectorXd alpha(m);
  for (int l = 0; l < m; ++l) alpha(l) = rng.uniform(0.3, 1.8);
  open.weights.alpha = project_to_scaled_simplex(alpha, m);
  for (int leaf = 0; leaf < 5; ++leaf) {
    PredictionNode node;
    node.codebook_id = leaf;
    node.play_type = leaf < 2 ? 1 : leaf;
    node.pi = Eigen::VectorXd::Zero(d + 1);
    for (int i = 0; i <= d; ++i) node.pi(i) = rng.normal(0.0, 0.002);
    node.centroid = Eigen::VectorXd::Zero(d);
    tree.leaves.push_back(std::move(node));
  }

  const ObjectiveGrads grads = training_objective(tree, data);
  const double h = 1e-5;
  double worst = 0.0;
  for (int l = 0; l < m; ++l) {
    DeepDecisionTree up = tree, down = tree;
    up.branches[1].weights.alpha(l) += h;
    down.branches[1].weights.alpha(l) -= h;
    const double fd =
        (training_objective(up, data).value - training_objective(down, data).value) / (2 * h);
    worst = std::max(worst,
                     std::abs(grads.grad_alpha[1](l) - fd) / std::max(1e-6, std::abs(fd)));
  }
  for (int leaf : {0, 1}) {
    for (int idx = 0; idx <= d; ++idx) {
      DeepDecisionTree up = tree, down = tree;
      up.leaves[leaf].pi(idx) += h;
      down.leaves[leaf].pi(idx) -= h;
      const double fd =
          (training_objective(up, data).value - training_objective(down, data).value) / (2 * h);
      worst = std::max(worst,
                       std::abs(grads.grad_pi[leaf](idx) - fd) / std::max(1e-6, std::abs(fd)));
    }
  }
  if (worst > 1e-4) return {false, "worst relative gradient error " + fmt(worst) + " > 1e-4"};
  return {true, "alpha and pi gradients, worst relative error " + fmt(worst)};
}

// --- criterion 4 ------------------------------------------------------------

Outcome check_routing() {
  SyntheticConfig gen;
  gen.n_teams = 4;
  gen.n_matches = 60;
  gen.tau = 20;
  gen.m = 10;
  gen.shuffle_roles = false;
  gen.rng_seed = 404;
  const Dataset data = generate_synthetic(gen);
  TreeConfig config;
  config.n_layers = 4;
  config.epochs = 3;
  config.rng_seed = 404;
  const DeepDecisionTree tree = train(data, config);

  Rng rng(405);
  int agree = 0;
  double worst_sum = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Play play = random_play(rng, gen.tau, gen.m / 2);
    play.play_type = static_cast<PlayType>(rng.uniform_int(4));
    const Eigen::VectorXd soft = route_soft(tree, play, tree.beta);
    worst_sum = std::max(worst_sum, std::abs(soft.sum() - 1.0));
    const Eigen::VectorXd sharp = route_soft(tree, play, tree.beta * 1e9);
    Eigen::Index argmax;
    sharp.maxCoeff(&argmax);
    if (static_cast<int>(argmax) == route_hard(tree, play)) ++agree;
  }
  if (worst_sum > 1e-12) return {false, "leaf distribution sum off by " + fmt(worst_sum)};
  if (agree < 990)
    return {false, "beta->inf agreement " + std::to_string(agree) + "/1000 < 990"};
  return {true, "agreement " + std::to_string(agree) + "/1000, sum error " + fmt(worst_sum)};
}

// --- criterion 5 ------------------------------------------------------------

Outcome check_histograms() {
  SyntheticConfig gen;
  gen.n_teams = 6;
  gen.n_matches = 450;
  gen.shots_per_match_mean = 12;
  gen.tau = 20;
  gen.m = 10;
  gen.shuffle_roles = false;
  gen.rng_seed = 505;
  Dataset data = generate_synthetic(gen);
  if (data.plays.size() < 5000) return {false, "generator produced under 5000 plays"};
  data.plays.resize(5000);
  TreeConfig config;
  config.n_layers = 4;
  config.epochs = 3;
  config.rng_seed = 505;
  const DeepDecisionTree tree = train(data, config);
  const HistogramSpec spec = HistogramSpec::uniform(10);
  const auto elements = build_histograms(tree, data, spec);

  long total = 0;
  double worst_mass = 0.0;
  for (const CodebookElement& el : elements) {
    total += el.counts.sum();
    if (el.member_count == 0) continue;
    double mass = 0.0;
    for (int k = 0; k < spec.n_bins(); ++k)
      mass += el.densities(k) * (spec.edges(k + 1) - spec.edges(k));
    worst_mass = std::max(worst_mass, std::abs(mass - 1.0));
  }
  if (total != 5000) return {false, "count conservation broken: " + std::to_string(total)};
  if (worst_mass > 1e-12) return {false, "density mass off by " + fmt(worst_mass)};
  return {true, "sum of counts = N exactly; worst density mass error " + fmt(worst_mass)};
}

// --- criterion 6 ------------------------------------------------------------

Outcome check_strategy_identities() {
  // single-team league: identically zero relative distributions on both sides
  Rng rng(606);
  std::vector<ScoredPlay> solo;
  for (int i = 0; i < 400; ++i)
    solo.push_back({rng.uniform_int(6), rng.uniform(0.0, 1.0), 0, 0});
  for (Side side : {Side::Offensive, Side::Defensive}) {
    const StrategyDistribution mean = mean_strategy(solo, 6, side);
    const StrategyDistribution rel = relative_strategy(team_strategy(solo, 6, 0, side), mean);
    for (int j = 0; j < 6; ++j)
      if (rel.values(j) != 0.0) return {false, "single-team relative value not zero"};
  }

  std::vector<ScoredPlay> league;
  for (int i = 0; i < 5000; ++i) {
    ScoredPlay sp;
    sp.element = rng.uniform_int(8);
    sp.q = rng.uniform(0.0, 1.0);
    sp.att_team = rng.uniform_int(6);
    do {
      sp.def_team = rng.uniform_int(6);
    } while (sp.def_team == sp.att_team);
    league.push_back(sp);
  }
  const StrategyDistribution mean = mean_strategy(league, 8, Side::Offensive);
  double worst = 0.0;
  for (int j = 0; j < 8; ++j) {
    if (!mean.supported(j)) continue;
    double weighted = 0.0;
    int shots = 0;
    for (int team = 0; team < 6; ++team) {
      const StrategyDistribution ts = team_strategy(league, 8, team, Side::Offensive);
      if (!ts.supported(j)) continue;
      weighted += ts.shots(j) * ts.values(j);
      shots += ts.shots(j);
    }
    worst = std::max(worst, std::abs(weighted / shots - mean.values(j)));
  }
  if (worst > 1e-12) return {false, "shot-weighted identity off by " + fmt(worst)};
  return {true, "relative zero for a single team; weighted identity error " + fmt(worst)};
}

// --- criterion 7 ------------------------------------------------------------

Outcome check_short_term_trend() {
  SyntheticConfig gen;  // the bundled dataset: defaults + fixed seed
  gen.rng_seed = 707;
  Dataset data = generate_synthetic(gen);
  if (data.plays.size() < 5000)
    return {false, "generator produced only " + std::to_string(data.plays.size()) + " plays"};
  data.plays.resize(5000);

  auto [train_set, test_set] = split_by_match(data, 0.7, 7);
  data.plays.clear();
  data.plays.shrink_to_fit();

  const FormationTemplate tmpl = learn_template(train_set);
  const Dataset train_aligned = align_dataset(train_set, tmpl);
  const Dataset test_aligned = align_dataset(test_set, tmpl);
  train_set.plays.clear();
  test_set.plays.clear();

  Eigen::MatrixXd Xb(train_aligned.plays.size(), 20);
  Eigen::VectorXd yb(train_aligned.plays.size());
  for (size_t i = 0; i < train_aligned.plays.size(); ++i) {
    Xb.row(i) = handcrafted_features(train_aligned.plays[i], gen.pitch_length, gen.pitch_width);
    yb(i) = train_aligned.plays[i].label;
  }
  const LogisticModel baseline = fit_logistic(Xb, yb);
  Eigen::VectorXd qb(test_aligned.plays.size()), pb(test_aligned.plays.size());
  for (size_t i = 0; i < test_aligned.plays.size(); ++i) {
    qb(i) = baseline.predict(
        handcrafted_features(test_aligned.plays[i], gen.pitch_length, gen.pitch_width));
    pb(i) = test_aligned.plays[i].label;
  }
  const double loss_baseline = mean_logloss(qb, pb);

  TreeConfig config;
  config.rng_seed = 77;
  config.epochs = 60;
  config.eta_pi = 0.1;
  config.n_layers = 2;
  const DeepDecisionTree tree2 = train(train_aligned, config);
  const double loss2 = evaluate_logloss(tree2, test_aligned);

  config.n_layers = 4;
  const DeepDecisionTree tree4 = train(train_aligned, config);
  const double loss4 = evaluate_logloss(tree4, test_aligned);

  const Eigen::VectorXd& alpha =
      tree4.branches[static_cast<int>(PlayType::OpenPlay)].weights.alpha;
  Eigen::Index argmax;
  alpha.maxCoeff(&argmax);

  const std::string detail = "baseline " + fmt(loss_baseline) + " > 2-layer " + fmt(loss2) +
                             " > 4-layer " + fmt(loss4) + "; argmax alpha = role " +
                             std::to_string(argmax);
  if (!(loss_baseline > loss2 && loss2 > loss4)) return {false, "ordering broken: " + detail};
  if (argmax != 3) return {false, "alpha peak not at role 3: " + detail};
  return {true, detail};
}

// --- criterion 8 ------------------------------------------------------------

Outcome check_poisson_recovery() {
  // 380 matches over a 4-team high-scoring league so every parameter sees
  // enough goals for a 0.1-absolute recovery bound
  PoissonSeasonModel truth;
  truth.home = std::log(6.0);
  truth.teams = {0, 1, 2, 3};
  Rng rng(808);
  truth.att.resize(4);
  truth.def.resize(4);
  for (int t = 0; t < 4; ++t) {
    truth.att(t) = rng.normal(0.0, 0.15);
    truth.def(t) = rng.normal(0.0, 0.15);
  }
  truth.att.array() -= truth.att.mean();
  truth.def.array() -= truth.def.mean();

  std::vector<std::pair<int, int>> cycle;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) cycle.emplace_back(i, j);
  std::vector<std::pair<int, int>> schedule;
  while (schedule.size() < 380) schedule.push_back(cycle[schedule.size() % cycle.size()]);
  const auto season = sample_season(truth, schedule, 881);
  const PoissonSeasonModel fit = fit_poisson(season);

  double worst = std::abs(fit.home - truth.home);
  for (int t = 0; t < 4; ++t) {
    worst = std::max(worst, std::abs(fit.att(t) - truth.att(t)));
    worst = std::max(worst, std::abs(fit.def(t) - truth.def(t)));
  }
  if (worst > 0.1) return {false, "parameter recovery error " + fmt(worst) + " > 0.1"};

  SimulationConfig config;
  config.n_runs = 10000;
  config.rng_seed = 882;
  double worst_mc = 0.0;
  for (auto [h, a] : {std::pair{0, 1}, std::pair{2, 3}, std::pair{3, 0}}) {
    const BhmPrediction pred = simulate_bhm(fit, h, a, config);
    worst_mc = std::max(worst_mc, std::abs(pred.mean_home - pred.theta_home) / pred.theta_home);
    worst_mc = std::max(worst_mc, std::abs(pred.mean_away - pred.theta_away) / pred.theta_away);
  }
  if (worst_mc > 0.02) return {false, "Monte-Carlo mean off by " + fmt(worst_mc * 100) + "%"};
  return {true, "recovery error " + fmt(worst) + "; Monte-Carlo error " + fmt(worst_mc * 100) + "%"};
}

// --- criterion 9 ------------------------------------------------------------

Outcome check_simulation_trend() {
  SyntheticConfig gen;
  gen.n_teams = 20;
  gen.n_matches = 380;
  gen.shots_per_match_mean = 24.0;
  gen.goal_base_rate = 0.10;
  gen.archetype_rate_offsets = {{0.12, -0.07, 0.02}, {0.12, -0.07, 0.02},
                                {0.12, -0.07, 0.02}, {0.12, -0.07, 0.02}};
  gen.tau = 20;
  gen.m = 10;
  gen.noise_std = 1.0;
  gen.skill_spread = 0.06;
  gen.trail_gap_factor = 0.12;
  gen.late_gap_factor = 0.30;
  gen.home_gap_advantage = 0.20;
  gen.rng_seed = 909;
  const Dataset season = generate_synthetic(gen);

  double mse_bhm = 0.0, mse_m1 = 0.0, mse_ctx = 0.0;
  for (uint64_t split_seed : {1, 2, 3}) {
    const auto [train_raw, test_raw] = split_by_match(season, 0.7, split_seed);
    const FormationTemplate tmpl = learn_template(train_raw);
    const Dataset train_set = align_dataset(train_raw, tmpl);
    const Dataset test_set = align_dataset(test_raw, tmpl);

    TreeConfig config;
    config.n_layers = 3;
    config.epochs = 20;
    config.eta_pi = 0.1;
    config.rng_seed = split_seed;
    const DeepDecisionTree tree = train(train_set, config);

    const auto train_matches = matches_from_dataset(train_set);
    const auto test_matches = matches_from_dataset(test_set);
    const PoissonSeasonModel poisson = fit_poisson(train_matches);
    const ShotClockModel clock_m1 = fit_shot_clock(train_matches, false, gen.match_length_s);
    const ShotClockModel clock_ctx = fit_shot_clock(train_matches, true, gen.match_length_s);
    const TeamProfiles profiles = build_profiles(score_dataset(tree, train_set, true),
                                                 static_cast<int>(tree.leaves.size()));

    std::vector<ScorePrediction> pb, pm, pc;
    std::vector<std::pair<int, int>> truths;
    for (const MatchResult& match : test_matches) {
      SimulationConfig cfg;
      cfg.n_runs = 1000;
      cfg.match_length_s = gen.match_length_s;
      cfg.stoppage_max_s = 0.0;  // the synthetic season has no stoppage play
      cfg.rng_seed = hash_combine(split_seed, static_cast<uint64_t>(match.match_id));
      const BhmPrediction bhm = simulate_bhm(poisson, match.home_team, match.away_team, cfg);
      pb.push_back({bhm.mean_home, bhm.mean_away});
      pm.push_back(simulate_match(profiles, clock_m1, match.home_team, match.away_team, cfg,
                                  SimMode::M1));
      pc.push_back(simulate_match(profiles, clock_ctx, match.home_team, match.away_team, cfg,
                                  SimMode::Context));
      truths.emplace_back(match.home_goals, match.away_goals);
    }
    mse_bhm += evaluate_mse(pb, truths) / 3.0;
    mse_m1 += evaluate_mse(pm, truths) / 3.0;
    mse_ctx += evaluate_mse(pc, truths) / 3.0;
  }
  const std::string detail =
      "MSE context " + fmt(mse_ctx) + ", bhm " + fmt(mse_bhm) + ", m1 " + fmt(mse_m1);
  if (!(mse_ctx < mse_bhm && mse_ctx < mse_m1)) return {false, "ordering broken: " + detail};
  return {true, detail};
}

// --- criterion 10 -----------------------------------------------------------

Outcome check_cli_determinism() {
  const fs::path dir = fs::temp_directory_path() / "playbook_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path config = dir / "config.json";
  std::ofstream(config) << R"({
    "synthetic": {"n_teams": 4, "n_matches": 20, "shots_per_match_mean": 10,
                   "tau": 6, "m": 10, "rng_seed": 5},
    "tree": {"n_layers": 3, "epochs": 3, "rng_seed": 5},
    "simulation": {"n_runs": 50, "rng_seed": 5}
  })";

  auto run = [&](const std::string& args) {
    const std::string cmd = std::string(PLAYBOOK_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    return WEXITSTATUS(std::system(cmd.c_str()));
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  for (const char* rep : {"a", "b"}) {
    const std::string out = (dir / rep).string();
    const std::string cfg = " --config " + config.string();
    if (run("generate" + cfg + " --seed 5 --out " + out) != 0) return {false, "generate failed"};
    if (run("align --plays " + out + "/plays.jsonl --out " + out) != 0)
      return {false, "align failed"};
    if (run("train" + cfg + " --plays " + out + "/aligned.jsonl --seed 5 --out " + out) != 0)
      return {false, "train failed"};
    if (run("evaluate" + cfg + " --plays " + out + "/aligned.jsonl --split-seed 1 --layers 2 "
            "--layers 3 --out " + out) != 0)
      return {false, "evaluate failed"};
    if (run("codebook --plays " + out + "/aligned.jsonl --tree " + out + "/tree.json --out " +
            out) != 0)
      return {false, "codebook failed"};
    if (run("strategy --plays " + out + "/aligned.jsonl --tree " + out + "/tree.json --out " +
            out) != 0)
      return {false, "strategy failed"};
    if (run("simulate" + cfg + " --plays " + out + "/aligned.jsonl --tree " + out +
            "/tree.json --split-seed 1 --seed 5 --out " + out) != 0)
      return {false, "simulate failed"};
  }
  for (const char* artifact :
       {"plays.jsonl", "template.json", "aligned.jsonl", "tree.json", "evaluation.csv",
        "playbook_trajectories.csv", "playbook_histograms.csv", "strategy.csv",
        "simulation_matches.csv", "simulation_summary.csv"}) {
    if (slurp(dir / "a" / artifact) != slurp(dir / "b" / artifact))
      return {false, std::string(artifact) + " differs between identical runs"};
    if (fs::file_size(dir / "a" / artifact) == 0)
      return {false, std::string(artifact) + " is empty"};
  }
  return {true, "all subcommand artifacts byte-identical across repeated runs"};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;
    CheckFn fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "weighted distortion oracle", 1.0, check_distortion_oracle},
      {2, "optimal assignment vs brute force", 5.0, check_hungarian},
      {3, "analytic gradients vs finite differences", 60.0, check_gradients},
      {4, "soft/hard routing consistency", 120.0, check_routing},
      {5, "histogram conservation", 300.0, check_histograms},
      {6, "strategy identities", 60.0, check_strategy_identities},
      {7, "short-term prediction trend", 300.0, check_short_term_trend},
      {8, "Poisson season recovery", 120.0, check_poisson_recovery},
      {9, "match simulation trend", 600.0, check_simulation_trend},
      {10, "CLI determinism", 300.0, check_cli_determinism},
  };

  int failures = 0;
  for (const Criterion& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = criterion.fn();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (elapsed > criterion.budget_s) {
      outcome.pass = false;
      outcome.detail += " [over time budget " + fmt(criterion.budget_s) + "s]";
    }
    std::cout << (outcome.pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion.id << ": "
              << criterion.name << " (" << fmt(elapsed) << "s) — " << outcome.detail << "\n";
    if (!outcome.pass) ++failures;
  }
  if (failures > 0) {
    std::cout << failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all 10 criteria passed\n";
  return 0;
}
