#include <doctest.h>

#include <map>
#include <numeric>

#include "playbook/deeptree.hpp"
#include "playbook/trajectory.hpp"
#include "test_util.hpp"

using namespace playbook;
using testutil::random_play;
using testutil::static_play;
using testutil::unflatten;

namespace {

double naive_distortion(const Play& a, const Play& b, const Eigen::VectorXd& alpha) {
  // plain triple loop over roles, frames and the two coordinates
  const int half = static_cast<int>(a.attacking.size());
  const int tau = static_cast<int>(a.attacking.front().points.rows());
  double total = 0.0;
  for (int l = 0; l < 2 * half; ++l) {
    const auto& ta = l < half ? *find_role(a.attacking, l) : *find_role(a.defending, l - half);
    const auto& tb = l < half ? *find_role(b.attacking, l) : *find_role(b.defending, l - half);
    double role_term = 0.0;
    for (int t = 0; t < tau; ++t)
      for (int c = 0; c < 2; ++c) {
        const double diff = ta.points(t, c) - tb.points(t, c);
        role_term += diff * diff;
      }
    total += alpha(l) * role_term;
  }
  return total;
}

/// Minimal tree: open-play branch with one decision node and two leaves, the
/// other branches root-only leaves.
DeepDecisionTree toy_tree(int tau, int half, const Eigen::VectorXd& c0, const Eigen::VectorXd& c1,
                          double beta) {
  const Eigen::Index d = c0.size();
  const int m = 2 * half;
  DeepDecisionTree tree;
  tree.tau = tau;
  tree.m = m;
  tree.pitch_length = 105.0;
  tree.pitch_width = 68.0;
  tree.beta = beta;
  for (int pt = 0; pt < kNumPlayTypes; ++pt)
    tree.branches[pt].weights.alpha = Eigen::VectorXd::Ones(m);

  PlayTypeBranch& open = tree.branches[static_cast<int>(PlayType::OpenPlay)];
  TreeNode root;
  root.centroid = (c0 + c1) / 2.0;
  root.children = {1, 2};
  TreeNode leaf0, leaf1;
  leaf0.centroid = c0;
  leaf0.depth = 1;
  leaf0.leaf_id = 0;
  leaf1.centroid = c1;
  leaf1.depth = 1;
  leaf1.leaf_id = 1;
  open.nodes = {root, leaf0, leaf1};

  auto add_leaf = [&](int id, int pt, const Eigen::VectorXd& centroid) {
    PredictionNode leaf;
    leaf.codebook_id = id;
    leaf.play_type = pt;
    leaf.centroid = centroid;
    leaf.pi = Eigen::VectorXd::Zero(d + 1);
    tree.leaves.push_back(std::move(leaf));
  };
  add_leaf(0, static_cast<int>(PlayType::OpenPlay), c0);
  add_leaf(1, static_cast<int>(PlayType::OpenPlay), c1);
  int next = 2;
  for (int pt = 0; pt < kNumPlayTypes; ++pt) {
    if (pt == static_cast<int>(PlayType::OpenPlay)) continue;
    TreeNode only;
    only.centroid = Eigen::VectorXd::Zero(d);
    only.leaf_id = next;
    tree.branches[pt].nodes = {only};
    add_leaf(next, pt, only.centroid);
    ++next;
  }
  return tree;
}

SyntheticConfig archetype_config() {
  SyntheticConfig config;
  config.n_teams = 2;
  config.n_matches = 40;
  config.shots_per_match_mean = 12.0;
  config.tau = 10;
  config.m = 10;
  config.noise_std = 1.0;
  config.play_type_weights = {0.0, 1.0, 0.0, 0.0};
  config.archetype_rate_offsets = {{0.45, -0.28, 0.05}, {0.45, -0.28, 0.05},
                                   {0.45, -0.28, 0.05}, {0.45, -0.28, 0.05}};
  config.goal_base_rate = 0.3;
  config.team_attack_skill = {0.0, 0.0};
  config.team_defence_skill = {0.0, 0.0};
  config.role5_rate_gain = 0.0;
  config.shuffle_roles = false;
  config.rng_seed = 13;
  return config;
}

}  // namespace

TEST_CASE("weighted_distortion: identity, unit displacement, oracle") {
  Rng rng(3);
  const Play a = random_play(rng, 7, 3);
  FeatureWeights w = uniform_weights(6);
  CHECK(weighted_distortion(a, a, w) == 0.0);

  Play p = static_play({{10, 10}}, {{20, 20}}, 1);
  Play q = static_play({{11, 10}}, {{20, 20}}, 1);
  CHECK(weighted_distortion(p, q, uniform_weights(2)) == 1.0);

  for (int trial = 0; trial < 20; ++trial) {
    const Play x = random_play(rng, 12, 4);
    const Play y = random_play(rng, 12, 4);
    Eigen::VectorXd alpha(8);
    for (int l = 0; l < 8; ++l) alpha(l) = rng.uniform(0.0, 3.0);
    alpha = project_to_scaled_simplex(alpha, 8.0);
    const double got = weighted_distortion(x, y, {alpha});
    const double want = naive_distortion(x, y, alpha);
    CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("weighted_distortion: uniform weights equal the unweighted sum exactly") {
  Rng rng(9);
  const Play x = random_play(rng, 20, 5);
  const Play y = random_play(rng, 20, 5);
  const Eigen::VectorXd fx = flatten(x), fy = flatten(y);
  double unweighted = 0.0;
  for (int l = 0; l < 10; ++l) unweighted += (fx.segment(l * 40, 40) - fy.segment(l * 40, 40)).squaredNorm();
  CHECK(weighted_distortion(x, y, uniform_weights(10)) == unweighted);
  CHECK_THROWS_AS(weighted_distortion(x, random_play(rng, 21, 5), uniform_weights(10)),
                  std::invalid_argument);
}

TEST_CASE("project_to_scaled_simplex: feasibility and optimality") {
  Rng rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::VectorXd v(6);
    for (int i = 0; i < 6; ++i) v(i) = rng.normal(1.0, 2.0);
    const Eigen::VectorXd x = project_to_scaled_simplex(v, 6.0);
    CHECK(x.minCoeff() >= 0.0);
    CHECK(x.sum() == doctest::Approx(6.0).epsilon(1e-12));
    // no random feasible point is closer to v
    for (int probe = 0; probe < 50; ++probe) {
      Eigen::VectorXd y(6);
      for (int i = 0; i < 6; ++i) y(i) = rng.uniform(0.0, 1.0);
      y *= 6.0 / y.sum();
      CHECK((x - v).squaredNorm() <= (y - v).squaredNorm() + 1e-9);
    }
  }
  const Eigen::VectorXd feasible = Eigen::VectorXd::Ones(4);
  CHECK(project_to_scaled_simplex(feasible, 4.0) == feasible);
}

TEST_CASE("cluster_node: singleton clusters at B = N") {
  Rng rng(14);
  std::vector<Play> plays;
  for (int i = 0; i < 6; ++i) plays.push_back(random_play(rng, 3, 2));
  const ClusterResult result = cluster_node(plays, uniform_weights(4), 6);
  REQUIRE(result.members.size() == 6);
  double total = 0.0;
  for (int c = 0; c < 6; ++c) {
    CHECK(result.members[c] == std::vector<int>{c});
    total += (flatten(plays[c]) - result.centroids.col(c)).squaredNorm();
  }
  CHECK(total == 0.0);
  CHECK_THROWS_AS(cluster_node(plays, uniform_weights(4), 7), std::invalid_argument);
}

TEST_CASE("cluster_node: separates two motion groups") {
  Rng rng(15);
  const Play base_a = random_play(rng, 6, 3);
  const Play base_b = random_play(rng, 6, 3);
  const Eigen::VectorXd fa = flatten(base_a), fb = flatten(base_b);
  Eigen::MatrixXd X(fa.size(), 30);
  std::vector<int> truth(30);
  for (int i = 0; i < 30; ++i) {
    truth[i] = rng.bernoulli(0.5) ? 1 : 0;
    Eigen::VectorXd noise(fa.size());
    for (int j = 0; j < fa.size(); ++j) noise(j) = rng.normal(0.0, 0.3);
    X.col(i) = (truth[i] == 0 ? fa : fb) + noise;
  }
  const ClusterResult result = cluster_node(X, Eigen::VectorXd::Ones(6), X.rows() / 6, 2);
  REQUIRE(result.members.size() == 2);
  for (const auto& cluster : result.members) {
    const int label = truth[cluster.front()];
    for (int idx : cluster) CHECK(truth[idx] == label);
  }
}

TEST_CASE("cluster_node: small-instance optimality and unweighted oracle") {
  // seven plays on a line, two tight groups
  const std::vector<double> xs = {0.0, 1.0, 2.0, 10.0, 11.0, 12.0, 13.0};
  const int n = static_cast<int>(xs.size());
  std::vector<Play> plays;
  for (double x : xs) plays.push_back(static_play({{x + 20, 30}}, {{80, 30}}, 1));
  const ClusterResult result = cluster_node(plays, uniform_weights(2), 2);

  // unweighted average-linkage oracle, naive O(N^3)
  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < n; ++i) clusters.push_back({i});
  auto dist = [&](int i, int j) {
    return weighted_distortion(plays[i], plays[j], uniform_weights(2));
  };
  while (clusters.size() > 2) {
    double best = std::numeric_limits<double>::infinity();
    size_t bi = 0, bj = 1;
    for (size_t i = 0; i < clusters.size(); ++i)
      for (size_t j = i + 1; j < clusters.size(); ++j) {
        double avg = 0.0;
        for (int a : clusters[i])
          for (int b : clusters[j]) avg += dist(a, b);
        avg /= clusters[i].size() * clusters[j].size();
        if (avg < best) {
          best = avg;
          bi = i;
          bj = j;
        }
      }
    clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
    clusters.erase(clusters.begin() + bj);
  }
  for (auto& c : clusters) std::sort(c.begin(), c.end());
  std::sort(clusters.begin(), clusters.end());
  CHECK(result.members == clusters);

  // total distortion no worse than any bipartition reachable by merges
  auto partition_cost = [&](const std::vector<int>& assign) {
    double total = 0.0;
    for (int c = 0; c < 2; ++c) {
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(4);
      int count = 0;
      for (int i = 0; i < n; ++i)
        if (assign[i] == c) {
          mean += flatten(plays[i]);
          ++count;
        }
      if (count == 0) return std::numeric_limits<double>::infinity();
      mean /= count;
      for (int i = 0; i < n; ++i)
        if (assign[i] == c) total += (flatten(plays[i]) - mean).squaredNorm();
    }
    return total;
  };
  std::vector<int> ours(n, 1);
  for (int idx : result.members[0]) ours[idx] = 0;
  const double our_cost = partition_cost(ours);
  for (int mask = 1; mask < (1 << (n - 1)); ++mask) {
    std::vector<int> assign(n, 0);
    for (int i = 1; i < n; ++i) assign[i] = (mask >> (i - 1)) & 1;
    CHECK(our_cost <= partition_cost(assign) + 1e-9);
  }

  // determinism
  const ClusterResult again = cluster_node(plays, uniform_weights(2), 2);
  CHECK(again.members == result.members);
  CHECK(again.centroids == result.centroids);
}

TEST_CASE("route_hard: exact centroid match and tie to the lower child") {
  Rng rng(23);
  const int tau = 4, half = 2, d = 2 * tau * 2 * half;
  Eigen::VectorXd c0(d), c1(d);
  for (int i = 0; i < d; ++i) {
    c0(i) = rng.uniform(10.0, 50.0);
    c1(i) = c0(i);
  }
  c1(3) += 8.0;  // differ in one coordinate
  const DeepDecisionTree tree = toy_tree(tau, half, c0, c1, 1.0);

  Play at0 = unflatten(c0, tau, half);
  at0.play_type = PlayType::OpenPlay;
  CHECK(route_hard(tree, at0) == 0);
  Play at1 = unflatten(c1, tau, half);
  at1.play_type = PlayType::OpenPlay;
  CHECK(route_hard(tree, at1) == 1);

  Eigen::VectorXd mid = c0;
  mid(3) += 4.0;  // equidistant from both centroids
  Play tied = unflatten(mid, tau, half);
  tied.play_type = PlayType::OpenPlay;
  CHECK(route_hard(tree, tied) == 0);

  Play corner = at0;
  corner.play_type = PlayType::Corner;
  CHECK(route_hard(tree, corner) == tree.branches[static_cast<int>(PlayType::Corner)].nodes[0].leaf_id);
}

TEST_CASE("route_soft: normalization, temperature limits") {
  Rng rng(29);
  const int tau = 5, half = 3;
  const Play seed_play = random_play(rng, tau, half);
  Eigen::VectorXd c0 = flatten(seed_play);
  Eigen::VectorXd c1 = c0;
  for (int i = 0; i < c1.size(); ++i) c1(i) += rng.normal(0.0, 5.0);
  const DeepDecisionTree tree = toy_tree(tau, half, c0, c1, 1.0);

  for (int trial = 0; trial < 200; ++trial) {
    Play play = random_play(rng, tau, half);
    play.play_type = static_cast<PlayType>(rng.uniform_int(4));
    const Eigen::VectorXd probs = route_soft(tree, play, 3e-4);
    CHECK(std::abs(probs.sum() - 1.0) <= 1e-12);
    CHECK(probs.minCoeff() >= 0.0);
  }

  int agree = 0;
  for (int trial = 0; trial < 200; ++trial) {
    Play play = random_play(rng, tau, half);
    play.play_type = PlayType::OpenPlay;
    const Eigen::VectorXd probs = route_soft(tree, play, 1e6);
    Eigen::Index argmax;
    probs.maxCoeff(&argmax);
    if (static_cast<int>(argmax) == route_hard(tree, play)) ++agree;
  }
  CHECK(agree >= 198);

  // beta = 0: uniform over the play's branch leaves
  Play play = random_play(rng, tau, half);
  play.play_type = PlayType::OpenPlay;
  const Eigen::VectorXd uniform = route_soft(tree, play, 0.0);
  CHECK(uniform(0) == doctest::Approx(0.5));
  CHECK(uniform(1) == doctest::Approx(0.5));
  CHECK(uniform.tail(3).sum() == 0.0);
}

TEST_CASE("leaf_predict: zero weights, saturation, finite-difference gradient") {
  Rng rng(31);
  const int tau = 3, half = 2;
  const Play play = random_play(rng, tau, half);
  const Eigen::VectorXd x = flatten(play);
  PredictionNode node;
  node.pi = Eigen::VectorXd::Zero(x.size() + 1);
  CHECK(leaf_predict(node, play) == 0.5);

  node.pi(x.size()) = 20.0;
  CHECK(leaf_predict(node, play) > 0.999);

  // d/dpi (p - sigmoid(pi.[x;1]))^2 against central differences
  Eigen::VectorXd pi(x.size() + 1);
  for (int i = 0; i < pi.size(); ++i) pi(i) = rng.normal(0.0, 0.002);
  const double label = 1.0;
  auto loss = [&](const Eigen::VectorXd& w) {
    double f = sigmoid(w.head(x.size()).dot(x) + w(x.size()));
    return (label - f) * (label - f);
  };
  const double f = sigmoid(pi.head(x.size()).dot(x) + pi(x.size()));
  Eigen::VectorXd xb(x.size() + 1);
  xb << x, 1.0;
  const Eigen::VectorXd analytic = 2.0 * (f - label) * f * (1.0 - f) * xb;
  for (int idx : {0, 3, 7, static_cast<int>(x.size())}) {
    Eigen::VectorXd hi = pi, lo = pi;
    hi(idx) += 1e-5;
    lo(idx) -= 1e-5;
    const double fd = (loss(hi) - loss(lo)) / 2e-5;
    CHECK(std::abs(analytic(idx) - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
  }
}

TEST_CASE("training_objective: analytic gradients match finite differences") {
  Rng rng(37);
  const int tau = 2, half = 2, m = 4;
  const int d = 2 * tau * m;
  std::vector<Play> plays;
  Dataset data;
  data.tau = tau;
  data.m = m;
  for (int i = 0; i < 5; ++i) {
    Play p = random_play(rng, tau, half);
    p.play_type = PlayType::OpenPlay;
    p.label = i % 2;
    data.plays.push_back(p);
  }
  Eigen::VectorXd c0 = flatten(data.plays[0]);
  Eigen::VectorXd c1 = flatten(data.plays[1]);
  // moderate temperature so neither softmax saturates nor flattens
  const double med = weighted_distortion_flat(c0, c1, Eigen::VectorXd::Ones(m), 2 * tau);
  DeepDecisionTree tree = toy_tree(tau, half, c0, c1, 1.0 / med);
  Eigen::VectorXd alpha(m);
  for (int l = 0; l < m; ++l) alpha(l) = rng.uniform(0.2, 2.0);
  tree.branches[1].weights.alpha = project_to_scaled_simplex(alpha, m);
  for (auto& leaf : tree.leaves)
    for (int i = 0; i < leaf.pi.size(); ++i) leaf.pi(i) = rng.normal(0.0, 0.002);

  const ObjectiveGrads grads = training_objective(tree, data);
  CHECK(grads.value > 0.0);

  const double h = 1e-5;
  for (int l = 0; l < m; ++l) {
    DeepDecisionTree up = tree, down = tree;
    up.branches[1].weights.alpha(l) += h;
    down.branches[1].weights.alpha(l) -= h;
    const double fd =
        (training_objective(up, data).value - training_objective(down, data).value) / (2 * h);
    CHECK(std::abs(grads.grad_alpha[1](l) - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
  }
  for (int leaf : {0, 1}) {
    for (int idx : {0, d / 2, d}) {
      DeepDecisionTree up = tree, down = tree;
      up.leaves[leaf].pi(idx) += h;
      down.leaves[leaf].pi(idx) -= h;
      const double fd =
          (training_objective(up, data).value - training_objective(down, data).value) / (2 * h);
      CHECK(std::abs(grads.grad_pi[leaf](idx) - fd) <= 1e-4 * std::max(1.0, std::abs(fd)));
    }
  }
}

TEST_CASE("train: planted role-3 signal dominates alpha") {
  const Dataset data = generate_synthetic(archetype_config());
  TreeConfig config;
  config.n_layers = 3;
  config.epochs = 15;
  config.rng_seed = 1;
  const DeepDecisionTree tree = train(data, config);

  const Eigen::VectorXd& alpha = tree.branches[static_cast<int>(PlayType::OpenPlay)].weights.alpha;
  Eigen::Index argmax;
  alpha.maxCoeff(&argmax);
  CHECK(argmax == 3);

  // constraint set: non-negative, sums to m
  CHECK(alpha.minCoeff() >= 0.0);
  CHECK(alpha.sum() == doctest::Approx(data.m).epsilon(1e-9));

  // full-batch style: recorded loss decreased overall
  REQUIRE(tree.training_loss.size() > 1);
  CHECK(tree.training_loss.back() < tree.training_loss.front());
}

TEST_CASE("train: construction assignment agrees with hard routing (frozen alpha)") {
  const Dataset data = generate_synthetic(archetype_config());
  TreeConfig config;
  config.n_layers = 3;
  config.epochs = 4;
  config.eta_alpha = 0.0;
  config.rng_seed = 2;
  const DeepDecisionTree tree = train(data, config);

  std::map<int, int> routed;
  for (const Play& play : data.plays) routed[route_hard(tree, play)]++;
  int total = 0;
  for (const PredictionNode& leaf : tree.leaves) {
    CHECK(routed[leaf.codebook_id] == leaf.assigned_count);
    total += leaf.assigned_count;
  }
  CHECK(total == static_cast<int>(data.plays.size()));
}

TEST_CASE("train: frozen-alpha partition equals the clustering oracle") {
  const Dataset data = generate_synthetic(archetype_config());
  TreeConfig config;
  config.n_layers = 3;
  config.epochs = 2;
  config.eta_alpha = 0.0;
  config.rng_seed = 3;
  const DeepDecisionTree tree = train(data, config);

  std::vector<Play> open_plays;
  for (const Play& p : data.plays)
    if (p.play_type == PlayType::OpenPlay) open_plays.push_back(p);
  const ClusterResult oracle = cluster_node(open_plays, uniform_weights(data.m), 3);

  const PlayTypeBranch& branch = tree.branches[static_cast<int>(PlayType::OpenPlay)];
  const std::vector<int>& children = branch.nodes[0].children;
  REQUIRE(children.size() == 3);
  for (size_t c = 0; c < 3; ++c) {
    const int leaf_id = branch.nodes[children[c]].leaf_id;
    for (int idx : oracle.members[c]) CHECK(route_hard(tree, open_plays[idx]) == leaf_id);
  }
}

TEST_CASE("train: deeper trees fit structured data better out of sample") {
  SyntheticConfig gen = archetype_config();
  gen.play_type_weights = {0.15, 0.55, 0.15, 0.15};
  gen.n_matches = 120;
  gen.rng_seed = 5;
  const Dataset data = generate_synthetic(gen);
  const auto [train_set, test_set] = split_by_match(data, 0.7, 11);

  TreeConfig config;
  config.epochs = 15;
  config.rng_seed = 7;
  config.n_layers = 2;
  const DeepDecisionTree shallow = train(train_set, config);
  config.n_layers = 4;
  const DeepDecisionTree deep = train(train_set, config);

  const double loss2 = evaluate_logloss(shallow, test_set);
  const double loss4 = evaluate_logloss(deep, test_set);
  CHECK(loss4 < loss2);
  CHECK(static_cast<int>(deep.leaves.size()) <= deep.config.target_codebook_size);
}

TEST_CASE("evaluate_logloss: closed forms and formula oracle") {
  Rng rng(41);
  const int tau = 2, half = 2;
  Eigen::VectorXd c0 = Eigen::VectorXd::Constant(16, 30.0);
  Eigen::VectorXd c1 = Eigen::VectorXd::Constant(16, 60.0);
  DeepDecisionTree tree = toy_tree(tau, half, c0, c1, 1.0);

  Dataset zeros;
  zeros.tau = tau;
  zeros.m = 2 * half;
  for (int i = 0; i < 20; ++i) {
    Play p = random_play(rng, tau, half);
    p.play_type = PlayType::OpenPlay;
    p.label = 0;
    zeros.plays.push_back(p);
  }
  // pi = 0 predicts 0.5 everywhere
  CHECK(evaluate_logloss(tree, zeros) == doctest::Approx(std::log(2.0)).epsilon(1e-12));

  // strongly negative bias: a perfect predictor of the all-zero labels
  for (auto& leaf : tree.leaves) leaf.pi(16) = -40.0;
  CHECK(evaluate_logloss(tree, zeros) == doctest::Approx(1e-9).epsilon(1e-3));

  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + rng.uniform_int(8);
    Eigen::VectorXd q(n), p(n);
    for (int i = 0; i < n; ++i) {
      q(i) = rng.uniform(0.0, 1.0);
      p(i) = rng.bernoulli(0.5) ? 1.0 : 0.0;
    }
    double want = 0.0;
    for (int i = 0; i < n; ++i) {
      const double qc = std::clamp(q(i), 1e-9, 1.0 - 1e-9);
      want -= (p(i) * std::log(qc) + (1 - p(i)) * std::log(1 - qc)) / n;
    }
    CHECK(std::abs(mean_logloss(q, p) - want) <= 1e-12 * std::max(1.0, want));
  }
  CHECK_THROWS_AS(evaluate_logloss(tree, Dataset{}), std::invalid_argument);
}

TEST_CASE("resolve_config: branching arithmetic") {
  TreeConfig c;
  c.n_layers = 4;
  c.target_codebook_size = 36;
  const TreeConfig r = resolve_config(c);
  CHECK(r.branching == std::vector<int>{3, 3});
  CHECK(r.target_codebook_size == 36);

  TreeConfig two;
  two.n_layers = 2;
  CHECK(resolve_config(two).target_codebook_size == 4);

  TreeConfig bad;
  bad.n_layers = 1;
  CHECK_THROWS_AS(resolve_config(bad), std::invalid_argument);
  TreeConfig bad2;
  bad2.n_layers = 3;
  bad2.branching = {1};
  CHECK_THROWS_AS(resolve_config(bad2), std::invalid_argument);
}

TEST_CASE("fit_logistic: recovers a separable rule and calibrated bias") {
  Rng rng(53);
  const int n = 400;
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd y(n);
  for (int i = 0; i < n; ++i) {
    X(i, 0) = rng.normal(0.0, 1.0);
    X(i, 1) = rng.normal(0.0, 1.0);
    const double p = sigmoid(2.0 * X(i, 0) - 1.0 * X(i, 1));
    y(i) = rng.bernoulli(p) ? 1.0 : 0.0;
  }
  const LogisticModel model = fit_logistic(X, y);
  Eigen::VectorXd probe(2);
  probe << 2.0, -1.0;
  CHECK(model.predict(probe) > 0.9);
  probe << -2.0, 1.0;
  CHECK(model.predict(probe) < 0.1);
}
