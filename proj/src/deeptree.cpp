#include "playbook/deeptree.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include <json.hpp>

#include "playbook/rng.hpp"
#include "playbook/trajectory.hpp"

namespace playbook {

FeatureWeights uniform_weights(int m) {
  FeatureWeights w;
  w.alpha = Eigen::VectorXd::Ones(m);
  return w;
}

Eigen::VectorXd project_to_scaled_simplex(const Eigen::VectorXd& v, double total) {
  const Eigen::Index n = v.size();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double running = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    running += u[j];
    const double t = (running - total) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) theta = t;
  }
  return (v.array() - theta).cwiseMax(0.0);
}

double weighted_distortion(const Play& a, const Play& b, const FeatureWeights& w) {
  const Eigen::VectorXd fa = flatten(a);
  const Eigen::VectorXd fb = flatten(b);
  if (fa.size() != fb.size()) throw std::invalid_argument("weighted_distortion: plays differ in tau or m");
  const Eigen::Index m = w.alpha.size();
  if (m == 0 || fa.size() % m != 0)
    throw std::invalid_argument("weighted_distortion: alpha size does not divide the play");
  return weighted_distortion_flat(fa, fb, w.alpha, fa.size() / m);
}

// ---------------------------------------------------------------------------
// Agglomerative clustering
// ---------------------------------------------------------------------------

namespace {

/// Pairwise weighted distortions via the Gram identity on the sqrt(alpha)-
/// scaled data matrix.
Eigen::MatrixXd pairwise_distortions(const Eigen::MatrixXd& X, const Eigen::VectorXd& alpha,
                                     Eigen::Index coords_per_role) {
  Eigen::MatrixXd Xs = X;
  for (Eigen::Index l = 0; l < alpha.size(); ++l)
    Xs.middleRows(l * coords_per_role, coords_per_role) *= std::sqrt(std::max(0.0, alpha(l)));
  const Eigen::VectorXd sq = Xs.colwise().squaredNorm();
  Eigen::MatrixXd D = (-2.0 * (Xs.transpose() * Xs)).colwise() + sq;
  D.rowwise() += sq.transpose();
  return D.cwiseMax(0.0);
}

}  // namespace

ClusterResult cluster_node(const Eigen::MatrixXd& X, const Eigen::VectorXd& alpha,
                           Eigen::Index coords_per_role, int n_clusters) {
  const int n = static_cast<int>(X.cols());
  if (n_clusters < 1) throw std::invalid_argument("cluster_node: need n_clusters >= 1");
  if (n < n_clusters) throw std::invalid_argument("cluster_node: fewer plays than clusters");

  Eigen::MatrixXd D = pairwise_distortions(X, alpha, coords_per_role);

  std::vector<char> active(n, 1);
  std::vector<int> size(n, 1);
  std::vector<std::vector<int>> members(n);
  for (int i = 0; i < n; ++i) members[i] = {i};

  // nn[i]: active j != i minimizing D(i,j), ties to the smallest j
  std::vector<int> nn(n, -1);
  auto recompute_nn = [&](int i) {
    int best = -1;
    double bestd = std::numeric_limits<double>::infinity();
    for (int j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      if (D(i, j) < bestd) {
        bestd = D(i, j);
        best = j;
      }
    }
    nn[i] = best;
  };
  for (int i = 0; i < n; ++i) recompute_nn(i);

  int n_active = n;
  while (n_active > n_clusters) {
    int a = -1, b = -1;
    double bestd = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      if (!active[i] || nn[i] < 0) continue;
      const int lo = std::min(i, nn[i]);
      const int hi = std::max(i, nn[i]);
      const double d = D(i, nn[i]);
      if (d < bestd || (d == bestd && (lo < a || (lo == a && hi < b)))) {
        bestd = d;
        a = lo;
        b = hi;
      }
    }

    // Lance-Williams update for average linkage: merge b into a.
    const double sa = size[a], sb = size[b];
    for (int k = 0; k < n; ++k) {
      if (!active[k] || k == a || k == b) continue;
      const double d = (sa * D(a, k) + sb * D(b, k)) / (sa + sb);
      D(a, k) = d;
      D(k, a) = d;
    }
    active[b] = 0;
    size[a] += size[b];
    members[a].insert(members[a].end(), members[b].begin(), members[b].end());
    members[b].clear();
    --n_active;

    recompute_nn(a);
    for (int k = 0; k < n; ++k) {
      if (!active[k] || k == a) continue;
      if (nn[k] == a || nn[k] == b) {
        recompute_nn(k);
      } else if (D(k, a) < D(k, nn[k]) || (D(k, a) == D(k, nn[k]) && a < nn[k])) {
        nn[k] = a;
      }
    }
  }

  ClusterResult result;
  result.centroids.resize(X.rows(), n_clusters);
  int c = 0;
  for (int i = 0; i < n; ++i) {
    if (!active[i]) continue;
    std::sort(members[i].begin(), members[i].end());
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(X.rows());
    for (int idx : members[i]) mean += X.col(idx);
    result.centroids.col(c) = mean / static_cast<double>(members[i].size());
    result.members.push_back(std::move(members[i]));
    ++c;
  }
  return result;
}

ClusterResult cluster_node(const std::vector<Play>& plays, const FeatureWeights& w,
                           int n_clusters) {
  if (plays.empty()) throw std::invalid_argument("cluster_node: no plays");
  Eigen::MatrixXd X(flatten(plays.front()).size(), static_cast<Eigen::Index>(plays.size()));
  for (size_t i = 0; i < plays.size(); ++i) X.col(static_cast<Eigen::Index>(i)) = flatten(plays[i]);
  return cluster_node(X, w.alpha, X.rows() / w.alpha.size(), n_clusters);
}

// ---------------------------------------------------------------------------
// Config
// ---------------------------------------------------------------------------

TreeConfig resolve_config(TreeConfig config) {
  if (config.n_layers < 2)
    throw std::invalid_argument("tree config: n_layers must be >= 2 (root split + prediction layer)");
  const int n_decision = config.n_layers - 2;
  if (config.branching.empty() && n_decision > 0) {
    int per_layer = 3;
    if (config.target_codebook_size > 0) {
      const double per_branch = std::max(1.0, config.target_codebook_size / 4.0);
      per_layer = std::max(2, static_cast<int>(std::lround(std::pow(per_branch, 1.0 / n_decision))));
    }
    config.branching.assign(n_decision, per_layer);
  }
  if (static_cast<int>(config.branching.size()) != n_decision)
    throw std::invalid_argument("tree config: branching needs n_layers - 2 entries");
  int realized = kNumPlayTypes;
  for (int b : config.branching) {
    if (b < 2) throw std::invalid_argument("tree config: branching factors must be >= 2");
    realized *= b;
  }
  config.target_codebook_size = realized;
  if (config.minibatch < 1) throw std::invalid_argument("tree config: minibatch must be >= 1");
  if (config.epochs < 0) throw std::invalid_argument("tree config: epochs must be >= 0");
  if (config.eta_pi < 0 || config.eta_alpha < 0)
    throw std::invalid_argument("tree config: step sizes must be >= 0");
  return config;
}

// ---------------------------------------------------------------------------
// Routing
// ---------------------------------------------------------------------------

namespace {

struct RoutingScratch {
  std::vector<int> leaf_nodes;
  std::vector<double> leaf_prob;
  std::vector<Eigen::VectorXd> leaf_glog;  // d log P / d alpha per leaf
  void clear() {
    leaf_nodes.clear();
    leaf_prob.clear();
    leaf_glog.clear();
  }
};

void soft_route_collect(const std::vector<TreeNode>& nodes, const Eigen::VectorXd& alpha,
                        double beta, Eigen::Index cpr, const Eigen::VectorXd& x, bool want_glog,
                        int node_id, double prob, const Eigen::VectorXd& glog,
                        RoutingScratch& out) {
  const TreeNode& nd = nodes[node_id];
  if (nd.children.empty()) {
    out.leaf_nodes.push_back(node_id);
    out.leaf_prob.push_back(prob);
    if (want_glog) out.leaf_glog.push_back(glog);
    return;
  }
  const int B = static_cast<int>(nd.children.size());
  Eigen::VectorXd dist(B);
  Eigen::MatrixXd droles;
  if (want_glog) {
    droles.resize(alpha.size(), B);
    for (int b = 0; b < B; ++b) {
      droles.col(b) = role_sq_distances(x, nodes[nd.children[b]].centroid, alpha.size(), cpr);
      dist(b) = alpha.dot(droles.col(b));
    }
  } else {
    for (int b = 0; b < B; ++b)
      dist(b) = weighted_distortion_flat(x, nodes[nd.children[b]].centroid, alpha, cpr);
  }
  Eigen::VectorXd logits = -beta * dist;
  Eigen::VectorXd s = (logits.array() - logits.maxCoeff()).exp();
  s /= s.sum();
  Eigen::VectorXd davg;
  if (want_glog) davg = droles * s;
  for (int b = 0; b < B; ++b) {
    if (want_glog) {
      const Eigen::VectorXd g2 = glog + beta * (davg - droles.col(b));
      soft_route_collect(nodes, alpha, beta, cpr, x, want_glog, nd.children[b], prob * s(b), g2,
                         out);
    } else {
      soft_route_collect(nodes, alpha, beta, cpr, x, want_glog, nd.children[b], prob * s(b), glog,
                         out);
    }
  }
}

int route_hard_flat(const PlayTypeBranch& branch, const Eigen::VectorXd& x, Eigen::Index cpr) {
  const TreeNode* nd = &branch.nodes[0];
  while (!nd->children.empty()) {
    int best = 0;
    double bestd = std::numeric_limits<double>::infinity();
    for (size_t b = 0; b < nd->children.size(); ++b) {
      const double d = weighted_distortion_flat(x, branch.nodes[nd->children[b]].centroid,
                                                branch.weights.alpha, cpr);
      if (d < bestd) {
        bestd = d;
        best = static_cast<int>(b);
      }
    }
    nd = &branch.nodes[nd->children[best]];
  }
  return nd->leaf_id;
}

/// Expected squared loss of one play; optionally accumulates pi gradients (by
/// node id) and the alpha gradient. `pis` and `z` live in the same feature
/// space, whatever it is; `x_route` is always the raw flattened play.
double accumulate_play(const std::vector<TreeNode>& nodes,
                       const std::vector<Eigen::VectorXd>& pis, const Eigen::VectorXd& alpha,
                       double beta, Eigen::Index cpr, const Eigen::VectorXd& x_route,
                       const Eigen::VectorXd& z, double label,
                       std::vector<Eigen::VectorXd>* pi_grad, Eigen::VectorXd* alpha_grad,
                       RoutingScratch& scratch) {
  scratch.clear();
  static const Eigen::VectorXd kEmpty;
  const Eigen::VectorXd zero_glog =
      alpha_grad != nullptr ? Eigen::VectorXd::Zero(alpha.size()).eval() : kEmpty;
  soft_route_collect(nodes, alpha, beta, cpr, x_route, alpha_grad != nullptr, 0, 1.0, zero_glog,
                     scratch);
  const Eigen::Index d = z.size();
  double loss = 0.0;
  for (size_t k = 0; k < scratch.leaf_nodes.size(); ++k) {
    const int node = scratch.leaf_nodes[k];
    const double prob = scratch.leaf_prob[k];
    const Eigen::VectorXd& pi = pis[node];
    const double f = sigmoid(pi.head(d).dot(z) + pi(d));
    const double diff = f - label;
    const double l = diff * diff;
    loss += prob * l;
    if (pi_grad != nullptr) {
      const double c = prob * 2.0 * diff * f * (1.0 - f);
      (*pi_grad)[node].head(d) += c * z;
      (*pi_grad)[node](d) += c;
    }
    if (alpha_grad != nullptr) *alpha_grad += (prob * l) * scratch.leaf_glog[k];
  }
  return loss;
}

int branch_index(PlayType t) { return static_cast<int>(t); }

}  // namespace

int route_hard(const DeepDecisionTree& tree, const Play& play) {
  const PlayTypeBranch& branch = tree.branches[branch_index(play.play_type)];
  return route_hard_flat(branch, flatten(play), 2 * tree.tau);
}

Eigen::VectorXd route_soft(const DeepDecisionTree& tree, const Play& play, double beta) {
  const PlayTypeBranch& branch = tree.branches[branch_index(play.play_type)];
  RoutingScratch scratch;
  soft_route_collect(branch.nodes, branch.weights.alpha, beta, 2 * tree.tau, flatten(play), false,
                     0, 1.0, Eigen::VectorXd(), scratch);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(tree.leaves.size()));
  for (size_t k = 0; k < scratch.leaf_nodes.size(); ++k)
    out(branch.nodes[scratch.leaf_nodes[k]].leaf_id) = scratch.leaf_prob[k];
  return out;
}

double leaf_predict(const PredictionNode& node, const Play& play) {
  const Eigen::VectorXd x = flatten(play);
  return sigmoid(node.pi.head(x.size()).dot(x) + node.pi(x.size()));
}

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

namespace {

double auto_beta(const Eigen::MatrixXd& X, Eigen::Index m, Eigen::Index cpr, uint64_t seed) {
  const int n = static_cast<int>(X.cols());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  if (n > 256) {
    Rng rng(hash_combine(seed, 0xbe7aULL));
    rng.shuffle(idx);
    idx.resize(256);
  }
  const Eigen::VectorXd alpha = Eigen::VectorXd::Ones(m);
  std::vector<double> dists;
  dists.reserve(idx.size() * (idx.size() - 1) / 2);
  for (size_t i = 0; i < idx.size(); ++i)
    for (size_t j = i + 1; j < idx.size(); ++j)
      dists.push_back(weighted_distortion_flat(X.col(idx[i]), X.col(idx[j]), alpha, cpr));
  if (dists.empty()) return 1.0;
  std::nth_element(dists.begin(), dists.begin() + dists.size() / 2, dists.end());
  const double median = dists[dists.size() / 2];
  // The median pairwise distortion is dominated by per-role noise, while the
  // gaps between sibling centroids are a fraction of it; 1/median leaves the
  // routing softmax nearly uniform and every leaf then fits the global label
  // mixture. The 8x factor concentrates routing on the nearest child while
  // keeping gradients alive.
  return median > 0.0 ? 8.0 / median : 1.0;
}

struct BranchWork {
  std::vector<TreeNode> nodes;
  std::vector<std::vector<int>> node_members;  // dataset play indices per node
  std::vector<Eigen::VectorXd> node_pi;        // scaled-space classifier per node
  std::vector<int> frontier;                   // current leaf node ids
  Eigen::VectorXd alpha;
  std::vector<int> plays;  // dataset play indices of this play type
};

}  // namespace

DeepDecisionTree train(const Dataset& dataset, const TreeConfig& raw_config) {
  const TreeConfig config = resolve_config(raw_config);
  if (dataset.plays.empty()) throw std::invalid_argument("train: empty dataset");

  const Eigen::Index m = dataset.m;
  const Eigen::Index cpr = 2 * static_cast<Eigen::Index>(dataset.tau);
  const Eigen::Index d = cpr * m;
  const int n = static_cast<int>(dataset.plays.size());

  // Classifiers are trained on z = (x - center) / scale with a sqrt(d) factor
  // so the logit sensitivity of one SGD step does not grow with the play
  // dimension; the learned weights are mapped back to raw coordinates below.
  const double scale = 0.5 * dataset.pitch_length * std::sqrt(static_cast<double>(d));
  Eigen::VectorXd center(d);
  for (Eigen::Index j = 0; j < d; ++j)
    center(j) = j % 2 == 0 ? dataset.pitch_length / 2.0 : dataset.pitch_width / 2.0;

  const Eigen::MatrixXd X = flatten_all(dataset);
  Eigen::VectorXd labels(n);
  for (int i = 0; i < n; ++i) labels(i) = dataset.plays[i].label;

  DeepDecisionTree tree;
  tree.config = config;
  tree.tau = dataset.tau;
  tree.m = dataset.m;
  tree.pitch_length = dataset.pitch_length;
  tree.pitch_width = dataset.pitch_width;
  tree.beta = config.beta > 0.0 ? config.beta : auto_beta(X, m, cpr, config.rng_seed);

  std::array<BranchWork, kNumPlayTypes> work;
  for (int i = 0; i < n; ++i)
    work[branch_index(dataset.plays[i].play_type)].plays.push_back(i);

  for (int pt = 0; pt < kNumPlayTypes; ++pt) {
    BranchWork& bw = work[pt];
    bw.alpha = Eigen::VectorXd::Ones(m);
    TreeNode root;
    root.depth = 0;
    if (bw.plays.empty()) {
      root.centroid = Eigen::VectorXd::Zero(d);
      tree.notes.push_back(std::string("play type ") + to_wire(static_cast<PlayType>(pt)) +
                           ": no training plays; branch kept as a single untrained leaf");
    } else {
      Eigen::VectorXd mean = Eigen::VectorXd::Zero(d);
      for (int i : bw.plays) mean += X.col(i);
      root.centroid = mean / static_cast<double>(bw.plays.size());
    }
    bw.nodes.push_back(std::move(root));
    bw.node_members.push_back(bw.plays);
    bw.node_pi.push_back(Eigen::VectorXd::Zero(d + 1));
    bw.frontier = {0};
  }

  Rng rng(hash_combine(config.rng_seed, 0x5eedULL));
  RoutingScratch scratch;
  Eigen::VectorXd z_buf(d);

  auto fit_stage = [&](bool any_decision_layer) {
    std::vector<Eigen::VectorXd> pi_grad;
    Eigen::VectorXd alpha_grad(m);
    for (int epoch = 0; epoch < config.epochs; ++epoch) {
      double loss_sum = 0.0;
      int counted = 0;
      // classifier pass
      for (auto& bw : work) {
        if (bw.plays.empty()) continue;
        pi_grad.assign(bw.nodes.size(), Eigen::VectorXd());
        for (int node : bw.frontier) pi_grad[node] = Eigen::VectorXd::Zero(d + 1);
        std::vector<int> order = bw.plays;
        rng.shuffle(order);
        for (size_t start = 0; start < order.size(); start += config.minibatch) {
          const size_t stop = std::min(order.size(), start + config.minibatch);
          for (int node : bw.frontier) pi_grad[node].setZero();
          for (size_t k = start; k < stop; ++k) {
            const int i = order[k];
            z_buf = (X.col(i) - center) / scale;
            loss_sum += accumulate_play(bw.nodes, bw.node_pi, bw.alpha, tree.beta, cpr, X.col(i),
                                        z_buf, labels(i), &pi_grad, nullptr, scratch);
            ++counted;
          }
          const double step = config.eta_pi / static_cast<double>(stop - start);
          for (int node : bw.frontier) bw.node_pi[node] -= step * pi_grad[node];
        }
      }
      // feature-weight pass
      if (any_decision_layer && config.eta_alpha > 0.0) {
        for (auto& bw : work) {
          if (bw.plays.empty() || bw.nodes.size() <= 1) continue;
          std::vector<int> order = bw.plays;
          rng.shuffle(order);
          for (size_t start = 0; start < order.size(); start += config.minibatch) {
            const size_t stop = std::min(order.size(), start + config.minibatch);
            alpha_grad.setZero();
            for (size_t k = start; k < stop; ++k) {
              const int i = order[k];
              z_buf = (X.col(i) - center) / scale;
              accumulate_play(bw.nodes, bw.node_pi, bw.alpha, tree.beta, cpr, X.col(i), z_buf,
                              labels(i), nullptr, &alpha_grad, scratch);
            }
            const double step = config.eta_alpha / static_cast<double>(stop - start);
            bw.alpha = project_to_scaled_simplex(bw.alpha - step * alpha_grad,
                                                 static_cast<double>(m));
          }
        }
      }
      tree.training_loss.push_back(counted > 0 ? loss_sum / counted : 0.0);
    }
  };

  // Stage 0: root-level classifiers (the whole tree when n_layers == 2).
  fit_stage(false);

  const int n_decision = config.n_layers - 2;
  for (int layer = 1; layer <= n_decision; ++layer) {
    const int B = config.branching[layer - 1];
    for (int pt = 0; pt < kNumPlayTypes; ++pt) {
      BranchWork& bw = work[pt];
      std::vector<int> new_frontier;
      for (int node_id : bw.frontier) {
        const std::vector<int>& members = bw.node_members[node_id];
        if (static_cast<int>(members.size()) < B) {
          if (!members.empty())
            tree.notes.push_back(std::string("play type ") + to_wire(static_cast<PlayType>(pt)) +
                                 " layer " + std::to_string(layer) + ": node with " +
                                 std::to_string(members.size()) +
                                 " plays stops splitting early");
          new_frontier.push_back(node_id);
          continue;
        }
        Eigen::MatrixXd sub(d, members.size());
        for (size_t c = 0; c < members.size(); ++c) sub.col(c) = X.col(members[c]);
        const ClusterResult clusters = cluster_node(sub, bw.alpha, cpr, B);

        // Children receive plays by nearest centroid so that construction
        // membership matches hard routing under the build-time weights.
        std::vector<std::vector<int>> assigned(B);
        for (int idx : members) {
          int best = 0;
          double bestd = std::numeric_limits<double>::infinity();
          for (int b = 0; b < B; ++b) {
            const double dist =
                weighted_distortion_flat(X.col(idx), clusters.centroids.col(b), bw.alpha, cpr);
            if (dist < bestd) {
              bestd = dist;
              best = b;
            }
          }
          assigned[best].push_back(idx);
        }
        std::vector<int> kept;
        for (int b = 0; b < B; ++b)
          if (!assigned[b].empty()) kept.push_back(b);
        if (kept.size() < 2) {
          tree.notes.push_back(std::string("play type ") + to_wire(static_cast<PlayType>(pt)) +
                               " layer " + std::to_string(layer) +
                               ": clusters collapsed under routing; node stays a leaf");
          new_frontier.push_back(node_id);
          continue;
        }
        for (int b : kept) {
          TreeNode child;
          child.centroid = clusters.centroids.col(b);
          child.depth = layer;
          const int child_id = static_cast<int>(bw.nodes.size());
          bw.nodes.push_back(std::move(child));
          bw.node_members.push_back(std::move(assigned[b]));
          bw.node_pi.push_back(bw.node_pi[node_id]);  // warm start from the parent
          bw.nodes[node_id].children.push_back(child_id);
          new_frontier.push_back(child_id);
        }
      }
      bw.frontier = std::move(new_frontier);
    }
    fit_stage(true);
  }

  // Finalize: assign codebook ids in (play type, node id) order and convert
  // classifier weights back to the raw coordinate space.
  for (int pt = 0; pt < kNumPlayTypes; ++pt) {
    BranchWork& bw = work[pt];
    for (int node_id : bw.frontier) {
      PredictionNode leaf;
      leaf.codebook_id = static_cast<int>(tree.leaves.size());
      leaf.play_type = pt;
      leaf.assigned_count = static_cast<int>(bw.node_members[node_id].size());
      leaf.centroid = bw.nodes[node_id].centroid;
      leaf.pi = Eigen::VectorXd(d + 1);
      leaf.pi.head(d) = bw.node_pi[node_id].head(d) / scale;
      leaf.pi(d) = bw.node_pi[node_id](d) - leaf.pi.head(d).dot(center);
      bw.nodes[node_id].leaf_id = leaf.codebook_id;
      tree.leaves.push_back(std::move(leaf));
    }
    tree.branches[pt].nodes = std::move(bw.nodes);
    tree.branches[pt].weights.alpha = bw.alpha;
  }
  if (static_cast<int>(tree.leaves.size()) != config.target_codebook_size)
    tree.notes.push_back("realized codebook size " + std::to_string(tree.leaves.size()) +
                         " (target " + std::to_string(config.target_codebook_size) + ")");
  return tree;
}

double mean_logloss(const Eigen::VectorXd& predicted, const Eigen::VectorXd& labels) {
  if (predicted.size() != labels.size())
    throw std::invalid_argument("mean_logloss: size mismatch");
  if (predicted.size() == 0) throw std::invalid_argument("mean_logloss: empty input");
  double total = 0.0;
  for (Eigen::Index i = 0; i < predicted.size(); ++i) {
    const double q = std::clamp(predicted(i), 1e-9, 1.0 - 1e-9);
    total += labels(i) * std::log(q) + (1.0 - labels(i)) * std::log(1.0 - q);
  }
  return -total / static_cast<double>(predicted.size());
}

double evaluate_logloss(const DeepDecisionTree& tree, const Dataset& dataset) {
  if (dataset.plays.empty()) throw std::invalid_argument("evaluate_logloss: empty dataset");
  const Eigen::Index n = static_cast<Eigen::Index>(dataset.plays.size());
  Eigen::VectorXd q(n), p(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Play& play = dataset.plays[i];
    const Eigen::VectorXd x = flatten(play);
    const PlayTypeBranch& branch = tree.branches[branch_index(play.play_type)];
    const int leaf = route_hard_flat(branch, x, 2 * tree.tau);
    const PredictionNode& node = tree.leaves[leaf];
    q(i) = sigmoid(node.pi.head(x.size()).dot(x) + node.pi(x.size()));
    p(i) = play.label;
  }
  return mean_logloss(q, p);
}

ObjectiveGrads training_objective(const DeepDecisionTree& tree, const Dataset& dataset) {
  if (dataset.plays.empty()) throw std::invalid_argument("training_objective: empty dataset");
  const Eigen::Index cpr = 2 * static_cast<Eigen::Index>(tree.tau);
  const Eigen::Index d = cpr * tree.m;

  ObjectiveGrads out;
  for (int pt = 0; pt < kNumPlayTypes; ++pt) out.grad_alpha[pt] = Eigen::VectorXd::Zero(tree.m);
  out.grad_pi.assign(tree.leaves.size(), Eigen::VectorXd::Zero(d + 1));

  // Per-branch view with classifiers indexed by node id, in raw space.
  std::array<std::vector<Eigen::VectorXd>, kNumPlayTypes> pis;
  std::array<std::vector<Eigen::VectorXd>, kNumPlayTypes> pi_grads;
  for (int pt = 0; pt < kNumPlayTypes; ++pt) {
    const auto& nodes = tree.branches[pt].nodes;
    pis[pt].assign(nodes.size(), Eigen::VectorXd());
    pi_grads[pt].assign(nodes.size(), Eigen::VectorXd());
    for (size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].leaf_id >= 0) {
        pis[pt][i] = tree.leaves[nodes[i].leaf_id].pi;
        pi_grads[pt][i] = Eigen::VectorXd::Zero(d + 1);
      }
    }
  }

  RoutingScratch scratch;
  Eigen::VectorXd alpha_grad(tree.m);
  for (const Play& play : dataset.plays) {
    const int pt = branch_index(play.play_type);
    const Eigen::VectorXd x = flatten(play);
    alpha_grad.setZero();
    out.value += accumulate_play(tree.branches[pt].nodes, pis[pt], tree.branches[pt].weights.alpha,
                                 tree.beta, cpr, x, x, play.label, &pi_grads[pt], &alpha_grad,
                                 scratch);
    out.grad_alpha[pt] += alpha_grad;
  }

  const double inv_n = 1.0 / static_cast<double>(dataset.plays.size());
  out.value *= inv_n;
  for (int pt = 0; pt < kNumPlayTypes; ++pt) {
    out.grad_alpha[pt] *= inv_n;
    const auto& nodes = tree.branches[pt].nodes;
    for (size_t i = 0; i < nodes.size(); ++i)
      if (nodes[i].leaf_id >= 0) out.grad_pi[nodes[i].leaf_id] = pi_grads[pt][i] * inv_n;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Logistic baseline
// ---------------------------------------------------------------------------

double LogisticModel::predict(const Eigen::VectorXd& features) const {
  const Eigen::Index d = features.size();
  double acc = weights(d);
  for (Eigen::Index j = 0; j < d; ++j)
    acc += weights(j) * (features(j) - feat_mean(j)) / feat_scale(j);
  return sigmoid(acc);
}

LogisticModel fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double ridge,
                           int max_iters) {
  const Eigen::Index n = X.rows();
  const Eigen::Index d = X.cols();
  if (n == 0 || y.size() != n) throw std::invalid_argument("fit_logistic: bad shapes");

  LogisticModel model;
  model.feat_mean = X.colwise().mean();
  model.feat_scale.resize(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double var = (X.col(j).array() - model.feat_mean(j)).square().mean();
    model.feat_scale(j) = var > 0.0 ? std::sqrt(var) : 1.0;
  }
  Eigen::MatrixXd Z(n, d + 1);
  for (Eigen::Index j = 0; j < d; ++j)
    Z.col(j) = (X.col(j).array() - model.feat_mean(j)) / model.feat_scale(j);
  Z.col(d).setOnes();

  Eigen::VectorXd w = Eigen::VectorXd::Zero(d + 1);
  for (int iter = 0; iter < max_iters; ++iter) {
    const Eigen::VectorXd f = (Z * w).unaryExpr([](double v) { return sigmoid(v); });
    Eigen::VectorXd g = Z.transpose() * (f - y) / static_cast<double>(n) + ridge * w;
    if (g.lpNorm<Eigen::Infinity>() < 1e-10) break;
    const Eigen::VectorXd s = f.array() * (1.0 - f.array());
    Eigen::MatrixXd H = Z.transpose() * s.asDiagonal() * Z / static_cast<double>(n);
    H.diagonal().array() += ridge + 1e-12;
    w -= H.ldlt().solve(g);
  }
  model.weights = w;
  return model;
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

using nlohmann::json;

json vec_to_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Eigen::VectorXd vec_from_json(const json& arr) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(arr.size()));
  for (size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = arr[i].get<double>();
  return v;
}

}  // namespace

void save_tree(const DeepDecisionTree& tree, const std::string& path) {
  json j;
  j["config"] = {{"n_layers", tree.config.n_layers},
                 {"branching", tree.config.branching},
                 {"target_codebook_size", tree.config.target_codebook_size},
                 {"beta", tree.config.beta},
                 {"eta_pi", tree.config.eta_pi},
                 {"eta_alpha", tree.config.eta_alpha},
                 {"epochs", tree.config.epochs},
                 {"minibatch", tree.config.minibatch},
                 {"rng_seed", tree.config.rng_seed}};
  j["tau"] = tree.tau;
  j["m"] = tree.m;
  j["pitch"] = {{"length", tree.pitch_length}, {"width", tree.pitch_width}};
  j["beta"] = tree.beta;
  json branches = json::array();
  for (int pt = 0; pt < kNumPlayTypes; ++pt) {
    const PlayTypeBranch& branch = tree.branches[pt];
    json nodes = json::array();
    for (const TreeNode& nd : branch.nodes)
      nodes.push_back({{"centroid", vec_to_json(nd.centroid)},
                       {"children", nd.children},
                       {"leaf_id", nd.leaf_id},
                       {"depth", nd.depth}});
    branches.push_back({{"play_type", to_wire(static_cast<PlayType>(pt))},
                        {"alpha", vec_to_json(branch.weights.alpha)},
                        {"nodes", std::move(nodes)}});
  }
  j["branches"] = std::move(branches);
  json leaves = json::array();
  for (const PredictionNode& leaf : tree.leaves)
    leaves.push_back({{"codebook_id", leaf.codebook_id},
                      {"play_type", to_wire(static_cast<PlayType>(leaf.play_type))},
                      {"pi", vec_to_json(leaf.pi)},
                      {"assigned_count", leaf.assigned_count},
                      {"centroid", vec_to_json(leaf.centroid)}});
  j["leaves"] = std::move(leaves);
  j["training_loss"] = tree.training_loss;
  j["notes"] = tree.notes;

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump() << '\n';
}

DeepDecisionTree load_tree(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  DeepDecisionTree tree;
  try {
    const json j = json::parse(in);
    const json& c = j.at("config");
    tree.config.n_layers = c.at("n_layers").get<int>();
    tree.config.branching = c.at("branching").get<std::vector<int>>();
    tree.config.target_codebook_size = c.at("target_codebook_size").get<int>();
    tree.config.beta = c.at("beta").get<double>();
    tree.config.eta_pi = c.at("eta_pi").get<double>();
    tree.config.eta_alpha = c.at("eta_alpha").get<double>();
    tree.config.epochs = c.at("epochs").get<int>();
    tree.config.minibatch = c.at("minibatch").get<int>();
    tree.config.rng_seed = c.at("rng_seed").get<uint64_t>();
    tree.tau = j.at("tau").get<int>();
    tree.m = j.at("m").get<int>();
    tree.pitch_length = j.at("pitch").at("length").get<double>();
    tree.pitch_width = j.at("pitch").at("width").get<double>();
    tree.beta = j.at("beta").get<double>();
    for (const json& jb : j.at("branches")) {
      const int pt = static_cast<int>(play_type_from_wire(jb.at("play_type").get<std::string>()));
      PlayTypeBranch& branch = tree.branches[pt];
      branch.weights.alpha = vec_from_json(jb.at("alpha"));
      for (const json& jn : jb.at("nodes")) {
        TreeNode nd;
        nd.centroid = vec_from_json(jn.at("centroid"));
        nd.children = jn.at("children").get<std::vector<int>>();
        nd.leaf_id = jn.at("leaf_id").get<int>();
        nd.depth = jn.at("depth").get<int>();
        branch.nodes.push_back(std::move(nd));
      }
    }
    for (const json& jl : j.at("leaves")) {
      PredictionNode leaf;
      leaf.codebook_id = jl.at("codebook_id").get<int>();
      leaf.play_type = static_cast<int>(play_type_from_wire(jl.at("play_type").get<std::string>()));
      leaf.pi = vec_from_json(jl.at("pi"));
      leaf.assigned_count = jl.at("assigned_count").get<int>();
      leaf.centroid = vec_from_json(jl.at("centroid"));
      tree.leaves.push_back(std::move(leaf));
    }
    tree.training_loss = j.at("training_loss").get<std::vector<double>>();
    tree.notes = j.at("notes").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return tree;
}

}  // namespace playbook
