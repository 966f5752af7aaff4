#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "playbook/types.hpp"

namespace playbook {

inline double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

/// Per-role importance weights inside the distortion measure.
/// Invariant: alpha >= 0 elementwise and sum(alpha) == m.
struct FeatureWeights {
  Eigen::VectorXd alpha;
};

FeatureWeights uniform_weights(int m);

/// Euclidean projection onto {x : x >= 0, sum(x) = total}.
Eigen::VectorXd project_to_scaled_simplex(const Eigen::VectorXd& v, double total);

/// Weighted distortion between flattened plays: sum_l alpha_l * ||a_l - b_l||^2
/// where role l owns the coords_per_role consecutive entries starting at
/// l*coords_per_role.
template <typename DA, typename DB, typename DW>
double weighted_distortion_flat(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                                const Eigen::MatrixBase<DW>& alpha,
                                Eigen::Index coords_per_role) {
  double total = 0.0;
  for (Eigen::Index l = 0; l < alpha.size(); ++l)
    total += alpha(l) * (a.segment(l * coords_per_role, coords_per_role) -
                         b.segment(l * coords_per_role, coords_per_role))
                            .squaredNorm();
  return total;
}

/// Per-role squared distances between two flattened plays (the distortion's
/// gradient with respect to alpha).
template <typename DA, typename DB>
Eigen::VectorXd role_sq_distances(const Eigen::MatrixBase<DA>& a, const Eigen::MatrixBase<DB>& b,
                                  Eigen::Index n_roles, Eigen::Index coords_per_role) {
  Eigen::VectorXd out(n_roles);
  for (Eigen::Index l = 0; l < n_roles; ++l)
    out(l) = (a.segment(l * coords_per_role, coords_per_role) -
              b.segment(l * coords_per_role, coords_per_role))
                 .squaredNorm();
  return out;
}

double weighted_distortion(const Play& a, const Play& b, const FeatureWeights& w);

struct ClusterResult {
  std::vector<std::vector<int>> members;  // clusters ordered by smallest member index
  Eigen::MatrixXd centroids;              // column per cluster: mean of member vectors
};

/// Agglomerative clustering (average linkage under the weighted distortion)
/// until n_clusters remain. Deterministic: merge ties break toward the
/// smallest pair of cluster indices. Columns of X are the flattened plays.
ClusterResult cluster_node(const Eigen::MatrixXd& X, const Eigen::VectorXd& alpha,
                           Eigen::Index coords_per_role, int n_clusters);
ClusterResult cluster_node(const std::vector<Play>& plays, const FeatureWeights& w,
                           int n_clusters);

struct TreeConfig {
  /// Total depth: semantic root split + decision layers + prediction layer.
  int n_layers = 4;
  /// Branching factor per decision layer (n_layers - 2 entries); empty means
  /// derived from target_codebook_size, defaulting to 3 per layer.
  std::vector<int> branching;
  /// 0 means derived as 4 * product(branching).
  int target_codebook_size = 0;
  /// Soft-routing temperature; <= 0 selects 1 / median pairwise distortion of
  /// a 256-play sample at training time.
  double beta = 0.0;
  double eta_pi = 0.05;
  double eta_alpha = 0.01;
  int epochs = 30;
  int minibatch = 32;
  uint64_t rng_seed = 0;
};

/// Fills derived fields and validates; throws std::invalid_argument.
TreeConfig resolve_config(TreeConfig config);

struct TreeNode {
  Eigen::VectorXd centroid;   // mean flattened play of construction members
  std::vector<int> children;  // node ids within the branch; empty = leaf
  int leaf_id = -1;           // codebook id when leaf
  int depth = 0;
};

/// Leaf classifier: p(goal) = sigmoid(pi . [flatten(play); 1]).
struct PredictionNode {
  Eigen::VectorXd pi;
  int assigned_count = 0;
  int codebook_id = -1;
  int play_type = 0;
  Eigen::VectorXd centroid;
};

struct PlayTypeBranch {
  std::vector<TreeNode> nodes;  // nodes[0] is the branch root
  FeatureWeights weights;
};

struct DeepDecisionTree {
  TreeConfig config;
  int tau = 0;
  int m = 0;
  double pitch_length = 0.0;
  double pitch_width = 0.0;
  double beta = 1.0;  // resolved soft-routing temperature
  std::array<PlayTypeBranch, kNumPlayTypes> branches;
  std::vector<PredictionNode> leaves;  // ordered by codebook_id
  std::vector<double> training_loss;   // expected squared loss per epoch
  std::vector<std::string> notes;      // early-stop and fallback reports
};

/// Codebook id of the leaf the play routes to: hard play_type split at the
/// root, then minimum weighted distortion to each child centroid, ties to the
/// lowest child index.
int route_hard(const DeepDecisionTree& tree, const Play& play);

/// Distribution over all leaves: softmax(-beta * distortion) per decision
/// node, probabilities multiplied along the path. Zero outside the play's
/// play_type branch; sums to 1.
Eigen::VectorXd route_soft(const DeepDecisionTree& tree, const Play& play, double beta);

double leaf_predict(const PredictionNode& node, const Play& play);

/// Layer-wise training: grow one decision layer at a time with the current
/// weights, then alternate SGD epochs on the leaf classifiers and on alpha
/// through the soft routing, and repeat until the configured depth.
DeepDecisionTree train(const Dataset& dataset, const TreeConfig& config);

/// Mean Bernoulli log loss of hard-routed leaf predictions, q clamped to
/// [1e-9, 1 - 1e-9].
double evaluate_logloss(const DeepDecisionTree& tree, const Dataset& dataset);

double mean_logloss(const Eigen::VectorXd& predicted, const Eigen::VectorXd& labels);

/// Mean expected squared loss sum_k P_soft(k|x) (p - f_k(x))^2 over the
/// dataset, with exact gradients w.r.t. every branch alpha and leaf pi. Shares
/// the accumulation code used by SGD, so finite-difference checks of these
/// gradients cover the training path.
struct ObjectiveGrads {
  double value = 0.0;
  std::array<Eigen::VectorXd, kNumPlayTypes> grad_alpha;
  std::vector<Eigen::VectorXd> grad_pi;  // by codebook id
};
ObjectiveGrads training_objective(const DeepDecisionTree& tree, const Dataset& dataset);

/// L2-regularized logistic regression fitted by Newton iterations on
/// standardized features; the handcrafted baseline classifier.
struct LogisticModel {
  Eigen::VectorXd weights;  // standardized-space weights, bias last
  Eigen::VectorXd feat_mean;
  Eigen::VectorXd feat_scale;
  double predict(const Eigen::VectorXd& features) const;
};
LogisticModel fit_logistic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                           double ridge = 1e-6, int max_iters = 100);

void save_tree(const DeepDecisionTree& tree, const std::string& path);
DeepDecisionTree load_tree(const std::string& path);

}  // namespace playbook
