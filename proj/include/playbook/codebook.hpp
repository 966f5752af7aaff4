#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "playbook/deeptree.hpp"
#include "playbook/types.hpp"

namespace playbook {

/// Histogram bins over expected-goal values in [0, 1]. Bins are half-open
/// [l_k, l_{k+1}) with the last bin closed; a value exactly on an interior
/// edge counts toward the upper bin.
struct HistogramSpec {
  Eigen::VectorXd edges;  // n_bins + 1 strictly increasing edges covering [0,1]

  static HistogramSpec uniform(int n_bins = 10, double lo = 0.0, double hi = 1.0);
  int n_bins() const { return static_cast<int>(edges.size()) - 1; }
  int bin_of(double value) const;
};

/// One playbook entry: the leaf's centroid play plus the distribution of
/// expected-goal values of the plays assigned to it.
struct CodebookElement {
  int id = 0;
  Eigen::VectorXd mean_play;  // flattened centroid trajectories
  int member_count = 0;
  Eigen::VectorXi counts;     // per bin
  Eigen::VectorXd densities;  // counts / (member_count * h); zero when empty
};

/// Leaf id and predicted goal probability for one play.
std::pair<int, double> assign_and_score(const DeepDecisionTree& tree, const Play& play);

/// Exact counting of scored plays into per-element histograms. The total of
/// all counts equals the number of plays, and each non-empty element's
/// densities integrate to 1.
std::vector<CodebookElement> build_histograms(const DeepDecisionTree& tree,
                                              const Dataset& dataset, const HistogramSpec& spec);

/// Writes playbook_trajectories.csv (element,role,frame,x,y) and
/// playbook_histograms.csv (element,bin_low,bin_high,count,density) into dir.
void export_playbook(const std::vector<CodebookElement>& elements, const HistogramSpec& spec,
                     int tau, int m, const std::string& dir);

}  // namespace playbook
