#include "playbook/codebook.hpp"

#include <filesystem>
#include <fstream>

#include "playbook/format.hpp"

namespace playbook {

HistogramSpec HistogramSpec::uniform(int n_bins, double lo, double hi) {
  if (n_bins < 1 || hi <= lo) throw std::invalid_argument("histogram: bad bin spec");
  HistogramSpec spec;
  spec.edges = Eigen::VectorXd::LinSpaced(n_bins + 1, lo, hi);
  return spec;
}

int HistogramSpec::bin_of(double value) const {
  const int nb = n_bins();
  if (value <= edges(0)) return 0;
  if (value >= edges(nb)) return nb - 1;  // last bin is closed
  // upper-bin convention: value == edges(k) lands in bin k
  int lo = 0, hi = nb;
  while (hi - lo > 1) {
    const int mid = (lo + hi) / 2;
    if (value >= edges(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

std::pair<int, double> assign_and_score(const DeepDecisionTree& tree, const Play& play) {
  const int leaf = route_hard(tree, play);
  return {leaf, leaf_predict(tree.leaves[leaf], play)};
}

std::vector<CodebookElement> build_histograms(const DeepDecisionTree& tree,
                                              const Dataset& dataset,
                                              const HistogramSpec& spec) {
  if (dataset.plays.empty()) throw std::invalid_argument("build_histograms: empty dataset");
  const int nb = spec.n_bins();
  std::vector<CodebookElement> elements(tree.leaves.size());
  for (size_t j = 0; j < tree.leaves.size(); ++j) {
    elements[j].id = tree.leaves[j].codebook_id;
    elements[j].mean_play = tree.leaves[j].centroid;
    elements[j].counts = Eigen::VectorXi::Zero(nb);
    elements[j].densities = Eigen::VectorXd::Zero(nb);
  }
  for (const Play& play : dataset.plays) {
    const auto [element, p] = assign_and_score(tree, play);
    elements[element].counts(spec.bin_of(p)) += 1;
    elements[element].member_count += 1;
  }
  for (CodebookElement& el : elements) {
    if (el.member_count == 0) continue;
    for (int k = 0; k < nb; ++k) {
      const double h = spec.edges(k + 1) - spec.edges(k);
      el.densities(k) = el.counts(k) / (el.member_count * h);
    }
  }
  return elements;
}

void export_playbook(const std::vector<CodebookElement>& elements, const HistogramSpec& spec,
                     int tau, int m, const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path base(dir);

  std::ofstream traj(base / "playbook_trajectories.csv");
  if (!traj) throw std::runtime_error("cannot write playbook_trajectories.csv in " + dir);
  traj << "element,role,frame,x,y\n";
  for (const CodebookElement& el : elements) {
    for (int r = 0; r < m; ++r)
      for (int t = 0; t < tau; ++t)
        traj << el.id << ',' << r << ',' << t << ','
             << format_double(el.mean_play(2 * tau * r + 2 * t)) << ','
             << format_double(el.mean_play(2 * tau * r + 2 * t + 1)) << '\n';
  }
  if (!traj) throw std::runtime_error("write failed: playbook_trajectories.csv");

  std::ofstream hist(base / "playbook_histograms.csv");
  if (!hist) throw std::runtime_error("cannot write playbook_histograms.csv in " + dir);
  hist << "element,bin_low,bin_high,count,density\n";
  for (const CodebookElement& el : elements) {
    for (int k = 0; k < spec.n_bins(); ++k)
      hist << el.id << ',' << format_double(spec.edges(k)) << ',' << format_double(spec.edges(k + 1))
           << ',' << el.counts(k) << ',' << format_double(el.densities(k)) << '\n';
  }
  if (!hist) throw std::runtime_error("write failed: playbook_histograms.csv");
}

}  // namespace playbook
