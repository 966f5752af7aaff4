#include "playbook/strategy.hpp"

#include <fstream>

#include "playbook/codebook.hpp"
#include "playbook/format.hpp"

namespace playbook {

std::vector<ScoredPlay> score_dataset(const DeepDecisionTree& tree, const Dataset& dataset,
                                      bool use_outcome) {
  std::vector<ScoredPlay> out;
  out.reserve(dataset.plays.size());
  for (const Play& play : dataset.plays) {
    const auto [element, p] = assign_and_score(tree, play);
    out.push_back({element, use_outcome ? static_cast<double>(play.label) : p,
                   play.attacking_team, play.defending_team});
  }
  return out;
}

namespace {

StrategyDistribution averaged(const std::vector<ScoredPlay>& scored, int n_elements, Side side,
                              int team) {
  StrategyDistribution dist;
  dist.side = side;
  dist.team = team;
  dist.values = Eigen::VectorXd::Zero(n_elements);
  dist.shots = Eigen::VectorXi::Zero(n_elements);
  for (const ScoredPlay& sp : scored) {
    if (team != kLeagueMean) {
      const int owner = side == Side::Offensive ? sp.att_team : sp.def_team;
      if (owner != team) continue;
    }
    dist.values(sp.element) += sp.q;
    dist.shots(sp.element) += 1;
  }
  for (int j = 0; j < n_elements; ++j)
    if (dist.shots(j) > 0) dist.values(j) /= dist.shots(j);
  return dist;
}

}  // namespace

StrategyDistribution mean_strategy(const std::vector<ScoredPlay>& scored, int n_elements,
                                   Side side) {
  return averaged(scored, n_elements, side, kLeagueMean);
}

StrategyDistribution team_strategy(const std::vector<ScoredPlay>& scored, int n_elements,
                                   int team, Side side) {
  bool seen = false;
  for (const ScoredPlay& sp : scored)
    if (sp.att_team == team || sp.def_team == team) {
      seen = true;
      break;
    }
  if (!seen) throw std::invalid_argument("team_strategy: unknown team " + std::to_string(team));
  return averaged(scored, n_elements, side, team);
}

StrategyDistribution relative_strategy(const StrategyDistribution& team_dist,
                                       const StrategyDistribution& mean_dist) {
  if (team_dist.side != mean_dist.side)
    throw std::invalid_argument("relative_strategy: side mismatch");
  if (team_dist.values.size() != mean_dist.values.size())
    throw std::invalid_argument("relative_strategy: codebook size mismatch");
  StrategyDistribution out = team_dist;
  for (int j = 0; j < out.values.size(); ++j) {
    if (team_dist.supported(j) && mean_dist.supported(j))
      out.values(j) = team_dist.values(j) - mean_dist.values(j);
    else
      out.values(j) = 0.0;  // shots(j) keeps the absent marker
  }
  return out;
}

Eigen::VectorXi shot_frequency(const std::vector<ScoredPlay>& scored, int n_elements) {
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(n_elements);
  for (const ScoredPlay& sp : scored) counts(sp.element) += 1;
  return counts;
}

void export_strategy_csv(const std::vector<StrategyDistribution>& dists,
                         const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "team,side,element,value,shots,supported\n";
  for (const StrategyDistribution& dist : dists) {
    const std::string team =
        dist.team == kLeagueMean ? std::string("LEAGUE") : std::to_string(dist.team);
    const char* side = dist.side == Side::Offensive ? "offensive" : "defensive";
    for (int j = 0; j < dist.values.size(); ++j)
      out << team << ',' << side << ',' << j << ','
          << (dist.supported(j) ? format_double(dist.values(j)) : std::string("")) << ','
          << dist.shots(j) << ',' << (dist.supported(j) ? 1 : 0) << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace playbook
