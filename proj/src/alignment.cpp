#include "playbook/alignment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

namespace playbook {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// O(n^3) potentials method; returns some optimal permutation (row -> col).
std::vector<int> min_cost_assignment(const Eigen::MatrixXd& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::fill(minv.begin(), minv.end(), kInf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = a(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> perm(n, -1);
  for (int j = 1; j <= n; ++j)
    if (p[j] > 0) perm[p[j] - 1] = j - 1;
  return perm;
}

double assignment_cost(const Eigen::MatrixXd& cost, const std::vector<int>& perm) {
  double total = 0.0;
  for (size_t i = 0; i < perm.size(); ++i) total += cost(static_cast<Eigen::Index>(i), perm[i]);
  return total;
}

}  // namespace

Assignment hungarian(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols()) throw std::invalid_argument("hungarian: matrix must be square");
  if (!cost.allFinite()) throw std::invalid_argument("hungarian: entries must be finite");
  const int n = static_cast<int>(cost.rows());
  Assignment result;
  if (n == 0) return result;

  double best = assignment_cost(cost, min_cost_assignment(cost));

  // Fix rows in order, always taking the smallest column that still admits an
  // optimal completion; this yields the lexicographically smallest optimum.
  std::vector<int> chosen(n, -1);
  std::vector<char> col_used(n, 0);
  double fixed_cost = 0.0;
  for (int i = 0; i < n; ++i) {
    const double tol = 1e-9 * std::max(1.0, std::abs(best));
    for (int j = 0; j < n; ++j) {
      if (col_used[j]) continue;
      const int rest = n - i - 1;
      double completion = 0.0;
      if (rest > 0) {
        Eigen::MatrixXd sub(rest, rest);
        int col_map = 0;
        for (int c = 0; c < n; ++c) {
          if (col_used[c] || c == j) continue;
          for (int r = 0; r < rest; ++r) sub(r, col_map) = cost(i + 1 + r, c);
          ++col_map;
        }
        completion = assignment_cost(sub, min_cost_assignment(sub));
      }
      const double total = fixed_cost + cost(i, j) + completion;
      if (total <= best + tol) {
        chosen[i] = j;
        col_used[j] = 1;
        fixed_cost += cost(i, j);
        best = total;  // re-anchor so rounding error does not accumulate
        break;
      }
    }
  }
  result.permutation = chosen;
  result.cost = assignment_cost(cost, chosen);
  return result;
}

Eigen::MatrixX2d time_averaged_positions(const std::vector<AgentTrajectory>& team) {
  Eigen::MatrixX2d out(static_cast<Eigen::Index>(team.size()), 2);
  for (size_t i = 0; i < team.size(); ++i)
    out.row(static_cast<Eigen::Index>(i)) = team[i].points.colwise().mean();
  return out;
}

namespace {

Eigen::MatrixXd role_cost(const Eigen::MatrixX2d& positions, const Eigen::MatrixX2d& means) {
  const Eigen::Index n = positions.rows();
  Eigen::MatrixXd cost(n, n);
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index r = 0; r < n; ++r)
      cost(a, r) = (positions.row(a) - means.row(r)).squaredNorm();
  return cost;
}

void sort_rows(Eigen::MatrixX2d& means, bool descending_x) {
  std::vector<Eigen::Vector2d> rows(means.rows());
  for (Eigen::Index i = 0; i < means.rows(); ++i) rows[i] = means.row(i).transpose();
  std::sort(rows.begin(), rows.end(), [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    if (a.x() != b.x()) return descending_x ? a.x() > b.x() : a.x() < b.x();
    return a.y() < b.y();
  });
  for (Eigen::Index i = 0; i < means.rows(); ++i) means.row(i) = rows[i].transpose();
}

}  // namespace

FormationTemplate learn_template(const Dataset& dataset, int max_iters, double tol) {
  if (dataset.plays.empty()) throw std::invalid_argument("learn_template: empty dataset");
  const int half = dataset.m / 2;
  const size_t n = dataset.plays.size();

  std::vector<Eigen::MatrixX2d> att_pos(n), def_pos(n);
  for (size_t i = 0; i < n; ++i) {
    att_pos[i] = time_averaged_positions(dataset.plays[i].attacking);
    def_pos[i] = time_averaged_positions(dataset.plays[i].defending);
  }

  FormationTemplate tmpl;
  tmpl.att_means = att_pos[0];
  tmpl.def_means = def_pos[0];

  double prev_cost = kInf;
  for (int iter = 0; iter < max_iters; ++iter) {
    Eigen::MatrixX2d att_sum = Eigen::MatrixX2d::Zero(half, 2);
    Eigen::MatrixX2d def_sum = Eigen::MatrixX2d::Zero(half, 2);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const Assignment a = hungarian(role_cost(att_pos[i], tmpl.att_means));
      const Assignment d = hungarian(role_cost(def_pos[i], tmpl.def_means));
      total += a.cost + d.cost;
      for (int slot = 0; slot < half; ++slot) {
        att_sum.row(a.permutation[slot]) += att_pos[i].row(slot);
        def_sum.row(d.permutation[slot]) += def_pos[i].row(slot);
      }
    }
    tmpl.final_cost = total;
    tmpl.iterations_run = iter + 1;
    tmpl.cost_history.push_back(total);
    tmpl.att_means = att_sum / static_cast<double>(n);
    tmpl.def_means = def_sum / static_cast<double>(n);
    if (prev_cost - total < tol) break;
    prev_cost = total;
  }

  // Canonical role order: attackers deepest-first (ascending x), defenders
  // deepest-first (descending x) so role 0 is the goalkeeper slot.
  sort_rows(tmpl.att_means, /*descending_x=*/false);
  sort_rows(tmpl.def_means, /*descending_x=*/true);
  return tmpl;
}

Play align_play(const Play& play, const FormationTemplate& tmpl) {
  if (static_cast<Eigen::Index>(play.attacking.size()) != tmpl.att_means.rows() ||
      static_cast<Eigen::Index>(play.defending.size()) != tmpl.def_means.rows())
    throw std::invalid_argument("align_play: play and template disagree on m");
  Play out = play;
  const Assignment a = hungarian(role_cost(time_averaged_positions(play.attacking), tmpl.att_means));
  const Assignment d = hungarian(role_cost(time_averaged_positions(play.defending), tmpl.def_means));
  for (size_t slot = 0; slot < out.attacking.size(); ++slot)
    out.attacking[slot].role_index = a.permutation[slot];
  for (size_t slot = 0; slot < out.defending.size(); ++slot)
    out.defending[slot].role_index = d.permutation[slot];
  return out;
}

Dataset align_dataset(const Dataset& dataset, const FormationTemplate& tmpl) {
  Dataset out = dataset;
  for (Play& play : out.plays) play = align_play(play, tmpl);
  return out;
}

void save_template(const FormationTemplate& tmpl, const std::string& path) {
  nlohmann::json j;
  auto rows = [](const Eigen::MatrixX2d& mat) {
    nlohmann::json arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < mat.rows(); ++i)
      arr.push_back(nlohmann::json::array({mat(i, 0), mat(i, 1)}));
    return arr;
  };
  j["att_means"] = rows(tmpl.att_means);
  j["def_means"] = rows(tmpl.def_means);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump() << '\n';
}

FormationTemplate load_template(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open: " + path);
  FormationTemplate tmpl;
  try {
    const nlohmann::json j = nlohmann::json::parse(in);
    auto rows = [](const nlohmann::json& arr) {
      Eigen::MatrixX2d mat(static_cast<Eigen::Index>(arr.size()), 2);
      for (size_t i = 0; i < arr.size(); ++i) {
        mat(static_cast<Eigen::Index>(i), 0) = arr[i].at(0).get<double>();
        mat(static_cast<Eigen::Index>(i), 1) = arr[i].at(1).get<double>();
      }
      return mat;
    };
    tmpl.att_means = rows(j.at("att_means"));
    tmpl.def_means = rows(j.at("def_means"));
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
  return tmpl;
}

}  // namespace playbook
