// Command-line front end: generate -> align -> train -> evaluate / codebook /
// strategy / simulate, each writing plot-ready CSV artifacts and a run
// manifest. Exit codes: 2 bad flags, 3 missing files, 4 schema violations.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "playbook/alignment.hpp"
#include "playbook/codebook.hpp"
#include "playbook/deeptree.hpp"
#include "playbook/format.hpp"
#include "playbook/rng.hpp"
#include "playbook/simulator.hpp"
#include "playbook/strategy.hpp"
#include "playbook/trajectory.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace playbook;

namespace {

class MissingFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void require_file(const std::string& path) {
  if (!fs::exists(path)) throw MissingFileError("no such file: " + path);
}

json load_config_file(const std::string& path) {
  if (path.empty()) return json::object();
  require_file(path);
  std::ifstream in(path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

template <typename T>
void maybe(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

SyntheticConfig synthetic_from_json(const json& root) {
  SyntheticConfig c;
  if (!root.contains("synthetic")) return c;
  const json& j = root.at("synthetic");
  maybe(j, "n_teams", c.n_teams);
  maybe(j, "n_matches", c.n_matches);
  maybe(j, "shots_per_match_mean", c.shots_per_match_mean);
  maybe(j, "goal_base_rate", c.goal_base_rate);
  maybe(j, "tau", c.tau);
  maybe(j, "m", c.m);
  maybe(j, "pitch_length", c.pitch_length);
  maybe(j, "pitch_width", c.pitch_width);
  maybe(j, "frame_rate_hz", c.frame_rate_hz);
  maybe(j, "match_length_s", c.match_length_s);
  maybe(j, "noise_std", c.noise_std);
  maybe(j, "play_type_weights", c.play_type_weights);
  maybe(j, "archetype_rate_offsets", c.archetype_rate_offsets);
  maybe(j, "role3_swing_m", c.role3_swing_m);
  maybe(j, "role5_shift_m", c.role5_shift_m);
  maybe(j, "role5_rate_gain", c.role5_rate_gain);
  maybe(j, "team_attack_skill", c.team_attack_skill);
  maybe(j, "team_defence_skill", c.team_defence_skill);
  maybe(j, "skill_spread", c.skill_spread);
  maybe(j, "trail_gap_factor", c.trail_gap_factor);
  maybe(j, "late_gap_factor", c.late_gap_factor);
  maybe(j, "home_gap_advantage", c.home_gap_advantage);
  maybe(j, "shuffle_roles", c.shuffle_roles);
  maybe(j, "rng_seed", c.rng_seed);
  return c;
}

json synthetic_to_json(const SyntheticConfig& c) {
  return json{{"n_teams", c.n_teams},
              {"n_matches", c.n_matches},
              {"shots_per_match_mean", c.shots_per_match_mean},
              {"goal_base_rate", c.goal_base_rate},
              {"tau", c.tau},
              {"m", c.m},
              {"pitch_length", c.pitch_length},
              {"pitch_width", c.pitch_width},
              {"frame_rate_hz", c.frame_rate_hz},
              {"match_length_s", c.match_length_s},
              {"noise_std", c.noise_std},
              {"play_type_weights", c.play_type_weights},
              {"archetype_rate_offsets", c.archetype_rate_offsets},
              {"role3_swing_m", c.role3_swing_m},
              {"role5_shift_m", c.role5_shift_m},
              {"role5_rate_gain", c.role5_rate_gain},
              {"team_attack_skill", c.team_attack_skill},
              {"team_defence_skill", c.team_defence_skill},
              {"skill_spread", c.skill_spread},
              {"trail_gap_factor", c.trail_gap_factor},
              {"late_gap_factor", c.late_gap_factor},
              {"home_gap_advantage", c.home_gap_advantage},
              {"shuffle_roles", c.shuffle_roles},
              {"rng_seed", c.rng_seed}};
}

TreeConfig tree_from_json(const json& root) {
  TreeConfig c;
  if (!root.contains("tree")) return c;
  const json& j = root.at("tree");
  maybe(j, "n_layers", c.n_layers);
  maybe(j, "branching", c.branching);
  maybe(j, "target_codebook_size", c.target_codebook_size);
  maybe(j, "beta", c.beta);
  maybe(j, "eta_pi", c.eta_pi);
  maybe(j, "eta_alpha", c.eta_alpha);
  maybe(j, "epochs", c.epochs);
  maybe(j, "minibatch", c.minibatch);
  maybe(j, "rng_seed", c.rng_seed);
  return c;
}

json tree_to_json(const TreeConfig& c) {
  return json{{"n_layers", c.n_layers},
              {"branching", c.branching},
              {"target_codebook_size", c.target_codebook_size},
              {"beta", c.beta},
              {"eta_pi", c.eta_pi},
              {"eta_alpha", c.eta_alpha},
              {"epochs", c.epochs},
              {"minibatch", c.minibatch},
              {"rng_seed", c.rng_seed}};
}

SimulationConfig sim_from_json(const json& root) {
  SimulationConfig c;
  if (!root.contains("simulation")) return c;
  const json& j = root.at("simulation");
  maybe(j, "n_runs", c.n_runs);
  maybe(j, "match_length_s", c.match_length_s);
  maybe(j, "stoppage_max_s", c.stoppage_max_s);
  maybe(j, "rng_seed", c.rng_seed);
  return c;
}

json sim_to_json(const SimulationConfig& c) {
  return json{{"n_runs", c.n_runs},
              {"match_length_s", c.match_length_s},
              {"stoppage_max_s", c.stoppage_max_s},
              {"rng_seed", c.rng_seed}};
}

struct ManifestWriter {
  std::string subcommand;
  std::string out_dir;
  uint64_t seed = 0;
  json config = json::object();
  json inputs = json::object();
  json outputs = json::object();
  std::chrono::steady_clock::time_point started = std::chrono::steady_clock::now();

  void add_input(const std::string& name, const std::string& path) { inputs[name] = path; }

  void add_output(const std::string& name, const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();
    std::ostringstream hex;
    hex << std::hex << fnv1a64(bytes.data(), bytes.size());
    outputs[name] = {{"path", path}, {"fnv1a64", hex.str()}, {"bytes", bytes.size()}};
  }

  void write() const {
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const auto stamp = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char iso[32];
    std::strftime(iso, sizeof(iso), "%FT%TZ", std::gmtime(&stamp));
    const json manifest = {{"subcommand", subcommand}, {"seed", seed},       {"config", config},
                           {"inputs", inputs},         {"outputs", outputs}, {"wall_clock_s", wall},
                           {"timestamp", iso}};
    std::ofstream out(fs::path(out_dir) / "run_manifest.json");
    out << manifest.dump(2) << '\n';
  }
};

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

// -- shared CLI state --------------------------------------------------------

struct Common {
  uint64_t seed = 0;
  std::string config_path;
  std::string out_dir = ".";
  bool seed_given = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Seed for every random draw")->each([&](const std::string&) {
    c.seed_given = true;
  });
  sub->add_option("--config", c.config_path, "JSON config file");
  sub->add_option("--out", c.out_dir, "Output directory");
}

ManifestWriter make_manifest(const std::string& name, const Common& common) {
  fs::create_directories(common.out_dir);
  ManifestWriter mw;
  mw.subcommand = name;
  mw.out_dir = common.out_dir;
  mw.seed = common.seed;
  return mw;
}

// -- subcommands -------------------------------------------------------------

void run_generate(const Common& common, std::string plays_out) {
  ManifestWriter mw = make_manifest("generate", common);
  SyntheticConfig config = synthetic_from_json(load_config_file(common.config_path));
  if (common.seed_given || common.seed != 0) config.rng_seed = common.seed;
  if (plays_out.empty()) plays_out = join_path(common.out_dir, "plays.jsonl");

  const Dataset dataset = generate_synthetic(config);
  save_plays(dataset, plays_out);

  mw.config = synthetic_to_json(config);
  mw.add_output("plays", plays_out);
  mw.write();
  std::cout << "generated " << dataset.plays.size() << " plays over " << config.n_matches
            << " matches -> " << plays_out << "\n";
}

void run_align(const Common& common, const std::string& plays_path, std::string template_out,
               std::string aligned_out, int max_iters, double tol) {
  ManifestWriter mw = make_manifest("align", common);
  require_file(plays_path);
  if (template_out.empty()) template_out = join_path(common.out_dir, "template.json");
  if (aligned_out.empty()) aligned_out = join_path(common.out_dir, "aligned.jsonl");

  const Dataset dataset = load_plays(plays_path);
  const FormationTemplate tmpl = learn_template(dataset, max_iters, tol);
  const Dataset aligned = align_dataset(dataset, tmpl);
  save_template(tmpl, template_out);
  save_plays(aligned, aligned_out);

  mw.config = {{"max_iters", max_iters}, {"tol", tol}};
  mw.add_input("plays", plays_path);
  mw.add_output("template", template_out);
  mw.add_output("aligned", aligned_out);
  mw.write();
  std::cout << "template learned in " << tmpl.iterations_run << " iterations (cost "
            << tmpl.final_cost << " m^2) -> " << template_out << "\n";
}

void run_train(const Common& common, const std::string& plays_path, std::string tree_out,
               TreeConfig config) {
  ManifestWriter mw = make_manifest("train", common);
  require_file(plays_path);
  if (tree_out.empty()) tree_out = join_path(common.out_dir, "tree.json");

  const Dataset dataset = load_plays(plays_path);
  if (common.seed_given || common.seed != 0) config.rng_seed = common.seed;
  const DeepDecisionTree tree = train(dataset, config);
  save_tree(tree, tree_out);

  mw.config = {{"tree", tree_to_json(tree.config)}};
  mw.add_input("plays", plays_path);
  mw.add_output("tree", tree_out);
  mw.write();
  std::cout << "trained tree with " << tree.leaves.size() << " leaves";
  if (!tree.training_loss.empty())
    std::cout << ", loss " << tree.training_loss.front() << " -> " << tree.training_loss.back();
  std::cout << " -> " << tree_out << "\n";
  for (const std::string& note : tree.notes) std::cout << "note: " << note << "\n";
}

void run_evaluate(const Common& common, const std::string& plays_path, uint64_t split_seed,
                  bool split_seed_given, double train_frac, std::vector<int> layer_list,
                  bool with_baseline, TreeConfig base_config) {
  ManifestWriter mw = make_manifest("evaluate", common);
  require_file(plays_path);
  if (!split_seed_given) split_seed = common.seed;
  if (layer_list.empty()) layer_list = {2, 4};

  const Dataset dataset = load_plays(plays_path);
  const auto [train_set, test_set] = split_by_match(dataset, train_frac, split_seed);
  if (train_set.plays.empty() || test_set.plays.empty())
    throw std::invalid_argument("evaluate: split produced an empty side");

  const std::string eval_path = join_path(common.out_dir, "evaluation.csv");
  std::ofstream csv(eval_path);
  csv << "model,layers,leaves,train_logloss,test_logloss,train_plays,test_plays\n";

  if (with_baseline) {
    Eigen::MatrixXd Xtr(train_set.plays.size(), 20);
    Eigen::VectorXd ytr(train_set.plays.size());
    for (size_t i = 0; i < train_set.plays.size(); ++i) {
      Xtr.row(i) = handcrafted_features(train_set.plays[i], dataset.pitch_length,
                                        dataset.pitch_width);
      ytr(i) = train_set.plays[i].label;
    }
    const LogisticModel baseline = fit_logistic(Xtr, ytr);
    auto eval = [&](const Dataset& ds) {
      Eigen::VectorXd q(ds.plays.size()), p(ds.plays.size());
      for (size_t i = 0; i < ds.plays.size(); ++i) {
        q(i) = baseline.predict(
            handcrafted_features(ds.plays[i], dataset.pitch_length, dataset.pitch_width));
        p(i) = ds.plays[i].label;
      }
      return mean_logloss(q, p);
    };
    csv << "handcrafted_logistic,,," << format_double(eval(train_set)) << ','
        << format_double(eval(test_set)) << ',' << train_set.plays.size() << ','
        << test_set.plays.size() << '\n';
  }

  for (int layers : layer_list) {
    TreeConfig config = base_config;
    config.n_layers = layers;
    config.branching.clear();
    if (common.seed_given || common.seed != 0) config.rng_seed = common.seed;
    const DeepDecisionTree tree = train(train_set, config);
    csv << "deep_tree," << layers << ',' << tree.leaves.size() << ','
        << format_double(evaluate_logloss(tree, train_set)) << ','
        << format_double(evaluate_logloss(tree, test_set)) << ',' << train_set.plays.size() << ','
        << test_set.plays.size() << '\n';
  }
  csv.close();

  mw.config = {{"split_seed", split_seed},
               {"train_frac", train_frac},
               {"layers", layer_list},
               {"baseline", with_baseline},
               {"tree", tree_to_json(base_config)}};
  mw.add_input("plays", plays_path);
  mw.add_output("evaluation", eval_path);
  mw.write();
  std::cout << "evaluation written -> " << eval_path << "\n";
}

void run_codebook(const Common& common, const std::string& plays_path,
                  const std::string& tree_path, int bins) {
  ManifestWriter mw = make_manifest("codebook", common);
  require_file(plays_path);
  require_file(tree_path);
  const Dataset dataset = load_plays(plays_path);
  const DeepDecisionTree tree = load_tree(tree_path);
  const HistogramSpec spec = HistogramSpec::uniform(bins);
  const std::vector<CodebookElement> elements = build_histograms(tree, dataset, spec);
  export_playbook(elements, spec, tree.tau, tree.m, common.out_dir);

  mw.config = {{"bins", bins}};
  mw.add_input("plays", plays_path);
  mw.add_input("tree", tree_path);
  mw.add_output("trajectories", join_path(common.out_dir, "playbook_trajectories.csv"));
  mw.add_output("histograms", join_path(common.out_dir, "playbook_histograms.csv"));
  mw.write();
  std::cout << "playbook with " << elements.size() << " elements -> " << common.out_dir << "\n";
}

void run_strategy(const Common& common, const std::string& plays_path,
                  const std::string& tree_path, bool use_outcome) {
  ManifestWriter mw = make_manifest("strategy", common);
  require_file(plays_path);
  require_file(tree_path);
  const Dataset dataset = load_plays(plays_path);
  const DeepDecisionTree tree = load_tree(tree_path);
  const int n_elements = static_cast<int>(tree.leaves.size());
  const std::vector<ScoredPlay> scored = score_dataset(tree, dataset, use_outcome);

  // League rows are absolute means; team rows are relative to the league.
  std::vector<StrategyDistribution> dists;
  const StrategyDistribution league_off = mean_strategy(scored, n_elements, Side::Offensive);
  const StrategyDistribution league_def = mean_strategy(scored, n_elements, Side::Defensive);
  dists.push_back(league_off);
  dists.push_back(league_def);
  for (int team : dataset.team_ids) {
    dists.push_back(
        relative_strategy(team_strategy(scored, n_elements, team, Side::Offensive), league_off));
    dists.push_back(
        relative_strategy(team_strategy(scored, n_elements, team, Side::Defensive), league_def));
  }
  const std::string path = join_path(common.out_dir, "strategy.csv");
  export_strategy_csv(dists, path);

  mw.config = {{"use_outcome", use_outcome}};
  mw.add_input("plays", plays_path);
  mw.add_input("tree", tree_path);
  mw.add_output("strategy", path);
  mw.write();
  std::cout << "strategy distributions for " << dataset.team_ids.size() << " teams -> " << path
            << "\n";
}

void run_simulate(const Common& common, const std::string& plays_path, std::string tree_path,
                  uint64_t split_seed, bool split_seed_given, double train_frac,
                  TreeConfig tree_config, SimulationConfig sim_config, bool sim_runs_given,
                  int n_runs_flag) {
  ManifestWriter mw = make_manifest("simulate", common);
  require_file(plays_path);
  if (!split_seed_given) split_seed = common.seed;
  if (sim_runs_given) sim_config.n_runs = n_runs_flag;
  if (common.seed_given || common.seed != 0) sim_config.rng_seed = common.seed;

  const Dataset dataset = load_plays(plays_path);
  const auto [train_set, test_set] = split_by_match(dataset, train_frac, split_seed);
  if (train_set.plays.empty() || test_set.plays.empty())
    throw std::invalid_argument("simulate: split produced an empty side");

  DeepDecisionTree tree;
  if (!tree_path.empty()) {
    require_file(tree_path);
    tree = load_tree(tree_path);
  } else {
    TreeConfig config = tree_config;
    if (common.seed_given || common.seed != 0) config.rng_seed = common.seed;
    tree = train(train_set, config);
  }

  const std::vector<MatchResult> train_matches = matches_from_dataset(train_set);
  const std::vector<MatchResult> test_matches = matches_from_dataset(test_set);
  const PoissonSeasonModel poisson = fit_poisson(train_matches);
  const ShotClockModel clock_m1 = fit_shot_clock(train_matches, false, sim_config.match_length_s);
  const ShotClockModel clock_ctx = fit_shot_clock(train_matches, true, sim_config.match_length_s);
  // profiles group realized outcomes: per-team conversion differences are in
  // the labels, while tree predictions do not condition on the team
  const std::vector<ScoredPlay> scored = score_dataset(tree, train_set, /*use_outcome=*/true);
  const TeamProfiles profiles = build_profiles(scored, static_cast<int>(tree.leaves.size()));

  const std::string matches_path = join_path(common.out_dir, "simulation_matches.csv");
  std::ofstream csv(matches_path);
  csv << "match_id,home_team,away_team,mode,pred_home,pred_away,truth_home,truth_away\n";

  std::vector<ScorePrediction> pred_bhm, pred_m1, pred_ctx;
  std::vector<std::pair<int, int>> truths;
  for (const MatchResult& match : test_matches) {
    SimulationConfig cfg = sim_config;
    cfg.rng_seed = hash_combine(sim_config.rng_seed, static_cast<uint64_t>(match.match_id));
    const BhmPrediction bhm = simulate_bhm(poisson, match.home_team, match.away_team, cfg);
    const ScorePrediction m1 =
        simulate_match(profiles, clock_m1, match.home_team, match.away_team, cfg, SimMode::M1);
    const ScorePrediction ctx = simulate_match(profiles, clock_ctx, match.home_team,
                                               match.away_team, cfg, SimMode::Context);
    pred_bhm.push_back({bhm.mean_home, bhm.mean_away});
    pred_m1.push_back(m1);
    pred_ctx.push_back(ctx);
    truths.emplace_back(match.home_goals, match.away_goals);
    auto row = [&](const char* mode, const ScorePrediction& p) {
      csv << match.match_id << ',' << match.home_team << ',' << match.away_team << ',' << mode
          << ',' << format_double(p.home) << ',' << format_double(p.away) << ','
          << match.home_goals << ',' << match.away_goals << '\n';
    };
    row("bhm", {bhm.mean_home, bhm.mean_away});
    row("m1", m1);
    row("context", ctx);
  }
  csv.close();

  const std::string summary_path = join_path(common.out_dir, "simulation_summary.csv");
  std::ofstream summary(summary_path);
  summary << "mode,mse\n";
  summary << "bhm," << format_double(evaluate_mse(pred_bhm, truths)) << '\n';
  summary << "m1," << format_double(evaluate_mse(pred_m1, truths)) << '\n';
  summary << "context," << format_double(evaluate_mse(pred_ctx, truths)) << '\n';
  summary.close();

  mw.config = {{"split_seed", split_seed},
               {"train_frac", train_frac},
               {"tree", tree_to_json(tree.config)},
               {"simulation", sim_to_json(sim_config)}};
  mw.add_input("plays", plays_path);
  if (!tree_path.empty()) mw.add_input("tree", tree_path);
  mw.add_output("matches", matches_path);
  mw.add_output("summary", summary_path);
  mw.write();
  std::cout << "simulated " << test_matches.size() << " held-out matches -> " << summary_path
            << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"playbook: trajectory playbook learning and match simulation"};
  app.require_subcommand(1);

  Common common;
  std::string plays_path, plays_out, template_out, aligned_out, tree_out, tree_path;
  int max_iters = 50;
  double tol = 1e-6;
  TreeConfig tree_config;
  uint64_t split_seed = 0;
  double train_frac = 0.7;
  std::vector<int> layer_list;
  bool no_baseline = false;
  bool use_outcome = false;
  int n_runs_flag = 1000;

  CLI::App* generate = app.add_subcommand("generate", "Create a synthetic play dataset");
  add_common(generate, common);
  generate->add_option("--plays-out", plays_out, "Output plays file (.jsonl)");

  CLI::App* align = app.add_subcommand("align", "Learn a formation template and align plays");
  add_common(align, common);
  align->add_option("--plays", plays_path, "Input plays file")->required();
  align->add_option("--template-out", template_out, "Output template file");
  align->add_option("--aligned-out", aligned_out, "Output aligned plays file");
  align->add_option("--max-iters", max_iters, "Template learning iterations");
  align->add_option("--tol", tol, "Convergence tolerance (m^2)");

  CLI::App* train_cmd = app.add_subcommand("train", "Train the deep decision tree");
  add_common(train_cmd, common);
  train_cmd->add_option("--plays", plays_path, "Aligned plays file")->required();
  train_cmd->add_option("--tree-out", tree_out, "Output tree file");
  train_cmd->add_option("--layers", tree_config.n_layers, "Total tree depth");
  train_cmd->add_option("--branching", tree_config.branching, "Branching per decision layer");
  train_cmd->add_option("--codebook-size", tree_config.target_codebook_size, "Target leaf count");
  train_cmd->add_option("--beta", tree_config.beta, "Soft routing temperature (<=0: auto)");
  train_cmd->add_option("--eta-pi", tree_config.eta_pi, "Classifier step size");
  train_cmd->add_option("--eta-alpha", tree_config.eta_alpha, "Feature weight step size");
  train_cmd->add_option("--epochs", tree_config.epochs, "SGD epochs per layer");
  train_cmd->add_option("--minibatch", tree_config.minibatch, "Minibatch size");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Train/test split and log-loss table");
  add_common(evaluate, common);
  evaluate->add_option("--plays", plays_path, "Aligned plays file")->required();
  CLI::Option* split_opt = evaluate->add_option("--split-seed", split_seed, "Match split seed");
  evaluate->add_option("--train-frac", train_frac, "Training fraction of matches");
  evaluate->add_option("--layers", layer_list, "Tree depths to evaluate (repeatable)");
  evaluate->add_flag("--no-baseline", no_baseline, "Skip the handcrafted baseline");
  evaluate->add_option("--epochs", tree_config.epochs, "SGD epochs per layer");
  evaluate->add_option("--eta-pi", tree_config.eta_pi, "Classifier step size");
  evaluate->add_option("--eta-alpha", tree_config.eta_alpha, "Feature weight step size");
  evaluate->add_option("--minibatch", tree_config.minibatch, "Minibatch size");
  evaluate->add_option("--beta", tree_config.beta, "Soft routing temperature (<=0: auto)");

  CLI::App* codebook = app.add_subcommand("codebook", "Export the playbook and histograms");
  add_common(codebook, common);
  codebook->add_option("--plays", plays_path, "Aligned plays file")->required();
  codebook->add_option("--tree", tree_path, "Trained tree file")->required();
  int bins = 10;
  codebook->add_option("--bins", bins, "Histogram bins over [0,1]");

  CLI::App* strategy = app.add_subcommand("strategy", "Export team strategy distributions");
  add_common(strategy, common);
  strategy->add_option("--plays", plays_path, "Aligned plays file")->required();
  strategy->add_option("--tree", tree_path, "Trained tree file")->required();
  strategy->add_flag("--use-outcome", use_outcome, "Group binary outcomes instead of predictions");

  CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo match simulation comparison");
  add_common(simulate, common);
  simulate->add_option("--plays", plays_path, "Aligned season plays file")->required();
  simulate->add_option("--tree", tree_path, "Trained tree file (default: train on the split)");
  CLI::Option* sim_split_opt = simulate->add_option("--split-seed", split_seed, "Match split seed");
  simulate->add_option("--train-frac", train_frac, "Training fraction of matches");
  CLI::Option* runs_opt = simulate->add_option("--runs", n_runs_flag, "Simulation runs per match");
  simulate->add_option("--layers", tree_config.n_layers, "Tree depth when training internally");
  simulate->add_option("--epochs", tree_config.epochs, "SGD epochs per layer");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: code=2: " << e.what() << std::endl;
    return 2;
  }

  try {
    const json config_json = load_config_file(common.config_path);
    if (app.got_subcommand(generate)) {
      run_generate(common, plays_out);
    } else if (app.got_subcommand(align)) {
      run_align(common, plays_path, template_out, aligned_out, max_iters, tol);
    } else if (app.got_subcommand(train_cmd)) {
      // flag-bound values win over config-file values
      TreeConfig config = tree_from_json(config_json);
      if (train_cmd->count("--layers")) config.n_layers = tree_config.n_layers;
      if (train_cmd->count("--branching")) config.branching = tree_config.branching;
      if (train_cmd->count("--codebook-size"))
        config.target_codebook_size = tree_config.target_codebook_size;
      if (train_cmd->count("--beta")) config.beta = tree_config.beta;
      if (train_cmd->count("--eta-pi")) config.eta_pi = tree_config.eta_pi;
      if (train_cmd->count("--eta-alpha")) config.eta_alpha = tree_config.eta_alpha;
      if (train_cmd->count("--epochs")) config.epochs = tree_config.epochs;
      if (train_cmd->count("--minibatch")) config.minibatch = tree_config.minibatch;
      run_train(common, plays_path, tree_out, config);
    } else if (app.got_subcommand(evaluate)) {
      TreeConfig config = tree_from_json(config_json);
      if (evaluate->count("--epochs")) config.epochs = tree_config.epochs;
      if (evaluate->count("--eta-pi")) config.eta_pi = tree_config.eta_pi;
      if (evaluate->count("--eta-alpha")) config.eta_alpha = tree_config.eta_alpha;
      if (evaluate->count("--minibatch")) config.minibatch = tree_config.minibatch;
      if (evaluate->count("--beta")) config.beta = tree_config.beta;
      run_evaluate(common, plays_path, split_seed, split_opt->count() > 0, train_frac, layer_list,
                   !no_baseline, config);
    } else if (app.got_subcommand(codebook)) {
      run_codebook(common, plays_path, tree_path, bins);
    } else if (app.got_subcommand(strategy)) {
      run_strategy(common, plays_path, tree_path, use_outcome);
    } else if (app.got_subcommand(simulate)) {
      TreeConfig config = tree_from_json(config_json);
      if (simulate->count("--layers")) config.n_layers = tree_config.n_layers;
      if (simulate->count("--epochs")) config.epochs = tree_config.epochs;
      run_simulate(common, plays_path, tree_path, split_seed, sim_split_opt->count() > 0,
                   train_frac, config, sim_from_json(config_json), runs_opt->count() > 0,
                   n_runs_flag);
    }
  } catch (const MissingFileError& e) {
    std::cerr << "error: code=3: " << e.what() << std::endl;
    return 3;
  } catch (const SchemaError& e) {
    std::cerr << "error: code=4: " << e.what() << std::endl;
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: code=1: " << e.what() << std::endl;
    return 1;
  }
  return 0;
}
