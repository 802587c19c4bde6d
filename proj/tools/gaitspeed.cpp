// gaitspeed: in-home gait velocity estimation from PIR room transitions.
//
// One stage per subcommand so every intermediate artifact (events,
// transitions, targets, datasets, models, reports) can be inspected or
// swapped out. `simulate` generates synthetic homes with known ground
// truth; `evaluate` runs the whole analysis over a cohort.

#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gait/csv.hpp"
#include "gait/errors.hpp"
#include "gait/event_model.hpp"
#include "gait/features.hpp"
#include "gait/groundtruth.hpp"
#include "gait/pipeline.hpp"
#include "gait/simulator.hpp"
#include "gait/stats.hpp"
#include "gait/svr.hpp"
#include "gait/transitions.hpp"

namespace fs = std::filesystem;
using namespace gait;

namespace {

EventStream load_events(const fs::path& input, const std::string& exclusions) {
  EventStream stream = parse_event_log(csv::read_file(input));
  if (!exclusions.empty()) {
    auto cal = parse_exclusion_calendar(csv::read_file(exclusions));
    stream = apply_exclusions(stream, cal);
  }
  return stream;
}

std::vector<VelocitySample> walk_samples(const EventStream& stream,
                                         double gap_threshold_s,
                                         double spacing_cm) {
  LineWalkOptions opts;
  opts.gap_threshold_s = gap_threshold_s;
  std::vector<VelocitySample> samples;
  for (const auto& w : segment_line_walks(stream, opts))
    samples.push_back(estimate_line_velocity(w, spacing_cm));
  return samples;
}

struct SimulateArgs {
  std::string output_dir;
  std::string scenario_file;
  int homes = 1;
  int days = 100;
  std::uint64_t seed = 1;
  double refractory_s = -1;  // <0: keep scenario value
};

void run_simulate(const SimulateArgs& args) {
  std::vector<sim::SimScenario> scenarios;
  if (!args.scenario_file.empty()) {
    scenarios.push_back(sim::SimScenario::from_json(csv::read_file(args.scenario_file)));
  } else if (args.homes == 1) {
    scenarios.push_back(sim::SimScenario::default_scenario(args.seed));
  } else {
    scenarios = sim::cohort(args.homes, args.seed);
  }

  fs::path root(args.output_dir);
  fs::create_directories(root);
  nlohmann::ordered_json manifest;
  manifest["format"] = "gait-sim-cohort";
  manifest["version"] = 1;
  manifest["seed"] = args.seed;
  manifest["days"] = args.days;
  manifest["homes"] = nlohmann::ordered_json::array();

  for (auto& sc : scenarios) {
    if (args.refractory_s >= 0) sc.refractory_s = args.refractory_s;
    sim::SimResult result = sim::simulate(sc, args.days);
    fs::path dir = root / sc.home_id;
    fs::create_directories(dir);
    csv::write_file(dir / "events.csv", serialize_event_log(result.events));
    csv::write_file(dir / "truth.csv",
                    sim::truth_to_csv(result.truth, sc.utc_offset_minutes));
    csv::write_file(dir / "scenario.json", sc.to_json());
    manifest["homes"].push_back(sc.home_id);
    std::cerr << sc.home_id << ": " << result.events.events().size()
              << " events over " << args.days << " days\n";
  }
  csv::write_file(root / "cohort.json", manifest.dump(2) + "\n");
}

struct StageArgs {
  std::string input;
  std::string exclusions;
  std::string output;
  std::string output_dir;
  std::size_t min_pair_count = 50;
  int min_daily_transitions = 3;
  int min_walks = 1;
  double gap_threshold_s = 5.0;
  double spacing_cm = 60.96;
  std::string from_room, to_room;
  std::string feature = "p25";
};

void run_ingest(const StageArgs& args) {
  EventStream stream = load_events(args.input, args.exclusions);
  csv::write_file(args.output, serialize_event_log(stream));
  std::cerr << stream.home_id() << ": " << stream.events().size()
            << " events on " << stream.observed_days().size() << " days\n";
  if (stream.empty()) std::cerr << "warning: event stream is empty\n";
}

void run_extract(const StageArgs& args) {
  EventStream stream = load_events(args.input, args.exclusions);
  auto transitions = extract_transitions(stream);
  csv::write_file(args.output,
                  transitions_to_csv(transitions, stream.utc_offset_minutes()));

  PairMap pm = filter_room_pairs(transitions, args.min_pair_count);
  auto freq = pair_frequency(pm);
  std::cerr << transitions.size() << " transitions, " << pm.pairs.size()
            << " pairs above count " << args.min_pair_count << "\n";
  for (const auto& [pair, ts] : pm.pairs) {
    std::cerr << "  " << pair.from << " -> " << pair.to << ": " << ts.size()
              << " (" << std::fixed << std::setprecision(1) << freq.at(pair)
              << "%)\n";
  }
  if (pm.all_filtered)
    std::cerr << "warning: every pair fell below the count threshold\n";
}

void run_groundtruth(const StageArgs& args) {
  EventStream stream = load_events(args.input, args.exclusions);
  auto samples = walk_samples(stream, args.gap_threshold_s, args.spacing_cm);
  OutlierResult cleaned = remove_outliers(samples);
  auto targets = daily_mean_targets(cleaned.kept, args.min_walks);

  fs::path dir(args.output_dir);
  fs::create_directories(dir);
  csv::write_file(dir / "targets.csv", targets_to_csv(targets));

  std::cerr << samples.size() << " line walks, " << cleaned.removed
            << " outliers removed, " << targets.size() << " target days\n";
  if (cleaned.too_few)
    std::cerr << "warning: too few walks for outlier screening\n";

  std::vector<double> v;
  for (const auto& s : cleaned.kept) v.push_back(s.velocity_cm_s);
  if (v.size() >= 10) {
    csv::write_file(dir / "qq_points.csv", qq_points_to_csv(qq_points(v)));
    std::cerr << "Q-Q normality r^2 = " << qq_normality(v) << "\n";
  }
}

void run_features(const StageArgs& args) {
  EventStream stream = load_events(args.input, args.exclusions);
  auto transitions = extract_transitions(stream);
  PairMap pm = filter_room_pairs(transitions, args.min_pair_count);
  auto samples = walk_samples(stream, args.gap_threshold_s, args.spacing_cm);
  auto targets = daily_mean_targets(remove_outliers(samples).kept, args.min_walks);

  RoomPair pair{args.from_room, args.to_room};
  Dataset ds = build_dataset(pm, pair, feature_from_string(args.feature),
                             targets, {args.min_daily_transitions});
  if (ds.rows.empty())
    throw InsufficientDataError("no days joined for " + pair.from + "->" +
                                pair.to);
  csv::write_file(args.output, dataset_to_csv(ds));
  std::cerr << ds.rows.size() << " dataset rows\n";
}

struct TrainArgs {
  std::string input;
  std::string output;
  std::string grid_file;
  double C = 10, gamma = 1, epsilon = 1;
  std::string kernel = "rbf";
  int folds = 5;
  std::uint64_t seed = 1;
};

std::vector<SvrParams> load_grid(const std::string& path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(csv::read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad grid JSON: ") + e.what());
  }
  std::vector<SvrParams> grid;
  try {
    for (const auto& g : j) {
      SvrParams p;
      p.C = g.at("C").get<double>();
      p.gamma = g.at("gamma").get<double>();
      p.epsilon = g.at("epsilon").get<double>();
      p.kernel = g.contains("kernel")
                     ? kernel_from_string(g.at("kernel").get<std::string>())
                     : KernelType::rbf;
      grid.push_back(p);
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad grid JSON: ") + e.what());
  }
  if (grid.empty()) throw Error("grid file lists no parameter sets");
  return grid;
}

void run_train(const TrainArgs& args) {
  Dataset ds = dataset_from_csv(csv::read_file(args.input));
  if (ds.rows.empty()) throw InsufficientDataError("dataset is empty");

  SvrParams params;
  params.C = args.C;
  params.gamma = args.gamma;
  params.epsilon = args.epsilon;
  params.kernel = kernel_from_string(args.kernel);

  if (!args.grid_file.empty()) {
    auto grid = args.grid_file == "default" ? default_param_grid()
                                            : load_grid(args.grid_file);
    GridSearchResult gs = grid_search(ds.x(), ds.y(), grid, args.folds, args.seed);
    params = gs.best;
    std::cerr << "grid search: C=" << params.C << " gamma=" << params.gamma
              << " epsilon=" << params.epsilon << " (cv rmse "
              << gs.best_rmse << " cm/s over " << gs.table.size()
              << " grid points)\n";
  }

  SvrModel model = train_svr(ds, params);
  csv::write_file(args.output, model.to_json());
  std::cerr << "trained on " << ds.rows.size() << " rows, "
            << model.support_x.size() << " support vectors, "
            << model.training.iterations << " iterations\n";
  if (!model.training.converged)
    throw ConvergenceError("SMO hit the iteration cap (model written anyway)");
}

struct EvaluateArgs {
  std::string input;
  std::string output_dir;
  std::uint64_t seed = 1;
  int folds = 5;
  int reps = 100;
  int jobs = 1;
  std::size_t min_pair_count = 50;
  int min_daily_transitions = 3;
  int min_walks = 1;
  double gap_threshold_s = 5.0;
  double spacing_cm = 60.96;
  double refractory_s = 6.0;
  double C = 10, gamma = 1, epsilon = 1;
  std::vector<int> windows;
  std::size_t max_pairs = 12;
};

std::vector<EventStream> load_cohort(const fs::path& input) {
  std::vector<EventStream> homes;
  if (fs::is_directory(input)) {
    fs::path manifest = input / "cohort.json";
    if (fs::exists(manifest)) {
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(csv::read_file(manifest));
        for (const auto& id : j.at("homes"))
          homes.push_back(parse_event_log(
              csv::read_file(input / id.get<std::string>() / "events.csv")));
      } catch (const nlohmann::json::exception& e) {
        throw Error("bad cohort manifest: " + std::string(e.what()));
      }
    } else if (fs::exists(input / "events.csv")) {
      homes.push_back(parse_event_log(csv::read_file(input / "events.csv")));
    } else {
      throw Error("no cohort.json or events.csv under " + input.string());
    }
  } else {
    homes.push_back(parse_event_log(csv::read_file(input)));
  }
  return homes;
}

void run_evaluate(const EvaluateArgs& args) {
  pipeline::EvalConfig cfg;
  cfg.refractory_s = args.refractory_s;
  cfg.min_pair_count = args.min_pair_count;
  cfg.min_daily_transitions = args.min_daily_transitions;
  cfg.min_walks = args.min_walks;
  cfg.gap_threshold_s = args.gap_threshold_s;
  cfg.spacing_cm = args.spacing_cm;
  cfg.folds = args.folds;
  cfg.reps = args.reps;
  cfg.params.C = args.C;
  cfg.params.gamma = args.gamma;
  cfg.params.epsilon = args.epsilon;
  cfg.windows = args.windows;
  cfg.max_pairs = args.max_pairs;
  cfg.seed = args.seed;
  cfg.jobs = args.jobs;

  auto homes = load_cohort(args.input);
  pipeline::CohortReport report = pipeline::evaluate_cohort(homes, cfg);
  pipeline::write_report(report, args.output_dir);

  std::cerr << report.homes.size() << " homes evaluated\n";
  for (const auto& e : report.profile.entries)
    std::cerr << "  " << to_string(e.feature) << ": rmse "
              << std::fixed << std::setprecision(2) << e.rmse_mean << " +- "
              << e.rmse_sd << " cm/s\n";
  if (report.regression)
    std::cerr << "  regression: slope " << report.regression->slope << ", r^2 "
              << report.regression->r_squared << "\n";
}

void run_report(const std::string& input) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(csv::read_file(input));
    if (j.at("format") != "gait-eval-report") throw Error("not a run report");

    std::cout << "run report (seed " << j.at("config").at("seed") << ")\n\n";
    std::cout << "feature error profile (cm/s):\n";
    for (const auto& e : j.at("profile"))
      std::cout << "  " << std::setw(6) << e.at("feature").get<std::string>()
                << "  " << std::fixed << std::setprecision(2)
                << e.at("rmse_mean_cm_s").get<double>() << " +- "
                << e.at("rmse_sd_cm_s").get<double>() << "\n";
    if (!j.at("regression").is_null()) {
      const auto& r = j.at("regression");
      std::cout << "\npredicted vs true means: slope "
                << std::setprecision(3) << r.at("slope").get<double>()
                << ", intercept " << r.at("intercept_cm_s").get<double>()
                << " cm/s, r^2 " << r.at("r_squared").get<double>() << " (n="
                << r.at("n").get<int>() << ")\n";
    }
    if (!j.at("mean_curve").empty()) {
      std::cout << "\ntraining-period curve (cohort mean r^2):\n";
      for (const auto& pt : j.at("mean_curve"))
        std::cout << "  " << std::setw(4) << pt.at("window_days").get<int>()
                  << " days: " << std::setprecision(3)
                  << pt.at("r_squared").get<double>() << " (n="
                  << pt.at("n_homes").get<int>() << ")\n";
    }
    std::cout << "\nhomes:\n";
    for (const auto& h : j.at("homes")) {
      std::cout << "  " << h.at("home_id").get<std::string>() << ": "
                << h.at("n_transitions").get<std::int64_t>() << " transitions, "
                << h.at("n_walks").get<std::int64_t>() << " walks, "
                << h.at("n_target_days").get<std::int64_t>() << " target days";
      if (!h.at("warnings").empty())
        std::cout << " [" << h.at("warnings").size() << " warnings]";
      std::cout << "\n";
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad report JSON: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"in-home gait velocity estimation from PIR room transitions"};
  app.require_subcommand(1);

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "generate synthetic homes");
  sim_cmd->add_option("--output-dir", sim_args.output_dir)->required();
  sim_cmd->add_option("--homes", sim_args.homes)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--days", sim_args.days)->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim_args.seed);
  sim_cmd->add_option("--scenario", sim_args.scenario_file,
                      "scenario JSON instead of generated homes");
  sim_cmd->add_option("--refractory-s", sim_args.refractory_s);
  sim_cmd->callback([&] { run_simulate(sim_args); });

  StageArgs stage;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--input", stage.input)->required();
    cmd->add_option("--exclusions", stage.exclusions);
  };

  auto* ingest = app.add_subcommand("ingest", "parse, clean and re-serialize an event log");
  add_common(ingest);
  ingest->add_option("--output", stage.output)->required();
  ingest->callback([&] { run_ingest(stage); });

  auto* extract = app.add_subcommand("extract", "room transitions from an event log");
  add_common(extract);
  extract->add_option("--output", stage.output)->required();
  extract->add_option("--min-pair-count", stage.min_pair_count);
  extract->callback([&] { run_extract(stage); });

  auto* gt = app.add_subcommand("groundtruth", "daily velocity targets from the sensor line");
  add_common(gt);
  gt->add_option("--output-dir", stage.output_dir)->required();
  gt->add_option("--gap-threshold-s", stage.gap_threshold_s);
  gt->add_option("--spacing-cm", stage.spacing_cm);
  gt->add_option("--min-walks", stage.min_walks);
  gt->callback([&] { run_groundtruth(stage); });

  auto* feat = app.add_subcommand("features", "daily feature/target dataset for one pair");
  add_common(feat);
  feat->add_option("--output", stage.output)->required();
  feat->add_option("--feature", stage.feature)
      ->check(CLI::IsMember({"p10", "p15", "p20", "p25", "mean", "median"}));
  feat->add_option("--from-room", stage.from_room)->required();
  feat->add_option("--to-room", stage.to_room)->required();
  feat->add_option("--min-pair-count", stage.min_pair_count);
  feat->add_option("--min-daily-transitions", stage.min_daily_transitions);
  feat->add_option("--min-walks", stage.min_walks);
  feat->add_option("--gap-threshold-s", stage.gap_threshold_s);
  feat->add_option("--spacing-cm", stage.spacing_cm);
  feat->callback([&] { run_features(stage); });

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "fit the epsilon-SVR on a dataset");
  train->add_option("--input", train_args.input)->required();
  train->add_option("--output", train_args.output)->required();
  train->add_option("--grid", train_args.grid_file,
                    "grid JSON file, or 'default' for the built-in grid");
  train->add_option("--c", train_args.C);
  train->add_option("--gamma", train_args.gamma);
  train->add_option("--epsilon", train_args.epsilon);
  train->add_option("--kernel", train_args.kernel)
      ->check(CLI::IsMember({"rbf", "linear"}));
  train->add_option("--folds", train_args.folds);
  train->add_option("--seed", train_args.seed);
  train->callback([&] { run_train(train_args); });

  EvaluateArgs eval_args;
  auto* eval = app.add_subcommand("evaluate", "full evaluation over a home or cohort");
  eval->add_option("--input", eval_args.input)->required();
  eval->add_option("--output-dir", eval_args.output_dir)->required();
  eval->add_option("--seed", eval_args.seed);
  eval->add_option("--folds", eval_args.folds);
  eval->add_option("--reps", eval_args.reps);
  eval->add_option("--jobs", eval_args.jobs)->check(CLI::PositiveNumber);
  eval->add_option("--min-pair-count", eval_args.min_pair_count);
  eval->add_option("--min-daily-transitions", eval_args.min_daily_transitions);
  eval->add_option("--min-walks", eval_args.min_walks);
  eval->add_option("--gap-threshold-s", eval_args.gap_threshold_s);
  eval->add_option("--spacing-cm", eval_args.spacing_cm);
  eval->add_option("--refractory-s", eval_args.refractory_s);
  eval->add_option("--c", eval_args.C);
  eval->add_option("--gamma", eval_args.gamma);
  eval->add_option("--epsilon", eval_args.epsilon);
  eval->add_option("--windows", eval_args.windows,
                   "training-period windows in days");
  eval->add_option("--max-pairs", eval_args.max_pairs);
  eval->callback([&] { run_evaluate(eval_args); });

  std::string report_input;
  auto* rep = app.add_subcommand("report", "pretty-print a run report");
  rep->add_option("--input", report_input)->required();
  rep->callback([&] { run_report(report_input); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const InsufficientDataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
