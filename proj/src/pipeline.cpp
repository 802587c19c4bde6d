#include "gait/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "gait/csv.hpp"
#include "gait/errors.hpp"
#include "gait/groundtruth.hpp"
#include "gait/rng.hpp"
#include "gait/stats.hpp"
#include "gait/transitions.hpp"

namespace gait::pipeline {

namespace {

// Seed streams per home, stable across cohort ordering and thread counts.
enum SeedStream : std::uint64_t {
  kSelect = 1'000'000,
  kRepeat = 2'000'000,
  kFig8 = 3'000'000,
};

std::uint64_t home_seed(const EvalConfig& cfg, const std::string& home_id) {
  return derive_seed(cfg.seed, hash_string(home_id));
}

std::vector<int> derive_windows(int span_days) {
  // Largest window still leaves most of the period as test days, so the
  // tail correlation stays well conditioned.
  static constexpr double kFractions[] = {0.05, 0.10, 0.175, 0.25, 0.35, 0.45};
  std::vector<int> windows;
  for (double f : kFractions) {
    int w = std::max(5, int(std::lround(f * double(span_days))));
    if (w < span_days && (windows.empty() || windows.back() != w))
      windows.push_back(w);
  }
  return windows;
}

int observed_span_days(const EventStream& stream) {
  auto days = stream.observed_days();
  if (days.empty()) return 0;
  return days.back().days - days.front().days + 1;
}

}  // namespace

HomeEvaluation evaluate_home(const EventStream& stream, const EvalConfig& cfg) {
  HomeEvaluation home;
  home.home_id = stream.home_id();
  home.n_events = stream.events().size();
  std::uint64_t hseed = home_seed(cfg, stream.home_id());

  auto transitions = extract_transitions(stream);
  home.n_transitions = transitions.size();
  PairMap pm = filter_room_pairs(transitions, cfg.min_pair_count);
  home.n_retained_pairs = pm.pairs.size();
  if (pm.all_filtered)
    home.warnings.push_back("all room pairs fell below the count threshold");

  LineWalkOptions walk_opts;
  walk_opts.gap_threshold_s = cfg.gap_threshold_s;
  auto walks = segment_line_walks(stream, walk_opts);
  home.n_walks = walks.size();
  std::vector<VelocitySample> samples;
  samples.reserve(walks.size());
  for (const auto& w : walks)
    samples.push_back(estimate_line_velocity(w, cfg.spacing_cm));
  OutlierResult cleaned = remove_outliers(samples);
  if (cleaned.too_few)
    home.warnings.push_back("too few line walks for outlier screening");
  auto targets = daily_mean_targets(cleaned.kept, cfg.min_walks);
  home.n_target_days = targets.size();

  if (cleaned.kept.size() >= 10) {
    std::vector<double> v;
    v.reserve(cleaned.kept.size());
    for (const auto& s : cleaned.kept) v.push_back(s.velocity_cm_s);
    try {
      home.qq_r2 = qq_normality(v);
    } catch (const Error&) {
      home.qq_r2 = 0;
    }
  }

  if (pm.pairs.empty() || targets.empty()) {
    home.warnings.push_back("no usable datasets: missing pairs or targets");
    return home;
  }

  // Busiest pairs first; the cap keeps large homes tractable.
  std::vector<RoomPair> candidates;
  for (const auto& [pair, ts] : pm.pairs) candidates.push_back(pair);
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](const RoomPair& a, const RoomPair& b) {
                     return pm.pairs.at(a).size() > pm.pairs.at(b).size();
                   });
  if (cfg.max_pairs > 0 && candidates.size() > cfg.max_pairs)
    candidates.resize(cfg.max_pairs);

  // One cheap k-fold per (feature, pair) to pick each feature's best pair,
  // then the expensive repeated CV only on the winners.
  std::vector<CvResult> selection;
  std::map<std::pair<FeatureStat, RoomPair>, Dataset> datasets;
  for (std::size_t fi = 0; fi < std::size(kAllFeatures); ++fi) {
    FeatureStat feature = kAllFeatures[fi];
    for (std::size_t pi = 0; pi < candidates.size(); ++pi) {
      const RoomPair& pair = candidates[pi];
      Dataset ds = build_dataset(pm, pair, feature, targets,
                                 {cfg.min_daily_transitions});
      if (ds.size() < std::size_t(std::max(cfg.folds, 2))) continue;
      CvResult r;
      r.feature = feature;
      r.pair = pair;
      r.rmse_mean = kfold_cv(ds, cfg.params, cfg.folds,
                             derive_seed(hseed, kSelect + fi * 256 + pi));
      r.repetitions = 1;
      r.folds = cfg.folds;
      selection.push_back(r);
      datasets.emplace(std::make_pair(feature, pair), std::move(ds));
    }
  }
  if (selection.empty()) {
    home.warnings.push_back("no dataset large enough for cross validation");
    return home;
  }

  auto best = best_pair_per_feature(selection);
  for (std::size_t fi = 0; fi < std::size(kAllFeatures); ++fi) {
    FeatureStat feature = kAllFeatures[fi];
    auto it = best.find(feature);
    if (it == best.end()) continue;
    const Dataset& ds = datasets.at({feature, it->second});
    home.per_feature.push_back(repeated_cv(ds, cfg.params, cfg.folds, cfg.reps,
                                           derive_seed(hseed, kRepeat + fi)));
  }

  auto p25 = best.find(FeatureStat::p25);
  if (p25 != best.end()) {
    const Dataset& ds = datasets.at({FeatureStat::p25, p25->second});
    auto y = ds.y();
    auto preds = kfold_predictions(ds.x(), y, cfg.params, cfg.folds,
                                   derive_seed(hseed, kFig8));
    home.fig8 = Fig8Point{stats::mean(y), stats::mean(preds)};

    std::vector<int> windows = cfg.windows;
    if (windows.empty()) windows = derive_windows(observed_span_days(stream));
    for (int w : windows) {
      try {
        auto pts = training_period_curve(ds, std::span<const int>(&w, 1),
                                         cfg.params);
        home.curve.push_back(pts.front());
      } catch (const Error& e) {
        home.warnings.push_back("window " + std::to_string(w) + ": " + e.what());
      }
    }
  } else {
    home.warnings.push_back("no p25 dataset; skipping regression point and curve");
  }
  return home;
}

CohortReport evaluate_cohort(const std::vector<EventStream>& homes,
                             const EvalConfig& config) {
  if (homes.empty()) throw InsufficientDataError("cohort is empty");

  CohortReport report;
  report.config = config;

  // All homes share one window list so the cohort curve can average.
  if (report.config.windows.empty()) {
    int min_span = 0;
    bool first = true;
    for (const auto& h : homes) {
      int span = observed_span_days(h);
      if (first || span < min_span) min_span = span;
      first = false;
    }
    report.config.windows = derive_windows(min_span);
  }

  report.homes.resize(homes.size());
  int jobs = std::max(1, config.jobs);
  jobs = int(std::min<std::size_t>(std::size_t(jobs), homes.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> workers;
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= homes.size()) return;
      try {
        report.homes[i] = evaluate_home(homes[i], report.config);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };
  if (jobs == 1) {
    work();
  } else {
    for (int t = 0; t < jobs; ++t) workers.emplace_back(work);
    for (auto& t : workers) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Cohort profile: unweighted mean of per-home rmse means per feature.
  std::vector<CvResult> aggregated;
  for (FeatureStat f : kAllFeatures) {
    std::vector<double> means;
    for (const auto& h : report.homes)
      for (const auto& r : h.per_feature)
        if (r.feature == f) means.push_back(r.rmse_mean);
    if (means.empty()) continue;
    CvResult agg;
    agg.feature = f;
    agg.pair = RoomPair{};  // aggregate over per-home best pairs
    agg.rmse_mean = stats::mean(means);
    agg.rmse_sd = stats::sample_sd(means);
    agg.repetitions = config.reps;
    agg.folds = config.folds;
    agg.seed = config.seed;
    aggregated.push_back(agg);
  }
  report.profile = feature_error_profile(aggregated);

  std::vector<std::pair<double, double>> points;
  for (const auto& h : report.homes)
    if (h.fig8) points.emplace_back(h.fig8->true_mean, h.fig8->predicted_mean);
  if (points.size() >= 3) {
    try {
      report.regression = regress_pred_vs_true(points);
    } catch (const Error& e) {
      report.warnings.push_back(std::string("regression failed: ") + e.what());
    }
  } else {
    report.warnings.push_back("fewer than 3 homes with regression points");
  }

  for (int w : report.config.windows) {
    std::vector<double> r2;
    for (const auto& h : report.homes)
      for (const auto& pt : h.curve)
        if (pt.window_days == w) r2.push_back(pt.r_squared);
    if (r2.empty()) continue;
    report.mean_curve.push_back({w, stats::mean(r2), int(r2.size())});
  }
  return report;
}

namespace {

nlohmann::ordered_json params_json(const SvrParams& p) {
  return {{"kernel", std::string(to_string(p.kernel))},
          {"C", p.C},
          {"gamma", p.gamma},
          {"epsilon", p.epsilon}};
}

}  // namespace

std::string report_to_json(const CohortReport& report) {
  nlohmann::ordered_json j;
  j["format"] = "gait-eval-report";
  j["version"] = 1;

  const EvalConfig& c = report.config;
  j["config"] = {{"refractory_s", c.refractory_s},
                 {"min_pair_count", c.min_pair_count},
                 {"min_daily_transitions", c.min_daily_transitions},
                 {"min_walks", c.min_walks},
                 {"gap_threshold_s", c.gap_threshold_s},
                 {"spacing_cm", c.spacing_cm},
                 {"folds", c.folds},
                 {"reps", c.reps},
                 {"params", params_json(c.params)},
                 {"windows", c.windows},
                 {"max_pairs", c.max_pairs},
                 {"seed", c.seed}};

  j["homes"] = nlohmann::ordered_json::array();
  for (const auto& h : report.homes) {
    nlohmann::ordered_json hj;
    hj["home_id"] = h.home_id;
    hj["n_events"] = h.n_events;
    hj["n_transitions"] = h.n_transitions;
    hj["n_retained_pairs"] = h.n_retained_pairs;
    hj["n_walks"] = h.n_walks;
    hj["n_target_days"] = h.n_target_days;
    hj["qq_r2"] = h.qq_r2;
    hj["per_feature"] = nlohmann::ordered_json::array();
    for (const auto& r : h.per_feature)
      hj["per_feature"].push_back({{"feature", std::string(to_string(r.feature))},
                                   {"from_room", r.pair.from},
                                   {"to_room", r.pair.to},
                                   {"rmse_mean_cm_s", r.rmse_mean},
                                   {"rmse_sd_cm_s", r.rmse_sd},
                                   {"repetitions", r.repetitions},
                                   {"folds", r.folds}});
    if (h.fig8)
      hj["regression_point"] = {{"true_mean_cm_s", h.fig8->true_mean},
                                {"predicted_mean_cm_s", h.fig8->predicted_mean}};
    else
      hj["regression_point"] = nullptr;
    hj["curve"] = nlohmann::ordered_json::array();
    for (const auto& pt : h.curve)
      hj["curve"].push_back(
          {{"window_days", pt.window_days}, {"r_squared", pt.r_squared}});
    hj["warnings"] = h.warnings;
    j["homes"].push_back(std::move(hj));
  }

  j["profile"] = nlohmann::ordered_json::array();
  for (const auto& e : report.profile.entries)
    j["profile"].push_back({{"feature", std::string(to_string(e.feature))},
                            {"rmse_mean_cm_s", e.rmse_mean},
                            {"rmse_sd_cm_s", e.rmse_sd}});
  j["profile_warnings"] = report.profile.warnings;

  if (report.regression) {
    const auto& r = *report.regression;
    j["regression"] = {
        {"slope", r.slope},
        {"intercept_cm_s", r.intercept},
        {"r_squared", r.r_squared},
        {"ci95_slope", {r.ci95_slope.first, r.ci95_slope.second}},
        {"ci95_intercept_cm_s", {r.ci95_intercept.first, r.ci95_intercept.second}},
        {"n", r.n}};
  } else {
    j["regression"] = nullptr;
  }

  j["mean_curve"] = nlohmann::ordered_json::array();
  for (const auto& pt : report.mean_curve)
    j["mean_curve"].push_back({{"window_days", pt.window_days},
                               {"r_squared", pt.r_squared},
                               {"n_homes", pt.n_homes}});
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

void write_report(const CohortReport& report,
                  const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  csv::write_file(out_dir / "report.json", report_to_json(report));

  std::string fig7(
      "# rmse_mean_cm_s: cohort mean RMSE in cm/s; rmse_sd_cm_s: sd across homes\n"
      "feature,rmse_mean_cm_s,rmse_sd_cm_s\n");
  for (const auto& e : report.profile.entries) {
    fig7 += std::string(to_string(e.feature));
    fig7 += ',';
    fig7 += csv::format_double(e.rmse_mean);
    fig7 += ',';
    fig7 += csv::format_double(e.rmse_sd);
    fig7 += '\n';
  }
  csv::write_file(out_dir / "fig7_profile.csv", fig7);

  std::string fig8(
      "# true_mean_cm_s, predicted_mean_cm_s: per-home mean gait velocity in cm/s\n"
      "home_id,true_mean_cm_s,predicted_mean_cm_s\n");
  for (const auto& h : report.homes) {
    if (!h.fig8) continue;
    fig8 += h.home_id;
    fig8 += ',';
    fig8 += csv::format_double(h.fig8->true_mean);
    fig8 += ',';
    fig8 += csv::format_double(h.fig8->predicted_mean);
    fig8 += '\n';
  }
  csv::write_file(out_dir / "fig8_points.csv", fig8);

  std::string fig9(
      "# window_days: training window in days; r_squared: cohort mean, "
      "dimensionless; n_homes: homes contributing\n"
      "window_days,r_squared,n_homes\n");
  for (const auto& pt : report.mean_curve) {
    fig9 += std::to_string(pt.window_days);
    fig9 += ',';
    fig9 += csv::format_double(pt.r_squared);
    fig9 += ',';
    fig9 += std::to_string(pt.n_homes);
    fig9 += '\n';
  }
  csv::write_file(out_dir / "fig9_curve.csv", fig9);
}

}  // namespace gait::pipeline
