#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gait/evaluation.hpp"
#include "gait/event_model.hpp"

namespace gait::pipeline {

// Everything the evaluation stages need to know; echoed verbatim into the
// run report so results stay traceable to their thresholds.
struct EvalConfig {
  double refractory_s = 6.0;        // sensor property, echoed for provenance
  std::size_t min_pair_count = 50;
  int min_daily_transitions = 3;
  int min_walks = 1;
  double gap_threshold_s = 5.0;
  double spacing_cm = 60.96;
  int folds = 5;
  int reps = 100;
  SvrParams params;
  std::vector<int> windows;         // empty: derived from the observed span
  std::size_t max_pairs = 12;       // busiest retained pairs evaluated (0 = all)
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct Fig8Point {
  double true_mean = 0;
  double predicted_mean = 0;
};

struct HomeEvaluation {
  std::string home_id;
  std::size_t n_events = 0;
  std::size_t n_transitions = 0;
  std::size_t n_retained_pairs = 0;
  std::size_t n_walks = 0;        // accepted line walks before outlier removal
  std::size_t n_target_days = 0;
  double qq_r2 = 0;               // 0 when too few walks to assess
  std::vector<CvResult> per_feature;  // repeated CV on each feature's best pair
  std::optional<Fig8Point> fig8;      // from the p25 model's held-out predictions
  std::vector<CurvePoint> curve;      // training-period curve on the p25 dataset
  std::vector<std::string> warnings;
};

struct CohortReport {
  EvalConfig config;
  std::vector<HomeEvaluation> homes;
  FeatureProfile profile;             // cohort-mean errors per feature
  std::optional<RegressionSummary> regression;
  struct MeanCurvePoint {
    int window_days = 0;
    double r_squared = 0;
    int n_homes = 0;
  };
  std::vector<MeanCurvePoint> mean_curve;
  std::vector<std::string> warnings;
};

// Runs extraction, ground truth, feature building, best-pair selection and
// repeated cross validation for one home. Deterministic given (stream
// contents, config); the config seed is fanned out per home id, so cohort
// order and thread scheduling cannot change any number.
HomeEvaluation evaluate_home(const EventStream& stream, const EvalConfig& config);

// All homes (config.jobs of them in flight at once), then cohort
// aggregation: unweighted mean profile, predicted-vs-true regression over
// per-home means, and the cohort-mean training-period curve.
CohortReport evaluate_cohort(const std::vector<EventStream>& homes,
                             const EvalConfig& config);

std::string report_to_json(const CohortReport& report);

// report.json plus fig7_profile.csv, fig8_points.csv, fig9_curve.csv.
void write_report(const CohortReport& report,
                  const std::filesystem::path& out_dir);

}  // namespace gait::pipeline
