#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gait/features.hpp"
#include "gait/svr.hpp"

namespace gait {

struct CvResult {
  FeatureStat feature = FeatureStat::median;
  RoomPair pair;
  double rmse_mean = 0;   // cm/s
  double rmse_sd = 0;     // over repetitions
  int repetitions = 0;
  int folds = 0;
  std::uint64_t seed = 0;
};

// Seeded k-fold cross validation; pooled RMSE over held-out predictions.
double kfold_cv(const Dataset& data, const SvrParams& params, int k,
                std::uint64_t seed);

// kfold_cv under reps derived sub-seeds; mean and sd of the repetition
// RMSEs (sd over n-1, zero for a single repetition).
CvResult repeated_cv(const Dataset& data, const SvrParams& params, int k,
                     int reps, std::uint64_t seed);

// Per feature, the pair with minimum rmse_mean; ties break toward the
// lexicographically smaller pair. Throws on empty input.
std::map<FeatureStat, RoomPair> best_pair_per_feature(
    std::span<const CvResult> results);

struct ProfileEntry {
  FeatureStat feature;
  RoomPair pair;
  double rmse_mean = 0;
  double rmse_sd = 0;
};

struct FeatureProfile {
  std::vector<ProfileEntry> entries;   // p10, p15, p20, p25, mean, median
  std::vector<std::string> warnings;   // features missing from the input
};

// Expects one aggregated result per feature; emits them in canonical
// order, noting absent features. Duplicate features are an error.
FeatureProfile feature_error_profile(std::span<const CvResult> results);

struct RegressionSummary {
  double slope = 0;
  double intercept = 0;   // cm/s
  double r_squared = 0;
  std::pair<double, double> ci95_slope;
  std::pair<double, double> ci95_intercept;
  int n = 0;
};

// OLS of predicted on true mean velocity, with 95% confidence intervals
// from the standard-error formula at n-2 degrees of freedom. Requires at
// least 3 points and non-constant true values.
RegressionSummary regress_pred_vs_true(
    std::span<const std::pair<double, double>> true_pred);

struct CurvePoint {
  int window_days = 0;
  double r_squared = 0;
};

// For each window length w: train on rows within the first w days of the
// dataset, evaluate r^2 of prediction vs truth on the remaining rows.
// Windows must fit the span and leave at least 3 test rows.
std::vector<CurvePoint> training_period_curve(const Dataset& data,
                                              std::span<const int> window_lengths,
                                              const SvrParams& params);

}  // namespace gait
