#include "gait/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "gait/errors.hpp"
#include "gait/rng.hpp"
#include "gait/stats.hpp"

namespace gait {

double kfold_cv(const Dataset& data, const SvrParams& params, int k,
                std::uint64_t seed) {
  return kfold_rmse(data.x(), data.y(), params, k, seed);
}

CvResult repeated_cv(const Dataset& data, const SvrParams& params, int k,
                     int reps, std::uint64_t seed) {
  if (reps < 1) throw Error("repeated_cv needs reps >= 1");
  std::vector<double> rmses;
  rmses.reserve(std::size_t(reps));
  for (int r = 0; r < reps; ++r)
    rmses.push_back(kfold_cv(data, params, k, derive_seed(seed, std::uint64_t(r))));

  CvResult result;
  result.feature = data.statistic;
  result.pair = data.pair;
  result.rmse_mean = stats::mean(rmses);
  result.rmse_sd = stats::sample_sd(rmses);
  result.repetitions = reps;
  result.folds = k;
  result.seed = seed;
  return result;
}

std::map<FeatureStat, RoomPair> best_pair_per_feature(
    std::span<const CvResult> results) {
  if (results.empty()) throw Error("best_pair_per_feature on empty input");
  std::map<FeatureStat, const CvResult*> best;
  for (const auto& r : results) {
    auto [it, inserted] = best.emplace(r.feature, &r);
    if (inserted) continue;
    const CvResult* cur = it->second;
    if (r.rmse_mean < cur->rmse_mean ||
        (r.rmse_mean == cur->rmse_mean && r.pair < cur->pair))
      it->second = &r;
  }
  std::map<FeatureStat, RoomPair> out;
  for (const auto& [feature, r] : best) out.emplace(feature, r->pair);
  return out;
}

FeatureProfile feature_error_profile(std::span<const CvResult> results) {
  FeatureProfile profile;
  for (FeatureStat f : kAllFeatures) {
    const CvResult* found = nullptr;
    for (const auto& r : results) {
      if (r.feature != f) continue;
      if (found) throw Error("feature_error_profile expects one result per feature");
      found = &r;
    }
    if (!found) {
      profile.warnings.push_back("no result for feature '" +
                                 std::string(to_string(f)) + "'");
      continue;
    }
    profile.entries.push_back(
        {found->feature, found->pair, found->rmse_mean, found->rmse_sd});
  }
  return profile;
}

RegressionSummary regress_pred_vs_true(
    std::span<const std::pair<double, double>> true_pred) {
  if (true_pred.size() < 3)
    throw InsufficientDataError("regression needs at least 3 points");
  std::vector<double> t, p;
  t.reserve(true_pred.size());
  p.reserve(true_pred.size());
  for (const auto& [tv, pv] : true_pred) {
    t.push_back(tv);
    p.push_back(pv);
  }

  stats::LineFit fit = stats::least_squares_line(t, p);  // throws on constant t

  std::size_t n = t.size();
  double mt = stats::mean(t);
  double sxx = 0, ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (t[i] - mt) * (t[i] - mt);
    double resid = p[i] - (fit.intercept + fit.slope * t[i]);
    ss_res += resid * resid;
  }
  double sigma2 = ss_res / double(n - 2);
  double se_slope = std::sqrt(sigma2 / sxx);
  double se_intercept = std::sqrt(sigma2 * (1.0 / double(n) + mt * mt / sxx));
  double tq = stats::student_t_two_sided(0.95, int(n) - 2);

  RegressionSummary s;
  s.slope = fit.slope;
  s.intercept = fit.intercept;
  double r = stats::pearson_r(t, p);
  s.r_squared = r * r;
  s.ci95_slope = {fit.slope - tq * se_slope, fit.slope + tq * se_slope};
  s.ci95_intercept = {fit.intercept - tq * se_intercept,
                      fit.intercept + tq * se_intercept};
  s.n = int(n);
  return s;
}

std::vector<CurvePoint> training_period_curve(const Dataset& data,
                                              std::span<const int> window_lengths,
                                              const SvrParams& params) {
  if (data.rows.empty())
    throw InsufficientDataError("training_period_curve on empty dataset");
  std::vector<int> windows(window_lengths.begin(), window_lengths.end());
  std::sort(windows.begin(), windows.end());

  LocalDate first = data.rows.front().date;
  LocalDate last = data.rows.back().date;
  int span = last.days - first.days + 1;

  std::vector<CurvePoint> curve;
  for (int w : windows) {
    if (w < 1) throw Error("window length must be positive");
    if (w > span)
      throw Error("window of " + std::to_string(w) +
                  " days exceeds the dataset span of " + std::to_string(span));
    LocalDate cutoff{first.days + w};  // train on dates < cutoff

    std::vector<double> train_x, train_y, test_x, test_y;
    for (const auto& row : data.rows) {
      if (row.date < cutoff) {
        train_x.push_back(row.x_seconds);
        train_y.push_back(row.y_cm_s);
      } else {
        test_x.push_back(row.x_seconds);
        test_y.push_back(row.y_cm_s);
      }
    }
    if (test_x.size() < 3)
      throw InsufficientDataError("window of " + std::to_string(w) +
                                  " days leaves fewer than 3 test rows");
    if (train_x.empty())
      throw InsufficientDataError("window of " + std::to_string(w) +
                                  " days contains no training rows");

    SvrModel model = train_svr(train_x, train_y, params);
    std::vector<double> pred;
    pred.reserve(test_x.size());
    for (double x : test_x) pred.push_back(model.predict(x));

    double r = stats::pearson_r(pred, test_y);
    curve.push_back({w, r * r});
  }
  return curve;
}

}  // namespace gait
