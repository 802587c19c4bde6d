#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gait/features.hpp"

namespace gait {

enum class KernelType { rbf, linear };

std::string_view to_string(KernelType k);
KernelType kernel_from_string(std::string_view s);

struct SvrParams {
  double C = 10.0;
  double gamma = 1.0;    // RBF width, in standardized input units
  double epsilon = 1.0;  // tube half-width, in units of y (cm/s)
  KernelType kernel = KernelType::rbf;

  friend bool operator==(const SvrParams&, const SvrParams&) = default;
};

// Scalar kernel on (already standardized) inputs.
double kernel_eval(double a, double b, const SvrParams& params);

// max(0, |residual| - epsilon)
double epsilon_loss(double residual, double epsilon);

struct TrainingStats {
  std::int64_t iterations = 0;
  bool converged = true;
  double kkt_violation = 0;   // max violating pair gap at exit
  double dual_objective = 0;
  std::vector<double> objective_trace;  // filled only on request
};

struct SvrModel {
  SvrParams params;
  double x_mean = 0;
  double x_sd = 1;
  std::vector<double> support_x;   // raw (unstandardized) inputs
  std::vector<double> dual_coef;   // alpha_i - alpha*_i per support point
  double bias = 0;
  TrainingStats training;

  double predict(double x) const;

  // Versioned JSON document; from_json(to_json()) reproduces predictions
  // to 1e-12.
  std::string to_json() const;
  static SvrModel from_json(std::string_view text);
};

struct TrainOptions {
  double tol = 1e-3;
  std::int64_t max_iter = -1;  // -1: 10000 * n_samples
  bool record_objective = false;
};

// Fits the epsilon-insensitive dual by sequential minimal optimization on
// maximal violating pairs. Inputs are standardized internally (zero mean,
// unit variance over the training x); y is left in cm/s so epsilon keeps
// its physical meaning. Never throws on hard data: if the iteration cap is
// hit, the model is returned with training.converged == false.
SvrModel train_svr(std::span<const double> x, std::span<const double> y,
                   const SvrParams& params, const TrainOptions& opts = {});
SvrModel train_svr(const Dataset& ds, const SvrParams& params,
                   const TrainOptions& opts = {});

// Held-out predictions from k-fold cross validation with a seeded shuffle,
// aligned with the input order. Folds are near-equal contiguous slices of
// the shuffled index list. Requires 2 <= k <= n.
std::vector<double> kfold_predictions(std::span<const double> x,
                                      std::span<const double> y,
                                      const SvrParams& params, int k,
                                      std::uint64_t seed,
                                      const TrainOptions& opts = {});
// Pooled RMSE over those held-out predictions.
double kfold_rmse(std::span<const double> x, std::span<const double> y,
                  const SvrParams& params, int k, std::uint64_t seed,
                  const TrainOptions& opts = {});

struct GridSearchResult {
  SvrParams best;
  double best_rmse = 0;
  std::vector<std::pair<SvrParams, double>> table;  // grid order
};

// Evaluates every grid point with the same fold split (same seed) and
// returns the one with the smallest cross-validated RMSE. Ties break
// toward smaller C, then gamma, then epsilon.
GridSearchResult grid_search(std::span<const double> x,
                             std::span<const double> y,
                             std::span<const SvrParams> grid, int k,
                             std::uint64_t seed);

// C in {0.1, 1, 10, 100} x gamma in {0.01, 0.1, 1, 10} x epsilon in
// {0.5, 1, 2}, RBF kernel. Gamma applies to standardized inputs, so the
// 1/var(x) scale factor is already folded in.
std::vector<SvrParams> default_param_grid();

}  // namespace gait
