#include "gait/svr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include <json.hpp>

#include "gait/errors.hpp"
#include "gait/rng.hpp"
#include "gait/stats.hpp"

namespace gait {

std::string_view to_string(KernelType k) {
  return k == KernelType::rbf ? "rbf" : "linear";
}

KernelType kernel_from_string(std::string_view s) {
  if (s == "rbf") return KernelType::rbf;
  if (s == "linear") return KernelType::linear;
  throw Error("unknown kernel '" + std::string(s) + "'");
}

double kernel_eval(double a, double b, const SvrParams& params) {
  if (params.kernel == KernelType::linear) return a * b;
  double d = a - b;
  return std::exp(-params.gamma * d * d);
}

double epsilon_loss(double residual, double epsilon) {
  double v = std::fabs(residual) - epsilon;
  return v > 0 ? v : 0.0;
}

namespace {

void validate_params(const SvrParams& p) {
  if (!(p.C > 0)) throw Error("C must be positive");
  if (!(p.epsilon >= 0)) throw Error("epsilon must be nonnegative");
  if (p.kernel == KernelType::rbf && !(p.gamma > 0))
    throw Error("gamma must be positive");
}

}  // namespace

// The dual is minimized over a in R^(2n): a[t] for t < n is alpha_t (sign
// +1), a[n + t] is alpha*_t (sign -1), with
//   W(a) = 0.5 * sum_st s_s s_t a_s a_t K_st + sum_t p_t a_t,
//   p_t = epsilon - y_t on the alpha side, epsilon + y_t on the star side,
// subject to sum_t s_t a_t = 0 and 0 <= a_t <= C. Each step picks the
// maximal violating pair (i from I_up, j from I_low), moves them along the
// equality constraint by the unconstrained optimum clipped to the box, and
// updates the gradient. The fit is sum_t (alpha_t - alpha*_t) K(x_t, .) + b.
SvrModel train_svr(std::span<const double> x, std::span<const double> y,
                   const SvrParams& params, const TrainOptions& opts) {
  if (x.size() != y.size()) throw Error("train_svr size mismatch");
  if (x.empty()) throw InsufficientDataError("train_svr needs at least one sample");
  validate_params(params);
  if (!(opts.tol > 0)) throw Error("tolerance must be positive");

  const std::size_t n = x.size();
  const double C = params.C;

  SvrModel model;
  model.params = params;
  model.x_mean = stats::mean(x);
  model.x_sd = stats::sample_sd(x);
  if (model.x_sd <= 0) model.x_sd = 1.0;

  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) z[i] = (x[i] - model.x_mean) / model.x_sd;

  std::vector<double> kernel(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double v = kernel_eval(z[i], z[j], params);
      kernel[i * n + j] = v;
      kernel[j * n + i] = v;
    }
  auto K = [&](std::size_t s, std::size_t t) {
    std::size_t i = s < n ? s : s - n;
    std::size_t j = t < n ? t : t - n;
    return kernel[i * n + j];
  };
  auto sign = [&](std::size_t t) { return t < n ? 1.0 : -1.0; };

  const std::size_t m2 = 2 * n;
  std::vector<double> a(m2, 0.0), grad(m2), p(m2);
  for (std::size_t t = 0; t < n; ++t) {
    p[t] = params.epsilon - y[t];
    p[n + t] = params.epsilon + y[t];
  }
  grad = p;  // gradient of W at a = 0

  auto objective = [&] {
    double obj = 0;
    for (std::size_t t = 0; t < m2; ++t) obj += a[t] * (grad[t] + p[t]);
    return 0.5 * obj;
  };

  std::int64_t max_iter =
      opts.max_iter >= 0 ? opts.max_iter : std::int64_t(10000) * std::int64_t(n);

  if (opts.record_objective) model.training.objective_trace.push_back(objective());

  std::int64_t iter = 0;
  double gap = 0;
  const double inf = std::numeric_limits<double>::infinity();
  while (true) {
    // Maximal violating pair over -s_t G_t.
    double up_best = -inf, low_best = inf;
    std::size_t i = m2, j = m2;
    for (std::size_t t = 0; t < m2; ++t) {
      double v = -sign(t) * grad[t];
      bool plus = t < n;
      if ((plus && a[t] < C) || (!plus && a[t] > 0)) {
        if (v > up_best) {
          up_best = v;
          i = t;
        }
      }
      if ((plus && a[t] > 0) || (!plus && a[t] < C)) {
        if (v < low_best) {
          low_best = v;
          j = t;
        }
      }
    }
    gap = up_best - low_best;
    if (gap <= opts.tol || i == m2 || j == m2) break;
    if (iter >= max_iter) {
      model.training.converged = false;
      break;
    }

    double si = sign(i), sj = sign(j);
    double eta = K(i, i) + K(j, j) - 2.0 * K(i, j);
    if (eta < 1e-12) eta = 1e-12;
    double step = gap / eta;  // -(s_i G_i - s_j G_j) / eta

    double room_i = si > 0 ? C - a[i] : a[i];
    double room_j = sj > 0 ? a[j] : C - a[j];
    step = std::min(step, std::min(room_i, room_j));

    a[i] += si * step;
    a[j] -= sj * step;
    for (std::size_t t = 0; t < m2; ++t)
      grad[t] += sign(t) * step * (K(t, i) - K(t, j));

    ++iter;
    if (opts.record_objective) model.training.objective_trace.push_back(objective());
  }

  model.training.iterations = iter;
  model.training.kkt_violation = gap;
  model.training.dual_objective = objective();

  // Bias from the gradient: b = -s_t G_t at any free variable, midpoint of
  // the optimality interval otherwise.
  double free_sum = 0;
  std::size_t free_count = 0;
  double up_best = -inf, low_best = inf;
  for (std::size_t t = 0; t < m2; ++t) {
    double v = -sign(t) * grad[t];
    if (a[t] > 0 && a[t] < C) {
      free_sum += v;
      ++free_count;
    }
    bool plus = t < n;
    if ((plus && a[t] < C) || (!plus && a[t] > 0)) up_best = std::max(up_best, v);
    if ((plus && a[t] > 0) || (!plus && a[t] < C)) low_best = std::min(low_best, v);
  }
  model.bias = free_count > 0 ? free_sum / double(free_count)
                              : (up_best + low_best) / 2.0;

  for (std::size_t t = 0; t < n; ++t) {
    double beta = a[t] - a[n + t];
    if (beta != 0.0) {
      model.support_x.push_back(x[t]);
      model.dual_coef.push_back(beta);
    }
  }
  return model;
}

SvrModel train_svr(const Dataset& ds, const SvrParams& params,
                   const TrainOptions& opts) {
  return train_svr(ds.x(), ds.y(), params, opts);
}

double SvrModel::predict(double x) const {
  double z = (x - x_mean) / x_sd;
  double f = bias;
  for (std::size_t i = 0; i < support_x.size(); ++i) {
    double zi = (support_x[i] - x_mean) / x_sd;
    f += dual_coef[i] * kernel_eval(zi, z, params);
  }
  return f;
}

std::string SvrModel::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "gait-svr-model";
  j["version"] = 1;
  j["params"] = {{"kernel", std::string(to_string(params.kernel))},
                 {"C", params.C},
                 {"gamma", params.gamma},
                 {"epsilon", params.epsilon}};
  j["standardization"] = {{"x_mean", x_mean}, {"x_sd", x_sd}};
  j["support_x"] = support_x;
  j["dual_coef"] = dual_coef;
  j["bias"] = bias;
  j["training"] = {{"iterations", training.iterations},
                   {"converged", training.converged},
                   {"kkt_violation", training.kkt_violation},
                   {"dual_objective", training.dual_objective}};
  return j.dump(2) + "\n";
}

SvrModel SvrModel::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad model JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "gait-svr-model") throw Error("not a model document");
    if (j.at("version") != 1) throw Error("unsupported model version");
    SvrModel m;
    const auto& p = j.at("params");
    m.params.kernel = kernel_from_string(p.at("kernel").get<std::string>());
    m.params.C = p.at("C").get<double>();
    m.params.gamma = p.at("gamma").get<double>();
    m.params.epsilon = p.at("epsilon").get<double>();
    m.x_mean = j.at("standardization").at("x_mean").get<double>();
    m.x_sd = j.at("standardization").at("x_sd").get<double>();
    m.support_x = j.at("support_x").get<std::vector<double>>();
    m.dual_coef = j.at("dual_coef").get<std::vector<double>>();
    m.bias = j.at("bias").get<double>();
    const auto& t = j.at("training");
    m.training.iterations = t.at("iterations").get<std::int64_t>();
    m.training.converged = t.at("converged").get<bool>();
    m.training.kkt_violation = t.at("kkt_violation").get<double>();
    m.training.dual_objective = t.at("dual_objective").get<double>();
    if (m.support_x.size() != m.dual_coef.size())
      throw Error("support_x and dual_coef lengths differ");
    validate_params(m.params);
    if (!(m.x_sd > 0)) throw Error("x_sd must be positive");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad model JSON: ") + e.what());
  }
}

namespace {

std::vector<std::vector<std::size_t>> fold_slices(std::size_t n, int k,
                                                  std::uint64_t seed) {
  if (k < 2) throw Error("k-fold needs k >= 2");
  if (std::size_t(k) > n)
    throw InsufficientDataError("k-fold needs at least k samples");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  std::size_t n_folds = std::size_t(k);
  std::vector<std::vector<std::size_t>> folds(n_folds);
  for (int f = 0; f < k; ++f) {
    std::size_t begin = n * std::size_t(f) / std::size_t(k);
    std::size_t end = n * std::size_t(f + 1) / std::size_t(k);
    folds[std::size_t(f)].assign(order.begin() + std::ptrdiff_t(begin),
                                 order.begin() + std::ptrdiff_t(end));
  }
  return folds;
}

}  // namespace

std::vector<double> kfold_predictions(std::span<const double> x,
                                      std::span<const double> y,
                                      const SvrParams& params, int k,
                                      std::uint64_t seed,
                                      const TrainOptions& opts) {
  if (x.size() != y.size()) throw Error("k-fold size mismatch");
  auto folds = fold_slices(x.size(), k, seed);
  std::vector<double> pred(x.size(), 0.0);
  std::vector<char> held(x.size(), 0);
  for (const auto& fold : folds) {
    for (std::size_t i : fold) held[i] = 1;
    std::vector<double> tx, ty;
    tx.reserve(x.size() - fold.size());
    ty.reserve(x.size() - fold.size());
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!held[i]) {
        tx.push_back(x[i]);
        ty.push_back(y[i]);
      }
    SvrModel model = train_svr(tx, ty, params, opts);
    for (std::size_t i : fold) {
      pred[i] = model.predict(x[i]);
      held[i] = 0;
    }
  }
  return pred;
}

double kfold_rmse(std::span<const double> x, std::span<const double> y,
                  const SvrParams& params, int k, std::uint64_t seed,
                  const TrainOptions& opts) {
  auto pred = kfold_predictions(x, y, params, k, seed, opts);
  double ss = 0;
  for (std::size_t i = 0; i < y.size(); ++i)
    ss += (pred[i] - y[i]) * (pred[i] - y[i]);
  return std::sqrt(ss / double(y.size()));
}

GridSearchResult grid_search(std::span<const double> x,
                             std::span<const double> y,
                             std::span<const SvrParams> grid, int k,
                             std::uint64_t seed) {
  if (grid.empty()) throw Error("grid_search needs a nonempty grid");
  GridSearchResult result;
  bool first = true;
  for (const auto& params : grid) {
    double rmse = kfold_rmse(x, y, params, k, seed);
    result.table.emplace_back(params, rmse);
    auto better = [&] {
      if (rmse != result.best_rmse) return rmse < result.best_rmse;
      auto key = [](const SvrParams& p) {
        return std::tuple(p.C, p.gamma, p.epsilon);
      };
      return key(params) < key(result.best);
    };
    if (first || better()) {
      result.best = params;
      result.best_rmse = rmse;
      first = false;
    }
  }
  return result;
}

std::vector<SvrParams> default_param_grid() {
  std::vector<SvrParams> grid;
  for (double C : {0.1, 1.0, 10.0, 100.0})
    for (double gamma : {0.01, 0.1, 1.0, 10.0})
      for (double epsilon : {0.5, 1.0, 2.0})
        grid.push_back(SvrParams{C, gamma, epsilon, KernelType::rbf});
  return grid;
}

}  // namespace gait
