#pragma once

// Brute-force reference solver for the epsilon-SVR dual, used only by the
// test suites. It minimizes
//
//   W(a) = 0.5 a^T Q a + p^T a,   Q[s][t] = sign_s sign_t K(z_s, z_t),
//   p[t] = epsilon - y_t (plus side), epsilon + y_t (star side),
//
// over the box [0, C]^(2n) intersected with the hyperplane sum_t sign_t a_t
// = 0, by accelerated projected gradient descent with the exact projection
// computed by bisection on the hyperplane multiplier. It shares nothing
// with the library's working-set optimizer except the kernel function,
// which is verified separately against closed-form values.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "gait/svr.hpp"

namespace oracle {

struct DualSolution {
  std::vector<double> a;    // 2n box variables, plus side then star side
  double objective = 0;
  double bias = 0;
  double kkt_residual = 0;  // projected-gradient fixpoint residual at exit
};

// Projection of v onto {a in [0, C]^m : s^T a = 0}. The map
// g(lambda) = s^T clip(v - lambda s, 0, C) is non-increasing in lambda, so
// the multiplier is found by bisection; 200 halvings put it far below
// double resolution for any bracket this problem produces.
inline std::vector<double> project_box_hyperplane(const std::vector<double>& v,
                                                  const std::vector<double>& s,
                                                  double C) {
  auto clipped_sum = [&](double lambda, std::vector<double>* out) {
    double sum = 0;
    for (std::size_t t = 0; t < v.size(); ++t) {
      double a = std::clamp(v[t] - lambda * s[t], 0.0, C);
      if (out) (*out)[t] = a;
      sum += s[t] * a;
    }
    return sum;
  };
  double span = C + 1.0;
  for (double x : v) span = std::max(span, std::fabs(x) + C + 1.0);
  double lo = -span, hi = span;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    if (clipped_sum(mid, nullptr) > 0)
      lo = mid;
    else
      hi = mid;
  }
  std::vector<double> out(v.size());
  clipped_sum(0.5 * (lo + hi), &out);
  return out;
}

// z must already be standardized the same way the model under test
// standardizes its inputs (read x_mean / x_sd off the trained model).
inline DualSolution solve_dual(std::span<const double> z,
                               std::span<const double> y,
                               const gait::SvrParams& params,
                               double tol = 1e-12) {
  const std::size_t n = z.size();
  const std::size_t m = 2 * n;
  const double C = params.C;

  std::vector<double> s(m), p(m);
  for (std::size_t t = 0; t < n; ++t) {
    s[t] = 1.0;
    s[n + t] = -1.0;
    p[t] = params.epsilon - y[t];
    p[n + t] = params.epsilon + y[t];
  }

  std::vector<double> Q(m * m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      Q[i * m + j] =
          s[i] * s[j] * gait::kernel_eval(z[i % n], z[j % n], params);

  // Row-sum bound on the spectral norm of the symmetric Q.
  double L = 0;
  for (std::size_t i = 0; i < m; ++i) {
    double row = 0;
    for (std::size_t j = 0; j < m; ++j) row += std::fabs(Q[i * m + j]);
    L = std::max(L, row);
  }
  if (L <= 0) L = 1;

  std::vector<double> grad(m), trial(m);
  auto gradient = [&](const std::vector<double>& u) {
    for (std::size_t i = 0; i < m; ++i) {
      double g = p[i];
      for (std::size_t j = 0; j < m; ++j) g += Q[i * m + j] * u[j];
      grad[i] = g;
    }
  };
  auto objective = [&](const std::vector<double>& u) {
    double quad = 0, lin = 0;
    for (std::size_t i = 0; i < m; ++i) {
      double qi = 0;
      for (std::size_t j = 0; j < m; ++j) qi += Q[i * m + j] * u[j];
      quad += u[i] * qi;
      lin += p[i] * u[i];
    }
    return 0.5 * quad + lin;
  };
  auto fixpoint_residual = [&](const std::vector<double>& u) {
    gradient(u);
    for (std::size_t i = 0; i < m; ++i) trial[i] = u[i] - grad[i] / L;
    std::vector<double> proj = project_box_hyperplane(trial, s, C);
    double r = 0;
    for (std::size_t i = 0; i < m; ++i) r = std::max(r, std::fabs(proj[i] - u[i]));
    return r;
  };

  // FISTA with an objective-based restart; the restart keeps the iteration
  // monotone enough that the fixpoint check below is reliable.
  std::vector<double> a(m, 0.0), prev = a, momentum = a;
  double theta = 1.0;
  double best_obj = objective(a);
  double residual = fixpoint_residual(a);
  const long max_iter = 4'000'000;
  for (long iter = 0; residual > tol && iter < max_iter; ++iter) {
    gradient(momentum);
    for (std::size_t i = 0; i < m; ++i) trial[i] = momentum[i] - grad[i] / L;
    std::vector<double> next = project_box_hyperplane(trial, s, C);

    double theta_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * theta * theta));
    double beta = (theta - 1.0) / theta_next;
    for (std::size_t i = 0; i < m; ++i)
      momentum[i] = next[i] + beta * (next[i] - a[i]);
    prev = a;
    a = std::move(next);
    theta = theta_next;

    if (iter % 16 == 15) {
      double obj = objective(a);
      if (obj > best_obj) {  // momentum overshot: restart from the iterate
        momentum = a;
        theta = 1.0;
      }
      best_obj = std::min(best_obj, obj);
      residual = fixpoint_residual(a);
    }
  }

  DualSolution sol;
  sol.a = a;
  sol.objective = objective(a);
  sol.kkt_residual = residual;

  // KKT bias: -s_t grad_t is the bias at every strictly free variable; with
  // none free it is pinned only to the interval between the bound sides.
  // Set membership uses the same margin as the free test: the projection
  // leaves coordinates that are at a bound in exact arithmetic within
  // rounding noise of it, and counting such a coordinate as interior would
  // pinch the interval to one edge.
  gradient(a);
  const double margin = 1e-9 * C;
  double free_sum = 0;
  std::size_t free_count = 0;
  double up = -1e300, low = 1e300;
  for (std::size_t t = 0; t < m; ++t) {
    double v = -s[t] * grad[t];
    bool at_lower = a[t] <= margin;
    bool at_upper = a[t] >= C - margin;
    if (!at_lower && !at_upper) {
      free_sum += v;
      ++free_count;
    }
    bool plus = t < n;
    if (plus ? !at_upper : !at_lower) up = std::max(up, v);
    if (plus ? !at_lower : !at_upper) low = std::min(low, v);
  }
  sol.bias = free_count > 0 ? free_sum / double(free_count) : 0.5 * (up + low);
  return sol;
}

// Decision function of the oracle solution at a standardized query point.
inline double predict(const DualSolution& sol, std::span<const double> z,
                      double zq, const gait::SvrParams& params) {
  const std::size_t n = z.size();
  double f = sol.bias;
  for (std::size_t t = 0; t < n; ++t)
    f += (sol.a[t] - sol.a[n + t]) * gait::kernel_eval(z[t], zq, params);
  return f;
}

}  // namespace oracle
