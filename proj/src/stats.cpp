#include "gait/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

#include "gait/errors.hpp"

namespace gait::stats {

double mean(std::span<const double> v) {
  if (v.empty()) throw InsufficientDataError("mean of empty sample");
  double s = 0;
  for (double x : v) s += x;
  return s / double(v.size());
}

double sample_sd(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  double m = mean(v);
  double ss = 0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / double(v.size() - 1));
}

double percentile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw InsufficientDataError("percentile of empty sample");
  if (!(p > 0.0 && p < 100.0)) throw Error("percentile p must be in (0,100)");
  double h = (double(sorted.size()) - 1.0) * p / 100.0;
  std::size_t lo = std::size_t(h);
  double frac = h - double(lo);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double percentile(std::span<const double> v, double p) {
  std::vector<double> copy(v.begin(), v.end());
  std::sort(copy.begin(), copy.end());
  return percentile_sorted(copy, p);
}

double median(std::span<const double> v) { return percentile(v, 50.0); }

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error("normal_quantile needs p in (0,1)");

  // Wichura (1988), algorithm AS 241, PPND16.
  static const double a[8] = {
      3.3871328727963666080e0,  1.3314166789178437745e2,
      1.9715909503065514427e3,  1.3731693765509461125e4,
      4.5921953931549871457e4,  6.7265770927008700853e4,
      3.3430575583588128105e4,  2.5090809287301226727e3};
  static const double b[8] = {
      1.0,                      4.2313330701600911252e1,
      6.8718700749205790830e2,  5.3941960214247511077e3,
      2.1213794301586595867e4,  3.9307895800092710610e4,
      2.8729085735721942674e4,  5.2264952788528545610e3};
  static const double c[8] = {
      1.42343711074968357734e0, 4.63033784615654529590e0,
      5.76949722146069140550e0, 3.64784832476320460504e0,
      1.27045825245236838258e0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static const double d[8] = {
      1.0,                      2.05319162663775882187e0,
      1.67638483018380384940e0, 6.89767334985100004550e-1,
      1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static const double e[8] = {
      6.65790464350110377720e0, 5.46378491116411436990e0,
      1.78482653991729133580e0, 2.96560571828504891230e-1,
      2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static const double f[8] = {
      1.0,                      5.99832206555887937690e-1,
      1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};

  auto ratio = [](const double* num, const double* den, double r) {
    double n = num[7], m = den[7];
    for (int i = 6; i >= 0; --i) {
      n = n * r + num[i];
      m = m * r + den[i];
    }
    return n / m;
  };

  double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    double r = 0.180625 - q * q;
    return q * ratio(a, b, r);
  }
  double r = q < 0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    value = ratio(c, d, r - 1.6);
  } else {
    value = ratio(e, f, r - 5.0);
  }
  return q < 0 ? -value : value;
}

double student_t_two_sided(double level, int df) {
  if (!(level > 0.0 && level < 1.0)) throw Error("t level must be in (0,1)");
  if (df < 1) throw Error("t quantile needs df >= 1");
  double z = normal_quantile(0.5 + level / 2.0);
  double z2 = z * z;
  double n = double(df);
  // Cornish-Fisher style expansion of the t quantile about the normal one.
  double g1 = (z2 + 1.0) * z / 4.0;
  double g2 = ((5.0 * z2 + 16.0) * z2 + 3.0) * z / 96.0;
  double g3 = (((3.0 * z2 + 19.0) * z2 + 17.0) * z2 - 15.0) * z / 384.0;
  double g4 =
      ((((79.0 * z2 + 776.0) * z2 + 1482.0) * z2 - 1920.0) * z2 - 945.0) * z /
      92160.0;
  return z + g1 / n + g2 / (n * n) + g3 / (n * n * n) + g4 / (n * n * n * n);
}

double pearson_r(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("pearson_r size mismatch");
  if (x.size() < 2) throw InsufficientDataError("pearson_r needs n >= 2");
  double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double dx = x[i] - mx, dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw Error("pearson_r undefined for constant input");
  return sxy / std::sqrt(sxx * syy);
}

LineFit least_squares_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error("least_squares_line size mismatch");
  if (x.size() < 2) throw InsufficientDataError("line fit needs n >= 2");
  double mx = mean(x), my = mean(y);
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0.0) throw Error("line fit undefined for constant x");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  return fit;
}

namespace {

std::vector<double> ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    double avg = (double(i) + double(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double spearman_rho(std::span<const double> x, std::span<const double> y) {
  std::vector<double> rx = ranks(x), ry = ranks(y);
  return pearson_r(rx, ry);
}

}  // namespace gait::stats
