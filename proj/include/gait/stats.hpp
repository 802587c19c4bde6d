#pragma once

#include <span>
#include <utility>
#include <vector>

namespace gait::stats {

double mean(std::span<const double> v);           // throws on empty
double sample_sd(std::span<const double> v);      // n-1 denominator; 0 if n < 2

// Linear-interpolation percentile on the sorted copy of v, p in (0, 100).
// Index h = (n-1) * p / 100, value = v[floor(h)] + frac(h) * (v[floor(h)+1]
// - v[floor(h)]). Throws InsufficientDataError on empty input.
double percentile(std::span<const double> v, double p);
// Same, but the caller guarantees v is already sorted ascending.
double percentile_sorted(std::span<const double> sorted, double p);
double median(std::span<const double> v);

// Inverse standard normal CDF (Wichura's PPND16 rational approximation,
// good to ~1e-15 over (0,1)). Throws on p outside (0,1).
double normal_quantile(double p);

// Two-sided Student-t quantile helper: returns t such that
// P(|T_df| <= t) = level. Series expansion in 1/df around the normal
// quantile; adequate for confidence intervals at the df this project sees.
double student_t_two_sided(double level, int df);

double pearson_r(std::span<const double> x, std::span<const double> y);

struct LineFit {
  double slope = 0;
  double intercept = 0;
};

// Ordinary least squares y on x. Throws if x is constant or sizes differ.
LineFit least_squares_line(std::span<const double> x, std::span<const double> y);

// Spearman rank correlation; ties get average ranks.
double spearman_rho(std::span<const double> x, std::span<const double> y);

}  // namespace gait::stats
