#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gait/event_model.hpp"
#include "gait/timeutil.hpp"

namespace gait {

// One pass along the restricted sensor line.
struct LineWalk {
  std::vector<std::pair<int, Timestamp>> firings;  // (segment index, time)
  bool forward = true;  // indices increasing
  LocalDate date;

  Timestamp start() const { return firings.front().second; }
};

struct VelocitySample {
  double velocity_cm_s = 0;
  Timestamp timestamp;
  LocalDate date;
};

struct DailyTarget {
  LocalDate date;
  double mean_velocity_cm_s = 0;
  int n_walks = 0;
};

struct LineWalkOptions {
  double gap_threshold_s = 5.0;  // firings closer than this chain into a walk
};

// Groups line_segment firings into candidate walks by time proximity and
// keeps groups of two or more firings whose segment indices are strictly
// monotone. Anything else (reversals, repeats, lone firings) is noise from
// lingering near the line and is dropped.
std::vector<LineWalk> segment_line_walks(const EventStream& stream,
                                         const LineWalkOptions& opts = {});

// Least-squares slope of position (segment index * spacing) against firing
// time; the magnitude is the walk velocity in cm/s. Two firings reduce to
// distance over time. Throws Error if all firings share one millisecond.
VelocitySample estimate_line_velocity(const LineWalk& walk,
                                      double spacing_cm = 60.96);

struct OutlierResult {
  std::vector<VelocitySample> kept;   // original order
  std::size_t removed = 0;
  double mean = 0;   // of the input sample
  double sd = 0;
  bool too_few = false;  // n < 3: nothing removed, flag raised
};

// Single pass: drop samples more than two standard deviations from the
// mean. The median always survives.
OutlierResult remove_outliers(std::span<const VelocitySample> samples);

// Mean velocity per local date, days with fewer than min_walks dropped.
std::vector<DailyTarget> daily_mean_targets(std::span<const VelocitySample> samples,
                                            int min_walks = 1);

// Squared correlation between the sorted sample and the matching standard
// normal quantiles Phi^-1((i - 0.5) / n). Throws InsufficientDataError for
// n < 10 and Error for a constant sample.
double qq_normality(std::span<const double> values);
// The underlying (theoretical, empirical) points, for plotting.
std::vector<std::pair<double, double>> qq_points(std::span<const double> values);

// CSV: date,mean_velocity_cm_s,n_walks
std::string targets_to_csv(std::span<const DailyTarget> targets);
std::vector<DailyTarget> targets_from_csv(std::string_view text);

// CSV: theoretical_quantile,velocity_cm_s
std::string qq_points_to_csv(std::span<const std::pair<double, double>> pts);

}  // namespace gait
