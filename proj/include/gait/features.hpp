#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gait/groundtruth.hpp"
#include "gait/transitions.hpp"

namespace gait {

// Daily summary statistic applied to a room pair's transition durations.
enum class FeatureStat { p10, p15, p20, p25, mean, median };

constexpr FeatureStat kAllFeatures[] = {FeatureStat::p10,  FeatureStat::p15,
                                        FeatureStat::p20,  FeatureStat::p25,
                                        FeatureStat::mean, FeatureStat::median};

std::string_view to_string(FeatureStat f);
FeatureStat feature_from_string(std::string_view s);

double feature_value(FeatureStat f, std::span<const double> durations_s);

struct DatasetRow {
  LocalDate date;
  double x_seconds = 0;    // daily feature of transition durations
  double y_cm_s = 0;       // daily mean line velocity
  int n_transitions = 0;
};

struct Dataset {
  RoomPair pair;
  FeatureStat statistic = FeatureStat::median;
  std::vector<DatasetRow> rows;  // ascending by date

  std::size_t size() const { return rows.size(); }
  std::vector<double> x() const;
  std::vector<double> y() const;
};

struct DatasetOptions {
  int min_daily_transitions = 3;  // days with fewer pair transitions drop out
};

// Inner join of per-day transition features with per-day velocity targets.
// Days lacking either side, or with fewer than min_daily_transitions
// transitions for the pair, contribute nothing. Throws Error if the pair
// was not retained in the map.
Dataset build_dataset(const PairMap& map, const RoomPair& pair,
                      FeatureStat statistic,
                      std::span<const DailyTarget> targets,
                      const DatasetOptions& opts = {});

// CSV: date,from_room,to_room,statistic,x_seconds,y_cm_s,n_transitions
std::string dataset_to_csv(const Dataset& ds);
Dataset dataset_from_csv(std::string_view text);

}  // namespace gait
