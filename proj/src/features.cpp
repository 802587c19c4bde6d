#include "gait/features.hpp"

#include <map>

#include "gait/csv.hpp"
#include "gait/errors.hpp"
#include "gait/stats.hpp"

namespace gait {

std::string_view to_string(FeatureStat f) {
  switch (f) {
    case FeatureStat::p10: return "p10";
    case FeatureStat::p15: return "p15";
    case FeatureStat::p20: return "p20";
    case FeatureStat::p25: return "p25";
    case FeatureStat::mean: return "mean";
    case FeatureStat::median: return "median";
  }
  throw Error("unreachable feature statistic");
}

FeatureStat feature_from_string(std::string_view s) {
  for (FeatureStat f : kAllFeatures)
    if (to_string(f) == s) return f;
  throw Error("unknown feature statistic '" + std::string(s) + "'");
}

double feature_value(FeatureStat f, std::span<const double> durations_s) {
  switch (f) {
    case FeatureStat::p10: return stats::percentile(durations_s, 10.0);
    case FeatureStat::p15: return stats::percentile(durations_s, 15.0);
    case FeatureStat::p20: return stats::percentile(durations_s, 20.0);
    case FeatureStat::p25: return stats::percentile(durations_s, 25.0);
    case FeatureStat::mean: return stats::mean(durations_s);
    case FeatureStat::median: return stats::median(durations_s);
  }
  throw Error("unreachable feature statistic");
}

std::vector<double> Dataset::x() const {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(r.x_seconds);
  return v;
}

std::vector<double> Dataset::y() const {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const auto& r : rows) v.push_back(r.y_cm_s);
  return v;
}

Dataset build_dataset(const PairMap& map, const RoomPair& pair,
                      FeatureStat statistic,
                      std::span<const DailyTarget> targets,
                      const DatasetOptions& opts) {
  auto it = map.pairs.find(pair);
  if (it == map.pairs.end())
    throw Error("room pair " + pair.from + "->" + pair.to +
                " not retained in the pair map");
  if (opts.min_daily_transitions < 1)
    throw Error("min_daily_transitions must be at least 1");

  std::map<LocalDate, std::vector<double>> by_day;
  for (const auto& t : it->second) by_day[t.date].push_back(t.seconds());

  std::map<LocalDate, const DailyTarget*> target_by_day;
  for (const auto& t : targets) target_by_day[t.date] = &t;

  Dataset ds;
  ds.pair = pair;
  ds.statistic = statistic;
  for (const auto& [date, durations] : by_day) {
    if (int(durations.size()) < opts.min_daily_transitions) continue;
    auto tit = target_by_day.find(date);
    if (tit == target_by_day.end()) continue;
    DatasetRow row;
    row.date = date;
    row.x_seconds = feature_value(statistic, durations);
    row.y_cm_s = tit->second->mean_velocity_cm_s;
    row.n_transitions = int(durations.size());
    ds.rows.push_back(row);
  }
  return ds;
}

namespace {
constexpr std::string_view kDatasetHeader =
    "date,from_room,to_room,statistic,x_seconds,y_cm_s,n_transitions";
}

std::string dataset_to_csv(const Dataset& ds) {
  std::string out(kDatasetHeader);
  out += '\n';
  for (const auto& r : ds.rows) {
    out += format_date(r.date);
    out += ',';
    out += ds.pair.from;
    out += ',';
    out += ds.pair.to;
    out += ',';
    out += to_string(ds.statistic);
    out += ',';
    out += csv::format_double(r.x_seconds);
    out += ',';
    out += csv::format_double(r.y_cm_s);
    out += ',';
    out += std::to_string(r.n_transitions);
    out += '\n';
  }
  return out;
}

Dataset dataset_from_csv(std::string_view text) {
  csv::Lines lines(text);
  std::string_view line;
  if (!lines.next(line)) throw ParseError(1, "empty document, expected header");
  if (line != kDatasetHeader)
    throw ParseError(1, "expected header '" + std::string(kDatasetHeader) + "'");

  Dataset ds;
  bool first = true;
  while (lines.next(line)) {
    if (line.empty()) continue;
    std::size_t ln = lines.line_no();
    auto fields = csv::split(line);
    if (fields.size() != 7)
      throw ParseError(ln, "expected 7 fields, got " + std::to_string(fields.size()));
    RoomPair pair{std::string(fields[1]), std::string(fields[2])};
    FeatureStat stat;
    try {
      stat = feature_from_string(fields[3]);
    } catch (const Error& e) {
      throw ParseError(ln, e.what());
    }
    if (first) {
      ds.pair = pair;
      ds.statistic = stat;
      first = false;
    } else if (pair != ds.pair || stat != ds.statistic) {
      throw ParseError(ln, "dataset mixes room pairs or statistics");
    }
    DatasetRow row;
    try {
      row.date = parse_date(fields[0]);
    } catch (const Error& e) {
      throw ParseError(ln, e.what());
    }
    row.x_seconds = csv::parse_double(fields[4], ln);
    row.y_cm_s = csv::parse_double(fields[5], ln);
    long long n = csv::parse_int(fields[6], ln);
    if (n < 1) throw ParseError(ln, "n_transitions must be positive");
    row.n_transitions = int(n);
    if (!ds.rows.empty() && !(ds.rows.back().date < row.date))
      throw ParseError(ln, "dataset rows must be strictly ascending by date");
    ds.rows.push_back(row);
  }
  return ds;
}

}  // namespace gait
