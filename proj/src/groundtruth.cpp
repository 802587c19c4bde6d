#include "gait/groundtruth.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "gait/csv.hpp"
#include "gait/errors.hpp"
#include "gait/stats.hpp"

namespace gait {

namespace {

bool strictly_monotone(const std::vector<std::pair<int, Timestamp>>& f,
                       bool& forward) {
  bool inc = true, dec = true;
  for (std::size_t i = 1; i < f.size(); ++i) {
    if (f[i].first <= f[i - 1].first) inc = false;
    if (f[i].first >= f[i - 1].first) dec = false;
  }
  forward = inc;
  return inc || dec;
}

}  // namespace

std::vector<LineWalk> segment_line_walks(const EventStream& stream,
                                         const LineWalkOptions& opts) {
  std::int64_t gap_ms = std::llround(opts.gap_threshold_s * 1000.0);

  std::vector<LineWalk> walks;
  std::vector<std::pair<int, Timestamp>> group;

  auto flush = [&](const Timestamp& group_start) {
    if (group.size() >= 2) {
      bool forward = true;
      if (strictly_monotone(group, forward)) {
        LineWalk w;
        w.firings = group;
        w.forward = forward;
        w.date = local_date(group_start, stream.utc_offset_minutes());
        walks.push_back(std::move(w));
      }
    }
    group.clear();
  };

  Timestamp group_start{};
  Timestamp last{};
  for (const auto& e : stream.events()) {
    if (e.kind != SensorKind::line_segment) continue;
    if (!group.empty() && e.timestamp.epoch_ms - last.epoch_ms >= gap_ms)
      flush(group_start);
    if (group.empty()) group_start = e.timestamp;
    group.emplace_back(e.segment, e.timestamp);
    last = e.timestamp;
  }
  flush(group_start);
  return walks;
}

VelocitySample estimate_line_velocity(const LineWalk& walk, double spacing_cm) {
  if (walk.firings.size() < 2)
    throw InsufficientDataError("walk needs at least two firings");
  if (spacing_cm <= 0) throw Error("segment spacing must be positive");

  std::vector<double> t, pos;
  t.reserve(walk.firings.size());
  pos.reserve(walk.firings.size());
  std::int64_t t0 = walk.firings.front().second.epoch_ms;
  for (const auto& [seg, ts] : walk.firings) {
    t.push_back(double(ts.epoch_ms - t0) / 1000.0);
    pos.push_back(double(seg) * spacing_cm);
  }

  stats::LineFit fit;
  try {
    fit = stats::least_squares_line(t, pos);
  } catch (const Error&) {
    throw Error("walk firings share a single millisecond");
  }

  VelocitySample s;
  s.velocity_cm_s = std::fabs(fit.slope);
  s.timestamp = walk.firings.front().second;
  s.date = walk.date;
  return s;
}

OutlierResult remove_outliers(std::span<const VelocitySample> samples) {
  OutlierResult r;
  std::vector<double> v;
  v.reserve(samples.size());
  for (const auto& s : samples) v.push_back(s.velocity_cm_s);

  if (samples.size() < 3) {
    r.kept.assign(samples.begin(), samples.end());
    r.too_few = true;
    if (!samples.empty()) {
      r.mean = stats::mean(v);
      r.sd = stats::sample_sd(v);
    }
    return r;
  }

  r.mean = stats::mean(v);
  r.sd = stats::sample_sd(v);
  double lo = r.mean - 2.0 * r.sd;
  double hi = r.mean + 2.0 * r.sd;
  for (const auto& s : samples) {
    if (s.velocity_cm_s >= lo && s.velocity_cm_s <= hi)
      r.kept.push_back(s);
    else
      ++r.removed;
  }
  return r;
}

std::vector<DailyTarget> daily_mean_targets(std::span<const VelocitySample> samples,
                                            int min_walks) {
  if (min_walks < 1) throw Error("min_walks must be at least 1");
  std::map<LocalDate, std::pair<double, int>> acc;
  for (const auto& s : samples) {
    auto& [sum, n] = acc[s.date];
    sum += s.velocity_cm_s;
    ++n;
  }
  std::vector<DailyTarget> out;
  for (const auto& [date, agg] : acc) {
    if (agg.second < min_walks) continue;
    out.push_back({date, agg.first / double(agg.second), agg.second});
  }
  return out;
}

std::vector<std::pair<double, double>> qq_points(std::span<const double> values) {
  if (values.size() < 10)
    throw InsufficientDataError("Q-Q normality needs at least 10 values");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  if (sorted.front() == sorted.back())
    throw Error("Q-Q normality undefined for constant sample");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(sorted.size());
  double n = double(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i)
    pts.emplace_back(stats::normal_quantile((double(i) + 0.5) / n), sorted[i]);
  return pts;
}

double qq_normality(std::span<const double> values) {
  auto pts = qq_points(values);
  std::vector<double> theo, emp;
  theo.reserve(pts.size());
  emp.reserve(pts.size());
  for (const auto& [t, v] : pts) {
    theo.push_back(t);
    emp.push_back(v);
  }
  double r = stats::pearson_r(theo, emp);
  return r * r;
}

namespace {
constexpr std::string_view kTargetHeader = "date,mean_velocity_cm_s,n_walks";
}

std::string targets_to_csv(std::span<const DailyTarget> targets) {
  std::string out(kTargetHeader);
  out += '\n';
  for (const auto& t : targets) {
    out += format_date(t.date);
    out += ',';
    out += csv::format_double(t.mean_velocity_cm_s);
    out += ',';
    out += std::to_string(t.n_walks);
    out += '\n';
  }
  return out;
}

std::vector<DailyTarget> targets_from_csv(std::string_view text) {
  csv::Lines lines(text);
  std::string_view line;
  if (!lines.next(line)) throw ParseError(1, "empty document, expected header");
  if (line != kTargetHeader)
    throw ParseError(1, "expected header '" + std::string(kTargetHeader) + "'");
  std::vector<DailyTarget> out;
  while (lines.next(line)) {
    if (line.empty()) continue;
    std::size_t ln = lines.line_no();
    auto fields = csv::split(line);
    if (fields.size() != 3)
      throw ParseError(ln, "expected 3 fields, got " + std::to_string(fields.size()));
    DailyTarget t;
    try {
      t.date = parse_date(fields[0]);
    } catch (const Error& e) {
      throw ParseError(ln, e.what());
    }
    t.mean_velocity_cm_s = csv::parse_double(fields[1], ln);
    long long n = csv::parse_int(fields[2], ln);
    if (n < 1) throw ParseError(ln, "n_walks must be positive");
    t.n_walks = int(n);
    out.push_back(t);
  }
  return out;
}

std::string qq_points_to_csv(std::span<const std::pair<double, double>> pts) {
  std::string out("theoretical_quantile,velocity_cm_s\n");
  for (const auto& [t, v] : pts) {
    out += csv::format_double(t);
    out += ',';
    out += csv::format_double(v);
    out += '\n';
  }
  return out;
}

}  // namespace gait
