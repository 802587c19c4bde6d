#include <doctest.h>

#include <cmath>
#include <string>
#include <vector>

#include "gait/errors.hpp"
#include "gait/groundtruth.hpp"
#include "gait/rng.hpp"
#include "gait/stats.hpp"

using namespace gait;

namespace {

// Line firings at (seconds-offset, segment), all on the 4-sensor line.
EventStream line_stream(const std::vector<std::pair<double, int>>& script) {
  std::int64_t base = parse_timestamp("2010-03-01T08:00:00.000-08:00").ts.epoch_ms;
  std::vector<SensorEvent> events;
  for (const auto& [secs, seg] : script) {
    SensorEvent e;
    e.timestamp = Timestamp{base + std::int64_t(std::llround(secs * 1000.0))};
    e.sensor_id = "line-" + std::to_string(seg);
    e.room = "den";
    e.kind = SensorKind::line_segment;
    e.segment = seg;
    events.push_back(e);
  }
  return EventStream("h1", -480, std::move(events));
}

VelocitySample sample(double v, int day = 0) {
  VelocitySample s;
  s.velocity_cm_s = v;
  s.timestamp = Timestamp{day * 86'400'000 + 8 * 3'600'000};
  s.date = LocalDate{make_date(2010, 3, 1).days + day};
  return s;
}

}  // namespace

TEST_SUITE("groundtruth") {

TEST_CASE("monotone firing groups become walks, anything else is noise") {
  auto forward = segment_line_walks(line_stream({{0, 0}, {1, 1}, {2, 2}, {3, 3}}));
  REQUIRE(forward.size() == 1);
  CHECK(forward[0].forward);
  CHECK(forward[0].firings.size() == 4);
  CHECK(forward[0].date == make_date(2010, 3, 1));

  auto backward = segment_line_walks(line_stream({{0, 3}, {1, 2}, {2, 1}, {3, 0}}));
  REQUIRE(backward.size() == 1);
  CHECK_FALSE(backward[0].forward);

  CHECK(segment_line_walks(line_stream({{0, 0}, {1, 2}, {2, 1}, {3, 3}})).empty());
  CHECK(segment_line_walks(line_stream({{0, 1}, {1, 1}})).empty());  // repeat
  CHECK(segment_line_walks(line_stream({{0, 2}})).empty());          // lone firing
}

TEST_CASE("the time-gap threshold separates passes") {
  // Two clean passes 10 s apart with the default 5 s threshold.
  auto two = segment_line_walks(
      line_stream({{0, 0}, {1, 1}, {2, 2}, {3, 3}, {13, 3}, {14, 2}, {15, 1}, {16, 0}}));
  REQUIRE(two.size() == 2);
  CHECK(two[0].forward);
  CHECK_FALSE(two[1].forward);

  // A gap exactly at the threshold splits; just inside chains.
  LineWalkOptions opts;
  opts.gap_threshold_s = 5.0;
  auto split = segment_line_walks(line_stream({{0, 0}, {1, 1}, {6, 2}, {7, 3}}), opts);
  CHECK(split.size() == 2);
  auto chained = segment_line_walks(line_stream({{0, 0}, {1, 1}, {5.9, 2}, {6.9, 3}}), opts);
  REQUIRE(chained.size() == 1);
  CHECK(chained[0].firings.size() == 4);
}

TEST_CASE("constant-speed passes recover the exact velocity") {
  auto walks = segment_line_walks(line_stream({{0, 0}, {1, 1}, {2, 2}, {3, 3}}));
  REQUIRE(walks.size() == 1);
  VelocitySample v = estimate_line_velocity(walks[0], 60.96);
  CHECK(v.velocity_cm_s == doctest::Approx(60.96).epsilon(1e-12));
  CHECK(v.date == make_date(2010, 3, 1));

  // Velocity is reported as a magnitude for backward passes too.
  auto back = segment_line_walks(line_stream({{0, 3}, {1, 2}, {2, 1}, {3, 0}}));
  REQUIRE(back.size() == 1);
  CHECK(estimate_line_velocity(back[0], 60.96).velocity_cm_s ==
        doctest::Approx(60.96).epsilon(1e-12));
}

TEST_CASE("two firings reduce to distance over time") {
  LineWalk walk;
  walk.firings = {{0, Timestamp{0}}, {1, Timestamp{500}}};
  walk.date = make_date(2010, 3, 1);
  CHECK(estimate_line_velocity(walk, 60.96).velocity_cm_s ==
        doctest::Approx(121.92).epsilon(1e-12));

  LineWalk stuck;
  stuck.firings = {{0, Timestamp{100}}, {1, Timestamp{100}}};
  stuck.date = make_date(2010, 3, 1);
  CHECK_THROWS_AS(estimate_line_velocity(stuck, 60.96), Error);
  CHECK_THROWS_AS(estimate_line_velocity(walk, 0.0), Error);
}

TEST_CASE("least-squares slope averages out timing jitter") {
  // Millisecond-rounded firings at 85 cm/s: spacing 60.96 cm means
  // inter-sensor gaps of ~717.2 ms, so rounding perturbs each firing by
  // under half a millisecond and the estimate stays within 0.5 cm/s.
  double gap_s = 60.96 / 85.0;
  auto walks = segment_line_walks(
      line_stream({{0 * gap_s, 0}, {1 * gap_s, 1}, {2 * gap_s, 2}, {3 * gap_s, 3}}));
  REQUIRE(walks.size() == 1);
  CHECK(estimate_line_velocity(walks[0], 60.96).velocity_cm_s ==
        doctest::Approx(85.0).epsilon(0.5 / 85.0));
}

TEST_CASE("the two-sd rule removes a 450 cm/s artifact") {
  std::vector<VelocitySample> samples;
  Rng rng(11);
  for (int i = 0; i < 40; ++i) samples.push_back(sample(rng.uniform(40.0, 80.0)));
  samples.push_back(sample(450.0));

  OutlierResult r = remove_outliers(samples);
  CHECK(r.removed == 1);
  CHECK(r.kept.size() == 40);
  CHECK_FALSE(r.too_few);
  for (const auto& s : r.kept) CHECK(s.velocity_cm_s < 100.0);
}

TEST_CASE("degenerate outlier inputs are preserved") {
  std::vector<VelocitySample> same(5, sample(62.0));
  OutlierResult r = remove_outliers(same);
  CHECK(r.removed == 0);
  CHECK(r.kept.size() == 5);
  CHECK(r.sd == 0.0);

  std::vector<VelocitySample> two{sample(40.0), sample(400.0)};
  OutlierResult few = remove_outliers(two);
  CHECK(few.too_few);
  CHECK(few.removed == 0);
  CHECK(few.kept.size() == 2);
}

TEST_CASE("two-sd filtering keeps about 95 percent of normal data") {
  Rng rng(123);
  std::vector<VelocitySample> samples;
  for (int i = 0; i < 1000; ++i) samples.push_back(sample(rng.normal(55.0, 10.0)));
  OutlierResult r = remove_outliers(samples);
  double kept = double(r.kept.size()) / 1000.0;
  CHECK(kept > 0.934);
  CHECK(kept < 0.974);
}

TEST_CASE("daily targets average walks per local date") {
  std::vector<VelocitySample> samples{sample(50, 0), sample(60, 0), sample(70, 0),
                                      sample(80, 2)};
  auto targets = daily_mean_targets(samples);
  REQUIRE(targets.size() == 2);
  CHECK(targets[0].date == make_date(2010, 3, 1));
  CHECK(targets[0].mean_velocity_cm_s == doctest::Approx(60.0));
  CHECK(targets[0].n_walks == 3);
  CHECK(targets[1].mean_velocity_cm_s == doctest::Approx(80.0));
  CHECK(targets[1].n_walks == 1);

  auto strict = daily_mean_targets(samples, 2);
  REQUIRE(strict.size() == 1);  // the single-walk day drops out
  CHECK(strict[0].n_walks == 3);

  CHECK(daily_mean_targets({}).empty());
  CHECK_THROWS_AS(daily_mean_targets(samples, 0), Error);
}

TEST_CASE("exact normal quantiles give a perfect Q-Q line") {
  std::vector<double> v;
  for (int i = 0; i < 60; ++i)
    v.push_back(55.3 + 33.8 * stats::normal_quantile((i + 0.5) / 60.0));
  CHECK(qq_normality(v) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("near-normal samples score high, bimodal ones lower") {
  Rng rng(2024);
  std::vector<double> normal;
  while (normal.size() < 500) {
    double v = rng.normal(55.3, 33.8);
    if (v > 0) normal.push_back(v);  // truncate to physical speeds
  }
  double r2_normal = qq_normality(normal);
  CHECK(r2_normal > 0.99);

  std::vector<double> bimodal;
  for (int i = 0; i < 250; ++i) bimodal.push_back(rng.normal(25.0, 3.0));
  for (int i = 0; i < 250; ++i) bimodal.push_back(rng.normal(95.0, 3.0));
  CHECK(qq_normality(bimodal) < r2_normal - 0.05);
}

TEST_CASE("Q-Q assessment guards its preconditions") {
  std::vector<double> nine(9, 1.0);
  CHECK_THROWS_AS(qq_normality(nine), InsufficientDataError);
  std::vector<double> flat(20, 3.0);
  CHECK_THROWS_AS(qq_normality(flat), Error);

  std::vector<double> ten{1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  auto pts = qq_points(ten);
  REQUIRE(pts.size() == 10);
  CHECK(pts.front().second == 1.0);  // empirical values come back sorted
  CHECK(pts.back().second == 10.0);
  std::string csv = qq_points_to_csv(pts);
  CHECK(csv.find("theoretical_quantile,velocity_cm_s") == 0);
}

TEST_CASE("daily targets round-trip through CSV") {
  std::vector<DailyTarget> targets{{make_date(2010, 3, 1), 61.25, 4},
                                   {make_date(2010, 3, 3), 58.5, 7}};
  std::string text = targets_to_csv(targets);
  auto back = targets_from_csv(text);
  REQUIRE(back.size() == 2);
  CHECK(back[0].date == targets[0].date);
  CHECK(back[0].mean_velocity_cm_s == targets[0].mean_velocity_cm_s);
  CHECK(back[0].n_walks == 4);
  CHECK(back[1].date == targets[1].date);

  CHECK_THROWS_AS(targets_from_csv("nope\n"), ParseError);
  CHECK_THROWS_AS(
      targets_from_csv("date,mean_velocity_cm_s,n_walks\n2010-03-01,60\n"),
      ParseError);
}

}  // TEST_SUITE
