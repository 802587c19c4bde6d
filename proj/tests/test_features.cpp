#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gait/errors.hpp"
#include "gait/features.hpp"
#include "gait/simulator.hpp"

using namespace gait;

namespace {

Transition at(const std::string& from, const std::string& to, int day,
              double seconds) {
  Transition t;
  t.from_room = from;
  t.to_room = to;
  t.date = LocalDate{make_date(2010, 3, 1).days + day};
  t.start = Timestamp{std::int64_t(t.date.days) * 86'400'000 + 8 * 3'600'000};
  t.duration_ms = std::int64_t(seconds * 1000.0);
  return t;
}

DailyTarget target(int day, double v) {
  return {LocalDate{make_date(2010, 3, 1).days + day}, v, 3};
}

}  // namespace

TEST_SUITE("features") {

TEST_CASE("feature names round-trip and reject unknowns") {
  for (FeatureStat f : kAllFeatures) CHECK(feature_from_string(to_string(f)) == f);
  CHECK_THROWS_AS(feature_from_string("p99"), Error);
}

TEST_CASE("feature_value applies the chosen statistic") {
  std::vector<double> four{10, 20, 30, 40};
  CHECK(feature_value(FeatureStat::median, four) == 25.0);
  CHECK(feature_value(FeatureStat::mean, four) == 25.0);
  CHECK(feature_value(FeatureStat::p25, four) == 17.5);

  std::vector<double> one{7};
  for (FeatureStat f : kAllFeatures) CHECK(feature_value(f, one) == 7.0);

  std::vector<double> ramp(100);
  for (int i = 0; i < 100; ++i) ramp[std::size_t(i)] = double(i + 1);
  CHECK(feature_value(FeatureStat::p25, ramp) == 25.75);
  CHECK(feature_value(FeatureStat::p10, ramp) == 10.9);
}

TEST_CASE("build_dataset joins features with targets per day") {
  std::vector<Transition> ts{at("a", "b", 0, 2), at("a", "b", 0, 4),
                             at("a", "b", 0, 6)};
  PairMap map = filter_room_pairs(ts, 0);
  std::vector<DailyTarget> targets{target(0, 60.0)};

  Dataset ds = build_dataset(map, RoomPair{"a", "b"}, FeatureStat::mean, targets);
  REQUIRE(ds.rows.size() == 1);
  CHECK(ds.rows[0].x_seconds == doctest::Approx(4.0));
  CHECK(ds.rows[0].y_cm_s == doctest::Approx(60.0));
  CHECK(ds.rows[0].n_transitions == 3);
  CHECK(ds.pair == RoomPair{"a", "b"});
  CHECK(ds.statistic == FeatureStat::mean);
  CHECK(ds.x() == std::vector<double>{4.0});
  CHECK(ds.y() == std::vector<double>{60.0});
}

TEST_CASE("days missing either side of the join produce no row") {
  std::vector<Transition> ts;
  for (int i = 0; i < 4; ++i) ts.push_back(at("a", "b", 0, 2.0 + i));  // day 0: 4 durations
  for (int i = 0; i < 2; ++i) ts.push_back(at("a", "b", 1, 3.0 + i));  // day 1: only 2
  for (int i = 0; i < 4; ++i) ts.push_back(at("a", "b", 2, 2.5 + i));  // day 2: no target
  PairMap map = filter_room_pairs(ts, 0);
  std::vector<DailyTarget> targets{target(0, 55.0), target(1, 57.0),
                                   target(3, 59.0)};  // day 3 has no transitions

  Dataset ds = build_dataset(map, RoomPair{"a", "b"}, FeatureStat::median, targets);
  REQUIRE(ds.rows.size() == 1);  // only day 0 satisfies both sides
  CHECK(ds.rows[0].date == make_date(2010, 3, 1));
  CHECK(ds.rows[0].n_transitions == 4);

  DatasetOptions relaxed;
  relaxed.min_daily_transitions = 1;
  Dataset more = build_dataset(map, RoomPair{"a", "b"}, FeatureStat::median,
                               targets, relaxed);
  CHECK(more.rows.size() == 2);  // day 1 joins once the floor drops

  CHECK_THROWS_AS(
      build_dataset(map, RoomPair{"b", "a"}, FeatureStat::median, targets), Error);
  DatasetOptions bad;
  bad.min_daily_transitions = 0;
  CHECK_THROWS_AS(
      build_dataset(map, RoomPair{"a", "b"}, FeatureStat::median, targets, bad),
      Error);
}

TEST_CASE("dataset rows stay ascending by date") {
  std::vector<Transition> ts;
  for (int day : {5, 1, 3})
    for (int i = 0; i < 3; ++i) ts.push_back(at("a", "b", day, 2.0 + i));
  PairMap map = filter_room_pairs(ts, 0);
  std::vector<DailyTarget> targets{target(1, 50), target(3, 55), target(5, 60)};
  Dataset ds = build_dataset(map, RoomPair{"a", "b"}, FeatureStat::p25, targets);
  REQUIRE(ds.rows.size() == 3);
  CHECK(ds.rows[0].date < ds.rows[1].date);
  CHECK(ds.rows[1].date < ds.rows[2].date);
}

TEST_CASE("datasets round-trip through CSV") {
  std::vector<Transition> ts;
  for (int day : {0, 1})
    for (int i = 0; i < 3; ++i) ts.push_back(at("hall", "kitchen", day, 1.5 + i));
  PairMap map = filter_room_pairs(ts, 0);
  std::vector<DailyTarget> targets{target(0, 52.5), target(1, 61.75)};
  Dataset ds = build_dataset(map, RoomPair{"hall", "kitchen"}, FeatureStat::p20,
                             targets);

  Dataset back = dataset_from_csv(dataset_to_csv(ds));
  CHECK(back.pair == ds.pair);
  CHECK(back.statistic == ds.statistic);
  REQUIRE(back.rows.size() == ds.rows.size());
  for (std::size_t i = 0; i < ds.rows.size(); ++i) {
    CHECK(back.rows[i].date == ds.rows[i].date);
    CHECK(back.rows[i].x_seconds == ds.rows[i].x_seconds);
    CHECK(back.rows[i].y_cm_s == ds.rows[i].y_cm_s);
    CHECK(back.rows[i].n_transitions == ds.rows[i].n_transitions);
  }
}

TEST_CASE("dataset CSV rejects inconsistent documents") {
  const char* header = "date,from_room,to_room,statistic,x_seconds,y_cm_s,n_transitions\n";
  CHECK_THROWS_AS(dataset_from_csv("x\n"), ParseError);
  CHECK_THROWS_AS(dataset_from_csv(std::string(header) +
                                   "2010-03-01,a,b,p25,2,60,3\n"
                                   "2010-03-02,a,c,p25,2,60,3\n"),
                  ParseError);  // pair changes mid-document
  CHECK_THROWS_AS(dataset_from_csv(std::string(header) +
                                   "2010-03-01,a,b,p25,2,60,3\n"
                                   "2010-03-02,a,b,median,2,60,3\n"),
                  ParseError);  // statistic changes
  CHECK_THROWS_AS(dataset_from_csv(std::string(header) +
                                   "2010-03-02,a,b,p25,2,60,3\n"
                                   "2010-03-01,a,b,p25,2,60,3\n"),
                  ParseError);  // dates out of order
  CHECK_THROWS_AS(dataset_from_csv(std::string(header) +
                                   "2010-03-01,a,b,p25,2,60,0\n"),
                  ParseError);  // empty day cannot be a row
}

TEST_CASE("row count over a simulated home matches an independent join") {
  auto scenario = sim::SimScenario::default_scenario(31);
  sim::SimResult sim = sim::simulate(scenario, 100);

  auto transitions = extract_transitions(sim.events);
  PairMap map = filter_room_pairs(transitions, 50);
  REQUIRE_FALSE(map.pairs.empty());

  auto walks = segment_line_walks(sim.events);
  std::vector<VelocitySample> velocities;
  for (const auto& w : walks) velocities.push_back(estimate_line_velocity(w));
  auto targets = daily_mean_targets(remove_outliers(velocities).kept);
  REQUIRE_FALSE(targets.empty());

  // The busiest retained pair, chosen without build_dataset's help.
  const RoomPair* busiest = nullptr;
  std::size_t best_count = 0;
  for (const auto& [pair, ts] : map.pairs)
    if (ts.size() > best_count) {
      best_count = ts.size();
      busiest = &pair;
    }
  REQUIRE(busiest != nullptr);

  // Independent recount of the inner join.
  std::map<std::int32_t, int> per_day;
  for (const auto& t : map.pairs.at(*busiest)) per_day[t.date.days]++;
  std::set<std::int32_t> target_days;
  for (const auto& t : targets) target_days.insert(t.date.days);
  std::size_t expected = 0;
  for (const auto& [day, count] : per_day)
    if (count >= 3 && target_days.count(day)) ++expected;

  Dataset ds = build_dataset(map, *busiest, FeatureStat::p25, targets);
  CHECK(ds.rows.size() == expected);
  CHECK(expected > 50);  // the default home yields a usable year-quarter
}

}  // TEST_SUITE
