#include <doctest.h>

#include <string>
#include <vector>

#include "gait/errors.hpp"
#include "gait/event_model.hpp"

using namespace gait;

namespace {

SensorEvent area(const char* iso, const char* sensor, const char* room) {
  SensorEvent e;
  e.timestamp = parse_timestamp(iso).ts;
  e.sensor_id = sensor;
  e.room = room;
  e.kind = SensorKind::area_motion;
  return e;
}

const char* kHeader = "home_id,timestamp,sensor_id,room,kind,segment";

}  // namespace

TEST_SUITE("event_model") {

TEST_CASE("construction sorts shuffled events chronologically") {
  std::vector<SensorEvent> events{
      area("2010-03-01T09:00:02.000-08:00", "pir-kitchen", "kitchen"),
      area("2010-03-01T09:00:00.000-08:00", "pir-living", "living"),
      area("2010-03-01T09:00:01.000-08:00", "pir-hall", "hall"),
  };
  EventStream stream("home-001", -480, events);
  REQUIRE(stream.events().size() == 3);
  CHECK(stream.events()[0].room == "living");
  CHECK(stream.events()[1].room == "hall");
  CHECK(stream.events()[2].room == "kitchen");
  CHECK(stream.home_id() == "home-001");
  CHECK(stream.utc_offset_minutes() == -480);
}

TEST_CASE("header-only document parses to an empty stream") {
  EventStream stream = parse_event_log(std::string(kHeader) + "\n");
  CHECK(stream.empty());
  CHECK(stream.observed_days().empty());
}

TEST_CASE("an impossible calendar date is reported with its line number") {
  std::string text = std::string(kHeader) + "\n" +
                     "h1,2010-02-28T00:00:00.000Z,s1,kitchen,area_motion,\n" +
                     "h1,2010-02-30T00:00:00.000Z,s1,kitchen,area_motion,\n";
  try {
    parse_event_log(text);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line_no == 3);
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
}

TEST_CASE("event logs round-trip through serialize and parse") {
  std::string text = std::string(kHeader) + "\n" +
                     "h7,2010-03-01T08:00:00.000-08:00,pir-kitchen,kitchen,area_motion,\n" +
                     "h7,2010-03-01T08:00:04.250-08:00,line-0,den,line_segment,0\n" +
                     "h7,2010-03-01T08:00:05.250-08:00,line-1,den,line_segment,1\n" +
                     "h7,2010-03-02T09:30:00.125-08:00,pir-living,living,area_motion,\n";
  EventStream stream = parse_event_log(text);
  REQUIRE(stream.events().size() == 4);
  CHECK(stream.events()[1].kind == SensorKind::line_segment);
  CHECK(stream.events()[1].segment == 0);

  std::string out = serialize_event_log(stream);
  CHECK(out == text);  // already sorted, so byte-identical
  EventStream again = parse_event_log(out);
  CHECK(again.events() == stream.events());
  CHECK(again.home_id() == stream.home_id());
  CHECK(again.utc_offset_minutes() == stream.utc_offset_minutes());

  auto days = stream.observed_days();
  REQUIRE(days.size() == 2);
  CHECK(days[0] == make_date(2010, 3, 1));
  CHECK(days[1] == make_date(2010, 3, 2));
}

TEST_CASE("exact duplicate rows collapse to one event") {
  std::string row = "h1,2010-03-01T08:00:00.000Z,s1,kitchen,area_motion,\n";
  EventStream stream = parse_event_log(std::string(kHeader) + "\n" + row + row);
  CHECK(stream.events().size() == 1);
}

TEST_CASE("conflicting payloads at one sensor-millisecond are rejected") {
  std::string text = std::string(kHeader) + "\n" +
                     "h1,2010-03-01T08:00:00.000Z,s1,kitchen,area_motion,\n" +
                     "h1,2010-03-01T08:00:00.000Z,s1,living,area_motion,\n";
  CHECK_THROWS_AS(parse_event_log(text), ParseError);
}

TEST_CASE("mixed home ids and mixed offsets are rejected") {
  std::string mixed_home = std::string(kHeader) + "\n" +
                           "h1,2010-03-01T08:00:00.000Z,s1,kitchen,area_motion,\n" +
                           "h2,2010-03-01T08:00:01.000Z,s1,kitchen,area_motion,\n";
  CHECK_THROWS_AS(parse_event_log(mixed_home), ParseError);

  std::string mixed_zone = std::string(kHeader) + "\n" +
                           "h1,2010-03-01T08:00:00.000Z,s1,kitchen,area_motion,\n" +
                           "h1,2010-03-01T08:00:01.000-08:00,s1,kitchen,area_motion,\n";
  CHECK_THROWS_AS(parse_event_log(mixed_zone), ParseError);
}

TEST_CASE("segment field must agree with the sensor kind") {
  std::string area_with_segment =
      std::string(kHeader) + "\nh1,2010-03-01T08:00:00.000Z,s1,kitchen,area_motion,2\n";
  CHECK_THROWS_AS(parse_event_log(area_with_segment), ParseError);

  std::string line_without_segment =
      std::string(kHeader) + "\nh1,2010-03-01T08:00:00.000Z,l0,den,line_segment,\n";
  CHECK_THROWS_AS(parse_event_log(line_without_segment), ParseError);

  std::string bad_kind =
      std::string(kHeader) + "\nh1,2010-03-01T08:00:00.000Z,s1,kitchen,doorbell,\n";
  CHECK_THROWS_AS(parse_event_log(bad_kind), ParseError);

  std::string bad_field_count =
      std::string(kHeader) + "\nh1,2010-03-01T08:00:00.000Z,s1,kitchen\n";
  CHECK_THROWS_AS(parse_event_log(bad_field_count), ParseError);

  CHECK_THROWS_AS(parse_event_log("wrong,header\n"), ParseError);
}

TEST_CASE("apply_exclusions removes whole local days") {
  std::vector<SensorEvent> events;
  for (int day = 0; day < 2; ++day)
    for (int i = 0; i < 5; ++i) {
      SensorEvent e = area("2010-03-01T08:00:00.000-08:00", "s1", "kitchen");
      e.timestamp.epoch_ms += day * 86'400'000 + i * 60'000;
      events.push_back(e);
    }
  EventStream stream("h1", -480, events);
  REQUIRE(stream.events().size() == 10);

  ExclusionCalendar cal;
  cal.reasons[make_date(2010, 3, 2)] = "visitor";

  EventStream filtered = apply_exclusions(stream, cal);
  CHECK(filtered.events().size() == 5);  // exactly the day-2 events removed
  for (const auto& e : filtered.events())
    CHECK(filtered.date_of(e) == make_date(2010, 3, 1));

  // Idempotent: a second application changes nothing.
  EventStream twice = apply_exclusions(filtered, cal);
  CHECK(twice.events() == filtered.events());

  ExclusionCalendar empty;
  CHECK(apply_exclusions(stream, empty).events() == stream.events());

  ExclusionCalendar all;
  all.reasons[make_date(2010, 3, 1)] = "sensor_outage";
  all.reasons[make_date(2010, 3, 2)] = "staff_visit";
  CHECK(apply_exclusions(stream, all).empty());
}

TEST_CASE("exclusion calendars parse, validate reasons, and round-trip") {
  std::string text = "date,reason\n2010-03-02,visitor\n2010-04-01,sensor_outage\n";
  ExclusionCalendar cal = parse_exclusion_calendar(text);
  REQUIRE(cal.reasons.size() == 2);
  CHECK(cal.excluded(make_date(2010, 3, 2)));
  CHECK_FALSE(cal.excluded(make_date(2010, 3, 3)));
  CHECK(serialize_exclusion_calendar(cal) == text);

  CHECK_THROWS_AS(parse_exclusion_calendar("date,reason\n2010-03-02,birthday\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_exclusion_calendar("date,reason\n2010-02-30,visitor\n"),
                  ParseError);
  CHECK_THROWS_AS(parse_exclusion_calendar("nope\n"), ParseError);

  // Re-listing a day keeps the first reason rather than erroring.
  ExclusionCalendar dup = parse_exclusion_calendar(
      "date,reason\n2010-03-02,visitor\n2010-03-02,staff_visit\n");
  CHECK(dup.reasons.at(make_date(2010, 3, 2)) == "visitor");
}

}  // TEST_SUITE
