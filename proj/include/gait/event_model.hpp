#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gait/timeutil.hpp"

namespace gait {

enum class SensorKind { area_motion, line_segment };

std::string_view to_string(SensorKind k);
SensorKind sensor_kind_from_string(std::string_view s);

struct SensorEvent {
  Timestamp timestamp;
  std::string sensor_id;
  std::string room;
  SensorKind kind = SensorKind::area_motion;
  int segment = -1;  // index along the sensor line; -1 for area_motion

  friend bool operator==(const SensorEvent&, const SensorEvent&) = default;
};

// One home's firing history: chronologically sorted, no duplicate
// (timestamp, sensor_id) pairs, one fixed UTC offset for the whole stream.
class EventStream {
 public:
  EventStream() = default;
  // Sorts and validates. Throws Error on conflicting duplicates or
  // malformed events.
  EventStream(std::string home_id, int utc_offset_minutes,
              std::vector<SensorEvent> events);

  const std::string& home_id() const { return home_id_; }
  int utc_offset_minutes() const { return utc_offset_minutes_; }
  const std::vector<SensorEvent>& events() const { return events_; }
  bool empty() const { return events_.empty(); }

  LocalDate date_of(const SensorEvent& e) const {
    return local_date(e.timestamp, utc_offset_minutes_);
  }
  // Distinct local dates with at least one event, ascending.
  std::vector<LocalDate> observed_days() const;

 private:
  std::string home_id_;
  int utc_offset_minutes_ = 0;
  std::vector<SensorEvent> events_;
};

struct ExclusionCalendar {
  std::map<LocalDate, std::string> reasons;  // whole days to drop

  bool excluded(LocalDate d) const { return reasons.count(d) != 0; }
};

// CSV round trip. Headers are mandatory:
//   events:     home_id,timestamp,sensor_id,room,kind,segment
//   exclusions: date,reason
// parse_event_log throws ParseError (with the line number) on any
// malformed row, mixed home ids, mixed UTC offsets, or duplicate
// (timestamp, sensor_id) rows that disagree about the payload. Exact
// duplicate rows collapse to one event.
EventStream parse_event_log(std::string_view text);
std::string serialize_event_log(const EventStream& stream);

ExclusionCalendar parse_exclusion_calendar(std::string_view text);
std::string serialize_exclusion_calendar(const ExclusionCalendar& cal);

// Drops every event whose local date is excluded.
EventStream apply_exclusions(const EventStream& stream,
                             const ExclusionCalendar& cal);

}  // namespace gait
