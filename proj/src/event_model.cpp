#include "gait/event_model.hpp"

#include <algorithm>
#include <tuple>

#include "gait/csv.hpp"
#include "gait/errors.hpp"

namespace gait {

std::string_view to_string(SensorKind k) {
  return k == SensorKind::area_motion ? "area_motion" : "line_segment";
}

SensorKind sensor_kind_from_string(std::string_view s) {
  if (s == "area_motion") return SensorKind::area_motion;
  if (s == "line_segment") return SensorKind::line_segment;
  throw Error("unknown sensor kind '" + std::string(s) + "'");
}

namespace {

bool event_order(const SensorEvent& a, const SensorEvent& b) {
  return std::tie(a.timestamp.epoch_ms, a.sensor_id) <
         std::tie(b.timestamp.epoch_ms, b.sensor_id);
}

void validate_event(const SensorEvent& e) {
  if (e.sensor_id.empty()) throw Error("event with empty sensor_id");
  if (e.room.empty()) throw Error("event with empty room");
  if (e.kind == SensorKind::line_segment) {
    if (e.segment < 0) throw Error("line_segment event needs a segment index");
  } else if (e.segment != -1) {
    throw Error("area_motion event must not carry a segment index");
  }
}

}  // namespace

EventStream::EventStream(std::string home_id, int utc_offset_minutes,
                         std::vector<SensorEvent> events)
    : home_id_(std::move(home_id)),
      utc_offset_minutes_(utc_offset_minutes),
      events_(std::move(events)) {
  for (const auto& e : events_) validate_event(e);
  std::stable_sort(events_.begin(), events_.end(), event_order);
  for (std::size_t i = 1; i < events_.size(); ++i) {
    const auto& prev = events_[i - 1];
    const auto& cur = events_[i];
    if (prev.timestamp == cur.timestamp && prev.sensor_id == cur.sensor_id &&
        !(prev == cur))
      throw Error("conflicting events for sensor '" + cur.sensor_id +
                  "' at the same millisecond");
  }
  events_.erase(std::unique(events_.begin(), events_.end()), events_.end());
}

std::vector<LocalDate> EventStream::observed_days() const {
  std::vector<LocalDate> days;
  for (const auto& e : events_) {
    LocalDate d = date_of(e);
    if (days.empty() || days.back() != d) days.push_back(d);
  }
  days.erase(std::unique(days.begin(), days.end()), days.end());
  return days;
}

namespace {

constexpr std::string_view kEventHeader =
    "home_id,timestamp,sensor_id,room,kind,segment";
constexpr std::string_view kExclusionHeader = "date,reason";

}  // namespace

EventStream parse_event_log(std::string_view text) {
  csv::Lines lines(text);
  std::string_view line;
  if (!lines.next(line)) throw ParseError(1, "empty document, expected header");
  if (line != kEventHeader)
    throw ParseError(1, "expected header '" + std::string(kEventHeader) + "'");

  std::string home_id;
  int offset = 0;
  bool have_offset = false;
  std::vector<SensorEvent> events;

  while (lines.next(line)) {
    if (line.empty()) continue;
    std::size_t ln = lines.line_no();
    auto fields = csv::split(line);
    if (fields.size() != 6)
      throw ParseError(ln, "expected 6 fields, got " + std::to_string(fields.size()));

    if (home_id.empty()) {
      home_id = std::string(fields[0]);
      if (home_id.empty()) throw ParseError(ln, "empty home_id");
    } else if (fields[0] != home_id) {
      throw ParseError(ln, "home_id changed mid-document");
    }

    ParsedTimestamp pt;
    try {
      pt = parse_timestamp(fields[1]);
    } catch (const Error& e) {
      throw ParseError(ln, e.what());
    }
    if (!have_offset) {
      offset = pt.utc_offset_minutes;
      have_offset = true;
    } else if (pt.utc_offset_minutes != offset) {
      throw ParseError(ln, "UTC offset changed mid-document");
    }

    SensorEvent e;
    e.timestamp = pt.ts;
    e.sensor_id = std::string(fields[2]);
    e.room = std::string(fields[3]);
    try {
      e.kind = sensor_kind_from_string(fields[4]);
    } catch (const Error& err) {
      throw ParseError(ln, err.what());
    }
    if (e.kind == SensorKind::line_segment) {
      long long seg = csv::parse_int(fields[5], ln);
      if (seg < 0 || seg > 1000) throw ParseError(ln, "segment index out of range");
      e.segment = int(seg);
    } else if (!fields[5].empty()) {
      throw ParseError(ln, "segment must be empty for area_motion");
    }
    try {
      validate_event(e);
    } catch (const Error& err) {
      throw ParseError(ln, err.what());
    }
    events.push_back(std::move(e));
  }

  try {
    return EventStream(std::move(home_id), offset, std::move(events));
  } catch (const Error& e) {
    throw ParseError(lines.line_no(), e.what());
  }
}

std::string serialize_event_log(const EventStream& stream) {
  std::string out(kEventHeader);
  out += '\n';
  for (const auto& e : stream.events()) {
    out += stream.home_id();
    out += ',';
    out += format_timestamp(e.timestamp, stream.utc_offset_minutes());
    out += ',';
    out += e.sensor_id;
    out += ',';
    out += e.room;
    out += ',';
    out += to_string(e.kind);
    out += ',';
    if (e.kind == SensorKind::line_segment) out += std::to_string(e.segment);
    out += '\n';
  }
  return out;
}

ExclusionCalendar parse_exclusion_calendar(std::string_view text) {
  csv::Lines lines(text);
  std::string_view line;
  if (!lines.next(line)) throw ParseError(1, "empty document, expected header");
  if (line != kExclusionHeader)
    throw ParseError(1, "expected header '" + std::string(kExclusionHeader) + "'");

  ExclusionCalendar cal;
  while (lines.next(line)) {
    if (line.empty()) continue;
    std::size_t ln = lines.line_no();
    auto fields = csv::split(line);
    if (fields.size() != 2)
      throw ParseError(ln, "expected 2 fields, got " + std::to_string(fields.size()));
    LocalDate d;
    try {
      d = parse_date(fields[0]);
    } catch (const Error& e) {
      throw ParseError(ln, e.what());
    }
    if (fields[1] != "visitor" && fields[1] != "staff_visit" &&
        fields[1] != "sensor_outage")
      throw ParseError(ln, "unknown exclusion reason '" + std::string(fields[1]) + "'");
    // Re-listing a day is fine; keep the first reason.
    cal.reasons.emplace(d, std::string(fields[1]));
  }
  return cal;
}

std::string serialize_exclusion_calendar(const ExclusionCalendar& cal) {
  std::string out(kExclusionHeader);
  out += '\n';
  for (const auto& [date, reason] : cal.reasons) {
    out += format_date(date);
    out += ',';
    out += reason;
    out += '\n';
  }
  return out;
}

EventStream apply_exclusions(const EventStream& stream,
                             const ExclusionCalendar& cal) {
  std::vector<SensorEvent> kept;
  kept.reserve(stream.events().size());
  for (const auto& e : stream.events())
    if (!cal.excluded(stream.date_of(e))) kept.push_back(e);
  return EventStream(stream.home_id(), stream.utc_offset_minutes(),
                     std::move(kept));
}

}  // namespace gait
