#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace gait {

// Instant in time: milliseconds since the Unix epoch, UTC.
struct Timestamp {
  std::int64_t epoch_ms = 0;
  auto operator<=>(const Timestamp&) const = default;
};

// Calendar day in the home's local zone, stored as days since 1970-01-01.
struct LocalDate {
  std::int32_t days = 0;
  auto operator<=>(const LocalDate&) const = default;
};

// Local calendar day that contains the instant, given the stream's fixed
// offset from UTC in minutes.
LocalDate local_date(Timestamp t, int utc_offset_minutes);

// Throws Error if year/month/day do not name a real calendar day.
LocalDate make_date(int year, int month, int day);

// "YYYY-MM-DD"
std::string format_date(LocalDate d);
LocalDate parse_date(std::string_view text);

struct ParsedTimestamp {
  Timestamp ts;
  int utc_offset_minutes = 0;
};

// Accepts ISO-8601 with exactly three fractional digits and an explicit
// offset: "2010-02-03T17:05:06.123-08:00" or "...Z". Throws Error on
// anything else, including impossible dates and out-of-range fields.
ParsedTimestamp parse_timestamp(std::string_view text);

// Inverse of parse_timestamp; always emits three fractional digits and a
// signed "+HH:MM" suffix ("Z" when the offset is zero).
std::string format_timestamp(Timestamp t, int utc_offset_minutes);

}  // namespace gait
