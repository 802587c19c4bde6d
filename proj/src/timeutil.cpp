#include "gait/timeutil.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

#include "gait/errors.hpp"

namespace gait {

namespace {

constexpr std::int64_t kMsPerDay = 86'400'000;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if (a % b != 0 && ((a < 0) != (b < 0))) --q;
  return q;
}

int parse_digits(std::string_view s, std::size_t pos, std::size_t n,
                 const char* what) {
  if (pos + n > s.size()) throw Error(std::string("truncated ") + what);
  int value = 0;
  for (std::size_t i = 0; i < n; ++i) {
    char c = s[pos + i];
    if (c < '0' || c > '9') throw Error(std::string("bad digit in ") + what);
    value = value * 10 + (c - '0');
  }
  return value;
}

void expect(std::string_view s, std::size_t pos, char c) {
  if (pos >= s.size() || s[pos] != c)
    throw Error(std::string("expected '") + c + "' in timestamp");
}

}  // namespace

LocalDate local_date(Timestamp t, int utc_offset_minutes) {
  std::int64_t local_ms = t.epoch_ms + std::int64_t{utc_offset_minutes} * 60'000;
  return LocalDate{static_cast<std::int32_t>(floor_div(local_ms, kMsPerDay))};
}

LocalDate make_date(int year, int month, int day) {
  using namespace std::chrono;
  year_month_day ymd{std::chrono::year{year}, std::chrono::month{unsigned(month)},
                     std::chrono::day{unsigned(day)}};
  if (!ymd.ok()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    throw Error(std::string("invalid calendar date ") + buf);
  }
  return LocalDate{static_cast<std::int32_t>(
      sys_days{ymd}.time_since_epoch().count())};
}

std::string format_date(LocalDate d) {
  using namespace std::chrono;
  year_month_day ymd{sys_days{days{d.days}}};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(ymd.year()),
                unsigned(ymd.month()), unsigned(ymd.day()));
  return buf;
}

LocalDate parse_date(std::string_view text) {
  if (text.size() != 10) throw Error("date must be YYYY-MM-DD");
  int y = parse_digits(text, 0, 4, "year");
  expect(text, 4, '-');
  int m = parse_digits(text, 5, 2, "month");
  expect(text, 7, '-');
  int d = parse_digits(text, 8, 2, "day");
  return make_date(y, m, d);
}

ParsedTimestamp parse_timestamp(std::string_view s) {
  // YYYY-MM-DDTHH:MM:SS.mmm then Z or +HH:MM / -HH:MM
  if (s.size() != 24 && s.size() != 29)
    throw Error("timestamp must be YYYY-MM-DDTHH:MM:SS.mmm with Z or +-HH:MM");
  int year = parse_digits(s, 0, 4, "year");
  expect(s, 4, '-');
  int month = parse_digits(s, 5, 2, "month");
  expect(s, 7, '-');
  int day = parse_digits(s, 8, 2, "day");
  expect(s, 10, 'T');
  int hour = parse_digits(s, 11, 2, "hour");
  expect(s, 13, ':');
  int minute = parse_digits(s, 14, 2, "minute");
  expect(s, 16, ':');
  int second = parse_digits(s, 17, 2, "second");
  expect(s, 19, '.');
  int ms = parse_digits(s, 20, 3, "milliseconds");

  if (hour > 23) throw Error("hour out of range");
  if (minute > 59) throw Error("minute out of range");
  if (second > 59) throw Error("second out of range");

  LocalDate date = make_date(year, month, day);

  int offset_min = 0;
  if (s.size() == 24) {
    if (s[23] != 'Z') throw Error("expected 'Z' or offset in timestamp");
  } else {
    char sign = s[23];
    if (sign != '+' && sign != '-') throw Error("expected offset sign");
    int oh = parse_digits(s, 24, 2, "offset hours");
    expect(s, 26, ':');
    int om = parse_digits(s, 27, 2, "offset minutes");
    if (oh > 14 || om > 59) throw Error("offset out of range");
    offset_min = oh * 60 + om;
    if (sign == '-') offset_min = -offset_min;
  }

  std::int64_t local_ms = std::int64_t{date.days} * kMsPerDay +
                          ((hour * 60 + minute) * 60 + second) * 1000LL + ms;
  return ParsedTimestamp{Timestamp{local_ms - std::int64_t{offset_min} * 60'000},
                         offset_min};
}

std::string format_timestamp(Timestamp t, int utc_offset_minutes) {
  std::int64_t local_ms = t.epoch_ms + std::int64_t{utc_offset_minutes} * 60'000;
  std::int64_t day = floor_div(local_ms, kMsPerDay);
  std::int64_t in_day = local_ms - day * kMsPerDay;

  int ms = int(in_day % 1000);
  std::int64_t secs = in_day / 1000;
  int hour = int(secs / 3600);
  int minute = int(secs / 60 % 60);
  int second = int(secs % 60);

  std::string out = format_date(LocalDate{static_cast<std::int32_t>(day)});
  char buf[32];
  std::snprintf(buf, sizeof buf, "T%02d:%02d:%02d.%03d", hour, minute, second, ms);
  out += buf;
  if (utc_offset_minutes == 0) {
    out += 'Z';
  } else {
    int off = utc_offset_minutes;
    char sign = '+';
    if (off < 0) {
      sign = '-';
      off = -off;
    }
    std::snprintf(buf, sizeof buf, "%c%02d:%02d", sign, off / 60, off % 60);
    out += buf;
  }
  return out;
}

}  // namespace gait
