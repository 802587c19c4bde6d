#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gait/event_model.hpp"
#include "gait/timeutil.hpp"

namespace gait {

// Ordered room pair: kitchen->living and living->kitchen are distinct.
struct RoomPair {
  std::string from;
  std::string to;
  auto operator<=>(const RoomPair&) const = default;
};

struct Transition {
  std::string from_room;
  std::string to_room;
  Timestamp start;           // firing time in the from room
  std::int64_t duration_ms = 0;
  LocalDate date;            // local date of start

  double seconds() const { return double(duration_ms) / 1000.0; }
  RoomPair pair() const { return RoomPair{from_room, to_room}; }
};

struct ExtractOptions {
  // Transitions spanning more than this many seconds can still be real
  // (long sits between firings), so there is no duration cap by default.
  std::optional<double> max_duration_s;
};

// Every consecutive pair of area_motion firings in different rooms becomes
// one transition, except across gaps of two or more local calendar days
// (exclusions and outages leave such gaps behind). line_segment events are
// invisible here.
std::vector<Transition> extract_transitions(const EventStream& stream,
                                            const ExtractOptions& opts = {});

struct PairMap {
  std::map<RoomPair, std::vector<Transition>> pairs;  // each sorted by start
  std::size_t min_count = 0;
  std::size_t total_input = 0;    // transitions before filtering
  bool all_filtered = false;      // nonempty input, nothing retained

  std::size_t total_retained() const;
};

// Keeps pairs observed strictly more than min_count times.
PairMap filter_room_pairs(std::span<const Transition> transitions,
                          std::size_t min_count = 50);

// Share of all input transitions per retained pair, in percent.
std::map<RoomPair, double> pair_frequency(const PairMap& map);

// CSV: from_room,to_room,start_timestamp,duration_s
std::string transitions_to_csv(std::span<const Transition> transitions,
                               int utc_offset_minutes);
std::vector<Transition> transitions_from_csv(std::string_view text);

}  // namespace gait
