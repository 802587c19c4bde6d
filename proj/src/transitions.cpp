#include "gait/transitions.hpp"

#include <cmath>
#include <cstdlib>

#include "gait/csv.hpp"
#include "gait/errors.hpp"

namespace gait {

std::vector<Transition> extract_transitions(const EventStream& stream,
                                            const ExtractOptions& opts) {
  std::vector<Transition> out;
  const SensorEvent* prev = nullptr;
  for (const auto& e : stream.events()) {
    if (e.kind != SensorKind::area_motion) continue;
    if (prev && prev->room != e.room) {
      LocalDate d0 = stream.date_of(*prev);
      LocalDate d1 = stream.date_of(e);
      if (std::abs(d1.days - d0.days) <= 1) {
        Transition t;
        t.from_room = prev->room;
        t.to_room = e.room;
        t.start = prev->timestamp;
        t.duration_ms = e.timestamp.epoch_ms - prev->timestamp.epoch_ms;
        t.date = d0;
        if (!opts.max_duration_s || t.seconds() <= *opts.max_duration_s)
          out.push_back(std::move(t));
      }
    }
    prev = &e;
  }
  return out;
}

std::size_t PairMap::total_retained() const {
  std::size_t n = 0;
  for (const auto& [pair, ts] : pairs) n += ts.size();
  return n;
}

PairMap filter_room_pairs(std::span<const Transition> transitions,
                          std::size_t min_count) {
  std::map<RoomPair, std::vector<Transition>> grouped;
  for (const auto& t : transitions) grouped[t.pair()].push_back(t);

  PairMap map;
  map.min_count = min_count;
  map.total_input = transitions.size();
  for (auto& [pair, ts] : grouped)
    if (ts.size() > min_count) map.pairs.emplace(pair, std::move(ts));
  map.all_filtered = !transitions.empty() && map.pairs.empty();
  return map;
}

std::map<RoomPair, double> pair_frequency(const PairMap& map) {
  std::map<RoomPair, double> freq;
  if (map.total_input == 0) return freq;
  for (const auto& [pair, ts] : map.pairs)
    freq[pair] = 100.0 * double(ts.size()) / double(map.total_input);
  return freq;
}

namespace {
constexpr std::string_view kTransitionHeader =
    "from_room,to_room,start_timestamp,duration_s";
}

std::string transitions_to_csv(std::span<const Transition> transitions,
                               int utc_offset_minutes) {
  std::string out(kTransitionHeader);
  out += '\n';
  for (const auto& t : transitions) {
    out += t.from_room;
    out += ',';
    out += t.to_room;
    out += ',';
    out += format_timestamp(t.start, utc_offset_minutes);
    out += ',';
    out += csv::format_double(t.seconds());
    out += '\n';
  }
  return out;
}

std::vector<Transition> transitions_from_csv(std::string_view text) {
  csv::Lines lines(text);
  std::string_view line;
  if (!lines.next(line)) throw ParseError(1, "empty document, expected header");
  if (line != kTransitionHeader)
    throw ParseError(1, "expected header '" + std::string(kTransitionHeader) + "'");

  std::vector<Transition> out;
  bool have_offset = false;
  int offset = 0;
  while (lines.next(line)) {
    if (line.empty()) continue;
    std::size_t ln = lines.line_no();
    auto fields = csv::split(line);
    if (fields.size() != 4)
      throw ParseError(ln, "expected 4 fields, got " + std::to_string(fields.size()));
    Transition t;
    t.from_room = std::string(fields[0]);
    t.to_room = std::string(fields[1]);
    if (t.from_room.empty() || t.to_room.empty())
      throw ParseError(ln, "empty room name");
    if (t.from_room == t.to_room)
      throw ParseError(ln, "transition with identical rooms");
    ParsedTimestamp pt;
    try {
      pt = parse_timestamp(fields[2]);
    } catch (const Error& e) {
      throw ParseError(ln, e.what());
    }
    if (!have_offset) {
      offset = pt.utc_offset_minutes;
      have_offset = true;
    } else if (pt.utc_offset_minutes != offset) {
      throw ParseError(ln, "UTC offset changed mid-document");
    }
    t.start = pt.ts;
    t.date = local_date(pt.ts, offset);
    double secs = csv::parse_double(fields[3], ln);
    if (secs < 0) throw ParseError(ln, "negative duration");
    t.duration_ms = std::llround(secs * 1000.0);
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace gait
