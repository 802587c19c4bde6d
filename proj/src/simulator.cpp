#include "gait/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>
#include <optional>

#include <json.hpp>

#include "gait/csv.hpp"
#include "gait/errors.hpp"
#include "gait/rng.hpp"

namespace gait::sim {

std::string_view to_string(RecordKind k) {
  switch (k) {
    case RecordKind::leg: return "leg";
    case RecordKind::dwell_fire: return "dwell_fire";
    case RecordKind::line_pass: return "line_pass";
    case RecordKind::dither: return "dither";
  }
  throw Error("unreachable record kind");
}

void SimScenario::validate() const {
  if (home_id.empty()) throw Error("scenario needs a home_id");
  if (rooms.empty()) throw Error("scenario needs at least one room");
  std::map<std::string, const RoomSpec*> by_name;
  for (const auto& r : rooms) {
    if (r.name.empty()) throw Error("room with empty name");
    if (!by_name.emplace(r.name, &r).second)
      throw Error("duplicate room '" + r.name + "'");
    if (!(r.dwell_min_s >= 0) || !(r.dwell_mean_s >= r.dwell_min_s))
      throw Error("room '" + r.name + "' has an inconsistent dwell model");
    if (!(r.burst_rate_hz >= 0))
      throw Error("room '" + r.name + "' has a negative burst rate");
  }
  for (const auto& e : edges) {
    if (!by_name.count(e.a) || !by_name.count(e.b))
      throw Error("edge references unknown room '" + e.a + "'-'" + e.b + "'");
    if (e.a == e.b) throw Error("self-loop edge on '" + e.a + "'");
    if (!(e.distance_cm > 0)) throw Error("edge distance must be positive");
  }
  for (const auto& [from, row] : routing) {
    if (!by_name.count(from))
      throw Error("routing row for unknown room '" + from + "'");
    double sum = 0;
    for (const auto& [to, p] : row) {
      if (!by_name.count(to))
        throw Error("routing to unknown room '" + to + "'");
      if (to == from) throw Error("routing row of '" + from + "' targets itself");
      if (!(p >= 0)) throw Error("negative routing probability");
      sum += p;
    }
    if (!row.empty() && std::fabs(sum - 1.0) > 1e-9)
      throw Error("routing probabilities of '" + from + "' sum to " +
                  std::to_string(sum) + ", expected 1");
  }
  if (rooms.size() > 1) {
    for (const auto& r : rooms)
      if (!routing.count(r.name) || routing.at(r.name).empty())
        throw Error("room '" + r.name + "' has no routing row");
  }
  if (!line_room.empty() && !by_name.count(line_room))
    throw Error("line_room '" + line_room + "' is not a room");
  if (line_sensors < 2) throw Error("sensor line needs at least 2 sensors");
  if (!(line_spacing_cm > 0)) throw Error("line spacing must be positive");
  if (!(refractory_s >= 0)) throw Error("refractory must be nonnegative");
  if (!(latency_max_s >= 0)) throw Error("latency must be nonnegative");
  if (!(exit_fire_prob >= 0 && exit_fire_prob <= 1))
    throw Error("exit_fire_prob must be a probability");
  if (!(dither_prob >= 0 && dither_prob <= 1))
    throw Error("dither_prob must be a probability");
  if (!(speed.base_cm_s > 0)) throw Error("base speed must be positive");
}

namespace {

constexpr std::int64_t kUsPerDay = std::int64_t(86'400) * 1'000'000;

std::int64_t to_us(double seconds) { return std::llround(seconds * 1e6); }

struct Graph {
  std::vector<std::string> names;
  std::map<std::string, int> index;
  std::vector<std::vector<std::pair<int, double>>> adj;  // (room, distance)

  explicit Graph(const SimScenario& sc) {
    for (const auto& r : sc.rooms) {
      index.emplace(r.name, int(names.size()));
      names.push_back(r.name);
    }
    adj.resize(names.size());
    for (const auto& e : sc.edges) {
      int a = index.at(e.a), b = index.at(e.b);
      adj[std::size_t(a)].emplace_back(b, e.distance_cm);
      adj[std::size_t(b)].emplace_back(a, e.distance_cm);
    }
    for (auto& nbrs : adj) std::sort(nbrs.begin(), nbrs.end());
  }

  // Fewest-hop path, deterministic tie-break by room index.
  std::vector<int> path(int from, int to) const {
    std::vector<int> prev(names.size(), -1);
    std::deque<int> queue{from};
    prev[std::size_t(from)] = from;
    while (!queue.empty()) {
      int r = queue.front();
      queue.pop_front();
      if (r == to) break;
      for (auto [n, dist] : adj[std::size_t(r)]) {
        if (prev[std::size_t(n)] == -1) {
          prev[std::size_t(n)] = r;
          queue.push_back(n);
        }
      }
    }
    if (prev[std::size_t(to)] == -1)
      throw Error("floor plan is disconnected: no path to '" +
                  names[std::size_t(to)] + "'");
    std::vector<int> p{to};
    while (p.back() != from) p.push_back(prev[std::size_t(p.back())]);
    std::reverse(p.begin(), p.end());
    return p;
  }

  double distance(int a, int b) const {
    for (auto [n, d] : adj[std::size_t(a)])
      if (n == b) return d;
    throw Error("rooms are not adjacent");
  }
};

struct Simulation {
  const SimScenario& sc;
  Graph graph;
  Rng rng;
  std::int64_t refractory_ms;
  std::int64_t epoch_ms0;

  std::vector<SensorEvent> events;
  SimTruthLog truth;

  // one area sensor per room, then the line sensors
  std::vector<std::string> area_sensor;
  std::vector<std::string> line_sensor;
  std::vector<std::int64_t> last_fire_ms;  // indexed by sensor slot
  int line_base;

  int cur_room;
  bool visit_fired = false;          // current visit produced an area firing
  std::int64_t visit_last_ms = 0;    // time of the latest such firing

  explicit Simulation(const SimScenario& scenario)
      : sc(scenario),
        graph(scenario),
        rng(scenario.seed),
        refractory_ms(std::llround(scenario.refractory_s * 1000.0)),
        epoch_ms0(std::int64_t(scenario.start_date.days) * 86'400'000 -
                  std::int64_t(scenario.utc_offset_minutes) * 60'000) {
    for (const auto& name : graph.names) area_sensor.push_back("pir-" + name);
    for (int i = 0; i < sc.line_sensors; ++i)
      line_sensor.push_back("line-" + std::to_string(i));
    line_base = int(graph.names.size());
    last_fire_ms.assign(graph.names.size() + std::size_t(sc.line_sensors),
                        std::numeric_limits<std::int64_t>::min() / 2);
    cur_room = start_room();
  }

  int start_room() const {
    auto it = graph.index.find("bedroom");
    return it != graph.index.end() ? it->second : 0;
  }

  std::int64_t event_ms(std::int64_t t_us) const { return (t_us + 500) / 1000; }

  // Applies trigger latency and the refractory gate; returns the emitted
  // millisecond or nothing if suppressed. The latency draw happens either
  // way so suppression does not shift the random stream.
  std::optional<std::int64_t> attempt(int slot, std::int64_t t_us) {
    std::int64_t lat_us = to_us(rng.uniform(0.0, sc.latency_max_s));
    std::int64_t ms = event_ms(t_us + lat_us);
    if (ms - last_fire_ms[std::size_t(slot)] < refractory_ms) return std::nullopt;
    last_fire_ms[std::size_t(slot)] = ms;
    return ms;
  }

  void emit(int slot, std::int64_t ms, std::size_t rec) {
    SensorEvent e;
    e.timestamp = Timestamp{epoch_ms0 + ms};
    if (slot < line_base) {
      e.sensor_id = area_sensor[std::size_t(slot)];
      e.room = graph.names[std::size_t(slot)];
      e.kind = SensorKind::area_motion;
    } else {
      e.sensor_id = line_sensor[std::size_t(slot - line_base)];
      e.room = sc.line_room;
      e.kind = SensorKind::line_segment;
      e.segment = slot - line_base;
    }
    events.push_back(e);
    truth.firing_source[{e.sensor_id, e.timestamp.epoch_ms}] = rec;
    truth.records[rec].n_firings++;
  }

  bool fire_area(int room, std::int64_t t_us, std::size_t rec) {
    auto ms = attempt(room, t_us);
    if (!ms) return false;
    emit(room, *ms, rec);
    if (room == cur_room) {
      visit_fired = true;
      visit_last_ms = *ms;
    }
    return true;
  }

  void line_pass(std::int64_t t_us, double speed, bool forward, int walk_id) {
    TruthRecord rec;
    rec.kind = RecordKind::line_pass;
    rec.walk_id = walk_id;
    rec.from_room = sc.line_room;
    rec.time = Timestamp{epoch_ms0 + event_ms(t_us)};
    rec.speed_cm_s = speed;
    rec.forward = forward;
    truth.records.push_back(rec);
    std::size_t idx = truth.records.size() - 1;

    double gap_s = sc.line_spacing_cm / speed;
    for (int k = 0; k < sc.line_sensors; ++k) {
      int seg = forward ? k : sc.line_sensors - 1 - k;
      std::int64_t tk = t_us + to_us(double(k) * gap_s);
      auto ms = attempt(line_base + seg, tk);
      if (ms) emit(line_base + seg, *ms, idx);
    }
  }

  // Dwell bursts on [from_us, until_us); returns nothing, records fires.
  void bursts(std::int64_t from_us, std::int64_t until_us) {
    double rate = sc.rooms[std::size_t(cur_room)].burst_rate_hz;
    if (rate <= 0) return;
    std::int64_t t = from_us;
    while (true) {
      t += to_us(rng.exponential(1.0 / rate));
      if (t >= until_us) return;
      auto ms = attempt(cur_room, t);
      if (ms) {
        TruthRecord rec;
        rec.kind = RecordKind::dwell_fire;
        rec.from_room = graph.names[std::size_t(cur_room)];
        rec.time = Timestamp{epoch_ms0 + *ms};
        truth.records.push_back(rec);
        emit(cur_room, *ms, truth.records.size() - 1);
        visit_fired = true;
        visit_last_ms = *ms;
      }
    }
  }

  int draw_destination() {
    auto it = sc.routing.find(graph.names[std::size_t(cur_room)]);
    if (it == sc.routing.end() || it->second.empty()) return -1;
    double u = rng.uniform01();
    double acc = 0;
    int last = -1;
    for (const auto& [name, p] : it->second) {
      acc += p;
      last = graph.index.at(name);
      if (u < acc) return last;
    }
    return last;  // guard against accumulated rounding
  }

  double walk_speed(int day, double day_factor, std::int64_t t_us, bool rush) {
    double jitter = std::exp(sc.speed.walk_sigma * rng.normal());
    // Urgency overrides the habitual pace: a hurried walk does not carry
    // the diurnal or day-to-day gait state.
    if (rush) return sc.speed.base_cm_s * sc.speed.rush_multiplier * jitter;
    double hour = double(t_us - std::int64_t(day) * kUsPerDay) / 3.6e9;
    double diurnal = 1.0 + sc.speed.diurnal_amplitude *
                               std::cos(2.0 * std::numbers::pi * (hour - 13.0) / 24.0);
    return sc.speed.base_cm_s * jitter * diurnal * day_factor;
  }

  // Boundary hover: while dwelling near a doorway both PIR fields catch the
  // resident, so the two sensors alternate at their refractory limits. The
  // extractor later reads those alternations as very short transitions in
  // both directions, none of which reflect a real walk.
  void dither(std::int64_t from_us, std::int64_t until_us) {
    if (sc.dither_prob <= 0) return;
    double span_s = double(until_us - from_us) / 1e6;
    if (span_s < 90) return;  // only unhurried dwells leave boundary time
    for (auto [nb, dist] : graph.adj[std::size_t(cur_room)]) {
      if (rng.uniform01() >= sc.dither_prob) continue;
      std::int64_t start = from_us + to_us(rng.uniform(10.0, span_s - 70.0));

      TruthRecord rec;
      rec.kind = RecordKind::dither;
      rec.from_room = graph.names[std::size_t(cur_room)];
      rec.to_room = graph.names[std::size_t(nb)];
      rec.time = Timestamp{epoch_ms0 + event_ms(start)};
      truth.records.push_back(rec);
      std::size_t idx = truth.records.size() - 1;

      int alternations = 1 + int(rng.below(2));
      std::int64_t t = start;
      for (int i = 0; i < alternations; ++i) {
        if (auto ms = attempt(cur_room, t)) {
          emit(cur_room, *ms, idx);
          visit_fired = true;
          visit_last_ms = *ms;
        }
        std::int64_t s = t + to_us(rng.uniform(0.8, 3.5));
        if (auto ms = attempt(nb, s)) emit(nb, *ms, idx);
        t += to_us(6.0 + rng.uniform(0.2, 2.0));
      }
    }
  }

  void run(int days) {
    double z = 0;
    double phase = rng.uniform(0.0, sc.speed.seasonal_period_days);
    double step_sigma =
        sc.speed.drift_sigma *
        std::sqrt(std::max(0.0, 1.0 - sc.speed.drift_phi * sc.speed.drift_phi));
    int walk_id = 0;

    for (int day = 0; day < days; ++day) {
      z = day == 0 ? rng.normal(0.0, sc.speed.drift_sigma)
                   : sc.speed.drift_phi * z + rng.normal(0.0, step_sigma);
      double seasonal = sc.speed.seasonal_amplitude *
                        std::sin(2.0 * std::numbers::pi * (double(day) + phase) /
                                 sc.speed.seasonal_period_days);
      double day_factor = std::exp(z + seasonal);

      std::int64_t day0 = std::int64_t(day) * kUsPerDay;
      std::int64_t t = day0 + to_us(6.5 * 3600.0 + rng.uniform(0.0, 2700.0));
      std::int64_t sleep = day0 + to_us(21.5 * 3600.0 - rng.uniform(0.0, 2700.0));

      // Waking up counts as motion in the overnight room.
      fire_area(cur_room, t, wake_record(t));

      while (true) {
        const auto& room = sc.rooms[std::size_t(cur_room)];
        double dwell_s =
            room.dwell_min_s + rng.exponential(std::max(
                                   0.0, room.dwell_mean_s - room.dwell_min_s));
        std::int64_t dwell_end = t + to_us(dwell_s);
        if (dwell_end >= sleep) {
          dither(t, sleep);
          bursts(t, sleep);
          break;
        }
        dither(t, dwell_end);
        bursts(t, dwell_end);
        t = dwell_end;

        int dest = draw_destination();
        if (dest < 0) {
          // Single-room home: keep dwelling until bedtime.
          continue;
        }

        bool rush = !sc.rush_room.empty() &&
                    graph.names[std::size_t(dest)] == sc.rush_room &&
                    rng.uniform01() < sc.speed.rush_prob;
        double v = walk_speed(day, day_factor, t, rush);
        auto route = graph.path(cur_room, dest);
        ++walk_id;

        for (std::size_t i = 0; i + 1 < route.size(); ++i) {
          int a = route[i], b = route[i + 1];
          bool pass_through = i > 0;
          std::int64_t depart = t;

          TruthRecord rec;
          rec.kind = RecordKind::leg;
          rec.walk_id = walk_id;
          rec.from_room = graph.names[std::size_t(a)];
          rec.to_room = graph.names[std::size_t(b)];
          rec.time = Timestamp{epoch_ms0 + event_ms(depart)};
          rec.speed_cm_s = v;
          truth.records.push_back(rec);
          std::size_t idx = truth.records.size() - 1;

          bool from_fire_at_depart;
          if (pass_through) {
            from_fire_at_depart = visit_fired;
          } else {
            from_fire_at_depart =
                rng.uniform01() < sc.exit_fire_prob && fire_area(a, depart, idx);
          }
          bool from_fired = visit_fired;
          std::int64_t from_last = visit_last_ms;

          if (a == line_base_room()) line_pass(depart, v, false, walk_id);

          double transit_s = graph.distance(a, b) / v;
          std::int64_t arrive = depart + to_us(transit_s);

          cur_room = b;
          visit_fired = false;
          visit_last_ms = 0;
          bool arrived_fired = fire_area(b, arrive, idx);

          if (b == line_base_room()) line_pass(arrive, v, true, walk_id);

          auto& r = truth.records[idx];
          r.transit_s = transit_s;
          if (arrived_fired && from_fired)
            r.measured_ms = visit_last_ms - from_last;
          r.clean = arrived_fired && from_fire_at_depart;

          t = arrive;
        }
      }
    }
  }

  int line_base_room() const {
    auto it = graph.index.find(sc.line_room);
    return it == graph.index.end() ? -1 : it->second;
  }

  // Morning wake-up firing needs a truth record to trace to.
  std::size_t wake_record(std::int64_t t_us) {
    TruthRecord rec;
    rec.kind = RecordKind::dwell_fire;
    rec.from_room = graph.names[std::size_t(cur_room)];
    rec.time = Timestamp{epoch_ms0 + event_ms(t_us)};
    truth.records.push_back(rec);
    return truth.records.size() - 1;
  }
};

}  // namespace

SimResult simulate(const SimScenario& scenario, int days) {
  if (days < 1) throw Error("simulate needs days >= 1");
  scenario.validate();
  Simulation sim(scenario);
  sim.run(days);

  SimResult result;
  result.truth = std::move(sim.truth);
  result.events = EventStream(scenario.home_id, scenario.utc_offset_minutes,
                              std::move(sim.events));
  return result;
}

std::string truth_to_csv(const SimTruthLog& log, int utc_offset_minutes) {
  std::string out(
      "record,walk_id,timestamp,from_room,to_room,speed_cm_s,transit_s,"
      "measured_ms,clean,forward,n_firings\n");
  for (const auto& r : log.records) {
    out += to_string(r.kind);
    out += ',';
    out += std::to_string(r.walk_id);
    out += ',';
    out += format_timestamp(r.time, utc_offset_minutes);
    out += ',';
    out += r.from_room;
    out += ',';
    out += r.to_room;
    out += ',';
    out += csv::format_double(r.speed_cm_s);
    out += ',';
    out += csv::format_double(r.transit_s);
    out += ',';
    out += std::to_string(r.measured_ms);
    out += ',';
    out += r.clean ? '1' : '0';
    out += ',';
    out += r.forward ? '1' : '0';
    out += ',';
    out += std::to_string(r.n_firings);
    out += '\n';
  }
  return out;
}

namespace {

struct RoomDefaults {
  const char* name;
  double weight;        // destination attraction among the spoke rooms
  double dwell_mean_s;
  double dwell_min_s;
};

// Hub-and-spoke apartment: every room opens directly onto the central
// living area, as in the single-resident flats the cohort lives in, and
// every walk is a one-hop trip to or from the hub. That keeps pass-through
// legs out of the data entirely: every transition carries the departure
// room's dwell excess unless the exit itself fired. The first n entries
// form an n-room home. "den" hosts the sensor line; its small visit weight
// keeps line traffic sparse, and hurried bathroom walks never enter it.
constexpr RoomDefaults kRoomTable[] = {
    {"living", 0.0, 240, 20},
    {"kitchen", 0.24, 420, 20},
    {"den", 0.035, 420, 20},
    {"bathroom", 0.17, 210, 15},
    {"bedroom", 0.05, 540, 20},
    {"entry", 0.05, 75, 10},
    {"office", 0.05, 600, 20},
    {"dining", 0.05, 420, 15},
    {"guest", 0.02, 300, 15},
    {"laundry", 0.03, 180, 10},
    {"pantry", 0.025, 60, 8},
    {"studio", 0.02, 480, 20},
    {"hallway", 0.02, 45, 8},
    {"closet", 0.015, 45, 8},
    {"porch", 0.02, 240, 15},
    {"garage", 0.02, 300, 15},
};

SimScenario build_home(const std::string& home_id, int n_rooms,
                       double base_speed, double dwell_scale,
                       double distance_lo, double distance_hi, Rng& rng,
                       std::uint64_t sim_seed) {
  SimScenario sc;
  sc.home_id = home_id;
  sc.seed = sim_seed;

  n_rooms = std::clamp(n_rooms, 3, 16);
  std::vector<RoomDefaults> picked(std::begin(kRoomTable),
                                   std::begin(kRoomTable) + n_rooms);
  sc.line_room = "den";

  for (const auto& rd : picked) {
    RoomSpec room;
    room.name = rd.name;
    room.dwell_min_s = rd.dwell_min_s;
    room.dwell_mean_s = std::max(rd.dwell_min_s, rd.dwell_mean_s * dwell_scale);
    room.burst_rate_hz = 1.0 / 90.0;
    sc.rooms.push_back(room);
    if (rd.name != std::string_view("living"))
      sc.edges.push_back(
          {rd.name, "living", rng.uniform(distance_lo, distance_hi)});
  }

  // From the hub the resident picks a spoke by weight; from a spoke the
  // only exit is back through the hub.
  double total = 0;
  for (const auto& rd : picked) total += rd.weight;
  for (const auto& rd : picked) {
    if (rd.name == std::string_view("living")) continue;
    sc.routing["living"][rd.name] = rd.weight / total;
    sc.routing[rd.name]["living"] = 1.0;
  }

  sc.speed.base_cm_s = base_speed;
  return sc;
}

}  // namespace

SimScenario SimScenario::default_scenario(std::uint64_t seed) {
  Rng rng(derive_seed(seed, hash_string("default-scenario")));
  SimScenario sc = build_home("home-000", 6, 55.0, 1.7, 450, 720, rng,
                              derive_seed(seed, hash_string("default-sim")));
  return sc;
}

std::vector<SimScenario> cohort(int scenarios, std::uint64_t base_seed) {
  if (scenarios < 1) throw Error("cohort needs at least one scenario");
  std::vector<SimScenario> out;
  out.reserve(std::size_t(scenarios));
  for (int i = 0; i < scenarios; ++i) {
    Rng rng(derive_seed(base_seed, std::uint64_t(i) * 2 + 1));
    char id[16];
    std::snprintf(id, sizeof id, "home-%03d", i);

    int n_rooms = int(std::lround(rng.normal(5.7, 2.2)));

    // Slow / medium / fast mix tuned so cleaned walk velocities pool to a
    // cohort mean near 55.3 cm/s with a wide spread.
    double u = rng.uniform01();
    double base;
    if (u < 0.55)
      base = rng.uniform(24, 42);
    else if (u < 0.89)
      base = rng.uniform(62, 92);
    else
      base = rng.uniform(92, 116);

    double dwell_scale = 1.7 * rng.uniform(0.85, 1.15);
    SimScenario sc =
        build_home(id, n_rooms, base, dwell_scale, 430, 760, rng,
                   derive_seed(base_seed, std::uint64_t(i) * 2 + 2));
    out.push_back(std::move(sc));
  }
  return out;
}

std::string SimScenario::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "gait-sim-scenario";
  j["version"] = 1;
  j["home_id"] = home_id;
  j["rooms"] = nlohmann::ordered_json::array();
  for (const auto& r : rooms)
    j["rooms"].push_back({{"name", r.name},
                          {"dwell_min_s", r.dwell_min_s},
                          {"dwell_mean_s", r.dwell_mean_s},
                          {"burst_rate_hz", r.burst_rate_hz}});
  j["edges"] = nlohmann::ordered_json::array();
  for (const auto& e : edges)
    j["edges"].push_back({{"a", e.a}, {"b", e.b}, {"distance_cm", e.distance_cm}});
  j["routing"] = routing;
  j["line_room"] = line_room;
  j["line_spacing_cm"] = line_spacing_cm;
  j["line_sensors"] = line_sensors;
  j["refractory_s"] = refractory_s;
  j["latency_max_s"] = latency_max_s;
  j["exit_fire_prob"] = exit_fire_prob;
  j["dither_prob"] = dither_prob;
  j["rush_room"] = rush_room;
  j["speed"] = {{"base_cm_s", speed.base_cm_s},
                {"walk_sigma", speed.walk_sigma},
                {"rush_prob", speed.rush_prob},
                {"rush_multiplier", speed.rush_multiplier},
                {"diurnal_amplitude", speed.diurnal_amplitude},
                {"drift_phi", speed.drift_phi},
                {"drift_sigma", speed.drift_sigma},
                {"seasonal_amplitude", speed.seasonal_amplitude},
                {"seasonal_period_days", speed.seasonal_period_days}};
  j["utc_offset_minutes"] = utc_offset_minutes;
  j["start_date"] = format_date(start_date);
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

SimScenario SimScenario::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad scenario JSON: ") + e.what());
  }
  try {
    if (j.at("format") != "gait-sim-scenario")
      throw Error("not a scenario document");
    if (j.at("version") != 1) throw Error("unsupported scenario version");
    SimScenario sc;
    sc.home_id = j.at("home_id").get<std::string>();
    for (const auto& r : j.at("rooms")) {
      RoomSpec room;
      room.name = r.at("name").get<std::string>();
      room.dwell_min_s = r.at("dwell_min_s").get<double>();
      room.dwell_mean_s = r.at("dwell_mean_s").get<double>();
      room.burst_rate_hz = r.at("burst_rate_hz").get<double>();
      sc.rooms.push_back(std::move(room));
    }
    for (const auto& e : j.at("edges"))
      sc.edges.push_back({e.at("a").get<std::string>(),
                          e.at("b").get<std::string>(),
                          e.at("distance_cm").get<double>()});
    sc.routing = j.at("routing")
                     .get<std::map<std::string, std::map<std::string, double>>>();
    sc.line_room = j.at("line_room").get<std::string>();
    sc.line_spacing_cm = j.at("line_spacing_cm").get<double>();
    sc.line_sensors = j.at("line_sensors").get<int>();
    sc.refractory_s = j.at("refractory_s").get<double>();
    sc.latency_max_s = j.at("latency_max_s").get<double>();
    sc.exit_fire_prob = j.at("exit_fire_prob").get<double>();
    sc.dither_prob = j.at("dither_prob").get<double>();
    sc.rush_room = j.at("rush_room").get<std::string>();
    const auto& s = j.at("speed");
    sc.speed.base_cm_s = s.at("base_cm_s").get<double>();
    sc.speed.walk_sigma = s.at("walk_sigma").get<double>();
    sc.speed.rush_prob = s.at("rush_prob").get<double>();
    sc.speed.rush_multiplier = s.at("rush_multiplier").get<double>();
    sc.speed.diurnal_amplitude = s.at("diurnal_amplitude").get<double>();
    sc.speed.drift_phi = s.at("drift_phi").get<double>();
    sc.speed.drift_sigma = s.at("drift_sigma").get<double>();
    sc.speed.seasonal_amplitude = s.at("seasonal_amplitude").get<double>();
    sc.speed.seasonal_period_days = s.at("seasonal_period_days").get<double>();
    sc.utc_offset_minutes = j.at("utc_offset_minutes").get<int>();
    sc.start_date = parse_date(j.at("start_date").get<std::string>());
    sc.seed = j.at("seed").get<std::uint64_t>();
    sc.validate();
    return sc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("bad scenario JSON: ") + e.what());
  }
}

}  // namespace gait::sim
