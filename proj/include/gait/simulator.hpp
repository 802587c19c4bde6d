#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gait/event_model.hpp"
#include "gait/timeutil.hpp"

namespace gait::sim {

struct RoomSpec {
  std::string name;
  double dwell_min_s = 20;
  double dwell_mean_s = 300;      // shifted exponential: min + Exp(mean - min)
  double burst_rate_hz = 1.0 / 90.0;  // in-room puttering while dwelling
};

struct EdgeSpec {
  std::string a;
  std::string b;
  double distance_cm = 400;  // between the two sensors' fields of view
};

struct SpeedModel {
  double base_cm_s = 55;
  double walk_sigma = 0.06;        // lognormal spread per walk
  double rush_prob = 0.65;         // chance a walk to rush_room is hurried
  // Hurried walks move at base * rush_multiplier with per-walk jitter but
  // ignore the diurnal and day-to-day factors: urgency sets the pace, so
  // their durations carry no signal about that day's habitual gait.
  double rush_multiplier = 1.55;
  double diurnal_amplitude = 0.05; // midday peak, cosine over the day
  double drift_phi = 0.90;         // AR(1) day-to-day factor
  double drift_sigma = 0.06;       // stationary sd of the AR(1) log factor
  double seasonal_amplitude = 0.04;
  double seasonal_period_days = 120;
};

// A synthetic single-resident home. The floor plan is a connected graph;
// the resident alternates dwells and shortest-path walks between rooms.
// Every room has one area PIR sensor; line_room additionally hosts the
// restricted-field-of-view sensor line crossed on every entry and exit.
struct SimScenario {
  std::string home_id = "home-000";
  std::vector<RoomSpec> rooms;
  std::vector<EdgeSpec> edges;
  // routing[a][b]: probability that a walk leaving a heads for b.
  std::map<std::string, std::map<std::string, double>> routing;
  std::string line_room;
  double line_spacing_cm = 60.96;
  int line_sensors = 4;
  double refractory_s = 6.0;
  double latency_max_s = 0.2;   // per-firing trigger delay, uniform [0, max]
  double exit_fire_prob = 0.45; // chance the departing resident re-triggers
                                // the room sensor on the way out
  // PIR fields overlap at doorways. While dwelling, the resident sometimes
  // lingers at a boundary and both sensors fire alternately, producing
  // short spurious transitions in both directions. Probability is per
  // dwell and per adjacent doorway.
  double dither_prob = 0.06;
  std::string rush_room = "bathroom";
  SpeedModel speed;
  int utc_offset_minutes = -480;
  LocalDate start_date{14669};  // 2010-03-01
  std::uint64_t seed = 1;

  void validate() const;  // throws Error on inconsistent scenarios
  std::string to_json() const;
  static SimScenario from_json(std::string_view text);

  // Hand-tuned six-room home matching the calibration targets
  // (transitions per day and line walks per day).
  static SimScenario default_scenario(std::uint64_t seed);
};

enum class RecordKind { leg, dwell_fire, line_pass, dither };

std::string_view to_string(RecordKind k);

// One causal unit of simulated behavior; every emitted sensor event traces
// back to exactly one record.
struct TruthRecord {
  RecordKind kind = RecordKind::leg;
  int walk_id = -1;            // -1 for dwell_fire and dither records
  std::string from_room;       // leg: origin; dwell_fire/line_pass: the room
  std::string to_room;         // leg: destination; dither: the doorway room
  Timestamp time;              // leg: departure; others: first firing attempt
  double speed_cm_s = 0;       // leg and line_pass
  double transit_s = 0;        // leg: distance / speed
  std::int64_t measured_ms = -1;  // duration the pipeline can observe, or -1
  bool clean = false;          // leg: observed duration is pure transit
  bool forward = true;         // line_pass direction
  int n_firings = 0;           // events actually emitted (post refractory)
};

struct SimTruthLog {
  std::vector<TruthRecord> records;
  // (sensor_id, epoch_ms) of every emitted event -> index into records.
  std::map<std::pair<std::string, std::int64_t>, std::size_t> firing_source;
};

struct SimResult {
  EventStream events;
  SimTruthLog truth;
};

SimResult simulate(const SimScenario& scenario, int days);

// Deterministic family of homes: room counts clamped-normal around 5.7 in
// [3, 16], mixed slow/medium/fast base speeds calibrated so cleaned walk
// velocities pool to a cohort mean near 55.3 cm/s.
std::vector<SimScenario> cohort(int scenarios, std::uint64_t base_seed);

// CSV: record,walk_id,timestamp,from_room,to_room,speed_cm_s,transit_s,
//      measured_ms,clean,forward,n_firings
std::string truth_to_csv(const SimTruthLog& log, int utc_offset_minutes);

}  // namespace gait::sim
