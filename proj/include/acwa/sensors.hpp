#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "acwa/chemistry.hpp"
#include "acwa/constants.hpp"
#include "acwa/engine.hpp"
#include "acwa/errors.hpp"
#include "acwa/rng.hpp"
#include "acwa/scenario.hpp"
#include "acwa/scenario_io.hpp"

// Sensor emulation: maps simulation records onto gateway-style sensor
// records at the hardware's reporting cadences (1, 5, or 30 seconds).
//
// Each binding describes one sensor: which tank or pipe it watches, which
// quantities it reports under which field names, the unit conversion, and an
// optional Gaussian noise floor per field. Every sensor draws noise from its
// own deterministic substream of the run seed, so adding, removing, or
// reordering other sensors never changes its readings.
//
// Synthetic telemetry mirrors the radio fields a detector would plausibly
// consume: a battery voltage decaying linearly from 3.29 V, a per-sensor
// monotone counter, and a fixed RSSI. Electrical conductivity and turbidity
// have no governing model in the simulator; they are exposed as placeholder
// selectors reporting a configured constant (plus noise) so dataset schemas
// can match the physical testbed's.

namespace acwa {

// One reported field of a sensor.
struct FieldBinding {
  std::string selector;  // water_level | pressure | flow | temperature | ph |
                         // do | do_saturation | nitrate | ec_placeholder |
                         // turbidity_placeholder
  std::string name;      // output field name, e.g. "sensor_data.pH"
  std::string conversion = "none";  // none | m3s_to_gal_min | pa_to_psi | m_to_in
  double noise_sigma = 0.0;  // Gaussian noise floor, in output units
  double constant = 0.0;     // value for the placeholder selectors
};

struct SensorBinding {
  std::string sensor_id;    // unique; also names the noise substream
  std::string sensor_name;
  int sensor_type = 0;      // numeric type code carried into the records
  std::string node;         // tank id, for tank-bound selectors
  std::string link;         // "source->destination", for flow
  int interval = 5;         // seconds between samples: 1, 5, or 30
  std::vector<FieldBinding> fields;
};

struct BindingSet {
  // Epoch milliseconds of simulation t = 0; record timestamps are
  // t0_epoch_ms + 1000 t.
  long long t0_epoch_ms = 1694897752000LL;
  std::vector<SensorBinding> sensors;
};

// One emitted sensor sample.
struct SensorRecord {
  std::string sensor_id;
  std::string sensor_name;
  int sensor_type = 0;
  long long timestamp_ms = 0;
  long long counter = 0;      // strictly increasing per sensor
  double battery = 0.0;       // [V]
  double battery_percent = 0.0;
  int rssi = 0;
  std::vector<std::pair<std::string, double>> values;  // field name -> value
  bool attacked = false;      // ground-truth label

  double* find(const std::string& field) {
    for (auto& kv : values) {
      if (kv.first == field) return &kv.second;
    }
    return nullptr;
  }
  const double* find(const std::string& field) const {
    return const_cast<SensorRecord*>(this)->find(field);
  }
};

namespace detail_sensor {

inline constexpr double BATTERY_FULL_V = 3.29;
inline constexpr double BATTERY_SCALE_V = 3.302;   // voltage read as 100%
inline constexpr double BATTERY_DECAY_V_PER_S = 1e-6;
inline constexpr int FIXED_RSSI = 40;

inline double convert(double v, const std::string& conversion,
                      const std::string& sensor_id) {
  if (conversion == "none") return v;
  if (conversion == "m3s_to_gal_min") return v * GAL_PER_M3 * 60.0;
  if (conversion == "pa_to_psi") return v / PA_PER_PSI;
  if (conversion == "m_to_in") return v / M_PER_INCH;
  throw ValidationError("sensor '" + sensor_id + "': unknown conversion '" +
                        conversion + "'");
}

}  // namespace detail_sensor

// Check one binding against a scenario and return the node or link index it
// reads. Throws naming the sensor and selector on any mismatch.
struct ResolvedBinding {
  int node = -1;
  int link = -1;
};

inline ResolvedBinding resolve_binding(const Scenario& s,
                                       const SensorBinding& b) {
  if (b.sensor_id.empty()) {
    throw ValidationError("sensor binding without a sensor_id");
  }
  if (b.interval != 1 && b.interval != 5 && b.interval != 30) {
    throw ValidationError("sensor '" + b.sensor_id +
                          "': interval must be 1, 5, or 30 s");
  }
  if (b.fields.empty()) {
    throw ValidationError("sensor '" + b.sensor_id + "' reports no fields");
  }
  ResolvedBinding r;
  bool needs_node = false;
  bool needs_link = false;
  for (const FieldBinding& f : b.fields) {
    if (f.selector == "flow") {
      needs_link = true;
    } else if (f.selector == "water_level" || f.selector == "pressure" ||
               f.selector == "temperature" || f.selector == "ph" ||
               f.selector == "do" || f.selector == "do_saturation" ||
               f.selector == "nitrate" || f.selector == "ec_placeholder" ||
               f.selector == "turbidity_placeholder") {
      needs_node = true;
    } else {
      throw ValidationError("sensor '" + b.sensor_id +
                            "': unknown selector '" + f.selector + "'");
    }
    if (f.name.empty()) {
      throw ValidationError("sensor '" + b.sensor_id +
                            "': field with selector '" + f.selector +
                            "' has no output name");
    }
  }
  if (needs_node) {
    r.node = s.node_index(b.node);
    if (r.node < 0) {
      throw ValidationError("sensor '" + b.sensor_id +
                            "': node '" + b.node + "' does not exist");
    }
  }
  if (needs_link) {
    for (std::size_t k = 0; k < s.links.size(); ++k) {
      if (s.links[k].label() == b.link) r.link = static_cast<int>(k);
    }
    if (r.link < 0) {
      throw ValidationError("sensor '" + b.sensor_id + "': selector 'flow' "
                            "needs a link, and '" + b.link +
                            "' does not name one");
    }
  }
  return r;
}

namespace detail_sensor {

inline double select(const SimRecord& rec, const FieldBinding& f,
                     const ResolvedBinding& rb) {
  if (f.selector == "flow") return rec.links[rb.link].flow;
  const NodeSample& n = rec.nodes[rb.node];
  if (f.selector == "water_level") return n.level;
  if (f.selector == "pressure") return n.pressure;
  if (f.selector == "temperature") return n.water.temperature;
  if (f.selector == "ph") return n.water.ph;
  if (f.selector == "do") return n.water.dissolved_oxygen;
  if (f.selector == "do_saturation") return do_saturation(n.water.temperature);
  if (f.selector == "nitrate") return n.water.nitrate;
  // ec_placeholder / turbidity_placeholder
  return f.constant;
}

}  // namespace detail_sensor

// Emit the full sensor stream for a run. Records are interleaved in time
// order (binding order breaks ties), exactly as a gateway would forward
// them. Deterministic given (records, bindings, seed).
inline std::vector<SensorRecord> emit(const Scenario& s,
                                      const std::vector<SimRecord>& records,
                                      const BindingSet& bindings,
                                      std::uint64_t seed) {
  if (records.empty()) throw ValidationError("emit: no simulation records");
  std::vector<ResolvedBinding> resolved;
  resolved.reserve(bindings.sensors.size());
  for (const SensorBinding& b : bindings.sensors) {
    resolved.push_back(resolve_binding(s, b));
  }

  // The simulation grid: records sit at i * time_step.
  const double dt = s.time_step;
  const auto record_at = [&](double t) -> const SimRecord& {
    const double idx = t / dt;
    const long i = std::lround(idx);
    if (std::fabs(idx - i) > 1e-9 || i < 0 ||
        i >= static_cast<long>(records.size())) {
      throw ValidationError("emit: no simulation record at t = " +
                            detail_validate::num(t) + " s");
    }
    return records[static_cast<std::size_t>(i)];
  };

  struct Cursor {
    GaussianRng rng;
    long long counter = 0;
  };
  std::vector<Cursor> cursors;
  cursors.reserve(bindings.sensors.size());
  for (const SensorBinding& b : bindings.sensors) {
    cursors.push_back(Cursor{GaussianRng(substream_seed(seed, b.sensor_id)), 0});
  }

  const double duration = records.back().time;
  std::vector<SensorRecord> out;
  for (long t = 0; t <= std::lround(duration); ++t) {
    for (std::size_t k = 0; k < bindings.sensors.size(); ++k) {
      const SensorBinding& b = bindings.sensors[k];
      if (t % b.interval != 0) continue;
      const SimRecord& rec = record_at(static_cast<double>(t));
      SensorRecord sr;
      sr.sensor_id = b.sensor_id;
      sr.sensor_name = b.sensor_name;
      sr.sensor_type = b.sensor_type;
      sr.timestamp_ms = bindings.t0_epoch_ms + 1000LL * t;
      sr.counter = ++cursors[k].counter;
      sr.battery = detail_sensor::BATTERY_FULL_V -
                   detail_sensor::BATTERY_DECAY_V_PER_S * t;
      sr.battery_percent =
          100.0 * sr.battery / detail_sensor::BATTERY_SCALE_V;
      sr.rssi = detail_sensor::FIXED_RSSI;
      sr.values.reserve(b.fields.size());
      for (const FieldBinding& f : b.fields) {
        double v = detail_sensor::select(rec, f, resolved[k]);
        v = detail_sensor::convert(v, f.conversion, b.sensor_id);
        if (f.noise_sigma > 0.0) {
          v += f.noise_sigma * cursors[k].rng.normal();
        }
        sr.values.emplace_back(f.name, v);
      }
      out.push_back(std::move(sr));
    }
  }
  return out;
}

// ---- bindings file I/O --------------------------------------------------

inline BindingSet parse_bindings(const ojson& doc) {
  using detail_io::get_number;
  if (!doc.is_object()) throw ValidationError("bindings: root must be an object");
  detail_io::require_keys(doc, "bindings", {"t0_epoch_ms", "sensors"});
  BindingSet set;
  if (doc.contains("t0_epoch_ms")) {
    set.t0_epoch_ms = static_cast<long long>(
        get_number(doc["t0_epoch_ms"], "t0_epoch_ms"));
  }
  if (!doc.contains("sensors") || !doc["sensors"].is_array()) {
    throw ValidationError("bindings: 'sensors' must be an array");
  }
  for (const auto& js : doc["sensors"]) {
    detail_io::require_keys(js, "bindings sensor",
                            {"sensor_id", "sensor_name", "sensor_type", "node",
                             "link", "interval", "fields"});
    SensorBinding b;
    if (!js.contains("sensor_id")) {
      throw ValidationError("bindings: sensor without 'sensor_id'");
    }
    b.sensor_id = js["sensor_id"].get<std::string>();
    const std::string where = "sensor '" + b.sensor_id + "'";
    if (js.contains("sensor_name")) {
      b.sensor_name = js["sensor_name"].get<std::string>();
    }
    if (js.contains("sensor_type")) {
      b.sensor_type =
          static_cast<int>(get_number(js["sensor_type"], where + " sensor_type"));
    }
    if (js.contains("node")) b.node = js["node"].get<std::string>();
    if (js.contains("link")) b.link = js["link"].get<std::string>();
    if (js.contains("interval")) {
      b.interval =
          static_cast<int>(get_number(js["interval"], where + " interval"));
    }
    if (!js.contains("fields") || !js["fields"].is_array()) {
      throw ValidationError(where + ": 'fields' must be an array");
    }
    for (const auto& jf : js["fields"]) {
      detail_io::require_keys(
          jf, where + " field",
          {"selector", "name", "conversion", "noise_sigma", "constant"});
      FieldBinding f;
      if (!jf.contains("selector") || !jf.contains("name")) {
        throw ValidationError(where +
                              ": each field needs 'selector' and 'name'");
      }
      f.selector = jf["selector"].get<std::string>();
      f.name = jf["name"].get<std::string>();
      if (jf.contains("conversion")) {
        f.conversion = jf["conversion"].get<std::string>();
      }
      if (jf.contains("noise_sigma")) {
        f.noise_sigma = get_number(jf["noise_sigma"], where + " noise_sigma");
        if (f.noise_sigma < 0.0) {
          throw ValidationError(where + ": noise_sigma must be >= 0");
        }
      }
      if (jf.contains("constant")) {
        f.constant = get_number(jf["constant"], where + " constant");
      }
      b.fields.push_back(std::move(f));
    }
    set.sensors.push_back(std::move(b));
  }
  for (std::size_t i = 0; i < set.sensors.size(); ++i) {
    for (std::size_t j = i + 1; j < set.sensors.size(); ++j) {
      if (set.sensors[i].sensor_id == set.sensors[j].sensor_id) {
        throw ValidationError("bindings: duplicate sensor_id '" +
                              set.sensors[i].sensor_id + "'");
      }
    }
  }
  return set;
}

inline BindingSet load_bindings(const std::string& path) {
  const ojson doc = detail_io::read_json_file(path);  // path-prefixed errors
  try {
    return parse_bindings(doc);
  } catch (const ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

}  // namespace acwa
