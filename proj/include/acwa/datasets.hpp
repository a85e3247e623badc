#pragma once

#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "acwa/attacks.hpp"
#include "acwa/errors.hpp"
#include "acwa/scenario_io.hpp"
#include "acwa/sensors.hpp"

// Dataset serialization: JSONL and CSV views of a sensor stream, the
// clean/poisoned manifest, and atomic file writes.
//
// Both formats carry the same values: JSONL one object per record with the
// gateway's dotted field names verbatim, CSV one row per record over the
// union of all sensors' fields (cells a sensor does not report stay empty).
// Every record ends with a `label` field carrying the ground-truth attacked
// flag. Files are UTF-8 with LF line endings and are written to a temporary
// name then renamed, so a crash never leaves a partial artifact behind.

namespace acwa {

inline ojson sensor_record_json(const SensorRecord& r) {
  ojson j;
  j["sensor_id"] = r.sensor_id;
  j["sensor_name"] = r.sensor_name;
  j["sensor_type"] = r.sensor_type;
  j["timestamp"] = r.timestamp_ms;
  j["counter"] = r.counter;
  j["battery"] = r.battery;
  j["battery_percent"] = r.battery_percent;
  j["rssi"] = r.rssi;
  for (const auto& [name, value] : r.values) j[name] = value;
  j["label"] = r.attacked;
  return j;
}

inline std::string jsonl_line(const SensorRecord& r) {
  return sensor_record_json(r).dump();
}

inline void write_jsonl(std::ostream& os,
                        const std::vector<SensorRecord>& records) {
  for (const SensorRecord& r : records) os << jsonl_line(r) << "\n";
}

// CSV columns: fixed telemetry, then every reading name in binding order
// (first appearance wins), then the label.
inline std::vector<std::string> dataset_columns(const BindingSet& bindings) {
  std::vector<std::string> cols = {
      "sensor_id", "sensor_name", "sensor_type", "timestamp",
      "counter",   "battery",     "battery_percent", "rssi"};
  for (const SensorBinding& b : bindings.sensors) {
    for (const FieldBinding& f : b.fields) {
      bool seen = false;
      for (const std::string& c : cols) seen = seen || c == f.name;
      if (!seen) cols.push_back(f.name);
    }
  }
  cols.push_back("label");
  return cols;
}

namespace detail_dataset {

inline std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += "\"";
  return out;
}

}  // namespace detail_dataset

inline void write_csv(std::ostream& os,
                      const std::vector<SensorRecord>& records,
                      const BindingSet& bindings) {
  using detail_dataset::csv_escape;
  using detail_io::format_number;
  const std::vector<std::string> cols = dataset_columns(bindings);
  for (std::size_t i = 0; i < cols.size(); ++i) {
    os << (i ? "," : "") << csv_escape(cols[i]);
  }
  os << "\n";
  for (const SensorRecord& r : records) {
    os << csv_escape(r.sensor_id);
    os << "," << csv_escape(r.sensor_name);
    os << "," << r.sensor_type;
    os << "," << r.timestamp_ms;
    os << "," << r.counter;
    os << "," << format_number(r.battery);
    os << "," << format_number(r.battery_percent);
    os << "," << r.rssi;
    for (std::size_t c = 8; c + 1 < cols.size(); ++c) {
      const double* v = r.find(cols[c]);
      os << ",";
      if (v) os << format_number(*v);
    }
    os << "," << (r.attacked ? "true" : "false") << "\n";
  }
}

// Manifest tying the clean/poisoned pair back to the run that produced it.
inline ojson dataset_manifest(const Scenario& s, const BindingSet& bindings,
                              const std::vector<AttackSpec>& attacks,
                              const std::string& clean_file,
                              const std::string& poisoned_file,
                              std::size_t clean_records,
                              std::size_t poisoned_records,
                              std::uint64_t seed, const std::string& format) {
  ojson m;
  m["unique_id"] = s.unique_id;
  m["scenario_digest"] = scenario_digest(s);
  m["seed"] = seed;
  m["format"] = format;
  m["t0_epoch_ms"] = bindings.t0_epoch_ms;
  ojson files;
  files["clean"] = clean_file;
  files["poisoned"] = poisoned_file;
  m["files"] = files;
  ojson counts;
  counts["clean"] = clean_records;
  counts["poisoned"] = poisoned_records;
  m["records"] = counts;
  ojson sensors = ojson::array();
  for (const SensorBinding& b : bindings.sensors) {
    ojson jb;
    jb["sensor_id"] = b.sensor_id;
    jb["interval_s"] = b.interval;
    ojson fields = ojson::array();
    for (const FieldBinding& f : b.fields) fields.push_back(f.name);
    jb["fields"] = fields;
    sensors.push_back(jb);
  }
  m["sensors"] = sensors;
  ojson jattacks = ojson::array();
  for (const AttackSpec& a : attacks) {
    ojson ja;
    ja["kind"] = to_string(a.kind);
    ja["sensor_id"] = a.sensor_id;
    ja["field"] = a.field;
    ja["window"] = ojson::array({a.t_start, a.t_end});
    ja["seed"] = a.seed;
    jattacks.push_back(ja);
  }
  m["attacks"] = jattacks;
  return m;
}

// Write a file atomically: content lands under a temporary name in the same
// directory and is renamed over the target only once complete.
inline void atomic_write(const std::filesystem::path& path,
                         const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot write '" + tmp.string() + "'");
    }
    out.write(content.data(),
              static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("failed while writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move temporary file onto '" +
                             path.string() + "'");
  }
}

}  // namespace acwa
