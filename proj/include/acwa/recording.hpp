#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "acwa/engine.hpp"
#include "acwa/errors.hpp"
#include "acwa/hydraulics.hpp"
#include "acwa/scenario.hpp"
#include "acwa/scenario_io.hpp"

// CSV record formatting and the run manifest.
//
// Two output schemas:
//
//  * the clock-time schema ("table4"): HH:MM:SS timestamps, water levels in
//    metres, bed pressures in psi, and one block of quality columns. With
//    exactly two nodes the headers are the historical benchmark names
//    (Reservoir / Tank); larger plants get per-node column groups.
//
//  * the SI schema ("si"): plain seconds, pressures in pascals, quality in
//    mg/L. Two-node plants use positional Tank 1 / Tank 2 labels; larger
//    plants get per-node groups.
//
// Values are written with six significant digits, UTF-8, LF line endings.

namespace acwa {

namespace detail_record {

inline std::string num6(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

inline std::string hhmmss(double t_seconds) {
  const long t = std::lround(t_seconds);
  if (t < 0 || t >= 86400) {
    throw ValidationError("clock-time output cannot represent " +
                          num6(t_seconds) + " s");
  }
  char buf[16];
  std::snprintf(buf, sizeof buf, "%02ld:%02ld:%02ld", t / 3600,
                (t / 60) % 60, t % 60);
  return buf;
}

inline constexpr const char* DEGREE_C = "\xC2\xB0" "C";  // UTF-8 degree sign

}  // namespace detail_record

// Formats SimRecords as CSV lines for one scenario. Pure string production;
// callers own the streams.
class RecordWriter {
 public:
  explicit RecordWriter(const Scenario& s)
      : schema_(s.output_schema), ids_() {
    for (const TankSpec& t : s.nodes) ids_.push_back(t.id);
    reservoir_ = 0;
    for (std::size_t i = 0; i < s.nodes.size(); ++i) {
      if (s.nodes[i].reservoir) reservoir_ = static_cast<int>(i);
    }
    // Quality columns for the two-node layouts come from the working tank,
    // not the supply reservoir.
    quality_ = s.nodes.size() == 2 ? (reservoir_ == 0 ? 1 : 0) : -1;
  }

  std::string header() const {
    std::string h;
    const bool pair = ids_.size() == 2;
    if (schema_ == OutputSchema::Table4) {
      if (pair) {
        h = "Time,Reservoir Water Level,Tank Water Level,"
            "Pressure at Reservoir Bed,Pressure at Tank Bed,";
        h += quality_block("");
      } else {
        h = "Time";
        for (const auto& id : ids_) h += "," + id + " Water Level";
        for (const auto& id : ids_) h += ",Pressure at " + id + " Bed";
        h += ",";
        for (std::size_t i = 0; i < ids_.size(); ++i) {
          if (i) h += ",";
          h += quality_block(ids_[i] + " ");
        }
      }
    } else {
      if (pair) {
        h = "Time (seconds),Tank 1 Water Level (m),Tank 2 Water Level (m),"
            "Tank 1 Pressure (Pa),Tank 2 Pressure (Pa),";
        h += si_quality_block("");
      } else {
        h = "Time (seconds)";
        for (const auto& id : ids_) h += "," + id + " Water Level (m)";
        for (const auto& id : ids_) h += "," + id + " Pressure (Pa)";
        h += ",";
        for (std::size_t i = 0; i < ids_.size(); ++i) {
          if (i) h += ",";
          h += si_quality_block(ids_[i] + " ");
        }
      }
    }
    h += "\n";
    return h;
  }

  std::string format(const SimRecord& r) const {
    using detail_record::num6;
    std::string line;
    if (schema_ == OutputSchema::Table4) {
      line = detail_record::hhmmss(r.time);
      if (ids_.size() == 2) {
        const NodeSample& res = r.nodes[reservoir_];
        const NodeSample& tank = r.nodes[quality_];
        line += "," + num6(res.level) + "," + num6(tank.level);
        line += "," + num6(pascal_to_psi(res.pressure));
        line += "," + num6(pascal_to_psi(tank.pressure));
        line += "," + quality_values(tank.water);
      } else {
        for (const auto& n : r.nodes) line += "," + num6(n.level);
        for (const auto& n : r.nodes) {
          line += "," + num6(pascal_to_psi(n.pressure));
        }
        for (const auto& n : r.nodes) line += "," + quality_values(n.water);
      }
    } else {
      line = num6(r.time);
      if (ids_.size() == 2) {
        line += "," + num6(r.nodes[0].level) + "," + num6(r.nodes[1].level);
        line += "," + num6(r.nodes[0].pressure) + "," +
                num6(r.nodes[1].pressure);
        line += "," + si_quality_values(r.nodes[quality_].water);
      } else {
        for (const auto& n : r.nodes) line += "," + num6(n.level);
        for (const auto& n : r.nodes) line += "," + num6(n.pressure);
        for (const auto& n : r.nodes) {
          line += "," + si_quality_values(n.water);
        }
      }
    }
    line += "\n";
    return line;
  }

 private:
  static std::string quality_block(const std::string& prefix) {
    std::string h;
    h += prefix + "Water Temperature (" + detail_record::DEGREE_C + ")";
    h += "," + prefix + "pH";
    h += "," + prefix + "BOD (mg/L)";
    h += "," + prefix + "DO (mg/L)";
    h += "," + prefix + "Nitrate (mg/L)";
    h += "," + prefix + "NaOH (mg/L)";
    return h;
  }
  static std::string si_quality_block(const std::string& prefix) {
    std::string h;
    h += prefix + "Nitrate Concentration (mg/L)";
    h += "," + prefix + "BOD Concentration (mg/L)";
    h += "," + prefix + "DO Concentration (mg/L)";
    h += "," + prefix + "pH";
    h += "," + prefix + "Temperature (Degree Celsius)";
    return h;
  }
  static std::string quality_values(const ConstituentVector& w) {
    using detail_record::num6;
    return num6(w.temperature) + "," + num6(w.ph) + "," + num6(w.bod) + "," +
           num6(w.dissolved_oxygen) + "," + num6(w.nitrate) + "," +
           num6(w.naoh);
  }
  static std::string si_quality_values(const ConstituentVector& w) {
    using detail_record::num6;
    return num6(w.nitrate) + "," + num6(w.bod) + "," +
           num6(w.dissolved_oxygen) + "," + num6(w.ph) + "," +
           num6(w.temperature);
  }

  OutputSchema schema_;
  std::vector<std::string> ids_;
  int reservoir_;
  int quality_;
};

// Sidecar manifest describing one completed run.
inline ojson run_manifest(const Scenario& s, const RunSummary& summary,
                          const std::string& csv_name) {
  ojson m;
  m["unique_id"] = s.unique_id;
  m["scenario_digest"] = scenario_digest(s);
  m["output_schema"] =
      s.output_schema == OutputSchema::Table4 ? "table4" : "si";
  m["records"] = summary.records;
  m["csv"] = csv_name;
  ojson events = ojson::array();
  for (const Event& e : summary.events) {
    ojson je;
    je["time_s"] = e.time;
    je["link"] = e.link;
    je["kind"] = to_string(e.kind);
    je["detail"] = e.detail;
    events.push_back(je);
  }
  m["events"] = events;
  ojson volumes = ojson::array();
  for (std::size_t k = 0; k < s.links.size(); ++k) {
    ojson jv;
    jv["link"] = s.links[k].label();
    jv["delivered_m3"] = summary.link_volumes[k];
    volumes.push_back(jv);
  }
  m["link_volumes"] = volumes;
  m["volume_residual_m3"] = summary.volume_residual;
  m["runtime_seconds"] = summary.runtime_seconds;
  m["scenario"] = serialize_scenario(s);
  return m;
}

}  // namespace acwa
