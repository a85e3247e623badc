#pragma once

#include <json.hpp>

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "acwa/constants.hpp"
#include "acwa/errors.hpp"
#include "acwa/rng.hpp"
#include "acwa/scenario.hpp"

// Scenario files come in two shapes, both JSON:
//
//  * the flat form: a single key-value object with spelled-out field names
//    ("Tank 1 Initial Water Level": "0.2"), always describing two tanks
//    joined by one pump-driven pipe. Units are fixed by convention and
//    documented field by field (lengths/levels in m, roughness in mm,
//    pump flow in L/s, temperatures in C, concentrations in mg/L).
//
//  * the extended form: sectioned (`simulation`, `nodes`, `links`,
//    `constituents`, `reactions`) with any number of nodes and links, where
//    every dimensioned quantity carries an explicit unit suffix ("3.5 L/s",
//    "0.02 mm").
//
// serialize_scenario emits the extended form with shortest round-trip
// number formatting, so parse(serialize(s)) == s field-for-field.

namespace acwa {

using ojson = nlohmann::ordered_json;

namespace qty {

struct Unit {
  const char* suffix;
  double to_si;
};

// First entry of each table is the canonical suffix used when serializing.
inline constexpr std::array<Unit, 4> LENGTH{{{"m", 1.0},
                                             {"cm", 0.01},
                                             {"mm", 0.001},
                                             {"in", 0.0254}}};
inline constexpr std::array<Unit, 6> FLOW{{{"m^3/s", 1.0},
                                           {"m3/s", 1.0},
                                           {"L/s", 1e-3},
                                           {"l/s", 1e-3},
                                           {"gal/min", L_PER_GAL * 1e-3 / 60.0},
                                           {"gpm", L_PER_GAL * 1e-3 / 60.0}}};
inline constexpr std::array<Unit, 2> TEMPERATURE{{{"C", 1.0}, {"degC", 1.0}}};
inline constexpr std::array<Unit, 4> RATE_PER_DAY{{{"1/day", 1.0},
                                                   {"/day", 1.0},
                                                   {"1/d", 1.0},
                                                   {"1/s", SECONDS_PER_DAY}}};
inline constexpr std::array<Unit, 3> SPEED_PER_DAY{{{"m/day", 1.0},
                                                    {"m/d", 1.0},
                                                    {"m/s", SECONDS_PER_DAY}}};
inline constexpr std::array<Unit, 3> TIME{{{"s", 1.0},
                                           {"min", 60.0},
                                           {"h", 3600.0}}};
inline constexpr std::array<Unit, 2> CONCENTRATION{{{"mg/L", 1.0},
                                                    {"mg/l", 1.0}}};
inline constexpr std::array<Unit, 2> COEFFICIENT{{{"W/m^2K", 1.0},
                                                  {"W/m2K", 1.0}}};

}  // namespace qty

namespace detail_io {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Locale-independent double parse of the full string.
inline double parse_number(std::string_view text, const std::string& field) {
  const std::string_view t = trim(text);
  double value = 0.0;
  const auto* begin = t.data();
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || t.empty()) {
    throw ValidationError("field '" + field + "': malformed number '" +
                          std::string(text) + "'");
  }
  return value;
}

// Shortest decimal string that parses back to exactly the same double.
inline std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

// Accept a JSON number or a numeric string (the flat form mixes both).
inline double get_number(const ojson& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_number(j.get<std::string>(), field);
  throw ValidationError("field '" + field + "': expected a number, got " +
                        std::string(j.type_name()));
}

// Parse "<number> <unit>" against a unit table.
template <std::size_t N>
double parse_quantity(const ojson& j, const std::string& field,
                      const std::array<qty::Unit, N>& units) {
  if (!j.is_string()) {
    throw ValidationError("field '" + field +
                          "': dimensioned values need a unit suffix, e.g. \"" +
                          format_number(j.is_number() ? j.get<double>() : 0.0) +
                          " " + units[0].suffix + "\"");
  }
  const std::string s = j.get<std::string>();
  const auto cut = s.find_last_of(' ');
  if (cut == std::string::npos) {
    throw ValidationError("field '" + field + "': missing unit suffix in '" +
                          s + "'");
  }
  const std::string_view unit = trim(std::string_view(s).substr(cut + 1));
  for (const auto& u : units) {
    if (unit == u.suffix) {
      return parse_number(std::string_view(s).substr(0, cut), field) * u.to_si;
    }
  }
  throw ValidationError("field '" + field + "': unknown unit '" +
                        std::string(unit) + "'");
}

template <std::size_t N>
std::string format_quantity(double base_value,
                            const std::array<qty::Unit, N>& units) {
  return format_number(base_value) + " " + units[0].suffix;
}

inline void require_keys(const ojson& obj, const std::string& where,
                         std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ValidationError(where + ": unknown field '" + key + "'");
    }
  }
}

inline bool blank(const ojson& j) {
  return j.is_null() || (j.is_string() && trim(j.get<std::string>()).empty());
}

// Read and parse a whole JSON file, with path context on every failure.
inline ojson read_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return ojson::parse(buf.str());
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(path + ": not valid JSON: " + e.what());
  }
}

}  // namespace detail_io

// ---------------------------------------------------------------- flat form

namespace detail_io {

inline constexpr const char* FLAT_FIELDS[] = {
    "Tank 1 Type", "Tank 1 Length", "Tank 1 Width", "Tank 1 Height",
    "Tank 1 Diameter", "Tank 2 Type", "Tank 2 Length", "Tank 2 Width",
    "Tank 2 Height", "Tank 2 Diameter", "Pipe Diameter", "Pipe Length",
    "Pipe Material", "Pipe Roughness", "Pump Type",
    "Tank 1 Initial Water Level", "Tank 2 Initial Water Level",
    "Water Temperature", "Air Temperature", "Kinematic Viscosity", "Density",
    "Water pH", "Nitrate Concentration", "BOD", "DO", "NaOH Concentration",
    "Simulation Time", "Pump Flow Rate", "Unique ID"};

inline TankSpec parse_flat_tank(const ojson& doc, const std::string& prefix,
                                std::vector<std::string>& missing) {
  TankSpec t;
  t.id = prefix;
  const auto field = [&](const char* name) { return prefix + " " + name; };
  const auto present = [&](const std::string& key) {
    return doc.contains(key) && !blank(doc.at(key));
  };

  const std::string type_key = field("Type");
  std::string type = "Rectangular";
  if (present(type_key)) {
    type = std::string(trim(doc.at(type_key).get<std::string>()));
  } else {
    missing.push_back(type_key);
  }
  if (type == "Rectangular") {
    t.shape = TankShape::Rectangular;
    for (const char* dim : {"Length", "Width"}) {
      const std::string key = field(dim);
      if (!present(key)) {
        missing.push_back(key);
        continue;
      }
      const double v = get_number(doc.at(key), key);
      (dim[0] == 'L' ? t.length : t.width) = v;
    }
  } else if (type == "Cylindrical") {
    t.shape = TankShape::Cylindrical;
    const std::string key = field("Diameter");
    if (present(key)) {
      t.diameter = get_number(doc.at(key), key);
    } else {
      missing.push_back(key);
    }
  } else {
    throw ValidationError("field '" + type_key + "': unknown tank type '" +
                          type + "'");
  }
  const std::string height_key = field("Height");
  if (present(height_key)) {
    t.height = get_number(doc.at(height_key), height_key);
  } else {
    missing.push_back(height_key);
  }
  const std::string level_key = field("Initial Water Level");
  if (present(level_key)) {
    t.initial_level = get_number(doc.at(level_key), level_key);
  } else {
    missing.push_back(level_key);
  }
  return t;
}

// Flat form: always a two-node, one-pump-link scenario. Unit conventions:
// lengths/levels m, pipe roughness mm, pump flow L/s, temperatures C,
// concentrations mg/L. "Kinematic Viscosity" and "Density" are accepted and
// ignored: both properties are recomputed from water temperature. Minor
// losses default to entry 0.5 + exit 1.0 (the only fitting losses the model
// carries); kinetics default to kd 0.23/day, ka 0.4/day.
inline Scenario parse_flat(const ojson& doc) {
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* f : FLAT_FIELDS) {
      if (key == f) {
        known = true;
        break;
      }
    }
    if (!known) throw ValidationError("unknown field '" + key + "'");
  }

  std::vector<std::string> missing;
  const auto present = [&](const char* key) {
    return doc.contains(key) && !blank(doc.at(key));
  };
  const auto mandatory = [&](const char* key) -> const ojson* {
    if (present(key)) return &doc.at(key);
    missing.push_back(key);
    return nullptr;
  };
  const auto number_or = [&](const char* key, double fallback) {
    return present(key) ? get_number(doc.at(key), key) : fallback;
  };

  Scenario s;
  TankSpec t1 = parse_flat_tank(doc, "Tank 1", missing);
  TankSpec t2 = parse_flat_tank(doc, "Tank 2", missing);
  t1.reservoir = true;

  LinkSpec link;
  link.source = t1.id;
  link.destination = t2.id;
  link.driver = DriverType::Pump;
  link.pump_id = "P1";
  link.pipe.minor_losses = {0.5, 1.0};
  if (const ojson* v = mandatory("Pipe Diameter")) {
    link.pipe.diameter = get_number(*v, "Pipe Diameter");
  }
  if (const ojson* v = mandatory("Pipe Length")) {
    link.pipe.length = get_number(*v, "Pipe Length");
  }
  if (const ojson* v = mandatory("Pump Flow Rate")) {
    link.rated_flow = get_number(*v, "Pump Flow Rate") * 1e-3;  // L/s -> m^3/s
  }
  link.pipe.roughness = number_or("Pipe Roughness", 0.02) * 1e-3;  // mm -> m
  if (present("Pipe Material")) {
    link.pipe.material = std::string(trim(doc.at("Pipe Material").get<std::string>()));
  }

  if (const ojson* v = mandatory("Simulation Time")) {
    s.duration = get_number(*v, "Simulation Time");
  }
  if (const ojson* v = mandatory("Unique ID")) {
    s.unique_id = std::string(trim(v->get<std::string>()));
  }

  s.time_step = 1.0;
  s.output_schema = OutputSchema::Table4;
  s.air_temperature = number_or("Air Temperature", 20.0);
  link.pipe.surface_temperature = s.air_temperature;

  s.initial.temperature = number_or("Water Temperature", 20.0);
  s.initial.ph = number_or("Water pH", 7.0);
  s.initial.bod = number_or("BOD", 0.0);
  s.initial.nitrate = number_or("Nitrate Concentration", 0.0);
  s.initial.naoh = number_or("NaOH Concentration", 0.0);
  if (present("DO")) {
    s.initial.dissolved_oxygen = get_number(doc.at("DO"), "DO");
  }

  if (!missing.empty()) {
    std::string msg = "missing mandatory fields:";
    for (const auto& f : missing) msg += " '" + f + "'";
    throw ValidationError(msg);
  }

  s.nodes = {std::move(t1), std::move(t2)};
  s.links = {std::move(link)};
  return s;
}

}  // namespace detail_io

// ------------------------------------------------------------ extended form

namespace detail_io {

inline TankSpec parse_ext_node(const std::string& id, const ojson& j) {
  const std::string where = "nodes." + id;
  require_keys(j, where,
               {"shape", "length", "width", "diameter", "height",
                "base_elevation", "initial_water_level", "reservoir"});
  TankSpec t;
  t.id = id;
  const std::string shape =
      j.contains("shape") ? j.at("shape").get<std::string>() : "rectangular";
  if (shape == "rectangular") {
    t.shape = TankShape::Rectangular;
  } else if (shape == "cylindrical") {
    t.shape = TankShape::Cylindrical;
  } else {
    throw ValidationError(where + ".shape: unknown shape '" + shape + "'");
  }
  const auto length = [&](const char* key) -> std::optional<double> {
    if (!j.contains(key) || blank(j.at(key))) return std::nullopt;
    return parse_quantity(j.at(key), where + "." + key, qty::LENGTH);
  };
  t.length = length("length");
  t.width = length("width");
  t.diameter = length("diameter");
  if (auto h = length("height")) {
    t.height = *h;
  } else {
    throw ValidationError(where + ": missing mandatory field 'height'");
  }
  t.base_elevation = length("base_elevation").value_or(0.0);
  if (auto wl = length("initial_water_level")) {
    t.initial_level = *wl;
  } else {
    throw ValidationError(where +
                          ": missing mandatory field 'initial_water_level'");
  }
  if (j.contains("reservoir")) t.reservoir = j.at("reservoir").get<bool>();
  return t;
}

inline LinkSpec parse_ext_link(std::size_t index, const ojson& j,
                               double air_temperature) {
  const std::string where = "links[" + std::to_string(index) + "]";
  require_keys(j, where,
               {"source", "destination", "driver", "rated_flow", "pump_id",
                "valve_opening", "return", "pipe"});
  LinkSpec l;
  if (!j.contains("source") || !j.contains("destination")) {
    throw ValidationError(where + ": missing 'source' or 'destination'");
  }
  l.source = j.at("source").get<std::string>();
  l.destination = j.at("destination").get<std::string>();
  const std::string driver =
      j.contains("driver") ? j.at("driver").get<std::string>() : "pump";
  if (driver == "pump") {
    l.driver = DriverType::Pump;
    if (!j.contains("rated_flow")) {
      throw ValidationError(where + ": pump link needs 'rated_flow'");
    }
    l.rated_flow =
        parse_quantity(j.at("rated_flow"), where + ".rated_flow", qty::FLOW);
    l.pump_id = j.contains("pump_id") ? j.at("pump_id").get<std::string>()
                                      : ("P" + std::to_string(index + 1));
  } else if (driver == "gravity") {
    l.driver = DriverType::Gravity;
    if (j.contains("rated_flow")) {
      throw ValidationError(where + ": gravity link cannot have 'rated_flow'");
    }
  } else {
    throw ValidationError(where + ".driver: unknown driver '" + driver + "'");
  }
  if (j.contains("valve_opening")) {
    l.valve_opening = get_number(j.at("valve_opening"), where + ".valve_opening");
  }
  if (j.contains("return")) l.return_line = j.at("return").get<bool>();

  if (!j.contains("pipe")) {
    throw ValidationError(where + ": missing 'pipe'");
  }
  const ojson& p = j.at("pipe");
  const std::string pw = where + ".pipe";
  require_keys(p, pw,
               {"diameter", "length", "material", "roughness",
                "minor_loss_coefficients", "surface_temperature",
                "convective_coefficient"});
  if (!p.contains("diameter") || !p.contains("length")) {
    throw ValidationError(pw + ": missing 'diameter' or 'length'");
  }
  l.pipe.diameter = parse_quantity(p.at("diameter"), pw + ".diameter", qty::LENGTH);
  l.pipe.length = parse_quantity(p.at("length"), pw + ".length", qty::LENGTH);
  l.pipe.roughness =
      p.contains("roughness")
          ? parse_quantity(p.at("roughness"), pw + ".roughness", qty::LENGTH)
          : 2e-5;
  if (p.contains("material")) {
    l.pipe.material = p.at("material").get<std::string>();
  }
  if (p.contains("minor_loss_coefficients")) {
    l.pipe.minor_losses.clear();
    for (const auto& k : p.at("minor_loss_coefficients")) {
      l.pipe.minor_losses.push_back(
          get_number(k, pw + ".minor_loss_coefficients"));
    }
  } else {
    l.pipe.minor_losses = {0.5, 1.0};
  }
  l.pipe.surface_temperature =
      p.contains("surface_temperature")
          ? parse_quantity(p.at("surface_temperature"),
                           pw + ".surface_temperature", qty::TEMPERATURE)
          : air_temperature;
  if (p.contains("convective_coefficient")) {
    l.pipe.convective_coefficient =
        parse_quantity(p.at("convective_coefficient"),
                       pw + ".convective_coefficient", qty::COEFFICIENT);
  }
  return l;
}

inline Scenario parse_extended(const ojson& doc) {
  require_keys(doc, "scenario",
               {"simulation", "air_temperature", "nodes", "links",
                "constituents", "reactions"});
  Scenario s;

  if (!doc.contains("simulation")) {
    throw ValidationError("scenario: missing 'simulation' section");
  }
  const ojson& sim = doc.at("simulation");
  require_keys(sim, "simulation",
               {"unique_id", "duration", "time_step", "output_schema",
                "rng_seed"});
  if (!sim.contains("unique_id") || !sim.contains("duration")) {
    throw ValidationError("simulation: missing 'unique_id' or 'duration'");
  }
  s.unique_id = sim.at("unique_id").get<std::string>();
  s.duration = parse_quantity(sim.at("duration"), "simulation.duration", qty::TIME);
  s.time_step =
      sim.contains("time_step")
          ? parse_quantity(sim.at("time_step"), "simulation.time_step", qty::TIME)
          : 1.0;
  if (sim.contains("output_schema")) {
    const std::string schema = sim.at("output_schema").get<std::string>();
    if (schema == "table4") {
      s.output_schema = OutputSchema::Table4;
    } else if (schema == "si") {
      s.output_schema = OutputSchema::SI;
    } else {
      throw ValidationError("simulation.output_schema: unknown schema '" +
                            schema + "'");
    }
  }
  if (sim.contains("rng_seed")) {
    s.rng_seed = sim.at("rng_seed").get<std::uint64_t>();
  }

  s.air_temperature =
      doc.contains("air_temperature")
          ? parse_quantity(doc.at("air_temperature"), "air_temperature",
                           qty::TEMPERATURE)
          : 20.0;

  if (!doc.contains("nodes") || doc.at("nodes").empty()) {
    throw ValidationError("scenario: missing or empty 'nodes' section");
  }
  for (const auto& [id, node] : doc.at("nodes").items()) {
    s.nodes.push_back(parse_ext_node(id, node));
  }
  if (doc.contains("links")) {
    std::size_t i = 0;
    for (const auto& link : doc.at("links")) {
      s.links.push_back(parse_ext_link(i++, link, s.air_temperature));
    }
  }

  if (doc.contains("constituents")) {
    const ojson& c = doc.at("constituents");
    require_keys(c, "constituents",
                 {"temperature", "ph", "bod", "dissolved_oxygen", "nitrate",
                  "naoh"});
    if (c.contains("temperature")) {
      s.initial.temperature = parse_quantity(
          c.at("temperature"), "constituents.temperature", qty::TEMPERATURE);
    }
    if (c.contains("ph")) {
      s.initial.ph = get_number(c.at("ph"), "constituents.ph");
    }
    const auto conc = [&](const char* key, double fallback) {
      if (!c.contains(key) || blank(c.at(key))) return fallback;
      return parse_quantity(c.at(key), std::string("constituents.") + key,
                            qty::CONCENTRATION);
    };
    s.initial.bod = conc("bod", 0.0);
    s.initial.nitrate = conc("nitrate", 0.0);
    s.initial.naoh = conc("naoh", 0.0);
    if (c.contains("dissolved_oxygen") && !blank(c.at("dissolved_oxygen"))) {
      s.initial.dissolved_oxygen =
          parse_quantity(c.at("dissolved_oxygen"),
                         "constituents.dissolved_oxygen", qty::CONCENTRATION);
    }
  }

  if (doc.contains("reactions")) {
    const ojson& r = doc.at("reactions");
    require_keys(r, "reactions",
                 {"bod_decay_rate", "reaeration_rate", "nitrate_bulk_rate",
                  "nitrate_wall_rate"});
    const auto rate = [&](const char* key, double fallback) {
      if (!r.contains(key)) return fallback;
      return parse_quantity(r.at(key), std::string("reactions.") + key,
                            qty::RATE_PER_DAY);
    };
    s.kinetics.bod_decay_rate = rate("bod_decay_rate", 0.23);
    s.kinetics.reaeration_rate = rate("reaeration_rate", 0.4);
    s.kinetics.nitrate_bulk_rate = rate("nitrate_bulk_rate", 0.0);
    if (r.contains("nitrate_wall_rate")) {
      s.kinetics.nitrate_wall_rate =
          parse_quantity(r.at("nitrate_wall_rate"),
                         "reactions.nitrate_wall_rate", qty::SPEED_PER_DAY);
    }
  }
  return s;
}

}  // namespace detail_io

// --------------------------------------------------------------- public API

// Parse either scenario form from a JSON document.
inline Scenario parse_scenario(const ojson& doc) {
  if (!doc.is_object()) {
    throw ValidationError("scenario document must be a JSON object");
  }
  if (doc.contains("simulation")) return detail_io::parse_extended(doc);
  return detail_io::parse_flat(doc);
}

inline Scenario parse_scenario_text(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("scenario is not valid JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read scenario file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scenario_text(buf.str());
  } catch (ValidationError& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

// Emit the extended form with every field explicit and canonical SI units.
inline ojson serialize_scenario(const Scenario& s) {
  using detail_io::format_number;
  using detail_io::format_quantity;
  ojson doc;
  doc["simulation"] = {
      {"unique_id", s.unique_id},
      {"duration", format_quantity(s.duration, qty::TIME)},
      {"time_step", format_quantity(s.time_step, qty::TIME)},
      {"output_schema", s.output_schema == OutputSchema::Table4 ? "table4" : "si"},
      {"rng_seed", s.rng_seed},
  };
  doc["air_temperature"] = format_quantity(s.air_temperature, qty::TEMPERATURE);

  ojson nodes = ojson::object();
  for (const TankSpec& t : s.nodes) {
    ojson n;
    n["shape"] =
        t.shape == TankShape::Rectangular ? "rectangular" : "cylindrical";
    if (t.length) n["length"] = format_quantity(*t.length, qty::LENGTH);
    if (t.width) n["width"] = format_quantity(*t.width, qty::LENGTH);
    if (t.diameter) n["diameter"] = format_quantity(*t.diameter, qty::LENGTH);
    n["height"] = format_quantity(t.height, qty::LENGTH);
    n["base_elevation"] = format_quantity(t.base_elevation, qty::LENGTH);
    n["initial_water_level"] = format_quantity(t.initial_level, qty::LENGTH);
    if (t.reservoir) n["reservoir"] = true;
    nodes[t.id] = std::move(n);
  }
  doc["nodes"] = std::move(nodes);

  ojson links = ojson::array();
  for (const LinkSpec& l : s.links) {
    ojson j;
    j["source"] = l.source;
    j["destination"] = l.destination;
    if (l.driver == DriverType::Pump) {
      j["driver"] = "pump";
      j["rated_flow"] = format_quantity(l.rated_flow, qty::FLOW);
      j["pump_id"] = l.pump_id;
    } else {
      j["driver"] = "gravity";
    }
    j["valve_opening"] = l.valve_opening;
    if (l.return_line) j["return"] = true;
    ojson p;
    p["diameter"] = format_quantity(l.pipe.diameter, qty::LENGTH);
    p["length"] = format_quantity(l.pipe.length, qty::LENGTH);
    p["material"] = l.pipe.material;
    p["roughness"] = format_quantity(l.pipe.roughness, qty::LENGTH);
    p["minor_loss_coefficients"] = l.pipe.minor_losses;
    p["surface_temperature"] =
        format_quantity(l.pipe.surface_temperature, qty::TEMPERATURE);
    p["convective_coefficient"] =
        format_quantity(l.pipe.convective_coefficient, qty::COEFFICIENT);
    j["pipe"] = std::move(p);
    links.push_back(std::move(j));
  }
  doc["links"] = std::move(links);

  doc["constituents"] = {
      {"temperature", format_quantity(s.initial.temperature, qty::TEMPERATURE)},
      {"ph", s.initial.ph},
      {"bod", format_quantity(s.initial.bod, qty::CONCENTRATION)},
      {"dissolved_oxygen",
       s.initial.dissolved_oxygen
           ? ojson(format_quantity(*s.initial.dissolved_oxygen,
                                   qty::CONCENTRATION))
           : ojson("")},
      {"nitrate", format_quantity(s.initial.nitrate, qty::CONCENTRATION)},
      {"naoh", format_quantity(s.initial.naoh, qty::CONCENTRATION)},
  };
  doc["reactions"] = {
      {"bod_decay_rate",
       format_quantity(s.kinetics.bod_decay_rate, qty::RATE_PER_DAY)},
      {"reaeration_rate",
       format_quantity(s.kinetics.reaeration_rate, qty::RATE_PER_DAY)},
      {"nitrate_bulk_rate",
       format_quantity(s.kinetics.nitrate_bulk_rate, qty::RATE_PER_DAY)},
      {"nitrate_wall_rate",
       format_quantity(s.kinetics.nitrate_wall_rate, qty::SPEED_PER_DAY)},
  };
  return doc;
}

// Stable content digest of a scenario (FNV-1a 64 over the canonical
// serialization), printed as 16 hex digits. Ties CSVs, manifests and
// datasets back to the exact scenario that produced them.
inline std::string scenario_digest(const Scenario& s) {
  const std::string bytes = serialize_scenario(s).dump();
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes)));
  return std::string(buf);
}

}  // namespace acwa
