#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "acwa/chemistry.hpp"
#include "acwa/constants.hpp"
#include "acwa/errors.hpp"

// The scenario data model: a complete declarative description of one
// experiment (tank geometry, link plumbing, initial water, kinetics,
// horizon). Immutable after parsing; everything the engine and the dataset
// generator do is a pure function of this plus a seed.

namespace acwa {

enum class TankShape { Rectangular, Cylindrical };

struct TankSpec {
  std::string id;
  TankShape shape = TankShape::Rectangular;
  // Rectangular tanks use length x width; cylindrical tanks use diameter.
  std::optional<double> length;    // [m]
  std::optional<double> width;     // [m]
  std::optional<double> diameter;  // [m]
  double height = 0.0;             // [m]
  double base_elevation = 0.0;     // z of the tank floor [m]
  double initial_level = 0.0;      // [m]
  // At most one node per scenario carries the reservoir flag; it selects
  // the "Reservoir ..." column pair in the two-node output schema.
  bool reservoir = false;

  double plan_area() const {
    if (shape == TankShape::Rectangular) {
      return length.value_or(0.0) * width.value_or(0.0);
    }
    const double d = diameter.value_or(0.0);
    return 0.25 * PI * d * d;
  }
  double capacity() const { return plan_area() * height; }

  friend bool operator==(const TankSpec&, const TankSpec&) = default;
};

struct PipeSpec {
  double diameter = 0.0;   // [m]
  double length = 0.0;     // [m]
  double roughness = 0.0;  // absolute wall roughness [m]
  std::string material = "PVC";
  std::vector<double> minor_losses;  // fitting K coefficients
  double surface_temperature = 20.0; // wall temperature [C]
  double convective_coefficient = 0.0;  // h [W/m^2 K]; 0 = adiabatic

  double k_sum() const {
    double k = 0.0;
    for (double v : minor_losses) k += v;
    return k;
  }
  double relative_roughness() const { return roughness / diameter; }

  friend bool operator==(const PipeSpec&, const PipeSpec&) = default;
};

enum class DriverType { Pump, Gravity };

struct LinkSpec {
  std::string source;
  std::string destination;
  PipeSpec pipe;
  DriverType driver = DriverType::Pump;
  double rated_flow = 0.0;  // pump only [m^3/s]; ideal constant-rate source
  std::string pump_id;      // label; several links may share one pump
  double valve_opening = 1.0;  // [0, 1], scales the candidate flow
  bool return_line = false;    // exempt from the acyclicity rule

  std::string label() const { return source + "->" + destination; }

  friend bool operator==(const LinkSpec&, const LinkSpec&) = default;
};

// Initial water chemistry. A blank dissolved-oxygen entry means
// "equilibrated": it resolves to saturation at the initial temperature.
struct InitialWater {
  double temperature = 20.0;  // [C]
  double ph = 7.0;
  double bod = 0.0;           // [mg/L]
  std::optional<double> dissolved_oxygen;  // [mg/L]
  double nitrate = 0.0;       // [mg/L]
  double naoh = 0.0;          // [mg/L]

  friend bool operator==(const InitialWater&, const InitialWater&) = default;
};

struct Kinetics {
  double bod_decay_rate = 0.23;    // kd [1/day]
  double reaeration_rate = 0.4;    // ka [1/day]
  double nitrate_bulk_rate = 0.0;  // kb [1/day]
  double nitrate_wall_rate = 0.0;  // kw [m/day]

  friend bool operator==(const Kinetics&, const Kinetics&) = default;
};

enum class OutputSchema { Table4, SI };

struct Scenario {
  std::string unique_id;
  double duration = 300.0;   // [s]
  double time_step = 1.0;    // [s]
  OutputSchema output_schema = OutputSchema::Table4;
  std::uint64_t rng_seed = 0;

  double air_temperature = 20.0;  // [C]
  std::vector<TankSpec> nodes;    // declaration order is significant
  std::vector<LinkSpec> links;    // dispatch order is declaration order
  InitialWater initial;
  Kinetics kinetics;

  int node_index(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].id == id) return static_cast<int>(i);
    }
    return -1;
  }

  // The shared starting water for every tank and pipe, with blank DO
  // resolved to saturation.
  ConstituentVector initial_constituents() const {
    ConstituentVector c;
    c.temperature = initial.temperature;
    c.ph = initial.ph;
    c.bod = initial.bod;
    c.dissolved_oxygen =
        initial.dissolved_oxygen.value_or(do_saturation(initial.temperature));
    c.nitrate = initial.nitrate;
    c.naoh = initial.naoh;
    return c;
  }

  // Kinetic parameters with the background base burden fixed from the
  // initial pH (dosed NaOH then shifts pH relative to that baseline).
  ReactionParams reaction_params() const {
    ReactionParams p;
    p.bod_decay_rate = kinetics.bod_decay_rate;
    p.reaeration_rate = kinetics.reaeration_rate;
    p.nitrate_bulk_rate = kinetics.nitrate_bulk_rate;
    p.nitrate_wall_rate = kinetics.nitrate_wall_rate;
    p.background_base = base_from_ph(initial.ph);
    return p;
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

}  // namespace acwa
