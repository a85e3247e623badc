#pragma once

#include <string>

#include "acwa/constants.hpp"
#include "acwa/errors.hpp"
#include "acwa/scenario.hpp"
#include "acwa/scenario_io.hpp"

// Ready-to-run scenario presets for the lab's four layouts.
//
// Tank dimensions are the testbed's printed inch measurements converted to
// metres; the gallon ratings those tanks are sold under are nominal, so
// computed capacities deviate from them by up to ~14%. Flow rates and
// elevations are chosen so every preset runs its full default horizon with
// live flow: feeds, drains and returns roughly balance, nothing empties and
// nothing hits a permanent clamp.
//
// Layouts:
//   TwoTank  reservoir -> pump -> tank; the canonical demonstration pair.
//   Line     reservoir feeds three tanks in series; the inter-tank moves are
//            gravity-driven down an elevation cascade; a return pump closes
//            the loop.
//   Bus      a feed pump lifts water into an elevated central main that
//            gravity-drains into four tanks; a shared return pump recirculates.
//   Star     a central tank fans out to four satellites; four distinct pump
//            groups (feed, two distribution pairs, shared return).

namespace acwa {

enum class Topology { TwoTank, Line, Bus, Star };

inline Topology topology_from_name(const std::string& name) {
  if (name == "twotank") return Topology::TwoTank;
  if (name == "line") return Topology::Line;
  if (name == "bus") return Topology::Bus;
  if (name == "star") return Topology::Star;
  throw ValidationError("unknown topology template '" + name + "'");
}

namespace detail_topo {

// The canonical two-tank experiment in the flat file form, verbatim.
inline constexpr const char* TWOTANK_DOC = R"({
  "Tank 1 Type": "Rectangular",
  "Tank 1 Length": "0.5",
  "Tank 1 Width": "0.3",
  "Tank 1 Height": "0.3",
  "Tank 1 Diameter": "",
  "Tank 2 Type": "Rectangular",
  "Tank 2 Length": "0.5",
  "Tank 2 Width": "0.3",
  "Tank 2 Height": "0.3",
  "Tank 2 Diameter": "",
  "Pipe Diameter": "0.1",
  "Pipe Length": "3",
  "Pipe Material": "PVC",
  "Pipe Roughness": 0.02,
  "Pump Type": "Positive Displacement",
  "Tank 1 Initial Water Level": "0.2",
  "Tank 2 Initial Water Level": "0",
  "Water Temperature": "26",
  "Air Temperature": "20",
  "Kinematic Viscosity": 0.63,
  "Density": 981.8,
  "Water pH": "7.00",
  "Nitrate Concentration": "10",
  "BOD": "",
  "DO": "",
  "NaOH Concentration": "",
  "Simulation Time": "300",
  "Pump Flow Rate": "3.5",
  "Unique ID": "20230916205552_1A67EF"
})";

inline TankSpec reservoir_tank(const std::string& id, double level) {
  TankSpec t;
  t.id = id;
  t.shape = TankShape::Rectangular;
  t.length = 0.70;  // 0.70 x 0.50 x 0.38 m holds ~35 gal
  t.width = 0.50;
  t.height = 0.38;
  t.base_elevation = 0.0;
  t.initial_level = level;
  t.reservoir = true;
  return t;
}

inline TankSpec box_tank(const std::string& id, double l_in, double w_in,
                         double h_in, double z, double level) {
  TankSpec t;
  t.id = id;
  t.shape = TankShape::Rectangular;
  t.length = l_in * M_PER_INCH;
  t.width = w_in * M_PER_INCH;
  t.height = h_in * M_PER_INCH;
  t.base_elevation = z;
  t.initial_level = level;
  return t;
}

inline PipeSpec tube(double d_in, double length, const std::string& material,
                     double air) {
  PipeSpec p;
  p.diameter = d_in * M_PER_INCH;
  p.length = length;
  p.roughness = 2e-5;
  p.material = material;
  p.minor_losses = {0.5, 1.0};
  p.surface_temperature = air;
  return p;
}

inline LinkSpec pump_link(const std::string& from, const std::string& to,
                          double flow, const std::string& pump_id,
                          PipeSpec pipe, bool return_line = false) {
  LinkSpec l;
  l.source = from;
  l.destination = to;
  l.driver = DriverType::Pump;
  l.rated_flow = flow;
  l.pump_id = pump_id;
  l.pipe = std::move(pipe);
  l.return_line = return_line;
  return l;
}

inline LinkSpec gravity_link(const std::string& from, const std::string& to,
                             PipeSpec pipe, double valve = 1.0) {
  LinkSpec l;
  l.source = from;
  l.destination = to;
  l.driver = DriverType::Gravity;
  l.pipe = std::move(pipe);
  l.valve_opening = valve;
  return l;
}

inline void default_water(Scenario& s) {
  s.air_temperature = 20.0;
  s.initial.temperature = 26.0;
  s.initial.ph = 7.0;
  s.initial.nitrate = 10.0;
  s.duration = 300.0;
  s.time_step = 1.0;
  s.output_schema = OutputSchema::SI;
}

inline Scenario line_template() {
  Scenario s;
  default_water(s);
  s.unique_id = "line_demo";
  const double air = s.air_temperature;
  s.nodes = {
      reservoir_tank("Reservoir", 0.25),
      box_tank("Tank 1", 20.25, 12.625, 10.5, 0.50, 0.05),
      box_tank("Tank 2", 20.25, 12.625, 10.5, 0.25, 0.05),
      box_tank("Tank 3", 20.25, 12.625, 10.5, 0.00, 0.05),
  };
  s.links = {
      pump_link("Reservoir", "Tank 1", 1.2e-4, "P1", tube(0.5, 2.5, "PVC", air)),
      gravity_link("Tank 1", "Tank 2", tube(0.5, 2.5, "PVC", air)),
      gravity_link("Tank 2", "Tank 3", tube(0.5, 2.5, "PVC", air)),
      pump_link("Tank 3", "Reservoir", 1.0e-4, "P2", tube(0.5, 3.0, "PVC", air),
                true),
  };
  return s;
}

inline Scenario bus_template() {
  Scenario s;
  default_water(s);
  s.unique_id = "bus_demo";
  const double air = s.air_temperature;
  TankSpec main_line;
  main_line.id = "Main Line";
  main_line.shape = TankShape::Cylindrical;
  main_line.diameter = 0.20;
  main_line.height = 0.35;
  main_line.base_elevation = 0.20;
  main_line.initial_level = 0.10;
  s.nodes = {
      reservoir_tank("Reservoir", 0.25),
      main_line,
      box_tank("Tank 1", 16.25, 8.375, 10.5, 0.0, 0.03),
      box_tank("Tank 2", 16.25, 8.375, 10.5, 0.0, 0.03),
      box_tank("Tank 3", 16.25, 8.375, 10.5, 0.0, 0.03),
      box_tank("Tank 4", 16.25, 8.375, 10.5, 0.0, 0.03),
  };
  s.links = {
      pump_link("Reservoir", "Main Line", 2.5e-4, "P1",
                tube(0.75, 2.0, "CPVC", air)),
      gravity_link("Main Line", "Tank 1", tube(0.5, 2.5, "CPVC", air), 0.55),
      gravity_link("Main Line", "Tank 2", tube(0.5, 2.5, "CPVC", air), 0.55),
      gravity_link("Main Line", "Tank 3", tube(0.5, 2.5, "CPVC", air), 0.55),
      gravity_link("Main Line", "Tank 4", tube(0.5, 2.5, "CPVC", air), 0.55),
      pump_link("Tank 1", "Reservoir", 5.0e-5, "P2", tube(0.5, 2.5, "CPVC", air), true),
      pump_link("Tank 2", "Reservoir", 5.0e-5, "P2", tube(0.5, 2.5, "CPVC", air), true),
      pump_link("Tank 3", "Reservoir", 5.0e-5, "P2", tube(0.5, 2.5, "CPVC", air), true),
      pump_link("Tank 4", "Reservoir", 5.0e-5, "P2", tube(0.5, 2.5, "CPVC", air), true),
  };
  return s;
}

inline Scenario star_template() {
  Scenario s;
  default_water(s);
  s.unique_id = "star_demo";
  const double air = s.air_temperature;
  s.nodes = {
      reservoir_tank("Reservoir", 0.25),
      box_tank("Central Tank", 15.25, 15.25, 15.25, 0.0, 0.10),
      box_tank("Satellite 1", 9.25, 9.25, 9.25, 0.0, 0.03),
      box_tank("Satellite 2", 9.25, 9.25, 9.25, 0.0, 0.03),
      box_tank("Satellite 3", 9.25, 9.25, 9.25, 0.0, 0.03),
      box_tank("Satellite 4", 9.25, 9.25, 9.25, 0.0, 0.03),
  };
  s.links = {
      pump_link("Reservoir", "Central Tank", 1.5e-4, "P1",
                tube(0.5, 2.0, "CPVC", air)),
      pump_link("Central Tank", "Satellite 1", 4.0e-5, "P2",
                tube(0.5, 1.5, "CPVC", air)),
      pump_link("Central Tank", "Satellite 2", 4.0e-5, "P2",
                tube(0.5, 1.5, "CPVC", air)),
      pump_link("Central Tank", "Satellite 3", 4.0e-5, "P3",
                tube(0.5, 1.5, "CPVC", air)),
      pump_link("Central Tank", "Satellite 4", 4.0e-5, "P3",
                tube(0.5, 1.5, "CPVC", air)),
      pump_link("Satellite 1", "Reservoir", 4.0e-5, "P4",
                tube(0.5, 2.5, "CPVC", air), true),
      pump_link("Satellite 2", "Reservoir", 4.0e-5, "P4",
                tube(0.5, 2.5, "CPVC", air), true),
      pump_link("Satellite 3", "Reservoir", 4.0e-5, "P4",
                tube(0.5, 2.5, "CPVC", air), true),
      pump_link("Satellite 4", "Reservoir", 4.0e-5, "P4",
                tube(0.5, 2.5, "CPVC", air), true),
  };
  return s;
}

}  // namespace detail_topo

inline Scenario topology_template(Topology kind) {
  switch (kind) {
    case Topology::TwoTank:
      return parse_scenario_text(detail_topo::TWOTANK_DOC);
    case Topology::Line:
      return detail_topo::line_template();
    case Topology::Bus:
      return detail_topo::bus_template();
    case Topology::Star:
      return detail_topo::star_template();
  }
  throw ContractViolation("topology_template: bad kind");
}

}  // namespace acwa
