// Scenario file round trips: flat form, extended form, digests, quantities.
#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "acwa/scenario_io.hpp"
#include "acwa/topology.hpp"

using Catch::Approx;

TEST_CASE("flat two-tank document parses field for field") {
  const acwa::Scenario s =
      acwa::topology_template(acwa::Topology::TwoTank);

  CHECK(s.unique_id == "20230916205552_1A67EF");
  CHECK(s.duration == 300.0);
  CHECK(s.time_step == 1.0);
  CHECK(s.output_schema == acwa::OutputSchema::Table4);
  CHECK(s.air_temperature == 20.0);

  REQUIRE(s.nodes.size() == 2);
  const acwa::TankSpec& t1 = s.nodes[0];
  CHECK(t1.id == "Tank 1");
  CHECK(t1.shape == acwa::TankShape::Rectangular);
  CHECK(t1.length.value() == 0.5);
  CHECK(t1.width.value() == 0.3);
  CHECK(t1.height == 0.3);
  CHECK(t1.initial_level == 0.2);
  CHECK(t1.reservoir);
  CHECK(t1.plan_area() == Approx(0.15).epsilon(1e-15));
  const acwa::TankSpec& t2 = s.nodes[1];
  CHECK(t2.id == "Tank 2");
  CHECK(t2.initial_level == 0.0);
  CHECK_FALSE(t2.reservoir);

  REQUIRE(s.links.size() == 1);
  const acwa::LinkSpec& l = s.links[0];
  CHECK(l.source == "Tank 1");
  CHECK(l.destination == "Tank 2");
  CHECK(l.label() == "Tank 1->Tank 2");
  CHECK(l.driver == acwa::DriverType::Pump);
  CHECK(l.rated_flow == Approx(0.0035).epsilon(1e-15));  // 3.5 L/s
  CHECK(l.pump_id == "P1");
  CHECK(l.valve_opening == 1.0);
  CHECK(l.pipe.diameter == 0.1);
  CHECK(l.pipe.length == 3.0);
  CHECK(l.pipe.roughness == Approx(2e-5).epsilon(1e-15));  // 0.02 mm
  CHECK(l.pipe.relative_roughness() == Approx(2e-4).epsilon(1e-12));
  CHECK(l.pipe.material == "PVC");
  CHECK(l.pipe.k_sum() == Approx(1.5).epsilon(1e-15));
  CHECK(l.pipe.surface_temperature == 20.0);

  CHECK(s.initial.temperature == 26.0);
  CHECK(s.initial.ph == 7.0);
  CHECK(s.initial.bod == 0.0);                      // blank -> 0
  CHECK_FALSE(s.initial.dissolved_oxygen.has_value());  // blank -> saturation
  CHECK(s.initial.nitrate == 10.0);
  CHECK(s.initial.naoh == 0.0);

  CHECK(s.kinetics.bod_decay_rate == 0.23);
  CHECK(s.kinetics.reaeration_rate == 0.4);
  CHECK(s.kinetics.nitrate_bulk_rate == 0.0);
  CHECK(s.kinetics.nitrate_wall_rate == 0.0);
}

TEST_CASE("missing mandatory flat fields are all reported at once") {
  // Strip several required fields; the error must name every one of them.
  acwa::ojson doc = acwa::ojson::parse(R"({
    "Tank 1 Type": "Rectangular",
    "Tank 1 Length": "0.5",
    "Tank 1 Width": "0.3",
    "Tank 1 Height": "0.3",
    "Tank 2 Type": "Rectangular",
    "Tank 2 Length": "0.5",
    "Tank 2 Width": "0.3",
    "Tank 2 Height": "0.3",
    "Tank 2 Initial Water Level": "0",
    "Pipe Diameter": "0.1",
    "Water Temperature": "26"
  })");
  try {
    acwa::parse_scenario(doc);
    FAIL("expected a validation error");
  } catch (const acwa::ValidationError& e) {
    const std::string msg = e.what();
    for (const char* f : {"Tank 1 Initial Water Level", "Pipe Length",
                          "Pump Flow Rate", "Simulation Time", "Unique ID"}) {
      INFO("missing name: " << f << " in: " << msg);
      CHECK(msg.find(f) != std::string::npos);
    }
  }
}

TEST_CASE("unknown fields are rejected by name") {
  acwa::ojson doc =
      acwa::ojson::parse(acwa::serialize_scenario(
                             acwa::topology_template(acwa::Topology::TwoTank))
                             .dump());
  doc["simulation"]["frobnicator"] = 1;
  CHECK_THROWS_WITH(acwa::parse_scenario(doc),
                    Catch::Matchers::ContainsSubstring("frobnicator"));

  acwa::ojson flat = acwa::ojson::parse(R"({"Pump Speed": "11"})");
  CHECK_THROWS_WITH(acwa::parse_scenario(flat),
                    Catch::Matchers::ContainsSubstring("Pump Speed"));
}

TEST_CASE("blank-tolerant fields versus malformed numbers") {
  const char* base = R"({
    "Tank 1 Type": "Rectangular", "Tank 1 Length": "0.5",
    "Tank 1 Width": "0.3", "Tank 1 Height": "0.3",
    "Tank 1 Initial Water Level": "0.2",
    "Tank 2 Type": "Rectangular", "Tank 2 Length": "0.5",
    "Tank 2 Width": "0.3", "Tank 2 Height": "0.3",
    "Tank 2 Initial Water Level": "0",
    "Pipe Diameter": "0.1", "Pipe Length": "3",
    "Pump Flow Rate": "3.5", "Simulation Time": "300",
    "Unique ID": "x", "BOD": "", "DO": "   "
  })";
  const acwa::Scenario s = acwa::parse_scenario_text(base);
  CHECK(s.initial.bod == 0.0);
  CHECK_FALSE(s.initial.dissolved_oxygen.has_value());

  acwa::ojson doc = acwa::ojson::parse(base);
  doc["BOD"] = "2.88sludge";
  CHECK_THROWS_WITH(acwa::parse_scenario(doc),
                    Catch::Matchers::ContainsSubstring("BOD"));
}

TEST_CASE("cylindrical tanks use the circular plan area") {
  acwa::TankSpec t;
  t.shape = acwa::TankShape::Cylindrical;
  t.diameter = 0.4;
  t.height = 1.0;
  CHECK(t.plan_area() == Approx(acwa::PI * 0.04).epsilon(1e-15));
  CHECK(t.capacity() == Approx(acwa::PI * 0.04).epsilon(1e-15));
}

TEST_CASE("serialize then parse is the identity on every preset") {
  for (acwa::Topology topo :
       {acwa::Topology::TwoTank, acwa::Topology::Line, acwa::Topology::Bus,
        acwa::Topology::Star}) {
    const acwa::Scenario s = acwa::topology_template(topo);
    const acwa::Scenario back = acwa::parse_scenario(acwa::serialize_scenario(s));
    CHECK(back == s);
    // And it is stable through a second lap.
    CHECK(acwa::serialize_scenario(back) == acwa::serialize_scenario(s));
  }
}

TEST_CASE("scenario digest is stable and content-sensitive") {
  const acwa::Scenario a = acwa::topology_template(acwa::Topology::TwoTank);
  acwa::Scenario b = a;
  CHECK(acwa::scenario_digest(a) == acwa::scenario_digest(b));
  CHECK(acwa::scenario_digest(a).size() == 16);
  b.initial.nitrate = 11.0;
  CHECK(acwa::scenario_digest(a) != acwa::scenario_digest(b));
}

TEST_CASE("extended form accepts unit suffixes and converts to SI") {
  acwa::ojson doc =
      acwa::serialize_scenario(acwa::topology_template(acwa::Topology::TwoTank));
  doc["simulation"]["duration"] = "5 min";
  doc["nodes"]["Tank 1"]["length"] = "50 cm";
  doc["links"][0]["pipe"]["diameter"] = "4 in";
  doc["links"][0]["rated_flow"] = "3.5 L/s";
  const acwa::Scenario s = acwa::parse_scenario(doc);
  CHECK(s.duration == 300.0);
  CHECK(s.nodes[0].length.value() == Approx(0.5).epsilon(1e-15));
  CHECK(s.links[0].pipe.diameter == Approx(0.1016).epsilon(1e-15));
  CHECK(s.links[0].rated_flow == Approx(0.0035).epsilon(1e-15));

  doc["simulation"]["duration"] = "5 fortnights";
  CHECK_THROWS_WITH(acwa::parse_scenario(doc),
                    Catch::Matchers::ContainsSubstring("fortnights"));
  doc["simulation"]["duration"] = 300;
  CHECK_THROWS_WITH(acwa::parse_scenario(doc),
                    Catch::Matchers::ContainsSubstring("unit suffix"));
}

TEST_CASE("numbers survive the shortest round-trip format") {
  for (double v : {0.1, 1.0 / 3.0, 2e-5, 998.2041322005836, 1e-300, 0.0}) {
    const std::string text = acwa::detail_io::format_number(v);
    CHECK(std::stod(text) == v);
  }
}

TEST_CASE("file loader reports the path on every failure") {
  CHECK_THROWS_WITH(acwa::load_scenario("/nonexistent/file.json"),
                    Catch::Matchers::ContainsSubstring("/nonexistent/file.json"));
}
