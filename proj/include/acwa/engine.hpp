#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "acwa/chemistry.hpp"
#include "acwa/constants.hpp"
#include "acwa/errors.hpp"
#include "acwa/fluid.hpp"
#include "acwa/hydraulics.hpp"
#include "acwa/scenario.hpp"
#include "acwa/transport.hpp"
#include "acwa/validate.hpp"

// Time-stepping simulation engine.
//
// State is volume-primary: each tank holds a water volume plus one
// constituent vector; water levels, pressures, and masses are derived views.
// Each step runs a fixed sub-phase order so results are reproducible to the
// bit regardless of platform or link count:
//
//   (a) dispatch: plan every link's transfer from the pre-step state,
//       applying guards in a fixed order (valve, pipe priming, source
//       emptying, destination capacity);
//   (b) withdraw the planned volumes from all sources;
//   (c) advect through every pipe (plug flow, transit-time chemistry);
//   (d) deliver and blend into destinations, in link order;
//   (e) react in-tank chemistry;
//   (f) advance the clock.
//
// Guards raise events on their rising edge only; a guard that stays engaged
// for a thousand steps is one event, and it re-arms once the condition
// clears. Events carry the clock at the *start* of the step that tripped
// them.

namespace acwa {

enum class EventKind { ValveClosed, PipeUnprimed, SourceEmpty, DestinationFull };
inline constexpr int EVENT_KIND_COUNT = 4;

inline const char* to_string(EventKind k) {
  switch (k) {
    case EventKind::ValveClosed: return "ValveClosed";
    case EventKind::PipeUnprimed: return "PipeUnprimed";
    case EventKind::SourceEmpty: return "SourceEmpty";
    case EventKind::DestinationFull: return "DestinationFull";
  }
  return "?";
}

struct Event {
  double time = 0.0;  // clock at the start of the step that tripped it [s]
  std::string link;   // "source->destination"
  EventKind kind = EventKind::ValveClosed;
  std::string detail;
};

struct LinkRuntime {
  PipeTransport pipe;
  FlowState last_flow{};           // hydraulics at the last commanded flow
  double last_effective_flow = 0.0;  // post-guard delivered rate [m^3/s]
  double cumulative_volume = 0.0;  // total delivered downstream [m^3]
  bool engaged[EVENT_KIND_COUNT] = {};
};

struct SimState {
  double clock = 0.0;  // [s]
  std::vector<double> volume;  // per node [m^3], parallel to Scenario::nodes
  std::vector<ConstituentVector> water;  // per node
  std::vector<LinkRuntime> links;        // parallel to Scenario::links
  std::vector<Event> events;
};

// One link's planned transfer for a sub-step, before any state mutates.
struct LinkPlan {
  double volume = 0.0;     // [m^3] to move after all guards
  double flow = 0.0;       // effective rate volume/dt [m^3/s]
  FlowState state{};       // hydraulics at the commanded (pre-clamp) flow
  double commanded = 0.0;  // [m^3] the driver asked for
  double after_source = 0.0;  // [m^3] left after the source guard
  double source_level = 0.0;  // pre-step source level [m]
  bool valve_closed = false;
  bool unprimed = false;
  bool source_limited = false;
  bool destination_limited = false;
};

struct RunOptions {
  RegimePolicy policy = RegimePolicy::Lenient;
  // When > 0, each scenario time step is subdivided into equal sub-steps no
  // longer than this, for runs whose per-step displacement would otherwise
  // exceed one pipe volume. 0 = no subdivision.
  double max_dt = 0.0;
};

// Plan one sub-step of length dt from the current state without mutating it.
// Pure: calling it twice in a row yields the identical plan. Guards apply in
// the fixed order valve -> priming -> source limit -> destination limit, and
// later links see the volume already claimed or delivered by earlier ones
// (working availability and headroom).
inline std::vector<LinkPlan> plan_step(const SimState& st, const Scenario& s,
                                       double dt, RegimePolicy policy) {
  const std::size_t n_nodes = s.nodes.size();
  std::vector<double> avail(n_nodes);
  std::vector<double> headroom(n_nodes);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    avail[i] = st.volume[i];
    headroom[i] = std::fmax(0.0, s.nodes[i].capacity() - st.volume[i]);
  }

  std::vector<LinkPlan> plans(s.links.size());
  for (std::size_t k = 0; k < s.links.size(); ++k) {
    const LinkSpec& l = s.links[k];
    LinkPlan& p = plans[k];
    const int src = s.node_index(l.source);
    const int dst = s.node_index(l.destination);
    const TankSpec& source = s.nodes[src];
    const TankSpec& dest = s.nodes[dst];
    p.source_level = st.volume[src] / source.plan_area();

    double q = 0.0;  // commanded volumetric rate [m^3/s]
    if (l.valve_opening <= 0.0) {
      p.valve_closed = true;
    } else {
      bool would_flow;
      double head = 0.0;
      if (l.driver == DriverType::Pump) {
        would_flow = l.rated_flow > 0.0;
      } else {
        const double dest_level = st.volume[dst] / dest.plan_area();
        head = (source.base_elevation + p.source_level) -
               (dest.base_elevation + dest_level);
        would_flow = head > 0.0;
      }
      if (would_flow) {
        if (p.source_level <= 1.5 * l.pipe.diameter) {
          // Intake above the pipe-full waterline: the link moves nothing
          // until the source level climbs back over 1.5 D.
          p.unprimed = true;
        } else {
          const double nu = kinematic_viscosity(st.water[src].temperature);
          if (l.driver == DriverType::Pump) {
            q = l.rated_flow * l.valve_opening;
          } else {
            const GravitySolve g = gravity_velocity(
                head, l.pipe.length, l.pipe.diameter, l.pipe.k_sum(), nu,
                l.pipe.relative_roughness());
            q = g.state.flow * l.valve_opening;
          }
          p.state = flow_state_for(q, l.pipe.diameter, nu,
                                   l.pipe.relative_roughness());
          if (policy == RegimePolicy::Strict &&
              p.state.regime == FlowRegime::Transitional) {
            throw RegimeError(
                "link '" + l.label() + "': commanded flow is transitional (Re = " +
                std::to_string(p.state.reynolds) +
                ") and the strict regime policy refuses it");
          }
        }
      }
    }

    p.commanded = q * dt;
    double dv = p.commanded;
    if (dv > avail[src]) {
      dv = avail[src];
      p.source_limited = true;
    }
    p.after_source = dv;
    if (dv > headroom[dst]) {
      dv = headroom[dst];
      p.destination_limited = true;
    }
    dv = std::fmax(dv, 0.0);
    p.volume = dv;
    p.flow = dt > 0.0 ? dv / dt : 0.0;
    avail[src] -= dv;
    headroom[dst] -= dv;
  }
  return plans;
}

namespace detail_engine {

inline std::string num(double v) { return detail_validate::num(v); }

inline void edge(SimState& st, LinkRuntime& rt, const LinkSpec& l, double t,
                 EventKind kind, bool engaged_now, const std::string& detail) {
  bool& flag = rt.engaged[static_cast<int>(kind)];
  if (engaged_now) {
    if (!flag) {
      st.events.push_back(Event{t, l.label(), kind, detail});
      flag = true;
    }
  } else {
    flag = false;
  }
}

inline void substep(SimState& st, const Scenario& s, double dt,
                    RegimePolicy policy, const ReactionParams& rp) {
  const double t0 = st.clock;
  const std::vector<LinkPlan> plans = plan_step(st, s, dt, policy);

  // Events first (they describe the plan), then the mutations.
  for (std::size_t k = 0; k < s.links.size(); ++k) {
    const LinkSpec& l = s.links[k];
    const LinkPlan& p = plans[k];
    LinkRuntime& rt = st.links[k];
    edge(st, rt, l, t0, EventKind::ValveClosed, p.valve_closed,
         p.valve_closed ? "valve opening is 0" : "");
    edge(st, rt, l, t0, EventKind::PipeUnprimed, p.unprimed,
         p.unprimed ? "source level " + num(p.source_level) + " m <= 1.5 D = " +
                          num(1.5 * l.pipe.diameter) + " m"
                    : "");
    edge(st, rt, l, t0, EventKind::SourceEmpty, p.source_limited,
         p.source_limited
             ? "source can supply " + num(p.after_source) + " m^3 of the " +
                   num(p.commanded) + " m^3 commanded"
             : "");
    edge(st, rt, l, t0, EventKind::DestinationFull, p.destination_limited,
         p.destination_limited
             ? "destination headroom " + num(p.volume) + " m^3 below the " +
                   num(p.after_source) + " m^3 arriving"
             : "");
    rt.last_flow = p.state;
    rt.last_effective_flow = p.flow;
  }

  // (b) withdraw everywhere. Removing volume does not change composition,
  // so the vectors pushed into pipes below are the pre-step source vectors.
  const std::size_t n_links = s.links.size();
  std::vector<ConstituentVector> pushed(n_links);
  for (std::size_t k = 0; k < n_links; ++k) {
    const int src = s.node_index(s.links[k].source);
    pushed[k] = st.water[src];
    st.volume[src] -= plans[k].volume;
  }

  // (c) advect through every pipe.
  std::vector<PipeTransport::Delivered> delivered(n_links);
  for (std::size_t k = 0; k < n_links; ++k) {
    const LinkSpec& l = s.links[k];
    const TransitParams tp{rp.nitrate_bulk_rate, rp.nitrate_wall_rate,
                           l.pipe.surface_temperature,
                           l.pipe.convective_coefficient};
    delivered[k] = st.links[k].pipe.advance(plans[k].volume, pushed[k], t0,
                                            t0 + dt, plans[k].flow, tp);
  }

  // (d) deliver and blend, in link order.
  for (std::size_t k = 0; k < n_links; ++k) {
    if (delivered[k].volume <= 0.0) continue;
    const int dst = s.node_index(s.links[k].destination);
    st.water[dst] = mix(st.volume[dst], st.water[dst], delivered[k].volume,
                        delivered[k].water);
    st.volume[dst] += delivered[k].volume;
    st.links[k].cumulative_volume += delivered[k].volume;
  }

  // (e) in-tank chemistry.
  for (auto& w : st.water) w = react(w, rp, dt);

  // (f) clock.
  st.clock = t0 + dt;
}

}  // namespace detail_engine

// Build the starting state: tanks at their initial levels, every pipe
// pre-filled with the scenario's initial water. Refuses invalid scenarios.
inline SimState init_state(const Scenario& s) {
  const ValidationReport report = validate(s);
  if (!report.ok()) {
    throw ValidationError("scenario is invalid:\n" + format_report(report));
  }
  SimState st;
  st.clock = 0.0;
  const ConstituentVector base = s.initial_constituents();
  st.volume.reserve(s.nodes.size());
  st.water.reserve(s.nodes.size());
  for (const TankSpec& t : s.nodes) {
    st.volume.push_back(t.plan_area() * t.initial_level);
    st.water.push_back(base);
  }
  st.links.reserve(s.links.size());
  for (const LinkSpec& l : s.links) {
    st.links.push_back(
        LinkRuntime{PipeTransport(l.pipe.diameter, l.pipe.length, base)});
  }
  return st;
}

// Advance the state by one scenario time step (subdividing per options).
inline void step(SimState& st, const Scenario& s, const RunOptions& opt = {}) {
  int nsub = 1;
  if (opt.max_dt > 0.0 && s.time_step > opt.max_dt) {
    nsub = static_cast<int>(std::ceil(s.time_step / opt.max_dt - 1e-12));
  }
  const double dt = s.time_step / nsub;
  const ReactionParams rp = s.reaction_params();
  for (int i = 0; i < nsub; ++i) {
    detail_engine::substep(st, s, dt, opt.policy, rp);
  }
}

// Derived per-node sample for one record.
struct NodeSample {
  double level = 0.0;     // [m]
  double pressure = 0.0;  // gauge pressure at the tank bed [Pa]
  ConstituentVector water;
};

// Derived per-link sample: the delivered (post-guard) rate over the step
// that produced this record. Zero in the t = 0 record.
struct LinkSample {
  double flow = 0.0;      // [m^3/s]
  double velocity = 0.0;  // [m/s]
};

struct SimRecord {
  double time = 0.0;  // [s]
  std::vector<NodeSample> nodes;
  std::vector<LinkSample> links;
};

inline SimRecord make_record(const SimState& st, const Scenario& s) {
  SimRecord r;
  r.time = st.clock;
  r.nodes.resize(s.nodes.size());
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    NodeSample& ns = r.nodes[i];
    ns.level = st.volume[i] / s.nodes[i].plan_area();
    ns.pressure = elevation_pressure(
        water_density(st.water[i].temperature), ns.level);
    ns.water = st.water[i];
  }
  r.links.resize(s.links.size());
  for (std::size_t k = 0; k < s.links.size(); ++k) {
    const double q = st.links[k].last_effective_flow;
    r.links[k].flow = q;
    r.links[k].velocity = flow_velocity(q, s.links[k].pipe.diameter);
  }
  return r;
}

// Total water in the system: tanks plus (constant) pipe holdup.
inline double total_water(const SimState& st) {
  double v = 0.0;
  for (double x : st.volume) v += x;
  for (const LinkRuntime& l : st.links) v += l.pipe.volume();
  return v;
}

struct RunSummary {
  long records = 0;
  std::vector<Event> events;
  std::vector<double> link_volumes;  // cumulative delivered per link [m^3]
  double volume_residual = 0.0;      // |water at end - water at start| [m^3]
  double runtime_seconds = 0.0;      // wall-clock cost of the run
};

// Run a scenario start to finish, streaming one record per grid time to the
// sink: t = 0 first, then one after every step, duration/dt + 1 in total.
// The sink signature is void(const SimRecord&).
template <typename Sink>
RunSummary run(const Scenario& s, const RunOptions& opt, Sink&& sink) {
  const auto wall0 = std::chrono::steady_clock::now();
  SimState st = init_state(s);
  const long n_steps = std::lround(s.duration / s.time_step);
  const double water0 = total_water(st);

  sink(static_cast<const SimRecord&>(make_record(st, s)));
  for (long i = 1; i <= n_steps; ++i) {
    step(st, s, opt);
    st.clock = i * s.time_step;  // keep record times exactly on the grid
    for (std::size_t j = 0; j < s.nodes.size(); ++j) {
      const double cap = s.nodes[j].capacity();
      const double tol = 1e-9 * std::fmax(1.0, cap);
      if (st.volume[j] < -tol || st.volume[j] > cap + tol) {
        throw InvariantBreach("tank '" + s.nodes[j].id +
                              "' volume out of bounds at t = " +
                              detail_engine::num(st.clock) + " s");
      }
    }
    sink(static_cast<const SimRecord&>(make_record(st, s)));
  }

  RunSummary summary;
  summary.records = n_steps + 1;
  summary.events = st.events;
  summary.link_volumes.reserve(st.links.size());
  for (const LinkRuntime& l : st.links) {
    summary.link_volumes.push_back(l.cumulative_volume);
  }
  summary.volume_residual = std::fabs(total_water(st) - water0);
  if (summary.volume_residual > 1e-9 * std::fmax(1.0, water0)) {
    throw InvariantBreach("water volume drifted by " +
                          detail_engine::num(summary.volume_residual) +
                          " m^3 over the run");
  }
  summary.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0)
          .count();
  return summary;
}

}  // namespace acwa
