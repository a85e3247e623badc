#pragma once

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "acwa/constants.hpp"
#include "acwa/fluid.hpp"
#include "acwa/hydraulics.hpp"
#include "acwa/scenario.hpp"

// Pre-run scenario validation.
//
// Errors block simulation; Warnings describe runs that will work but hit
// guards (unprimed pipes, clamped transfers, strict-policy aborts). The
// report is deterministic: same scenario, same list, same order.

namespace acwa {

enum class Severity { Error, Warning };

struct Violation {
  std::string code;  // stable machine-readable tag
  Severity severity;
  std::string subject;  // node id, link label, or "" for scenario-wide
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const {
    for (const auto& v : violations) {
      if (v.severity == Severity::Error) return false;
    }
    return true;
  }
  int error_count() const {
    int n = 0;
    for (const auto& v : violations) n += v.severity == Severity::Error;
    return n;
  }
  int warning_count() const {
    return static_cast<int>(violations.size()) - error_count();
  }
};

namespace detail_validate {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// True when duration sits on the time-step grid (within 1e-9 s).
inline bool on_grid(double duration, double dt) {
  const double steps = duration / dt;
  return std::fabs(steps - std::round(steps)) * dt < 1e-9;
}

}  // namespace detail_validate

inline ValidationReport validate(const Scenario& s) {
  using detail_validate::num;
  ValidationReport report;
  const auto error = [&](const std::string& code, const std::string& subject,
                         const std::string& message) {
    report.violations.push_back({code, Severity::Error, subject, message});
  };
  const auto warn = [&](const std::string& code, const std::string& subject,
                        const std::string& message) {
    report.violations.push_back({code, Severity::Warning, subject, message});
  };

  if (s.unique_id.empty()) {
    error("identity", "", "unique_id must be nonempty");
  }
  if (!(s.duration > 0.0)) {
    error("duration-grid", "", "duration must be > 0 s");
  }
  if (!(s.time_step > 0.0)) {
    error("duration-grid", "", "time_step must be > 0 s");
  } else if (s.duration > 0.0 &&
             !detail_validate::on_grid(s.duration, s.time_step)) {
    error("duration-grid", "",
          "duration " + num(s.duration) + " s is not a whole number of " +
              num(s.time_step) + " s steps");
  }
  if (s.output_schema == OutputSchema::Table4 && s.duration >= 86400.0) {
    error("schema-horizon", "",
          "the clock-time output schema formats HH:MM:SS and cannot represent " +
              num(s.duration) + " s; use the seconds schema for runs of a day or longer");
  }
  if (s.nodes.empty()) {
    error("identity", "", "scenario has no nodes");
  }

  int reservoirs = 0;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    const TankSpec& t = s.nodes[i];
    for (std::size_t j = i + 1; j < s.nodes.size(); ++j) {
      if (s.nodes[j].id == t.id) {
        error("identity", t.id, "duplicate node id");
      }
    }
    reservoirs += t.reservoir;
    if (t.shape == TankShape::Rectangular) {
      if (!(t.length && *t.length > 0.0) || !(t.width && *t.width > 0.0)) {
        error("dimension", t.id, "rectangular tank needs length > 0 and width > 0");
      }
      if (t.diameter) {
        error("dimension", t.id, "rectangular tank cannot have a diameter");
      }
    } else {
      if (!(t.diameter && *t.diameter > 0.0)) {
        error("dimension", t.id, "cylindrical tank needs diameter > 0");
      }
      if (t.length || t.width) {
        error("dimension", t.id, "cylindrical tank cannot have length/width");
      }
    }
    if (!(t.height > 0.0)) {
      error("dimension", t.id, "tank height must be > 0");
    }
    if (t.initial_level < 0.0 || t.initial_level > t.height) {
      error("water-level", t.id,
            "initial level " + num(t.initial_level) + " m outside [0, " +
                num(t.height) + "] m");
    }
  }
  if (reservoirs > 1) {
    error("identity", "", "at most one node may be flagged as the reservoir");
  }

  const double nu = (s.initial.temperature >= 0.0 && s.initial.temperature <= 100.0)
                        ? kinematic_viscosity(s.initial.temperature)
                        : 0.0;
  if (nu == 0.0) {
    error("domain", "",
          "initial water temperature " + num(s.initial.temperature) +
              " C outside [0, 100] C");
  }

  const auto outgoing = [&](const std::string& node) {
    int n = 0;
    for (const auto& l : s.links) n += l.source == node;
    return n;
  };
  const auto incoming = [&](const std::string& node) {
    int n = 0;
    for (const auto& l : s.links) n += l.destination == node;
    return n;
  };

  for (const LinkSpec& l : s.links) {
    const std::string subject = l.label();
    const int src = s.node_index(l.source);
    const int dst = s.node_index(l.destination);
    if (src < 0) error("link-endpoint", subject, "unknown source '" + l.source + "'");
    if (dst < 0) error("link-endpoint", subject, "unknown destination '" + l.destination + "'");
    if (l.source == l.destination) {
      error("link-endpoint", subject, "source and destination must differ");
    }
    if (!(l.pipe.diameter > 0.0) || !(l.pipe.length > 0.0)) {
      error("dimension", subject, "pipe needs diameter > 0 and length > 0");
      continue;
    }
    if (l.pipe.roughness < 0.0 || l.pipe.relative_roughness() > 0.05) {
      error("dimension", subject,
            "pipe roughness " + num(l.pipe.roughness) +
                " m outside [0, 0.05 D]");
    }
    for (double k : l.pipe.minor_losses) {
      if (k < 0.0) {
        error("dimension", subject, "minor loss coefficients must be >= 0");
        break;
      }
    }
    if (l.valve_opening < 0.0 || l.valve_opening > 1.0) {
      error("valve", subject, "valve_opening must lie in [0, 1]");
    }
    if (l.driver == DriverType::Pump && !(l.rated_flow > 0.0)) {
      error("driver", subject, "pump link needs rated_flow > 0");
    }
    if (src < 0 || dst < 0) continue;
    const TankSpec& source = s.nodes[src];
    const TankSpec& dest = s.nodes[dst];

    // Pipe-full guard: the intake must sit below 1.5 pipe diameters of
    // water or the pipe runs partly dry from the start.
    const double prime = 1.5 * l.pipe.diameter;
    if (source.initial_level <= prime) {
      warn("priming", subject,
           "source starts unprimed: level " + num(source.initial_level) +
               " m <= 1.5 D = " + num(prime) + " m; the link delivers nothing until the level rises");
    } else if (l.driver == DriverType::Pump && incoming(l.source) == 0) {
      // No inflow can replenish the source, so the pump's own draw is a
      // hard bound on how long the pipe stays primed.
      const double margin = source.initial_level - prime;
      const double draw =
          l.rated_flow * l.valve_opening * s.duration / source.plan_area();
      if (draw > margin) {
        warn("priming", subject,
             "primed drawdown margin is " + num(margin) + " m (1.5 D = " +
                 num(prime) + " m under the " + num(source.initial_level) +
                 " m start level) but the pump would draw " + num(draw) +
                 " m over the horizon; the pipe will run unprimed mid-run");
      }
    }

    if (l.driver == DriverType::Pump) {
      // Whole-transfer overflow feasibility; enforced only when nothing can
      // leave the destination (recirculating layouts handle it per step).
      if (outgoing(l.destination) == 0) {
        const double headroom = dest.plan_area() * (dest.height - dest.initial_level);
        const double supply = source.plan_area() * source.initial_level;
        if (headroom < supply) {
          error("overflow", subject,
                "destination headroom " + num(headroom) +
                    " m^3 cannot absorb the source's " + num(supply) +
                    " m^3 and no link drains it");
        } else {
          // With inflow behind it the source keeps refilling, so the pump's
          // own draw over the horizon is the binding quantity; without
          // inflow the source's initial volume caps the transfer.
          double transferable = l.rated_flow * l.valve_opening * s.duration;
          if (incoming(l.source) == 0) transferable = std::fmin(supply, transferable);
          if (transferable > headroom) {
            warn("clamped-transfer", subject,
                 "the pump would move " + num(transferable) +
                     " m^3 but the destination only holds " + num(headroom) +
                     " m^3 more; expect per-step clamping");
          }
        }
      }
      if (nu > 0.0 && l.rated_flow > 0.0 && l.valve_opening > 0.0) {
        const double v =
            flow_velocity(l.rated_flow * l.valve_opening, l.pipe.diameter);
        const double re = reynolds(v, l.pipe.diameter, nu);
        if (classify_regime(re) == FlowRegime::Transitional) {
          warn("transitional-flow", subject,
               "rated flow sits in the transitional band (Re = " + num(re) +
                   "); the strict regime policy refuses such runs");
        }
      }
    }
  }

  // Cycle check over non-return links (Kahn's algorithm). Return links are
  // declared recirculation and exempt.
  {
    const std::size_t n = s.nodes.size();
    std::vector<int> indegree(n, 0);
    std::vector<std::vector<int>> adj(n);
    bool edges_ok = true;
    for (const LinkSpec& l : s.links) {
      if (l.return_line) continue;
      const int a = s.node_index(l.source);
      const int b = s.node_index(l.destination);
      if (a < 0 || b < 0) {
        edges_ok = false;
        continue;
      }
      adj[a].push_back(b);
      ++indegree[b];
    }
    if (edges_ok) {
      std::vector<int> queue;
      for (std::size_t i = 0; i < n; ++i) {
        if (indegree[i] == 0) queue.push_back(static_cast<int>(i));
      }
      std::size_t seen = 0;
      while (!queue.empty()) {
        const int v = queue.back();
        queue.pop_back();
        ++seen;
        for (int w : adj[v]) {
          if (--indegree[w] == 0) queue.push_back(w);
        }
      }
      if (seen != n) {
        for (std::size_t i = 0; i < n; ++i) {
          if (indegree[i] > 0) {
            error("acyclicity", s.nodes[i].id,
                  "link graph cycles through this node; flag recirculation "
                  "links as return lines");
            break;
          }
        }
      }
    }
  }

  return report;
}

inline std::string format_report(const ValidationReport& report) {
  std::string out;
  for (const Violation& v : report.violations) {
    out += v.severity == Severity::Error ? "ERROR" : "WARNING";
    out += " [" + v.code + "]";
    if (!v.subject.empty()) out += " " + v.subject;
    out += ": " + v.message + "\n";
  }
  return out;
}

}  // namespace acwa
