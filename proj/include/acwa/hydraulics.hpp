#pragma once

#include <cmath>
#include <string>

#include "acwa/constants.hpp"
#include "acwa/errors.hpp"

// Pipe hydraulics: Reynolds classification, Darcy friction via the
// Colebrook-White relation, Darcy-Weisbach and minor losses, hydrostatic
// pressure, and the gravity-driven flow solver.
//
// Conventions: SI throughout; velocities are bulk (area-averaged); friction
// factors are Darcy (not Fanning); pressure is gauge.

namespace acwa {

enum class FlowRegime { Still, Laminar, Transitional, Turbulent };

// What to do when a flow lands in the transitional band (2300..4000):
// Strict refuses to model it; Lenient extends the turbulent correlation
// down into the band and lets the caller flag the step.
enum class RegimePolicy { Strict, Lenient };

inline const char* to_string(FlowRegime r) {
  switch (r) {
    case FlowRegime::Still: return "still";
    case FlowRegime::Laminar: return "laminar";
    case FlowRegime::Transitional: return "transitional";
    case FlowRegime::Turbulent: return "turbulent";
  }
  return "?";
}

// Cross-sectional area of a circular pipe [m^2], D > 0.
inline double pipe_area(double diameter) {
  if (!(diameter > 0.0)) {
    throw DomainError("pipe_area: diameter must be > 0");
  }
  return 0.25 * PI * diameter * diameter;
}

// Bulk velocity [m/s] for volumetric flow Q [m^3/s] in a pipe of diameter D.
inline double flow_velocity(double flow, double diameter) {
  if (!(flow >= 0.0)) throw DomainError("flow_velocity: flow must be >= 0");
  return flow / pipe_area(diameter);
}

// Reynolds number; v [m/s], D [m], nu [m^2/s].
inline double reynolds(double velocity, double diameter, double nu) {
  if (!(nu > 0.0)) throw DomainError("reynolds: viscosity must be > 0");
  if (!(diameter > 0.0)) throw DomainError("reynolds: diameter must be > 0");
  if (!(velocity >= 0.0)) throw DomainError("reynolds: velocity must be >= 0");
  return velocity * diameter / nu;
}

// Regime bands: laminar below 2300, transitional 2300..4000 inclusive,
// turbulent above 4000. Re == 0 is Still.
inline FlowRegime classify_regime(double re) {
  if (!(re >= 0.0)) throw DomainError("classify_regime: Re must be >= 0");
  if (re == 0.0) return FlowRegime::Still;
  if (re < RE_LAMINAR_MAX) return FlowRegime::Laminar;
  if (re <= RE_TURBULENT_MIN) return FlowRegime::Transitional;
  return FlowRegime::Turbulent;
}

// Swamee-Jain explicit friction approximation; used only to seed the
// Colebrook iteration and as a sanity corridor in tests.
inline double swamee_jain(double re, double rel_roughness) {
  const double x = std::log10(rel_roughness / 3.7 + 5.74 / std::pow(re, 0.9));
  return 0.25 / (x * x);
}

// Darcy friction factor with convergence diagnostics.
struct FrictionSolve {
  double f;           // Darcy friction factor
  int iterations;     // fixed-point iterations (0 for the laminar branch)
  double residual;    // |1/sqrt(f) + 2 log10(rr/3.71 + 2.51/(Re sqrt(f)))|
};

// Solve the Colebrook-White relation
//   1/sqrt(f) = -2 log10( rr/3.71 + 2.51/(Re sqrt(f)) )
// by fixed-point iteration on x = 1/sqrt(f), seeded with Swamee-Jain.
// Contraction is strong for Re > 2300 (observed <= 13 iterations to 1e-10
// over Re in [2.3e3, 1e8], rr in [0, 0.05]).
//
// Below 2300 the laminar closed form f = 64/Re applies and the residual
// reported is 0. Domain: Re > 0, 0 <= rr <= 0.05.
inline FrictionSolve friction_factor_solve(double re, double rel_roughness) {
  if (!(re > 0.0)) throw DomainError("friction_factor: Re must be > 0");
  if (!(rel_roughness >= 0.0 && rel_roughness <= 0.05)) {
    throw DomainError("friction_factor: relative roughness outside [0, 0.05]");
  }
  if (re < RE_LAMINAR_MAX) {
    return FrictionSolve{64.0 / re, 0, 0.0};
  }
  const double wall = rel_roughness / 3.71;
  double x = 1.0 / std::sqrt(swamee_jain(re, rel_roughness));
  int it = 0;
  for (; it < 100; ++it) {
    const double next = -2.0 * std::log10(wall + 2.51 * x / re);
    const double dx = std::fabs(next - x);
    x = next;
    if (dx < 1e-10) break;
  }
  if (it >= 100) {
    throw SolverFailure("friction_factor: no convergence at Re=" +
                        std::to_string(re));
  }
  const double f = 1.0 / (x * x);
  const double residual =
      std::fabs(x + 2.0 * std::log10(wall + 2.51 / (re * std::sqrt(f))));
  return FrictionSolve{f, it + 1, residual};
}

inline double friction_factor(double re, double rel_roughness) {
  return friction_factor_solve(re, rel_roughness).f;
}

// Darcy-Weisbach major loss [m of head]: f (L/D) v^2 / 2g.
inline double pipe_head_loss(double f, double length, double diameter,
                             double velocity) {
  if (!(length >= 0.0)) throw DomainError("pipe_head_loss: length must be >= 0");
  if (!(diameter > 0.0)) throw DomainError("pipe_head_loss: diameter must be > 0");
  return f * (length / diameter) * velocity * velocity / (2.0 * GRAVITY);
}

// Minor (fitting) loss [m of head]: sum(K) v^2 / 2g.
inline double minor_loss(double k_sum, double velocity) {
  if (!(k_sum >= 0.0)) throw DomainError("minor_loss: K must be >= 0");
  return k_sum * velocity * velocity / (2.0 * GRAVITY);
}

// Hydrostatic gauge pressure [Pa] at depth below the free surface.
inline double elevation_pressure(double density, double depth) {
  if (!(density > 0.0)) throw DomainError("elevation_pressure: density must be > 0");
  if (!(depth >= 0.0)) throw DomainError("elevation_pressure: depth must be >= 0");
  return density * GRAVITY * depth;
}

inline double pascal_to_psi(double pa) { return pa / PA_PER_PSI; }

// Kinematics + friction snapshot of one link at one instant.
struct FlowState {
  double flow = 0.0;      // [m^3/s]
  double velocity = 0.0;  // [m/s]
  double reynolds = 0.0;
  double friction = 0.0;  // Darcy f; 0 when still
  FlowRegime regime = FlowRegime::Still;
};

// Build the FlowState for a known flow rate (pump-driven links).
inline FlowState flow_state_for(double flow, double diameter, double nu,
                                double rel_roughness) {
  FlowState s;
  s.flow = flow;
  if (flow <= 0.0) return s;
  s.velocity = flow_velocity(flow, diameter);
  s.reynolds = reynolds(s.velocity, diameter, nu);
  s.regime = classify_regime(s.reynolds);
  s.friction = friction_factor(s.reynolds, rel_roughness);
  return s;
}

// Result of the gravity-driven velocity solve.
struct GravitySolve {
  FlowState state;
  int iterations = 0;
  // Energy balance residual [m]: head - (f L/D + sum K) v^2/2g.
  double residual = 0.0;
};

// Solve for the steady velocity of gravity-driven flow through a pipe under
// driving head H: energy balance
//   H = (f(v) L/D + sum K) v^2 / 2g,
// iterated as v <- sqrt(2 g H / (f(v) L/D + sum K)) until |dv| < 1e-10
// (cap 200 iterations). `friction` maps velocity -> Darcy f and must be
// positive; inject a constant to reproduce closed-form solutions.
//
// H <= 0 yields no flow (still water); the caller decides whether a
// negative head is an error or simply a closed path.
template <class FrictionFn>
GravitySolve gravity_velocity_with(double head, double length, double diameter,
                                   double k_sum, FrictionFn&& friction) {
  if (!(length > 0.0)) throw DomainError("gravity_velocity: length must be > 0");
  if (!(diameter > 0.0)) throw DomainError("gravity_velocity: diameter must be > 0");
  if (!(k_sum >= 0.0)) throw DomainError("gravity_velocity: K must be >= 0");
  GravitySolve out;
  if (!(head > 0.0)) return out;

  const double ld = length / diameter;
  const double drive = 2.0 * GRAVITY * head;
  double v = std::sqrt(drive / (0.02 * ld + k_sum + 1.0));
  int it = 0;
  double f = 0.0;
  for (; it < 200; ++it) {
    f = friction(v);
    if (!(f > 0.0)) {
      throw ContractViolation("gravity_velocity: friction model returned f <= 0");
    }
    const double next = std::sqrt(drive / (f * ld + k_sum));
    const double dv = std::fabs(next - v);
    v = next;
    if (dv < 1e-10) break;
  }
  if (it >= 200) {
    // The loss curve is monotone in v but jumps upward where the friction
    // law switches from the laminar line to Colebrook-White (Re = 2300).
    // When H lands inside that jump the fixed point cycles between the two
    // branches forever; the steady state is the jump velocity itself, which
    // bisection on loss(v) - H finds (it also mops up plain slow
    // convergence). Endpoint lo = 0 is never evaluated: only midpoints are.
    const auto loss = [&](double w) {
      const double fw = friction(w);
      if (!(fw > 0.0)) {
        throw ContractViolation(
            "gravity_velocity: friction model returned f <= 0");
      }
      return (fw * ld + k_sum) * w * w / (2.0 * GRAVITY);
    };
    double lo = 0.0;
    double hi = std::fmax(v, 1e-6);
    int grow = 0;
    while (loss(hi) < head) {
      hi *= 2.0;
      if (++grow > 80) {
        throw SolverFailure("gravity_velocity: no convergence, head=" +
                            std::to_string(head));
      }
    }
    for (int b = 0; b < 100; ++b) {
      const double mid = 0.5 * (lo + hi);
      if (loss(mid) < head) {
        lo = mid;
      } else {
        hi = mid;
      }
      ++it;
    }
    v = 0.5 * (lo + hi);
    f = friction(v);
  }
  out.state.velocity = v;
  out.state.friction = f;
  out.iterations = it + 1;
  out.residual = head - (f * ld + k_sum) * v * v / (2.0 * GRAVITY);
  return out;
}

// Physical variant: friction from the laminar law / Colebrook-White switch
// at the water's kinematic viscosity. Fills in Re, regime and flow rate.
inline GravitySolve gravity_velocity(double head, double length,
                                     double diameter, double k_sum, double nu,
                                     double rel_roughness) {
  auto friction = [&](double v) {
    const double re = reynolds(v, diameter, nu);
    // The solver can probe v == 0 only if head <= 0, which is handled above.
    return friction_factor(re, rel_roughness);
  };
  GravitySolve out =
      gravity_velocity_with(head, length, diameter, k_sum, friction);
  if (out.state.velocity > 0.0) {
    out.state.reynolds = reynolds(out.state.velocity, diameter, nu);
    out.state.regime = classify_regime(out.state.reynolds);
    out.state.flow = out.state.velocity * pipe_area(diameter);
  }
  return out;
}

}  // namespace acwa
