#pragma once

#include <cmath>

#include "acwa/constants.hpp"
#include "acwa/errors.hpp"

// Water-quality state and reaction kernels.
//
// Constituents tracked per tank and per pipe parcel:
//   temperature [C], pH, BOD [mg/L], dissolved oxygen [mg/L],
//   nitrate [mg/L], NaOH dose [mg/L].
//
// pH model: the water carries a background strong-base burden fixed by the
// scenario's initial pH; dosed NaOH adds to it as a conservative tracer.
// Reported pH solves the charge balance [H+]^2 + Cb [H+] - Kw = 0 for the
// net base Cb. Oxygen follows the classic coupled BOD decay / atmospheric
// reaeration pair, integrated exactly over each step (linear ODEs), so the
// step size never changes the trajectory.

namespace acwa {

struct ConstituentVector {
  double temperature = 20.0;     // [C]
  double ph = 7.0;
  double bod = 0.0;              // [mg/L]
  double dissolved_oxygen = 0.0; // [mg/L]
  double nitrate = 0.0;          // [mg/L]
  double naoh = 0.0;             // dosed NaOH [mg/L], conservative tracer

  friend bool operator==(const ConstituentVector&,
                         const ConstituentVector&) = default;
};

// Max absolute component difference; parcel coalescing keys off this.
inline double max_component_diff(const ConstituentVector& a,
                                 const ConstituentVector& b) {
  double m = std::fabs(a.temperature - b.temperature);
  m = std::fmax(m, std::fabs(a.ph - b.ph));
  m = std::fmax(m, std::fabs(a.bod - b.bod));
  m = std::fmax(m, std::fabs(a.dissolved_oxygen - b.dissolved_oxygen));
  m = std::fmax(m, std::fabs(a.nitrate - b.nitrate));
  m = std::fmax(m, std::fabs(a.naoh - b.naoh));
  return m;
}

// Volume-weighted blend of two parcels of water. Exact pass-through when the
// two vectors are bitwise equal (keeps long still stretches drift-free).
inline ConstituentVector mix(double volume_a, const ConstituentVector& a,
                             double volume_b, const ConstituentVector& b) {
  if (!(volume_a >= 0.0 && volume_b >= 0.0)) {
    throw DomainError("mix: volumes must be >= 0");
  }
  const double total = volume_a + volume_b;
  if (total <= 0.0) return a;
  if (a == b) return a;
  if (volume_a == 0.0) return b;
  if (volume_b == 0.0) return a;
  const double wa = volume_a / total;
  const double wb = volume_b / total;
  ConstituentVector out;
  out.temperature = wa * a.temperature + wb * b.temperature;
  out.ph = wa * a.ph + wb * b.ph;
  out.bod = wa * a.bod + wb * b.bod;
  out.dissolved_oxygen = wa * a.dissolved_oxygen + wb * b.dissolved_oxygen;
  out.nitrate = wa * a.nitrate + wb * b.nitrate;
  out.naoh = wa * a.naoh + wb * b.naoh;
  return out;
}

// Oxygen saturation of fresh water at 1 atm [mg/L], t in Celsius, 0..50.
// Benson & Krause fit on absolute temperature.
inline double do_saturation(double t) {
  if (!(t >= 0.0 && t <= 50.0)) {
    throw DomainError("do_saturation: temperature outside [0, 50] C");
  }
  const double T = t + 273.15;
  const double lnC = -139.34411 + 1.575701e5 / T - 6.642308e7 / (T * T) +
                     1.243800e10 / (T * T * T) -
                     8.621949e11 / (T * T * T * T);
  return std::exp(lnC);
}

// pH of a strong-base solution with net base concentration cb [mol/L]
// (negative = net strong acid). Charge balance [H+]^2 + cb [H+] - Kw = 0;
// the positive root is taken in a cancellation-safe form.
inline double ph_from_base(double cb) {
  double h;
  if (cb >= 0.0) {
    h = 2.0 * KW / (cb + std::sqrt(cb * cb + 4.0 * KW));
  } else {
    h = 0.5 * (-cb + std::sqrt(cb * cb + 4.0 * KW));
  }
  return -std::log10(h);
}

// Net strong-base concentration [mol/L] consistent with a given pH.
// Inverse of ph_from_base: cb = Kw/[H+] - [H+].
inline double base_from_ph(double ph) {
  if (!(ph > 0.0 && ph < 14.0)) {
    throw DomainError("base_from_ph: pH outside (0, 14)");
  }
  const double h = std::pow(10.0, -ph);
  return KW / h - h;
}

// First-order exponential decay over an interval. k in 1/day, dt in days.
inline double first_order_decay(double c, double k_per_day, double dt_days) {
  if (k_per_day == 0.0 || dt_days == 0.0 || c == 0.0) return c;
  return c * std::exp(-k_per_day * dt_days);
}

// Oxygen deficit after elapsed time h [days] for initial BOD l0 [mg/L] and
// initial deficit d0 [mg/L], decay rate kd and reaeration rate ka [1/day].
// Exact solution of the coupled linear pair; the kd == ka degenerate case
// takes the confluent (limit) form.
inline double oxygen_deficit(double l0, double d0, double kd, double ka,
                             double h_days) {
  if (ka == 0.0) {
    // No reaeration: deficit grows by exactly the BOD consumed.
    return d0 + l0 * (1.0 - std::exp(-kd * h_days));
  }
  const double decay = std::exp(-ka * h_days);
  if (std::fabs(ka - kd) < 1e-12) {
    return kd * l0 * h_days * std::exp(-ka * h_days) + d0 * decay;
  }
  return (kd * l0 / (ka - kd)) *
             (std::exp(-kd * h_days) - std::exp(-ka * h_days)) +
         d0 * decay;
}

// Kinetic/dosing parameters driving the per-step tank reactions.
struct ReactionParams {
  double bod_decay_rate = 0.0;      // kd [1/day]
  double reaeration_rate = 0.0;     // ka [1/day]
  double nitrate_bulk_rate = 0.0;   // kb [1/day], applied in transit
  double nitrate_wall_rate = 0.0;   // kw [m/day], applied in transit
  // Net background strong base [mol/L], fixed from the scenario's initial pH.
  double background_base = 0.0;
};

// Advance a tank's constituents by dt seconds of in-tank kinetics:
// BOD decays, the oxygen deficit relaxes per the exact coupled solution,
// and pH is re-derived from background base + dosed NaOH. Temperature and
// nitrate are conservative in tanks (nitrate kinetics act along pipes).
//
// With all rates zero and no NaOH present the input is returned untouched,
// bit for bit.
inline ConstituentVector react(const ConstituentVector& c,
                               const ReactionParams& p, double dt_seconds) {
  if (!(dt_seconds >= 0.0)) throw DomainError("react: dt must be >= 0");
  ConstituentVector out = c;
  const double h = dt_seconds / SECONDS_PER_DAY;
  const bool inert = p.bod_decay_rate == 0.0 && p.reaeration_rate == 0.0;
  if (!inert && h > 0.0) {
    const double sat = do_saturation(c.temperature);
    const double d0 = sat - c.dissolved_oxygen;
    const double d1 =
        oxygen_deficit(c.bod, d0, p.bod_decay_rate, p.reaeration_rate, h);
    out.bod = first_order_decay(c.bod, p.bod_decay_rate, h);
    out.dissolved_oxygen = std::fmax(0.0, sat - d1);
  }
  if (c.naoh != 0.0) {
    out.ph = ph_from_base(p.background_base + c.naoh / (NAOH_G_PER_MOL * 1000.0));
  }
  return out;
}

}  // namespace acwa
