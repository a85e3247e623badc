#pragma once

#include <cmath>
#include <deque>

#include "acwa/chemistry.hpp"
#include "acwa/constants.hpp"
#include "acwa/errors.hpp"
#include "acwa/fluid.hpp"
#include "acwa/hydraulics.hpp"

// Plug-flow transport through pipes.
//
// A full pipe is a FIFO queue of water parcels. Pushing V m^3 in at the
// upstream end pops exactly V m^3 out downstream (water is incompressible
// and the pipe stays full), so each delivered slug has a well-defined
// residence time: the moment it leaves minus the moment it entered. Quality
// transforms that act "along the pipe" (nitrate bulk+wall decay, wall heat
// exchange) are applied to each delivered slug using its own residence time
// before the slugs are blended into the receiving tank.

namespace acwa {

// Temperature of water leaving a pipe segment whose wall is held at
// t_surface, entering at t_in, with convective film coefficient h [W/m^2 K],
// diameter d, length l [m], and mass flow m_dot [kg/s]. Classic exponential
// approach: T_out = T_s + (T_in - T_s) exp(-h pi D L / (m_dot cp)).
// h == 0 or l == 0 means an adiabatic wall: returns t_in unchanged.
inline double outlet_temperature(double t_in, double t_surface, double h,
                                 double d, double l, double m_dot,
                                 double cp = WATER_CP) {
  if (!(h >= 0.0)) throw DomainError("outlet_temperature: h must be >= 0");
  if (h == 0.0 || l == 0.0) return t_in;
  if (!(m_dot > 0.0)) throw DomainError("outlet_temperature: m_dot must be > 0");
  if (!(cp > 0.0)) throw DomainError("outlet_temperature: cp must be > 0");
  const double ntu = h * PI * d * l / (m_dot * cp);
  return t_surface + (t_in - t_surface) * std::exp(-ntu);
}

// Transit-time quality transforms for one pipe.
struct TransitParams {
  double nitrate_bulk_rate = 0.0;  // kb [1/day]
  double nitrate_wall_rate = 0.0;  // kw [m/day]; effective rate kb + 4 kw / D
  double surface_temperature = 20.0;  // pipe wall temperature [C]
  double convective_coefficient = 0.0;  // h [W/m^2 K]; 0 = adiabatic
};

class PipeTransport {
 public:
  struct Parcel {
    double volume;      // [m^3]
    double entered_at;  // simulation clock when it entered the pipe [s]
    ConstituentVector water;
  };

  struct Delivered {
    double volume = 0.0;
    ConstituentVector water;  // blended over the delivered slugs
  };

  // A pipe starts full of the given water, resident since clock 0.
  PipeTransport(double diameter, double length, const ConstituentVector& fill)
      : diameter_(diameter),
        length_(length),
        volume_(pipe_area(diameter) * length) {
    if (!(length > 0.0)) throw DomainError("PipeTransport: length must be > 0");
    queue_.push_back(Parcel{volume_, 0.0, fill});
  }

  double volume() const { return volume_; }
  const std::deque<Parcel>& contents() const { return queue_; }

  // Push `inflow_volume` of `water` in at the upstream end (resident from
  // `entered_at`) and deliver the same volume downstream at `delivered_at`.
  // `flow` is the current volumetric rate, used for the thermal mass flow.
  //
  // Post: delivered.volume == inflow_volume; queued volume is unchanged.
  Delivered advance(double inflow_volume, const ConstituentVector& water,
                    double entered_at, double delivered_at, double flow,
                    const TransitParams& p) {
    if (!(inflow_volume >= 0.0)) {
      throw DomainError("PipeTransport::advance: inflow must be >= 0");
    }
    Delivered out;
    if (inflow_volume == 0.0) return out;
    if (inflow_volume > volume_ * (1.0 + 1e-9)) {
      // More than one pipe volume per step would skip slugs entirely;
      // the engine's time step contract prevents this.
      throw ContractViolation("PipeTransport::advance: step displaces more than one pipe volume");
    }
    // Coalescing identical water averages entry times, which is only
    // harmless while no transform depends on residence time.
    const double k_eff =
        p.nitrate_bulk_rate + 4.0 * p.nitrate_wall_rate / diameter_;
    const bool age_blind = k_eff == 0.0 && p.convective_coefficient <= 0.0;
    push(inflow_volume, water, entered_at, age_blind);

    double remaining = inflow_volume;
    while (remaining > 0.0 && !queue_.empty()) {
      Parcel& head = queue_.front();
      double take;
      if (head.volume <= remaining) {
        take = head.volume;
      } else {
        take = remaining;
      }
      ConstituentVector slug =
          transform(head.water, delivered_at - head.entered_at, flow, p);
      if (out.volume == 0.0) {
        out.water = slug;
        out.volume = take;
      } else {
        out.water = mix(out.volume, out.water, take, slug);
        out.volume += take;
      }
      if (head.volume <= remaining) {
        remaining -= head.volume;
        queue_.pop_front();
      } else {
        head.volume -= remaining;
        remaining = 0.0;
      }
    }
    // Exact by construction: we popped precisely what we pushed.
    out.volume = inflow_volume;
    return out;
  }

 private:
  void push(double volume, const ConstituentVector& water, double entered_at,
            bool allow_merge) {
    if (allow_merge && !queue_.empty()) {
      Parcel& tail = queue_.back();
      if (max_component_diff(tail.water, water) <= 1e-12) {
        // Coalesce: identical water, keep a volume-weighted entry time.
        const double total = tail.volume + volume;
        tail.entered_at =
            (tail.entered_at * tail.volume + entered_at * volume) / total;
        tail.volume = total;
        return;
      }
    }
    queue_.push_back(Parcel{volume, entered_at, water});
  }

  // Apply transit transforms to one slug that spent `tau` seconds in the pipe.
  ConstituentVector transform(const ConstituentVector& c, double tau,
                              double flow, const TransitParams& p) const {
    ConstituentVector out = c;
    const double k_eff =
        p.nitrate_bulk_rate + 4.0 * p.nitrate_wall_rate / diameter_;
    if (k_eff != 0.0 && tau > 0.0) {
      out.nitrate = first_order_decay(c.nitrate, k_eff, tau / SECONDS_PER_DAY);
    }
    if (p.convective_coefficient > 0.0 && flow > 0.0) {
      const double m_dot = water_density(c.temperature) * flow;
      out.temperature =
          outlet_temperature(c.temperature, p.surface_temperature,
                             p.convective_coefficient, diameter_, length_,
                             m_dot);
    }
    return out;
  }

  double diameter_;
  double length_;
  double volume_;
  std::deque<Parcel> queue_;
};

}  // namespace acwa
