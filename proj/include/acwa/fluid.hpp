#pragma once

#include <cmath>
#include <string>

#include "acwa/errors.hpp"

// Temperature-dependent water properties.
//
// Density follows Kell's 1975 correlation (liquid water at 1 atm), valid for
// 0..150 C. Kinematic viscosity follows the classic Poiseuille-style
// correlation ratio (temperature-corrected 20 C viscosity over a density
// polynomial), valid for 0..100 C. Both take Celsius and return SI.

namespace acwa {

namespace detail {
inline void require_range(double t, double lo, double hi, const char* what) {
  if (!(t >= lo && t <= hi)) {
    throw DomainError(std::string(what) + ": temperature " + std::to_string(t) +
                      " C outside [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
}
}  // namespace detail

// Density of air-free water at 1 atm [kg/m^3], t in Celsius, 0 <= t <= 150.
//
// Near-parabolic around the 3.983 C maximum (999.972 kg/m^3), strictly
// decreasing above it.
inline double water_density(double t) {
  detail::require_range(t, 0.0, 150.0, "water_density");
  const double num =
      999.83952 +
      t * (16.945176 +
           t * (-7.9870401e-3 +
                t * (-46.170461e-6 + t * (105.56302e-9 + t * -280.54253e-12))));
  const double den = 1.0 + 16.879850e-3 * t;
  return num / den;
}

// Kinematic viscosity of water [m^2/s], t in Celsius, 0 <= t <= 100.
//
// Numerator: dynamic viscosity [Pa s] referenced to 1.773e-3 at 0 C with a
// quadratic temperature correction. Denominator: a dedicated density
// polynomial (999.457 kg/m^3 reference). The denominator's density deviates
// from Kell by up to ~0.01%; it is part of the correlation and is kept
// verbatim so the kernel reproduces the published values exactly.
inline double kinematic_viscosity(double t) {
  detail::require_range(t, 0.0, 100.0, "kinematic_viscosity");
  const double mu = 1.773e-3 / (1.0 + t * (0.0337 + 0.00022 * t));
  const double rho =
      999.457 *
      (1.0 + t * (0.000052939 + t * (-0.0000065322 + t * 0.00000001445)));
  return mu / rho;
}

// Water properties bundle at a given temperature.
//
// Invariant: kinematic_viscosity == dynamic_viscosity / density exactly as
// evaluated (dynamic viscosity is derived as nu * rho, so the identity holds
// to the last bit up to one rounding).
struct FluidProperties {
  double temperature;          // [C]
  double density;              // [kg/m^3]
  double kinematic_viscosity;  // [m^2/s]
  double dynamic_viscosity;    // [Pa s]
};

// Evaluate the bundle at temperature t [C], 0 <= t <= 100.
inline FluidProperties fluid_at(double t) {
  detail::require_range(t, 0.0, 100.0, "fluid_at");
  const double rho = water_density(t);
  const double nu = kinematic_viscosity(t);
  return FluidProperties{t, rho, nu, nu * rho};
}

}  // namespace acwa
